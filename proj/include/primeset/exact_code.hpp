#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primeset/codebook.hpp"
#include "primeset/error.hpp"
#include "primeset/multiset.hpp"

namespace primeset {

inline constexpr std::size_t kDefaultBitCap = 1'000'000;

/// The exact encoding prod beta(x)^m(x). Always >= 1; 1 encodes the empty
/// multiset.
class ExactCode {
 public:
  ExactCode() : value_(1) {}

  explicit ExactCode(mpz_class value) : value_(std::move(value)) {
    if (value_ < 1) {
      throw Error(ErrorKind::invalid_argument, "exact code must be >= 1");
    }
  }

  const mpz_class& value() const noexcept { return value_; }

  std::size_t bit_length() const {
    return mpz_sizeinbase(value_.get_mpz_t(), 2);
  }

  /// Lowercase hex, most significant digit first, no leading zeros.
  std::string to_hex() const { return value_.get_str(16); }

  static ExactCode from_hex(std::string_view hex) {
    if (hex.empty()) throw ParseError(0, "empty hex code");
    if (hex.front() == '0') {
      throw ParseError(0, "hex code has leading zeros or is zero");
    }
    for (char c : hex) {
      if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
        throw ParseError(0, "invalid hex digit '" + std::string(1, c) + "'");
      }
    }
    return ExactCode(mpz_class(std::string(hex), 16));
  }

  friend bool operator==(const ExactCode& a, const ExactCode& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExactCode& a, const ExactCode& b) {
    return a.value_ < b.value_;
  }

 private:
  mpz_class value_;
};

namespace detail {

inline void check_bit_cap(std::size_t bits, std::size_t cap) {
  if (bits > cap) {
    throw Error(ErrorKind::resource_limit,
                "exact code needs " + std::to_string(bits) +
                    " bits, over the cap of " + std::to_string(cap));
  }
}

inline std::size_t bit_length_u64(std::uint64_t v) {
  std::size_t n = 0;
  while (v != 0) {
    ++n;
    v >>= 1;
  }
  return n;
}

/// Multiplies the factors pairwise, level by level, so operands stay
/// balanced in size.
inline mpz_class product_tree(std::vector<mpz_class> factors) {
  if (factors.empty()) return 1;
  while (factors.size() > 1) {
    std::size_t half = 0;
    for (std::size_t i = 0; i + 1 < factors.size(); i += 2) {
      factors[half++] = factors[i] * factors[i + 1];
    }
    if (factors.size() % 2 == 1) factors[half++] = std::move(factors.back());
    factors.resize(half);
  }
  return std::move(factors.front());
}

}  // namespace detail

inline ExactCode encode_exact(const PrimeCodebook& cb, const Multiset& x,
                              std::size_t bit_cap = kDefaultBitCap) {
  // floor(log2 p) <= log2 p, so this sum never exceeds the true bit length.
  std::size_t lower_bits = 0;
  std::vector<std::pair<std::uint64_t, Multiplicity>> terms;
  terms.reserve(x.support_size());
  for (const auto& [id, k] : x) {
    const std::uint64_t p = cb.beta(id);
    const std::size_t floor_log2 = detail::bit_length_u64(p) - 1;
    if (floor_log2 != 0 && k > bit_cap / floor_log2) {
      detail::check_bit_cap(bit_cap + 1, bit_cap);
    }
    lower_bits += floor_log2 * k;
    detail::check_bit_cap(lower_bits, bit_cap);
    terms.emplace_back(p, k);
  }

  std::vector<mpz_class> powers;
  powers.reserve(terms.size());
  for (const auto& [p, k] : terms) {
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), p, k);
    powers.push_back(std::move(power));
  }
  ExactCode code(detail::product_tree(std::move(powers)));
  detail::check_bit_cap(code.bit_length(), bit_cap);
  return code;
}

/// Inverts encode_exact by trial division over the codebook's primes.
inline Multiset decode_exact(const PrimeCodebook& cb, const ExactCode& code) {
  Multiset out;
  mpz_class residual = code.value();
  const auto primes = cb.primes();
  for (std::size_t i = 0; i < primes.size() && residual != 1; ++i) {
    const std::uint64_t p = primes[i];
    // Every prime below p is assigned and already divided out, so a residual
    // below p^2 has no composite structure left.
    mpz_class p_sq = mpz_class(static_cast<unsigned long>(p)) * p;
    if (residual < p_sq) {
      if (residual.fits_ulong_p()) {
        auto inv = cb.beta_inverse(residual.get_ui());
        if (inv.assigned()) {
          out.add(inv.id, 1);
          residual = 1;
        }
      }
      break;
    }
    mpz_class prime(static_cast<unsigned long>(p));
    const mp_bitcnt_t k =
        mpz_remove(residual.get_mpz_t(), residual.get_mpz_t(), prime.get_mpz_t());
    if (k != 0) out.add(ElementId{static_cast<std::uint32_t>(i)}, k);
  }
  if (residual != 1) {
    throw Error(ErrorKind::unknown_factor,
                "code has a factor outside the codebook: residual " +
                    residual.get_str(10));
  }
  return out;
}

inline ExactCode multiply_codes(const ExactCode& a, const ExactCode& b,
                                std::size_t bit_cap = kDefaultBitCap) {
  // bit_length(a*b) is either la+lb-1 or la+lb.
  if (a.bit_length() + b.bit_length() - 1 > bit_cap) {
    detail::check_bit_cap(a.bit_length() + b.bit_length() - 1, bit_cap);
  }
  ExactCode product(a.value() * b.value());
  detail::check_bit_cap(product.bit_length(), bit_cap);
  return product;
}

/// A realization of phi with g = phi o encode_exact: a table from exact codes
/// back to the labels of the multisets they encode.
template <class Label>
class PhiTable {
 public:
  PhiTable(const PrimeCodebook& cb,
           const std::vector<std::pair<Multiset, Label>>& pairs,
           std::size_t bit_cap = kDefaultBitCap) {
    for (const auto& [x, label] : pairs) {
      ExactCode code = encode_exact(cb, x, bit_cap);
      auto [it, inserted] = table_.try_emplace(std::move(code), x, label);
      if (!inserted) {
        if (it->second.first == x) {
          throw Error(ErrorKind::invalid_argument,
                      "multiset listed twice in the label table");
        }
        throw Error(ErrorKind::invariant_violation,
                    "distinct multisets share exact code " +
                        it->first.to_hex());
      }
    }
  }

  const Label& apply(const ExactCode& code) const {
    auto it = table_.find(code);
    if (it == table_.end()) {
      throw Error(ErrorKind::unknown_code,
                  "code " + code.to_hex() + " is not in the table");
    }
    return it->second.second;
  }

  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<ExactCode, std::pair<Multiset, Label>> table_;
};

template <class Label>
PhiTable<Label> compose_phi(const PrimeCodebook& cb,
                            const std::vector<std::pair<Multiset, Label>>& pairs,
                            std::size_t bit_cap = kDefaultBitCap) {
  return PhiTable<Label>(cb, pairs, bit_cap);
}

template <class Label>
const Label& apply_phi(const PhiTable<Label>& table, const ExactCode& code) {
  return table.apply(code);
}

}  // namespace primeset
