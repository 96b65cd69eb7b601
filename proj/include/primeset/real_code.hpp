#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "primeset/bigfloat.hpp"
#include "primeset/codebook.hpp"
#include "primeset/error.hpp"
#include "primeset/multiset.hpp"

namespace primeset {

inline constexpr mpfr_prec_t kMinPrecision = 24;
inline constexpr mpfr_prec_t kDefaultPrecision = 53;
inline constexpr mpfr_prec_t kMaxPrecision = 4096;
inline constexpr mpfr_prec_t kRadiusPrecision = 64;

/// A real approximation together with a sound bound on its error: the exact
/// quantity lies in [value - radius, value + radius].
struct RealCode {
  BigFloat value;
  BigFloat radius;

  explicit RealCode(mpfr_prec_t precision = kDefaultPrecision)
      : value(precision), radius(kRadiusPrecision) {}

  mpfr_prec_t precision() const noexcept { return value.precision(); }
};

enum class Certainty { distinct, equal_uncertain, identical_representation };

inline const char* to_string(Certainty c) noexcept {
  switch (c) {
    case Certainty::distinct: return "distinct";
    case Certainty::equal_uncertain: return "equal-uncertain";
    case Certainty::identical_representation: return "identical-representation";
  }
  return "unknown";
}

namespace detail {

inline void check_precision(mpfr_prec_t p) {
  if (p < kMinPrecision || p > MPFR_PREC_MAX) {
    throw Error(ErrorKind::invalid_argument,
                "precision must be at least " + std::to_string(kMinPrecision) +
                    " bits, got " + std::to_string(p));
  }
}

/// If ternary reports an inexact result, adds half an ulp of v to radius.
/// Round-to-nearest results are within that distance of the exact value.
inline void add_rounding(BigFloat& radius, const BigFloat& v, int ternary) {
  if (ternary == 0 || mpfr_zero_p(v.get())) return;
  BigFloat half_ulp(kRadiusPrecision);
  mpfr_set_ui_2exp(half_ulp.get(), 1,
                   mpfr_get_exp(v.get()) - v.precision() - 1, MPFR_RNDU);
  mpfr_add(radius.get(), radius.get(), half_ulp.get(), MPFR_RNDU);
}

/// |v| rounded up to radius precision.
inline BigFloat abs_up(const BigFloat& v) {
  BigFloat out(kRadiusPrecision);
  mpfr_abs(out.get(), v.get(), MPFR_RNDU);
  return out;
}

inline BigFloat radius_sum(const BigFloat& a, const BigFloat& b) {
  BigFloat out(kRadiusPrecision);
  mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDU);
  return out;
}

/// Lower bound on |a - b|.
inline BigFloat abs_diff_down(const BigFloat& a, const BigFloat& b) {
  BigFloat out(std::max(a.precision(), b.precision()) + 2);
  mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDZ);
  mpfr_abs(out.get(), out.get(), MPFR_RNDZ);
  return out;
}

/// Correctly rounded natural log of a prime.
inline RealCode log_of_prime(std::uint64_t prime, mpfr_prec_t p) {
  RealCode out(p);
  BigFloat exact(64);
  mpfr_set_ui(exact.get(), prime, MPFR_RNDN);
  int t = mpfr_log(out.value.get(), exact.get(), MPFR_RNDN);
  add_rounding(out.radius, out.value, t);
  return out;
}

}  // namespace detail

/// f(x) = ln beta(x) at p bits, within half an ulp.
inline RealCode f_log(const PrimeCodebook& cb, ElementId x,
                      mpfr_prec_t p = kDefaultPrecision) {
  detail::check_precision(p);
  return detail::log_of_prime(cb.beta(x), p);
}

/// h(X) = sum m(x) ln beta(x). Every rounding step adds its worst-case error
/// to the radius.
inline RealCode aggregate(const PrimeCodebook& cb, const Multiset& x,
                          mpfr_prec_t p = kDefaultPrecision) {
  detail::check_precision(p);
  RealCode sum(p);
  BigFloat term(p);
  BigFloat scaled_err(kRadiusPrecision);
  for (const auto& [id, k] : x) {
    RealCode log = detail::log_of_prime(cb.beta(id), p);
    int t = mpfr_mul_ui(term.get(), log.value.get(), k, MPFR_RNDN);
    mpfr_mul_ui(scaled_err.get(), log.radius.get(), k, MPFR_RNDU);
    mpfr_add(sum.radius.get(), sum.radius.get(), scaled_err.get(), MPFR_RNDU);
    detail::add_rounding(sum.radius, term, t);
    t = mpfr_add(sum.value.get(), sum.value.get(), term.get(), MPFR_RNDN);
    detail::add_rounding(sum.radius, sum.value, t);
  }
  return sum;
}

/// Sum of two codes at the larger of their precisions.
inline RealCode add(const RealCode& a, const RealCode& b) {
  RealCode out(std::max(a.precision(), b.precision()));
  int t = mpfr_add(out.value.get(), a.value.get(), b.value.get(), MPFR_RNDN);
  out.radius = detail::radius_sum(a.radius, b.radius);
  detail::add_rounding(out.radius, out.value, t);
  return out;
}

inline Certainty certified_distinct(const RealCode& a, const RealCode& b) {
  if (bit_equal(a.value, b.value) && a.radius.is_zero() && b.radius.is_zero()) {
    return Certainty::identical_representation;
  }
  BigFloat gap = detail::abs_diff_down(a.value, b.value);
  BigFloat slack = detail::radius_sum(a.radius, b.radius);
  return mpfr_greater_p(gap.get(), slack.get()) ? Certainty::distinct
                                                : Certainty::equal_uncertain;
}

/// Closest pair of log-sum codes over an enumeration, with the precision at
/// which every adjacent gap was certified positive.
struct MinGap {
  RealCode gap;
  Multiset first;
  Multiset second;
  mpfr_prec_t precision;
};

/// Stars and bars: number of multisets over n symbols with size <= s.
inline std::uint64_t multiset_count(std::uint64_t n, std::uint64_t s) {
  if (n == 0) return 1;
  // sum_{t<=s} C(n+t-1, t) = C(n+s, s)
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= s; ++i) {
    c = c * (n + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(c);
}

inline constexpr std::uint64_t kMaxGapEnumeration = 5'000'000;

inline MinGap min_gap(const PrimeCodebook& cb, std::uint32_t alphabet_size,
                      Multiplicity max_size, mpfr_prec_t p = kDefaultPrecision,
                      mpfr_prec_t precision_cap = kMaxPrecision) {
  detail::check_precision(p);
  const std::uint64_t count = multiset_count(alphabet_size, max_size);
  if (count > kMaxGapEnumeration) {
    throw Error(ErrorKind::resource_limit,
                "min-gap enumeration of " + std::to_string(count) +
                    " multisets exceeds " + std::to_string(kMaxGapEnumeration));
  }
  if (count < 2) {
    throw Error(ErrorKind::invalid_argument,
                "min-gap needs at least two multisets");
  }
  const auto sets = enumerate_multisets(alphabet_size, max_size);

  for (mpfr_prec_t prec = p;; prec = std::min(prec * 2, precision_cap)) {
    std::vector<RealCode> codes;
    codes.reserve(sets.size());
    for (const auto& x : sets) codes.push_back(aggregate(cb, x, prec));

    std::vector<std::size_t> order(sets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return mpfr_less_p(codes[i].value.get(), codes[j].value.get()) != 0;
    });

    // Certified-disjoint neighbours fix the true order, so the true minimum
    // is attained by some adjacent pair.
    bool certified = true;
    std::size_t best = 0;
    RealCode best_gap(prec);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const RealCode& lo = codes[order[k]];
      const RealCode& hi = codes[order[k + 1]];
      if (certified_distinct(lo, hi) != Certainty::distinct) {
        certified = false;
        break;
      }
      RealCode gap(prec);
      int t = mpfr_sub(gap.value.get(), hi.value.get(), lo.value.get(),
                       MPFR_RNDN);
      gap.radius = detail::radius_sum(lo.radius, hi.radius);
      detail::add_rounding(gap.radius, gap.value, t);
      if (k == 0 || mpfr_less_p(gap.value.get(), best_gap.value.get())) {
        best = k;
        best_gap = std::move(gap);
      }
    }
    if (certified) {
      return MinGap{std::move(best_gap), sets[order[best]],
                    sets[order[best + 1]], prec};
    }
    if (prec >= precision_cap) {
      throw Error(ErrorKind::precision_escalation,
                  "could not certify min-gap ordering at " +
                      std::to_string(prec) + " bits");
    }
  }
}

}  // namespace primeset
