#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "primeset/bigfloat.hpp"
#include "primeset/codebook.hpp"
#include "primeset/error.hpp"
#include "primeset/exact_code.hpp"
#include "primeset/multiset.hpp"
#include "primeset/real_code.hpp"

namespace primeset {

/// Whether an epsilon is known to avoid the excluded set Z of log-ratios of
/// positive rationals.
enum class EpsilonSafety {
  certified_safe,   // a proof that the value is not in Z is on record
  in_excluded_set,  // the value is rational, hence in Z
  unknown,
};

inline const char* to_string(EpsilonSafety s) noexcept {
  switch (s) {
    case EpsilonSafety::certified_safe: return "certified-safe";
    case EpsilonSafety::in_excluded_set: return "in-excluded-set";
    case EpsilonSafety::unknown: return "unknown-safety";
  }
  return "unknown-safety";
}

/// The weight on the center term. Immutable once built.
class Epsilon {
 public:
  enum class Kind { sqrt2, rational, real };

  /// Writes the correctly rounded value into its argument at that
  /// argument's precision and returns the MPFR ternary value.
  using Evaluator = std::function<int(mpfr_ptr, mpfr_rnd_t)>;

  /// sqrt(2): irrational algebraic, so q^sqrt(2) is transcendental for every
  /// rational q other than 0 and 1 (Gelfond-Schneider) and never rational.
  static Epsilon sqrt2() {
    Epsilon e(Kind::sqrt2, "sqrt2", EpsilonSafety::certified_safe,
              "sqrt(2) is irrational algebraic; q^sqrt(2) is transcendental "
              "for rational q > 0, q != 1 (Gelfond-Schneider)");
    e.eval_ = [](mpfr_ptr out, mpfr_rnd_t rnd) {
      return mpfr_sqrt_ui(out, 2, rnd);
    };
    return e;
  }

  static Epsilon rational(const mpq_class& value) {
    mpq_class v = value;
    v.canonicalize();
    std::string label = v.get_den() == 1 ? v.get_num().get_str()
                                         : v.get_str();
    Epsilon e(Kind::rational, label, EpsilonSafety::in_excluded_set,
              "every rational a/b equals log_{2^b}(2^a)");
    e.rational_ = v;
    e.eval_ = [v](mpfr_ptr out, mpfr_rnd_t rnd) {
      return mpfr_set_q(out, v.get_mpq_t(), rnd);
    };
    return e;
  }

  static Epsilon rational(long a, long b) {
    if (b == 0) throw Error(ErrorKind::invalid_argument, "zero denominator");
    return rational(mpq_class(mpz_class(a), mpz_class(b)));
  }

  static Epsilon integer(long k) { return rational(k, 1); }

  /// sqrt(n); safe exactly when n is not a perfect square.
  static Epsilon sqrt_of(unsigned long n) {
    mpz_class root;
    mpz_class nz(n);
    mpz_sqrt(root.get_mpz_t(), nz.get_mpz_t());
    if (root * root == nz) return rational(mpq_class(root));
    if (n == 2) return sqrt2();
    Epsilon e(Kind::real, "sqrt(" + std::to_string(n) + ")",
              EpsilonSafety::certified_safe,
              "sqrt(n) for non-square n is irrational algebraic "
              "(Gelfond-Schneider)");
    e.eval_ = [n](mpfr_ptr out, mpfr_rnd_t rnd) {
      return mpfr_sqrt_ui(out, n, rnd);
    };
    return e;
  }

  static Epsilon pi() {
    return real("pi", [](mpfr_ptr out, mpfr_rnd_t rnd) {
      return mpfr_const_pi(out, rnd);
    });
  }

  static Epsilon euler_e() {
    return real("e", [](mpfr_ptr out, mpfr_rnd_t rnd) {
      BigFloat one(2);
      mpfr_set_ui(one.get(), 1, MPFR_RNDN);
      return mpfr_exp(out, one.get(), rnd);
    });
  }

  /// An arbitrary real. Without a supplied argument its safety is unknown.
  static Epsilon real(std::string label, Evaluator eval,
                      EpsilonSafety safety = EpsilonSafety::unknown,
                      std::string safety_argument = {}) {
    if (safety == EpsilonSafety::certified_safe && safety_argument.empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "a certified-safe epsilon needs a documented argument");
    }
    Epsilon e(Kind::real, std::move(label), safety, std::move(safety_argument));
    e.eval_ = std::move(eval);
    return e;
  }

  /// Accepts sqrt2, sqrt(n), pi, e, integers, a/b fractions and decimals.
  static Epsilon parse(std::string_view text) {
    std::string s(text);
    if (s == "sqrt2" || s == "sqrt(2)") return sqrt2();
    if (s == "pi") return pi();
    if (s == "e") return euler_e();
    if (s.size() > 6 && s.rfind("sqrt(", 0) == 0 && s.back() == ')') {
      std::string inner = s.substr(5, s.size() - 6);
      if (!inner.empty() &&
          inner.find_first_not_of("0123456789") == std::string::npos) {
        return sqrt_of(std::stoul(inner));
      }
    }
    if (auto q = parse_rational(s)) return rational(*q);
    throw ParseError(0, "cannot parse epsilon '" + s + "'");
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  EpsilonSafety safety() const noexcept { return safety_; }
  const std::string& safety_argument() const noexcept { return argument_; }
  const std::optional<mpq_class>& as_rational() const noexcept {
    return rational_;
  }

  RealCode evaluate(mpfr_prec_t p) const {
    detail::check_precision(p);
    RealCode out(p);
    int t = eval_(out.value.get(), MPFR_RNDN);
    detail::add_rounding(out.radius, out.value, t);
    return out;
  }

  static std::optional<mpq_class> parse_rational(const std::string& s) {
    auto is_int = [](const std::string& t) {
      std::size_t start = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      return t.size() > start &&
             t.find_first_not_of("0123456789", start) == std::string::npos;
    };
    auto strip_plus = [](std::string t) {
      if (!t.empty() && t[0] == '+') t.erase(0, 1);
      return t;
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      if (!is_int(num) || !is_int(den)) return std::nullopt;
      mpz_class d(strip_plus(den));
      if (d == 0) return std::nullopt;
      mpq_class q(mpz_class(strip_plus(num)), d);
      q.canonicalize();
      return q;
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
      if (frac.empty() ||
          frac.find_first_not_of("0123456789") != std::string::npos) {
        return std::nullopt;
      }
      if (whole.empty() || whole == "-" || whole == "+") whole += "0";
      if (!is_int(whole)) return std::nullopt;
      bool negative = whole[0] == '-';
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
      mpz_class digits(strip_plus(negative ? whole.substr(1) : whole) + frac);
      mpq_class q(negative ? mpz_class(-digits) : digits, scale);
      q.canonicalize();
      return q;
    }
    if (is_int(s)) return mpq_class(mpz_class(strip_plus(s)));
    return std::nullopt;
  }

 private:
  Epsilon(Kind kind, std::string label, EpsilonSafety safety,
          std::string argument)
      : kind_(kind),
        label_(std::move(label)),
        safety_(safety),
        argument_(std::move(argument)) {}

  Kind kind_;
  std::string label_;
  EpsilonSafety safety_;
  std::string argument_;
  std::optional<mpq_class> rational_;
  Evaluator eval_;
};

/// Code of a (center, multiset) pair: the exact symbolic parts plus the real
/// value eps * ln beta(c) + sum m(x) ln beta(x).
struct PairCode {
  std::uint64_t center_prime = 0;
  ExactCode multiset_code;
  RealCode real_value;
  std::string eps_label;
};

inline PairCode encode_pair(const PrimeCodebook& cb, const Epsilon& eps,
                            ElementId center, const Multiset& x,
                            mpfr_prec_t p = kDefaultPrecision,
                            std::size_t bit_cap = kDefaultBitCap) {
  detail::check_precision(p);
  PairCode out;
  out.center_prime = cb.beta(center);
  out.multiset_code = encode_exact(cb, x, bit_cap);
  out.eps_label = eps.label();

  const RealCode e = eps.evaluate(p);
  const RealCode log_c = f_log(cb, center, p);
  RealCode weighted(p);
  int t = mpfr_mul(weighted.value.get(), e.value.get(), log_c.value.get(),
                   MPFR_RNDN);
  // |e~ l~ - e l| <= |e~| r_l + (|l~| + r_l) r_e
  BigFloat term = detail::abs_up(e.value);
  mpfr_mul(term.get(), term.get(), log_c.radius.get(), MPFR_RNDU);
  BigFloat log_bound = detail::radius_sum(detail::abs_up(log_c.value),
                                          log_c.radius);
  mpfr_mul(log_bound.get(), log_bound.get(), e.radius.get(), MPFR_RNDU);
  weighted.radius = detail::radius_sum(term, log_bound);
  detail::add_rounding(weighted.radius, weighted.value, t);

  out.real_value = add(weighted, aggregate(cb, x, p));
  return out;
}

/// Outcome of a pair comparison and whether the symbolic parts decided it.
struct PairComparison {
  Certainty verdict;
  bool decided_symbolically;
};

inline PairComparison certified_pair_distinct(const PairCode& a,
                                              const PairCode& b) {
  if (a.eps_label != b.eps_label) {
    throw Error(ErrorKind::mixed_epsilon,
                "pair codes built with epsilon " + a.eps_label + " and " +
                    b.eps_label);
  }
  const bool same_symbols =
      a.center_prime == b.center_prime && a.multiset_code == b.multiset_code;
  if (same_symbols) return {Certainty::identical_representation, true};
  if (certified_distinct(a.real_value, b.real_value) == Certainty::distinct) {
    return {Certainty::distinct, false};
  }
  return {Certainty::distinct, true};
}

/// Rationals p, q (q != 1) with log_q(p) equal to a given rational epsilon.
struct ZWitness {
  mpq_class p;
  mpq_class q;
  mpz_class numerator;    // a
  mpz_class denominator;  // b >= 1

  /// p^b and q^a as exact rationals.
  std::pair<mpq_class, mpq_class> identity_sides() const;

  bool verify() const {
    if (q == 1 || p <= 0 || q <= 0 || denominator < 1) return false;
    auto [lhs, rhs] = identity_sides();
    return lhs == rhs;
  }
};

namespace detail {

inline mpq_class pow_q(const mpq_class& base, const mpz_class& exponent) {
  if (!exponent.fits_slong_p()) {
    throw Error(ErrorKind::resource_limit, "exponent out of range");
  }
  const long e = exponent.get_si();
  const unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), mag);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), mag);
  mpq_class out = e < 0 ? mpq_class(den, num) : mpq_class(num, den);
  out.canonicalize();
  return out;
}

inline mpq_class pow2_q(const mpz_class& exponent) {
  return pow_q(mpq_class(2), exponent);
}

}  // namespace detail

inline std::pair<mpq_class, mpq_class> ZWitness::identity_sides() const {
  return {detail::pow_q(p, denominator), detail::pow_q(q, numerator)};
}

/// Witness that a/b lies in Z: (p, q) = (2^a, 2^b), checked by p^b = q^a.
inline ZWitness rational_eps_z_witness(const mpq_class& eps) {
  mpq_class v = eps;
  v.canonicalize();
  ZWitness w{detail::pow2_q(v.get_num()), detail::pow2_q(v.get_den()),
             v.get_num(), v.get_den()};
  if (!w.verify()) {
    throw Error(ErrorKind::invariant_violation,
                "Z-witness identity failed for " + v.get_str());
  }
  return w;
}

inline ZWitness rational_eps_z_witness(long a, long b) {
  if (b < 1) {
    throw Error(ErrorKind::invalid_argument, "denominator must be positive");
  }
  return rational_eps_z_witness(mpq_class(mpz_class(a), mpz_class(b)));
}

/// Two distinct (center, multiset) pairs whose weighted codes coincide
/// exactly at an integer epsilon k.
struct IntegerEpsCollision {
  long k;
  ElementId center1;
  Multiset multiset1;
  ElementId center2;
  Multiset multiset2;
  mpq_class side1;  // beta(c1)^k * encode(X1)
  mpq_class side2;  // beta(c2)^k * encode(X2)
};

inline IntegerEpsCollision construct_integer_eps_collision(
    const PrimeCodebook& cb, long k, std::size_t bit_cap = kDefaultBitCap) {
  if (k == 0) {
    throw Error(ErrorKind::invalid_argument,
                "epsilon 0 ignores the center; any two centers collide");
  }
  if (cb.size() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "collision construction needs two assigned symbols");
  }
  const ElementId c1{0}, c2{1};
  const Multiplicity mag =
      static_cast<Multiplicity>(k < 0 ? -static_cast<long long>(k) : k);
  IntegerEpsCollision out{k, c1, {}, c2, {}, 0, 0};
  if (k > 0) {
    out.multiset1.add(c2, mag);
    out.multiset2.add(c1, mag);
  } else {
    out.multiset1.add(c1, mag);
    out.multiset2.add(c2, mag);
  }
  const mpz_class kz(k);
  out.side1 = detail::pow_q(mpq_class(mpz_class(static_cast<unsigned long>(
                                cb.beta(c1)))),
                            kz) *
              mpq_class(encode_exact(cb, out.multiset1, bit_cap).value());
  out.side2 = detail::pow_q(mpq_class(mpz_class(static_cast<unsigned long>(
                                cb.beta(c2)))),
                            kz) *
              mpq_class(encode_exact(cb, out.multiset2, bit_cap).value());
  if (out.side1 != out.side2) {
    throw Error(ErrorKind::invariant_violation,
                "constructed pairs do not collide at epsilon " +
                    std::to_string(k));
  }
  return out;
}

}  // namespace primeset
