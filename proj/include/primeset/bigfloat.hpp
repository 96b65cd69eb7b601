#pragma once

#include <mpfr.h>

#include <cstdio>
#include <string>
#include <utility>

namespace primeset {

/// Value-semantic owner of an mpfr_t. Precision is fixed at construction
/// and always passed explicitly.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = 53) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
  }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& other) noexcept {
    // Swapping with a freshly initialised minimal value keeps other valid.
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
  }

  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }

  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }

  ~BigFloat() { mpfr_clear(value_); }

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }

  /// Decimal rendering with enough digits to identify the binary value.
  std::string to_string(int digits = 0) const {
    if (digits <= 0) {
      digits = static_cast<int>(precision() * 0.30103) + 2;
    }
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*Rg", digits, value_);
    std::string out = raw ? raw : "";
    mpfr_free_str(raw);
    return out;
  }

  /// Short upward-rounded rendering, for error radii.
  std::string to_string_up(int digits = 3) const {
    if (mpfr_zero_p(value_)) return "0";
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*RUe", digits - 1, value_);
    std::string out = raw ? raw : "";
    mpfr_free_str(raw);
    return out;
  }

  friend bool bit_equal(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }

 private:
  mpfr_t value_;
};

}  // namespace primeset
