// RAII wrapper over MPFR with per-value precision.
//
// Boost.Multiprecision's mpfr front end keys precision off process-global
// state (digits10), which conflicts with per-album precision choices and the
// concurrency contract (pure functions, no shared mutable state). The sweeps
// need only a handful of operations, so those are wrapped directly.
#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <utility>

#include "stickers/numeric.hpp"

namespace stickers {

class BigFloat {
 public:
  explicit BigFloat(long precision_bits) {
    if (precision_bits < MPFR_PREC_MIN || precision_bits > 1000000)
      throw std::invalid_argument("unusable BigFloat precision");
    mpfr_init2(value_, static_cast<mpfr_prec_t>(precision_bits));
    mpfr_set_zero(value_, 1);
  }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& other) noexcept {
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

  long precision_bits() const { return static_cast<long>(mpfr_get_prec(value_)); }

  static BigFloat from(const Rational& q, long precision_bits) {
    BigFloat x(precision_bits);
    x.set(q);
    return x;
  }
  static BigFloat from(const Integer& z, long precision_bits) {
    BigFloat x(precision_bits);
    x.set(z);
    return x;
  }

  void set(const Rational& q) { mpfr_set_q(value_, q.backend().data(), MPFR_RNDN); }
  void set(const Integer& z) { mpfr_set_z(value_, z.backend().data(), MPFR_RNDN); }
  void set(unsigned long v) { mpfr_set_ui(value_, v, MPFR_RNDN); }
  void set(double v) { mpfr_set_d(value_, v, MPFR_RNDN); }

  void add(const BigFloat& rhs) { mpfr_add(value_, value_, rhs.value_, MPFR_RNDN); }
  void sub(const BigFloat& rhs) { mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN); }
  void mul(const BigFloat& rhs) { mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN); }
  void div(const BigFloat& rhs) { mpfr_div(value_, value_, rhs.value_, MPFR_RNDN); }
  void mul(const Integer& z) { mpfr_mul_z(value_, value_, z.backend().data(), MPFR_RNDN); }
  void neg() { mpfr_neg(value_, value_, MPFR_RNDN); }

  // value <- value^e; mpfr defines 0^0 = 1, which is the convention we need.
  void pow(unsigned long e) { mpfr_pow_ui(value_, value_, e, MPFR_RNDN); }

  // value <- value + a*b with a single rounding.
  void fma(const BigFloat& a, const BigFloat& b) {
    mpfr_fma(value_, a.value_, b.value_, value_, MPFR_RNDN);
  }

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int compare(const BigFloat& rhs) const { return mpfr_cmp(value_, rhs.value_); }
  int compare(double rhs) const { return mpfr_cmp_d(value_, rhs); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  // Exact: any finite mpfr value is mantissa * 2^e.
  Rational to_rational() const {
    if (mpfr_number_p(value_) == 0) throw precision_error("non-finite big-float value");
    if (mpfr_zero_p(value_)) return Rational(0);
    Integer mantissa;
    mpfr_exp_t e = mpfr_get_z_2exp(mantissa.backend().data(), value_);
    if (e >= 0) return Rational(mantissa << static_cast<unsigned>(e));
    return Rational(mantissa, Integer(1) << static_cast<unsigned>(-e));
  }

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

 private:
  mpfr_t value_;
};

}  // namespace stickers
