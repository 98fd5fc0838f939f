#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace zetadyn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace mp {

/// Arbitrary-precision real backed by MPFR. Every value carries its own
/// precision; binary operations produce results at the wider of the two.
/// All roundings are to nearest, so identical inputs give identical bits.
class Real {
 public:
  Real() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(const std::string& s, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw Error("Real: unparsable decimal string: " + s);
  }

  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Decimal serialization. digits == 0 emits enough digits for an exact
  /// read-back round trip at this precision.
  std::string str(std::size_t digits = 0) const;

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator+=(long x) { mpfr_add_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator-=(long x) { mpfr_sub_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator*=(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator/=(long x) { mpfr_div_si(v_, v_, x, MPFR_RNDN); return *this; }

  Real operator-() const { Real r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  friend Real operator+(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, long b) { Real r(a.prec()); mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, long b) { Real r(a.prec()); mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, long b) { Real r(a.prec()); mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, long b) { Real r(a.prec()); mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator-(long a, const Real& b) { Real r(b.prec()); mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(long a, const Real& b) { Real r(b.prec()); mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

  static mpfr_prec_t wider(const Real& a, const Real& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
  }

 private:
  mpfr_t v_;
};

inline Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sqrt(const Real& a) { Real r(a.prec()); mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real log10(const Real& a) { Real r(a.prec()); mpfr_log10(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sin(const Real& a) { Real r(a.prec()); mpfr_sin(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real cos(const Real& a) { Real r(a.prec()); mpfr_cos(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sinh(const Real& a) { Real r(a.prec()); mpfr_sinh(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real cosh(const Real& a) { Real r(a.prec()); mpfr_cosh(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real atan2(const Real& y, const Real& x) {
  Real r(Real::wider(y, x)); mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN); return r;
}
inline Real hypot(const Real& x, const Real& y) {
  Real r(Real::wider(y, x)); mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN); return r;
}
inline Real pow_si(const Real& a, long e) { Real r(a.prec()); mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN); return r; }
inline Real pow(const Real& a, const Real& b) {
  Real r(Real::wider(a, b)); mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r;
}
inline Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.raw(), a.raw()); return r; }
inline Real round(const Real& a) { Real r(a.prec()); mpfr_round(r.raw(), a.raw()); return r; }

inline Real pi(mpfr_prec_t prec) { Real r(prec); mpfr_const_pi(r.raw(), MPFR_RNDN); return r; }
inline Real euler_gamma(mpfr_prec_t prec) { Real r(prec); mpfr_const_euler(r.raw(), MPFR_RNDN); return r; }
/// 10^e at the given precision.
inline Real pow10(long e, mpfr_prec_t prec) {
  Real r(prec); mpfr_ui_pow_ui(r.raw(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
  if (e < 0) mpfr_si_div(r.raw(), 1, r.raw(), MPFR_RNDN);
  return r;
}
inline bool identical(const Real& a, const Real& b) {
  if (a.is_nan() || b.is_nan()) return a.is_nan() && b.is_nan();
  return a.prec() == b.prec() && mpfr_equal_p(a.raw(), b.raw()) != 0;
}

/// Complex number over Real. Functions needed by the zeta machinery only.
class Complex {
 public:
  Complex() = default;
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(double re, double im, mpfr_prec_t prec) : re_(re, prec), im_(im, prec) {}
  explicit Complex(mpfr_prec_t prec) : re_(prec), im_(prec) {}

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }
  mpfr_prec_t prec() const { return Real::wider(re_, im_); }

  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  Complex operator-() const { return {-re_, -im_}; }
  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend Complex operator*(const Complex& a, const Real& b) { return {a.re_ * b, a.im_ * b}; }
  friend Complex operator*(const Real& b, const Complex& a) { return a * b; }
  friend Complex operator/(const Complex& a, const Real& b) { return {a.re_ / b, a.im_ / b}; }
  friend Complex operator/(const Complex& a, long b) { return {a.re_ / b, a.im_ / b}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d};
  }
  Complex& operator+=(const Complex& o) { re_ += o.re_; im_ += o.im_; return *this; }
  Complex& operator-=(const Complex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
  Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

 private:
  Real re_, im_;
};

inline Complex conj(const Complex& z) { return {z.re(), -z.im()}; }
inline Real abs(const Complex& z) { return hypot(z.re(), z.im()); }
inline Real arg(const Complex& z) { return atan2(z.im(), z.re()); }
inline Complex exp(const Complex& z) {
  Real m = exp(z.re());
  return {m * cos(z.im()), m * sin(z.im())};
}
inline Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }
inline Complex sin(const Complex& z) {
  return {sin(z.re()) * cosh(z.im()), cos(z.re()) * sinh(z.im())};
}
/// z^e for small non-negative integer exponents, by repeated squaring.
Complex pow_ui(const Complex& z, unsigned long e);

}  // namespace mp

/// Governs every arbitrary-precision computation: `digits` of target decimal
/// precision plus `guard` extra digits carried internally. The residual
/// tolerance 10^-(digits-10) is the "numerically zero" threshold.
struct PrecisionContext {
  long digits = 50;
  long guard = 30;

  static PrecisionContext make(long digits, long guard = 30) {
    if (digits < 30) throw std::invalid_argument("PrecisionContext: digits must be >= 30");
    if (guard < 10) throw std::invalid_argument("PrecisionContext: guard must be >= 10");
    return PrecisionContext{digits, guard};
  }
  PrecisionContext with_digits(long d) const { return make(d, guard); }

  long tol_exp10() const { return -(digits - 10); }
  mpfr_prec_t prec() const {
    return static_cast<mpfr_prec_t>((digits + guard) * 3.3219280948873623 + 16);
  }
  mp::Real residual_tol() const { return mp::pow10(tol_exp10(), 64); }
  mp::Real real(double x) const { return mp::Real(x, prec()); }
  mp::Complex complex(double re, double im) const { return mp::Complex(re, im, prec()); }
};

}  // namespace zetadyn
