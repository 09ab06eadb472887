#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>

#include "frob/rational.hpp"

namespace frob {

using Bits = mpfr_prec_t;

/// Precision used when nothing else has been decided (roughly 19 digits).
inline constexpr Bits kDefaultBits = 64;

/// Multi-precision binary floating-point real, round-to-nearest throughout.
///
/// Each value carries its own precision. A binary operation produces a
/// result at the larger of the operand precisions; operations with plain
/// integers keep the precision of the multi-precision operand.
class ArbReal {
 public:
  explicit ArbReal(Bits bits = kDefaultBits);
  ArbReal(long value, Bits bits);
  ArbReal(const Rational& value, Bits bits);
  ArbReal(double value, Bits bits);

  ArbReal(const ArbReal& other);
  ArbReal(ArbReal&& other) noexcept;
  ArbReal& operator=(const ArbReal& other);
  ArbReal& operator=(ArbReal&& other) noexcept;
  ~ArbReal();

  /// Strict decimal parse: optional sign, digits, optional fraction, optional
  /// exponent. Rejects trailing garbage and values that overflow or underflow.
  static ArbReal parse(std::string_view text, Bits bits);

  Bits precision() const { return mpfr_get_prec(v_); }
  /// Same value rounded to a different precision.
  ArbReal with_precision(Bits bits) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log10|x| without overflow for huge exponents; -inf for zero.
  double log10_abs() const;

  /// Scientific notation with `digits` significant digits ("-1.2345e-7").
  std::string to_string(int digits) const;
  /// Enough digits that parse(to_string_exact(), precision()) restores the value.
  std::string to_string_roundtrip() const;

  ArbReal operator-() const;
  ArbReal& operator+=(const ArbReal& o);
  ArbReal& operator-=(const ArbReal& o);
  ArbReal& operator*=(const ArbReal& o);
  ArbReal& operator/=(const ArbReal& o);
  ArbReal& operator+=(long o);
  ArbReal& operator-=(long o);
  ArbReal& operator*=(long o);
  ArbReal& operator/=(long o);

  friend ArbReal operator+(const ArbReal& a, const ArbReal& b);
  friend ArbReal operator-(const ArbReal& a, const ArbReal& b);
  friend ArbReal operator*(const ArbReal& a, const ArbReal& b);
  friend ArbReal operator/(const ArbReal& a, const ArbReal& b);
  friend ArbReal operator+(ArbReal a, long b) { return a += b; }
  friend ArbReal operator-(ArbReal a, long b) { return a -= b; }
  friend ArbReal operator*(ArbReal a, long b) { return a *= b; }
  friend ArbReal operator/(ArbReal a, long b) { return a /= b; }
  friend ArbReal operator*(long a, ArbReal b) { return b *= a; }

  friend bool operator<(const ArbReal& a, const ArbReal& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const ArbReal& a, const ArbReal& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const ArbReal& a, const ArbReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const ArbReal& a, const ArbReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const ArbReal& a, const ArbReal& b) { return mpfr_equal_p(a.v_, b.v_); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

ArbReal abs(const ArbReal& x);
ArbReal sqrt(const ArbReal& x);
ArbReal log(const ArbReal& x);
ArbReal exp(const ArbReal& x);
ArbReal hypot(const ArbReal& x, const ArbReal& y);
ArbReal atan2(const ArbReal& y, const ArbReal& x);
ArbReal pi(Bits bits);
/// 10^e at the given precision.
ArbReal pow10(long e, Bits bits);
/// Exact conversion of a binary float to a rational.
Rational to_rational(const ArbReal& x);

/// Complex number over ArbReal; both parts share one precision.
class ArbComplex {
 public:
  explicit ArbComplex(Bits bits = kDefaultBits) : re_(bits), im_(bits) {}
  ArbComplex(long re, Bits bits) : re_(re, bits), im_(0L, bits) {}
  ArbComplex(const ArbReal& re);  // NOLINT(google-explicit-constructor)
  ArbComplex(const ArbReal& re, const ArbReal& im);
  ArbComplex(const QComplex& z, Bits bits) : re_(z.re(), bits), im_(z.im(), bits) {}

  /// Parses "re" or "re,im" as decimal strings.
  static ArbComplex parse(std::string_view text, Bits bits);

  const ArbReal& re() const { return re_; }
  const ArbReal& im() const { return im_; }
  Bits precision() const { return re_.precision(); }
  ArbComplex with_precision(Bits bits) const;

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  ArbComplex conj() const { return {re_, -im_}; }
  ArbReal norm() const { return re_ * re_ + im_ * im_; }
  ArbReal abs() const { return hypot(re_, im_); }
  double log10_abs() const;

  ArbComplex operator-() const { return {-re_, -im_}; }
  ArbComplex& operator+=(const ArbComplex& o);
  ArbComplex& operator-=(const ArbComplex& o);
  ArbComplex& operator*=(const ArbComplex& o);
  ArbComplex& operator/=(const ArbComplex& o);
  ArbComplex& operator*=(const ArbReal& o);
  ArbComplex& operator+=(long o);
  ArbComplex& operator-=(long o);
  ArbComplex& operator*=(long o);
  ArbComplex& operator/=(long o);

  friend ArbComplex operator+(ArbComplex a, const ArbComplex& b) { return a += b; }
  friend ArbComplex operator-(ArbComplex a, const ArbComplex& b) { return a -= b; }
  friend ArbComplex operator*(ArbComplex a, const ArbComplex& b) { return a *= b; }
  friend ArbComplex operator/(ArbComplex a, const ArbComplex& b) { return a /= b; }
  friend ArbComplex operator+(ArbComplex a, long b) { return a += b; }
  friend ArbComplex operator-(ArbComplex a, long b) { return a -= b; }
  friend ArbComplex operator*(ArbComplex a, long b) { return a *= b; }
  friend ArbComplex operator*(long a, ArbComplex b) { return b *= a; }
  friend ArbComplex operator/(ArbComplex a, long b) { return a /= b; }
  friend ArbComplex operator*(ArbComplex a, const ArbReal& b) { return a *= b; }

  /// "re" when the imaginary part is zero, else "re,im".
  std::string to_string(int digits) const;

 private:
  ArbReal re_;
  ArbReal im_;
};

/// Principal branch; the negative real axis maps to arg = +pi.
ArbComplex log(const ArbComplex& z);
ArbComplex exp(const ArbComplex& z);
ArbComplex sqrt(const ArbComplex& z);
/// z^w on the principal branch; 0^w = 0 for Re w > 0 and 0^0 = 1.
ArbComplex pow(const ArbComplex& z, const ArbComplex& w);

/// Working-precision plan for an evaluation targeting P correct decimals.
struct PrecisionPolicy {
  int target_digits = 0;
  int guard_digits = 0;
  Bits working_bits = 0;
};

/// Extra decimal digits added on top of the predicted peak-term overshoot.
inline constexpr int kGuardMargin = 10;

/// guard = max(0, ceil(max_term_log10)) + kGuardMargin,
/// working_bits = ceil((P + guard) * log2(10)).
PrecisionPolicy plan_precision(int target_digits, double max_term_log10);

/// Bits needed to carry `digits` decimal digits.
Bits bits_for_digits(double digits);

}  // namespace frob
