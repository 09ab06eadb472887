#pragma once

#include <gmpxx.h>

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace frob {

using Rational = mpq_class;

/// Parses "num/den", an integer, or a finite decimal ("-1.25e-3") into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Exact square root of a non-negative rational, if it is a perfect square.
std::optional<Rational> exact_sqrt(const Rational& q);

/// Exact complex rational a + b i. Used wherever classification must not be
/// subject to rounding: polynomial coefficients, indicial roots, centers.
class QComplex {
 public:
  QComplex() = default;
  QComplex(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  QComplex(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  QComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  /// True iff the value is a (real) integer.
  bool is_integer() const;

  QComplex conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  QComplex operator-() const { return {-re_, -im_}; }
  QComplex& operator+=(const QComplex& o);
  QComplex& operator-=(const QComplex& o);
  QComplex& operator*=(const QComplex& o);
  QComplex& operator/=(const QComplex& o);

  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Parses "x" or "x,y" with x, y accepted by parse_rational.
  static QComplex parse(std::string_view text);

 private:
  Rational re_{0};
  Rational im_{0};
};

std::string to_string(const QComplex& z);
std::ostream& operator<<(std::ostream& os, const QComplex& z);

/// Exact square root in Q(i), if one exists.
std::optional<QComplex> exact_sqrt(const QComplex& z);

}  // namespace frob
