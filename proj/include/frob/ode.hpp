#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "frob/numerics.hpp"
#include "frob/rational.hpp"

namespace frob {

/// Polynomial with exact complex-rational coefficients, index k = power of z.
/// Trailing zeros are trimmed, so degree() == -1 for the zero polynomial.
class Poly {
 public:
  static constexpr int kMaxDegree = 64;

  Poly() = default;
  explicit Poly(std::vector<QComplex> coefficients);
  Poly(std::initializer_list<long> coefficients);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  /// Coefficient of z^k; zero for k < 0 or k > degree().
  const QComplex& operator[](int k) const;
  const std::vector<QComplex>& coefficients() const { return c_; }

  QComplex operator()(const QComplex& z) const;
  /// Coefficients of p(w + z1) in w.
  Poly shifted(const QComplex& z1) const;
  Poly times_z() const;
  /// p / z; requires p(0) == 0.
  Poly divided_by_z() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  std::vector<QComplex> c_;
};

std::string to_string(const Poly& p);

/// L = p(z) d^2/dz^2 + q(z) d/dz + r(z), in a local coordinate whose origin
/// sits at `center`.
struct ODEProblem {
  Poly p;
  Poly q;
  Poly r;
  QComplex center;

  ODEProblem() = default;
  /// Validates: p not identically zero, all degrees <= Poly::kMaxDegree.
  ODEProblem(Poly p, Poly q, Poly r, QComplex center = {});
};

/// Coefficients of the canonical form
///   -(psi'' + (1 - nu+ - nu-)/z psi' + nu+ nu-/z^2 psi) + (1/z) sum_n v_n z^n psi = 0.
/// `s` only enters the WKB integrals and defaults to 1.
struct CanonicalProblem {
  Rational nu_plus;
  Rational nu_minus;
  std::vector<Rational> v;
  double s = 1.0;
};

enum class PointClass { Ordinary, RegularSingularA, RegularSingularB, Irregular };
enum class IndexCase { NonIntegerDiff, Degenerate, IntegerDiff };

std::string to_string(PointClass c);
std::string to_string(IndexCase c);

/// Classification of the origin plus the indicial roots (Re nu1 <= Re nu2).
struct IndicialData {
  PointClass point_class = PointClass::Irregular;
  IndexCase index_case = IndexCase::NonIntegerDiff;
  long ell = 0;  ///< nu2 - nu1 when index_case == IntegerDiff

  /// Set when the roots are (complex) rational.
  std::optional<QComplex> nu1_exact;
  std::optional<QComplex> nu2_exact;

  /// Indicial quadratic a nu^2 + b nu + c = 0, exact.
  QComplex a, b, c;
  /// nu2 = (-b + nu2_sign * sqrt(b^2 - 4ac)) / (2a) on the principal sqrt.
  int nu2_sign = 1;

  bool exact() const { return nu1_exact.has_value(); }
  ArbComplex nu1(Bits bits) const;
  ArbComplex nu2(Bits bits) const;
};

/// Bits used to order and display irrational indicial roots.
inline constexpr Bits kClassificationBits = 256;

/// Removes common factors of z (while p0 = q0 = r0 = 0 and the origin is not
/// already a recognised regular singular point).
ODEProblem normalize_origin(const ODEProblem& prob);

/// Classifies z = 0 for the normalized problem.
PointClass classify_origin(const ODEProblem& prob);

/// Indicial data of the normalized problem. Throws UnsupportedClassification
/// for ordinary or irregular points.
IndicialData indicial_roots(const ODEProblem& prob);

/// psi = z^nu psi~; returns the equation for psi~. Accepts case-B form
/// (p0 = p1 = q0 = 0) and case-A form (p0 = 0, p1 != 0, multiplied by z
/// first). Throws InvalidShift when nu is not an indicial root.
ODEProblem shift_index(const ODEProblem& prob, const QComplex& nu);

/// p = z^2, q = (1 - nu+ - nu-) z, r = nu+ nu- - sum_n v_n z^{n+1}.
ODEProblem from_canonical(const CanonicalProblem& cp);

/// Same equation expanded around local point z1; center moves by z1.
ODEProblem recenter(const ODEProblem& prob, const QComplex& z1);

/// Finite singular points (zeros of p of the normalized problem), in the
/// local coordinate. Double precision.
std::vector<std::complex<double>> singular_points(const ODEProblem& prob);

/// Distance from local point z to the nearest singular point other than z
/// itself (infinity when there is none).
double convergence_radius(const ODEProblem& prob, std::complex<double> z = {0.0, 0.0});

std::complex<double> to_complex_double(const QComplex& z);

}  // namespace frob
