#include "frob/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frob/error.hpp"
#include "frob/poly_roots.hpp"

namespace frob {

namespace {

const QComplex& zero_coefficient() {
  static const QComplex kZero;
  return kZero;
}

void trim(std::vector<QComplex>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Rational binomial(long n, long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(out);
}

// Compares real parts, then imaginary parts.
bool re_less(const QComplex& x, const QComplex& y) {
  if (x.re() != y.re()) return x.re() < y.re();
  return x.im() < y.im();
}

}  // namespace

Poly::Poly(std::vector<QComplex> coefficients) : c_(std::move(coefficients)) { trim(c_); }

Poly::Poly(std::initializer_list<long> coefficients) {
  c_.reserve(coefficients.size());
  for (long v : coefficients) c_.emplace_back(v);
  trim(c_);
}

const QComplex& Poly::operator[](int k) const {
  if (k < 0 || k > degree()) return zero_coefficient();
  return c_[static_cast<std::size_t>(k)];
}

QComplex Poly::operator()(const QComplex& z) const {
  QComplex acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= z;
    acc += *it;
  }
  return acc;
}

Poly Poly::shifted(const QComplex& z1) const {
  if (z1.is_zero() || c_.empty()) return *this;
  const int n = degree();
  // Powers of z1 up to the degree.
  std::vector<QComplex> powers(static_cast<std::size_t>(n + 1));
  powers[0] = QComplex(1);
  for (int k = 1; k <= n; ++k) powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * z1;
  std::vector<QComplex> out(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= k; ++j) {
      out[static_cast<std::size_t>(j)] +=
          c_[static_cast<std::size_t>(k)] * powers[static_cast<std::size_t>(k - j)] * QComplex(binomial(k, j));
    }
  }
  return Poly(std::move(out));
}

Poly Poly::times_z() const {
  if (c_.empty()) return {};
  std::vector<QComplex> out;
  out.reserve(c_.size() + 1);
  out.emplace_back();
  out.insert(out.end(), c_.begin(), c_.end());
  return Poly(std::move(out));
}

Poly Poly::divided_by_z() const {
  if (c_.empty()) return {};
  if (!c_.front().is_zero()) throw InvalidShift("polynomial is not divisible by z");
  return Poly(std::vector<QComplex>(c_.begin() + 1, c_.end()));
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= p.degree(); ++k) {
    if (p[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool complex = !p[k].is_real();
    if (complex) os << "(";
    os << to_string(p[k]);
    if (complex) os << ")";
    if (k == 1) os << " z";
    if (k > 1) os << " z^" << k;
  }
  return os.str();
}

ODEProblem::ODEProblem(Poly p_, Poly q_, Poly r_, QComplex center_)
    : p(std::move(p_)), q(std::move(q_)), r(std::move(r_)), center(std::move(center_)) {
  if (p.is_zero()) throw InvalidInput("leading coefficient p(z) is identically zero");
  for (const Poly* poly : {&p, &q, &r}) {
    if (poly->degree() > Poly::kMaxDegree) {
      throw InvalidInput("polynomial degree exceeds " + std::to_string(Poly::kMaxDegree));
    }
  }
}

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::Ordinary: return "Ordinary";
    case PointClass::RegularSingularA: return "RegularSingularA";
    case PointClass::RegularSingularB: return "RegularSingularB";
    case PointClass::Irregular: return "Irregular";
  }
  return "?";
}

std::string to_string(IndexCase c) {
  switch (c) {
    case IndexCase::NonIntegerDiff: return "NonIntegerDiff";
    case IndexCase::Degenerate: return "Degenerate";
    case IndexCase::IntegerDiff: return "IntegerDiff";
  }
  return "?";
}

namespace {

std::optional<PointClass> direct_class(const ODEProblem& prob) {
  const auto& p = prob.p;
  const auto& q = prob.q;
  const auto& r = prob.r;
  if (!p[0].is_zero()) return PointClass::Ordinary;
  if (p[1].is_zero() && q[0].is_zero() && !p[2].is_zero()) return PointClass::RegularSingularB;
  if (!p[1].is_zero() && (!q[0].is_zero() || !r[0].is_zero())) return PointClass::RegularSingularA;
  return std::nullopt;
}

}  // namespace

ODEProblem normalize_origin(const ODEProblem& prob) {
  ODEProblem out = prob;
  while (!direct_class(out) && out.p[0].is_zero() && out.q[0].is_zero() && out.r[0].is_zero()) {
    out.p = out.p.divided_by_z();
    out.q = out.q.divided_by_z();
    out.r = out.r.divided_by_z();
  }
  return out;
}

PointClass classify_origin(const ODEProblem& prob) {
  return direct_class(normalize_origin(prob)).value_or(PointClass::Irregular);
}

ArbComplex IndicialData::nu1(Bits bits) const {
  if (nu1_exact) return ArbComplex(*nu1_exact, bits);
  const ArbComplex disc(b * b - QComplex(4) * a * c, bits);
  const ArbComplex root = sqrt(disc);
  ArbComplex num = ArbComplex(-b, bits) - (nu2_sign > 0 ? root : -root);
  return num / ArbComplex(QComplex(2) * a, bits);
}

ArbComplex IndicialData::nu2(Bits bits) const {
  if (nu2_exact) return ArbComplex(*nu2_exact, bits);
  const ArbComplex disc(b * b - QComplex(4) * a * c, bits);
  const ArbComplex root = sqrt(disc);
  ArbComplex num = ArbComplex(-b, bits) + (nu2_sign > 0 ? root : -root);
  return num / ArbComplex(QComplex(2) * a, bits);
}

IndicialData indicial_roots(const ODEProblem& input) {
  const ODEProblem prob = normalize_origin(input);
  IndicialData data;
  data.point_class = classify_origin(prob);
  switch (data.point_class) {
    case PointClass::RegularSingularB:
      // nu (nu - 1) p2 + nu q1 + r0 = 0
      data.a = prob.p[2];
      data.b = prob.q[1] - prob.p[2];
      data.c = prob.r[0];
      break;
    case PointClass::RegularSingularA:
      // nu [(nu - 1) p1 + q0] = 0
      data.a = prob.p[1];
      data.b = prob.q[0] - prob.p[1];
      data.c = QComplex();
      break;
    default:
      throw UnsupportedClassification("indicial roots need a regular singular point, got " +
                                      to_string(data.point_class));
  }

  const QComplex disc = data.b * data.b - QComplex(4) * data.a * data.c;
  const QComplex two_a = QComplex(2) * data.a;
  if (auto root = exact_sqrt(disc)) {
    QComplex x = (-data.b + *root) / two_a;
    QComplex y = (-data.b - *root) / two_a;
    data.nu2_sign = 1;
    if (re_less(y, x)) {
      std::swap(x, y);
      data.nu2_sign = -1;
    }
    data.nu1_exact = x;
    data.nu2_exact = y;
    const QComplex diff = y - x;
    if (diff.is_zero()) {
      data.index_case = IndexCase::Degenerate;
    } else if (diff.is_integer()) {
      data.index_case = IndexCase::IntegerDiff;
      data.ell = diff.re().get_num().get_si();
    } else {
      data.index_case = IndexCase::NonIntegerDiff;
    }
    return data;
  }

  // Irrational roots: the difference sqrt(disc)/a is never an integer, since
  // that would make disc = (ell a)^2 a perfect square in Q(i).
  data.index_case = IndexCase::NonIntegerDiff;
  const QComplex ratio = disc / (data.a * data.a);  // (nu2 - nu1)^2
  const Bits bits = kClassificationBits;
  const ArbComplex half_diff = sqrt(ArbComplex(disc, bits)) / ArbComplex(two_a, bits);
  if (ratio.is_real() && sgn(ratio.re()) < 0) {
    // Equal real parts; order by imaginary part.
    data.nu2_sign = half_diff.im().sign() > 0 ? 1 : -1;
  } else {
    const ArbReal scale = half_diff.abs();
    ArbReal threshold = scale;
    mpfr_mul_2si(threshold.get(), threshold.get(), -200, MPFR_RNDN);
    if (abs(half_diff.re()) <= threshold) {
      throw UndecidableClassification("cannot order irrational indicial roots by real part");
    }
    data.nu2_sign = half_diff.re().sign() > 0 ? 1 : -1;
  }
  return data;
}

ODEProblem shift_index(const ODEProblem& input, const QComplex& nu) {
  Poly p = input.p;
  Poly q = input.q;
  Poly r = input.r;
  if (!p[0].is_zero()) throw InvalidShift("shift needs a singular origin (p0 = 0)");
  if (!p[1].is_zero() || !q[0].is_zero()) {
    if (p[1].is_zero()) throw InvalidShift("shift needs p1 != 0 or p1 = q0 = 0");
    p = p.times_z();
    q = q.times_z();
    r = r.times_z();
  }
  const QComplex residue = nu * (nu - QComplex(1)) * p[2] + nu * q[1] + r[0];
  if (!residue.is_zero()) {
    throw InvalidShift("nu = " + to_string(nu) + " does not satisfy the indicial equation");
  }
  const int n = std::max({p.degree(), q.degree() + 1, r.degree() + 2});
  std::vector<QComplex> pt(static_cast<std::size_t>(std::max(n, 0) + 1));
  std::vector<QComplex> qt(pt.size());
  std::vector<QComplex> rt(pt.size());
  const QComplex two_nu = QComplex(2) * nu;
  const QComplex nu_nu1 = nu * (nu - QComplex(1));
  for (int k = 0; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    pt[i] = p[k + 1];
    qt[i] = two_nu * p[k + 2] + q[k + 1];
    rt[i] = nu_nu1 * p[k + 3] + nu * q[k + 2] + r[k + 1];
  }
  return ODEProblem(Poly(std::move(pt)), Poly(std::move(qt)), Poly(std::move(rt)), input.center);
}

ODEProblem from_canonical(const CanonicalProblem& cp) {
  std::vector<QComplex> p{QComplex(0), QComplex(0), QComplex(1)};
  std::vector<QComplex> q{QComplex(0), QComplex(Rational(1 - cp.nu_plus - cp.nu_minus))};
  std::vector<QComplex> r(cp.v.size() + 1);
  r[0] = QComplex(Rational(cp.nu_plus * cp.nu_minus));
  for (std::size_t n = 0; n < cp.v.size(); ++n) r[n + 1] = QComplex(Rational(-cp.v[n]));
  return ODEProblem(Poly(std::move(p)), Poly(std::move(q)), Poly(std::move(r)));
}

ODEProblem recenter(const ODEProblem& prob, const QComplex& z1) {
  return ODEProblem(prob.p.shifted(z1), prob.q.shifted(z1), prob.r.shifted(z1), prob.center + z1);
}

std::complex<double> to_complex_double(const QComplex& z) {
  return {z.re().get_d(), z.im().get_d()};
}

std::vector<std::complex<double>> singular_points(const ODEProblem& prob) {
  const ODEProblem norm = normalize_origin(prob);
  std::vector<std::complex<double>> coeffs;
  coeffs.reserve(norm.p.coefficients().size());
  for (const auto& c : norm.p.coefficients()) coeffs.push_back(to_complex_double(c));
  return polynomial_roots(coeffs);
}

double convergence_radius(const ODEProblem& prob, std::complex<double> z) {
  double best = std::numeric_limits<double>::infinity();
  const double tiny = 1e-12 * (1.0 + std::abs(z));
  for (const auto& s : singular_points(prob)) {
    const double d = std::abs(s - z);
    if (d > tiny) best = std::min(best, d);
  }
  return best;
}

}  // namespace frob
