#include "frob/validation/oracles.hpp"

#include <cmath>

#include "frob/error.hpp"

namespace frob::validation {

namespace {

// Sums terms t_k (t_{k+1} = t_k * ratio(k)) until |t_k| < 10^-(digits + 5)
// past the point where the ratio has dropped below 1/2.
template <class Ratio>
Rational alternating_sum(Rational term, Ratio ratio, int digits) {
  const mpz_class scale = [&] {
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), 10, static_cast<unsigned long>(digits + 5));
    return s;
  }();
  Rational sum = 0;
  for (long k = 0;; ++k) {
    sum += term;
    const Rational r = ratio(k);
    term *= r;
    if (abs(r) < Rational(1, 2) && abs(term) * scale < 1) return sum;
  }
}

}  // namespace

Rational exp_oracle(const Rational& z, int digits) {
  if (abs(z) > 64) throw InvalidInput("exp oracle needs |z| <= 64");
  return alternating_sum(Rational(1), [&](long k) { return Rational(z / (k + 1)); }, digits);
}

Rational bessel_j0_oracle(const Rational& z, int digits) {
  if (abs(z) > 64) throw InvalidInput("J0 oracle needs |z| <= 64");
  const Rational q = -z * z / 4;
  return alternating_sum(Rational(1), [&](long k) { return Rational(q / ((k + 1) * (k + 1))); }, digits);
}

std::vector<std::pair<QComplex, QComplex>> residual_coefficients(const ODEProblem& prob,
                                                                 const SeriesSolution<QComplex>& solution,
                                                                 long M) {
  if (M < 1) throw InvalidInput("residual needs M >= 1");
  std::vector<std::pair<QComplex, QComplex>> out(static_cast<std::size_t>(M));
  auto add = [&](long j, const QComplex& plain, const QComplex& logz) {
    if (j < 0 || j >= M) return;
    out[static_cast<std::size_t>(j)].first += plain;
    out[static_cast<std::size_t>(j)].second += logz;
  };
  CoefficientStream<QComplex> stream(solution);
  for (long m = 0; m < M; ++m) {
    const auto& t = stream.next();
    if (t.a0.is_zero() && t.a1.is_zero()) continue;
    const QComplex mu = solution.nu() + QComplex(Rational(m));
    // z^mu log z:  D -> mu z^{mu-1} log z + z^{mu-1}
    //             D^2 -> mu (mu-1) z^{mu-2} log z + (2 mu - 1) z^{mu-2}
    const QComplex d1 = mu, d2 = mu * (mu - QComplex(1));
    const QComplex two_mu_1 = QComplex(2) * mu - QComplex(1);
    for (int k = 0; k <= prob.p.degree(); ++k) {
      const QComplex& c = prob.p[k];
      if (c.is_zero()) continue;
      add(m + k, c * (t.a0 * d2 + t.a1 * two_mu_1), c * t.a1 * d2);
    }
    for (int k = 0; k <= prob.q.degree(); ++k) {
      const QComplex& c = prob.q[k];
      if (c.is_zero()) continue;
      add(m + k + 1, c * (t.a0 * d1 + t.a1), c * t.a1 * d1);
    }
    for (int k = 0; k <= prob.r.degree(); ++k) {
      const QComplex& c = prob.r[k];
      if (c.is_zero()) continue;
      add(m + k + 2, c * t.a0, c * t.a1);
    }
  }
  return out;
}

long first_nonzero_residual(const ODEProblem& prob, const SeriesSolution<QComplex>& solution, long M,
                            long through) {
  const auto res = residual_coefficients(prob, solution, M);
  for (long j = 0; j <= through && j < M; ++j) {
    const auto& [plain, logz] = res[static_cast<std::size_t>(j)];
    if (!plain.is_zero() || !logz.is_zero()) return j;
  }
  return -1;
}

ArbComplex wronskian(const EvalResult& a, const EvalResult& b) {
  return a.value * b.derivative - a.derivative * b.value;
}

double log10_diff(const ArbComplex& a, const ArbComplex& b) {
  const Bits bits = std::max(a.precision(), b.precision());
  return (a.with_precision(bits) - b.with_precision(bits)).log10_abs();
}

double log10_diff(const ArbComplex& a, const Rational& b) {
  return (a - ArbComplex(QComplex(b), a.precision())).log10_abs();
}

}  // namespace frob::validation
