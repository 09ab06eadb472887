#pragma once

#include <utility>
#include <vector>

#include "frob/frobenius.hpp"
#include "frob/numerics.hpp"
#include "frob/ode.hpp"

namespace frob::validation {

/// sum_k z^k / k!, truncated once the remaining tail is below 10^-digits.
/// Exact rational arithmetic; requires |z| <= 64.
Rational exp_oracle(const Rational& z, int digits);

/// J0(z) = sum_k (-1)^k (z/2)^{2k} / (k!)^2, truncated likewise.
Rational bessel_j0_oracle(const Rational& z, int digits);

/// Coefficients of L psi for the truncated series
///   psi = sum_{m < M} (a0_m + a1_m log z) z^{m + nu},
/// computed directly from p, q, r in exact arithmetic. Entry j holds the
/// (plain, log z) coefficients of z^{nu + j - 2}, j = 0 .. M - 1; all of
/// them are complete (no contribution from m >= M).
std::vector<std::pair<QComplex, QComplex>> residual_coefficients(const ODEProblem& prob,
                                                                 const SeriesSolution<QComplex>& solution,
                                                                 long M);

/// Index of the first non-vanishing residual coefficient among j <= through,
/// or -1 when they all vanish.
long first_nonzero_residual(const ODEProblem& prob, const SeriesSolution<QComplex>& solution, long M,
                            long through);

/// psi1 psi2' - psi1' psi2.
ArbComplex wronskian(const EvalResult& a, const EvalResult& b);

/// log10 |a - b|, -inf when equal.
double log10_diff(const ArbComplex& a, const ArbComplex& b);
double log10_diff(const ArbComplex& a, const Rational& b);

}  // namespace frob::validation
