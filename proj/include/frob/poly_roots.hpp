#pragma once

#include <complex>
#include <span>
#include <vector>

namespace frob {

/// All complex roots of sum_k c[k] z^k (ascending coefficients), via the
/// eigenvalues of the companion matrix. Trailing zero coefficients are ignored;
/// an identically zero or constant polynomial has no roots.
std::vector<std::complex<double>> polynomial_roots(std::span<const std::complex<double>> coeffs);

/// Distance from point `c` to the segment [a, b] in the complex plane.
double distance_to_segment(std::complex<double> c, std::complex<double> a, std::complex<double> b);

}  // namespace frob
