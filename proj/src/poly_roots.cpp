#include "frob/poly_roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace frob {

std::vector<std::complex<double>> polynomial_roots(std::span<const std::complex<double>> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == std::complex<double>(0.0, 0.0)) --n;
  if (n <= 1) return {};
  const std::size_t degree = n - 1;

  // Exact zero roots are split off so they come back exactly.
  std::size_t zeros = 0;
  while (zeros < degree && coeffs[zeros] == std::complex<double>(0.0, 0.0)) ++zeros;
  std::vector<std::complex<double>> roots(zeros, {0.0, 0.0});
  const std::size_t reduced = degree - zeros;
  if (reduced == 0) return roots;

  const std::complex<double> lead = coeffs[n - 1];
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(reduced),
                                                      static_cast<Eigen::Index>(reduced));
  for (std::size_t i = 1; i < reduced; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < reduced; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(reduced - 1)) =
        -coeffs[zeros + i] / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) roots.push_back(ev[i]);
  return roots;
}

double distance_to_segment(std::complex<double> c, std::complex<double> a, std::complex<double> b) {
  const std::complex<double> ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(c - a);
  const double t = std::clamp(std::real((c - a) * std::conj(ab)) / len2, 0.0, 1.0);
  return std::abs(c - (a + t * ab));
}

}  // namespace frob
