#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

namespace frob {

/// Samples of a real function on a strictly increasing grid (at least 5
/// points). Derivatives use three-point Lagrange stencils: central on the
/// interior, one-sided at the two edges. The stencils are exact for
/// quadratics on any grid and second order in the spacing on uniform grids.
class SampledFunction {
 public:
  static constexpr std::size_t kMinPoints = 5;

  SampledFunction(std::vector<double> grid, std::vector<double> values);

  /// f sampled at n points uniformly spaced on [a, b].
  template <class F>
  static SampledFunction tabulate(F&& f, double a, double b, std::size_t n) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      y[i] = f(x[i]);
    }
    return SampledFunction(std::move(x), std::move(y));
  }

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& values() const { return y_; }

  double derivative(std::size_t i) const;
  double second_derivative(std::size_t i) const;
  std::vector<double> derivatives() const;
  std::vector<double> second_derivatives() const;

  /// Quadratic interpolation through the three samples nearest to x.
  /// Throws ExtrapolationError outside [grid.front(), grid.back()].
  double operator()(double x) const;

  bool is_uniform(double rel_tol = 1e-9) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// A priori bound on the finite-difference error of a chain of stencil
/// derivatives of total order k applied to `f`:
///   h_max^2 / 3 * max|f'''| + 2^(k+1) eps max(|f|, 1) / h_min^k,
/// with f''' estimated from third divided differences. The first term is the
/// truncation error, the second the amplified rounding error.
double stencil_error_bound(const SampledFunction& f, int derivative_order = 2);

struct TransformResult {
  std::vector<double> p;
  std::vector<double> F0;
  std::optional<std::vector<double>> F1;
  /// Maximizer x(p) of p x - U(x), i.e. the original grid.
  std::vector<double> x_of_p;

  SampledFunction F0_function() const { return SampledFunction(p, F0); }
  SampledFunction F1_function() const;
};

/// p = U'(x), F0(p) = p x - U(x). Requires U'' > 0 everywhere on the grid;
/// otherwise throws NonConvexError with the first violating index.
TransformResult forward(const SampledFunction& U);

/// forward() plus F1(p) = F0(p) - 1/2 log(U''(x) / 2 pi).
TransformResult one_loop(const SampledFunction& U);

/// x = F0'(p), U(x) = p x - F0(p). Requires F0'' > 0.
SampledFunction inverse(const SampledFunction& F0);

/// How F0 is recovered from a measured F1 = F0 + 1/2 log(2 pi F0'').
enum class CorrectionVariant {
  /// F0 = F1 - 1/2 log(2 pi F1''): one step, F0'' replaced by F1''.
  Approximate,
  /// Iterates F0 <- F1 - 1/2 log(2 pi F0'') to a fixed point. Every step
  /// multiplies rounding noise by about 4 / (h^2 F0''), so this is only
  /// useful on moderately coarse grids.
  SelfConsistent,
};

/// F0 recovered from F1. Each correction step drops the two edge samples, whose
/// one-sided curvature is only first-order accurate, so the result lives on the
/// interior of the input grid. The self-consistent variant stops early when
/// rounding noise stops the iteration from contracting. Throws NonConvexError
/// when a curvature is not positive.
SampledFunction corrected_F0(const SampledFunction& F1, CorrectionVariant variant = CorrectionVariant::Approximate);

/// inverse(corrected_F0(F1)).
SampledFunction corrected_inverse(const SampledFunction& F1,
                                  CorrectionVariant variant = CorrectionVariant::Approximate);

// Coin-flip demonstration: N fair coins, x heads.

/// C(N, x) / 2^N for integer 0 <= x <= N.
double binomial_exact(int N, int x);
/// Corrected Legendre estimate exp(-u(x)), continuous in x on [-1/2, N + 1/2]:
///   2^-N (2 pi N)^-1/2 exp(-(N+1)[xi log xi + (1-xi) log(1-xi)]),  xi = (x + 1/2)/(N + 1).
double binomial_legendre(int N, double x);
/// Stirling estimate with chi = x / N; zero at the endpoints where it is undefined.
double binomial_stirling(int N, double x);
/// Cumulant generating function N log((1 + e^p)/2) of the head count.
double binomial_cgf(int N, double p);

struct BinomialRow {
  int x;
  double exact;
  double legendre;
  double stirling;
};

/// Rows x = 0..N. Throws InvalidInput for N < 2.
std::vector<BinomialRow> binomial_demo(int N);

/// CSV `x,exact,legendre,stirling`.
void write_binomial_csv(std::ostream& os, const std::vector<BinomialRow>& rows);

}  // namespace frob
