#include "frob/legendre.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>

#include "frob/error.hpp"

namespace frob {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Stencil {
  std::size_t j0;  // first of three consecutive points
};

Stencil stencil_for(std::size_t i, std::size_t n) {
  if (i == 0) return {0};
  if (i + 1 >= n) return {n - 3};
  return {i - 1};
}

}  // namespace

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values)
    : x_(std::move(grid)), y_(std::move(values)) {
  if (x_.size() != y_.size()) throw InvalidInput("grid and values differ in length");
  if (x_.size() < kMinPoints) throw InvalidInput("sampled function needs at least 5 points");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw InvalidInput("non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      throw InvalidInput("grid is not strictly increasing at index " + std::to_string(i));
    }
  }
}

double SampledFunction::derivative(std::size_t i) const {
  const std::size_t j = stencil_for(i, size()).j0;
  const double x0 = x_[j], x1 = x_[j + 1], x2 = x_[j + 2];
  const double t = x_[i];
  return y_[j] * (2 * t - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
         y_[j + 1] * (2 * t - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
         y_[j + 2] * (2 * t - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

double SampledFunction::second_derivative(std::size_t i) const {
  const std::size_t j = stencil_for(i, size()).j0;
  const double x0 = x_[j], x1 = x_[j + 1], x2 = x_[j + 2];
  return 2.0 * (y_[j] / ((x0 - x1) * (x0 - x2)) + y_[j + 1] / ((x1 - x0) * (x1 - x2)) +
                y_[j + 2] / ((x2 - x0) * (x2 - x1)));
}

std::vector<double> SampledFunction::derivatives() const {
  std::vector<double> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = derivative(i);
  return d;
}

std::vector<double> SampledFunction::second_derivatives() const {
  std::vector<double> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = second_derivative(i);
  return d;
}

double SampledFunction::operator()(double x) const {
  if (!(x >= x_.front() && x <= x_.back())) {
    throw ExtrapolationError("x = " + std::to_string(x) + " outside sampled range [" + std::to_string(x_.front()) +
                             ", " + std::to_string(x_.back()) + "]");
  }
  const auto it = std::lower_bound(x_.begin(), x_.end(), x);
  const auto k = static_cast<std::size_t>(it - x_.begin());
  if (x_[k] == x) return y_[k];
  // three points centred on the nearest sample
  const std::size_t centre = (x - x_[k - 1] < x_[k] - x) ? k - 1 : k;
  const std::size_t j = std::min(centre == 0 ? 0 : centre - 1, x_.size() - 3);
  const double x0 = x_[j], x1 = x_[j + 1], x2 = x_[j + 2];
  return y_[j] * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
         y_[j + 1] * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
         y_[j + 2] * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
}

bool SampledFunction::is_uniform(double rel_tol) const {
  const double h = (x_.back() - x_.front()) / static_cast<double>(size() - 1);
  for (std::size_t i = 1; i < size(); ++i) {
    if (std::abs(x_[i] - x_[i - 1] - h) > rel_tol * std::abs(h)) return false;
  }
  return true;
}

double stencil_error_bound(const SampledFunction& f, int derivative_order) {
  const auto& x = f.grid();
  const auto& y = f.values();
  double hmin = std::numeric_limits<double>::infinity();
  double hmax = 0.0;
  double ymax = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ymax = std::max(ymax, std::abs(y[i]));
    if (i > 0) {
      hmin = std::min(hmin, x[i] - x[i - 1]);
      hmax = std::max(hmax, x[i] - x[i - 1]);
    }
  }
  double m3 = 0.0;
  for (std::size_t j = 0; j + 3 < x.size(); ++j) {
    auto dd = [&](std::size_t a, std::size_t b) { return (y[b] - y[a]) / (x[b] - x[a]); };
    const double d01 = dd(j, j + 1), d12 = dd(j + 1, j + 2), d23 = dd(j + 2, j + 3);
    const double d012 = (d12 - d01) / (x[j + 2] - x[j]);
    const double d123 = (d23 - d12) / (x[j + 3] - x[j + 1]);
    m3 = std::max(m3, std::abs(6.0 * (d123 - d012) / (x[j + 3] - x[j])));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const int k = std::max(derivative_order, 1);
  return hmax * hmax / 3.0 * m3 + std::ldexp(eps, k + 1) * std::max(ymax, 1.0) / std::pow(hmin, k);
}

SampledFunction TransformResult::F1_function() const {
  if (!F1) throw InvalidInput("transform has no one-loop values");
  return SampledFunction(p, *F1);
}

TransformResult forward(const SampledFunction& U) {
  const auto d1 = U.derivatives();
  const auto d2 = U.second_derivatives();
  for (std::size_t i = 0; i < d2.size(); ++i) {
    if (!(d2[i] > 0.0)) throw NonConvexError("U'' is not positive", i);
  }
  TransformResult out;
  out.p = d1;
  out.x_of_p = U.grid();
  out.F0.resize(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (i > 0 && !(d1[i] > d1[i - 1])) throw NonConvexError("U' is not strictly increasing", i);
    out.F0[i] = d1[i] * U.grid()[i] - U.values()[i];
  }
  return out;
}

TransformResult one_loop(const SampledFunction& U) {
  TransformResult out = forward(U);
  const auto d2 = U.second_derivatives();
  std::vector<double> f1(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) f1[i] = out.F0[i] - 0.5 * std::log(d2[i] / kTwoPi);
  out.F1 = std::move(f1);
  return out;
}

SampledFunction inverse(const SampledFunction& F0) {
  const TransformResult t = forward(F0);
  return SampledFunction(t.p, t.F0);
}

SampledFunction corrected_F0(const SampledFunction& F1, CorrectionVariant variant) {
  // One correction step on the interior of `src`'s grid. The edge samples are
  // dropped because their one-sided curvature is only first-order accurate.
  auto step = [&](const SampledFunction& src, std::size_t offset) {
    const std::size_t m = src.size();
    if (m < SampledFunction::kMinPoints + 2) throw InvalidInput("grid too short for the one-loop correction");
    std::vector<double> p(m - 2), f0(m - 2);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double d2 = src.second_derivative(i);
      if (!(d2 > 0.0)) throw NonConvexError("second derivative is not positive", offset + i);
      p[i - 1] = src.grid()[i];
      f0[i - 1] = F1.values()[offset + i] - 0.5 * std::log(kTwoPi * d2);
    }
    return SampledFunction(std::move(p), std::move(f0));
  };

  SampledFunction f0 = step(F1, 0);
  if (variant == CorrectionVariant::Approximate) return f0;
  std::size_t offset = 1;
  double last_change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 20 && f0.size() >= SampledFunction::kMinPoints + 2; ++it) {
    std::optional<SampledFunction> attempt;
    try {
      attempt.emplace(step(f0, offset));
    } catch (const NonConvexError&) {
      break;
    }
    SampledFunction next = std::move(*attempt);
    double change = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      change = std::max(change, std::abs(next.values()[i] - f0.values()[i + 1]));
      scale = std::max(scale, std::abs(next.values()[i]));
    }
    // Repeated differentiation amplifies rounding noise; stop once the
    // iteration no longer contracts.
    if (change >= last_change) break;
    f0 = std::move(next);
    ++offset;
    last_change = change;
    if (change < 1e-12 * scale) break;
  }
  return f0;
}

SampledFunction corrected_inverse(const SampledFunction& F1, CorrectionVariant variant) {
  return inverse(corrected_F0(F1, variant));
}

double binomial_exact(int N, int x) {
  if (N < 0 || x < 0 || x > N) throw InvalidInput("binomial_exact needs 0 <= x <= N");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(x));
  mpz_class pow2 = 1;
  pow2 <<= static_cast<mp_bitcnt_t>(N);
  return mpq_class(c, pow2).get_d();
}

namespace {

double entropy(double t) {
  auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  return xlogx(t) + xlogx(1.0 - t);
}

}  // namespace

double binomial_legendre(int N, double x) {
  const double xi = (x + 0.5) / (N + 1.0);
  if (xi < 0.0 || xi > 1.0) return 0.0;
  return std::exp(-N * std::log(2.0) - 0.5 * std::log(kTwoPi * N) - (N + 1.0) * entropy(xi));
}

double binomial_stirling(int N, double x) {
  const double chi = x / N;
  if (!(chi > 0.0 && chi < 1.0)) return 0.0;
  return std::exp(-N * std::log(2.0) - N * entropy(chi) - 0.5 * std::log(kTwoPi * N * chi * (1.0 - chi)));
}

double binomial_cgf(int N, double p) {
  // log((1 + e^p)/2) evaluated without overflow
  const double lse = p > 0 ? p + std::log1p(std::exp(-p)) : std::log1p(std::exp(p));
  return N * (lse - std::log(2.0));
}

std::vector<BinomialRow> binomial_demo(int N) {
  if (N < 2) throw InvalidInput("binomial demo needs N >= 2");
  std::vector<BinomialRow> rows;
  rows.reserve(static_cast<std::size_t>(N) + 1);
  for (int x = 0; x <= N; ++x) {
    rows.push_back({x, binomial_exact(N, x), binomial_legendre(N, x), binomial_stirling(N, x)});
  }
  return rows;
}

void write_binomial_csv(std::ostream& os, const std::vector<BinomialRow>& rows) {
  os << "x,exact,legendre,stirling\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g\n", r.x, r.exact, r.legendre, r.stirling);
    os << buf;
  }
}

}  // namespace frob
