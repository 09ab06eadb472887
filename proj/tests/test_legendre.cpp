#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frob/error.hpp"
#include "frob/legendre.hpp"

using namespace frob;

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double max_interior_error(const SampledFunction& f, double (*exact)(double)) {
  double err = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    err = std::max(err, std::abs(f.values()[i] - exact(f.grid()[i])));
  }
  return err;
}

}  // namespace

TEST_CASE("sampled function validates its grid") {
  CHECK_THROWS_AS(SampledFunction({0, 1, 2, 3}, {0, 1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(SampledFunction({0, 1, 1, 3, 4}, {0, 1, 2, 3, 4}), InvalidInput);
  CHECK_THROWS_AS(SampledFunction({0, 1, 2, 3, 4}, {0, 1, 2, 3}), InvalidInput);
  auto f = SampledFunction::tabulate([](double x) { return x * x; }, -1, 1, 11);
  CHECK(f.is_uniform());
  CHECK(f(0.35) == doctest::Approx(0.35 * 0.35).epsilon(1e-12));
  CHECK(f(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(f(1.5), ExtrapolationError);
}

TEST_CASE("stencils are exact for quadratics on uneven grids") {
  std::vector<double> x{0.0, 0.1, 0.35, 0.4, 1.0, 1.7};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v * v - 2 * v + 1);
  SampledFunction f(x, y);
  CHECK_FALSE(f.is_uniform());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(f.derivative(i) == doctest::Approx(6 * x[i] - 2).epsilon(1e-12));
    CHECK(f.second_derivative(i) == doctest::Approx(6.0).epsilon(1e-12));
  }
}

TEST_CASE("forward transform of the self-dual quadratic") {
  auto U = SampledFunction::tabulate([](double x) { return 0.5 * x * x; }, -3, 3, 61);
  auto t = forward(U);
  for (std::size_t i = 0; i < t.p.size(); ++i) CHECK(t.F0[i] == doctest::Approx(0.5 * t.p[i] * t.p[i]));
  CHECK_FALSE(t.F1.has_value());
}

TEST_CASE("forward transform of exp and quartic") {
  auto E = SampledFunction::tabulate([](double x) { return std::exp(x); }, -2, 2, 401);
  CHECK(forward(E).F0_function()(1.0) == doctest::Approx(-1.0).epsilon(1e-4));
  auto Q = SampledFunction::tabulate([](double x) { return std::pow(x, 4) / 4; }, 0.5, 2, 301);
  CHECK(forward(Q).F0_function()(1.0) == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("non-convex input is rejected with its index") {
  auto U = SampledFunction::tabulate([](double x) { return std::pow(x, 4) / 4 - x * x; }, -1, 1, 21);
  try {
    forward(U);
    FAIL("expected NonConvexError");
  } catch (const NonConvexError& e) {
    CHECK(e.index() == 2);
  }
  auto C = SampledFunction::tabulate([](double x) { return std::cos(x); }, -1, 1, 21);
  CHECK_THROWS_AS(inverse(C), NonConvexError);
  CHECK_THROWS_AS(corrected_inverse(C), NonConvexError);
}

TEST_CASE("one-loop correction is the Gaussian integral") {
  auto U = SampledFunction::tabulate([](double x) { return 0.5 * x * x; }, -3, 3, 61);
  auto t = one_loop(U);
  REQUIRE(t.F1.has_value());
  for (std::size_t i = 0; i < t.p.size(); ++i) {
    CHECK((*t.F1)[i] == doctest::Approx(0.5 * t.p[i] * t.p[i] + 0.5 * kLog2Pi).epsilon(1e-12));
  }
  const double a = 2.5, b = 0.7;
  auto V = SampledFunction::tabulate([=](double x) { return a * (x - b) * (x - b) / 2; }, -2, 3, 51);
  auto s = one_loop(V);
  for (std::size_t i = 0; i < s.p.size(); ++i) {
    const double p = s.p[i];
    CHECK((*s.F1)[i] == doctest::Approx(p * p / (2 * a) + p * b + 0.5 * std::log(2 * std::numbers::pi / a)));
  }
}

TEST_CASE("binomial cumulant curvature") {
  auto f = SampledFunction::tabulate([](double p) { return binomial_cgf(10, p); }, -1, 1, 201);
  CHECK(f.second_derivative(100) == doctest::Approx(2.5).epsilon(1e-5));
  CHECK(binomial_cgf(10, 0.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(binomial_cgf(10, 800.0)));
}

TEST_CASE("inverse transform") {
  auto F = SampledFunction::tabulate([](double p) { return 0.5 * p * p; }, -3, 3, 61);
  auto U = inverse(F);
  for (std::size_t i = 0; i < U.size(); ++i) {
    CHECK(U.values()[i] == doctest::Approx(0.5 * U.grid()[i] * U.grid()[i]));
  }
  auto G = SampledFunction::tabulate([](double p) { return p * std::log(p) - p; }, 0.2, 5, 2001);
  auto E = inverse(G);
  CHECK(max_interior_error(E, [](double x) { return std::exp(x); }) < 1e-5);
}

TEST_CASE("involution and Jacobi reciprocity for convex functions") {
  auto U = SampledFunction::tabulate([](double x) { return std::cosh(x) + 0.3 * x; }, -2, 2, 401);
  const auto t = forward(U);
  const auto back = inverse(t.F0_function());
  double err = 0.0;
  for (std::size_t i = 2; i + 2 < U.size(); ++i) {
    err = std::max(err, std::abs(back.grid()[i] - U.grid()[i]) + std::abs(back.values()[i] - U.values()[i]));
  }
  CHECK(err < 1e-4);

  const auto F = t.F0_function();
  const auto u2 = U.second_derivatives();
  const auto f2 = F.second_derivatives();
  for (std::size_t i = 1; i + 1 < U.size(); ++i) CHECK(u2[i] * f2[i] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("corrected inverse is exact for a Gaussian") {
  auto U = SampledFunction::tabulate([](double x) { return 0.5 * x * x; }, -5, 5, 101);
  auto back = corrected_inverse(one_loop(U).F1_function());
  REQUIRE(back.size() == U.size() - 2);
  double err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    err = std::max(err, std::abs(back.values()[i] - 0.5 * back.grid()[i] * back.grid()[i]));
    err = std::max(err, std::abs(back.grid()[i] - U.grid()[i + 1]));
  }
  // U', U'' and then F1'' and F0' are taken along the way.
  CHECK(err <= 10 * stencil_error_bound(U, 3));
}

TEST_CASE("correction variants") {
  auto F1 = SampledFunction::tabulate([](double p) { return binomial_cgf(10, p); }, -4, 4, 81);
  auto approx = corrected_F0(F1, CorrectionVariant::Approximate);
  auto exact = corrected_F0(F1, CorrectionVariant::SelfConsistent);
  REQUIRE(exact.size() >= 5);
  REQUIRE(exact.size() < approx.size());
  const std::size_t off = (F1.size() - exact.size()) / 2;
  auto residual = [&](const SampledFunction& f0, std::size_t i, std::size_t shift) {
    return F1.values()[i + shift] - f0.values()[i] - 0.5 * std::log(2 * std::numbers::pi * f0.second_derivative(i));
  };
  // The one-step estimate misses the exact relation by 1/2 log(N/(N+1)) for
  // the binomial; the iteration removes it.
  for (std::size_t i = 3; i + 3 < exact.size(); i += 5) {
    CHECK(residual(approx, i + off - 1, 1) == doctest::Approx(0.5 * std::log(10.0 / 11.0)).epsilon(1e-3));
    CHECK(std::abs(residual(exact, i, off)) < 1e-3);
    CHECK(approx.values()[i + off - 1] - exact.values()[i] == doctest::Approx(0.5 * std::log(1.1)).epsilon(1e-3));
  }
}

TEST_CASE("binomial corrected inverse reproduces the Legendre column") {
  auto F1 = SampledFunction::tabulate([](double p) { return binomial_cgf(10, p); }, -6, 6, 2401);
  auto u = corrected_inverse(F1);
  CHECK(std::exp(-u(5.0)) == doctest::Approx(0.252313).epsilon(1e-5));
  CHECK(std::exp(-u(0.0)) == doctest::Approx(9.42e-4).epsilon(1e-2));
}

TEST_CASE("binomial demo columns") {
  auto rows = binomial_demo(10);
  REQUIRE(rows.size() == 11);
  CHECK(rows[5].exact == doctest::Approx(0.246094).epsilon(1e-6));
  CHECK(rows[5].legendre == doctest::Approx(0.252313).epsilon(1e-6));
  CHECK(rows[5].stirling == doctest::Approx(0.252313).epsilon(1e-6));
  CHECK(rows[0].exact == doctest::Approx(9.766e-4).epsilon(1e-4));
  CHECK(rows[0].legendre == doctest::Approx(9.42e-4).epsilon(1e-2));
  CHECK(rows[0].stirling == 0.0);
  CHECK(rows[10].stirling == 0.0);

  auto big = binomial_demo(50);
  CHECK(std::abs(big[25].legendre / big[25].exact - 1) <= 0.02);
  CHECK_THROWS_AS(binomial_demo(1), InvalidInput);

  std::ostringstream os;
  write_binomial_csv(os, rows);
  CHECK(os.str().rfind("x,exact,legendre,stirling\n", 0) == 0);
}

TEST_CASE("Legendre column integrates to one") {
  for (int N : {10, 50}) {
    const int n = 20000;
    const double a = -0.5, b = N + 0.5, h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      sum += w * binomial_legendre(N, a + i * h);
    }
    const double total = sum * h;
    // The estimate is not normalized exactly: N = 10 overshoots by 2.35 %.
    if (N == 10) CHECK(total == doctest::Approx(1.02345).epsilon(1e-4));
    if (N == 50) CHECK(std::abs(total - 1.0) <= 0.02);
  }
}
