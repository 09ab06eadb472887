#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "frob/error.hpp"
#include "frob/estimator.hpp"
#include "frob/legendre.hpp"

using namespace frob;

namespace {

struct Grid {
  std::vector<double> u, S;
};

template <class F>
Grid sample(F&& S, double a, double b, int n) {
  Grid g{uniform_grid(a, b, n), {}};
  for (double u : g.u) g.S.push_back(S(u));
  return g;
}

EstimateCurve crude_anharmonic() {
  const auto g = sample([](double u) { return anharmonic_S(0, u); }, 0.5, 7.0, 651);
  return curve_from_samples(g.u, g.S, 0.0, {false});
}

// u with m_bar(u) = m on the inner double-well branch (increasing there).
double inner_u(double c2, double m) {
  double lo = -20, hi = std::log(c2 / 3);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (double_well_reference(c2, mid).m_bar < m ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("closed-form reference values") {
  CHECK(anharmonic_uncorrected(3) == doctest::Approx(2 - 2 * std::log(6.0)).epsilon(1e-14));
  CHECK(anharmonic_uncorrected(3) == doctest::Approx(-1.58351893845611).epsilon(1e-12));
  CHECK(anharmonic_corrected(3) == doctest::Approx(-3.23018746323943).epsilon(1e-12));
  CHECK(anharmonic_uncorrected(50) == doctest::Approx(-120.172339532936).epsilon(1e-12));

  const double L = std::log(100.0);
  CHECK(anharmonic_reference(0, L).m_bar == doctest::Approx(500).epsilon(1e-12));
  CHECK(anharmonic_reference(1, L).m_bar == doctest::Approx(505).epsilon(1e-12));
  CHECK(double_well_reference(4, L).m_bar == doctest::Approx(50 * std::sqrt(104.0)).epsilon(1e-12));
  CHECK(double_well_reference(4, L).outer);

  // m and log|a| are the Legendre pair of S: log|a| = S - u m
  for (double c2 : {0.0, 1.0, 4.0}) {
    for (double u : {0.5, 2.0, 4.0}) {
      const auto r = anharmonic_reference(c2, u);
      CHECK(r.log_a == doctest::Approx(anharmonic_S(c2, u) - u * r.m_bar).epsilon(1e-12));
      const auto d = double_well_reference(c2 + 1, u - 2);
      CHECK(d.log_a == doctest::Approx(d.S - (u - 2) * d.m_bar).epsilon(1e-12));
    }
  }
}

TEST_CASE("double-well branches meet at e^u = c^2/3") {
  for (double c2 : {1.0, 4.0, 9.0}) {
    const double ub = std::log(c2 / 3);
    const auto a = double_well_reference(c2, ub - 1e-12);
    const auto b = double_well_reference(c2, ub + 1e-12);
    CHECK_FALSE(a.outer);
    CHECK(b.outer);
    CHECK(a.S == doctest::Approx(b.S).epsilon(1e-9));
    CHECK(a.m_bar == doctest::Approx(b.m_bar).epsilon(1e-9));
    CHECK(a.log_a == doctest::Approx(b.log_a).epsilon(1e-9));
    CHECK(a.m_bar == doctest::Approx(c2 / 3 * std::sqrt(c2 / 3)).epsilon(1e-9));
  }
}

TEST_CASE("log corrections shift S and S0 as stated") {
  for (double c2 : {0.0, 2.0}) {
    for (double u : {1.0, 3.0}) {
      const double x = std::exp(u);
      CHECK(anharmonic_delta_S(c2, u) == doctest::Approx(-0.5 * std::log(x + c2)));
      // S'' of the leading profile
      const double d2 = 0.75 * std::pow(x, 1.5) + 0.25 * c2 * std::sqrt(x);
      CHECK(anharmonic_delta_S0(c2, u) == doctest::Approx(-0.5 * std::log(d2)));
    }
  }
}

TEST_CASE("quadratic S: exact transform") {
  const auto g = sample([](double u) { return 0.5 * u * u; }, 1.0, 3.0, 21);
  const auto plain = curve_from_samples(g.u, g.S, 0.5, {false});
  REQUIRE(plain.samples.size() == 21);
  for (const auto& e : plain.samples) {
    CHECK(e.m_bar == doctest::Approx(e.u - 0.5).epsilon(1e-12));
    CHECK(e.s == doctest::Approx(-0.5 * e.u * e.u).epsilon(1e-12));
  }
  const auto loop = curve_from_samples(g.u, g.S, 0.0, {true});
  REQUIRE(loop.samples.size() == 19);
  const double shift = 0.5 * std::log(2 * std::numbers::pi);
  for (const auto& e : loop.samples) {
    CHECK(e.m_bar == doctest::Approx(e.u).epsilon(1e-12));
    CHECK(e.s == doctest::Approx(-0.5 * e.u * e.u - shift).epsilon(1e-12));
    CHECK(e.S0 == doctest::Approx(0.5 * e.u * e.u - shift).epsilon(1e-12));
  }
}

TEST_CASE("pure power S: Legendre pair") {
  const double alpha = 0.7, beta = 1.3, h = 0.01;
  const auto g = sample([&](double u) { return alpha * std::exp(beta * u); }, 0.0, 4.0, 401);
  const auto c = curve_from_samples(g.u, g.S, 0.0, {false});
  for (std::size_t i = 1; i + 1 < c.samples.size(); ++i) {
    const auto& e = c.samples[i];
    const double m = alpha * beta * std::exp(beta * e.u);
    CHECK(e.m_bar == doctest::Approx(m).epsilon(beta * beta * h * h));
    CHECK(e.s == doctest::Approx(alpha * std::exp(beta * e.u) * (1 - beta * e.u)).epsilon(1e-4));
  }
}

TEST_CASE("corrected anharmonic S reproduces the log-corrected estimate") {
  // S with the WKB prefactor, then the one-loop term: the transform gives
  // (1/3)(2m + 5/2)(1 - log(2m + 5/2)) - 1/2 log(3 pi / 2).
  const auto g = sample([](double u) { return anharmonic_S(0, u) + anharmonic_delta_S(0, u); }, 1.5, 5.0, 351);
  const auto c = curve_from_samples(g.u, g.S, 0.0);
  const double offset = -0.5 * std::log(1.5 * std::numbers::pi);
  for (double m = 10; m <= 500; m += 10) {
    const double s = predict_coeff_log(c, m);
    CHECK(s - anharmonic_corrected(m) == doctest::Approx(offset).epsilon(1e-4));
    CHECK(s - offset == doctest::Approx(anharmonic_corrected(m)).epsilon(1e-2));
  }
}

TEST_CASE("curve invariants: round trip and reciprocity") {
  const auto g = sample([](double u) { return anharmonic_S(1, u) + anharmonic_delta_S(1, u); }, 1.0, 4.0, 121);
  const auto c = curve_from_samples(g.u, g.S, 0.0);
  std::vector<double> p, F0, u, m, s;
  for (const auto& e : c.samples) {
    p.push_back(e.m_bar + c.nu);
    F0.push_back(-e.s);
    u.push_back(e.u);
    m.push_back(e.m_bar);
    s.push_back(e.s);
  }
  const auto back = inverse(SampledFunction(p, F0));
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    CHECK(back.grid()[i] == doctest::Approx(u[i]).epsilon(1e-4));
    CHECK(back.values()[i] == doctest::Approx(c.samples[i].S0).epsilon(1e-5));
  }
  const SampledFunction mu(u, m), sm(m, s);
  for (std::size_t i = 2; i + 2 < u.size(); ++i) {
    CHECK(mu.derivative(i) == doctest::Approx(-1 / sm.second_derivative(i)).epsilon(5e-3));
  }
}

TEST_CASE("coefficient interpolation") {
  const auto c = crude_anharmonic();
  CHECK(predict_coeff_log(c, c.m_min()) == doctest::Approx(c.samples.front().s).epsilon(1e-14));
  CHECK(predict_coeff_log(c, c.m_max()) == doctest::Approx(c.samples.back().s).epsilon(1e-14));
  CHECK(predict_coeff_log(c, 50) == doctest::Approx(-120.172339532936).epsilon(1e-6));
  for (double m = 5; m < 2000; m *= 1.7) CHECK(predict_coeff_log(c, m) == doctest::Approx(anharmonic_uncorrected(m)).epsilon(1e-6));
  CHECK_THROWS_AS(predict_coeff_log(c, c.m_min() - 1e-3), ExtrapolationError);
  CHECK_THROWS_AS(predict_coeff_log(c, c.m_max() + 1), ExtrapolationError);
}

TEST_CASE("term count and peak from the crude anharmonic curve") {
  const auto c = crude_anharmonic();
  // root of (2/3) M (1 - log 2M) + M log 100 = -100 log 10
  CHECK(predict_num_terms(c, 100, 100) == 1672);
  // terms first drop below 1 (root at 1359.14)
  CHECK(predict_num_terms(c, 100, 0) == 1360);
  const auto peak = predict_max_term(c, 100);
  CHECK(peak.m_peak == doctest::Approx(500).epsilon(1e-3));
  CHECK(peak.log10_max_term == doctest::Approx(144.764827301084).epsilon(1e-5));
  CHECK_THROWS_AS(predict_num_terms(c, 1.0, 10), ExtrapolationError);
  CHECK_THROWS_AS(predict_num_terms(c, 100, 1e6), UnreachableCriterion);
  CHECK_THROWS_AS(predict_num_terms(c, -1, 10), InvalidInput);
}

TEST_CASE("double-well inner branch from the WKB profile") {
  ProfileOptions po;
  po.wkb.order = WkbOrder::Leading;
  const auto profile = s_profile(double_well_x_form(Rational(4)), uniform_grid(-2.0, 0.2, 45), po);
  const auto c = curve_from_profile(profile, 0.0, {false});
  for (double m : {0.8, 1.0, 1.3, 1.5}) {
    const double u = inner_u(4, m);
    CHECK(predict_coeff_log(c, m) == doctest::Approx(double_well_reference(4, u).log_a).epsilon(1e-2));
  }
}

TEST_CASE("curve preconditions") {
  const auto concave = sample([](double u) { return -u * u; }, 0, 1, 11);
  CHECK_THROWS_AS(curve_from_samples(concave.u, concave.S, 0), NonConvexError);
  const auto few = sample([](double u) { return u * u; }, 0, 1, 8);
  CHECK_THROWS_AS(curve_from_samples(few.u, few.S, 0), InvalidInput);
  auto uneven = sample([](double u) { return u * u; }, 0, 1, 11);
  uneven.u[3] += 0.01;
  CHECK_THROWS_AS(curve_from_samples(uneven.u, uneven.S, 0), InvalidInput);
}

TEST_CASE("estimate CSV") {
  const auto g = sample([](double u) { return 0.5 * u * u; }, 1.0, 3.0, 9);
  std::ostringstream os;
  write_estimate_csv(os, curve_from_samples(g.u, g.S, 0, {false}));
  std::string line;
  std::istringstream in(os.str());
  std::getline(in, line);
  CHECK(line == "u,m_bar,log_abs_a,log10_max_term");
  std::getline(in, line);
  CHECK(line == "1,1,-0.5,0.217147241");
}

TEST_CASE("estimate for a problem") {
  EstimateOptions opt;
  opt.solution.branch = Branch::Nu1;
  const auto r = estimate(anharmonic_x_form(Rational(0)), 100, 100, opt);
  CHECK(r.nu == 0.0);
  CHECK(r.max_term.m_peak == doctest::Approx(500).epsilon(0.01));
  CHECK(r.num_terms == doctest::Approx(1.7e3).epsilon(0.03));

  CanonicalProblem degenerate{0, 0, {Rational(1)}, 1.0};
  EstimateOptions log_opt;
  log_opt.solution.branch = Branch::Log;
  CHECK_THROWS_AS(estimate(degenerate, 10, 10, log_opt), LogCaseRefused);
}
