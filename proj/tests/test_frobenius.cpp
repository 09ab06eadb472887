#include <doctest.h>

#include <chrono>
#include <sstream>

#include "frob/error.hpp"
#include "frob/frobenius.hpp"

using namespace frob;

namespace {

ODEProblem exp_problem() { return ODEProblem(Poly{1}, Poly{}, Poly{-1}); }
ODEProblem bessel0() { return ODEProblem(Poly{0, 0, 1}, Poly{0, 1}, Poly{0, 0, 1}); }
ODEProblem bessel1() { return ODEProblem(Poly{0, 0, 1}, Poly{0, 1}, Poly{-1, 0, 1}); }

}  // namespace

TEST_CASE("taylor coefficients of exp") {
  auto sol = make_solution<QComplex>(exp_problem(), {Branch::Auto, std::pair<QComplex, QComplex>{1, 1}}, 64);
  CoefficientStream<QComplex> s(sol);
  Rational f = 1;
  for (long m = 0; m < 20; ++m) {
    if (m > 0) f /= m;
    CHECK(s.next().a0 == QComplex(f));
  }
}

TEST_CASE("bessel zero degenerate log stream") {
  auto sol = make_solution<QComplex>(bessel0(), {Branch::Log, {}}, 64);
  CHECK(sol.kind() == SeriesKind::FrobeniusLog);
  auto t = CoefficientStream<QComplex>(sol).take(5);
  CHECK(t[0].a1 == QComplex(1));
  CHECK(t[2].a1 == QComplex(Rational(-1, 4)));
  CHECK(t[2].a0 == QComplex(Rational(1, 4)));
  CHECK(t[4].a0 == QComplex(Rational(-3, 128)));
}

TEST_CASE("exp at one") {
  auto r = evaluate(exp_problem(), {Branch::Auto, std::pair<QComplex, QComplex>{1, 1}}, QComplex(1), 50);
  CHECK(r.value.re().to_string(30) == "2.71828182845904523536028747135e0");
  CHECK(r.M_used > 30);
}

TEST_CASE("bessel J0 at one and continuation") {
  auto r = evaluate(bessel0(), {}, QComplex(1), 30);
  CHECK(r.value.re().to_string(20) == "7.6519768655796655145e-1");
  auto c = continue_along(bessel0(), r.value, r.derivative, QComplex(1), {QComplex(Rational(3, 2)), QComplex(Rational(5, 2)), QComplex(4)}, 30);
  auto d = evaluate(bessel0(), {}, QComplex(4), 30);
  CHECK((c.value - d.value).log10_abs() < -28);
  std::ostringstream os;
  write_coefficients_csv(os, make_solution<ArbComplex>(bessel1(), {Branch::Log, {}}, 128), 4, 10);
  MESSAGE(os.str());
}
