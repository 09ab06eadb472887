#include <doctest.h>

#include <cmath>
#include <random>

#include "frob/error.hpp"
#include "frob/numerics.hpp"
#include "frob/poly_roots.hpp"
#include "frob/rational.hpp"

using namespace frob;

TEST_CASE("precision plan") {
  auto p = plan_precision(50, 0);
  CHECK(p.guard_digits == 10);
  CHECK(p.working_bits >= 200);

  p = plan_precision(100, 144.8);
  CHECK(p.guard_digits == 155);
  CHECK(p.working_bits >= 847);

  CHECK(plan_precision(1000, -5).guard_digits == 10);

  CHECK_THROWS_AS(plan_precision(10, INFINITY), InvalidInput);
  CHECK_THROWS_AS(plan_precision(10, NAN), InvalidInput);
  CHECK_THROWS_AS(plan_precision(0, 1), InvalidInput);
}

TEST_CASE("precision plan is monotone and meets the bit invariant") {
  for (int P = 1; P <= 2000; P += 37) {
    for (double m = -20; m <= 400; m += 13.7) {
      const auto a = plan_precision(P, m);
      CHECK(a.working_bits >= static_cast<Bits>(std::ceil((P + a.guard_digits) * std::log2(10.0))));
      CHECK(plan_precision(P + 1, m).working_bits >= a.working_bits);
      CHECK(plan_precision(P, m + 1).working_bits >= a.working_bits);
    }
  }
}

TEST_CASE("summation under the plan matches exact rational summation") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long> num(-1'000'000'000L, 1'000'000'000L);
  std::uniform_int_distribution<long> den(1, 999'983);
  for (int P : {20, 60}) {
    for (double max_term : {0.0, 25.0}) {
      const auto plan = plan_precision(P, max_term);
      const int N = 3000;
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(max_term));
      Rational exact = 0;
      ArbReal sum(0L, plan.working_bits);
      for (int k = 0; k < N; ++k) {
        // |term| <= 10^max_term, alternating large terms force cancellation
        Rational t(num(rng), den(rng) * 1'000'000'000L);
        t *= scale;
        exact += t;
        sum += ArbReal(t, plan.working_bits);
      }
      const ArbReal err = abs(sum - ArbReal(exact, plan.working_bits * 2));
      CHECK(err.log10_abs() <= std::log10(static_cast<double>(N)) - (P + kGuardMargin / 2.0));
    }
  }
}

TEST_CASE("decimal parsing and printing") {
  const ArbReal x = ArbReal::parse("-1.25e-3", 128);
  CHECK(x.to_double() == -0.00125);
  CHECK(x.to_string(5) == "-1.2500e-3");
  CHECK(ArbReal::parse("3", 64).to_string(1) == "3e0");
  CHECK(ArbReal::parse(".5", 64).to_double() == 0.5);
  CHECK(ArbReal(0L, 64).to_string(10) == "0");
  for (const char* bad : {"", "1.2.3", "abc", "1e", "--1", "1e+", "0x10", "1 "})
    CHECK_THROWS_AS(ArbReal::parse(bad, 64), ParseError);
  CHECK_THROWS_AS(ArbReal::parse("1e99999999999", 64), ParseError);
  CHECK_THROWS_AS(ArbReal::parse("1e-99999999999", 64), ParseError);
}

TEST_CASE("decimal round trip at the carried precision") {
  std::mt19937_64 rng(7);
  for (Bits bits : {53, 200, 1000}) {
    for (int k = 0; k < 20; ++k) {
      const Rational q(static_cast<long>(rng() % 2000001) - 1000000, static_cast<long>(rng() % 9999) + 1);
      const ArbReal x(q, bits);
      const ArbReal y = ArbReal::parse(x.to_string_roundtrip(), bits);
      CHECK(x == y);
    }
  }
}

TEST_CASE("mixed precision arithmetic keeps the larger precision") {
  const ArbReal a(1L, 64), b(3L, 256);
  CHECK((a / b).precision() == 256);
  CHECK((b * a).precision() == 256);
  CHECK((a + 2L).precision() == 64);
  const ArbComplex z(ArbReal(1L, 80), ArbReal(2L, 80));
  CHECK(z.re().precision() == z.im().precision());
}

TEST_CASE("elementary functions") {
  const Bits b = 200;
  const ArbReal one(1L, b);
  CHECK(log(exp(one)).to_string(50) == one.to_string(50));
  CHECK((pi(b) - 4 * atan2(one, one)).log10_abs() < -58);
  CHECK(sqrt(ArbReal(2L, b)).to_string(30) == "1.41421356237309504880168872421e0");
  CHECK(pow10(-3, b).to_string(5) == "1.0000e-3");

  const ArbComplex i(ArbReal(0L, b), ArbReal(1L, b));
  const ArbComplex e_ipi = exp(i * ArbComplex(pi(b)));
  CHECK((e_ipi + 1L).log10_abs() < -55);
  // principal branch: log(-1) = i pi
  const ArbComplex l = log(ArbComplex(-1L, b));
  CHECK((l.im() - pi(b)).log10_abs() < -55);
  CHECK(sqrt(ArbComplex(-4L, b)).to_string(5) == "0,2.0000e0");
  CHECK(pow(ArbComplex(b), ArbComplex(0L, b)).to_string(3) == "1.00e0");
  CHECK(pow(ArbComplex(b), ArbComplex(ArbReal(Rational(1, 2), b))).is_zero());
  CHECK(ArbComplex::parse("1.5,-2", 64).to_string(3) == "1.50e0,-2.00e0");
}

TEST_CASE("log10 of huge magnitudes") {
  ArbReal big(1L, 64);
  mpfr_mul_2si(big.get(), big.get(), 1'000'000, MPFR_RNDN);
  CHECK(big.log10_abs() == doctest::Approx(1'000'000 * std::log10(2.0)).epsilon(1e-12));
  CHECK(std::isinf(ArbReal(0L, 64).log10_abs()));
}

TEST_CASE("exact rationals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("-1.25e-3") == Rational(-1, 800));
  CHECK(parse_rational("2") == 2);
  CHECK(parse_rational("1e3") == 1000);
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational("010") == 10);
  CHECK(parse_rational("+09/012") == Rational(3, 4));
  CHECK(parse_rational("0.0625") == Rational(1, 16));
  for (const char* bad : {"1/0", "x", "1/", "/2", "", "1.5/2"}) CHECK_THROWS_AS(parse_rational(bad), ParseError);
  CHECK(to_string(Rational(-3, 4)) == "-3/4");

  CHECK(exact_sqrt(Rational(9, 4)) == Rational(3, 2));
  CHECK_FALSE(exact_sqrt(Rational(2)).has_value());
  CHECK(exact_sqrt(QComplex(-4)) == QComplex(0, 2));
  CHECK(exact_sqrt(QComplex(3, 4)) == QComplex(2, 1));
  CHECK_FALSE(exact_sqrt(QComplex(0, 1)).has_value());

  const QComplex a(Rational(1, 2), Rational(-1)), b(3, 2);
  CHECK(a * b / b == a);
  CHECK((a - a).is_zero());
  CHECK(QComplex(4).is_integer());
  CHECK_FALSE(QComplex(Rational(1, 2)).is_integer());
  CHECK(QComplex::parse("1/2,-3") == QComplex(Rational(1, 2), Rational(-3)));
  CHECK(to_string(QComplex(1, -2)) == "1,-2");
}

TEST_CASE("polynomial roots") {
  using C = std::complex<double>;
  auto sorted = [](std::vector<C> r) {
    std::sort(r.begin(), r.end(), [](C x, C y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
    return r;
  };
  const std::vector<C> quad{-1.0, 0.0, 1.0};
  auto r = sorted(polynomial_roots(quad));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] + 1.0) < 1e-14);
  CHECK(std::abs(r[1] - 1.0) < 1e-14);

  // (z - 2)(z + 3i) = z^2 + (3i - 2) z - 6i
  const std::vector<C> cplx{C(0, -6), C(-2, 3), 1.0, 0.0};
  r = sorted(polynomial_roots(cplx));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - C(0, -3)) < 1e-13);
  CHECK(std::abs(r[1] - 2.0) < 1e-13);

  const std::vector<C> constant{5.0};
  CHECK(polynomial_roots(constant).empty());

  CHECK(distance_to_segment(C(0, 1), 0.0, 2.0) == doctest::Approx(1.0));
  CHECK(distance_to_segment(C(3, 0), 0.0, 2.0) == doctest::Approx(1.0));
  CHECK(distance_to_segment(C(-3, 4), 0.0, 2.0) == doctest::Approx(5.0));
}
