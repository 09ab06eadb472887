#include <doctest.h>

#include <cmath>
#include <random>

#include "frob/error.hpp"
#include "frob/ode.hpp"

using namespace frob;

namespace {

Rational frac(int n, int d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

ODEProblem bessel(long n2) {
  return ODEProblem(Poly{0, 0, 1}, Poly{0, 1}, Poly{-n2, 0, 1});
}

}  // namespace

TEST_CASE("polynomial basics") {
  const Poly p{1, 2, 0, 0};
  CHECK(p.degree() == 1);
  CHECK(Poly{}.degree() == -1);
  CHECK(Poly{0, 0}.is_zero());
  CHECK(p(QComplex(3)) == QComplex(7));
  CHECK(p[5].is_zero());
  CHECK(Poly{0, 0, 1}.shifted(QComplex(2)) == Poly({4, 4, 1}));
  CHECK(Poly{0, 3}.divided_by_z() == Poly{3});
  CHECK(Poly{1}.times_z() == Poly({0, 1}));
  CHECK_THROWS(Poly{1, 1}.divided_by_z());
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(ODEProblem(Poly{}, Poly{1}, Poly{1}), InvalidInput);
  std::vector<QComplex> big(66);
  big.back() = QComplex(1);
  CHECK_THROWS_AS(ODEProblem(Poly{1}, Poly(big), Poly{}), InvalidInput);
  big.pop_back();
  big.back() = QComplex(1);
  CHECK_NOTHROW(ODEProblem(Poly{1}, Poly(big), Poly{}));
}

TEST_CASE("classification of the origin") {
  CHECK(classify_origin(ODEProblem(Poly{1}, Poly{}, Poly{-1})) == PointClass::Ordinary);
  CHECK(classify_origin(bessel(0)) == PointClass::RegularSingularB);
  CHECK(classify_origin(ODEProblem(Poly{0, 1}, Poly{2}, Poly{1})) == PointClass::RegularSingularA);
  // z^3 psi'' + psi = 0
  CHECK(classify_origin(ODEProblem(Poly{0, 0, 0, 1}, Poly{}, Poly{1})) == PointClass::Irregular);
  // common factors of z are removed first
  CHECK(classify_origin(ODEProblem(Poly{0, 1}, Poly{0}, Poly{0, -1})) == PointClass::Ordinary);
}

TEST_CASE("indicial roots") {
  auto d = indicial_roots(bessel(0));
  CHECK(d.index_case == IndexCase::Degenerate);
  CHECK(*d.nu1_exact == QComplex());
  CHECK(*d.nu2_exact == QComplex());

  d = indicial_roots(bessel(1));
  CHECK(d.index_case == IndexCase::IntegerDiff);
  CHECK(d.ell == 2);
  CHECK(*d.nu1_exact == QComplex(-1));
  CHECK(*d.nu2_exact == QComplex(1));

  d = indicial_roots(ODEProblem(Poly{0, 1}, Poly({QComplex(Rational(1, 2))}), Poly{1}));
  CHECK(d.point_class == PointClass::RegularSingularA);
  CHECK(d.index_case == IndexCase::NonIntegerDiff);
  CHECK(*d.nu1_exact == QComplex());
  CHECK(*d.nu2_exact == QComplex(Rational(1, 2)));

  // nu^2 - 2 = 0: irrational roots ordered by real part
  d = indicial_roots(bessel(2));
  CHECK_FALSE(d.exact());
  CHECK(d.index_case == IndexCase::NonIntegerDiff);
  CHECK(d.nu2(128).re().to_double() == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.nu1(128).re().to_double() == doctest::Approx(-std::sqrt(2.0)));

  // nu^2 + 1 = 0: complex pair
  d = indicial_roots(ODEProblem(Poly{0, 0, 1}, Poly{0, 1}, Poly{1}));
  CHECK(d.index_case == IndexCase::NonIntegerDiff);
  CHECK(*d.nu2_exact - *d.nu1_exact != QComplex());

  CHECK_THROWS_AS(indicial_roots(ODEProblem(Poly{1}, Poly{}, Poly{1})), UnsupportedClassification);
  CHECK_THROWS_AS(indicial_roots(ODEProblem(Poly{0, 0, 0, 1}, Poly{}, Poly{1})), UnsupportedClassification);
}

TEST_CASE("index shift") {
  const ODEProblem s = shift_index(bessel(1), QComplex(1));
  CHECK(s.p == Poly({0, 1}));
  CHECK(s.q == Poly{3});
  CHECK(s.r == Poly({0, 1}));
  const auto d = indicial_roots(s);
  CHECK(*d.nu1_exact == QComplex(-2));

  const ODEProblem b0 = bessel(0);
  const ODEProblem id = shift_index(b0, QComplex());
  CHECK(id.p == b0.p.divided_by_z());
  CHECK(id.q == b0.q.divided_by_z());
  CHECK(id.r == b0.r.divided_by_z());

  CHECK_THROWS_AS(shift_index(bessel(1), QComplex(Rational(1, 2))), InvalidShift);
}

TEST_CASE("canonical form") {
  ODEProblem f = from_canonical({1, 0, {0}});
  CHECK(f.p == Poly({0, 0, 1}));
  CHECK(f.q.is_zero());
  CHECK(f.r.is_zero());
  auto d = indicial_roots(f);
  CHECK(*d.nu1_exact == QComplex());
  CHECK(*d.nu2_exact == QComplex(1));

  f = from_canonical({0, 0, {1}});
  CHECK(f.r == Poly({0, -1}));
  d = indicial_roots(f);
  CHECK(d.index_case == IndexCase::Degenerate);

  // y^4 oscillator in x = y^2
  f = from_canonical({Rational(1, 2), 0, {0, 0, Rational(1, 4)}});
  CHECK(f.p == Poly({0, 0, 1}));
  CHECK(f.q == Poly({QComplex(), QComplex(Rational(1, 2))}));
  CHECK(f.r == Poly({QComplex(), QComplex(), QComplex(), QComplex(Rational(-1, 4))}));
  d = indicial_roots(f);
  CHECK(*d.nu1_exact == QComplex());
  CHECK(*d.nu2_exact == QComplex(Rational(1, 2)));
  // back in y the exponents double
  CHECK(QComplex(2) * *d.nu2_exact == QComplex(1));
}

TEST_CASE("canonical roots are exact") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 12);
  for (int k = 0; k < 200; ++k) {
    const Rational a = frac(num(rng), den(rng)), b = frac(num(rng), den(rng));
    CanonicalProblem cp{a, b, {frac(num(rng), den(rng)), frac(num(rng), den(rng))}};
    const auto d = indicial_roots(from_canonical(cp));
    REQUIRE(d.exact());
    const Rational lo = std::min(a, b), hi = std::max(a, b);
    CHECK(*d.nu1_exact == QComplex(lo));
    CHECK(*d.nu2_exact == QComplex(hi));
    const Rational diff = hi - lo;
    if (diff == 0) {
      CHECK(d.index_case == IndexCase::Degenerate);
    } else if (diff.get_den() == 1) {
      CHECK(d.index_case == IndexCase::IntegerDiff);
      CHECK(d.ell == diff.get_num().get_si());
    } else {
      CHECK(d.index_case == IndexCase::NonIntegerDiff);
    }
  }
}

TEST_CASE("recentering") {
  const ODEProblem a(Poly{0, 1}, Poly{1}, Poly{});
  const ODEProblem a1 = recenter(a, QComplex(1));
  CHECK(a1.p == Poly({1, 1}));
  CHECK(a1.center == QComplex(1));
  CHECK(classify_origin(a1) == PointClass::Ordinary);

  const ODEProblem b = bessel(0);
  const ODEProblem same = recenter(b, QComplex());
  CHECK(same.p == b.p);
  CHECK(same.q == b.q);
  CHECK(same.r == b.r);

  const ODEProblem b2 = recenter(b, QComplex(2));
  CHECK(b2.p == Poly({4, 4, 1}));
  CHECK(b2.q == Poly({2, 1}));
  CHECK(b2.r == Poly({4, 4, 1}));
  CHECK(recenter(b2, QComplex(1)).center == QComplex(3));
}

TEST_CASE("recentering away from zeros of p gives an ordinary point") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  const ODEProblem airy_like(Poly{0, 0, 1, 3}, Poly{1, 0, -2}, Poly{0, 1});
  for (int k = 0; k < 100; ++k) {
    const QComplex z1(frac(num(rng), den(rng)), frac(num(rng), den(rng)));
    if (airy_like.p(z1).is_zero()) continue;
    CHECK(classify_origin(recenter(airy_like, z1)) == PointClass::Ordinary);
  }
}

TEST_CASE("singular points and convergence radius") {
  // p = z (z - 2)(z + 1i)
  const ODEProblem prob(Poly({QComplex(), QComplex(0, -2), QComplex(-2, 1), QComplex(1)}), Poly{1}, Poly{1});
  auto sp = singular_points(prob);
  CHECK(sp.size() == 3);
  CHECK(convergence_radius(prob) == doctest::Approx(1.0));
  CHECK(convergence_radius(prob, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(convergence_radius(prob, {2.0, 1.0}) == doctest::Approx(1.0));
  CHECK(std::isinf(convergence_radius(ODEProblem(Poly{1}, Poly{}, Poly{-1}))));
  CHECK(convergence_radius(bessel(0), {2.0, 0.0}) == doctest::Approx(2.0));
}
