#include "frob/validation/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "frob/error.hpp"
#include "frob/estimator.hpp"
#include "frob/frobenius.hpp"
#include "frob/legendre.hpp"
#include "frob/validation/oracles.hpp"
#include "frob/wkb.hpp"

namespace frob::validation {

namespace {

using Clock = std::chrono::steady_clock;

// Collects sub-checks of one criterion.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    if (!out_.empty()) out_ += "; ";
    out_ += (ok ? "" : "FAILED ") + what;
  }
  bool ok() const { return ok_; }
  const std::string& detail() const { return out_; }

 private:
  bool ok_ = true;
  std::string out_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

QComplex q(long n, long d = 1) { return QComplex(Rational(n, d)); }

ODEProblem exp_problem() { return ODEProblem(Poly{1}, Poly{}, Poly{-1}); }
ODEProblem airy_problem() { return ODEProblem(Poly{1}, Poly{}, Poly{0, -1}); }
ODEProblem bessel_problem(const Rational& order) {
  return ODEProblem(Poly{0, 0, 1}, Poly{0, 1}, Poly(std::vector<QComplex>{QComplex(-order * order), {}, q(1)}));
}

SolutionSpec spec(Branch b, std::optional<std::pair<QComplex, QComplex>> init = std::nullopt) {
  return {b, std::move(init)};
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1. Exact-engine correctness.
void exact_engine(Verdict& v) {
  {
    const auto t0 = Clock::now();
    const auto r = evaluate(exp_problem(), spec(Branch::Auto, std::pair{q(1), q(1)}), q(1), 1000);
    const double dt = seconds_since(t0);
    const double err = log10_diff(r.value, exp_oracle(1, 1010));
    v.check(err <= -995, "e^1 at P=1000: log10 err " + fmt("%.1f", err) + " (<= -995)");
    v.check(dt < 10, "runtime " + fmt("%.2f", dt) + " s (< 10)");
  }
  {
    const auto r = evaluate(bessel_problem(0), spec(Branch::Auto), q(1), 500);
    const double err = log10_diff(r.value, bessel_j0_oracle(1, 510));
    v.check(err <= -495, "J0(1) at P=500: log10 err " + fmt("%.1f", err) + " (<= -495)");
  }
  {
    const auto prob = bessel_problem(1);
    const auto sol = make_solution<QComplex>(prob, spec(Branch::Log), 64);
    const long M = 200, through = M - sol.window();
    const long bad = first_nonzero_residual(prob, sol, M, through);
    v.check(sol.kind() == SeriesKind::FrobeniusLog && bad < 0,
            "Bessel-1 log solution: residual zero through order " + std::to_string(through) +
                (bad < 0 ? "" : " (first nonzero at " + std::to_string(bad) + ")"));
  }
}

// 2. Recursion-case coverage.
struct Fixture {
  const char* name;
  ODEProblem prob;
  SolutionSpec first, second;
  Rational wronskian_times_z_power;  // W z^k for the pair
  int z_power;
  SolutionSpec lin_a, lin_b;  // two initial data for the linearity check
  Branch lin_branch;
};

void case_coverage(Verdict& v) {
  const int P = 100;
  const QComplex z = q(1, 2);
  const std::vector<Fixture> fixtures = {
      {"ordinary (Airy)", airy_problem(), spec(Branch::Auto, std::pair{q(1), q(0)}),
       spec(Branch::Auto, std::pair{q(0), q(1)}), 1, 0, spec(Branch::Auto, std::pair{q(1), q(2)}),
       spec(Branch::Auto, std::pair{q(-3), q(5, 7)}), Branch::Auto},
      {"non-integer difference (Bessel 1/3)", bessel_problem(Rational(1, 3)), spec(Branch::Nu1), spec(Branch::Nu2),
       Rational(2, 3), 1, spec(Branch::Nu1, std::pair{q(1), q(0)}), spec(Branch::Nu1, std::pair{q(-7, 3), q(0)}),
       Branch::Nu1},
      {"equal roots (Bessel 0)", bessel_problem(0), spec(Branch::Nu2), spec(Branch::Log), 1, 1,
       spec(Branch::Log, std::pair{q(1), q(2)}), spec(Branch::Log, std::pair{q(-3), q(1, 5)}), Branch::Log},
      {"integer difference (Bessel 1)", bessel_problem(1), spec(Branch::Log), spec(Branch::Nu2), 2, 1,
       spec(Branch::Log, std::pair{q(1), q(2)}), spec(Branch::Log, std::pair{q(-3), q(1, 5)}), Branch::Log},
  };
  for (const auto& f : fixtures) {
    const std::string tag = std::string(f.name) + ": ";
    // (i) residual
    bool residual_ok = true;
    for (const auto* s : {&f.first, &f.second}) {
      const auto sol = make_solution<QComplex>(f.prob, *s, 64);
      residual_ok = residual_ok && first_nonzero_residual(f.prob, sol, 120, 120 - sol.window()) < 0;
    }
    v.check(residual_ok, tag + "residual zero");
    // (ii) Wronskian against Abel
    const auto a = evaluate(f.prob, f.first, z, P);
    const auto b = evaluate(f.prob, f.second, z, P);
    ArbComplex w = wronskian(a, b);
    for (int k = 0; k < f.z_power; ++k) w *= ArbComplex(z, w.precision());
    const double werr = log10_diff(w, f.wronskian_times_z_power);
    v.check(werr <= -(P - 10), tag + "Wronskian log10 err " + fmt("%.1f", werr));
    // (iii) linearity: data 2 a - 3 b
    const auto& ia = *f.lin_a.initial;
    const auto& ib = *f.lin_b.initial;
    const auto combo = spec(f.lin_branch, std::pair{QComplex(2) * ia.first - QComplex(3) * ib.first,
                                                    QComplex(2) * ia.second - QComplex(3) * ib.second});
    const auto ra = evaluate(f.prob, f.lin_a, z, P);
    const auto rb = evaluate(f.prob, f.lin_b, z, P);
    const auto rc = evaluate(f.prob, combo, z, P);
    const double lerr = log10_diff(rc.value, 2 * ra.value - 3 * rb.value);
    v.check(lerr <= -(P - 5), tag + "linearity log10 err " + fmt("%.1f", lerr));
  }
}

// 3. Continuation consistency.
void continuation(Verdict& v) {
  const int P = 200;
  {
    const auto prob = exp_problem();
    const auto direct = evaluate(prob, spec(Branch::Auto, std::pair{q(1), q(1)}), q(8), P);
    const auto cont = continue_along(prob, ArbComplex(1, 64), ArbComplex(1, 64), q(0), {q(2), q(4), q(8)}, P);
    const double err = log10_diff(direct.value, cont.value);
    v.check(err <= -(P - 5), "e^z 0->2->4->8: log10 diff " + fmt("%.1f", err));
  }
  {
    // z = 0 is singular: start at 2 and keep every hop shorter than the
    // distance to the origin.
    const auto prob = bessel_problem(0);
    const auto start = evaluate(prob, spec(Branch::Auto), q(2), P + 10);
    for (const auto& path : {std::vector<QComplex>{q(3), q(4)}, std::vector<QComplex>{q(3), q(4), q(6), q(8)}}) {
      const auto direct = evaluate(prob, spec(Branch::Auto), path.back(), P);
      const auto cont = continue_along(prob, start.value, start.derivative, q(2), path, P);
      const double err = log10_diff(direct.value, cont.value);
      v.check(err <= -(P - 5), "J0 2->...->" + to_string(path.back()) + ": log10 diff " + fmt("%.1f", err));
    }
  }
}

// 4. Binomial demonstration.
void binomial(Verdict& v) {
  const auto rows = binomial_demo(10);
  const auto& r5 = rows[5];
  const auto& r0 = rows[0];
  v.check(std::abs(r5.legendre - 0.252313) <= 1e-6, "N=10 x=5 Legendre " + fmt("%.7f", r5.legendre));
  v.check(std::abs(r5.exact - 0.246094) <= 1e-6, "exact " + fmt("%.7f", r5.exact));
  v.check(std::abs(r5.legendre / r5.exact - 1) <= 0.03,
          "relative gap " + fmt("%.4f", r5.legendre / r5.exact - 1) + " (<= 0.03)");
  v.check(std::abs(r0.legendre / 9.42e-4 - 1) <= 0.01, "x=0 Legendre " + fmt("%.4e", r0.legendre));
  v.check(std::abs(r0.exact - 9.765625e-4) <= 1e-9, "x=0 exact " + fmt("%.4e", r0.exact));
  v.check(r0.stirling == 0.0, "x=0 Stirling " + fmt("%g", r0.stirling));
  const auto rows50 = binomial_demo(50);
  const auto& c = rows50[25];
  v.check(std::abs(c.legendre / c.exact - 1) <= 0.02,
          "N=50 centre relative err " + fmt("%.4f", c.legendre / c.exact - 1) + " (<= 0.02)");
}

// 5. Gaussian exactness of the corrected inverse.
void gaussian(Verdict& v) {
  struct Quad {
    double a, b, c;
  };
  for (const Quad& g : {Quad{0.5, 0, 0}, Quad{0.8, -0.3, 0.1}}) {
    auto U = SampledFunction::tabulate([&](double x) { return g.a * x * x + g.b * x + g.c; }, -5, 5, 101);
    const auto back = corrected_inverse(one_loop(U).F1_function());
    double err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) {
      const double x = back.grid()[i];
      err = std::max(err, std::abs(back.values()[i] - (g.a * x * x + g.b * x + g.c)));
      err = std::max(err, std::abs(x - U.grid()[i + 1]));
    }
    const double bound = stencil_error_bound(U, 3);
    char buf[160];
    std::snprintf(buf, sizeof buf, "U = %gx^2%+gx%+g: max err %.2e <= 10 x bound %.2e", g.a, g.b, g.c, err, bound);
    v.check(err <= 10 * bound, buf);
  }
}

std::vector<double> coefficient_logs(const CanonicalProblem& cp, long count) {
  const auto sol = make_solution<QComplex>(from_canonical(cp), spec(Branch::Nu1), 64);
  CoefficientStream<QComplex> stream(sol);
  std::vector<double> out;
  for (long m = 0; m < count; ++m) {
    const auto& t = stream.next();
    out.push_back(t.a0.is_zero() ? -INFINITY : ScalarTraits<QComplex>::log10_abs(t.a0) * std::log(10.0));
  }
  return out;
}

// 6. Coefficient prediction against the log-corrected closed form.
void coefficient_prediction(Verdict& v) {
  const auto la = coefficient_logs(anharmonic_x_form(Rational(0)), 301);
  double lo = INFINITY, hi = -INFINITY;
  bool zeros_ok = true, drift_down = true;
  double prev0 = INFINITY;
  const double n1 = la[3] - anharmonic_corrected(3), n0 = la[3] - anharmonic_uncorrected(3);
  for (long m = 1; m <= 300; ++m) {
    if (m % 3 != 0) {
      zeros_ok = zeros_ok && std::isinf(la[m]);
      continue;
    }
    const double r1 = std::exp(la[m] - anharmonic_corrected(m) - n1);
    const double r0 = std::exp(la[m] - anharmonic_uncorrected(m) - n0);
    lo = std::min(lo, r1);
    hi = std::max(hi, r1);
    drift_down = drift_down && r0 <= prev0;
    prev0 = r0;
  }
  v.check(zeros_ok, "a_m = 0 unless 3 | m");
  v.check(lo >= 0.5 && hi <= 2, "corrected ratio in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] (within [0.5, 2])");
  v.check(drift_down, "uncorrected ratio decreases monotonically to " + fmt("%.4f", prev0) + " at m=300");
}

// 7. Term-count prediction.
void term_counts(Verdict& v) {
  const auto cp = anharmonic_x_form(Rational(0));
  const auto profile = s_profile(cp, uniform_grid(2.2, 6.6, 89), {});
  const auto curve = curve_from_profile(profile, 0.0);
  const auto prob = from_canonical(cp);
  for (long x : {25L, 100L}) {
    for (int P : {100, 500, 2000}) {
      const long predicted = predict_num_terms(curve, static_cast<double>(x), P);
      const long used = evaluate(prob, spec(Branch::Nu1), q(x), P).M_used;
      const double rel = static_cast<double>(predicted - used) / static_cast<double>(used);
      char buf[120];
      std::snprintf(buf, sizeof buf, "x=%ld P=%d: predicted %ld, used %ld (%+.2f%%)", x, P, predicted, used,
                    100 * rel);
      v.check(std::abs(rel) <= 0.10, buf);
    }
  }
}

// 8. Double-well envelope.
void double_well_envelope(Verdict& v) {
  const auto cp = double_well_x_form(Rational(4));
  ProfileOptions po;
  po.wkb.order = WkbOrder::Leading;
  const auto curve = curve_from_profile(s_profile(cp, uniform_grid(1.0, 4.6, 73), po), 0.0);
  const auto la = coefficient_logs(cp, 301);
  double worst = 0.0, weakest_crest = INFINITY;
  for (long w = 20; w < 300; w += 20) {
    double crest = 0.0;
    for (long m = w; m < w + 20 || (w == 280 && m <= 300); ++m) {
      const double r = std::exp(la[m] - predict_coeff_log(curve, static_cast<double>(m)));
      crest = std::max(crest, r);
      worst = std::max(worst, r);
    }
    weakest_crest = std::min(weakest_crest, crest);
  }
  v.check(worst <= 10, "max |a_m| / e^s(m) = " + fmt("%.3f", worst) + " (<= 10)");
  v.check(weakest_crest > 0.1, "smallest crest per 20-window = " + fmt("%.3f", weakest_crest) + " (> 0.1)");
}

// 9. WKB profile accuracy.
void profile_accuracy(Verdict& v) {
  ProfileOptions po;
  po.wkb.order = WkbOrder::Leading;
  const auto u = uniform_grid(1, 6, 51);
  for (int c2 : {0, 1, 4}) {
    double worst_a = 0, worst_d = 0;
    const auto pa = s_profile(anharmonic_x_form(Rational(c2)), u, po);
    const auto pd = s_profile(double_well_x_form(Rational(c2)), u, po);
    for (std::size_t i = 0; i < u.size(); ++i) {
      worst_a = std::max(worst_a, std::abs(pa.S[i] / anharmonic_S(c2, u[i]) - 1));
      worst_d = std::max(worst_d, std::abs(pd.S[i] / double_well_reference(c2, u[i]).S - 1));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "c^2=%d: rel err %.1e (anharmonic), %.1e (double well)", c2, worst_a, worst_d);
    v.check(worst_a <= 1e-3 && worst_d <= 1e-3, buf);
    if (c2 > 0) {
      const double ub = std::log(c2 / 3.0);
      const auto p = s_profile(double_well_x_form(Rational(c2)), {ub - 1e-7, ub, ub + 1e-7}, po);
      const double ref = double_well_reference(c2, ub).S;
      const double jump = std::max(std::abs(p.S[0] - p.S[2]), std::abs(p.S[1] - ref)) / ref;
      v.check(jump <= 1e-6, "c^2=" + std::to_string(c2) + " switch at e^u=c^2/3: rel jump " + fmt("%.1e", jump));
    }
  }
}

struct Entry {
  int id;
  const char* title;
  void (*run)(Verdict&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {1, "exact-engine correctness", exact_engine},
      {2, "recursion-case coverage", case_coverage},
      {3, "continuation consistency", continuation},
      {4, "binomial demo", binomial},
      {5, "Gaussian exactness", gaussian},
      {6, "coefficient prediction", coefficient_prediction},
      {7, "term-count prediction", term_counts},
      {8, "double-well envelope", double_well_envelope},
      {9, "WKB profile accuracy", profile_accuracy},
  };
  return entries;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& e : registry()) ids.push_back(e.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return e.id == id; });
  if (it == reg.end()) throw InvalidInput("no acceptance criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.title = it->title;
  const auto t0 = Clock::now();
  Verdict v;
  try {
    it->run(v);
    r.passed = v.ok();
    r.detail = v.detail();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = v.detail() + (v.detail().empty() ? "" : "; ") + "exception: " + e.what();
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  for (int id : ids.empty() ? criterion_ids() : ids) out.push_back(run_criterion(id));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + ": " + r.detail +
         buf;
}

}  // namespace frob::validation
