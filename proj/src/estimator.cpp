#include "frob/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "frob/error.hpp"
#include "frob/legendre.hpp"

namespace frob {

namespace {

constexpr double kLn10 = std::numbers::ln10;

void check_curve(const EstimateCurve& curve) {
  if (curve.samples.size() < 2) throw InvalidInput("estimate curve needs at least two samples");
}

// Index i with m_bar[i] <= m <= m_bar[i+1].
std::size_t bracket_m(const EstimateCurve& curve, double m) {
  const auto& s = curve.samples;
  if (!(m >= s.front().m_bar && m <= s.back().m_bar))
    throw ExtrapolationError("m = " + std::to_string(m) + " outside the curve range [" +
                             std::to_string(s.front().m_bar) + ", " + std::to_string(s.back().m_bar) + "]");
  auto it = std::upper_bound(s.begin(), s.end(), m,
                             [](double v, const EstimateSample& e) { return v < e.m_bar; });
  std::size_t i = static_cast<std::size_t>(it - s.begin());
  return i == 0 ? 0 : std::min(i - 1, s.size() - 2);
}

}  // namespace

EstimateCurve curve_from_samples(const std::vector<double>& u, const std::vector<double>& S, double nu,
                                 const CurveOptions& options) {
  if (u.size() != S.size()) throw InvalidInput("u and S differ in length");
  if (u.size() < 9) throw InvalidInput("estimate needs at least 9 profile points");
  for (double v : S)
    if (!std::isfinite(v)) throw InvalidInput("profile contains non-finite values");
  const SampledFunction Sf(u, S);
  if (!Sf.is_uniform()) throw InvalidInput("profile grid must be uniform");

  const auto d2 = Sf.second_derivatives();
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    if (!(d2[i] > 0)) throw NonConvexError("S''(u) is not positive", i);

  std::vector<double> ug, S0;
  if (options.one_loop) {
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
      ug.push_back(u[i]);
      S0.push_back(S[i] - 0.5 * std::log(2 * std::numbers::pi * d2[i]));
    }
  } else {
    ug = u;
    S0 = S;
  }

  const auto tr = forward(SampledFunction(ug, S0));
  EstimateCurve curve;
  curve.nu = nu;
  curve.samples.reserve(ug.size());
  for (std::size_t i = 0; i < ug.size(); ++i)
    curve.samples.push_back({ug[i], tr.p[i] - nu, -tr.F0[i], S0[i]});
  return curve;
}

EstimateCurve curve_from_profile(const WkbProfile& profile, double nu, const CurveOptions& options) {
  return curve_from_samples(profile.u, profile.S, nu, options);
}

double predict_coeff_log(const EstimateCurve& curve, double m) {
  check_curve(curve);
  const std::size_t i = bracket_m(curve, m);
  const auto& a = curve.samples[i];
  const auto& b = curve.samples[i + 1];
  const double h = b.m_bar - a.m_bar;
  const double t = (m - a.m_bar) / h;
  const double t2 = t * t, t3 = t2 * t;
  // ds/dm = -u along the curve.
  return (2 * t3 - 3 * t2 + 1) * a.s + (t3 - 2 * t2 + t) * h * (-a.u) + (-2 * t3 + 3 * t2) * b.s +
         (t3 - t2) * h * (-b.u);
}

double predict_m_bar(const EstimateCurve& curve, double u) {
  check_curve(curve);
  const auto& s = curve.samples;
  if (!(u >= s.front().u && u <= s.back().u))
    throw ExtrapolationError("u = " + std::to_string(u) + " outside the curve range");
  auto it = std::upper_bound(s.begin(), s.end(), u, [](double v, const EstimateSample& e) { return v < e.u; });
  std::size_t i = static_cast<std::size_t>(it - s.begin());
  i = i == 0 ? 0 : std::min(i - 1, s.size() - 2);
  const double t = (u - s[i].u) / (s[i + 1].u - s[i].u);
  return s[i].m_bar + t * (s[i + 1].m_bar - s[i].m_bar);
}

long predict_num_terms(const EstimateCurve& curve, double x, double P) {
  if (!(x > 0) || !std::isfinite(x)) throw InvalidInput("modulus must be positive");
  if (!(P >= 0)) throw InvalidInput("precision must be non-negative");
  const double L = std::log(x);
  const double m_peak = predict_m_bar(curve, L);
  const auto f = [&](double m) { return predict_coeff_log(curve, m) + m * L + P * kLn10; };

  long lo = static_cast<long>(std::ceil(m_peak));
  long hi = static_cast<long>(std::floor(curve.m_max()));
  if (lo > hi || f(static_cast<double>(hi)) > 0)
    throw UnreachableCriterion("stopping criterion not reached within the curve (m <= " +
                               std::to_string(curve.m_max()) + ")");
  if (f(static_cast<double>(lo)) <= 0) return lo;
  // f decreases beyond the peak: f(lo) > 0 >= f(hi).
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (f(static_cast<double>(mid)) > 0 ? lo : hi) = mid;
  }
  return hi;
}

MaxTerm predict_max_term(const EstimateCurve& curve, double x) {
  if (!(x > 0) || !std::isfinite(x)) throw InvalidInput("modulus must be positive");
  const double L = std::log(x);
  const double m = predict_m_bar(curve, L);
  return {m, (predict_coeff_log(curve, m) + m * L) / kLn10};
}

void write_estimate_csv(std::ostream& os, const EstimateCurve& curve) {
  os << "u,m_bar,log_abs_a,log10_max_term\n";
  char buf[160];
  for (const auto& e : curve.samples) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g,%.10g\n", e.u, e.m_bar, e.s,
                  (e.s + e.m_bar * e.u) / kLn10);
    os << buf;
  }
}

ReferencePoint anharmonic_reference(double c2, double u) {
  const double e3 = std::exp(1.5 * u), e1 = std::exp(0.5 * u);
  return {0.5 * (e3 + c2 * e1), (1.0 / 3 - 0.5 * u) * e3 + c2 * (1 - 0.5 * u) * e1};
}

double anharmonic_uncorrected(double m) { return (2.0 / 3) * m * (1 - std::log(2 * m)); }

double anharmonic_corrected(double m) {
  const double k = 2 * m + 2.5;
  return k * (1 - std::log(k)) / 3;
}

double anharmonic_delta_S(double c2, double u) { return -0.5 * std::log(std::exp(u) + c2); }

double anharmonic_delta_S0(double c2, double u) {
  return -0.5 * std::log(0.75 * std::exp(1.5 * u) + 0.25 * c2 * std::exp(0.5 * u));
}

double anharmonic_S(double c2, double u) { return (std::exp(1.5 * u) + 3 * c2 * std::exp(0.5 * u)) / 3; }

DoubleWellPoint double_well_reference(double c2, double u) {
  const double x = std::exp(u), r = std::exp(0.5 * u);
  if (x <= c2 / 3) {
    return {c2 * r - x * r / 3, 0.5 * r * (c2 - x), (1 - 0.5 * u) * c2 * r - (1.0 / 3 - 0.5 * u) * x * r, false};
  }
  const double w = std::sqrt(x + c2);
  return {(x + c2) * w / 3, 0.5 * x * w, ((1.0 / 3 - 0.5 * u) * x + c2 / 3) * w, true};
}

EstimateOptions default_estimate_options() { return {}; }

EstimateReport estimate(const CanonicalProblem& cp, double x, double P, const EstimateOptions& options) {
  if (!(x > 0) || !std::isfinite(x)) throw InvalidInput("modulus must be positive");
  if (!(P >= 0)) throw InvalidInput("precision must be non-negative");
  if (!(options.du > 0)) throw InvalidInput("grid step must be positive");

  const auto prob = from_canonical(cp);
  const auto sol = make_solution<QComplex>(prob, options.solution, Bits{64});
  if (sol.kind() == SeriesKind::FrobeniusLog)
    throw LogCaseRefused("the estimator does not model series with logarithmic terms");
  const double nu = to_complex_double(sol.nu()).real();

  const double L = std::log(x);
  const double lo = L - 1;
  double hi = L + 1;
  for (int attempt = 0; attempt < 12; ++attempt, hi += (hi - lo)) {
    const int n = std::max(9, static_cast<int>(std::ceil((hi - lo) / options.du)) + 1);
    EstimateReport report;
    report.nu = nu;
    report.profile = s_profile(cp, uniform_grid(lo, hi, n), options.profile);
    report.curve = curve_from_profile(report.profile, nu, options.curve);
    try {
      report.num_terms = predict_num_terms(report.curve, x, P);
    } catch (const UnreachableCriterion&) {
      continue;
    }
    report.max_term = predict_max_term(report.curve, x);
    return report;
  }
  throw UnreachableCriterion("stopping criterion not reached for u up to " + std::to_string(hi));
}

}  // namespace frob
