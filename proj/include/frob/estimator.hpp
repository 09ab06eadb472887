#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "frob/frobenius.hpp"
#include "frob/wkb.hpp"

namespace frob {

/// One point of the coefficient estimate: at u = log|z| the dominant index is
/// m_bar with log|a_m_bar| = s; S0 is the Legendre-side profile.
struct EstimateSample {
  double u;
  double m_bar;
  double s;
  double S0;
};

/// Samples ordered by u with m_bar strictly increasing. `nu` is the exponent
/// offset: m_bar + nu = S0'(u), s = S0 - u S0'.
struct EstimateCurve {
  std::vector<EstimateSample> samples;
  double nu = 0.0;

  double m_min() const { return samples.front().m_bar; }
  double m_max() const { return samples.back().m_bar; }
  double u_min() const { return samples.front().u; }
  double u_max() const { return samples.back().u; }
};

struct CurveOptions {
  /// Subtract 1/2 log(2 pi S'') from S before the transform.
  bool one_loop = true;
};

/// Curve from S(u) sampled on a uniform grid of at least 9 points. With the
/// one-loop term the two edge samples are dropped (their curvature is one
/// sided). Throws NonConvexError where S'' (or S0'') is not positive.
EstimateCurve curve_from_samples(const std::vector<double>& u, const std::vector<double>& S, double nu,
                                 const CurveOptions& options = {});
EstimateCurve curve_from_profile(const WkbProfile& profile, double nu, const CurveOptions& options = {});

/// log|a_m| by monotone cubic Hermite interpolation of (m_bar, s) with the
/// exact slopes ds/dm = -u. Throws ExtrapolationError outside the curve.
double predict_coeff_log(const EstimateCurve& curve, double m);

/// Continuous m_bar(u); throws ExtrapolationError outside the curve.
double predict_m_bar(const EstimateCurve& curve, double u);

/// Smallest integer M beyond the peak with s(M) + M log x <= -P log 10.
/// Throws ExtrapolationError when log x is outside the curve's u range and
/// UnreachableCriterion when the curve ends first.
long predict_num_terms(const EstimateCurve& curve, double x, double P);

struct MaxTerm {
  double m_peak;
  double log10_max_term;
};

/// m_peak = m_bar(log x), log10 max term = (s(m_peak) + m_peak log x) / log 10.
MaxTerm predict_max_term(const EstimateCurve& curve, double x);

/// CSV `u,m_bar,log_abs_a,log10_max_term` (the last column is the peak term at x = e^u).
void write_estimate_csv(std::ostream& os, const EstimateCurve& curve);

// Closed-form reference curves for the oscillators in x = y^2 form.

struct ReferencePoint {
  double m_bar;
  double log_a;
};

/// Leading estimate, log(S'') ignored: m = (e^{3u/2} + c^2 e^{u/2}) / 2,
/// log|a_m| = (1/3 - u/2) e^{3u/2} + c^2 (1 - u/2) e^{u/2}.
ReferencePoint anharmonic_reference(double c2, double u);
/// c = 0, explicit: (2/3) m (1 - log 2m).
double anharmonic_uncorrected(double m);
/// c = 0 with prefactor and one-loop terms: (1/3)(2m + 5/2)(1 - log(2m + 5/2)).
double anharmonic_corrected(double m);
/// Shift of S from the WKB prefactor: -1/2 log(e^u + c^2).
double anharmonic_delta_S(double c2, double u);
/// Shift of S0 from the log S'' term: -1/2 log(3/4 e^{3u/2} + 1/4 c^2 e^{u/2}).
double anharmonic_delta_S0(double c2, double u);
/// S(u) = (e^{3u/2} + 3 c^2 e^{u/2}) / 3.
double anharmonic_S(double c2, double u);

struct DoubleWellPoint {
  double S;
  double m_bar;
  double log_a;
  bool outer;  ///< e^u >= c^2/3
};

/// Piecewise closed forms for -Psi'' + (y^2 - c^2)^2 Psi = 0.
DoubleWellPoint double_well_reference(double c2, double u);

/// Profile, curve and predictions for a canonical problem at modulus x.
struct EstimateReport {
  WkbProfile profile;
  EstimateCurve curve;
  MaxTerm max_term;
  long num_terms = 0;
  double nu = 0.0;
};

struct EstimateOptions {
  ProfileOptions profile;
  CurveOptions curve;
  SolutionSpec solution;
  double du = 0.05;
};

/// Chooses the u range automatically (starting one unit below log x and
/// extending upward until the stopping criterion is reached). Throws
/// LogCaseRefused when the selected solution carries a logarithm.
EstimateReport estimate(const CanonicalProblem& cp, double x, double P, const EstimateOptions& options = {});

EstimateOptions default_estimate_options();

}  // namespace frob
