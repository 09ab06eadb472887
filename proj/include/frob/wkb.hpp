#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "frob/ode.hpp"

namespace frob {

using cdouble = std::complex<double>;

/// Which parts of the WKB amplitude enter log psi.
enum class WkbOrder {
  /// Exponent only: (1/s) int_0^z sqrt(sum_n v_n t^{n+1}) dt / t (Langer form)
  /// or (1/s) int_0^z Q dt (ordinary form). Reproduces the closed-form
  /// profiles of the anharmonic and double-well oscillators exactly.
  Leading,
  /// Full leading-order WKB: z^nu sqrt(Q0/Q(z)) exp(+-(1/s) int [Q - Q0] dt/t),
  /// or sqrt(Q0/Q(z)) exp((1/s) int Q dt) at an ordinary point.
  Full,
};

enum class WkbBranch { Plus, Minus };

char to_char(WkbBranch b);

struct WkbOptions {
  WkbOrder order = WkbOrder::Full;
  /// Langer form; default: Langer unless (nu+, nu-) = (1, 0).
  std::optional<bool> langer;
  /// Relative tolerance of the adaptive quadrature.
  double rel_tol = 1e-9;
};

/// True when the canonical problem is in ordinary-point form (nu- = 0, nu+ = 1).
bool is_ordinary_form(const CanonicalProblem& cp);

/// Langer:   Q^2(z) = s^2 (nu+ - nu-)^2 / 4 + sum_n v_n z^{n+1}
/// ordinary: Q^2(z) = sum_{n>=1} v_n z^{n-1}   (requires ordinary-point form)
cdouble q_squared(const CanonicalProblem& cp, cdouble z, bool langer);

/// Coefficients (ascending powers of t) of the polynomial under the square
/// root for the given order and form.
std::vector<cdouble> q_squared_coefficients(const CanonicalProblem& cp, bool langer, WkbOrder order);

struct LogPsi {
  double log_modulus = 0.0;
  double phase = 0.0;
};

/// log psi(z) along the straight ray from 0 to z, with the square root
/// continued from the principal branch at the ray's first sample.
/// Throws PathObstruction when a zero of Q^2 lies within 1e-6 |z| of the ray.
LogPsi wkb_log_psi(const CanonicalProblem& cp, cdouble z, WkbBranch branch, const WkbOptions& options = {});

struct WkbProfile {
  std::vector<double> u;
  std::vector<double> S;
  /// In {0} or [pi, 2 pi): with real coefficients phi and 2 pi - phi give
  /// the same modulus, and the representative with cos(phi/2) <= 0 is kept.
  std::vector<double> phi_star;
  std::vector<WkbBranch> branch;
};

struct ProfileOptions {
  WkbOptions wkb;
  int n_phi = 64;
  /// Maximizing phase is refined to this absolute accuracy.
  double phi_tol = 1e-6;
  int max_retries = 8;
  /// Grid points are independent; > 1 spreads them over threads.
  int jobs = 1;
};

/// S(u) = max over phi and both branches of log|psi(e^{u + i phi})|.
/// A coarse scan over n_phi phases is refined by Brent's method.
WkbProfile s_profile(const CanonicalProblem& cp, const std::vector<double>& u, const ProfileOptions& options = {});

/// u_i = a + (b - a) i / (n - 1).
std::vector<double> uniform_grid(double a, double b, int n);

/// CSV `u,S,phi_star,branch`.
void write_profile_csv(std::ostream& os, const WkbProfile& profile);

// Oscillator fixtures in the x = y^2 form. The anharmonic
//   -Psi'' + (y^2 + c^2)^2 Psi = 0
// becomes nu+ = 1/2, nu- = 0, v = [c^4/4, c^2/2, 1/4]; the double well flips
// the sign of c^2.

CanonicalProblem anharmonic_x_form(const Rational& c2);
CanonicalProblem double_well_x_form(const Rational& c2);

}  // namespace frob
