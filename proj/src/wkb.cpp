#include "frob/wkb.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>

#include "frob/error.hpp"
#include "frob/poly_roots.hpp"

namespace frob {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kObstructionDistance = 1e-6;
constexpr double kMaxRotation = 0.5;  // radians between tracking nodes
constexpr int kInitialNodes = 64;
constexpr int kMaxBisections = 40;
constexpr unsigned kMaxDepth = 10;  // adaptive quadrature levels per node interval

double to_double(const Rational& q) { return q.get_d(); }

cdouble horner(const std::vector<cdouble>& c, cdouble t) {
  cdouble acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

bool resolve_langer(const CanonicalProblem& cp, const WkbOptions& options) {
  const bool langer = options.langer.value_or(!is_ordinary_form(cp));
  if (!langer && !is_ordinary_form(cp)) {
    throw InvalidInput("the non-Langer WKB form needs nu+ = 1, nu- = 0");
  }
  return langer;
}

// Pieces of log psi shared by both branches.
struct RayIntegral {
  cdouble integral;  // int along the ray, without the 1/s factor
  cdouble Q0;
  cdouble Qz;
};

RayIntegral integrate_ray(const std::vector<cdouble>& coeffs, cdouble z, bool langer, WkbOrder order,
                          double rel_tol) {
  const double absz = std::abs(z);
  // Closest approach to each turning point; the integrand has a square-root
  // kink there, so it becomes a node boundary.
  std::vector<double> kinks;
  for (const cdouble& r : polynomial_roots(coeffs)) {
    if (std::abs(r) == 0.0) continue;
    const double along = std::real(r / z);
    if (along > 0.0 && along < 1.0) kinks.push_back(std::sqrt(along));
    if (distance_to_segment(r, 0.0, z) < kObstructionDistance * absz) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "turning point %.6g%+.6gi lies on the ray to %.6g%+.6gi", r.real(), r.imag(),
                    z.real(), z.imag());
      throw PathObstruction(buf);
    }
  }

  auto q2 = [&](double tau) { return horner(coeffs, z * (tau * tau)); };
  auto pick = [](cdouble c, cdouble ref) { return std::real(c * std::conj(ref)) >= 0.0 ? c : -c; };

  struct Node {
    double tau;
    cdouble w;
  };
  std::vector<Node> nodes;
  nodes.push_back({0.0, std::sqrt(coeffs.empty() ? cdouble{} : coeffs[0])});

  // Appends tb (and any bisection points) after nodes.back().
  auto advance = [&](auto& self, double tb, int depth) -> void {
    const Node a = nodes.back();
    cdouble wb = std::sqrt(q2(tb));
    if (std::abs(a.w) > 0.0) wb = pick(wb, a.w);
    const bool rotates = std::abs(a.w) > 0.0 && std::abs(std::arg(wb / a.w)) > kMaxRotation;
    if (rotates && depth < kMaxBisections) {
      self(self, 0.5 * (a.tau + tb), depth + 1);
      self(self, tb, depth + 1);
      return;
    }
    nodes.push_back({tb, wb});
  };
  std::vector<double> taus;
  for (int i = 1; i <= kInitialNodes; ++i) taus.push_back(static_cast<double>(i) / kInitialNodes);
  taus.insert(taus.end(), kinks.begin(), kinks.end());
  std::sort(taus.begin(), taus.end());
  for (double t : taus)
    if (t > nodes.back().tau) advance(advance, t, 0);

  const cdouble Q0 = nodes.front().w;
  const bool subtract = langer && order == WkbOrder::Full;
  cdouble total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const cdouble ref = nodes[i + 1].w;
    auto integrand = [&](double tau) -> cdouble {
      const cdouble w = pick(std::sqrt(q2(tau)), ref);
      if (langer) return (subtract ? w - Q0 : w) * (2.0 / tau);  // dt / t = 2 dtau / tau
      return w * (2.0 * tau) * z;                                 // dt = 2 z tau dtau
    };
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, nodes[i].tau,
                                                                            nodes[i + 1].tau, kMaxDepth, rel_tol, &err);
  }
  return {total, Q0, nodes.back().w};
}

struct BothBranches {
  LogPsi plus;
  LogPsi minus;
};

BothBranches log_psi_both(const CanonicalProblem& cp, cdouble z, const WkbOptions& options) {
  if (z == cdouble{}) throw InvalidInput("WKB amplitude needs z != 0");
  const bool langer = resolve_langer(cp, options);
  const auto coeffs = q_squared_coefficients(cp, langer, options.order);
  const RayIntegral ray = integrate_ray(coeffs, z, langer, options.order, options.rel_tol);
  const cdouble exponent = ray.integral / cp.s;

  cdouble prefactor = 0.0;
  cdouble nu_plus = 0.0, nu_minus = 0.0;
  if (options.order == WkbOrder::Full) {
    // sqrt(Q0 / Q(z)); normalised to 1 / sqrt(Q(z)) when Q0 vanishes
    prefactor = -0.5 * std::log(ray.Qz);
    if (std::abs(ray.Q0) > 0.0) prefactor += 0.5 * std::log(ray.Q0);
    if (langer) {
      nu_plus = to_double(cp.nu_plus);
      nu_minus = to_double(cp.nu_minus);
    }
  }
  const cdouble logz(std::log(std::abs(z)), std::arg(z));
  const cdouble lp = nu_plus * logz + prefactor + exponent;
  const cdouble lm = nu_minus * logz + prefactor - exponent;
  return {{lp.real(), lp.imag()}, {lm.real(), lm.imag()}};
}

}  // namespace

char to_char(WkbBranch b) { return b == WkbBranch::Plus ? '+' : '-'; }

bool is_ordinary_form(const CanonicalProblem& cp) { return cp.nu_plus == 1 && cp.nu_minus == 0; }

std::vector<cdouble> q_squared_coefficients(const CanonicalProblem& cp, bool langer, WkbOrder order) {
  std::vector<cdouble> c;
  if (langer) {
    const double d = to_double(cp.nu_plus - cp.nu_minus);
    c.push_back(order == WkbOrder::Full ? 0.25 * cp.s * cp.s * d * d : 0.0);
    for (const auto& v : cp.v) c.push_back(to_double(v));
  } else {
    if (!is_ordinary_form(cp)) throw InvalidInput("the non-Langer WKB form needs nu+ = 1, nu- = 0");
    for (std::size_t n = 1; n < cp.v.size(); ++n) c.push_back(to_double(cp.v[n]));
  }
  while (!c.empty() && c.back() == cdouble{}) c.pop_back();
  return c;
}

cdouble q_squared(const CanonicalProblem& cp, cdouble z, bool langer) {
  return horner(q_squared_coefficients(cp, langer, WkbOrder::Full), z);
}

LogPsi wkb_log_psi(const CanonicalProblem& cp, cdouble z, WkbBranch branch, const WkbOptions& options) {
  const BothBranches both = log_psi_both(cp, z, options);
  return branch == WkbBranch::Plus ? both.plus : both.minus;
}

namespace {

struct PhaseMax {
  double S;
  double phi;
  WkbBranch branch;
};

PhaseMax maximize_phase(const CanonicalProblem& cp, double u, const ProfileOptions& opt) {
  const double r = std::exp(u);
  const double step = kTwoPi / opt.n_phi;
  auto at = [&](double phi) { return log_psi_both(cp, std::polar(r, phi), opt.wkb); };

  PhaseMax best{-std::numeric_limits<double>::infinity(), 0.0, WkbBranch::Plus};
  auto offer = [&](double value, double phi, WkbBranch b) {
    // strict improvement, so exact ties keep the earlier (smaller) phase
    if (!std::isfinite(best.S) || value > best.S + 1e-12 * std::abs(best.S)) best = {value, phi, b};
  };
  for (int j = 0; j < opt.n_phi; ++j) {
    const double phi0 = j * step;
    for (int attempt = 0;; ++attempt) {
      // offsets grow geometrically: the clearance needed scales with |z|
      const double phi = attempt == 0 ? phi0 : phi0 + std::ldexp(1e-3 * step, attempt - 1);
      try {
        const BothBranches v = at(phi);
        offer(v.plus.log_modulus, phi, WkbBranch::Plus);
        offer(v.minus.log_modulus, phi, WkbBranch::Minus);
        break;
      } catch (const PathObstruction&) {
        if (attempt >= opt.max_retries) throw;
      }
    }
  }

  auto objective = [&](double phi) {
    try {
      const BothBranches v = at(phi);
      return -(best.branch == WkbBranch::Plus ? v.plus : v.minus).log_modulus;
    } catch (const PathObstruction&) {
      return std::numeric_limits<double>::max();
    }
  };
  const int bits = std::clamp(static_cast<int>(std::ceil(-std::log2(opt.phi_tol / kTwoPi))) + 2, 8, 52);
  std::uintmax_t iters = 200;
  const auto [phi, neg] =
      boost::math::tools::brent_find_minima(objective, best.phi - step, best.phi + step, bits, iters);
  if (-neg >= best.S) {
    best.S = -neg;
    best.phi = phi;
  }
  best.phi = std::fmod(best.phi, kTwoPi);
  if (best.phi < 0) best.phi += kTwoPi;
  if (best.phi >= kTwoPi - opt.phi_tol || best.phi <= opt.phi_tol) best.phi = 0.0;
  // Real coefficients: the conjugate ray has the same modulus on the same
  // branch. Report the representative with cos(phi/2) <= 0.
  if (best.phi > 0.0 && best.phi < std::numbers::pi) best.phi = kTwoPi - best.phi;
  return best;
}

}  // namespace

WkbProfile s_profile(const CanonicalProblem& cp, const std::vector<double>& u, const ProfileOptions& options) {
  if (options.n_phi < 64) throw InvalidInput("profile needs n_phi >= 64");
  if (u.empty()) throw InvalidInput("profile needs at least one u value");
  WkbProfile out;
  out.u = u;
  out.S.resize(u.size());
  out.phi_star.resize(u.size());
  out.branch.resize(u.size());
  auto fill = [&](std::size_t i) {
    const PhaseMax m = maximize_phase(cp, u[i], options);
    out.S[i] = m.S;
    out.phi_star[i] = m.phi;
    out.branch[i] = m.branch;
  };
  const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  if (jobs == 1) {
    for (std::size_t i = 0; i < u.size(); ++i) fill(i);
    return out;
  }
  std::vector<std::future<void>> tasks;
  for (std::size_t k = 0; k < jobs; ++k) {
    tasks.push_back(std::async(std::launch::async, [&, k] {
      for (std::size_t i = k; i < u.size(); i += jobs) fill(i);
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

std::vector<double> uniform_grid(double a, double b, int n) {
  if (n < 2) throw InvalidInput("grid needs at least 2 points");
  if (!(b > a)) throw InvalidInput("grid needs a < b");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return g;
}

void write_profile_csv(std::ostream& os, const WkbProfile& profile) {
  os << "u,S,phi_star,branch\n";
  char buf[160];
  for (std::size_t i = 0; i < profile.u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.9g,%c\n", profile.u[i], profile.S[i], profile.phi_star[i],
                  to_char(profile.branch[i]));
    os << buf;
  }
}

CanonicalProblem anharmonic_x_form(const Rational& c2) {
  CanonicalProblem cp;
  cp.nu_plus = Rational(1, 2);
  cp.nu_minus = 0;
  cp.v = {c2 * c2 / 4, c2 / 2, Rational(1, 4)};
  return cp;
}

CanonicalProblem double_well_x_form(const Rational& c2) { return anharmonic_x_form(-c2); }

}  // namespace frob
