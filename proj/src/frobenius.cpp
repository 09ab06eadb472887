#include "frob/frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include "frob/error.hpp"

namespace frob {

namespace {

double log10_mpz(const mpz_class& v) {
  if (sgn(v) == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log10(std::abs(mant)) + static_cast<double>(exp2) * std::log10(2.0);
}

double log10_rational(const Rational& q) {
  return log10_mpz(q.get_num()) - log10_mpz(q.get_den());
}

// log10(10^a + 10^b) without overflow.
double log10_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(b) && b < 0) return a;
  return a + std::log10(1.0 + std::pow(10.0, b - a));
}

template <class S>
std::vector<S> lift(const Poly& p, Bits bits) {
  std::vector<S> out;
  out.reserve(p.coefficients().size());
  for (const auto& c : p.coefficients()) out.push_back(ScalarTraits<S>::from(c, bits));
  return out;
}

int window_of(std::size_t np, std::size_t nq, std::size_t nr) {
  const int dp = static_cast<int>(np) - 1;
  const int dq = static_cast<int>(nq) - 1;
  const int dr = static_cast<int>(nr) - 1;
  return std::max({dp, dq + 1, dr + 2, 1});
}

}  // namespace

double ScalarTraits<QComplex>::log10_abs(const QComplex& z) {
  if (z.is_zero()) return -std::numeric_limits<double>::infinity();
  return 0.5 * log10_rational(z.norm());
}

// ---------------------------------------------------------------------------
// RecursionKernel

template <class S>
RecursionKernel<S>::RecursionKernel(std::vector<S> p, std::vector<S> q, std::vector<S> r, Bits bits)
    : p_(std::move(p)),
      q_(std::move(q)),
      r_(std::move(r)),
      zero_(ScalarTraits<S>::zero(bits)),
      bits_(bits),
      window_(window_of(p_.size(), q_.size(), r_.size())) {}

template <class S>
RecursionKernel<S> RecursionKernel<S>::from_problem(const ODEProblem& prob, Bits bits) {
  return RecursionKernel(lift<S>(prob.p, bits), lift<S>(prob.q, bits), lift<S>(prob.r, bits), bits);
}

template <class S>
S RecursionKernel<S>::P(int k, const S& mu) const {
  S inner = (mu - static_cast<long>(1 + k)) * p(k) + q(k - 1);
  return (mu - static_cast<long>(k)) * inner + r(k - 2);
}

template <class S>
S RecursionKernel<S>::Q(int k, const S& mu) const {
  S lin = mu * 2L - static_cast<long>(1 + 2 * k);
  return lin * p(k) + q(k - 1);
}

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Taylor: return "Taylor";
    case SeriesKind::Frobenius: return "Frobenius";
    case SeriesKind::FrobeniusLog: return "FrobeniusLog";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SeriesSolution / CoefficientStream

template <class S>
SeriesSolution<S>::SeriesSolution(RecursionKernel<S> kernel, RecursionMode mode, S nu_local, S nu1_shifted,
                                  long ell, S shift, S init0, S init1)
    : kernel_(std::move(kernel)),
      mode_(mode),
      nu_local_(std::move(nu_local)),
      nu1_shifted_(std::move(nu1_shifted)),
      ell_(ell),
      nu_total_(shift + nu_local_),
      init0_(std::move(init0)),
      init1_(std::move(init1)) {}

template <class S>
SeriesKind SeriesSolution<S>::kind() const {
  switch (mode_) {
    case RecursionMode::Taylor: return SeriesKind::Taylor;
    case RecursionMode::Pure: return SeriesKind::Frobenius;
    default: return SeriesKind::FrobeniusLog;
  }
}

template <class S>
CoefficientStream<S>::CoefficientStream(const SeriesSolution<S>& solution)
    : sol_(&solution), zero_{solution.kernel().zero(), solution.kernel().zero()} {}

template <class S>
const typename CoefficientStream<S>::Term& CoefficientStream<S>::history(long m) const {
  if (m < first_ || m > index_) return zero_;
  return window_[static_cast<std::size_t>(m - first_)];
}

template <class S>
typename CoefficientStream<S>::Term CoefficientStream<S>::compute(long n) {
  const auto& K = sol_->kernel_;
  const S& zero = K.zero();
  const int D = K.window();

  if (sol_->mode_ == RecursionMode::Taylor) {
    if (n == 0) return {sol_->init0_, zero};
    if (n == 1) return {sol_->init1_, zero};
    const S nn = zero + n;
    S acc = zero;
    for (int k = 1; k <= D; ++k) {
      const Term& h = history(n - k);
      if (h.a0.is_zero()) continue;
      acc += K.P(k, nn) * h.a0;
    }
    const S denom = K.p(0) * (n * (n - 1));
    return {-acc / denom, zero};
  }

  const bool has_log = sol_->mode_ != RecursionMode::Pure;
  if (n == 0) {
    if (sol_->mode_ == RecursionMode::Degenerate) return {sol_->init0_, sol_->init1_};
    return {sol_->init0_, zero};
  }

  const S mu = sol_->nu_local_ + (n + 1);
  if (sol_->mode_ == RecursionMode::IntegerDiff && n == sol_->ell_) {
    S acc = zero;
    for (int k = 1; k < D; ++k) {
      const Term& h = history(n - k);
      if (h.a0.is_zero()) continue;
      acc += K.P(k + 1, mu) * h.a0;
    }
    const S q1 = K.Q(1, mu);
    return {sol_->init1_, -acc / q1};
  }

  const S denom = K.P(1, mu);
  if (denom.is_zero()) {
    throw RecursionBreakdown("recursion denominator vanishes at m = " + std::to_string(n));
  }
  S acc0 = zero;
  S acc1 = zero;
  for (int k = 1; k < D; ++k) {
    const Term& h = history(n - k);
    const bool z0 = h.a0.is_zero();
    const bool z1 = !has_log || h.a1.is_zero();
    if (z0 && z1) continue;
    const S pk = K.P(k + 1, mu);
    if (!z0) acc0 += pk * h.a0;
    if (!z1) acc1 += pk * h.a1;
  }
  if (!has_log) return {-acc0 / denom, zero};

  S a1 = -acc1 / denom;
  S qacc = K.Q(1, mu) * a1;
  for (int k = 1; k < D; ++k) {
    const Term& h = history(n - k);
    if (h.a1.is_zero()) continue;
    qacc += K.Q(k + 1, mu) * h.a1;
  }
  S a0 = -(acc0 + qacc) / denom;
  return {std::move(a0), std::move(a1)};
}

template <class S>
const typename CoefficientStream<S>::Term& CoefficientStream<S>::next() {
  const long n = index_ + 1;
  Term t = compute(n);
  window_.push_back(std::move(t));
  index_ = n;
  const auto keep = static_cast<std::size_t>(sol_->kernel_.window() + 1);
  while (window_.size() > keep) {
    window_.pop_front();
    ++first_;
  }
  return window_.back();
}

template <class S>
std::vector<typename CoefficientStream<S>::Term> CoefficientStream<S>::take(long count) {
  std::vector<Term> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, count)));
  for (long i = 0; i < count; ++i) out.push_back(next());
  return out;
}

// ---------------------------------------------------------------------------
// Problem preparation and stream constructors

namespace {

template <class S>
ShiftedProblem<S> shifted_exact(const ODEProblem& norm, const IndicialData& data, Bits bits) {
  const QComplex nu2 = *data.nu2_exact;
  const ODEProblem shifted = shift_index(norm, nu2);
  return ShiftedProblem<S>{RecursionKernel<S>::from_problem(shifted, bits), ScalarTraits<S>::from(nu2, bits),
                           ScalarTraits<S>::from(*data.nu1_exact - nu2, bits), data.index_case, data.ell};
}

ShiftedProblem<ArbComplex> shifted_numeric(const ODEProblem& norm, const IndicialData& data, Bits bits) {
  Poly p = norm.p;
  Poly q = norm.q;
  Poly r = norm.r;
  if (!p[1].is_zero()) {
    p = p.times_z();
    q = q.times_z();
    r = r.times_z();
  }
  const ArbComplex nu = data.nu2(bits);
  const ArbComplex nu_nu1 = nu * (nu - 1L);
  const int n = std::max({p.degree(), q.degree() + 1, r.degree() + 2, 0});
  std::vector<ArbComplex> pt, qt, rt;
  auto A = [bits](const QComplex& c) { return ArbComplex(c, bits); };
  for (int k = 0; k <= n; ++k) {
    pt.push_back(A(p[k + 1]));
    qt.push_back(nu * A(p[k + 2]) * 2L + A(q[k + 1]));
    rt.push_back(nu_nu1 * A(p[k + 3]) + nu * A(q[k + 2]) + A(r[k + 1]));
  }
  // Trim exact trailing zeros so the recursion window matches the exact case.
  auto trim = [](std::vector<ArbComplex>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
  };
  trim(pt);
  trim(qt);
  trim(rt);
  RecursionKernel<ArbComplex> kernel(std::move(pt), std::move(qt), std::move(rt), bits);
  return ShiftedProblem<ArbComplex>{std::move(kernel), nu, data.nu1(bits) - nu, data.index_case, 0};
}

template <class S>
struct NumericShift;

template <>
struct NumericShift<QComplex> {
  static ShiftedProblem<QComplex> run(const ODEProblem&, const IndicialData&, Bits) {
    throw UnsupportedClassification("exact arithmetic needs rational indicial roots");
  }
};

template <>
struct NumericShift<ArbComplex> {
  static ShiftedProblem<ArbComplex> run(const ODEProblem& norm, const IndicialData& data, Bits bits) {
    return shifted_numeric(norm, data, bits);
  }
};

}  // namespace

template <class S>
ShiftedProblem<S> prepare_shifted(const ODEProblem& prob, Bits bits) {
  const ODEProblem norm = normalize_origin(prob);
  const IndicialData data = indicial_roots(norm);
  if (data.exact()) return shifted_exact<S>(norm, data, bits);
  return NumericShift<S>::run(norm, data, bits);
}

template <class S>
SeriesSolution<S> taylor_stream(const ODEProblem& prob, const S& a0, const S& a1, Bits bits) {
  const ODEProblem norm = normalize_origin(prob);
  if (norm.p[0].is_zero()) throw UnsupportedClassification("Taylor series needs an ordinary point");
  auto kernel = RecursionKernel<S>::from_problem(norm, bits);
  const S zero = ScalarTraits<S>::zero(bits);
  return SeriesSolution<S>(std::move(kernel), RecursionMode::Taylor, zero, zero, 0, zero, a0, a1);
}

template <class S>
std::pair<SeriesSolution<S>, SeriesSolution<S>> frob_noninteger_streams(const ShiftedProblem<S>& sp,
                                                                        const S& scale) {
  if (sp.index_case != IndexCase::NonIntegerDiff) {
    throw InvalidInput("non-integer streams requested for case " + to_string(sp.index_case));
  }
  const S zero = sp.kernel.zero();
  SeriesSolution<S> s1(sp.kernel, RecursionMode::Pure, sp.nu1, sp.nu1, 0, sp.shift, scale, zero);
  SeriesSolution<S> s2(sp.kernel, RecursionMode::Pure, zero, sp.nu1, 0, sp.shift, scale, zero);
  return {std::move(s1), std::move(s2)};
}

template <class S>
SeriesSolution<S> frob_nu2_stream(const ShiftedProblem<S>& sp, const S& scale) {
  const S zero = sp.kernel.zero();
  return SeriesSolution<S>(sp.kernel, RecursionMode::Pure, zero, sp.nu1, 0, sp.shift, scale, zero);
}

template <class S>
SeriesSolution<S> frob_degenerate_streams(const ShiftedProblem<S>& sp, const S& a00, const S& a10) {
  if (sp.index_case != IndexCase::Degenerate) {
    throw InvalidInput("degenerate streams requested for case " + to_string(sp.index_case));
  }
  const S zero = sp.kernel.zero();
  return SeriesSolution<S>(sp.kernel, RecursionMode::Degenerate, zero, zero, 0, sp.shift, a00, a10);
}

template <class S>
SeriesSolution<S> frob_integer_diff_streams(const ShiftedProblem<S>& sp, const S& a00, const S& a0ell) {
  if (sp.index_case != IndexCase::IntegerDiff) {
    throw InvalidInput("integer-difference streams requested for case " + to_string(sp.index_case));
  }
  const S nu_local = sp.kernel.zero() - sp.ell;
  return SeriesSolution<S>(sp.kernel, RecursionMode::IntegerDiff, nu_local, nu_local, sp.ell, sp.shift, a00,
                           a0ell);
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Auto: return "auto";
    case Branch::Nu1: return "nu1";
    case Branch::Nu2: return "nu2";
    case Branch::Log: return "log";
  }
  return "?";
}

Branch parse_branch(const std::string& text) {
  if (text == "auto") return Branch::Auto;
  if (text == "nu1") return Branch::Nu1;
  if (text == "nu2") return Branch::Nu2;
  if (text == "log") return Branch::Log;
  throw ParseError("unknown solution branch '" + text + "' (expected auto, nu1, nu2 or log)");
}

template <class S>
SeriesSolution<S> make_solution(const ODEProblem& prob, const SolutionSpec& spec, Bits bits) {
  const ODEProblem norm = normalize_origin(prob);
  const PointClass pc = classify_origin(norm);
  auto pick = [&](long d0, long d1) {
    if (spec.initial) {
      return std::pair<S, S>{ScalarTraits<S>::from(spec.initial->first, bits),
                             ScalarTraits<S>::from(spec.initial->second, bits)};
    }
    return std::pair<S, S>{ScalarTraits<S>::from(QComplex(d0), bits), ScalarTraits<S>::from(QComplex(d1), bits)};
  };

  if (pc == PointClass::Ordinary) {
    if (spec.branch != Branch::Auto) {
      throw InvalidInput("solution branch '" + to_string(spec.branch) + "' needs a singular expansion point");
    }
    auto [a0, a1] = pick(1, 0);
    return taylor_stream<S>(norm, a0, a1, bits);
  }
  if (pc == PointClass::Irregular) {
    throw UnsupportedClassification("irregular singular point: no Frobenius series");
  }

  const ShiftedProblem<S> sp = prepare_shifted<S>(norm, bits);
  switch (sp.index_case) {
    case IndexCase::NonIntegerDiff: {
      if (spec.branch == Branch::Log) throw InvalidInput("non-integer index difference has no log solution");
      auto [a0, unused] = pick(1, 0);
      auto both = frob_noninteger_streams(sp, a0);
      return spec.branch == Branch::Nu1 ? std::move(both.first) : std::move(both.second);
    }
    case IndexCase::Degenerate: {
      if (spec.branch == Branch::Nu1 || spec.branch == Branch::Log) {
        auto [a00, a10] = pick(0, 1);
        return frob_degenerate_streams(sp, a00, a10);
      }
      auto [a0, unused] = pick(1, 0);
      return frob_nu2_stream(sp, a0);
    }
    case IndexCase::IntegerDiff: {
      if (spec.branch == Branch::Nu1 || spec.branch == Branch::Log) {
        auto [a00, a0l] = pick(1, 0);
        return frob_integer_diff_streams(sp, a00, a0l);
      }
      auto [a0, unused] = pick(1, 0);
      return frob_nu2_stream(sp, a0);
    }
  }
  throw UnsupportedClassification("unhandled index case");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct SumOutcome {
  ArbComplex value;
  ArbComplex derivative;
  long M_used = 0;
  double max_term_log10 = -std::numeric_limits<double>::infinity();
  double tail_log10 = -std::numeric_limits<double>::infinity();
};

bool is_nonneg_integer(const ArbComplex& v, long& out) {
  if (!v.im().is_zero()) return false;
  const double d = v.re().to_double();
  if (d < 0 || d != std::floor(d) || d > 1e15) return false;
  if (!(v.re() == ArbReal(static_cast<long>(d), v.precision()))) return false;
  out = static_cast<long>(d);
  return true;
}

SumOutcome sum_at_origin(const SeriesSolution<ArbComplex>& sol, Bits bits) {
  long nu = 0;
  if (sol.kind() == SeriesKind::FrobeniusLog || !is_nonneg_integer(sol.nu(), nu)) {
    throw DiscViolation("series cannot be evaluated at its singular expansion point");
  }
  CoefficientStream<ArbComplex> stream(sol);
  SumOutcome out{ArbComplex(bits), ArbComplex(bits)};
  for (long m = 0; m + nu <= 1; ++m) {
    const auto& t = stream.next();
    if (m + nu == 0) out.value = t.a0;
    if (m + nu == 1) out.derivative = t.a0;
  }
  out.M_used = std::max(0L, 2 - nu);
  out.max_term_log10 = out.value.log10_abs();
  return out;
}

SumOutcome sum_series(const SeriesSolution<ArbComplex>& sol, const ArbComplex& z, double radius, int P,
                      long max_terms) {
  const Bits bits = z.precision();
  if (z.is_zero()) return sum_at_origin(sol, bits);

  const bool has_log = sol.kind() == SeriesKind::FrobeniusLog;
  const double log10_z = z.log10_abs();
  const double rho = std::isinf(radius) ? 0.0 : std::pow(10.0, log10_z) / radius;
  const double tail_factor = rho > 0 ? std::log10(rho / (1.0 - rho)) : -std::numeric_limits<double>::infinity();
  const double re_nu = sol.nu().re().to_double();
  const ArbComplex L = has_log ? log(z) : ArbComplex(bits);
  const double log10_L = has_log ? L.log10_abs() : 0.0;
  const int D = sol.window();
  const double threshold = -static_cast<double>(P);

  ArbComplex S0(bits), S1(bits), D0(bits), D1(bits);
  ArbComplex zm(1L, bits);       // z^m
  ArbComplex zm1(bits);          // z^(m-1), zero for m = 0
  const ArbComplex zinv = ArbComplex(1L, bits) / z;

  SumOutcome out{ArbComplex(bits), ArbComplex(bits)};
  std::deque<double> recent;
  int small_run = 0;
  CoefficientStream<ArbComplex> stream(sol);
  for (long m = 0;; ++m) {
    if (m >= max_terms) {
      throw DivergenceError("series did not meet the stopping criterion within " + std::to_string(max_terms) +
                            " terms");
    }
    const auto& t = stream.next();
    double mag = t.a0.log10_abs();
    if (has_log) mag = log10_add(mag, t.a1.log10_abs() + log10_L);
    mag += (static_cast<double>(m) + re_nu) * log10_z;
    out.max_term_log10 = std::max(out.max_term_log10, mag);

    if (!t.a0.is_zero()) {
      S0 += t.a0 * zm;
      if (m > 0) D0 += t.a0 * zm1 * m;
    }
    if (has_log && !t.a1.is_zero()) {
      S1 += t.a1 * zm;
      if (m > 0) D1 += t.a1 * zm1 * m;
    }
    zm1 = zm;
    zm *= z;

    recent.push_back(mag);
    if (static_cast<int>(recent.size()) > D) recent.pop_front();
    small_run = mag <= threshold ? small_run + 1 : 0;
    if (small_run >= D) {
      const double run_max = *std::max_element(recent.begin(), recent.end());
      const double tail = run_max + tail_factor;
      if (rho == 0.0 || tail <= threshold + 1) {
        out.M_used = m - D + 1;
        out.tail_log10 = tail;
        break;
      }
    }
  }

  const ArbComplex znu = pow(z, sol.nu());
  ArbComplex inner = S0;
  ArbComplex dinner = D0;
  if (has_log) {
    inner += L * S1;
    dinner += L * D1;
  }
  out.value = znu * inner;
  ArbComplex extra = sol.nu() * inner;
  if (has_log) extra += S1;
  out.derivative = znu * (dinner + extra * zinv);
  return out;
}

EvalResult evaluate_impl(const std::function<SeriesSolution<ArbComplex>(Bits)>& factory,
                         const std::function<ArbComplex(Bits)>& z_at, double radius, int P,
                         const EvalOptions& options) {
  if (P < 1) throw InvalidInput("precision must be at least 1 digit");
  const ArbComplex z_probe = z_at(kDefaultBits);
  const double absz = std::pow(10.0, z_probe.log10_abs());
  if (!z_probe.is_zero() && !(absz < radius)) {
    throw DiscViolation("|z| = " + z_probe.abs().to_string(6) + " is not inside the convergence disc (R = " +
                        std::to_string(radius) + "); the tail bound cannot be met");
  }

  double mtl = 0.0;
  if (options.max_term_log10_hint) {
    mtl = *options.max_term_log10_hint;
  } else {
    const SumOutcome dry = sum_series(factory(kDefaultBits), z_probe, radius, P, options.max_terms);
    mtl = dry.max_term_log10;
  }
  const PrecisionPolicy policy = plan_precision(P, std::isfinite(mtl) ? mtl : 0.0);
  const SumOutcome run = sum_series(factory(policy.working_bits), z_at(policy.working_bits), radius, P,
                                    options.max_terms);

  EvalResult res{run.value, run.derivative};
  res.M_used = run.M_used;
  res.max_term_log10 = run.max_term_log10;
  res.working_bits = policy.working_bits;
  res.tail_bound_log10 = run.tail_log10;
  const double carried = static_cast<double>(policy.working_bits) * std::log10(2.0) -
                         std::max(0.0, std::isfinite(run.max_term_log10) ? run.max_term_log10 : 0.0);
  res.achieved_digits_estimate = std::min<double>(P, carried);
  return res;
}

double origin_radius(const ODEProblem& prob) { return convergence_radius(prob, {0.0, 0.0}); }

}  // namespace

EvalResult evaluate_series(const std::function<SeriesSolution<ArbComplex>(Bits)>& factory, const QComplex& z,
                           double radius, int P, const EvalOptions& options) {
  return evaluate_impl(factory, [&](Bits b) { return ArbComplex(z, b); }, radius, P, options);
}

EvalResult evaluate(const ODEProblem& prob, const SolutionSpec& spec, const QComplex& z, int P,
                    const EvalOptions& options) {
  auto factory = [&](Bits b) { return make_solution<ArbComplex>(prob, spec, b); };
  return evaluate_series(factory, z, origin_radius(prob), P, options);
}

EvalResult evaluate(const ODEProblem& prob, const SolutionSpec& spec, const ArbComplex& z, int P,
                    const EvalOptions& options) {
  auto factory = [&](Bits b) { return make_solution<ArbComplex>(prob, spec, b); };
  return evaluate_impl(factory, [&](Bits b) { return z.with_precision(b); }, origin_radius(prob), P, options);
}

int continuation_guard_digits(std::size_t steps) {
  return static_cast<int>(std::ceil(std::log10(static_cast<double>(std::max<std::size_t>(steps, 1))))) + 5;
}

EvalResult continue_along(const ODEProblem& prob, const ArbComplex& psi0, const ArbComplex& dpsi0,
                          const QComplex& z0, const std::vector<QComplex>& path, int P,
                          const EvalOptions& options) {
  if (P < 1) throw InvalidInput("precision must be at least 1 digit");
  EvalResult res{psi0, dpsi0};
  res.working_bits = psi0.precision();
  res.achieved_digits_estimate = P;
  if (path.empty()) return res;

  const int step_digits = P + continuation_guard_digits(path.size());
  const auto singular = singular_points(prob);
  QComplex here = z0;
  ArbComplex psi = psi0;
  ArbComplex dpsi = dpsi0;
  for (const QComplex& next : path) {
    const ODEProblem local = recenter(prob, here);
    if (local.p[0].is_zero()) {
      throw PathObstruction("continuation point " + to_string(here) + " is a singular point");
    }
    const std::complex<double> hd = to_complex_double(here);
    const std::complex<double> nd = to_complex_double(next);
    const double R = convergence_radius(prob, hd);
    const QComplex w = next - here;
    if (!(std::abs(nd - hd) < R)) {
      throw DiscViolation("continuation step " + to_string(here) + " -> " + to_string(next) +
                          " leaves the convergence disc (R = " + std::to_string(R) + ")");
    }
    for (const auto& s : singular) {
      if (std::isfinite(R) && std::abs(nd - s) < 0.1 * R) {
        throw PathObstruction("continuation point " + to_string(next) + " is too close to a singular point");
      }
    }
    auto factory = [&](Bits b) {
      return taylor_stream<ArbComplex>(local, psi.with_precision(b), dpsi.with_precision(b), b);
    };
    const EvalResult step = evaluate_series(factory, w, R, step_digits, options);
    psi = step.value;
    dpsi = step.derivative;
    res.M_used += step.M_used;
    res.max_term_log10 = std::max(res.max_term_log10, step.max_term_log10);
    res.working_bits = std::max(res.working_bits, step.working_bits);
    res.tail_bound_log10 = std::max(res.tail_bound_log10, step.tail_bound_log10);
    here = next;
  }
  res.value = psi;
  res.derivative = dpsi;
  return res;
}

void write_coefficients_csv(std::ostream& os, const SeriesSolution<ArbComplex>& solution, long count,
                            int digits) {
  os << "m,re_a0,im_a0,re_a1,im_a1,log10_abs_a0\n";
  CoefficientStream<ArbComplex> stream(solution);
  for (long m = 0; m < count; ++m) {
    const auto& t = stream.next();
    const double l = t.a0.log10_abs();
    os << m << ',' << t.a0.re().to_string(digits) << ',' << t.a0.im().to_string(digits) << ','
       << t.a1.re().to_string(digits) << ',' << t.a1.im().to_string(digits) << ',';
    if (std::isinf(l)) {
      os << "-inf";
    } else {
      os << ArbReal(l, 53).to_string(10);
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Explicit instantiations

template class RecursionKernel<QComplex>;
template class RecursionKernel<ArbComplex>;
template class SeriesSolution<QComplex>;
template class SeriesSolution<ArbComplex>;
template class CoefficientStream<QComplex>;
template class CoefficientStream<ArbComplex>;

#define FROB_INSTANTIATE(S)                                                                                 \
  template ShiftedProblem<S> prepare_shifted<S>(const ODEProblem&, Bits);                                   \
  template SeriesSolution<S> taylor_stream<S>(const ODEProblem&, const S&, const S&, Bits);                 \
  template std::pair<SeriesSolution<S>, SeriesSolution<S>> frob_noninteger_streams<S>(const ShiftedProblem<S>&, \
                                                                                      const S&);            \
  template SeriesSolution<S> frob_nu2_stream<S>(const ShiftedProblem<S>&, const S&);                        \
  template SeriesSolution<S> frob_degenerate_streams<S>(const ShiftedProblem<S>&, const S&, const S&);      \
  template SeriesSolution<S> frob_integer_diff_streams<S>(const ShiftedProblem<S>&, const S&, const S&);    \
  template SeriesSolution<S> make_solution<S>(const ODEProblem&, const SolutionSpec&, Bits);

FROB_INSTANTIATE(QComplex)
FROB_INSTANTIATE(ArbComplex)

#undef FROB_INSTANTIATE

}  // namespace frob
