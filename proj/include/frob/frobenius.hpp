#pragma once

#include <deque>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "frob/numerics.hpp"
#include "frob/ode.hpp"
#include "frob/rational.hpp"

namespace frob {

/// Uniform construction helpers for the two coefficient scalars: exact
/// complex rationals (for oracles and residual checks) and ArbComplex.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<QComplex> {
  static QComplex from(const QComplex& q, Bits /*bits*/) { return q; }
  static QComplex zero(Bits /*bits*/) { return {}; }
  static double log10_abs(const QComplex& z);
};

template <>
struct ScalarTraits<ArbComplex> {
  static ArbComplex from(const QComplex& q, Bits bits) { return ArbComplex(q, bits); }
  static ArbComplex zero(Bits bits) { return ArbComplex(bits); }
  static double log10_abs(const ArbComplex& z) { return z.log10_abs(); }
};

/// Coefficient tables of p, q, r and the two derived families
///   P_k(mu) = (mu - k)[(mu - 1 - k) p_k + q_{k-1}] + r_{k-2}
///   Q_k(mu) = (2 mu - 1 - 2k) p_k + q_{k-1}      (= dP_k/dmu)
/// with negative-index coefficients read as zero.
template <class S>
class RecursionKernel {
 public:
  RecursionKernel(std::vector<S> p, std::vector<S> q, std::vector<S> r, Bits bits);
  static RecursionKernel from_problem(const ODEProblem& prob, Bits bits);

  const S& p(int k) const { return at(p_, k); }
  const S& q(int k) const { return at(q_, k); }
  const S& r(int k) const { return at(r_, k); }

  S P(int k, const S& mu) const;
  S Q(int k, const S& mu) const;

  /// History window D = max(deg p, deg q + 1, deg r + 2), at least 1.
  int window() const { return window_; }
  Bits bits() const { return bits_; }
  const S& zero() const { return zero_; }

 private:
  const S& at(const std::vector<S>& v, int k) const {
    return (k < 0 || k >= static_cast<int>(v.size())) ? zero_ : v[static_cast<std::size_t>(k)];
  }

  std::vector<S> p_, q_, r_;
  S zero_;
  Bits bits_;
  int window_ = 1;
};

enum class SeriesKind { Taylor, Frobenius, FrobeniusLog };

std::string to_string(SeriesKind kind);

/// Which recursion a stream runs. Pure/Degenerate/IntegerDiff all work on the
/// index-shifted problem (p0 = 0, p1 != 0, second root at 0).
enum class RecursionMode { Taylor, Pure, Degenerate, IntegerDiff };

/// Selects one series solution  psi = sum_m (a0_m + a1_m log z) z^{m + nu}.
/// Coefficient streams are produced on demand and are deterministic functions
/// of the kernel and the initial data.
template <class S>
class SeriesSolution {
 public:
  SeriesSolution(RecursionKernel<S> kernel, RecursionMode mode, S nu_local, S nu1_shifted, long ell,
                 S shift, S init0, S init1);

  SeriesKind kind() const;
  RecursionMode mode() const { return mode_; }
  /// Total exponent offset nu in the original coordinate.
  const S& nu() const { return nu_total_; }
  const RecursionKernel<S>& kernel() const { return kernel_; }
  int window() const { return kernel_.window(); }
  long ell() const { return ell_; }
  const S& init0() const { return init0_; }
  const S& init1() const { return init1_; }

  /// Truncation metadata, filled in by evaluation.
  std::optional<long> truncation;
  double max_term_log10 = 0.0;

 private:
  template <class>
  friend class CoefficientStream;

  RecursionKernel<S> kernel_;
  RecursionMode mode_;
  S nu_local_;     // exponent of the series in the shifted frame
  S nu1_shifted_;  // other root in the shifted frame (Pure mode)
  long ell_;
  S nu_total_;
  S init0_, init1_;
};

/// Stateful generator over a SeriesSolution. Keeps only the last D
/// coefficients; single-threaded, movable between threads.
template <class S>
class CoefficientStream {
 public:
  struct Term {
    S a0;
    S a1;
  };

  explicit CoefficientStream(const SeriesSolution<S>& solution);

  /// Produces coefficient index() + 1 (the first call yields m = 0).
  const Term& next();
  long index() const { return index_; }

  /// Convenience: the first `count` terms.
  std::vector<Term> take(long count);

 private:
  const Term& history(long m) const;
  Term compute(long n);

  const SeriesSolution<S>* sol_;
  Term zero_;
  std::deque<Term> window_;
  long first_ = 0;  // index of window_.front()
  long index_ = -1;
};

/// Index-shifted problem ready for the Frobenius recursions: psi = z^shift psi~,
/// where psi~ has indicial roots {nu1, 0}, Re nu1 <= 0.
template <class S>
struct ShiftedProblem {
  RecursionKernel<S> kernel;
  S shift;
  S nu1;
  IndexCase index_case;
  long ell;
};

/// Builds the shifted problem. Exact roots go through shift_index; irrational
/// roots (ArbComplex only) are shifted numerically at `bits`.
template <class S>
ShiftedProblem<S> prepare_shifted(const ODEProblem& prob, Bits bits);

/// Ordinary point: a_{m+2} = -sum_{k>=1} P_k(m+2) a_{m+2-k} / ((m+2)(m+1) p0).
template <class S>
SeriesSolution<S> taylor_stream(const ODEProblem& prob, const S& a0, const S& a1, Bits bits);

/// Non-integer index difference: (nu1 solution, nu2 solution), each with a0 = scale.
template <class S>
std::pair<SeriesSolution<S>, SeriesSolution<S>> frob_noninteger_streams(const ShiftedProblem<S>& sp,
                                                                        const S& scale);

/// The pure nu2 (= largest root) solution, valid in every regular-singular case.
template <class S>
SeriesSolution<S> frob_nu2_stream(const ShiftedProblem<S>& sp, const S& scale);

/// Equal roots: log solution with free data a0_0 and a1_0.
template <class S>
SeriesSolution<S> frob_degenerate_streams(const ShiftedProblem<S>& sp, const S& a00, const S& a10);

/// Roots differing by ell: log solution with exponent nu1 and free data
/// a0_0 and a0_ell (the latter adds a multiple of the nu2 solution).
template <class S>
SeriesSolution<S> frob_integer_diff_streams(const ShiftedProblem<S>& sp, const S& a00, const S& a0ell);

enum class Branch { Auto, Nu1, Nu2, Log };

std::string to_string(Branch b);
Branch parse_branch(const std::string& text);

/// Selects a solution of a problem. `initial` means:
///   Taylor:      (psi(0), psi'(0)), default (1, 0)
///   Nu1/Nu2:     (a0, unused), default (1, 0)
///   Log/Degen.:  (a0_0, a1_0), default (0, 1)
///   Log/IntDiff: (a0_0, a0_ell), default (1, 0)
struct SolutionSpec {
  Branch branch = Branch::Auto;
  std::optional<std::pair<QComplex, QComplex>> initial;
};

template <class S>
SeriesSolution<S> make_solution(const ODEProblem& prob, const SolutionSpec& spec, Bits bits);

struct EvalOptions {
  long max_terms = 10'000'000;
  /// Skip the low-precision dry run when the peak term is already known.
  std::optional<double> max_term_log10_hint;
};

struct EvalResult {
  ArbComplex value;
  ArbComplex derivative;
  long M_used = 0;
  double max_term_log10 = 0.0;
  double achieved_digits_estimate = 0.0;
  Bits working_bits = 0;
  /// Largest omitted-tail estimate (last terms times rho / (1 - rho)), log10.
  double tail_bound_log10 = 0.0;
};

/// Sums a series solution at z to absolute accuracy 10^-P. The series is
/// truncated at the first M for which (|a0_M| + |a1_M log z|) |z|^{M + Re nu}
/// <= 10^-P holds for D consecutive indices and the geometric tail estimate
/// with ratio |z|/R is below 10^{1-P}.
EvalResult evaluate(const ODEProblem& prob, const SolutionSpec& spec, const QComplex& z, int P,
                    const EvalOptions& options = {});
EvalResult evaluate(const ODEProblem& prob, const SolutionSpec& spec, const ArbComplex& z, int P,
                    const EvalOptions& options = {});

/// Lower-level entry: `factory(bits)` builds the solution at a given precision,
/// `radius` is the convergence radius of the series around the origin.
EvalResult evaluate_series(const std::function<SeriesSolution<ArbComplex>(Bits)>& factory,
                           const QComplex& z, double radius, int P, const EvalOptions& options = {});

/// Extra digits carried per continuation step on top of P.
int continuation_guard_digits(std::size_t steps);

/// Analytic continuation by Taylor restarts. Starting from (psi, psi') at z0,
/// recenters at each path point and re-expands; returns the result at the
/// last point. Path points are in the problem's local coordinate.
EvalResult continue_along(const ODEProblem& prob, const ArbComplex& psi0, const ArbComplex& dpsi0,
                          const QComplex& z0, const std::vector<QComplex>& path, int P,
                          const EvalOptions& options = {});

/// CSV coefficient dump: m,re_a0,im_a0,re_a1,im_a1,log10_abs_a0
void write_coefficients_csv(std::ostream& os, const SeriesSolution<ArbComplex>& solution, long count,
                            int digits);

extern template class RecursionKernel<QComplex>;
extern template class RecursionKernel<ArbComplex>;
extern template class SeriesSolution<QComplex>;
extern template class SeriesSolution<ArbComplex>;
extern template class CoefficientStream<QComplex>;
extern template class CoefficientStream<ArbComplex>;

}  // namespace frob
