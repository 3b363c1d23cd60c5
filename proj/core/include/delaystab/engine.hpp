#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "delaystab/state.hpp"

namespace delaystab {

/// Runs the recurrence for `steps` steps from `initial` (which must share N
/// and r with the system). Throws DivergenceError on a non-finite sample and
/// HypothesisError when |c_i(m)| >= 1 is observed.
Trajectory simulate(const SystemDefinition& system, const HistoryState& initial, Step steps);

/// Largest |stored - recomputed| over every recorded step. Zero for any
/// trajectory produced by `simulate` on the same system.
double recurrence_residual(const SystemDefinition& system, const Trajectory& trajectory);

/// P(alpha) = xbar_omega(., alpha). Throws ConfigError without a period.
HistoryState poincare_map(const SystemDefinition& system, const HistoryState& state);

struct PeriodicOrbitResult {
  HistoryState fixed_point;
  Trajectory orbit;                 // simulate(fixed_point, omega)
  std::size_t iterations = 0;       // Poincare applications
  double residual = 0.0;            // state_distance(P(fixed_point), fixed_point)
  double contraction_estimate = 0.0;
  bool at_roundoff_floor = false;   // accepted at the round-off floor above tol
  std::vector<double> residual_history;
};

/// Fixed-point iteration alpha <- P(alpha) until the step residual drops to
/// `tol` (or to the round-off floor 64 eps max(1, |alpha|)), then confirms
/// omega-periodicity over 2 omega steps. Throws NonConvergenceError with the
/// residual history when `max_iters` is exhausted or the re-check fails.
PeriodicOrbitResult find_periodic_orbit(const SystemDefinition& system, const HistoryState& seed,
                                        double tol, std::size_t max_iters);
/// Same, seeded at the zero state.
PeriodicOrbitResult find_periodic_orbit(const SystemDefinition& system, double tol,
                                        std::size_t max_iters);

/// Smallest p >= 1 with C zeta^(p omega) < 1.
std::size_t contraction_power(double C, double zeta, Step omega);

/// Absolute slack tolerance for bound checks.
inline double numerical_slack(double bound_magnitude) noexcept {
  return 1e-9 * (1.0 + bound_magnitude);
}

struct BoundSample {
  Step m = 0;
  double bound = 0.0;
  double observed = 0.0;
  double slack = 0.0;  // bound - observed
};

struct BoundCheckReport {
  std::size_t pairs_tested = 0;
  /// Most negative slack seen (>= 0 when the bound held everywhere).
  double max_violation = 0.0;
  bool passed = true;
  std::size_t worst_pair = 0;
  std::vector<BoundSample> worst_series;

  /// Folds `other` into this report (deterministic: ties keep the earlier pair).
  void merge(BoundCheckReport other);
};

/// Checks |xbar_m(alpha) - xbar_m(beta)| <= C zeta^m |alpha - beta| for m in [0, steps].
BoundCheckReport check_exponential_bound(const SystemDefinition& system, const HistoryState& alpha,
                                         const HistoryState& beta, double C, double zeta,
                                         Step steps);

using StatePair = std::pair<HistoryState, HistoryState>;

/// Batch version; pairs are checked independently and merged in index order.
BoundCheckReport check_exponential_bound(const SystemDefinition& system,
                                         std::span<const StatePair> pairs, double C, double zeta,
                                         Step steps);

/// Per-channel Lipschitz bound H_i(m) on the nonlinearity.
using LipschitzBound = std::function<double(std::size_t channel, Step m)>;

/// Evaluates both sides of the solution-difference inequality for every
/// channel i, residue s in [0, tau] and n in [1, n_max]:
///
///   |x_i(n(tau+1)-s) - y_i(n(tau+1)-s)|
///     <= prod_{k<n} |c_i(t_k)| |alpha - beta|
///        + sum_{l<n} prod_{l<k<n} |c_i(t_k)| H_i(t_l) |xbar_{t_l} - ybar_{t_l}|,
///
/// with t_k = k(tau+1) + tau - s. Samples are indexed by m = n(tau+1) - s.
/// The worst series holds the (i, s) with the smallest slack.
BoundCheckReport check_lemma_inequality(const SystemDefinition& system, const HistoryState& alpha,
                                        const HistoryState& beta, const LipschitzBound& H,
                                        Step n_max);

struct ResidueIndex {
  Step s = 0;  // in [0, tau]
  Step n = 1;  // >= 1
  friend bool operator==(const ResidueIndex&, const ResidueIndex&) = default;
};

/// Unique (s, n) with m = n(tau+1) - s. Throws DomainError for m <= 0 or tau < 0.
ResidueIndex partition_index(Step m, Step tau);

}  // namespace delaystab
