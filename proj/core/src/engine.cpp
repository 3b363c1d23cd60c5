#include "delaystab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

void check_compatible(const SystemDefinition& system, const HistoryState& state) {
  if (state.n_channels() != system.n_channels || state.window_start() != system.window_start)
    throw ShapeError("initial state has N=" + std::to_string(state.n_channels()) +
                     ", r=" + std::to_string(state.window_start()) + " but the system expects N=" +
                     std::to_string(system.n_channels) + ", r=" +
                     std::to_string(system.window_start));
}

Step require_period(const SystemDefinition& system) {
  if (!system.period) throw ConfigError("system has no period; the Poincare map is undefined");
  if (*system.period <= 0) throw ConfigError("period must be a positive integer");
  return *system.period;
}

double next_value(const SystemDefinition& system, std::size_t i, Step m, const StateView& window) {
  const double c = system.leakage(i, m);
  if (!(std::abs(c) < 1.0))
    throw HypothesisError("|c_" + std::to_string(i) + "(" + std::to_string(m) +
                          ")| = " + std::to_string(std::abs(c)) + " is not below 1");
  return c * window(i, -system.leakage_delay) + system.nonlinearity(i, m, window);
}

}  // namespace

Trajectory simulate(const SystemDefinition& system, const HistoryState& initial, Step steps) {
  system.validate();
  check_compatible(system, initial);
  if (steps < 0) throw DomainError("simulate: negative horizon");

  const std::size_t n = system.n_channels;
  const std::size_t window = initial.length() * n;
  std::vector<double> samples;
  samples.reserve(window + static_cast<std::size_t>(steps) * n);
  samples = initial.time_major();

  std::vector<double> next(n);
  for (Step m = 0; m < steps; ++m) {
    const StateView view(std::span<const double>(samples.data() + static_cast<std::size_t>(m) * n,
                                                 window),
                         n, system.window_start);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = next_value(system, i, m, view);
      if (!std::isfinite(x)) throw DivergenceError(m + 1, i);
      next[i] = x;
    }
    samples.insert(samples.end(), next.begin(), next.end());
  }
  return Trajectory(std::move(samples), n, system.window_start);
}

double recurrence_residual(const SystemDefinition& system, const Trajectory& trajectory) {
  double worst = 0.0;
  for (Step m = 0; m < trajectory.horizon(); ++m) {
    const StateView view = trajectory.window_view(m);
    for (std::size_t i = 0; i < system.n_channels; ++i)
      worst = std::max(worst, std::abs(trajectory.value(i, m + 1) - next_value(system, i, m, view)));
  }
  return worst;
}

HistoryState poincare_map(const SystemDefinition& system, const HistoryState& state) {
  const Step omega = require_period(system);
  return simulate(system, state, omega).window(omega);
}

PeriodicOrbitResult find_periodic_orbit(const SystemDefinition& system, const HistoryState& seed,
                                        double tol, std::size_t max_iters) {
  const Step omega = require_period(system);
  if (!(tol > 0.0)) throw DomainError("find_periodic_orbit: tolerance must be positive");

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  HistoryState state = seed;
  std::vector<double> history;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    Trajectory orbit = simulate(system, state, omega);
    HistoryState next = orbit.window(omega);
    const double residual = state_distance(next, state);
    history.push_back(residual);

    const double floor = 64.0 * kEps * std::max(1.0, sup_norm(state));
    if (residual <= tol || residual <= floor) {
      const Trajectory twice = simulate(system, state, 2 * omega);
      const double drift = state_distance(twice.window(2 * omega), state);
      if (drift > 10.0 * std::max(tol, floor))
        throw NonConvergenceError("orbit failed the 2*omega periodicity re-check (drift " +
                                      std::to_string(drift) + ")",
                                  std::move(history));

      // Probe pairs around the fixed point for the measured Lipschitz ratio of P.
      std::mt19937_64 rng(0x5eedULL);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const double scale = 1.0 + sup_norm(state);
      double ratio = 0.0;
      for (int probe = 0; probe < 4; ++probe) {
        HistoryState a = state;
        HistoryState b = state;
        for (Step j = state.window_start(); j <= 0; ++j)
          for (std::size_t i = 0; i < state.n_channels(); ++i) {
            a.set(i, j, a.at(i, j) + scale * unit(rng));
            b.set(i, j, b.at(i, j) + scale * unit(rng));
          }
        const double gap = state_distance(a, b);
        if (gap > 0.0)
          ratio = std::max(ratio,
                           state_distance(poincare_map(system, a), poincare_map(system, b)) / gap);
      }

      return PeriodicOrbitResult{std::move(state), std::move(orbit), it, residual, ratio,
                                 residual > tol, std::move(history)};
    }
    state = std::move(next);
  }
  throw NonConvergenceError("Poincare iteration did not reach tolerance in " +
                                std::to_string(max_iters) + " iterations",
                            std::move(history));
}

PeriodicOrbitResult find_periodic_orbit(const SystemDefinition& system, double tol,
                                        std::size_t max_iters) {
  return find_periodic_orbit(system, HistoryState(system.n_channels, system.window_start), tol,
                             max_iters);
}

std::size_t contraction_power(double C, double zeta, Step omega) {
  if (!(zeta > 0.0 && zeta < 1.0) || !(C > 0.0) || omega <= 0)
    throw DomainError("contraction_power needs C > 0, 0 < zeta < 1, omega > 0");
  if (C < 1.0) return 1;
  const double per_period = -static_cast<double>(omega) * std::log(zeta);
  auto p = static_cast<std::size_t>(std::floor(std::log(C) / per_period)) + 1;
  // Guard the floor against rounding on exact multiples.
  while (std::log(C) - static_cast<double>(p) * per_period >= 0.0) ++p;
  return p;
}

void BoundCheckReport::merge(BoundCheckReport other) {
  const std::size_t offset = pairs_tested;
  pairs_tested += other.pairs_tested;
  passed = passed && other.passed;
  if (other.max_violation < max_violation || offset == 0) {
    max_violation = other.max_violation;
    worst_pair = offset + other.worst_pair;
    worst_series = std::move(other.worst_series);
  }
}

BoundCheckReport check_exponential_bound(const SystemDefinition& system, const HistoryState& alpha,
                                         const HistoryState& beta, double C, double zeta,
                                         Step steps) {
  if (!(C > 0.0)) throw DomainError("check_exponential_bound: C must be positive");
  if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("check_exponential_bound: zeta must be in (0,1)");
  const Trajectory x = simulate(system, alpha, steps);
  const Trajectory y = simulate(system, beta, steps);
  const double initial_gap = state_distance(alpha, beta);

  BoundCheckReport report;
  report.pairs_tested = 1;
  report.max_violation = std::numeric_limits<double>::infinity();
  report.worst_series.reserve(static_cast<std::size_t>(steps) + 1);
  double decay = 1.0;
  for (Step m = 0; m <= steps; ++m) {
    const double bound = C * decay * initial_gap;
    const double observed = state_distance(x.window_view(m), y.window_view(m));
    const double slack = bound - observed;
    report.worst_series.push_back({m, bound, observed, slack});
    report.max_violation = std::min(report.max_violation, slack);
    if (slack < -numerical_slack(bound)) report.passed = false;
    decay *= zeta;
  }
  return report;
}

BoundCheckReport check_exponential_bound(const SystemDefinition& system,
                                         std::span<const StatePair> pairs, double C, double zeta,
                                         Step steps) {
  BoundCheckReport report;
  for (const auto& [alpha, beta] : pairs)
    report.merge(check_exponential_bound(system, alpha, beta, C, zeta, steps));
  return report;
}

BoundCheckReport check_lemma_inequality(const SystemDefinition& system, const HistoryState& alpha,
                                        const HistoryState& beta, const LipschitzBound& H,
                                        Step n_max) {
  if (n_max < 1) throw DomainError("check_lemma_inequality: n_max must be >= 1");
  if (!H) throw ConfigError("check_lemma_inequality: no Lipschitz bound supplied");
  const Step tau = system.leakage_delay;
  const Step block = tau + 1;
  const Step horizon = n_max * block;
  const Trajectory x = simulate(system, alpha, horizon);
  const Trajectory y = simulate(system, beta, horizon);
  const double initial_gap = state_distance(alpha, beta);

  std::vector<double> window_gap(static_cast<std::size_t>(horizon) + 1);
  for (Step t = 0; t <= horizon; ++t)
    window_gap[static_cast<std::size_t>(t)] = state_distance(x.window_view(t), y.window_view(t));

  BoundCheckReport report;
  report.pairs_tested = 1;
  report.max_violation = std::numeric_limits<double>::infinity();
  std::vector<BoundSample> series;
  for (std::size_t i = 0; i < system.n_channels; ++i) {
    for (Step s = 0; s <= tau; ++s) {
      series.clear();
      double product = 1.0;  // prod_{k<n} |c_i(t_k)|
      double memory = 0.0;   // sum_{l<n} prod_{l<k<n} |c_i(t_k)| H_i(t_l) gap(t_l)
      double worst_here = std::numeric_limits<double>::infinity();
      for (Step n = 1; n <= n_max; ++n) {
        const Step t = (n - 1) * block + tau - s;
        const double c = std::abs(system.leakage(i, t));
        product *= c;
        memory = c * memory + H(i, t) * window_gap[static_cast<std::size_t>(t)];
        const double rhs = product * initial_gap + memory;
        const Step m = n * block - s;
        const double lhs = std::abs(x.value(i, m) - y.value(i, m));
        const double slack = rhs - lhs;
        series.push_back({m, rhs, lhs, slack});
        worst_here = std::min(worst_here, slack);
        if (slack < -numerical_slack(rhs)) report.passed = false;
      }
      if (worst_here < report.max_violation) {
        report.max_violation = worst_here;
        report.worst_series = series;
      }
    }
  }
  return report;
}

ResidueIndex partition_index(Step m, Step tau) {
  if (tau < 0) throw DomainError("partition_index: tau must be nonnegative");
  if (m <= 0) throw DomainError("partition_index: m must be positive");
  const Step n = (m + tau) / (tau + 1);
  return ResidueIndex{n * (tau + 1) - m, n};
}

}  // namespace delaystab
