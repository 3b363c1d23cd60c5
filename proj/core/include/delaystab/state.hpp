#pragma once

// History-window state space, system definition and trajectory storage for
//
//   x_i(m+1) = c_i(m) x_i(m - tau) + h_i(m, xbar_m),   i = 0..N-1, m >= 0,
//
// where xbar_m(j) = x(m + j) for j in [r, 0] and r <= -tau.
//
// All windows are stored time-major: sample (channel i, offset j) lives at
// index (j - r) * N + i. A trajectory uses the same layout for the whole
// record x(r), ..., x(M), so the window at step m is the contiguous block
// starting at m * N and any window can be viewed without copying.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace delaystab {

using Step = std::int64_t;

/// Read-only view of one history window [r, 0].
class StateView {
 public:
  StateView(std::span<const double> data, std::size_t n_channels, Step window_start) noexcept
      : data_(data), n_(n_channels), r_(window_start) {}

  /// alpha_i(j), j in [r, 0]. Unchecked.
  double operator()(std::size_t channel, Step offset) const noexcept {
    return data_[static_cast<std::size_t>(offset - r_) * n_ + channel];
  }

  std::size_t n_channels() const noexcept { return n_; }
  Step window_start() const noexcept { return r_; }
  std::size_t length() const noexcept { return static_cast<std::size_t>(-r_) + 1; }
  std::span<const double> raw() const noexcept { return data_; }

 private:
  std::span<const double> data_;
  std::size_t n_;
  Step r_;
};

/// An element of X^N: N channels of reals on the integer window [r, 0].
class HistoryState {
 public:
  /// Zero state.
  HistoryState(std::size_t n_channels, Step window_start);

  /// `channels[i][j - r]` = alpha_i(j).
  static HistoryState from_channels(const std::vector<std::vector<double>>& channels,
                                    Step window_start);

  /// alpha_i(j) = f(i, j).
  static HistoryState from_function(std::size_t n_channels, Step window_start,
                                    const std::function<double(std::size_t, Step)>& f);

  /// Adopts a time-major block of N * (|r| + 1) values.
  static HistoryState from_time_major(std::vector<double> values, std::size_t n_channels,
                                      Step window_start);

  std::size_t n_channels() const noexcept { return n_; }
  Step window_start() const noexcept { return r_; }
  std::size_t length() const noexcept { return static_cast<std::size_t>(-r_) + 1; }

  /// Bounds-checked access; throws IndexError.
  double at(std::size_t channel, Step offset) const;
  void set(std::size_t channel, Step offset, double value);

  StateView view() const noexcept { return StateView(values_, n_, r_); }
  const std::vector<double>& time_major() const noexcept { return values_; }

  friend bool operator==(const HistoryState&, const HistoryState&) = default;

 private:
  HistoryState(std::vector<double> values, std::size_t n_channels, Step window_start);
  std::size_t index(std::size_t channel, Step offset) const;

  std::vector<double> values_;
  std::size_t n_;
  Step r_;
};

/// max_i max_j |alpha_i(j)|.
double sup_norm(const StateView& state) noexcept;
inline double sup_norm(const HistoryState& state) noexcept { return sup_norm(state.view()); }

/// sup_norm(a - b). Throws ShapeError when N or r differ.
double state_distance(const StateView& a, const StateView& b);
inline double state_distance(const HistoryState& a, const HistoryState& b) {
  return state_distance(a.view(), b.view());
}

/// The general equation. `leakage(i, m)` must return values in (-1, 1);
/// `nonlinearity(i, m, window)` implements h_i(m, xbar_m). When `period` is
/// set, both functions are expected to be period-periodic in m.
struct SystemDefinition {
  using Leakage = std::function<double(std::size_t channel, Step m)>;
  using Nonlinearity = std::function<double(std::size_t channel, Step m, const StateView& window)>;

  std::size_t n_channels = 1;
  Step leakage_delay = 0;   // tau >= 0
  Step window_start = 0;    // r <= -tau
  Leakage leakage;
  Nonlinearity nonlinearity;
  std::optional<Step> period;

  /// Throws ConfigError if N, tau, r or the callables are inconsistent.
  void validate() const;
};

/// Dense record of x(m) for m in [r, M]. Immutable once built.
class Trajectory {
 public:
  /// `samples` is time-major over [r, horizon].
  Trajectory(std::vector<double> samples, std::size_t n_channels, Step window_start);

  std::size_t n_channels() const noexcept { return n_; }
  Step window_start() const noexcept { return r_; }
  Step horizon() const noexcept { return horizon_; }

  /// x_i(m) for m in [r, M]. Throws IndexError.
  double value(std::size_t channel, Step m) const;

  /// xbar_m as an owned state, 0 <= m <= M. Throws IndexError.
  HistoryState window(Step m) const;
  /// Non-owning xbar_m; valid while the trajectory lives.
  StateView window_view(Step m) const;

  /// x(m) as a vector over channels.
  std::vector<double> point(Step m) const;

  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  void check_step(Step m, Step lo) const;

  std::vector<double> samples_;
  std::size_t n_;
  Step r_;
  Step horizon_;
};

}  // namespace delaystab
