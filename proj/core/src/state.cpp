#include "delaystab/state.hpp"

#include <cmath>
#include <string>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

void check_shape(std::size_t n_channels, Step window_start) {
  if (n_channels == 0) throw ShapeError("a state needs at least one channel");
  if (window_start > 0) throw ShapeError("window start r must be nonpositive");
}

}  // namespace

HistoryState::HistoryState(std::size_t n_channels, Step window_start)
    : n_(n_channels), r_(window_start) {
  check_shape(n_channels, window_start);
  values_.assign(n_ * length(), 0.0);
}

HistoryState::HistoryState(std::vector<double> values, std::size_t n_channels, Step window_start)
    : values_(std::move(values)), n_(n_channels), r_(window_start) {}

HistoryState HistoryState::from_channels(const std::vector<std::vector<double>>& channels,
                                         Step window_start) {
  check_shape(channels.size(), window_start);
  HistoryState state(channels.size(), window_start);
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].size() != state.length())
      throw ShapeError("channel " + std::to_string(i) + " has " +
                       std::to_string(channels[i].size()) + " samples, expected " +
                       std::to_string(state.length()));
    for (std::size_t k = 0; k < channels[i].size(); ++k)
      state.values_[k * state.n_ + i] = channels[i][k];
  }
  return state;
}

HistoryState HistoryState::from_function(std::size_t n_channels, Step window_start,
                                         const std::function<double(std::size_t, Step)>& f) {
  HistoryState state(n_channels, window_start);
  for (Step j = window_start; j <= 0; ++j)
    for (std::size_t i = 0; i < n_channels; ++i) state.values_[state.index(i, j)] = f(i, j);
  return state;
}

HistoryState HistoryState::from_time_major(std::vector<double> values, std::size_t n_channels,
                                           Step window_start) {
  check_shape(n_channels, window_start);
  const std::size_t expected = n_channels * (static_cast<std::size_t>(-window_start) + 1);
  if (values.size() != expected)
    throw ShapeError("time-major block has " + std::to_string(values.size()) +
                     " values, expected " + std::to_string(expected));
  return HistoryState(std::move(values), n_channels, window_start);
}

std::size_t HistoryState::index(std::size_t channel, Step offset) const {
  if (channel >= n_ || offset < r_ || offset > 0)
    throw IndexError("state index (" + std::to_string(channel) + ", " + std::to_string(offset) +
                     ") outside N=" + std::to_string(n_) + ", [" + std::to_string(r_) + ", 0]");
  return static_cast<std::size_t>(offset - r_) * n_ + channel;
}

double HistoryState::at(std::size_t channel, Step offset) const {
  return values_[index(channel, offset)];
}

void HistoryState::set(std::size_t channel, Step offset, double value) {
  values_[index(channel, offset)] = value;
}

double sup_norm(const StateView& state) noexcept {
  double best = 0.0;
  for (double v : state.raw()) best = std::max(best, std::abs(v));
  return best;
}

double state_distance(const StateView& a, const StateView& b) {
  if (a.n_channels() != b.n_channels() || a.window_start() != b.window_start())
    throw ShapeError("state_distance: states differ in N or r");
  const auto x = a.raw();
  const auto y = b.raw();
  double best = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) best = std::max(best, std::abs(x[k] - y[k]));
  return best;
}

void SystemDefinition::validate() const {
  if (n_channels == 0) throw ConfigError("system needs at least one channel");
  if (leakage_delay < 0) throw ConfigError("leakage delay tau must be nonnegative");
  if (window_start > -leakage_delay)
    throw ConfigError("window start r = " + std::to_string(window_start) +
                      " must satisfy r <= -tau = " + std::to_string(-leakage_delay));
  if (!leakage) throw ConfigError("system has no leakage coefficient function");
  if (!nonlinearity) throw ConfigError("system has no nonlinearity");
  if (period && *period <= 0) throw ConfigError("period must be a positive integer");
}

Trajectory::Trajectory(std::vector<double> samples, std::size_t n_channels, Step window_start)
    : samples_(std::move(samples)), n_(n_channels), r_(window_start) {
  check_shape(n_channels, window_start);
  const std::size_t window = static_cast<std::size_t>(-r_) + 1;
  if (samples_.size() % n_ != 0 || samples_.size() / n_ < window)
    throw ShapeError("trajectory samples do not cover the initial window");
  horizon_ = static_cast<Step>(samples_.size() / n_) + r_ - 1;
}

void Trajectory::check_step(Step m, Step lo) const {
  if (m < lo || m > horizon_)
    throw IndexError("step " + std::to_string(m) + " outside [" + std::to_string(lo) + ", " +
                     std::to_string(horizon_) + "]");
}

double Trajectory::value(std::size_t channel, Step m) const {
  check_step(m, r_);
  if (channel >= n_) throw IndexError("channel " + std::to_string(channel) + " out of range");
  return samples_[static_cast<std::size_t>(m - r_) * n_ + channel];
}

StateView Trajectory::window_view(Step m) const {
  check_step(m, 0);
  const std::size_t len = (static_cast<std::size_t>(-r_) + 1) * n_;
  return StateView(std::span<const double>(samples_).subspan(static_cast<std::size_t>(m) * n_, len),
                   n_, r_);
}

HistoryState Trajectory::window(Step m) const {
  const auto v = window_view(m).raw();
  return HistoryState::from_time_major(std::vector<double>(v.begin(), v.end()), n_, r_);
}

std::vector<double> Trajectory::point(Step m) const {
  check_step(m, r_);
  const auto first = samples_.begin() + static_cast<std::ptrdiff_t>((m - r_) * static_cast<Step>(n_));
  return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n_));
}

}  // namespace delaystab
