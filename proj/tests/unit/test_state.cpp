#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "delaystab/engine.hpp"
#include "delaystab/errors.hpp"
#include "random_specs.hpp"

using namespace delaystab;

TEST_CASE("sup_norm of small windows") {
  CHECK(sup_norm(HistoryState(3, -2)) == 0.0);
  const auto s = HistoryState::from_channels({{1.0, -3.0}, {2.0, 2.0}}, -1);
  CHECK(sup_norm(s) == 3.0);
  CHECK(s.at(0, -1) == 1.0);
  CHECK(s.at(1, 0) == 2.0);
  CHECK_THROWS_AS(s.at(2, 0), IndexError);
  CHECK_THROWS_AS(s.at(0, 1), IndexError);
  CHECK_THROWS_AS(s.at(0, -2), IndexError);
}

TEST_CASE("state_distance basic values") {
  const auto cosine = [](std::size_t, Step j) { return std::cos(static_cast<double>(j)); };
  const auto a = HistoryState::from_function(2, -3, cosine);
  const auto b = HistoryState::from_function(2, -3, cosine);
  CHECK(state_distance(a, b) == 0.0);
  CHECK(state_distance(a, a) == 0.0);

  const auto ones = HistoryState::from_function(2, -3, [](std::size_t, Step) { return 1.0; });
  CHECK(state_distance(ones, HistoryState(2, -3)) == 1.0);

  const auto c = HistoryState::from_channels({{0.5, -0.25, 0.0}}, -2);
  CHECK(state_distance(c, HistoryState(1, -2)) == 0.5);

  CHECK_THROWS_AS(state_distance(HistoryState(1, -2), HistoryState(2, -2)), ShapeError);
  CHECK_THROWS_AS(state_distance(HistoryState(1, -2), HistoryState(1, -3)), ShapeError);
}

TEST_CASE("time-major layout") {
  const auto s = HistoryState::from_channels({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}}, -2);
  const std::vector<double> expect{1.0, 4.0, 2.0, 5.0, 3.0, 6.0};
  CHECK(s.time_major() == expect);
  CHECK_THROWS_AS(HistoryState::from_time_major({1.0, 2.0, 3.0}, 2, -1), ShapeError);
}

TEST_CASE("state_distance is a metric") {
  dstest::Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const Step r = -static_cast<Step>(t % 5);
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const auto a = dstest::random_state(rng, n, r);
    const auto b = dstest::random_state(rng, n, r);
    const auto c = dstest::random_state(rng, n, r);
    const double ab = state_distance(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab > 0.0);
    CHECK(ab == state_distance(b, a));
    CHECK(state_distance(a, c) <= ab + state_distance(b, c));
    CHECK(state_distance(a, a) == 0.0);
  }
}

namespace {

SystemDefinition zero_system(std::size_t n, Step tau, Step r) {
  SystemDefinition sys;
  sys.n_channels = n;
  sys.leakage_delay = tau;
  sys.window_start = r;
  sys.leakage = [](std::size_t, Step) { return 0.0; };
  sys.nonlinearity = [](std::size_t, Step, const StateView&) { return 0.0; };
  return sys;
}

}  // namespace

TEST_CASE("trajectory windows") {
  dstest::Rng rng(5);
  const auto init = dstest::random_state(rng, 2, -3);
  const Trajectory traj = simulate(zero_system(2, 1, -3), init, 10);
  CHECK(traj.window(0) == init);
  CHECK(traj.window(4) == HistoryState(2, -3));
  CHECK(traj.horizon() == 10);
  CHECK_THROWS_AS(traj.window(11), IndexError);
  CHECK_THROWS_AS(traj.window(-1), IndexError);
  CHECK_THROWS_AS(traj.value(0, -4), IndexError);
}

TEST_CASE("window sup equals brute-force scan") {
  dstest::Rng rng(8);
  SystemDefinition sys;
  sys.n_channels = 2;
  sys.leakage_delay = 2;
  sys.window_start = -4;
  sys.leakage = [](std::size_t i, Step m) { return i == 0 ? 0.5 : 0.3 * std::cos(static_cast<double>(m)); };
  sys.nonlinearity = [](std::size_t i, Step m, const StateView& w) {
    return 0.2 * std::tanh(w(1 - i, -3)) + 0.1 * std::sin(static_cast<double>(m));
  };
  const Trajectory traj = simulate(sys, dstest::random_state(rng, 2, -4), 60);
  for (Step m = 0; m <= 60; ++m) {
    double best = 0.0;
    for (Step k = m - 4; k <= m; ++k)
      for (std::size_t i = 0; i < 2; ++i) best = std::max(best, std::abs(traj.value(i, k)));
    CHECK(sup_norm(traj.window(m)) == best);
    CHECK(sup_norm(traj.window_view(m)) == best);
  }
  CHECK(recurrence_residual(sys, traj) == 0.0);
}
