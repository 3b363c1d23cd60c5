#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>

#include "delaystab/engine.hpp"
#include "delaystab/errors.hpp"
#include "delaystab/model_certificates.hpp"
#include "fixture.hpp"
#include "random_specs.hpp"

using namespace delaystab;

namespace {

SystemDefinition scalar(double c, double h, Step tau, Step r, std::optional<Step> period = {}) {
  SystemDefinition sys;
  sys.n_channels = 1;
  sys.leakage_delay = tau;
  sys.window_start = r;
  sys.leakage = [c](std::size_t, Step) { return c; };
  sys.nonlinearity = [h](std::size_t, Step, const StateView&) { return h; };
  sys.period = period;
  return sys;
}

}  // namespace

TEST_CASE("zero system forgets its history") {
  SystemDefinition sys = scalar(0.0, 0.0, 1, -2);
  sys.n_channels = 3;
  dstest::Rng rng(1);
  const Trajectory traj = simulate(sys, dstest::random_state(rng, 3, -2), 20);
  for (Step m = 1; m <= 20; ++m)
    for (std::size_t i = 0; i < 3; ++i) CHECK(traj.value(i, m) == 0.0);
}

TEST_CASE("geometric recursion") {
  const Trajectory traj = simulate(scalar(0.5, 0.0, 0, 0), HistoryState::from_channels({{1.0}}, 0), 40);
  for (Step m = 0; m <= 40; ++m) CHECK(traj.value(0, m) == std::ldexp(1.0, -static_cast<int>(m)));
}

TEST_CASE("leakage delay one halves pairs") {
  // Hand iteration: x(m+1) = x(m-1) / 2.
  std::vector<double> x{1.0, 1.0};
  for (int m = 0; m < 8; ++m) x.push_back(0.5 * x[x.size() - 2]);
  const Trajectory traj = simulate(scalar(0.5, 0.0, 1, -1), HistoryState::from_channels({{1.0, 1.0}}, -1), 8);
  CHECK(traj.value(0, 1) == 0.5);
  CHECK(traj.value(0, 2) == 0.5);
  CHECK(traj.value(0, 3) == 0.25);
  CHECK(traj.value(0, 4) == 0.25);
  for (Step m = -1; m <= 8; ++m) CHECK(traj.value(0, m) == x[static_cast<std::size_t>(m + 1)]);
}

TEST_CASE("simulate reports divergence and bad leakage") {
  SystemDefinition sys = scalar(0.5, 0.0, 0, 0);
  sys.nonlinearity = [](std::size_t, Step m, const StateView&) {
    return m == 6 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  try {
    simulate(sys, HistoryState(1, 0), 20);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() == 7);
    CHECK(e.channel() == 0);
  }
  CHECK_THROWS_AS(simulate(scalar(1.0, 0.0, 0, 0), HistoryState(1, 0), 5), HypothesisError);
  CHECK_THROWS_AS(simulate(scalar(0.5, 0.0, 0, 0), HistoryState(2, 0), 5), ShapeError);
}

TEST_CASE("simulate is bitwise deterministic") {
  const auto spec = dstest::example_spec();
  const SystemDefinition sys = lower_hopfield(spec);
  dstest::Rng rng(2);
  const auto init = dstest::random_state(rng, 2, sys.window_start);
  const Trajectory a = simulate(sys, init, 300);
  const Trajectory b = simulate(sys, init, 300);
  CHECK(a.samples() == b.samples());
  CHECK(recurrence_residual(sys, a) == 0.0);
}

TEST_CASE("Poincare map") {
  CHECK_THROWS_AS(poincare_map(scalar(0.5, 0.0, 0, 0), HistoryState(1, 0)), ConfigError);
  SystemDefinition dead = scalar(0.0, 0.0, 1, -2, 4);
  dstest::Rng rng(3);
  CHECK(poincare_map(dead, dstest::random_state(rng, 1, -2)) == HistoryState(1, -2));

  // 0.5 * 0.2 + 0.1 == 0.2 exactly in binary.
  const SystemDefinition eq = scalar(0.5, 0.1, 0, -1, 3);
  const auto star = HistoryState::from_channels({{0.2, 0.2}}, -1);
  CHECK(poincare_map(eq, star) == star);
}

TEST_CASE("scalar fixed point is the equilibrium h / (1 - c)") {
  const double expect = 0.1 / (1.0 - 0.5);
  for (Step omega : {1, 3, 7}) {
    const auto res = find_periodic_orbit(scalar(0.5, 0.1, 0, 0, omega), 1e-13, 500);
    CHECK(res.fixed_point.at(0, 0) == doctest::Approx(expect).epsilon(1e-11));
    for (Step m = 0; m <= omega; ++m) CHECK(res.orbit.value(0, m) == doctest::Approx(expect).epsilon(1e-11));
  }
  const auto zero = find_periodic_orbit(scalar(0.4, 0.0, 1, -1, 5), 1e-12, 100);
  CHECK(zero.fixed_point == HistoryState(1, -1));
}

TEST_CASE("periodic solver gives up with a residual history") {
  try {
    find_periodic_orbit(scalar(0.999, 0.1, 0, 0, 1), 1e-12, 4);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.residual_history().size() == 4);
  }
}

TEST_CASE("example orbit is periodic") {
  const SystemDefinition sys = lower_hopfield(dstest::example_spec());
  REQUIRE(sys.period);
  CHECK(*sys.period == 10);
  const auto res = find_periodic_orbit(sys, 1e-10, 500);
  CHECK(res.residual <= 1e-10);
  const Trajectory again = simulate(sys, poincare_map(sys, res.fixed_point), 10);
  for (Step m = 0; m <= 10; ++m)
    CHECK(state_distance(again.window_view(m), res.orbit.window_view(m)) <= 1e-9);
}

TEST_CASE("semigroup shift identity") {
  const SystemDefinition sys = lower_hopfield(dstest::example_spec());
  const Step omega = *sys.period;
  dstest::Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto a = dstest::random_state(rng, 2, sys.window_start);
    const Trajectory two = simulate(sys, a, 2 * omega);
    const Trajectory one = simulate(sys, poincare_map(sys, a), omega);
    for (Step j = 0; j <= omega; ++j) CHECK(two.window(omega + j) == one.window(j));
  }
}

TEST_CASE("Poincare contraction observed within the certified envelope") {
  const auto spec = dstest::example_spec();
  const auto mc = certify_model(spec);
  REQUIRE(mc.certificate.certified());
  const SystemDefinition sys = lower_hopfield(spec);
  const Step omega = *sys.period;
  const double C = mc.certificate.C_original;
  const double zeta = mc.certificate.zeta;
  const std::size_t p = contraction_power(C, zeta, omega);
  CHECK(C * std::pow(zeta, static_cast<double>(p) * static_cast<double>(omega)) < 1.0);
  dstest::Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto a = dstest::random_state(rng, 2, sys.window_start);
    const auto b = dstest::random_state(rng, 2, sys.window_start);
    const double d0 = state_distance(a, b);
    CHECK(state_distance(poincare_map(sys, a), poincare_map(sys, b)) <=
          C * std::pow(zeta, static_cast<double>(omega)) * d0);
  }
}

TEST_CASE("scalar envelope constants C = 2, zeta = 1/2") {
  LipschitzData<double> lip{Matrix<double>(1, 1, 0.0), {0.5}};
  const auto cert = certify_row_dominance(lip, 0, 0);
  REQUIRE(cert.certified());
  CHECK(cert.zeta == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(cert.C == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(cert.lambda_bound == 0.0);
  const SystemDefinition sys = scalar(0.5, 0.0, 0, 0);
  const auto rep = check_exponential_bound(sys, HistoryState::from_channels({{3.0}}, 0),
                                           HistoryState::from_channels({{-1.0}}, 0), 2.0, 0.5, 60);
  CHECK(rep.passed);
  CHECK(rep.max_violation >= 0.0);
}

TEST_CASE("identical pairs pass both checks with zero distance") {
  const SystemDefinition sys = lower_hopfield(dstest::example_spec());
  dstest::Rng rng(9);
  const auto a = dstest::random_state(rng, 2, sys.window_start);
  const auto env = check_exponential_bound(sys, a, a, 10.0, 0.9, 100);
  CHECK(env.passed);
  for (const auto& s : env.worst_series) CHECK(s.observed == 0.0);
  const auto lemma = check_lemma_inequality(sys, a, a, [](std::size_t, Step) { return 1.0; }, 20);
  CHECK(lemma.passed);
}

TEST_CASE("lemma inequality on the example") {
  const auto spec = dstest::example_spec();
  const auto mc = certify_model(spec);
  const auto H = to_double(mc.lipschitz.row_sums());
  const SystemDefinition sys = lower_hopfield(spec);
  dstest::Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const auto rep = check_lemma_inequality(sys, dstest::random_state(rng, 2, sys.window_start),
                                            dstest::random_state(rng, 2, sys.window_start),
                                            [&](std::size_t i, Step) { return H[i]; }, 20);
    CHECK(rep.passed);
    CHECK(rep.max_violation >= -numerical_slack(1.0));
  }
}

TEST_CASE("bound check merge keeps the earlier pair on ties") {
  BoundCheckReport a, b;
  a.pairs_tested = 1;
  b.pairs_tested = 1;
  a.max_violation = -1.0;
  b.max_violation = -1.0;
  a.passed = b.passed = false;
  a.merge(b);
  CHECK(a.pairs_tested == 2);
  CHECK(a.worst_pair == 0);
}

TEST_CASE("partition index") {
  for (Step m = 1; m < 50; ++m) CHECK(partition_index(m, 0) == ResidueIndex{0, m});
  CHECK(partition_index(4, 2) == ResidueIndex{2, 2});
  CHECK(partition_index(3, 2) == ResidueIndex{0, 1});
  CHECK_THROWS_AS(partition_index(0, 2), DomainError);
  CHECK_THROWS_AS(partition_index(3, -1), DomainError);

  // Enumerate n(tau+1) - s and require every m in [1, 10^4] to be hit once,
  // by the same (s, n) the function returns.
  for (Step tau = 0; tau <= 8; ++tau) {
    std::set<Step> seen;
    for (Step n = 1; n * (tau + 1) - tau <= 10000; ++n) {
      for (Step s = 0; s <= tau; ++s) {
        const Step m = n * (tau + 1) - s;
        if (m < 1 || m > 10000) continue;
        CHECK(seen.insert(m).second);
        const auto idx = partition_index(m, tau);
        if (idx.s != s || idx.n != n) FAIL_CHECK("m=" << m << " tau=" << tau);
      }
    }
    CHECK(seen.size() == 10000);
  }
}
