#include "doctest.h"

#include <cmath>
#include <numbers>

#include "delaystab/engine.hpp"
#include "delaystab/errors.hpp"
#include "delaystab/model_certificates.hpp"
#include "delaystab/models.hpp"
#include "fixture.hpp"
#include "oracles.hpp"

using namespace delaystab;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

}  // namespace

TEST_CASE("lowered Hopfield matches the reference simulator bitwise") {
  dstest::Rng rng(61);
  for (int t = 0; t < 60; ++t) {
    const auto raw = dstest::random_hopfield(rng);
    const SystemDefinition sys = lower_hopfield(raw.spec);
    const auto init = dstest::random_state(rng, raw.n, sys.window_start);
    const Trajectory traj = simulate(sys, init, 80);
    const auto ref = dstest::reference_hopfield(raw, init, 80);
    REQUIRE(ref.size() == traj.samples().size());
    CHECK(ref == traj.samples());
  }
}

TEST_CASE("example lowering shape") {
  const auto spec = dstest::example_spec();
  const SystemDefinition sys = lower_hopfield(spec);
  CHECK(sys.n_channels == 2);
  CHECK(sys.leakage_delay == 2);
  CHECK(sys.window_start == -3);
  REQUIRE(sys.period);
  CHECK(*sys.period == 10);
  CHECK(spec.delays[spec.index(0, 0, 1)](0) == 3);
  CHECK(spec.delays[spec.index(0, 0, 1)](1) == 1);
}

TEST_CASE("pure leakage decays as the product of |c|") {
  auto s = HopfieldSpec::zeros(2, 1, 0);
  s.leakage = {Coefficient::cosine(q(3, 4), 5), Coefficient::alternating(q(1, 2), q(-1, 4))};
  const SystemDefinition sys = lower_hopfield(s);
  const auto init = HistoryState::from_channels({{1.5}, {-2.0}}, 0);
  const Trajectory traj = simulate(sys, init, 30);
  for (std::size_t i = 0; i < 2; ++i) {
    double prod = std::abs(init.at(i, 0));
    for (Step m = 0; m < 30; ++m) {
      prod *= std::abs(s.leakage[i](m));
      CHECK(std::abs(traj.value(i, m + 1)) == doctest::Approx(prod).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant Hopfield spec settles on an equilibrium") {
  auto s = HopfieldSpec::zeros(2, 1, 1);
  s.leakage = {Coefficient::constant(q(1, 4)), Coefficient::constant(q(-1, 5))};
  s.weights = {Coefficient::constant(q(1, 5)), Coefficient::constant(q(-1, 4)),
               Coefficient::constant(q(1, 3)), Coefficient::constant(q(1, 6))};
  s.activations.assign(4, Activation::tanh());
  s.inputs = {Coefficient::constant(q(1, 2)), Coefficient::constant(q(-1))};
  const SystemDefinition sys = lower_hopfield(s);
  REQUIRE(sys.period);
  CHECK(*sys.period == 1);
  CHECK(certify_model(s).certificate.certified());
  const auto res = find_periodic_orbit(sys, 1e-13, 500);
  for (Step m = 0; m <= 1; ++m)
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(res.orbit.value(i, m) == doctest::Approx(res.fixed_point.at(i, 0)).epsilon(1e-11));
}

TEST_CASE("BAM without cross weights decouples") {
  dstest::Rng rng(63);
  auto s = dstest::random_bam(rng);
  for (auto* v : {&s.a_hat, &s.b_hat, &s.a_tilde, &s.b_tilde})
    for (auto& c : *v) c = Coefficient::constant(0);
  const SystemDefinition sys = lower_bam(s);
  auto a = dstest::random_state(rng, s.n1 + s.n2, sys.window_start);
  auto b = a;
  for (std::size_t j = 0; j < s.n2; ++j)
    for (Step k = sys.window_start; k <= 0; ++k) b.set(s.n1 + j, k, a.at(s.n1 + j, k) + 1.0);
  const Trajectory ta = simulate(sys, a, 50);
  const Trajectory tb = simulate(sys, b, 50);
  for (Step m = 0; m <= 50; ++m)
    for (std::size_t i = 0; i < s.n1; ++i) CHECK(ta.value(i, m) == tb.value(i, m));
  CHECK(lipschitz_data(s).H == Matrix<Rational>(s.n1 + s.n2, s.n1 + s.n2));
}

TEST_CASE("BAM x block is its input when its leakage and weights vanish") {
  dstest::Rng rng(64);
  auto s = dstest::random_bam(rng);
  for (auto& c : s.c_hat) c = Coefficient::constant(0);
  for (auto* v : {&s.a_hat, &s.b_hat})
    for (auto& c : *v) c = Coefficient::constant(0);
  const SystemDefinition sys = lower_bam(s);
  const Trajectory traj = simulate(sys, dstest::random_state(rng, s.n1 + s.n2, sys.window_start), 40);
  for (Step m = 1; m <= 40; ++m)
    for (std::size_t i = 0; i < s.n1; ++i) CHECK(traj.value(i, m) == s.I_hat[i](m - 1));
}

TEST_CASE("symmetric one-by-one BAM converges to its equilibrium") {
  auto s = BAMSpec::zeros(1, 1, 1);
  s.a_hat = s.b_hat = s.a_tilde = s.b_tilde = {Coefficient::constant(q(1, 8))};
  s.tau_hat = s.tau_tilde = {Delay::constant(2)};
  s.f = {Activation::tanh()};
  s.g = {Activation::tanh()};
  s.I_hat = {Coefficient::constant(q(1, 2))};
  s.I_tilde = {Coefficient::constant(q(-1, 3))};
  const auto mc = certify_model(s);
  CHECK(mc.certificate.certified());
  const SystemDefinition sys = lower_bam(s);
  const Trajectory traj = simulate(sys, HistoryState::from_function(2, -2, [](std::size_t i, Step j) {
                                     return i == 0 ? std::cos(static_cast<double>(j)) : 3.0;
                                   }), 400);
  const auto end = traj.point(400);
  const auto prev = traj.point(399);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(end[i] - prev[i]) < 1e-12);
  // x = tanh(y) / 4 + 1/2, y = tanh(x) / 4 - 1/3 at the equilibrium.
  CHECK(end[0] == doctest::Approx(std::tanh(end[1]) / 4.0 + 0.5).epsilon(1e-12));
  CHECK(end[1] == doctest::Approx(std::tanh(end[0]) / 4.0 - 1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("high-order rescaling") {
  dstest::Rng rng(65);
  const auto s = dstest::random_high_order(rng);
  const SystemDefinition x = lower_high_order(s);
  const SystemDefinition y = lower_high_order(s, std::vector<Rational>(s.n, Rational(1)));
  const auto init = dstest::random_state(rng, s.n, x.window_start);
  CHECK(simulate(x, init, 60).samples() == simulate(y, init, 60).samples());
  CHECK_THROWS_AS(rescale_high_order(s, std::vector<Rational>(s.n, Rational(-1))), DomainError);
  CHECK_THROWS_AS(rescale_hopfield(dstest::example_spec(), {q(1), q(0)}), DomainError);
}

TEST_CASE("Hopfield rescaling relates trajectories by y = x / d") {
  const auto spec = dstest::example_spec();
  const std::vector<Rational> d{q(6), q(12)};
  const SystemDefinition x = lower_hopfield(spec);
  const SystemDefinition y = lower_hopfield(rescale_hopfield(spec, d));
  dstest::Rng rng(66);
  const auto a = dstest::random_state(rng, 2, x.window_start);
  const auto b = HistoryState::from_function(2, x.window_start, [&](std::size_t i, Step j) {
    return a.at(i, j) / to_double(d[i]);
  });
  const Trajectory tx = simulate(x, a, 200);
  const Trajectory ty = simulate(y, b, 200);
  for (Step m = 0; m <= 200; ++m)
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(std::abs(ty.value(i, m) - tx.value(i, m) / to_double(d[i])) <= 1e-12);
  CHECK(lipschitz_data(rescale_hopfield(spec, d)).H == rescale_by_witness(lipschitz_data(spec), d).H);
}

TEST_CASE("example Lipschitz data") {
  const auto lip = lipschitz_data(dstest::example_spec());
  CHECK(lip.c_plus == std::vector<Rational>{q(1, 4), q(1, 12)});
  CHECK(lip.H == (Matrix<Rational>{{q(1, 4), q(1, 6)}, {q(1, 2), q(7, 12)}}));
  auto quiet = dstest::example_spec();
  for (auto& w : quiet.weights) w = Coefficient::constant(0);
  CHECK(lipschitz_data(quiet).H == Matrix<Rational>(2, 2));
}

TEST_CASE("activations without a Lipschitz constant are rejected") {
  auto s = dstest::example_spec();
  s.activations[0] = Activation::table({-1.0, 0.0, 1.0}, {-1.0, 0.5, 1.0});
  CHECK_THROWS_AS(lipschitz_data(s), SpecError);
  s.activations[0] = Activation::table({-1.0, 0.0, 1.0}, {-1.0, 0.5, 1.0}, q(3, 2));
  CHECK(lipschitz_data(s).H(0, 0) == q(1, 8) * q(3, 2) + q(1, 8));
}

namespace {

// |h_ij(m, a) - h_ij(m, b)| <= H_ij |a - b| over random state pairs.
void check_a1(const ModelSpec& spec, dstest::Rng& rng, int samples) {
  const auto terms = std::visit([](const auto& s) { return pairwise_terms(s); }, spec);
  const auto lip = to_double(lipschitz_data(spec));
  const std::size_t n = lip.size();
  const SystemDefinition sys = lower(spec);
  std::uniform_int_distribution<Step> step(0, 200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < samples; ++t) {
    const auto a = dstest::random_state(rng, n, sys.window_start, 3.0);
    // Nearby and far pairs both.
    const double spread = u(rng) < 0.5 ? 1e-3 : 3.0;
    const auto b = HistoryState::from_function(n, sys.window_start, [&](std::size_t i, Step j) {
      return a.at(i, j) + spread * (2.0 * u(rng) - 1.0);
    });
    const double dist = state_distance(a, b);
    const Step m = step(rng);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double lhs = std::abs(terms[i * n + j](m, a.view()) - terms[i * n + j](m, b.view()));
        if (!(lhs <= lip.H(i, j) * dist * (1.0 + 1e-12) + 1e-15))
          FAIL_CHECK("pairwise Lipschitz bound violated at i=" << i << " j=" << j << ": " << lhs << " > " << lip.H(i, j) * dist);
      }
    }
  }
}

}  // namespace

TEST_CASE("Lipschitz data is a valid pairwise bound") {
  dstest::Rng rng(67);
  for (int t = 0; t < 40; ++t) check_a1(dstest::random_model(rng), rng, 250);
  check_a1(dstest::example_spec(), rng, 1000);
}

TEST_CASE("pairwise terms sum to the nonlinearity") {
  dstest::Rng rng(68);
  for (int t = 0; t < 30; ++t) {
    const ModelSpec spec = dstest::random_model(rng);
    const auto terms = std::visit([](const auto& s) { return pairwise_terms(s); }, spec);
    const SystemDefinition sys = lower(spec);
    const std::size_t n = sys.n_channels;
    const auto a = dstest::random_state(rng, n, sys.window_start);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += terms[i * n + j](7, a.view());
      CHECK(acc == doctest::Approx(sys.nonlinearity(i, 7, a.view())).epsilon(1e-12));
    }
  }
}

TEST_CASE("descriptor sups") {
  CHECK(Coefficient::constant(q(-3, 10)).analytic_sup() == q(3, 10));
  const auto c1 = Coefficient::cosine(q(1, 4), 10);
  CHECK(c1.analytic_sup() == q(1, 4));
  CHECK(c1.sampled_sup() == 0.25);
  const auto s2 = Coefficient::sine(q(1, 12), 10);
  CHECK(s2.analytic_sup() == q(1, 12));
  // Integer samples of sin(2 pi m / 10) peak at m = 2, 3: sin(2 pi / 5).
  const double sampled = std::sin(2.0 * std::numbers::pi / 5.0) / 12.0;
  CHECK(s2.sampled_sup() == doctest::Approx(sampled).epsilon(1e-15));
  CHECK(s2.sampled_sup() == doctest::Approx(0.07925).epsilon(1e-3));
  CHECK(s2.sampled_sup() < 1.0 / 12.0);
  const auto sup = sup_of_descriptor(s2);
  CHECK(sup.analytic == q(1, 12));
  CHECK(Coefficient::table({q(1, 2), q(-3, 4)}).analytic_sup() == q(3, 4));
  CHECK(Coefficient::alternating(q(1, 2), q(-1, 4)).analytic_sup() == q(3, 4));
  CHECK_THROWS_AS(Coefficient::callable([](Step m) { return static_cast<double>(m); }).analytic_sup(),
                  SpecError);
  CHECK(Coefficient::callable([](Step) { return 0.5; }, 1, q(1, 2)).analytic_sup() == q(1, 2));
}

TEST_CASE("descriptor sup dominates samples over ten periods") {
  dstest::Rng rng(69);
  for (int t = 0; t < 200; ++t) {
    dstest::RawHopfield raw = dstest::random_hopfield(rng);
    for (const auto& c : raw.spec.weights) {
      const Step p = *c.period();
      const double sup = to_double(c.analytic_sup());
      for (Step m = 0; m <= 10 * p; ++m) CHECK(std::abs(c(m)) <= sup);
      CHECK(c.sampled_sup() <= sup);
    }
  }
}
