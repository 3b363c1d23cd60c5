#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "delaystab/errors.hpp"
#include "delaystab/model_certificates.hpp"
#include "delaystab/model_config.hpp"
#include "delaystab/report.hpp"
#include "delaystab/seeds.hpp"
#include "fixture.hpp"
#include "random_specs.hpp"

using namespace delaystab;
namespace fs = std::filesystem;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

std::size_t parse_error_offset(const std::string& text) {
  try {
    parse_model_config(text);
  } catch (const ParseError& e) {
    return e.byte_offset();
  }
  FAIL("expected a parse error");
  return 0;
}

}  // namespace

TEST_CASE("example config") {
  const auto spec = dstest::example_spec();
  CHECK(spec.n == 2);
  CHECK(spec.k == 2);
  CHECK(spec.tau == 2);
  CHECK(spec.leakage[0].kind() == Coefficient::Kind::Cosine);
  CHECK(spec.leakage[0].amplitude() == q(1, 4));
  CHECK(*spec.leakage[0].period() == 10);
  CHECK(spec.weights[spec.index(1, 1, 1)].amplitude() == q(-5, 12));
  CHECK(spec.weights[spec.index(0, 1, 0)].is_zero());
  CHECK(spec.activations[spec.index(0, 0, 0)].name() == "arctan");
  CHECK(spec.activations[spec.index(1, 0, 1)].name() == "tanh");
  CHECK(spec.inputs[1].amplitude() == q(1, 2));
}

TEST_CASE("config errors carry byte offsets") {
  CHECK_THROWS_AS(parse_model_config(""), ParseError);
  CHECK(parse_error_offset("") == 0);
  CHECK_THROWS_AS(parse_model_config("{\"format_version\": 1, \"model\": "), ParseError);

  const std::string base(example_model_json());
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string t = base;
    const auto at = t.find(from);
    REQUIRE(at != std::string::npos);
    t.replace(at, from.size(), to);
    return std::pair{t, at};
  };

  const auto [bad_fraction, at1] = replace("\"1/12\"", "\"1/x\"");
  CHECK(parse_error_offset(bad_fraction) == at1);

  const auto [bad_tau, at2] = replace("\"tau\": 2", "\"tau\": -1");
  CHECK(parse_error_offset(bad_tau) == at2 + 7);

  const auto [bad_model, at3] = replace("\"hopfield\"", "\"lstm\"");
  CHECK(parse_error_offset(bad_model) == at3);

  const auto [bad_version, at4] = replace("\"format_version\": 1", "\"format_version\": 2");
  CHECK(parse_error_offset(bad_version) == at4 + 18);

  const auto [bad_act, at5] = replace("\"arctan\"", "\"relu\"");
  CHECK(parse_error_offset(bad_act) == at5);

  const auto [short_inputs, at6] = replace("\"inputs\": [0, ", "\"inputs\": [");
  CHECK(parse_error_offset(short_inputs) == at6 + 10);

  // Leakage of modulus 1 violates |c| < 1.
  const auto [big_leak, at7] = replace("\"1/4\"}", "\"1\"}");
  CHECK_THROWS_AS(parse_model_config(big_leak), ParseError);
  (void)at7;

  const auto missing = replace("\"n\": 2,", "");
  CHECK_THROWS_AS(parse_model_config(missing.first), ParseError);

  CHECK_THROWS_AS(load_model_config("/nonexistent/model.json"), ConfigError);
}

TEST_CASE("BAM and high-order configs") {
  const std::string bam = R"({
    "format_version": 1, "model": "bam", "n1": 1, "n2": 1, "tau": 0,
    "c_hat": [0], "c_tilde": [0],
    "a_hat": [["1/8"]], "b_hat": [["1/8"]], "tau_hat": [[1]], "I_hat": [0],
    "a_tilde": [["1/8"]], "b_tilde": [["1/8"]], "tau_tilde": [[1]], "I_tilde": [0]
  })";
  const auto spec = std::get<BAMSpec>(parse_model_config(bam));
  CHECK(bam_p_matrix(spec) == (Matrix<Rational>{{q(1), q(-1, 4)}, {q(-1, 4), q(1)}}));
  CHECK(spec.f[0].name() == "tanh");

  const std::string ho = R"({
    "format_version": 1, "model": "high_order", "n": 1, "tau": 1,
    "c": [{"kind": "alt", "base": "1/10", "amplitude": "1/10"}],
    "b": [[["1/4"]]], "g_bound": [1]
  })";
  const auto h = std::get<HighOrderSpec>(parse_model_config(ho));
  CHECK(lipschitz_data(h).H(0, 0) == q(1, 2));
  CHECK(lipschitz_data(h).c_plus[0] == q(1, 5));
}

TEST_CASE("certificate JSON keeps exact fractions") {
  const auto mc = certify_model(dstest::example_spec());
  const auto doc = nlohmann::json::parse(certificate_json(mc));
  CHECK(doc["format_version"] == 1);
  CHECK(doc["verdict"] == "Certified");
  CHECK(doc["route"] == "M-witness");
  CHECK(doc["matrix"]["entries"] == nlohmann::json::parse(R"([["1/2","-1/6"],["-1/2","1/3"]])"));
  CHECK(doc["matrix"]["leading_minors"] == nlohmann::json::parse(R"(["1/2","1/12"])"));
  CHECK(doc["exact_witness_d"] == nlohmann::json::parse(R"(["6","12"])"));
  CHECK(doc["lipschitz"]["c_plus"] == nlohmann::json::parse(R"(["1/4","1/12"])"));
  CHECK(doc["r"] == -3);
  CHECK(matrix_to_string(mc.matrix) == "[1/2, -1/6; -1/2, 1/3]");
  CHECK(certificate_summary(mc).find("Certified") != std::string::npos);
}

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  dstest::Rng rng(71);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    const double v = u(rng) * std::pow(10.0, static_cast<double>(t % 40 - 20));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("orbit CSV round trip") {
  const SystemDefinition sys = lower_hopfield(dstest::example_spec());
  const double tol = 1e-10;
  const auto res = find_periodic_orbit(sys, tol, 500);
  std::stringstream csv;
  write_trajectory_csv(csv, res.orbit, sys.window_start, 10);
  std::string first;
  std::getline(csv, first);
  CHECK(first == "# format_version: 1");
  csv.seekg(0);
  const HistoryState back = read_window_csv(csv, 2, sys.window_start);
  CHECK(back == res.fixed_point);
  const Trajectory again = simulate(sys, back, 10);
  for (Step m = 0; m <= 10; ++m)
    CHECK(state_distance(again.window_view(m), res.orbit.window_view(m)) <= 10 * tol);

  std::stringstream empty("# format_version: 1\nm,x_1,x_2\n0,1,2\n");
  CHECK_THROWS_AS(read_window_csv(empty, 2, -3), ConfigError);
}

TEST_CASE("seed descriptors") {
  const auto seeds = default_seeds(2, -3);
  REQUIRE(seeds.size() == 3);
  for (Step j = -3; j <= 0; ++j) {
    const double x = static_cast<double>(j);
    CHECK(seeds[0].at(0, j) == std::cos(x));
    CHECK(seeds[0].at(1, j) == std::sin(x));
    CHECK(seeds[1].at(0, j) == std::exp(x));
    CHECK(seeds[1].at(1, j) == -1.0);
    CHECK(seeds[2].at(0, j) == -1.5 * std::exp(x));
    CHECK(seeds[2].at(1, j) == 1.5 * std::cos(x));
  }
  CHECK(default_seed_pairs(2, -3).size() == 3);

  const auto t = parse_seed("table(1;2;3;4), -cos", 2, -3);
  CHECK(t.at(0, -3) == 1.0);
  CHECK(t.at(0, 0) == 4.0);
  CHECK(t.at(1, -1) == -std::cos(-1.0));
  CHECK_THROWS_AS(parse_seed("table(1;2)", 1, -3), ConfigError);
  CHECK_THROWS_AS(parse_seed("cos", 2, -3), ConfigError);
  CHECK_THROWS_AS(parse_seed("cosh,sin", 2, -3), ConfigError);
  CHECK_THROWS_AS(parse_seed_pair("cos,sin", 2, -3), ConfigError);
  CHECK_THROWS_AS(parse_seed("@/nonexistent.csv", 2, -3), ConfigError);

  const fs::path path = fs::temp_directory_path() / "delaystab_seed_test.csv";
  {
    std::ofstream out(path);
    out << "# format_version: 1\nm,x_1,x_2\n-1,0.5,1.5\n0,-2,3\n1,9,9\n";
  }
  const auto f = parse_seed("@" + path.string(), 2, -1);
  CHECK(f.at(0, -1) == 0.5);
  CHECK(f.at(1, 0) == 3.0);
  fs::remove(path);
}
