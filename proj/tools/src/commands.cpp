#include "delaystab_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "delaystab/engine.hpp"
#include "delaystab/errors.hpp"
#include "delaystab/model_certificates.hpp"
#include "delaystab/model_config.hpp"
#include "delaystab/report.hpp"
#include "delaystab/seeds.hpp"

namespace delaystab::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

ModelSpec load_model(const RunConfig& config) {
  if (config.model_path.empty()) throw ConfigError("--model is required");
  return load_model_config(config.model_path);
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

/// Writes x(m) for m in [from, to] as csv or json; returns the file written.
fs::path write_trajectory(const RunConfig& config, const std::string& stem, const Trajectory& traj,
                          Step from, Step to) {
  if (config.format == "json") {
    const fs::path path = config.output / (stem + ".json");
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["m"] = json::array();
    doc["x"] = json::array();
    for (Step m = from; m <= to; ++m) {
      doc["m"].push_back(m);
      doc["x"].push_back(traj.point(m));
    }
    open_output(path) << doc.dump(2) << "\n";
    return path;
  }
  const fs::path path = config.output / (stem + ".csv");
  auto out = open_output(path);
  write_trajectory_csv(out, traj, from, to);
  return path;
}

void write_plot_script(const RunConfig& config, const std::string& stem, std::size_t n) {
  auto out = open_output(config.output / (stem + ".gp"));
  out << "# gnuplot script; run 'gnuplot " << stem << ".gp' inside the output directory\n";
  out << "set datafile separator ','\nset key outside\nset xlabel 'm'\n";
  out << "set terminal pngcairo size 900,500\nset output '" << stem << ".png'\n";
  out << "plot ";
  for (std::size_t i = 0; i < n; ++i)
    out << (i ? ", " : "") << "'" << stem << ".csv' using 1:" << (i + 2)
        << " every ::1 with linespoints title 'x_" << (i + 1) << "'";
  out << "\n";
}

void check_config(const RunConfig& config) {
  if (!(config.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (config.horizon < 0) throw ConfigError("--horizon must be nonnegative");
  if (config.format != "csv" && config.format != "json")
    throw ConfigError("--format must be csv or json");
}

std::vector<StatePair> build_pairs(const RunConfig& config, std::size_t n, Step r) {
  std::vector<StatePair> pairs;
  for (const auto& text : config.seed_pairs) pairs.push_back(parse_seed_pair(text, n, r));
  if (pairs.empty() && config.random_pairs == 0) pairs = default_seed_pairs(n, r);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t p = 0; p < config.random_pairs; ++p) {
    auto draw = [&] { return HistoryState::from_function(n, r, [&](std::size_t, Step) { return u(rng); }); };
    HistoryState a = draw();
    HistoryState b = draw();
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Stages shared by the subcommands and `example`.

int certify_stage(const ModelCertificate& mc, const RunConfig& config, std::ostream& out) {
  auto file = open_output(config.output / "certificate.json");
  file << certificate_json(mc);
  out << certificate_summary(mc);
  return mc.certificate.certified() ? kOk : kNotCertified;
}

int periodic_stage(const SystemDefinition& system, const RunConfig& config, std::ostream& out,
                   std::ostream& err, std::optional<PeriodicOrbitResult>* result = nullptr) {
  if (!system.period) throw ConfigError("model has no period; periodic needs periodic or constant coefficients");
  try {
    PeriodicOrbitResult orbit = find_periodic_orbit(system, config.tol, config.max_iters);
    const Step omega = *system.period;
    write_trajectory(config, "orbit", orbit.orbit, system.window_start, omega);
    if (config.plot_script) write_plot_script(config, "orbit", system.n_channels);
    out << "periodic orbit: period " << omega << ", iterations " << orbit.iterations
        << ", residual " << format_double(orbit.residual) << ", contraction estimate "
        << format_double(orbit.contraction_estimate)
        << (orbit.at_roundoff_floor ? " (accepted at round-off floor)" : "") << "\n";
    if (result) *result = std::move(orbit);
    return kOk;
  } catch (const NonConvergenceError& e) {
    auto trace = open_output(config.output / "residual_trace.csv");
    std::vector<std::vector<double>> rows;
    const auto& h = e.residual_history();
    for (std::size_t k = 0; k < h.size(); ++k) rows.push_back({static_cast<double>(k + 1), h[k]});
    write_table_csv(trace, {"iteration", "residual"}, rows);
    err << "error: " << e.what() << " (trace in " << (config.output / "residual_trace.csv").string()
        << ")\n";
    return kNoConvergence;
  }
}

int verify_stage(const SystemDefinition& system, const ModelCertificate& mc,
                 const std::vector<StatePair>& pairs, const RunConfig& config, std::ostream& out) {
  const StabilityCertificate& cert = mc.certificate;
  const bool have_envelope = cert.certified();
  std::vector<double> row_sums = to_double(mc.lipschitz.row_sums());
  const LipschitzBound H = [row_sums](std::size_t i, Step) { return row_sums[i]; };
  const Step block = system.leakage_delay + 1;
  const Step n_max = std::max<Step>(1, config.horizon / block);

  struct PairResult {
    std::optional<BoundCheckReport> envelope;
    BoundCheckReport lemma;
  };
  std::vector<std::future<PairResult>> jobs;
  for (const auto& pair : pairs) {
    jobs.push_back(std::async(std::launch::async, [&, pair] {
      PairResult r;
      if (have_envelope)
        r.envelope = check_exponential_bound(system, pair.first, pair.second, cert.C_original,
                                             cert.zeta, config.horizon);
      r.lemma = check_lemma_inequality(system, pair.first, pair.second, H, n_max);
      return r;
    }));
  }

  BoundCheckReport envelope_total, lemma_total;
  std::vector<std::vector<double>> summary;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    PairResult r = jobs[k].get();
    if (r.envelope) {
      auto file = open_output(config.output / ("bounds_pair_" + std::to_string(k + 1) + ".csv"));
      write_bound_csv(file, r.envelope->worst_series);
    }
    const double env_slack = r.envelope ? r.envelope->max_violation : std::nan("");
    summary.push_back({static_cast<double>(k + 1), env_slack, r.lemma.max_violation});
    if (r.envelope) envelope_total.merge(std::move(*r.envelope));
    lemma_total.merge(std::move(r.lemma));
  }
  auto file = open_output(config.output / "bounds_summary.csv");
  write_table_csv(file, {"pair", "envelope_min_slack", "lemma_min_slack"}, summary);

  if (have_envelope)
    out << "exponential envelope C_original * zeta^m: " << pairs.size() << " pairs over m <= "
        << config.horizon << ", min slack " << format_double(envelope_total.max_violation)
        << (envelope_total.passed ? " PASS" : " FAIL") << "\n";
  else
    out << "exponential envelope skipped: model not certified (--force)\n";
  out << "solution-difference inequality: n <= " << n_max << ", min slack "
      << format_double(lemma_total.max_violation) << (lemma_total.passed ? " PASS" : " FAIL")
      << "\n";
  const bool ok = lemma_total.passed && (!have_envelope || envelope_total.passed);
  return ok ? kOk : kCheckFailed;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_certify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(config);
    const ModelSpec spec = load_model(config);
    return certify_stage(certify_model(spec), config, out);
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(config);
    const ModelSpec spec = load_model(config);
    const SystemDefinition system = lower(spec);
    std::vector<HistoryState> seeds;
    for (const auto& text : config.seeds)
      seeds.push_back(parse_seed(text, system.n_channels, system.window_start));
    if (seeds.empty()) seeds = default_seeds(system.n_channels, system.window_start);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const Trajectory traj = simulate(system, seeds[k], config.horizon);
      const std::string stem = "trajectory_" + std::to_string(k + 1);
      const fs::path path = write_trajectory(config, stem, traj, system.window_start, config.horizon);
      if (config.plot_script) write_plot_script(config, stem, system.n_channels);
      out << "wrote " << path.string() << " (m = " << system.window_start << ".." << config.horizon
          << ")\n";
    }
    return kOk;
  });
}

int cmd_periodic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(config);
    const ModelSpec spec = load_model(config);
    const ModelCertificate mc = certify_model(spec);
    if (!mc.certificate.certified() && !config.force) {
      err << "refusing: model is not certified (use --force to iterate anyway)\n";
      return static_cast<int>(kRefused);
    }
    return periodic_stage(lower(spec), config, out, err);
  });
}

int cmd_verify_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(config);
    const ModelSpec spec = load_model(config);
    const ModelCertificate mc = certify_model(spec);
    if (!mc.certificate.certified() && !config.force) {
      err << "refusing: model is not certified, so there is no envelope to check (use --force)\n";
      return static_cast<int>(kRefused);
    }
    const SystemDefinition system = lower(spec);
    const auto pairs = build_pairs(config, system.n_channels, system.window_start);
    return verify_stage(system, mc, pairs, config, out);
  });
}

int cmd_example(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_config(config);
    const ModelSpec spec = parse_model_config(example_model_json());
    const ModelCertificate mc = certify_model(spec);
    out << "== certify\n";
    if (const int code = certify_stage(mc, config, out); code != kOk) return code;

    out << "== periodic\n";
    const SystemDefinition system = lower(spec);
    std::optional<PeriodicOrbitResult> orbit;
    if (const int code = periodic_stage(system, config, out, err, &orbit); code != kOk) return code;

    out << "== verify-bounds\n";
    RunConfig vc = config;
    vc.seed_pairs.clear();
    vc.random_pairs = 0;
    const auto pairs = default_seed_pairs(system.n_channels, system.window_start);
    if (const int code = verify_stage(system, mc, pairs, vc, out); code != kOk) return code;

    out << "== convergence\n";
    const Step omega = *system.period;
    const Step horizon = std::max<Step>(config.horizon, 300);
    constexpr double kTarget = 1e-6;
    constexpr Step kWithin = 300;
    bool all_converged = true;
    const auto seeds = default_seeds(system.n_channels, system.window_start);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const Trajectory traj = simulate(system, seeds[k], horizon);
      std::vector<std::vector<double>> rows;
      std::optional<Step> reached;
      for (Step m = 0; m <= horizon; ++m) {
        const double d = state_distance(traj.window_view(m), orbit->orbit.window_view(m % omega));
        if (!reached && d <= kTarget) reached = m;
        std::vector<double> row{static_cast<double>(m), d};
        for (std::size_t i = 0; i < system.n_channels; ++i) row.push_back(traj.value(i, m));
        for (std::size_t i = 0; i < system.n_channels; ++i)
          row.push_back(orbit->orbit.value(i, m % omega));
        rows.push_back(std::move(row));
      }
      std::vector<std::string> header{"m", "distance_to_orbit"};
      for (std::size_t i = 0; i < system.n_channels; ++i) header.push_back("x_" + std::to_string(i + 1));
      for (std::size_t i = 0; i < system.n_channels; ++i)
        header.push_back("orbit_" + std::to_string(i + 1));
      auto file = open_output(config.output / ("convergence_" + std::to_string(k + 1) + ".csv"));
      write_table_csv(file, header, rows);
      const bool ok = reached && *reached <= kWithin;
      all_converged = all_converged && ok;
      out << "seed " << (k + 1) << ": distance to orbit <= 1e-6 "
          << (reached ? "from m = " + std::to_string(*reached) : std::string("never")) << "\n";
    }
    return all_converged ? static_cast<int>(kOk) : static_cast<int>(kCheckFailed);
  });
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability certificates and periodic orbits for delay difference equations"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&](CLI::App* sub, bool needs_model) {
    auto* model = sub->add_option("--model", config.model_path, "model config (JSON)");
    if (needs_model) model->required();
    sub->add_option("--out", config.output, "output directory")->capture_default_str();
    sub->add_option("--format", config.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--horizon", config.horizon, "number of steps M")->capture_default_str();
    sub->add_option("--tol", config.tol, "periodic-solver tolerance")->capture_default_str();
    sub->add_option("--max-iters", config.max_iters, "Poincare iterations")->capture_default_str();
    sub->add_flag("--force", config.force, "run on uncertified models");
    sub->add_flag("--plot-script", config.plot_script, "also write gnuplot scripts");
  };

  auto* certify = app.add_subcommand("certify", "certify global exponential stability");
  add_common(certify, true);
  auto* sim = app.add_subcommand("simulate", "simulate trajectories");
  add_common(sim, true);
  sim->add_option("--seed", config.seeds, "initial condition, e.g. 'cos,sin' (repeatable)");
  auto* periodic = app.add_subcommand("periodic", "find the periodic orbit");
  add_common(periodic, true);
  auto* verify = app.add_subcommand("verify-bounds", "check the certified envelope on trajectories");
  add_common(verify, true);
  verify->add_option("--seed-pair", config.seed_pairs, "'seedA:seedB' (repeatable)");
  verify->add_option("--random-pairs", config.random_pairs, "additional random pairs");
  auto* example = app.add_subcommand("example", "run the bundled two-neuron periodic example");
  add_common(example, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  if (*certify) return cmd_certify(config, out, err);
  if (*sim) return cmd_simulate(config, out, err);
  if (*periodic) return cmd_periodic(config, out, err);
  if (*verify) return cmd_verify_bounds(config, out, err);
  return cmd_example(config, out, err);
}

}  // namespace delaystab::cli
