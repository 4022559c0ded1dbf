#include "quakesim/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "quakesim/analysis.hpp"
#include "quakesim/chain.hpp"
#include "quakesim/config.hpp"
#include "quakesim/io.hpp"
#include "quakesim/parallel.hpp"
#include "quakesim/stats.hpp"

namespace quakesim {

using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string format;
};

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv("QUAKESIM_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

RunConfig load_config(const CommonOptions& opts) {
  if (opts.config_path.empty()) {
    throw ConfigError(std::vector<FieldError>{{"--config", "a config file is required"}});
  }
  std::ifstream in(opts.config_path);
  if (!in) throw ConfigError(
        std::vector<FieldError>{{"--config", "cannot open " + opts.config_path}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig cfg = parse_config(buffer.str());
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& content,
          std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number: " + item);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

State parse_state(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw std::invalid_argument("state must be \"x,y\"");
  return {v[0], v[1]};
}

bool want_json(const CommonOptions& o) { return o.format == "json"; }

// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOptions& o, const std::string& summary_flag,
                 bool stream_only, std::ostream& out) {
  const RunConfig cfg = load_config(o);
  validate(cfg.stop);
  const std::string events_path =
      !o.out_path.empty() ? o.out_path : cfg.events_path.value_or("");
  const std::string summary_path =
      !summary_flag.empty() ? summary_flag : cfg.summary_path.value_or("");

  std::ostringstream events;
  SimulationOptions options;
  options.saturation_cap = cfg.saturation_cap;
  options.keep_records = !stream_only;
  if (!want_json(o)) {
    write_event_csv_header(events);
    options.sink = [&events](const EventRecord& r) {
      write_event_csv_row(events, r);
    };
  }
  Rng rng = Rng::stream(cfg.seed, 0);
  const EventLog log = simulate(cfg.model, cfg.initial, cfg.stop, rng,
                                std::nullopt, options);

  if (want_json(o)) {
    json rows = json::array();
    for (const EventRecord& r : log.records) rows.push_back(to_json(r));
    events << dump(rows);
  }

  json summary = {
      {"seed", cfg.seed},
      {"stream_seed", stream_seed(cfg.seed, 0)},
      {"records", log.records.size() + log.dropped_records},
      {"horizon", log.horizon},
      {"terminated", std::string(to_string(log.terminated))},
  };
  if (log.dropped_records == 0) {
    summary["events"] = log.event_count();
    summary["integrated_y"] = integrated_y(log);
    summary["integrated_phi_x"] = integrated_phi_x(log);
    try {
      summary["rates"] = to_json(estimate_rates(log, cfg.burn_in_fraction));
    } catch (const std::invalid_argument& e) {
      summary["rates"] = nullptr;
      summary["rates_error"] = e.what();
    }
  }

  if (events_path.empty()) {
    out << events.str();
    if (!summary_path.empty()) emit(summary_path, dump(summary), out);
  } else {
    emit(events_path, events.str(), out);
    emit(summary_path, dump(summary), out);
  }
  return log.terminated == Termination::Saturation ? kExitSaturation : kExitOk;
}

int cmd_rate(const CommonOptions& o, std::ostream& out) {
  const RunConfig cfg = load_config(o);
  validate(cfg.stop);
  const unsigned threads = resolve_threads(o.threads);
  struct Replica {
    SummaryStats stats;
    bool saturated = false;
  };
  const auto replicas =
      run_replicas(cfg.replications, threads, [&](std::size_t i) {
        Rng rng = Rng::stream(cfg.seed, i);
        SimulationOptions options;
        options.saturation_cap = cfg.saturation_cap;
        const EventLog log = simulate(cfg.model, cfg.initial, cfg.stop, rng,
                                      std::nullopt, options);
        return Replica{estimate_rates(log, cfg.burn_in_fraction),
                       log.terminated == Termination::Saturation};
      });

  json result;
  bool saturated = false;
  for (const Replica& r : replicas) saturated = saturated || r.saturated;
  if (replicas.size() == 1) {
    result = to_json(replicas.front().stats);
  } else {
    auto pooled = [&](auto field) {
      std::vector<double> v;
      for (const Replica& r : replicas) v.push_back(field(r.stats));
      return mean_and_se(v);
    };
    const MeanEstimate rate = pooled([](const SummaryStats& s) { return s.rate_hat; });
    const MeanEstimate l1 = pooled([](const SummaryStats& s) { return s.lambda1_hat; });
    const MeanEstimate l2 = pooled([](const SummaryStats& s) { return s.lambda2_hat; });
    const MeanEstimate bal =
        pooled([](const SummaryStats& s) { return s.balance_residual; });
    const SummaryStats& first = replicas.front().stats;
    json reps = json::array();
    for (const Replica& r : replicas) reps.push_back(to_json(r.stats));
    result = {
        {"rate_hat", rate.mean},
        {"rate_se", rate.se},
        {"rate_theory",
         first.rate_theory ? json(*first.rate_theory) : json(nullptr)},
        {"lambda1_hat", l1.mean},
        {"lambda1_se", l1.se},
        {"lambda2_hat", l2.mean},
        {"lambda2_se", l2.se},
        {"balance_residual", bal.mean},
        {"balance_se", bal.se},
        {"regime", std::string(to_string(first.regime))},
        {"replications", replicas.size()},
        {"replicas", std::move(reps)},
    };
  }
  emit(o.out_path, dump(result), out);
  return saturated ? kExitSaturation : kExitOk;
}

std::array<double, 3> weights_of(const RunConfig& cfg,
                                 const std::vector<double>& flag) {
  if (!flag.empty()) {
    if (flag.size() != 3) throw std::invalid_argument("--weights needs r1,r2,r3");
    return {flag[0], flag[1], flag[2]};
  }
  return cfg.foster_weights.value_or(std::array{100.0, 10.0, 1.0});
}

FosterOptions construction_options(std::uint64_t seed) {
  FosterOptions f;
  f.seed = seed;
  return f;
}

// Validation never reuses the construction draws.
FosterOptions validation_options(std::uint64_t seed) {
  FosterOptions f;
  f.seed = splitmix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  return f;
}

int cmd_foster(const CommonOptions& o, const std::string& weights_flag,
               std::ostream& out) {
  const RunConfig cfg = load_config(o);
  const auto w = weights_of(cfg, weights_flag.empty() ? std::vector<double>{}
                                                      : parse_list(weights_flag));
  const FosterConfig f = foster_params(cfg.model, w[0], w[1], w[2],
                                       construction_options(cfg.seed));
  const ConstraintReport report =
      validate_foster(cfg.model, f, validation_options(cfg.seed));
  emit(o.out_path, dump({{"config", to_json(f)}, {"report", to_json(report)}}),
       out);
  return report.pass() ? kExitOk : kExitValidation;
}

int cmd_drift(const CommonOptions& o, const std::string& weights_flag,
              std::size_t n, std::ostream& out) {
  const RunConfig cfg = load_config(o);
  const auto w = weights_of(cfg, weights_flag.empty() ? std::vector<double>{}
                                                      : parse_list(weights_flag));
  const FosterConfig f = foster_params(cfg.model, w[0], w[1], w[2],
                                       construction_options(cfg.seed));
  const auto grid = drift_grid(f);
  const auto estimates =
      run_replicas(grid.size(), resolve_threads(o.threads), [&](std::size_t i) {
        return estimate_drift(cfg.model, f, grid[i], n,
                              stream_seed(cfg.seed, i));
      });
  const double target = -f.gamma / 2.0;
  std::ostringstream s;
  if (want_json(o)) {
    json rows = json::array();
    for (const DriftEstimate& d : estimates) {
      json row = to_json(d);
      row["target"] = target;
      row["pass"] = d.ci_upper <= target;
      rows.push_back(std::move(row));
    }
    s << dump({{"config", to_json(f)}, {"drift", std::move(rows)}});
  } else {
    s << "x,y,mean,se,ci_upper,target,outside_v,pass\n";
    for (const DriftEstimate& d : estimates) {
      s << format_double(d.state.x) << ',' << format_double(d.state.y) << ','
        << format_double(d.mean) << ',' << format_double(d.se) << ','
        << format_double(d.ci_upper) << ',' << format_double(target) << ','
        << (d.outside_v ? "true" : "false") << ','
        << (d.ci_upper <= target ? "true" : "false") << '\n';
    }
  }
  emit(o.out_path, s.str(), out);
  return kExitOk;
}

int cmd_converge(const CommonOptions& o, const std::string& init_b,
                 const std::string& t_grid, std::optional<std::size_t> reps,
                 std::ostream& out) {
  const RunConfig cfg = load_config(o);
  const ConvergenceReport report = convergence_diagnostic(
      cfg.model, cfg.initial, parse_state(init_b), parse_list(t_grid),
      reps.value_or(cfg.replications), cfg.seed, resolve_threads(o.threads));
  std::ostringstream s;
  if (want_json(o)) {
    s << dump(to_json(report));
  } else {
    s << "t,ks_x,ks_y,critical,pass\n";
    for (const ConvergenceRow& r : report.rows) {
      s << format_double(r.t) << ',' << format_double(r.ks_x) << ','
        << format_double(r.ks_y) << ',' << format_double(r.critical) << ','
        << (r.pass ? "true" : "false") << '\n';
    }
  }
  emit(o.out_path, s.str(), out);
  return kExitOk;
}

int cmd_dominance(const CommonOptions& o, std::size_t n, std::ostream& out) {
  const RunConfig cfg = load_config(o);
  const std::vector<DominanceReport> reports = {
      dominance_test(cfg.model, DominanceFamily::SecondaryClock, 1.0, 5.0, n,
                     stream_seed(cfg.seed, 0)),
      dominance_test(cfg.model, DominanceFamily::PrimaryClock, 0.0, 2.0, n,
                     stream_seed(cfg.seed, 1)),
      dominance_test(cfg.model, DominanceFamily::PrimaryLanding, 0.0, 2.0, n,
                     stream_seed(cfg.seed, 2)),
  };
  std::ostringstream s;
  if (want_json(o)) {
    json rows = json::array();
    for (const auto& r : reports) rows.push_back(to_json(r));
    s << dump(rows);
  } else {
    s << "ordering,low,high,n,violation,separation,band,pass\n";
    for (const auto& r : reports) {
      s << to_string(r.family) << ',' << format_double(r.low) << ','
        << format_double(r.high) << ',' << r.n << ','
        << format_double(r.violation) << ',' << format_double(r.separation)
        << ',' << format_double(r.band) << ',' << (r.pass ? "true" : "false")
        << '\n';
    }
  }
  emit(o.out_path, s.str(), out);
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  return pass ? kExitOk : kExitValidation;
}

int cmd_lemma(const CommonOptions& o, std::optional<double> alpha_flag,
              const std::string& y_grid, std::size_t n, std::ostream& out) {
  double alpha = 1.0;
  std::uint64_t seed = o.seed.value_or(0);
  if (!o.config_path.empty()) {
    const RunConfig cfg = load_config(o);
    alpha = cfg.model.alpha;
    seed = cfg.seed;
  }
  if (alpha_flag) alpha = *alpha_flag;
  const LemmaReport report = lemma_l2_check(alpha, parse_list(y_grid), n, seed);
  std::ostringstream s;
  if (want_json(o)) {
    s << dump(to_json(report));
  } else {
    s << "y,mc,se,exact,within\n";
    for (const LemmaRow& r : report.rows) {
      s << format_double(r.y) << ',' << format_double(r.mc) << ','
        << format_double(r.se) << ',' << format_double(r.exact) << ','
        << (r.within ? "true" : "false") << '\n';
    }
  }
  emit(o.out_path, s.str(), out);
  return report.pass() ? kExitOk : kExitValidation;
}

int cmd_regime(const CommonOptions& o, std::ostream& out) {
  const RunConfig cfg = load_config(o);
  const Regime r = regime(cfg.model);
  json j = {{"regime", std::string(to_string(r))},
            {"k_over_alpha", cfg.model.k / cfg.model.alpha}};
  if (r == Regime::Subcritical) {
    j["rate_theory"] = theoretical_rate(cfg.model);
  } else {
    j["rate_theory"] = nullptr;
    j["note"] = "no stationary regime with 0 < rate < infinity";
  }
  emit(o.out_path, dump(j), out);
  return kExitOk;
}

int cmd_probe(const CommonOptions& o, double horizon, std::uint64_t budget,
              bool critical_check, std::ostream& out) {
  const RunConfig cfg = load_config(o);
  json j;
  if (critical_check) {
    j["dying_out"] = to_json(critical_dying_out_check(
        cfg.model, cfg.initial, {1e2, 1e3, 1e4}, 100, cfg.seed, budget,
        resolve_threads(o.threads)));
  } else {
    j = to_json(supercritical_probe(cfg.model, cfg.initial, horizon, budget,
                                    stream_seed(cfg.seed, 0)));
  }
  emit(o.out_path, dump(j), out);
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Stress-release / self-exciting earthquake process toolkit",
               "quakesim"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions o;
  app.add_option("--config", o.config_path, "Run configuration (JSON)");
  app.add_option("--out", o.out_path, "Output path (default: stdout)");
  app.add_option("--seed", o.seed, "Master seed (overrides the config)");
  app.add_option("--threads", o.threads,
                 "Replication threads (fallback: $QUAKESIM_THREADS, then 1)");
  app.add_option("--format", o.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* simulate_cmd = app.add_subcommand("simulate", "Event log CSV + summary JSON");
  std::string summary_path;
  bool stream_only = false;
  simulate_cmd->add_option("--summary", summary_path, "Summary JSON path");
  simulate_cmd->add_flag("--stream", stream_only,
                         "Do not retain records in memory (no rate summary)");

  auto* rate_cmd = app.add_subcommand("rate", "Steady-state rate estimates (JSON)");

  std::string weights;
  auto* foster_cmd =
      app.add_subcommand("foster", "Lyapunov configuration and constraint report");
  foster_cmd->add_option("--weights", weights, "r1,r2,r3");

  std::size_t drift_n = 100000;
  auto* drift_cmd = app.add_subcommand("drift", "Drift map on states outside V");
  drift_cmd->add_option("--weights", weights, "r1,r2,r3");
  drift_cmd->add_option("--n", drift_n, "Draws per state");

  std::string init_b = "5,10";
  std::string t_grid = "50,100,200";
  std::optional<std::size_t> converge_reps;
  auto* converge_cmd =
      app.add_subcommand("converge", "Two-start KS convergence table");
  converge_cmd->add_option("--init-b", init_b, "Second initial state x,y");
  converge_cmd->add_option("--t-grid", t_grid, "Comma-separated times");
  converge_cmd->add_option("--replications", converge_reps,
                           "Replications (default: config)");

  std::size_t dominance_n = 100000;
  auto* dominance_cmd =
      app.add_subcommand("dominance", "One-sided KS ordering checks");
  dominance_cmd->add_option("--n", dominance_n, "Draws per sample");

  std::optional<double> lemma_alpha;
  std::string y_grid = "0.5,1,2,5,20";
  std::size_t lemma_n = 1000000;
  auto* lemma_cmd = app.add_subcommand(
      "lemma-l2", "Monte Carlo of y E(1 - exp(-alpha T)) vs closed form");
  lemma_cmd->add_option("--alpha", lemma_alpha, "Decay rate (default: config or 1)");
  lemma_cmd->add_option("--y-grid", y_grid, "Comma-separated y values");
  lemma_cmd->add_option("--n", lemma_n, "Draws per y");

  auto* regime_cmd = app.add_subcommand("regime", "Classify k/alpha");

  double probe_horizon = 100.0;
  std::uint64_t probe_budget = 1000000;
  bool critical_check = false;
  auto* probe_cmd = app.add_subcommand("probe-supercritical",
                                       "Quartile event-rate growth report");
  probe_cmd->add_option("--horizon", probe_horizon, "Time horizon");
  probe_cmd->add_option("--budget", probe_budget, "Event budget");
  probe_cmd->add_flag("--critical-check", critical_check,
                      "Median N(H) over H in {1e2, 1e3, 1e4} instead");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run built-in example checks");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("quakesim");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(o, summary_path, stream_only, out);
    if (*rate_cmd) return cmd_rate(o, out);
    if (*foster_cmd) return cmd_foster(o, weights, out);
    if (*drift_cmd) return cmd_drift(o, weights, drift_n, out);
    if (*converge_cmd) return cmd_converge(o, init_b, t_grid, converge_reps, out);
    if (*dominance_cmd) return cmd_dominance(o, dominance_n, out);
    if (*lemma_cmd) return cmd_lemma(o, lemma_alpha, y_grid, lemma_n, out);
    if (*regime_cmd) return cmd_regime(o, out);
    if (*probe_cmd) {
      return cmd_probe(o, probe_horizon, probe_budget, critical_check, out);
    }
    if (*selftest_cmd) return run_selftest(out);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace quakesim
