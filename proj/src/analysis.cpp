#include "quakesim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quakesim/parallel.hpp"
#include "quakesim/random.hpp"
#include "quakesim/sampler.hpp"
#include "quakesim/stats.hpp"

namespace quakesim {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical:
      return "subcritical";
    case Regime::Critical:
      return "critical";
    case Regime::Supercritical:
      return "supercritical";
  }
  return "unknown";
}

Regime regime(const ModelParams& params) {
  const double ratio = params.k / params.alpha;
  if (std::abs(ratio - 1.0) <= kCriticalTolerance) return Regime::Critical;
  return ratio < 1.0 ? Regime::Subcritical : Regime::Supercritical;
}

double theoretical_rate(const ModelParams& params) {
  const Regime r = regime(params);
  if (r != Regime::Subcritical) {
    throw std::domain_error(
        "no stationary rate: k/alpha >= 1 (" + std::string(to_string(r)) +
        "); the only finite-rate solutions have rate 0");
  }
  return params.c / z_mean(params.z);
}

double secondary_discount_mean(double y, double alpha) {
  return -alpha * std::expm1(-y / alpha);
}

double truncated_secondary_discount_mean(double y, double alpha, double v0) {
  const double reach = -std::expm1(-alpha * v0);
  return -alpha * std::expm1(-(y / alpha) * reach);
}

SummaryStats estimate_rates(const EventLog& log, double burn_in_fraction,
                            std::size_t batches) {
  if (!(burn_in_fraction >= 0 && burn_in_fraction < 1)) {
    throw std::invalid_argument("burn_in_fraction must lie in [0, 1)");
  }
  if (batches < 2) throw std::invalid_argument("need at least 2 batches");
  if (!(log.horizon > 0) || log.dropped_records > 0) {
    throw std::invalid_argument("insufficient data");
  }

  SummaryStats out;
  out.regime = regime(log.params);
  out.burn_in_fraction = burn_in_fraction;
  out.window_start = burn_in_fraction * log.horizon;
  out.window_end = log.horizon;
  out.batches = batches;

  const auto totals =
      window_totals(log, out.window_start, out.window_end, batches);
  const double width = (out.window_end - out.window_start) /
                       static_cast<double>(batches);
  std::vector<double> rate(batches), phi(batches), y(batches), balance(batches);
  double events = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    rate[b] = totals[b].events / width;
    phi[b] = totals[b].integral_phi / width;
    y[b] = totals[b].integral_y / width;
    balance[b] = rate[b] - phi[b] - y[b];
    events += totals[b].events;
  }
  if (events == 0) throw std::invalid_argument("insufficient data");
  out.events_in_window = static_cast<std::uint64_t>(events);

  const MeanEstimate r = mean_and_se(rate);
  const MeanEstimate l1 = mean_and_se(phi);
  const MeanEstimate l2 = mean_and_se(y);
  const MeanEstimate bal = mean_and_se(balance);
  out.rate_hat = r.mean;
  out.rate_se = r.se;
  out.lambda1_hat = l1.mean;
  out.lambda1_se = l1.se;
  out.lambda2_hat = l2.mean;
  out.lambda2_se = l2.se;
  out.balance_residual = bal.mean;
  out.balance_se = bal.se;

  out.y_share = l2.mean / r.mean;
  std::vector<double> share_residual(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    share_residual[b] = y[b] - out.y_share * rate[b];
  }
  out.y_share_se = mean_and_se(share_residual).se / r.mean;

  if (out.regime == Regime::Subcritical) {
    out.rate_theory = theoretical_rate(log.params);
  }
  out.diagnostics["horizon"] = log.horizon;
  out.diagnostics["events_total"] = static_cast<double>(log.event_count());
  out.diagnostics["k_over_alpha"] = log.params.k / log.params.alpha;

  if (burn_in_fraction == 0) {
    out.warnings.emplace_back(
        "burn-in not discarded: the initial transient biases stationary "
        "estimates");
  }
  if (log.terminated != Termination::HorizonReached) {
    out.warnings.emplace_back("run ended early: " +
                              std::string(to_string(log.terminated)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lyapunov drift and return times
// ---------------------------------------------------------------------------

double lyapunov(const FosterConfig& config, double x, double y) {
  return (x >= 0 ? config.r1 * x : config.r3 * -x) + config.r2 * y;
}

double lyapunov_increment(const FosterConfig& config, double x, double y,
                          double dx, double y_post) {
  const double x_post = x + dx;
  double dl1;
  if (x >= 0 && x_post >= 0) {
    dl1 = config.r1 * dx;
  } else if (x < 0 && x_post < 0) {
    dl1 = -config.r3 * dx;
  } else {
    dl1 = lyapunov(config, x_post, 0.0) - lyapunov(config, x, 0.0);
  }
  return dl1 + config.r2 * (y_post - y);
}

DriftEstimate estimate_drift(const ModelParams& params,
                             const FosterConfig& config, const State& state,
                             std::size_t n, std::uint64_t seed, double z) {
  if (n < 2) throw std::invalid_argument("drift estimate needs n >= 2");
  Rng rng(seed);
  std::vector<double> increments(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Transition step = step_truncated(params, state, config, rng);
    const double dx = params.c * step.dt - step.z;
    increments[i] =
        lyapunov_increment(config, state.x, state.y, dx, step.post.y);
  }
  const MeanEstimate m = mean_and_se(increments);
  DriftEstimate out;
  out.state = state;
  out.mean = m.mean;
  out.se = m.se;
  out.ci_upper = m.mean + z * m.se;
  out.outside_v = !config.in_v(state.x, state.y);
  out.n = n;
  return out;
}

std::vector<State> drift_grid(const FosterConfig& config) {
  const double x0 = config.x0;
  const double y0 = config.y0;
  const double x1 = config.x1;
  return {
      {x0 + 5.0, 1.0},       {x0 + 20.0, 0.0},       {x0 + 5.0, y0 + 5.0},
      {0.5 * x0, y0 + 5.0},  {0.0, y0 + 5.0},        {0.5 * x1, y0 + 5.0},
      {1.5 * x1, y0 + 5.0},  {1.5 * x1, 1.0},
  };
}

ReturnTimeStats return_times(const ModelParams& params,
                             const FosterConfig& config, const State& initial,
                             std::size_t replications, std::uint64_t seed,
                             std::uint64_t budget, unsigned threads) {
  ReturnTimeStats out;
  out.initial = initial;
  out.steps = run_replicas(replications, threads, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    State state = initial;
    for (std::uint64_t step = 1; step <= budget; ++step) {
      state = step_truncated(params, state, config, rng).post;
      if (config.in_v(state.x, state.y)) return step;
    }
    return std::uint64_t{0};
  });

  std::vector<double> finished;
  for (std::uint64_t s : out.steps) {
    if (s == 0) {
      ++out.exhausted;
    } else {
      finished.push_back(static_cast<double>(s));
      out.max = std::max(out.max, s);
    }
  }
  if (!finished.empty()) {
    const MeanEstimate m = mean_and_se(finished);
    out.mean = m.mean;
    out.se = m.se;
    out.median = median(finished);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

ConvergenceReport convergence_diagnostic(const ModelParams& params,
                                         const State& init_a,
                                         const State& init_b,
                                         const std::vector<double>& t_grid,
                                         std::size_t replications,
                                         std::uint64_t seed, unsigned threads,
                                         double alpha_level) {
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  if (replications < 2) throw std::invalid_argument("need >= 2 replications");
  if (regime(params) != Regime::Subcritical) {
    throw std::domain_error("convergence diagnostic needs k/alpha < 1");
  }
  const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  if (!(t_max > 0)) throw std::invalid_argument("time grid must contain t > 0");

  ConvergenceReport report;
  report.alpha_level = alpha_level;
  report.replications = replications;
  if (!cz_metadata(params.z)) {
    report.warnings.emplace_back(
        "Z has no absolutely continuous component: convergence in total "
        "variation is not guaranteed");
  }

  // Replica i runs chain a on stream 2i and chain b on stream 2i + 1.
  auto sample = [&](const State& init, std::size_t offset) {
    return run_replicas(replications, threads, [&](std::size_t i) {
      Rng rng = Rng::stream(seed, 2 * i + offset);
      const EventLog log =
          simulate(params, init, StopRule::Horizon(t_max), rng);
      std::vector<State> states;
      states.reserve(t_grid.size());
      for (double t : t_grid) states.push_back(state_at(log, t));
      return states;
    });
  };
  const auto a = sample(init_a, 0);
  const auto b = sample(init_b, 1);

  const double critical =
      ks_critical_value(alpha_level, replications, replications);
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    std::vector<double> ax(replications), ay(replications);
    std::vector<double> bx(replications), by(replications);
    for (std::size_t i = 0; i < replications; ++i) {
      ax[i] = a[i][j].x;
      ay[i] = a[i][j].y;
      bx[i] = b[i][j].x;
      by[i] = b[i][j].y;
    }
    ConvergenceRow row;
    row.t = t_grid[j];
    row.ks_x = ks_statistic(ax, bx);
    row.ks_y = ks_statistic(ay, by);
    row.critical = critical;
    row.pass = row.ks_x < critical && row.ks_y < critical;
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Stochastic ordering of the clocks
// ---------------------------------------------------------------------------

std::string_view to_string(DominanceFamily family) {
  switch (family) {
    case DominanceFamily::SecondaryClock:
      return "secondary_clock_decreasing_in_y";
    case DominanceFamily::PrimaryClock:
      return "primary_clock_decreasing_in_x";
    case DominanceFamily::PrimaryLanding:
      return "primary_landing_increasing_in_x";
  }
  return "unknown";
}

DominanceReport dominance_test(const ModelParams& params,
                               DominanceFamily family, double low, double high,
                               std::size_t n, std::uint64_t seed) {
  if (!(low < high)) throw std::invalid_argument("dominance needs low < high");
  if (n == 0) throw std::invalid_argument("dominance needs n > 0");

  auto draw = [&](double level, std::uint64_t stream) {
    Rng rng = Rng::stream(seed, stream);
    std::vector<double> out(n);
    for (double& v : out) {
      switch (family) {
        case DominanceFamily::SecondaryClock:
          v = sample_secondary_time(level, params.alpha, rng).time();
          break;
        case DominanceFamily::PrimaryClock:
          v = sample_primary_time(params.phi, level, params.c, rng);
          break;
        case DominanceFamily::PrimaryLanding:
          v = level + params.c * sample_primary_time(params.phi, level,
                                                     params.c, rng);
          break;
      }
    }
    return out;
  };
  const std::vector<double> lo = draw(low, 0);
  const std::vector<double> hi = draw(high, 1);

  DominanceReport report;
  report.family = family;
  report.low = low;
  report.high = high;
  report.n = n;
  report.band = ks_one_sided_critical_value(0.01, n, n);
  if (family == DominanceFamily::PrimaryLanding) {
    // claim: F_low >= F_high
    report.violation = ks_one_sided(hi, lo);
    report.separation = ks_one_sided(lo, hi);
  } else {
    // claim: F_low <= F_high
    report.violation = ks_one_sided(lo, hi);
    report.separation = ks_one_sided(hi, lo);
  }
  report.pass = report.violation <= report.band;
  return report;
}

bool LemmaReport::pass() const {
  return limit_ok && std::all_of(rows.begin(), rows.end(),
                                 [](const LemmaRow& r) { return r.within; });
}

LemmaReport lemma_l2_check(double alpha, const std::vector<double>& y_grid,
                           std::size_t n, std::uint64_t seed) {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be > 0");
  if (y_grid.empty() || n < 2) {
    throw std::invalid_argument("lemma check needs a y grid and n >= 2");
  }
  LemmaReport report;
  report.alpha = alpha;
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    const double y = y_grid[j];
    Rng rng = Rng::stream(seed, j);
    std::vector<double> values(n);
    for (double& v : values) {
      const ClockOutcome t = sample_secondary_time(y, alpha, rng);
      v = t.is_finite() ? -y * std::expm1(-alpha * t.time()) : y;
    }
    const MeanEstimate m = mean_and_se(values);
    LemmaRow row{y, m.mean, m.se, secondary_discount_mean(y, alpha), false};
    row.within = std::abs(row.mc - row.exact) <= 3.0 * row.se;
    report.rows.push_back(row);
  }
  const auto last = std::max_element(
      report.rows.begin(), report.rows.end(),
      [](const LemmaRow& a, const LemmaRow& b) { return a.y < b.y; });
  report.limit_ok = std::abs(last->mc - alpha) <=
                    alpha * std::exp(-last->y / alpha) + 3.0 * last->se;
  return report;
}

// ---------------------------------------------------------------------------
// Critical and supercritical behaviour
// ---------------------------------------------------------------------------

ProbeReport supercritical_probe(const ModelParams& params,
                                const State& initial, double horizon,
                                std::uint64_t budget, std::uint64_t seed) {
  ProbeReport report;
  report.regime = regime(params);
  Rng rng(seed);
  SimulationOptions options;
  const EventLog log = simulate(params, initial,
                                StopRule::Either(budget, horizon), rng,
                                std::nullopt, options);
  report.time_reached = log.horizon;
  report.terminated = log.terminated;
  report.saturated = log.terminated == Termination::Saturation;
  report.events = log.event_count();

  if (report.time_reached > 0) {
    const double quarter = report.time_reached / 4.0;
    std::array<double, 4> counts{};
    for (const EventRecord& r : log.records) {
      if (r.kind != EventKind::Event) continue;
      const auto q = std::min<std::size_t>(
          3, static_cast<std::size_t>(r.t / quarter));
      counts[q] += 1.0;
    }
    for (std::size_t q = 0; q < 4; ++q) {
      report.quartile_rates[q] = counts[q] / quarter;
    }
  }
  const auto& qr = report.quartile_rates;
  report.strictly_increasing = qr[0] < qr[1] && qr[1] < qr[2] && qr[2] < qr[3];
  report.explosive = report.strictly_increasing || report.saturated;
  return report;
}

DyingOutReport critical_dying_out_check(const ModelParams& params,
                                        const State& initial,
                                        std::vector<double> horizons,
                                        std::size_t runs, std::uint64_t seed,
                                        std::uint64_t budget,
                                        unsigned threads) {
  if (horizons.empty() || runs == 0) {
    throw std::invalid_argument("dying-out check needs horizons and runs");
  }
  std::sort(horizons.begin(), horizons.end());
  const double h_max = horizons.back();

  struct RunCounts {
    std::vector<double> counts;
    bool budget_hit = false;
  };
  const auto per_run = run_replicas(runs, threads, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    const EventLog log =
        simulate(params, initial, StopRule::Either(budget, h_max), rng);
    RunCounts rc;
    rc.budget_hit = log.terminated != Termination::HorizonReached;
    for (double h : horizons) {
      rc.counts.push_back(static_cast<double>(std::count_if(
          log.records.begin(), log.records.end(), [h](const EventRecord& r) {
            return r.kind == EventKind::Event && r.t <= h;
          })));
    }
    return rc;
  });

  DyingOutReport report;
  report.horizons = horizons;
  report.runs = runs;
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    std::vector<double> column;
    column.reserve(runs);
    for (const RunCounts& rc : per_run) column.push_back(rc.counts[j]);
    report.medians.push_back(median(std::move(column)));
  }
  for (const RunCounts& rc : per_run) report.budget_hits += rc.budget_hit;
  report.stabilized =
      report.medians.size() < 2 ||
      report.medians.back() == report.medians[report.medians.size() - 2];
  return report;
}

}  // namespace quakesim
