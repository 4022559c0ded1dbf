#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "quakesim/analysis.hpp"
#include "quakesim/random.hpp"
#include "quakesim/sampler.hpp"
#include "quakesim/stats.hpp"

namespace quakesim {

namespace {

// Common random numbers for the clock expectations. Each inversion below is
// monotone in x or y for fixed draws, so sample means can be bisected.
struct ClockDraws {
  std::vector<double> exp1;
  std::vector<double> log_u;

  ClockDraws(std::size_t n, Rng& rng) : exp1(n), log_u(n) {
    for (std::size_t i = 0; i < n; ++i) {
      exp1[i] = rng.exponential();
      log_u[i] = std::log(rng.uniform_open());
    }
  }
};

double mean_primary_time(const ModelParams& p, const ClockDraws& d, double x) {
  double sum = 0.0;
  for (double e : d.exp1) sum += primary_time_from_exp(p.phi, x, p.c, e);
  return sum / static_cast<double>(d.exp1.size());
}

std::vector<double> interevent_times(const ModelParams& p, const ClockDraws& d,
                                     double x, double y) {
  std::vector<double> out(d.exp1.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double primary = primary_time_from_exp(p.phi, x, p.c, d.exp1[i]);
    const double secondary =
        secondary_time_from_log_uniform(y, p.alpha, d.log_u[i]).time();
    out[i] = std::min(primary, secondary);
  }
  return out;
}

double mean_interevent(const ModelParams& p, const ClockDraws& d, double x,
                       double y) {
  const auto t = interevent_times(p, d, x, y);
  double sum = 0.0;
  for (double v : t) sum += v;
  return sum / static_cast<double>(t.size());
}

// y E(1 - e^{-alpha min(T_{x,y}, v0)}) - k, with its standard error.
MeanEstimate truncated_decay_below(const ModelParams& p, const ClockDraws& d,
                                   double x, double y, double v0) {
  auto t = interevent_times(p, d, x, y);
  for (double& v : t) v = -y * std::expm1(-p.alpha * std::min(v, v0)) - p.k;
  return mean_and_se(t);
}

// Smallest x >= from with f(x) <= target, for non-increasing f.
double solve_decreasing(const std::function<double(double)>& f, double target,
                        double from, const char* what) {
  if (f(from) <= target) return from;
  double step = 1.0;
  double lo = from;
  double hi = from + step;
  int guard = 0;
  while (f(hi) > target) {
    lo = hi;
    step *= 2.0;
    hi = from + step;
    if (++guard > 1000 || !std::isfinite(hi)) {
      throw std::runtime_error(std::string("cannot satisfy ") + what);
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Largest x <= from with g(x) <= target, for non-decreasing g.
double solve_increasing_below(const std::function<double(double)>& g,
                              double target, double from, const char* what) {
  if (g(from) <= target) return from;
  double gap = std::max(1.0, std::abs(from));
  double hi = from;
  double lo = from - gap;
  int guard = 0;
  while (g(lo) > target) {
    hi = lo;
    gap *= 2.0;
    lo = from - gap;
    if (++guard > 1000 || !std::isfinite(lo)) {
      throw std::runtime_error(std::string("cannot satisfy ") + what);
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<double> decay_grid(double y0) {
  return {y0, 2 * y0, 5 * y0, 10 * y0, 100 * y0};
}

double gamma_of(double r1, double r2, double r3, double mean_z, double k,
                double delta) {
  return std::min(r2 * delta - r3 * mean_z, r1 * mean_z - r2 * k) / 3.0;
}

double phantom_log_lhs(const ModelParams& p, const FosterConfig& f) {
  // log((r3 c v0 / 2) e^{-y0/alpha})
  return std::log(f.r3 * p.c * f.v0 / 2.0) - f.y0 / p.alpha;
}

double phantom_rhs(const ModelParams& p, const FosterConfig& f) {
  return f.gamma + f.r3 * z_mean(p.z) + f.r2 * p.k;
}

}  // namespace

FosterConfig foster_params(const ModelParams& params, double r1, double r2,
                           double r3, const FosterOptions& options) {
  validate(params);
  if (regime(params) != Regime::Subcritical) {
    throw std::domain_error("Foster construction needs k/alpha < 1");
  }
  if (!(r1 > 0 && r2 > 0 && r3 > 0)) {
    throw std::invalid_argument("weights r1, r2, r3 must be > 0");
  }
  const double mean_z = z_mean(params.z);
  const double delta = (params.alpha - params.k) / 2.0;
  if (!(r3 < r1)) throw std::invalid_argument("weights violate r3 < r1");
  if (!(r1 * mean_z > r2 * params.k)) {
    throw std::invalid_argument("weights violate r1 E[Z] > r2 k");
  }
  if (!(r2 * delta > r3 * mean_z)) {
    throw std::invalid_argument("weights violate r2 (alpha - k)/2 > r3 E[Z]");
  }

  FosterConfig f;
  f.r1 = r1;
  f.r2 = r2;
  f.r3 = r3;
  f.delta = delta;
  f.gamma = gamma_of(r1, r2, r3, mean_z, params.k, delta);

  const double slack = 1.0 + options.safety_margin;
  const double alpha = params.alpha;
  const double c = params.c;
  Rng rng = Rng::stream(options.seed, 0);
  const ClockDraws draws(options.mc_samples, rng);

  // x0: r1 c E T^{(1,x0)} <= gamma and (r1 + r3) E(Z - x0)^+ <= gamma.
  const double wait_target = f.gamma / (r1 * c * slack);
  const double x0_wait = solve_decreasing(
      [&](double x) { return mean_primary_time(params, draws, x); },
      wait_target, 0.0, "primary wait bound at x0");
  const double x0_overshoot = solve_decreasing(
      [&](double x) { return (r1 + r3) * z_excess_mean(params.z, x); },
      f.gamma / slack, 0.0, "stress overshoot bound at x0");
  f.x0 = std::max({x0_wait, x0_overshoot, 1e-6});

  // y0: alpha (1 - e^{-y/alpha}) - k >= 5 delta / 3 for all y >= y0 (the
  // left side increases in y), and r1 c E T_{0,y0} <= gamma.
  const double y_decay =
      -alpha * std::log1p(-(params.k + 5.0 * delta / 3.0) / alpha);
  const double y_wait = solve_decreasing(
      [&](double y) { return mean_interevent(params, draws, 0.0, y); },
      wait_target, 0.0, "interevent wait bound at y0");
  f.y0 = std::max(slack * y_decay, y_wait);

  // v0: the capped aftershock decay still beats k + 4 delta / 3 at y0, and
  // (r3 c v0 / 2) e^{-y0/alpha} > gamma + r3 E[Z] + r2 k (in log space).
  const double reach =
      -(alpha / f.y0) * std::log1p(-(params.k + 4.0 * delta / 3.0) / alpha);
  if (!(reach < 1.0)) throw std::runtime_error("cannot satisfy capped decay at y0");
  const double v0_decay = -std::log1p(-reach) / alpha;
  const double log_v0_phantom =
      std::log(2.0 * phantom_rhs(params, f) / (r3 * c)) + f.y0 / alpha;
  const double log_v0 = std::max(std::log(slack * v0_decay),
                                 log_v0_phantom + std::log(slack));
  const double log_max = std::log(std::numeric_limits<double>::max());
  if (log_v0 + std::log(c) + 2.0 * std::log(slack) + std::log(4.0) > log_max) {
    throw std::runtime_error("v0 = exp(" + std::to_string(log_v0) +
                             ") exceeds double range");
  }
  f.v0 = std::exp(log_v0);

  // x1: x1 <= -c v0 and Lambda_1(v0; x1) <= ln 2, then pushed down until the
  // truncated decay bound holds on a grid of y >= y0.
  const double x1_flow = -c * f.v0;
  const double x1_quiet = solve_increasing_below(
      [&](double x) {
        return log_cumulative_hazard_primary(params.phi, x, c, f.v0);
      },
      std::log(std::log(2.0)), x1_flow, "quiet window below x1");
  f.x1 = slack * std::min(x1_flow, x1_quiet);

  const double decay_target = slack * delta;
  for (int attempt = 0;; ++attempt) {
    bool ok = true;
    for (double y : decay_grid(f.y0)) {
      if (truncated_decay_below(params, draws, f.x1, y, f.v0).mean <
          decay_target) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    if (attempt >= 60 || !std::isfinite(2.0 * f.x1)) {
      throw std::runtime_error("cannot satisfy truncated decay below x1");
    }
    f.x1 *= 2.0;
  }
  return f;
}

bool ConstraintReport::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const ConstraintCheck& c) { return c.pass; });
}

const ConstraintCheck* ConstraintReport::find(std::string_view name) const {
  for (const ConstraintCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ConstraintReport validate_foster(const ModelParams& params,
                                 const FosterConfig& f,
                                 const FosterOptions& options) {
  ConstraintReport report;
  auto add = [&](std::string name, std::string relation, std::string method,
                 double lhs, double rhs, double margin) {
    report.checks.push_back({std::move(name), std::move(relation),
                             std::move(method), lhs, rhs, margin,
                             margin >= 0 && std::isfinite(margin)});
  };
  // lhs <= rhs
  auto at_most = [&](std::string name, std::string relation, std::string method,
                     double lhs, double rhs) {
    add(std::move(name), std::move(relation), std::move(method), lhs, rhs,
        rhs - lhs);
  };

  const double mean_z = z_mean(params.z);
  const double k = params.k;
  const double alpha = params.alpha;
  const double c = params.c;

  add("weight_order", "r3 < r1", "exact", f.r3, f.r1,
      f.r3 < f.r1 ? f.r1 - f.r3 : -1.0);
  add("jump_vs_drop", "r1 E[Z] > r2 k", "exact", f.r2 * k, f.r1 * mean_z,
      f.r1 * mean_z > f.r2 * k ? f.r1 * mean_z - f.r2 * k : -1.0);
  add("decay_vs_drop", "r2 delta > r3 E[Z]", "exact", f.r3 * mean_z,
      f.r2 * f.delta,
      f.r2 * f.delta > f.r3 * mean_z ? f.r2 * f.delta - f.r3 * mean_z : -1.0);

  const double expected_delta = (alpha - k) / 2.0;
  add("delta_definition", "delta = (alpha - k)/2", "exact", f.delta,
      expected_delta,
      1e-12 * std::max(1.0, std::abs(expected_delta)) -
          std::abs(f.delta - expected_delta));
  const double expected_gamma = gamma_of(f.r1, f.r2, f.r3, mean_z, k, f.delta);
  add("gamma_definition",
      "3 gamma = min(r2 delta - r3 E[Z], r1 E[Z] - r2 k)", "exact", f.gamma,
      expected_gamma,
      1e-12 * std::max(1.0, std::abs(expected_gamma)) -
          std::abs(f.gamma - expected_gamma));
  add("gamma_positive", "gamma > 0", "exact", f.gamma, 0.0,
      f.gamma > 0 ? f.gamma : -1.0);
  add("x0_positive", "x0 > 0", "exact", f.x0, 0.0, f.x0 > 0 ? f.x0 : -1.0);
  add("y0_positive", "y0 > 0", "exact", f.y0, 0.0, f.y0 > 0 ? f.y0 : -1.0);
  add("v0_positive", "v0 > 0", "exact", f.v0, 0.0, f.v0 > 0 ? f.v0 : -1.0);

  Rng rng = Rng::stream(options.seed, 1);
  const ClockDraws draws(options.mc_samples, rng);

  at_most("primary_wait_at_x0", "r1 c E T^(1,x0) <= gamma", "monte-carlo",
          f.r1 * c * mean_primary_time(params, draws, f.x0), f.gamma);
  at_most("stress_overshoot_at_x0", "(r1 + r3) E(Z - x0)^+ <= gamma",
          "closed-form", (f.r1 + f.r3) * z_excess_mean(params.z, f.x0),
          f.gamma);

  // Both decay bounds increase in y, so checking at y0 covers y >= y0.
  const double decay = secondary_discount_mean(f.y0, alpha) - k;
  add("aftershock_decay_at_y0",
      "y E(1 - e^{-alpha T^(2,y)}) - k >= 5 delta/3 for y >= y0",
      "closed-form", decay, 5.0 * f.delta / 3.0, decay - 5.0 * f.delta / 3.0);
  at_most("wait_at_y0", "r1 c E T_(0,y0) <= gamma", "monte-carlo",
          f.r1 * c * mean_interevent(params, draws, 0.0, f.y0), f.gamma);
  const double capped = truncated_secondary_discount_mean(f.y0, alpha, f.v0) - k;
  add("capped_decay_at_y0",
      "y E(1 - e^{-alpha min(v0, T^(2,y))}) - k >= 4 delta/3 for y >= y0",
      "closed-form", capped, 4.0 * f.delta / 3.0,
      capped - 4.0 * f.delta / 3.0);

  const double phantom_lhs = phantom_log_lhs(params, f);
  const double phantom_log_rhs = std::log(phantom_rhs(params, f));
  add("phantom_drift",
      "(r3 c v0 / 2) e^{-y0/alpha} > gamma + r3 E[Z] + r2 k", "log-space",
      phantom_lhs, phantom_log_rhs, phantom_lhs - phantom_log_rhs);

  at_most("x1_below_flow", "x1 <= -c v0", "exact", f.x1, -c * f.v0);
  const double log_quiet =
      log_cumulative_hazard_primary(params.phi, f.x1, c, f.v0);
  const double log_ln2 = std::log(std::log(2.0));
  add("x1_quiet", "exp(-Lambda_1(v0; x1)) >= 1/2", "log-space", log_quiet,
      log_ln2,
      log_quiet == -std::numeric_limits<double>::infinity()
          ? std::numeric_limits<double>::max()
          : log_ln2 - log_quiet);

  // The capped wait only grows as x decreases, so x = x1 is the worst case.
  double worst = std::numeric_limits<double>::infinity();
  double worst_y = f.y0;
  for (double y : decay_grid(f.y0)) {
    const double v = truncated_decay_below(params, draws, f.x1, y, f.v0).mean;
    if (v < worst) {
      worst = v;
      worst_y = y;
    }
  }
  add("truncated_decay_below_x1",
      "y E(1 - e^{-alpha T~_(x,y)}) - k >= delta for y >= y0, x <= x1 (worst y=" +
          std::to_string(worst_y) + ")",
      "monte-carlo", worst, f.delta, worst - f.delta);

  // Independent route for the exact identity used for y0.
  {
    std::vector<double> v(draws.log_u.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const ClockOutcome t =
          secondary_time_from_log_uniform(f.y0, alpha, draws.log_u[i]);
      v[i] = t.is_finite() ? -f.y0 * std::expm1(-alpha * t.time()) : f.y0;
    }
    const MeanEstimate m = mean_and_se(v);
    const double exact = secondary_discount_mean(f.y0, alpha);
    add("decay_identity_at_y0", "|MC - alpha(1 - e^{-y0/alpha})| <= 4 SE",
        "monte-carlo", m.mean, exact,
        4.0 * m.se + 1e-12 - std::abs(m.mean - exact));
  }
  return report;
}

}  // namespace quakesim
