#include "quakesim/thinning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quakesim {

EventLog simulate_thinning(const ModelParams& params, const State& initial,
                           double horizon, std::optional<double> window,
                           Rng& rng, double cap, ThinningStats* stats) {
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be > 0");
  if (window && !(*window > 0)) {
    throw std::invalid_argument("thinning window must be > 0");
  }

  EventLog log;
  log.params = params;
  log.initial = initial;
  log.horizon = horizon;
  log.terminated = Termination::HorizonReached;

  double t = 0.0;
  double last_event = 0.0;
  State state = initial;
  std::uint64_t n = 0;

  while (t < horizon) {
    double delta = 0.1;
    if (window) {
      delta = *window;
    } else {
      const double now = phi_eval(params.phi, state.x) + state.y;
      if (now > 0) delta = std::min(delta, 1.0 / now);
    }
    const double bound = phi_eval(params.phi, state.x + params.c * delta) + state.y;
    if (!(bound < cap)) {
      log.horizon = t;
      log.terminated = Termination::Saturation;
      break;
    }
    const double window_end = std::min(t + delta, horizon);
    const double tau = bound > 0 ? t + rng.exponential() / bound
                                 : std::numeric_limits<double>::infinity();
    if (tau >= window_end) {
      state = flow(params, state, window_end - t);
      t = window_end;
      continue;
    }

    if (stats) ++stats->proposals;
    const State before = flow(params, state, tau - t);
    const double lambda = phi_eval(params.phi, before.x) + before.y;
    if (lambda > bound * (1 + 1e-12)) {
      throw std::logic_error("thinning bound violated: lambda(tau-) > bound");
    }
    const double u = rng.uniform_open();
    t = tau;
    if (u * bound <= lambda) {
      if (stats) ++stats->accepted;
      const double z = z_sample(params.z, rng);
      state = {before.x - z, before.y + params.k};
      log.records.push_back(
          {++n, t, t - last_event, EventKind::Event, state.x, state.y, z, lambda});
      last_event = t;
    } else {
      state = before;
    }
  }
  return log;
}

}  // namespace quakesim
