#include "quakesim/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quakesim/sampler.hpp"

namespace quakesim {

std::string_view to_string(EventKind kind) {
  return kind == EventKind::Event ? "event" : "phantom";
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::HorizonReached:
      return "horizon_reached";
    case Termination::EventBudget:
      return "event_budget";
    case Termination::Saturation:
      return "saturation";
  }
  return "unknown";
}

std::uint64_t EventLog::event_count() const {
  return static_cast<std::uint64_t>(
      std::count_if(records.begin(), records.end(), [](const EventRecord& r) {
        return r.kind == EventKind::Event;
      }));
}

void validate(const StopRule& stop) {
  if (!stop.max_events && !stop.horizon) {
    throw std::invalid_argument("stop rule needs max_events or horizon");
  }
  if (stop.horizon && !(*stop.horizon > 0 && std::isfinite(*stop.horizon))) {
    throw std::invalid_argument("stop.horizon must be > 0");
  }
}

Transition apply_transition(const ModelParams& params, const State& state,
                            double dt, double z, EventKind kind, double cap) {
  const State before = flow(params, state, dt);
  const Intensity lambda = intensity(params, before, cap);
  Transition out;
  out.dt = dt;
  out.kind = kind;
  out.lambda_pre = lambda.value;
  out.saturated = lambda.saturated;
  if (kind == EventKind::Event) {
    out.z = z;
    out.post = {before.x - z, before.y + params.k};
  } else {
    out.z = 0.0;
    out.post = before;
  }
  return out;
}

Transition step_natural(const ModelParams& params, const State& state,
                        Rng& rng, double cap) {
  const double dt = sample_interevent(params, state, rng).time();
  const double z = z_sample(params.z, rng);
  return apply_transition(params, state, dt, z, EventKind::Event, cap);
}

Transition step_truncated(const ModelParams& params, const State& state,
                          const FosterConfig& foster, Rng& rng, double cap) {
  const TruncatedDraw draw = sample_interevent_truncated(
      params, state, foster.v0, foster.x1, rng);
  // Z is drawn on both branches so the stream layout does not depend on
  // which branch fired.
  const double z = z_sample(params.z, rng);
  return apply_transition(
      params, state, draw.t_tilde, z,
      draw.is_real_event ? EventKind::Event : EventKind::Phantom, cap);
}

EventLog simulate(const ModelParams& params, const State& initial,
                  const StopRule& stop, Rng& rng,
                  const std::optional<FosterConfig>& truncated,
                  const SimulationOptions& options) {
  EventLog log;
  log.params = params;
  log.initial = initial;
  if (stop.max_events && *stop.max_events == 0) {
    log.terminated = Termination::EventBudget;
    return log;
  }
  validate(stop);

  double t = 0.0;
  State state = initial;
  std::uint64_t records = 0;
  std::uint64_t events = 0;
  while (true) {
    const Transition step =
        truncated ? step_truncated(params, state, *truncated, rng,
                                   options.saturation_cap)
                  : step_natural(params, state, rng, options.saturation_cap);
    const double t_next = t + step.dt;
    if (stop.horizon && t_next > *stop.horizon) {
      log.horizon = *stop.horizon;
      log.terminated = Termination::HorizonReached;
      break;
    }
    if (!(t_next > t)) {
      // Waiting times below the resolution of the clock: the intensity has
      // run away even if the cap was not reached.
      log.horizon = t;
      log.terminated = Termination::Saturation;
      break;
    }
    EventRecord record{++records, t_next,       step.dt,     step.kind,
                       step.post.x, step.post.y, step.z, step.lambda_pre};
    if (options.sink) options.sink(record);
    if (options.keep_records) {
      log.records.push_back(record);
    } else {
      ++log.dropped_records;
    }
    if (step.kind == EventKind::Event) ++events;
    state = step.post;
    t = t_next;
    if (step.saturated) {
      log.horizon = t;
      log.terminated = Termination::Saturation;
      break;
    }
    if (stop.max_events && events >= *stop.max_events) {
      log.horizon = t;
      log.terminated = Termination::EventBudget;
      break;
    }
  }
  return log;
}

void for_each_segment(
    const EventLog& log,
    const std::function<void(double, double, const State&)>& fn) {
  double t = 0.0;
  State state = log.initial;
  for (const EventRecord& r : log.records) {
    fn(t, r.t - t, state);
    t = r.t;
    state = {r.x, r.y};
  }
  if (log.horizon > t) fn(t, log.horizon - t, state);
}

namespace {

double y_integral(double y, double alpha, double length) {
  return y * -std::expm1(-alpha * length) / alpha;
}

}  // namespace

double integrated_y(const EventLog& log) {
  double total = 0.0;
  for_each_segment(log, [&](double, double length, const State& s) {
    total += y_integral(s.y, log.params.alpha, length);
  });
  return total;
}

double integrated_phi_x(const EventLog& log) {
  double total = 0.0;
  for_each_segment(log, [&](double, double length, const State& s) {
    total += cumulative_hazard_primary(log.params.phi, s.x, log.params.c,
                                       length);
  });
  return total;
}

std::vector<WindowTotals> window_totals(const EventLog& log, double from,
                                        double to, std::size_t windows) {
  if (windows == 0 || !(to > from)) {
    throw std::invalid_argument("window_totals needs windows > 0 and to > from");
  }
  std::vector<WindowTotals> out(windows);
  const double width = (to - from) / static_cast<double>(windows);
  auto window_of = [&](double t) {
    const auto i = static_cast<std::size_t>((t - from) / width);
    return std::min(i, windows - 1);
  };

  for (const EventRecord& r : log.records) {
    if (r.kind == EventKind::Event && r.t >= from && r.t < to) {
      out[window_of(r.t)].events += 1.0;
    }
  }

  const ModelParams& p = log.params;
  for_each_segment(log, [&](double start, double length, const State& s) {
    double lo = std::max(start, from);
    const double hi = std::min(start + length, to);
    while (lo < hi) {
      const std::size_t w = window_of(lo);
      const double edge =
          w + 1 == windows ? to : from + width * static_cast<double>(w + 1);
      double piece_end = std::min(hi, edge);
      if (!(piece_end > lo)) piece_end = hi;  // guard against rounding at edges
      const State at = flow(p, s, lo - start);
      out[w].integral_y += y_integral(at.y, p.alpha, piece_end - lo);
      out[w].integral_phi +=
          cumulative_hazard_primary(p.phi, at.x, p.c, piece_end - lo);
      lo = piece_end;
    }
  });
  return out;
}

State state_at(const EventLog& log, double t) {
  auto it = std::upper_bound(
      log.records.begin(), log.records.end(), t,
      [](double value, const EventRecord& r) { return value < r.t; });
  if (it == log.records.begin()) return flow(log.params, log.initial, t);
  const EventRecord& last = *std::prev(it);
  return flow(log.params, {last.x, last.y}, t - last.t);
}

}  // namespace quakesim
