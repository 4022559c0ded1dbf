#ifndef QUAKESIM_CHAIN_HPP
#define QUAKESIM_CHAIN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "quakesim/foster_config.hpp"
#include "quakesim/model.hpp"
#include "quakesim/random.hpp"

namespace quakesim {

enum class EventKind { Event, Phantom };

std::string_view to_string(EventKind kind);

struct EventRecord {
  std::uint64_t n = 0;  ///< 1-based position in the log
  double t = 0.0;
  double dt = 0.0;
  EventKind kind = EventKind::Event;
  double x = 0.0;  ///< post-transition stress
  double y = 0.0;  ///< post-transition aftershock residual
  double z = 0.0;  ///< relieved stress, 0 for phantoms
  double lambda_pre = 0.0;
};

enum class Termination { HorizonReached, EventBudget, Saturation };

std::string_view to_string(Termination reason);

struct EventLog {
  ModelParams params;
  State initial;
  std::vector<EventRecord> records;
  double horizon = 0.0;
  Termination terminated = Termination::HorizonReached;
  /// Records streamed to a sink but not retained in `records`.
  std::uint64_t dropped_records = 0;

  std::uint64_t event_count() const;
};

/// MaxEvents, Horizon, or both (whichever is hit first).
struct StopRule {
  std::optional<std::uint64_t> max_events;
  std::optional<double> horizon;

  static StopRule MaxEvents(std::uint64_t n) { return {n, std::nullopt}; }
  static StopRule Horizon(double t) { return {std::nullopt, t}; }
  static StopRule Either(std::uint64_t n, double t) { return {n, t}; }
};

/// Throws std::invalid_argument when neither bound is set or the horizon is
/// not positive.
void validate(const StopRule& stop);

/// One transition of an embedded chain, before it is placed on the time axis.
struct Transition {
  double dt = 0.0;
  EventKind kind = EventKind::Event;
  double z = 0.0;
  State post;
  double lambda_pre = 0.0;
  bool saturated = false;
};

/// Deterministic part of a transition: flow for dt, then (for a real event)
/// drop the stress by z and add k to the aftershock residual.
Transition apply_transition(const ModelParams& params, const State& state,
                            double dt, double z, EventKind kind,
                            double cap = kDefaultSaturationCap);

/// (X_n, Y_n) -> (X_{n+1}, Y_{n+1}).
Transition step_natural(const ModelParams& params, const State& state,
                        Rng& rng, double cap = kDefaultSaturationCap);

/// Truncated embedding: below x1 the wait is capped at v0 and an uncapped
/// wait yields a phantom transition with no stress drop and no jump.
Transition step_truncated(const ModelParams& params, const State& state,
                          const FosterConfig& foster, Rng& rng,
                          double cap = kDefaultSaturationCap);

struct SimulationOptions {
  double saturation_cap = kDefaultSaturationCap;
  /// Receives every record as it is produced.
  std::function<void(const EventRecord&)> sink;
  bool keep_records = true;
};

EventLog simulate(const ModelParams& params, const State& initial,
                  const StopRule& stop, Rng& rng,
                  const std::optional<FosterConfig>& truncated = std::nullopt,
                  const SimulationOptions& options = {});

/// Visits [t_start, t_start + length) segments of constant jump history,
/// including the tail up to the horizon, with the state at segment start.
void for_each_segment(
    const EventLog& log,
    const std::function<void(double t_start, double length, const State&)>& fn);

/// Exact \int_0^H Y(t) dt.
double integrated_y(const EventLog& log);

/// Exact \int_0^H phi(X(t)) dt.
double integrated_phi_x(const EventLog& log);

/// Event counts and exact intensity integrals over consecutive equal-width
/// windows covering [from, to).
struct WindowTotals {
  double events = 0.0;
  double integral_y = 0.0;
  double integral_phi = 0.0;
};

std::vector<WindowTotals> window_totals(const EventLog& log, double from,
                                        double to, std::size_t windows);

/// (X(t), Y(t)) reconstructed from the log; t must lie in [0, horizon].
State state_at(const EventLog& log, double t);

}  // namespace quakesim

#endif  // QUAKESIM_CHAIN_HPP
