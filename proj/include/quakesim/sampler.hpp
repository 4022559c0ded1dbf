#ifndef QUAKESIM_SAMPLER_HPP
#define QUAKESIM_SAMPLER_HPP

#include <limits>

#include "quakesim/model.hpp"
#include "quakesim/random.hpp"

namespace quakesim {

/// A waiting time that may be +infinity (the aftershock clock is defective).
class ClockOutcome {
 public:
  static ClockOutcome finite(double t) { return ClockOutcome(t); }
  static ClockOutcome infinite() {
    return ClockOutcome(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return time_ < std::numeric_limits<double>::infinity(); }
  /// +inf for Infinite outcomes.
  double time() const { return time_; }

  friend ClockOutcome min(const ClockOutcome& a, const ClockOutcome& b) {
    return a.time_ <= b.time_ ? a : b;
  }
  friend bool operator==(const ClockOutcome&, const ClockOutcome&) = default;

 private:
  explicit ClockOutcome(double t) : time_(t) {}
  double time_;
};

/// Outcome of the truncated embedding: T~ = min(T, v0) below x1, T above.
struct TruncatedDraw {
  double t_tilde = 0.0;
  bool is_real_event = true;
};

/// Solves Lambda_1(T; x) = e for T, i.e. inverts the primary clock's
/// cumulative hazard at the Exp(1) level `e`.
double primary_time_from_exp(const PhiSpec& phi, double x, double c, double e);

/// Inverts P(T > t) = exp(-(y/alpha)(1 - e^{-alpha t})) at log U = log_u.
/// Infinite when log_u <= -y/alpha.
ClockOutcome secondary_time_from_log_uniform(double y, double alpha,
                                             double log_u);

/// T^{(1,x)}: first point of the primary hazard phi(x + c s).
double sample_primary_time(const PhiSpec& phi, double x, double c, Rng& rng);

/// T^{(2,y)}: first point of the aftershock hazard y e^{-alpha s}.
ClockOutcome sample_secondary_time(double y, double alpha, Rng& rng);

/// T_{x,y} = min(T^{(1,x)}, T^{(2,y)}). Always finite. Draws the primary clock
/// first, then the secondary one.
ClockOutcome sample_interevent(const ModelParams& params, const State& state,
                               Rng& rng);

TruncatedDraw sample_interevent_truncated(const ModelParams& params,
                                          const State& state, double v0,
                                          double x1, Rng& rng);

}  // namespace quakesim

#endif  // QUAKESIM_SAMPLER_HPP
