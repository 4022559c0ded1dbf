#include "quakesim/sampler.hpp"

#include <cmath>

#include "quakesim/numeric.hpp"

namespace quakesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double primary_time_from_exp(const PhiSpec& phi, double x, double c,
                             double e) {
  return std::visit(
      overloaded{
          [&](const ExponentialPhi& p) {
            // e^{sx}(e^{scT} - 1)/(sc) = e  =>  T = log(1 + sc e e^{-sx})/(sc)
            const double sc = p.scale * c;
            return softplus(std::log(sc * e) - p.scale * x) / sc;
          },
          [&](const ThresholdLinearPhi& p) {
            const double mc = p.slope * c;
            if (x >= p.theta) {
              // (mc/2) T^2 + m(x - theta) T = e, positive root in the
              // cancellation-free form.
              const double b = p.slope * (x - p.theta);
              return 2.0 * e / (b + std::sqrt(b * b + 2.0 * mc * e));
            }
            const double onset = (p.theta - x) / c;
            return onset + std::sqrt(2.0 * e / mc);
          },
      },
      phi);
}

ClockOutcome secondary_time_from_log_uniform(double y, double alpha,
                                             double log_u) {
  if (y <= 0 || log_u <= -y / alpha) return ClockOutcome::infinite();
  const double t = -std::log1p((alpha / y) * log_u) / alpha;
  // log1p rounding can produce 0 for log_u within an ulp of 0.
  return ClockOutcome::finite(t > 0 ? t : std::numeric_limits<double>::denorm_min());
}

double sample_primary_time(const PhiSpec& phi, double x, double c, Rng& rng) {
  const double t = primary_time_from_exp(phi, x, c, rng.exponential());
  return t > 0 ? t : std::numeric_limits<double>::denorm_min();
}

ClockOutcome sample_secondary_time(double y, double alpha, Rng& rng) {
  return secondary_time_from_log_uniform(y, alpha, std::log(rng.uniform_open()));
}

ClockOutcome sample_interevent(const ModelParams& params, const State& state,
                               Rng& rng) {
  const double primary =
      sample_primary_time(params.phi, state.x, params.c, rng);
  const ClockOutcome secondary =
      sample_secondary_time(state.y, params.alpha, rng);
  return min(ClockOutcome::finite(primary), secondary);
}

TruncatedDraw sample_interevent_truncated(const ModelParams& params,
                                          const State& state, double v0,
                                          double x1, Rng& rng) {
  const double t = sample_interevent(params, state, rng).time();
  if (state.x > x1 || t <= v0) return {t, true};
  return {v0, false};
}

}  // namespace quakesim
