#include "quakesim/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "quakesim/numeric.hpp"

namespace quakesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void validate(const PhiSpec& phi) {
  std::visit(overloaded{
                 [](const ExponentialPhi& p) {
                   require(std::isfinite(p.scale) && p.scale > 0,
                           "phi.scale must be > 0");
                 },
                 [](const ThresholdLinearPhi& p) {
                   require(std::isfinite(p.theta), "phi.theta must be finite");
                   require(std::isfinite(p.slope) && p.slope > 0,
                           "phi.slope must be > 0");
                 },
             },
             phi);
}

void validate(const ZSpec& z) {
  std::visit(overloaded{
                 [](const ExponentialZ& d) {
                   require(std::isfinite(d.mean) && d.mean > 0,
                           "z.mean must be > 0");
                 },
                 [](const UniformZ& d) {
                   require(std::isfinite(d.a) && d.a >= 0, "z.a must be >= 0");
                   require(std::isfinite(d.b) && d.b > d.a,
                           "z.b must be > z.a");
                 },
                 [](const DeterministicZ& d) {
                   require(std::isfinite(d.value) && d.value > 0,
                           "z.value must be > 0");
                 },
             },
             z);
}

void validate(const ModelParams& params) {
  require(std::isfinite(params.c) && params.c > 0, "c must be > 0");
  require(std::isfinite(params.k) && params.k > 0, "k must be > 0");
  require(std::isfinite(params.alpha) && params.alpha > 0,
          "alpha must be > 0");
  validate(params.phi);
  validate(params.z);
}

double phi_eval(const PhiSpec& phi, double x) {
  return std::visit(
      overloaded{
          [x](const ExponentialPhi& p) { return std::exp(p.scale * x); },
          [x](const ThresholdLinearPhi& p) {
            return p.slope * std::max(0.0, x - p.theta);
          },
      },
      phi);
}

double log_phi(const PhiSpec& phi, double x) {
  return std::visit(
      overloaded{
          [x](const ExponentialPhi& p) { return p.scale * x; },
          [x](const ThresholdLinearPhi& p) {
            if (x <= p.theta) return -std::numeric_limits<double>::infinity();
            return std::log(p.slope) + std::log(x - p.theta);
          },
      },
      phi);
}

Intensity intensity(const ModelParams& params, const State& state,
                    double cap) {
  if (log_phi(params.phi, state.x) >= std::log(cap)) return {cap, true};
  const double value = phi_eval(params.phi, state.x) + state.y;
  if (!(value < cap)) return {cap, true};
  return {value, false};
}

double log_cumulative_hazard_primary(const PhiSpec& phi, double x, double c,
                                     double t) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (t <= 0) return kNegInf;
  return std::visit(
      overloaded{
          [&](const ExponentialPhi& p) {
            const double sc = p.scale * c;
            return p.scale * x + log_expm1(sc * t) - std::log(sc);
          },
          [&](const ThresholdLinearPhi& p) {
            if (x >= p.theta) {
              // m((x - theta) t + c t^2 / 2)
              return std::log(p.slope) + std::log(t) +
                     std::log((x - p.theta) + 0.5 * c * t);
            }
            const double onset = (p.theta - x) / c;
            if (t <= onset) return kNegInf;
            return std::log(0.5 * p.slope * c) + 2.0 * std::log(t - onset);
          },
      },
      phi);
}

double cumulative_hazard_primary(const PhiSpec& phi, double x, double c,
                                 double t) {
  if (t <= 0) return 0.0;
  return std::visit(
      overloaded{
          [&](const ExponentialPhi& p) {
            const double sc = p.scale * c;
            const double sx = p.scale * x;
            const double sct = sc * t;
            if (sx < 700 && sct < 700 && sx > -700) {
              return std::exp(sx) * std::expm1(sct) / sc;
            }
            return std::exp(log_cumulative_hazard_primary(phi, x, c, t));
          },
          [&](const ThresholdLinearPhi& p) {
            if (x >= p.theta) {
              return p.slope * ((x - p.theta) * t + 0.5 * c * t * t);
            }
            const double onset = (p.theta - x) / c;
            if (t <= onset) return 0.0;
            const double active = t - onset;
            return 0.5 * p.slope * c * active * active;
          },
      },
      phi);
}

double z_mean(const ZSpec& z) {
  return std::visit(
      overloaded{
          [](const ExponentialZ& d) { return d.mean; },
          [](const UniformZ& d) { return 0.5 * (d.a + d.b); },
          [](const DeterministicZ& d) { return d.value; },
      },
      z);
}

double z_excess_mean(const ZSpec& z, double x) {
  return std::visit(
      overloaded{
          [x](const ExponentialZ& d) {
            if (x <= 0) return d.mean - x;
            return d.mean * std::exp(-x / d.mean);
          },
          [x](const UniformZ& d) {
            if (x <= d.a) return 0.5 * (d.a + d.b) - x;
            if (x >= d.b) return 0.0;
            return (d.b - x) * (d.b - x) / (2.0 * (d.b - d.a));
          },
          [x](const DeterministicZ& d) { return std::max(0.0, d.value - x); },
      },
      z);
}

std::optional<DensityFloor> cz_metadata(const ZSpec& z) {
  return std::visit(
      overloaded{
          [](const ExponentialZ& d) -> std::optional<DensityFloor> {
            // density e^{-z/mu}/mu >= e^{-1}/mu on [0, mu]
            return DensityFloor{0.0, d.mean, std::exp(-1.0) / d.mean};
          },
          [](const UniformZ& d) -> std::optional<DensityFloor> {
            return DensityFloor{d.a, d.b, 1.0 / (d.b - d.a)};
          },
          [](const DeterministicZ&) -> std::optional<DensityFloor> {
            return std::nullopt;
          },
      },
      z);
}

double z_sample(const ZSpec& z, Rng& rng) {
  return std::visit(
      overloaded{
          [&rng](const ExponentialZ& d) { return d.mean * rng.exponential(); },
          [&rng](const UniformZ& d) {
            return d.a + (d.b - d.a) * rng.uniform_open();
          },
          [](const DeterministicZ& d) { return d.value; },
      },
      z);
}

State flow(const ModelParams& params, const State& state, double dt) {
  return {state.x + params.c * dt, state.y * std::exp(-params.alpha * dt)};
}

}  // namespace quakesim
