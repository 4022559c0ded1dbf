#ifndef QUAKESIM_MODEL_HPP
#define QUAKESIM_MODEL_HPP

#include <optional>
#include <variant>

#include "quakesim/random.hpp"

namespace quakesim {

// ---------------------------------------------------------------------------
// Primary-shock rate functions. Both are non-decreasing, vanish at -inf and
// blow up at +inf.
// ---------------------------------------------------------------------------

/// phi(x) = exp(scale * x); strictly positive everywhere.
struct ExponentialPhi {
  double scale = 1.0;
};

/// phi(x) = slope * max(0, x - theta); identically zero below theta.
struct ThresholdLinearPhi {
  double theta = 0.0;
  double slope = 1.0;
};

using PhiSpec = std::variant<ExponentialPhi, ThresholdLinearPhi>;

// ---------------------------------------------------------------------------
// Stress drops Z_n.
// ---------------------------------------------------------------------------

struct ExponentialZ {
  double mean = 1.0;
};

struct UniformZ {
  double a = 0.0;
  double b = 1.0;
};

struct DeterministicZ {
  double value = 1.0;
};

using ZSpec = std::variant<ExponentialZ, UniformZ, DeterministicZ>;

/// An interval [z1, z2] on which the law of Z has a density bounded below by h.
struct DensityFloor {
  double z1 = 0.0;
  double z2 = 0.0;
  double h = 0.0;
};

struct ModelParams {
  double c = 1.0;      ///< stress build-up rate
  double k = 0.5;      ///< aftershock jump added to the intensity at each event
  double alpha = 1.0;  ///< aftershock decay rate
  PhiSpec phi = ExponentialPhi{};
  ZSpec z = ExponentialZ{};
};

/// Throws std::invalid_argument naming the first offending field.
void validate(const ModelParams& params);
void validate(const PhiSpec& phi);
void validate(const ZSpec& z);

/// Stress level x and aftershock residual y >= 0.
struct State {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

inline constexpr double kDefaultSaturationCap = 1e12;

double phi_eval(const PhiSpec& phi, double x);

/// log(phi(x)); -inf where phi vanishes. Finite for exponential phi even
/// where phi itself would overflow.
double log_phi(const PhiSpec& phi, double x);

struct Intensity {
  double value = 0.0;
  bool saturated = false;
};

/// lambda = phi(x) + y, clamped to `cap`.
Intensity intensity(const ModelParams& params, const State& state,
                    double cap = kDefaultSaturationCap);

/// Lambda_1(t; x) = \int_0^t phi(x + c v) dv in closed form.
double cumulative_hazard_primary(const PhiSpec& phi, double x, double c,
                                 double t);

/// log Lambda_1(t; x). Stays finite when Lambda_1 overflows or underflows;
/// -inf when the hazard is identically zero on [0, t].
double log_cumulative_hazard_primary(const PhiSpec& phi, double x, double c,
                                     double t);

double z_mean(const ZSpec& z);

/// E(Z - x)^+ in closed form.
double z_excess_mean(const ZSpec& z, double x);

/// Present for the absolutely continuous families, absent for DeterministicZ.
std::optional<DensityFloor> cz_metadata(const ZSpec& z);

double z_sample(const ZSpec& z, Rng& rng);

/// (x + c dt, y e^{-alpha dt}): the deterministic motion between events.
State flow(const ModelParams& params, const State& state, double dt);

}  // namespace quakesim

#endif  // QUAKESIM_MODEL_HPP
