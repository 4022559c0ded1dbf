#ifndef QUAKESIM_ANALYSIS_HPP
#define QUAKESIM_ANALYSIS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quakesim/chain.hpp"
#include "quakesim/foster_config.hpp"
#include "quakesim/model.hpp"

namespace quakesim {

// ---------------------------------------------------------------------------
// Regimes and steady-state rates
// ---------------------------------------------------------------------------

enum class Regime { Subcritical, Critical, Supercritical };

std::string_view to_string(Regime regime);

inline constexpr double kCriticalTolerance = 1e-12;

/// Classifies k/alpha against 1 with tolerance kCriticalTolerance.
Regime regime(const ModelParams& params);

/// Steady-state event rate c / E[Z]. Throws std::domain_error outside the
/// subcritical regime, where no finite positive stationary rate exists.
double theoretical_rate(const ModelParams& params);

/// y E(1 - e^{-alpha T^{(2,y)}}) = alpha (1 - e^{-y/alpha}).
double secondary_discount_mean(double y, double alpha);

/// y E(1 - e^{-alpha min(v0, T^{(2,y)})})
///   = alpha (1 - exp(-(y/alpha)(1 - e^{-alpha v0}))).
double truncated_secondary_discount_mean(double y, double alpha, double v0);

struct SummaryStats {
  double rate_hat = 0.0;
  double rate_se = 0.0;
  std::optional<double> rate_theory;
  double lambda1_hat = 0.0;  ///< time average of phi(X(t))
  double lambda1_se = 0.0;
  double lambda2_hat = 0.0;  ///< time average of Y(t)
  double lambda2_se = 0.0;
  /// rate_hat - lambda1_hat - lambda2_hat, with the SE of its batch means.
  double balance_residual = 0.0;
  double balance_se = 0.0;
  double y_share = 0.0;  ///< lambda2_hat / rate_hat
  double y_share_se = 0.0;
  Regime regime = Regime::Subcritical;
  double burn_in_fraction = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  std::size_t batches = 0;
  std::uint64_t events_in_window = 0;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;

  static constexpr double kZ95 = 1.959963984540054;
  double rate_ci() const { return kZ95 * rate_se; }
};

/// Rate, primary and aftershock intensity averages over
/// [burn_in_fraction * H, H], with batch-means standard errors.
/// Throws std::invalid_argument("insufficient data") for an empty window.
SummaryStats estimate_rates(const EventLog& log, double burn_in_fraction = 0.1,
                            std::size_t batches = 20);

// ---------------------------------------------------------------------------
// Foster-Lyapunov construction
// ---------------------------------------------------------------------------

struct FosterOptions {
  std::uint64_t seed = 0x0f05'7e12ULL;
  std::size_t mc_samples = 100000;
  /// Relative slack applied to every inequality solved numerically.
  double safety_margin = 0.05;
};

/// Builds gamma, x0, y0, v0 and x1 for weights (r1, r2, r3).
///
/// Throws std::invalid_argument naming the violated ordering when the weights
/// break r3 < r1, r1 E[Z] > r2 k or r2 Delta > r3 E[Z]; std::domain_error
/// outside the subcritical regime; std::runtime_error if v0 or x1 cannot be
/// represented in double precision.
FosterConfig foster_params(const ModelParams& params, double r1, double r2,
                           double r3, const FosterOptions& options = {});

struct ConstraintCheck {
  std::string name;
  std::string relation;
  std::string method;  ///< "exact", "closed-form", "log-space" or "monte-carlo"
  double lhs = 0.0;
  double rhs = 0.0;
  /// Distance to violation; >= 0 means satisfied. Log-space constraints
  /// report it in log units.
  double margin = 0.0;
  bool pass = false;
};

struct ConstraintReport {
  std::vector<ConstraintCheck> checks;

  bool pass() const;
  const ConstraintCheck* find(std::string_view name) const;
};

/// Re-evaluates every constraint of `config`. Expectations without a closed
/// form use fresh Monte Carlo draws from options.seed.
ConstraintReport validate_foster(const ModelParams& params,
                                 const FosterConfig& config,
                                 const FosterOptions& options = {});

/// L(x, y).
double lyapunov(const FosterConfig& config, double x, double y);

/// L(x + dx, y_post) - L(x, y), computed without cancellation when |x| is
/// large compared to dx.
double lyapunov_increment(const FosterConfig& config, double x, double y,
                          double dx, double y_post);

struct DriftEstimate {
  State state;
  double mean = 0.0;
  double se = 0.0;
  double ci_upper = 0.0;
  bool outside_v = false;
  std::size_t n = 0;
};

inline constexpr double kZ99TwoSided = 2.5758293035489004;

/// Monte Carlo of E[L(X~_1, Y~_1)] - L(x, y) for the truncated chain.
DriftEstimate estimate_drift(const ModelParams& params,
                             const FosterConfig& config, const State& state,
                             std::size_t n, std::uint64_t seed,
                             double z = kZ99TwoSided);

/// Eight states outside V covering each case of the drift argument:
/// x >= x0; 0 <= x <= x0 with y >= y0; x1 < x <= 0 with y >= y0; x < x1.
std::vector<State> drift_grid(const FosterConfig& config);

struct ReturnTimeStats {
  State initial;
  std::vector<std::uint64_t> steps;  ///< tau per replication; 0 if exhausted
  std::size_t exhausted = 0;
  double mean = 0.0;  ///< over finished replications
  double se = 0.0;
  double median = 0.0;
  std::uint64_t max = 0;
};

/// Hitting time of V, min{n >= 1 : W_n in V}, for the truncated chain.
ReturnTimeStats return_times(const ModelParams& params,
                             const FosterConfig& config, const State& initial,
                             std::size_t replications, std::uint64_t seed,
                             std::uint64_t budget = 1000000,
                             unsigned threads = 1);

// ---------------------------------------------------------------------------
// Convergence, dominance and limit checks
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  double t = 0.0;
  double ks_x = 0.0;
  double ks_y = 0.0;
  double critical = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double alpha_level = 0.01;
  std::size_t replications = 0;
  std::vector<std::string> warnings;
};

/// Runs the natural chain from two initial states and compares the laws of
/// X(t) and Y(t) at each t with the two-sample KS test.
ConvergenceReport convergence_diagnostic(const ModelParams& params,
                                         const State& init_a,
                                         const State& init_b,
                                         const std::vector<double>& t_grid,
                                         std::size_t replications,
                                         std::uint64_t seed,
                                         unsigned threads = 1,
                                         double alpha_level = 0.01);

enum class DominanceFamily {
  SecondaryClock,  ///< T^{(2,y1)} >=_st T^{(2,y2)} for y1 < y2
  PrimaryClock,    ///< T^{(1,x1)} >=_st T^{(1,x2)} for x1 < x2
  PrimaryLanding,  ///< x1 + c T^{(1,x1)} <=_st x2 + c T^{(1,x2)} for x1 < x2
};

std::string_view to_string(DominanceFamily family);

struct DominanceReport {
  DominanceFamily family = DominanceFamily::SecondaryClock;
  double low = 0.0;
  double high = 0.0;
  std::size_t n = 0;
  /// Largest one-sided ECDF gap against the claimed ordering.
  double violation = 0.0;
  /// Largest one-sided gap in the claimed direction.
  double separation = 0.0;
  double band = 0.0;  ///< one-sided 1% critical value
  bool pass = false;
};

DominanceReport dominance_test(const ModelParams& params,
                               DominanceFamily family, double low, double high,
                               std::size_t n, std::uint64_t seed);

struct LemmaRow {
  double y = 0.0;
  double mc = 0.0;
  double se = 0.0;
  double exact = 0.0;
  bool within = false;  ///< |mc - exact| <= 3 se
};

struct LemmaReport {
  double alpha = 0.0;
  std::vector<LemmaRow> rows;
  bool limit_ok = false;  ///< |mc - alpha| <= alpha e^{-y_max/alpha} + 3 se
  bool pass() const;
};

/// Monte Carlo of y E(1 - e^{-alpha T^{(2,y)}}) against its closed form.
LemmaReport lemma_l2_check(double alpha, const std::vector<double>& y_grid,
                           std::size_t n, std::uint64_t seed);

struct ProbeReport {
  Regime regime = Regime::Supercritical;
  double time_reached = 0.0;
  std::uint64_t events = 0;
  std::array<double, 4> quartile_rates{};
  Termination terminated = Termination::HorizonReached;
  bool saturated = false;
  bool strictly_increasing = false;
  bool explosive = false;
};

/// Simulates until `horizon` or `budget` events and reports per-quartile
/// event rates. Flags explosive growth when the rates strictly increase or
/// the intensity saturates. Any regime is accepted; below criticality the
/// report is descriptive only.
ProbeReport supercritical_probe(const ModelParams& params,
                                const State& initial, double horizon,
                                std::uint64_t budget, std::uint64_t seed);

struct DyingOutReport {
  std::vector<double> horizons;
  std::vector<double> medians;
  std::size_t runs = 0;
  std::size_t budget_hits = 0;
  /// Median at the largest horizon equals the median at the previous one.
  bool stabilized = false;
};

/// Counts N(H) on shared trajectories for each H in `horizons`.
DyingOutReport critical_dying_out_check(const ModelParams& params,
                                        const State& initial,
                                        std::vector<double> horizons,
                                        std::size_t runs, std::uint64_t seed,
                                        std::uint64_t budget = 1000000,
                                        unsigned threads = 1);

}  // namespace quakesim

#endif  // QUAKESIM_ANALYSIS_HPP
