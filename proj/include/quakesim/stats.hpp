#ifndef QUAKESIM_STATS_HPP
#define QUAKESIM_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace quakesim {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean; 0 when n < 2
  std::size_t n = 0;
};

MeanEstimate mean_and_se(std::span<const double> values);

/// Two-sided two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|.
/// +inf entries are allowed and never counted below a finite t.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// One-sided statistic sup_t (F_a(t) - F_b(t)), >= 0.
double ks_one_sided(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample critical value at level `alpha`:
///   sqrt(-ln(alpha/2)/2) * sqrt((n + m)/(n m)).
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

/// One-sided version: sqrt(-ln(alpha)/2 * (n + m)/(n m)).
double ks_one_sided_critical_value(double alpha, std::size_t n, std::size_t m);

/// Empirical quantile with linear interpolation (type 7).
double quantile(std::vector<double> values, double q);

inline double median(std::vector<double> values) {
  return quantile(std::move(values), 0.5);
}

}  // namespace quakesim

#endif  // QUAKESIM_STATS_HPP
