#include "quakesim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quakesim {

MeanEstimate mean_and_se(std::span<const double> values) {
  MeanEstimate out;
  out.n = values.size();
  if (values.empty()) return out;
  // Squares of values near the top of the double range overflow; rescale by a
  // power of two, which is exact.
  double largest = 0.0;
  for (double v : values) largest = std::max(largest, std::abs(v));
  int shift = 0;
  if (std::isfinite(largest) && largest > 0x1.0p500) {
    std::frexp(largest, &shift);
  }
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double raw : values) {
    const double v = std::ldexp(raw, -shift);
    ++count;
    const double d = v - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (v - mean);
  }
  out.mean = std::ldexp(mean, shift);
  if (count > 1) {
    const double var = m2 / static_cast<double>(count - 1);
    out.se = std::ldexp(std::sqrt(var / static_cast<double>(count)), shift);
  }
  return out;
}

namespace {

std::vector<double> sorted(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Walks the merged support and tracks sup(F_a - F_b) and sup(F_b - F_a).
std::pair<double, double> ks_extremes(std::span<const double> a_in,
                                      std::span<const double> b_in) {
  if (a_in.empty() || b_in.empty()) {
    throw std::invalid_argument("KS statistic needs two non-empty samples");
  }
  const std::vector<double> a = sorted(a_in);
  const std::vector<double> b = sorted(b_in);
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double a_over = 0.0;
  double b_over = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (i == a.size()) {
      v = b[j];
    } else if (j == b.size()) {
      v = a[i];
    } else {
      v = std::min(a[i], b[j]);
    }
    if (std::isinf(v)) break;
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    const double diff = static_cast<double>(i) / n - static_cast<double>(j) / m;
    a_over = std::max(a_over, diff);
    b_over = std::max(b_over, -diff);
  }
  return {a_over, b_over};
}

}  // namespace

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  const auto [a_over, b_over] = ks_extremes(a, b);
  return std::max(a_over, b_over);
}

double ks_one_sided(std::span<const double> a, std::span<const double> b) {
  return ks_extremes(a, b).first;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) * std::sqrt((nn + mm) / (nn * mm));
}

double ks_one_sided_critical_value(double alpha, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return std::sqrt(-std::log(alpha) / 2.0 * (nn + mm) / (nn * mm));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace quakesim
