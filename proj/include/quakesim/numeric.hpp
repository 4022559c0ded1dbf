#ifndef QUAKESIM_NUMERIC_HPP
#define QUAKESIM_NUMERIC_HPP

#include <cmath>
#include <limits>

namespace quakesim {

/// log(e^a - 1) for a > 0 without overflow.
inline double log_expm1(double a) {
  if (a <= 0) return -std::numeric_limits<double>::infinity();
  if (a > 30) return a + std::log1p(-std::exp(-a));
  return std::log(std::expm1(a));
}

/// log(1 + e^a) without overflow.
inline double softplus(double a) {
  if (a > 0) return a + std::log1p(std::exp(-a));
  return std::log1p(std::exp(a));
}

}  // namespace quakesim

#endif  // QUAKESIM_NUMERIC_HPP
