// Test-only reference computations. Nothing here calls into the library, so
// agreement with it is evidence rather than tautology.
#ifndef QUAKESIM_TESTS_ORACLES_HPP
#define QUAKESIM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature, absolute tolerance `tol`.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  // Split first so that a smooth but peaked integrand is not missed by the
  // initial five-point estimate.
  const int pieces = 16;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = a + (b - a) * (i + 1) / pieces;
    const double flo = f(lo), fhi = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / pieces,
                                  50);
  }
  return total;
}

/// Root of an increasing function g on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& g, double lo,
                     double hi, int iterations = 200) {
  if (g(lo) > 0 || g(hi) < 0) throw std::invalid_argument("no sign change");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// sup_t |F_a(t) - F_b(t)| evaluated at every sample point, O((n+m)^2).
inline double ks_brute(const std::vector<double>& a,
                       const std::vector<double>& b) {
  auto ecdf = [](const std::vector<double>& s, double t) {
    double n = 0;
    for (double v : s) n += v <= t;
    return n / static_cast<double>(s.size());
  };
  double d = 0.0;
  for (const auto* s : {&a, &b}) {
    for (double t : *s) d = std::max(d, std::abs(ecdf(a, t) - ecdf(b, t)));
  }
  return d;
}

/// Integrated primary hazard: int_0^t phi(x + c v) dv by quadrature.
inline double primary_hazard(const std::function<double(double)>& phi,
                             double x, double c, double t) {
  return integrate([&](double v) { return phi(x + c * v); }, 0.0, t);
}

/// Survival of the joint inter-event time: exp(-Lambda_1(t) - (y/alpha)(1 - e^{-alpha t})).
inline double interevent_survival(const std::function<double(double)>& phi,
                                  double x, double c, double y, double alpha,
                                  double t) {
  return std::exp(-primary_hazard(phi, x, c, t) -
                  (y / alpha) * (1.0 - std::exp(-alpha * t)));
}

/// y E(1 - e^{-alpha T}) for the defective aftershock clock, by quadrature of
/// the density y e^{-alpha s} exp(-(y/alpha)(1 - e^{-alpha s})) against
/// (1 - e^{-alpha s}), plus the atom at infinity contributing 1.
inline double secondary_discount(double y, double alpha) {
  const double atom = std::exp(-y / alpha);
  // The density decays like e^{-alpha s}; truncating at 60/alpha leaves < 1e-20.
  const double body = integrate(
      [&](double s) {
        const double decay = std::exp(-alpha * s);
        return (1.0 - decay) * y * decay *
               std::exp(-(y / alpha) * (1.0 - decay));
      },
      0.0, 60.0 / alpha);
  return y * (body + atom);
}

}  // namespace oracle

#endif  // QUAKESIM_TESTS_ORACLES_HPP
