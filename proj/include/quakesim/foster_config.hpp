#ifndef QUAKESIM_FOSTER_CONFIG_HPP
#define QUAKESIM_FOSTER_CONFIG_HPP

namespace quakesim {

/// Lyapunov setup for the truncated chain.
///
/// L(x, y) = r1 x + r2 y for x >= 0 and r3 |x| + r2 y for x < 0. Outside
/// V = [x1, x0] x [0, y0] the expected one-step increment of L is at most
/// -gamma. Below x1 the chain waits at most v0 before a phantom transition.
struct FosterConfig {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double gamma = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double v0 = 0.0;
  double x1 = 0.0;
  double delta = 0.0;  ///< (alpha - k) / 2

  bool in_v(double x, double y) const {
    return x >= x1 && x <= x0 && y >= 0 && y <= y0;
  }
};

}  // namespace quakesim

#endif  // QUAKESIM_FOSTER_CONFIG_HPP
