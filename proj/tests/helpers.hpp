#ifndef QUAKESIM_TESTS_HELPERS_HPP
#define QUAKESIM_TESTS_HELPERS_HPP

#include "quakesim/model.hpp"

namespace testing_support {

inline quakesim::ModelParams reference_params() {
  quakesim::ModelParams p;
  p.c = 1.0;
  p.k = 0.5;
  p.alpha = 1.0;
  p.phi = quakesim::ExponentialPhi{1.0};
  p.z = quakesim::ExponentialZ{2.0};
  return p;
}

// Pure-decay surrogate: phi is zero for every reachable stress level.
inline quakesim::ModelParams pure_decay_params(double k, double alpha) {
  quakesim::ModelParams p = reference_params();
  p.k = k;
  p.alpha = alpha;
  p.phi = quakesim::ThresholdLinearPhi{1e9, 1.0};
  return p;
}

inline constexpr const char* kReferenceConfigJson =
    R"({"model":{"c":1,"k":0.5,"alpha":1,"phi":{"kind":"exp","scale":1},)"
    R"("z":{"kind":"exponential","mean":2}},"initial":{"x":0,"y":0},)"
    R"("seed":42,"stop":{"horizon":1e5},"replications":1,"burn_in_fraction":0.1})";

}  // namespace testing_support

#endif  // QUAKESIM_TESTS_HELPERS_HPP
