#ifndef QUAKESIM_THINNING_HPP
#define QUAKESIM_THINNING_HPP

#include <cstdint>
#include <optional>

#include "quakesim/chain.hpp"
#include "quakesim/model.hpp"
#include "quakesim/random.hpp"

namespace quakesim {

struct ThinningStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Ogata-style thinning of a unit-rate Poisson stream against lambda(t-).
///
/// On each window [t, t + delta) the intensity is dominated by
/// phi(x + c delta) + y, since phi(X) can only grow and Y can only decay
/// between events. Candidates are accepted with probability
/// lambda(tau-) / bound. With no `window` the width is min(0.1, 1/lambda(t)),
/// recomputed after every candidate.
///
/// Independent of the inversion sampler; it only shares phi_eval, flow and
/// z_sample with the chain.
EventLog simulate_thinning(const ModelParams& params, const State& initial,
                           double horizon, std::optional<double> window,
                           Rng& rng, double cap = kDefaultSaturationCap,
                           ThinningStats* stats = nullptr);

}  // namespace quakesim

#endif  // QUAKESIM_THINNING_HPP
