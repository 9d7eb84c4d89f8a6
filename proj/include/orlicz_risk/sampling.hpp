#pragma once

#include <cstdint>
#include <random>

#include "orlicz_risk/prob_space.hpp"

namespace orlicz_risk::sampling {

using Rng = std::mt19937_64;

/// Random space with n outcomes; masses drawn from [0.5, 1.5] then normalized
/// so that the last mass absorbs the rounding and the total is exactly 1
/// within 1e-15.
SpacePtr random_space(Rng& rng, std::size_t n);

/// Random partition of n outcomes into at most `max_atoms` nonempty atoms.
SubAlgebra random_partition(Rng& rng, std::size_t n, std::size_t max_atoms);

/// Random coarsening of F: atoms of F merged into at most `max_atoms` groups.
SubAlgebra random_coarsening(Rng& rng, const SubAlgebra& F, std::size_t max_atoms);

/// Independent uniform values in [lo, hi].
RandomVar uniform_var(Rng& rng, const SpacePtr& space, double lo, double hi);

/// F-measurable uniform values in [lo, hi].
RandomVar uniform_measurable(Rng& rng, const SpacePtr& space, const SubAlgebra& F, double lo,
                             double hi);

/// Random dual variable y <= 0 with E[y|F] = -1: q = -y drawn from
/// [q_lo, 1] per outcome and rescaled to conditional mean 1.
RandomVar random_feasible_density(Rng& rng, const SpacePtr& space, const SubAlgebra& F,
                                  double q_lo = 0.05);

} // namespace orlicz_risk::sampling
