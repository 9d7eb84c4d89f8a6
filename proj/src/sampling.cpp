#include "orlicz_risk/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace orlicz_risk::sampling {

SpacePtr random_space(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> mass(0.5, 1.5);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& e : p) {
    e = mass(rng);
    total += e;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    p[i] /= total;
    acc += p[i];
  }
  p[n - 1] = 1.0 - acc;
  return FiniteProbSpace::make(std::move(p));
}

SubAlgebra random_partition(Rng& rng, std::size_t n, std::size_t max_atoms) {
  const std::size_t cap = std::max<std::size_t>(1, std::min(max_atoms, n));
  std::uniform_int_distribution<std::size_t> count(1, cap);
  const std::size_t k = count(rng);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  // First k shuffled outcomes seed the atoms; the rest land anywhere.
  std::vector<std::vector<std::size_t>> atoms(k);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (std::size_t j = 0; j < n; ++j) {
    atoms[j < k ? j : pick(rng)].push_back(order[j]);
  }
  return SubAlgebra(n, std::move(atoms));
}

SubAlgebra random_coarsening(Rng& rng, const SubAlgebra& F, std::size_t max_atoms) {
  const SubAlgebra groups = random_partition(rng, F.n_atoms(), max_atoms);
  std::vector<std::vector<std::size_t>> atoms;
  for (const auto& group : groups.atoms()) {
    std::vector<std::size_t> merged;
    for (std::size_t k : group) {
      merged.insert(merged.end(), F.atom(k).begin(), F.atom(k).end());
    }
    atoms.push_back(std::move(merged));
  }
  return SubAlgebra(F.n_outcomes(), std::move(atoms));
}

RandomVar uniform_var(Rng& rng, const SpacePtr& space, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> v(space->size());
  for (double& e : v) {
    e = unif(rng);
  }
  return RandomVar(space, std::move(v));
}

RandomVar uniform_measurable(Rng& rng, const SpacePtr& space, const SubAlgebra& F, double lo,
                             double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> per_atom(F.n_atoms());
  for (double& e : per_atom) {
    e = unif(rng);
  }
  return broadcast(space, F, per_atom);
}

RandomVar random_feasible_density(Rng& rng, const SpacePtr& space, const SubAlgebra& F,
                                  double q_lo) {
  const RandomVar q = uniform_var(rng, space, q_lo, 1.0);
  const RandomVar mean = cond_expectation(q, F);
  std::vector<double> y(space->size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = -q[i] / mean[i];
  }
  return RandomVar(space, std::move(y));
}

} // namespace orlicz_risk::sampling
