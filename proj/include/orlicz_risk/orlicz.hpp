#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "orlicz_risk/parallel.hpp"
#include "orlicz_risk/prob_space.hpp"
#include "orlicz_risk/young.hpp"

namespace orlicz_risk {

enum class NormMethod { luxemburg, amemiya };

/// A conditional norm: one nonnegative value per atom, broadcast to an
/// F-measurable variable.
struct CondNorm {
  RandomVar per_atom;
  NormMethod method;
  double tolerance_used;
  /// False on atoms where the defining infimum is a limit that no admissible
  /// lambda reaches (e.g. Amemiya under phi(t) = t, or Luxemburg under linf).
  std::vector<bool> attained;
};

/// Value of a conditional norm on a single atom.
struct AtomNorm {
  double value = 0.0;
  bool attained = true;
};

inline constexpr double kNormRelTol = 1e-10;

/// inf{lambda > 0 : sum_i w_i phi(|x_i| / lambda) <= 1} for one atom with
/// conditional weights w.
AtomNorm luxemburg_on_atom(std::span<const double> x, std::span<const double> w,
                           const YoungFn& phi);

/// inf_{lambda > 0} (1 + sum_i w_i phi(lambda |x_i|)) / lambda for one atom.
AtomNorm amemiya_on_atom(std::span<const double> x, std::span<const double> w,
                         const YoungFn& phi);

/// Conditional Luxemburg norm ||x|F||_phi, solved per atom by bisection.
CondNorm luxemburg_norm(const RandomVar& x, const SubAlgebra& F, const YoungFn& phi,
                        Parallelism mode = Parallelism::sequential);

/// Conditional Amemiya norm, solved per atom by golden section on log lambda.
CondNorm amemiya_norm(const RandomVar& x, const SubAlgebra& F, const YoungFn& phi,
                      Parallelism mode = Parallelism::sequential);

/// mu_y(x) = E[x y | F].
RandomVar pairing(const RandomVar& x, const RandomVar& y, const SubAlgebra& F);

/// Per-atom operator norm of x -> E[x y | A] on the Luxemburg unit ball.
///
/// The maximizer is sign-aligned with y, which reduces the problem to
/// maximizing sum_i w_i |y_i| t_i over {t >= 0 : sum_i w_i phi(t_i) <= 1}.
/// Its Lagrangian dual is inf_k (1 + sum_i w_i phi*(k |y_i|)) / k, the
/// Amemiya norm of y under the conjugate Young function; that convex
/// one-dimensional problem is what gets solved.
CondNorm pairing_operator_norm(const RandomVar& y, const SubAlgebra& F, const YoungFn& phi,
                               Parallelism mode = Parallelism::sequential);

using LinearFunctional = std::function<RandomVar(const RandomVar&)>;

/// Recovers the density y with mu(x) = E[x y | F] from a linear, local
/// functional by evaluating it on the indicator basis.
///
/// Before inverting, `probes` random probes test linearity, F-measurability
/// of outputs and locality on every atom; afterwards the recovered density
/// must reproduce mu on fresh probes within 1e-9 relative. Any failure
/// raises ContractError naming the probe.
RandomVar recover_density(const LinearFunctional& mu, const SpacePtr& space, const SubAlgebra& F,
                          std::uint64_t seed = 0, std::size_t probes = 8);

} // namespace orlicz_risk
