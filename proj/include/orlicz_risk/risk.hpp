#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orlicz_risk/check.hpp"
#include "orlicz_risk/parallel.hpp"
#include "orlicz_risk/prob_space.hpp"
#include "orlicz_risk/solvers.hpp"

namespace orlicz_risk {

enum class RiskTag { entropic, worst_case, linear, custom };

std::string to_string(RiskTag tag);

/// Tolerances shared by the risk routines.
inline constexpr double kConstraintTol = 1e-10;
inline constexpr double kSignTol = 1e-12;
inline constexpr double kGapTol = 1e-6;
inline constexpr double kIdentityTol = 1e-9;
inline constexpr double kInequalityTol = 1e-8;

/// Penalty q -> rho*(-q) of a risk measure restricted to one atom, for q on
/// the weighted simplex {q >= 0, sum_i w_i q_i = 1}.
struct AtomPenalty {
  std::function<double(std::span<const double> q, std::span<const double> w)> value;
  /// Euclidean gradient in q; empty when unavailable.
  std::function<void(std::span<const double> q, std::span<const double> w, std::span<double> out)>
      gradient;
  /// Penalty is identically 0 on the simplex, so the dual problem is linear.
  bool vanishes_on_simplex = false;
  /// Penalty is finite only at q = 1.
  bool singleton_domain = false;
};

/// A conditional convex risk measure on a finite space.
///
/// The evaluator maps (x, F) to an F-measurable variable. Shipped instances
/// carry a closed-form penalty per atom; custom black boxes do not and are
/// conjugated numerically after passing the axiom and locality checks.
class CondRiskMeasure {
public:
  using Evaluator = std::function<RandomVar(const RandomVar&, const SubAlgebra&)>;

  CondRiskMeasure(Evaluator evaluate, std::optional<AtomPenalty> penalty, RiskTag tag,
                  std::string label);

  RandomVar evaluate(const RandomVar& x, const SubAlgebra& F) const;

  bool has_closed_form_conjugate() const noexcept { return penalty_.has_value(); }
  const std::optional<AtomPenalty>& atom_penalty() const noexcept { return penalty_; }

  /// Closed-form rho*(y); +inf on atoms where y is infeasible. Throws
  /// ContractError when the measure has no closed form.
  RandomVar conjugate_closed_form(const RandomVar& y, const SubAlgebra& F) const;

  RiskTag tag() const noexcept { return tag_; }
  const std::string& label() const noexcept { return label_; }

private:
  Evaluator evaluate_;
  std::optional<AtomPenalty> penalty_;
  RiskTag tag_;
  std::string label_;
};

/// rho(x) = gamma^{-1} log E[exp(-gamma x) | F], evaluated with a per-atom
/// shift by min x so that rho(c) = -c and rho(0) = 0 hold exactly.
CondRiskMeasure entropic(double gamma);

/// rho(x) = ess sup(-x | F); penalty 0 on feasible densities.
CondRiskMeasure worst_case();

/// rho(x) = E[-x | F]; penalty 0 at y = -1 and +inf elsewhere.
CondRiskMeasure linear_risk();

/// Black-box measure without closed-form conjugate.
CondRiskMeasure custom_risk(CondRiskMeasure::Evaluator evaluate, std::string label);

/// Per-atom feasibility of a dual variable: y <= 1e-12 and |E[y|A] + 1| <= 1e-10.
std::vector<bool> dual_feasible(const RandomVar& y, const SubAlgebra& F);

struct ConjugateOptions {
  std::uint64_t seed = 0;
  std::size_t axiom_trials = 8;
};

/// rho*(y) = ess sup_x {E[xy|F] - rho(x)}.
///
/// Closed form when available. Otherwise infeasible atoms get +inf directly
/// and feasible ones are solved by coordinate ascent from x = 0 over the
/// outcomes of the atom (locality makes the rest irrelevant). Custom
/// measures must first pass `check_axioms` and `locality_check`.
RandomVar fenchel_conjugate(const CondRiskMeasure& rho, const RandomVar& y, const SubAlgebra& F,
                            const ConjugateOptions& opts = {});

/// Numeric conjugate on a single atom, no feasibility shortcut.
solvers::SolveReport numeric_conjugate_on_atom(const CondRiskMeasure& rho, const RandomVar& y,
                                               const SubAlgebra& F, std::size_t atom);

/// Dual variable certifying the robust representation at x.
struct DualCertificate {
  RandomVar y;           // y <= 0, E[y|F] = -1
  RandomVar penalty;     // rho*(y)
  RandomVar dual_value;  // E[xy|F] - rho*(y)
  RandomVar risk;        // rho(x)
  RandomVar gap;         // rho(x) - dual_value
  std::vector<solvers::SolveReport> reports;
};

class DualConvergenceError : public Error {
public:
  DualConvergenceError(const std::string& what, DualCertificate best)
      : Error(what), best_(std::move(best)) {}
  const DualCertificate& best() const noexcept { return best_; }

private:
  DualCertificate best_;
};

struct DualOptions {
  Parallelism mode = Parallelism::sequential;
  double rel_tol = 1e-10;
};

/// Per atom, maximizes q -> E[-xq|A] - rho*(-q) over the weighted simplex
/// with `simplex_max` and packages the maximizer y = -q as a certificate.
DualCertificate robust_representation(const CondRiskMeasure& rho, const RandomVar& x,
                                      const SubAlgebra& F, const DualOptions& opts = {});

struct AttainmentReport {
  CheckResult check;
  DualCertificate certificate;
  RandomVar recomputed_dual;  // E[x y*|F] - rho*(y*) recomputed from scratch
  std::string note;
};

/// Verifies rho(x) = E[x y*|F] - rho*(y*) for the maximizer y* within 1e-6
/// per atom.
AttainmentReport attainment_check(const CondRiskMeasure& rho, const RandomVar& x,
                                  const SubAlgebra& F, const DualOptions& opts = {});

struct LebesgueReport {
  CheckResult tail;  // |rho(x_n) - rho(x)| at n = tail_index for x_n = x + z / n^2
  CheckResult rate;  // n |rho(x_n) - rho(x)| - |z|_inf for x_n = x + z / n
  std::vector<double> harmonic_tail_deviation;  // per trial, x_n = x + z / n at tail_index
};

/// Continuity sweep along random dominated sequences. Two families per
/// trial: x + z/n^2, whose deviation at n = tail_index must stay below 1e-6,
/// and x + z/n, whose deviation must respect the 1-Lipschitz bound
/// |z|_inf / n at every sampled n.
LebesgueReport lebesgue_check(const CondRiskMeasure& rho, const SpacePtr& space,
                              const SubAlgebra& F, std::size_t trials, std::uint64_t seed,
                              double tail_index = 1e4);

/// Static risk functional rho0(x) = E[rho(x|F)].
class ScalarizedRisk {
public:
  ScalarizedRisk(CondRiskMeasure rho, SubAlgebra F) : rho_(std::move(rho)), F_(std::move(F)) {}

  double evaluate(const RandomVar& x) const;

  /// sup_x {E[xy] - rho0(x)} by coordinate ascent over all of R^n.
  double conjugate_definitional(const RandomVar& y) const;

  /// E[rho*(y)], using `fenchel_conjugate`.
  double conjugate_via_conditional(const RandomVar& y) const;

  const SubAlgebra& algebra() const noexcept { return F_; }

private:
  CondRiskMeasure rho_;
  SubAlgebra F_;
};

ScalarizedRisk scalarize(const CondRiskMeasure& rho, const SubAlgebra& F);

/// Both conjugate routes of the scalarized measure agree within 1e-6.
CheckResult scalarization_check(const CondRiskMeasure& rho, const SubAlgebra& F,
                                std::span<const RandomVar> ys);

using LocalMap = std::function<RandomVar(const RandomVar&)>;

/// Tests 1_A f(1_A x) = 1_A f(x) within 1e-9 for random x and every union A
/// of atoms (all unions up to 10 atoms, otherwise singletons plus random ones).
CheckResult locality_check(const LocalMap& f, const SpacePtr& space, const SubAlgebra& F,
                           std::size_t trials, std::uint64_t seed);

/// Tests rho(concatenate(x_k)) = concatenate(rho(x_k)) along a partition whose
/// atoms are F-measurable, within 1e-9.
CheckResult extension_check(const CondRiskMeasure& rho, const SpacePtr& space,
                            const SubAlgebra& F, const SubAlgebra& partition, std::size_t trials,
                            std::uint64_t seed);

struct PenaltyBoundReport {
  CheckResult check;
  std::size_t atoms_checked = 0;
  std::size_t atoms_excluded = 0;
};

/// After normalizing rho(0) = 0: on every atom where
/// E[xy|F] - rho*(y) >= -beta, requires rho*(y) <= 2 beta + 2 rho(-2|x|) + 1e-8.
/// Atoms violating the hypothesis are skipped individually.
PenaltyBoundReport penalty_bound_check(const CondRiskMeasure& rho, const RandomVar& x,
                                       const RandomVar& y, const RandomVar& beta,
                                       const SubAlgebra& F);

struct OrderContinuityReport {
  CheckResult check;
  std::vector<double> sampled_n;
  std::vector<double> s_values;  // max over atoms of max_z E[|u_n z| | F]
};

/// For u_n pointwise nonincreasing to 0 (checked at geometrically sampled n up
/// to n_max, ContractError otherwise), computes s_n = max_{z in C} E[|u_n z||F]
/// per atom and requires s_{n_max} <= tail_tol.
OrderContinuityReport uniform_order_continuity_check(
    std::span<const RandomVar> C, const SubAlgebra& F,
    const std::function<RandomVar(double n)>& u, double n_max, double tail_tol = 1e-8);

struct AxiomReport {
  CheckResult monotonicity;
  CheckResult cash_invariance;
  CheckResult convexity;
  CheckResult measurability;
  double rho_at_zero_max_abs = 0.0;
  bool pass() const {
    return monotonicity.pass && cash_invariance.pass && convexity.pass && measurability.pass;
  }
};

/// Random-probe checks of monotonicity, cash invariance against F-measurable
/// shifts and convexity against F-measurable weights, each within 1e-9.
AxiomReport check_axioms(const CondRiskMeasure& rho, const SpacePtr& space, const SubAlgebra& F,
                         std::size_t trials, std::uint64_t seed);

/// Risk measures attached to the stages of a filtration.
class DynamicRiskMeasure {
public:
  DynamicRiskMeasure(Filtration filtration, std::vector<CondRiskMeasure> measures);

  const Filtration& filtration() const noexcept { return filtration_; }
  const std::vector<CondRiskMeasure>& measures() const noexcept { return measures_; }

private:
  Filtration filtration_;
  std::vector<CondRiskMeasure> measures_;
};

/// (rho_t(x))_t, each F_t-measurable.
std::vector<RandomVar> dynamic_evaluate(const DynamicRiskMeasure& D, const RandomVar& x);

} // namespace orlicz_risk
