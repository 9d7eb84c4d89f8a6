#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "orlicz_risk/errors.hpp"

namespace orlicz_risk::solvers {

/// Outcome of a scalar or small-dimensional solve.
///
/// `attained` is false when the optimum is a limit approached along an
/// expanding bracket edge rather than a point the solver could return.
struct SolveReport {
  std::vector<double> point;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool attained = true;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Raised when an iterative solver hits its iteration cap. Carries the best
/// iterate found so far.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, SolveReport best)
      : Error(what), best_(std::move(best)) {}
  const SolveReport& best() const noexcept { return best_; }

private:
  SolveReport best_;
};

using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<double(std::span<const double>)>;

/// Smallest point where a nonincreasing `f` drops to `target` or below.
///
/// If `f(lo) <= target` the lower endpoint is returned as is. Otherwise the
/// upper endpoint is doubled (at most 60 times) until `f(hi) <= target`,
/// then bisection runs until `hi - lo <= rel_tol * hi`. The returned point
/// always satisfies `f(point) <= target`.
SolveReport bisect_monotone(const ScalarFn& f, double target, Interval bracket,
                            double rel_tol = 1e-10);

struct GoldenOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  bool expand_right = false;
  double expansion_factor = 4.0;
  std::size_t max_expansions = 200;
  std::size_t max_iterations = 10000;
};

/// Golden-section minimization of a unimodal function.
///
/// With `expand_right`, the right edge is pushed out geometrically while `f`
/// keeps decreasing there. When successive expansions improve by less than
/// 1e-12 relative, the minimum is reported as a limit with attained=false.
SolveReport golden_min(const ScalarFn& f, Interval bracket, const GoldenOptions& opts = {});

/// Maximizes a concave function of one variable starting from `start`.
///
/// Walks in the ascent direction with steps growing by 4x until the maximum
/// is bracketed, then refines by golden section. A value of +inf is returned
/// when the slope at the expanding edge stays positive up to the expansion
/// cap; a finite value with attained=false when the function levels off.
SolveReport line_max(const ScalarFn& f, double start, double initial_step = 1.0,
                     double rel_tol = 1e-10);

struct CoordinateAscentOptions {
  double rel_tol = 1e-13;
  std::size_t max_sweeps = 20000;
};

/// Cyclic coordinate ascent for a concave function on R^n, each coordinate
/// maximized exactly with `line_max`. Returns value +inf when any line
/// search detects unboundedness.
SolveReport coordinate_ascent(const VectorFn& f, std::vector<double> start,
                              const CoordinateAscentOptions& opts = {});

/// Concave objective on the weighted simplex {q >= 0, sum_i w_i q_i = 1}.
///
/// `value` may return -inf to signal an infeasible point. `gradient`, when
/// set, writes the Euclidean gradient; otherwise a finite-difference
/// gradient of the scale-normalized extension q -> g(q / <w,q>) is used.
/// `linear` marks objectives whose maximum sits on a vertex; these are
/// solved by vertex enumeration with ties going to the lowest index.
struct SimplexObjective {
  VectorFn value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  bool linear = false;
};

inline constexpr std::size_t kMaxSimplexSize = 64;

/// Projected-gradient ascent on the weighted simplex.
///
/// Starts at q = 1 (the weighted barycenter). Each step projects
/// q + eta * grad_w g onto the simplex in the w-weighted metric; eta is a
/// Barzilai-Borwein trial step (1.0 on the first iteration) halved until the
/// Armijo condition with constant 1e-4 holds against the lowest of the last
/// 10 objective values (nonmonotone acceptance). Stops when the projected
/// gradient step has sup-norm below `rel_tol * max(1, |q|_inf)`, when no
/// ascent step moves the iterate, or, with finite-difference gradients, after
/// 200 iterations without a gain above rounding noise.
SolveReport simplex_max(const SimplexObjective& g, std::span<const double> weights,
                        double rel_tol = 1e-10, std::size_t max_iterations = 100000);

/// Euclidean projection in the w-weighted metric onto {q >= 0, <w,q> = 1}.
/// Sorting-based, O(n log n).
std::vector<double> project_weighted_simplex(std::span<const double> z,
                                             std::span<const double> weights);

} // namespace orlicz_risk::solvers
