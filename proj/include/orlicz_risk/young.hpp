#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace orlicz_risk {

enum class YoungFamily { power, linf, exp, piecewise, custom };

std::string to_string(YoungFamily family);

/// Extended-real product that traps 0 * inf instead of producing NaN.
double ext_mul(double a, double b);

/// Extended-real sum; +inf absorbs finite values, inf + (-inf) is trapped.
double ext_add(double a, double b);

/// A Young function phi: [0, inf) -> [0, inf].
///
/// `finite_sup` is sup{t : phi(t) < inf}. `edge_value` is the left limit of
/// phi at `finite_sup` (equal to phi(finite_sup) when that is finite); the
/// norm solvers use it to evaluate the limit of a modular at the boundary of
/// the finite region. `asymptotic_slope` is lim phi(t)/t, which is the
/// finiteness threshold of the conjugate.
class YoungFn {
public:
  using Fn = std::function<double(double)>;

  YoungFn(Fn eval, double finite_sup, double edge_value, double asymptotic_slope,
          std::optional<Fn> conjugate_closed_form, YoungFamily family, std::string label);

  double operator()(double t) const;

  double finite_sup() const noexcept { return finite_sup_; }
  double edge_value() const noexcept { return edge_value_; }
  double asymptotic_slope() const noexcept { return asymptotic_slope_; }
  const std::optional<Fn>& conjugate_closed_form() const noexcept { return conjugate_; }
  YoungFamily family() const noexcept { return family_; }
  const std::string& label() const noexcept { return label_; }

  /// phi at t, except that t == finite_sup yields the left limit.
  double eval_left(double t) const;

private:
  Fn eval_;
  double finite_sup_;
  double edge_value_;
  double asymptotic_slope_;
  std::optional<Fn> conjugate_;
  YoungFamily family_;
  std::string label_;
};

/// phi(t) = t^p for p >= 1.
YoungFn make_power(double p);

/// phi(t) = 0 for t < 1 and +inf for t >= 1.
YoungFn make_linf();

/// phi(t) = e^t - 1. Its conjugate over t >= 0 is 0 for s <= 1 and
/// s ln s - s + 1 beyond.
YoungFn make_exp();

/// Convex piecewise-linear phi with phi(0) = 0: slope `slopes[k]` on
/// [knots[k-1], knots[k]) where knots[-1] = 0 and the last slope extends to
/// infinity (or to `cap`, beyond which phi is +inf). No closed-form conjugate;
/// `conjugate` takes the numeric route.
YoungFn make_piecewise(std::vector<double> knots, std::vector<double> slopes,
                       std::optional<double> cap = std::nullopt);

/// Wraps an arbitrary function. Nothing is assumed; run `validate` on it.
YoungFn make_custom(YoungFn::Fn eval, double finite_sup, std::string label,
                    double asymptotic_slope = std::numeric_limits<double>::infinity());

/// phi*(s) = sup_{t >= 0} (s t - phi(t)). Uses the closed form when the
/// family provides one, otherwise `numeric_conjugate`.
double conjugate(const YoungFn& phi, double s);

/// Golden-section maximization of t -> s t - phi(t) over [0, finite_sup],
/// with 4x bracket expansion (at most 200 times) when finite_sup is
/// infinite. Returns +inf when the objective still climbs at the far edge.
double numeric_conjugate(const YoungFn& phi, double s);

/// phi* packaged as a Young function (closed form when available).
YoungFn conjugate_fn(const YoungFn& phi);

struct YoungValidation {
  bool ok = true;
  std::string failure;            // "origin", "monotonicity", "convexity", "divergence"
  std::vector<double> witness;    // first violating point(s)
};

/// Samples phi on a geometric grid over (0, min(finite_sup, 1e6)] with
/// `grid_points` nodes and checks phi(0) = 0 exactly, monotonicity,
/// midpoint convexity on consecutive triples and phi(T) > 1e6 for some T.
YoungValidation validate(const YoungFn& phi, std::size_t grid_points = 400);

} // namespace orlicz_risk
