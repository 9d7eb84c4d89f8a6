#include "orlicz_risk/young.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orlicz_risk/errors.hpp"
#include "orlicz_risk/solvers.hpp"

namespace orlicz_risk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

} // namespace

std::string to_string(YoungFamily family) {
  switch (family) {
  case YoungFamily::power:
    return "power";
  case YoungFamily::linf:
    return "linf";
  case YoungFamily::exp:
    return "exp";
  case YoungFamily::piecewise:
    return "piecewise";
  case YoungFamily::custom:
    return "custom";
  }
  return "custom";
}

double ext_mul(double a, double b) {
  if ((a == 0.0 && std::isinf(b)) || (b == 0.0 && std::isinf(a))) {
    throw ContractError("extended-real product 0 * inf is undefined");
  }
  return a * b;
}

double ext_add(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0)) {
    throw ContractError("extended-real sum inf + (-inf) is undefined");
  }
  return a + b;
}

YoungFn::YoungFn(Fn eval, double finite_sup, double edge_value, double asymptotic_slope,
                 std::optional<Fn> conjugate_closed_form, YoungFamily family, std::string label)
    : eval_(std::move(eval)),
      finite_sup_(finite_sup),
      edge_value_(edge_value),
      asymptotic_slope_(asymptotic_slope),
      conjugate_(std::move(conjugate_closed_form)),
      family_(family),
      label_(std::move(label)) {
  if (!eval_) {
    throw ParameterError("Young function needs an evaluator");
  }
  if (!(finite_sup_ > 0.0)) {
    throw ParameterError("Young function must be finite on a neighborhood of 0");
  }
}

double YoungFn::operator()(double t) const {
  if (!(t >= 0.0)) {
    throw ParameterError("Young function evaluated at negative or NaN argument");
  }
  if (t > finite_sup_) {
    return kInf;
  }
  return eval_(t);
}

double YoungFn::eval_left(double t) const {
  if (t == finite_sup_ && std::isfinite(finite_sup_)) {
    return edge_value_;
  }
  return (*this)(t);
}

YoungFn make_power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ParameterError("power Young function needs finite p >= 1, got " + fmt_param(p));
  }
  YoungFn::Fn conj;
  if (p == 1.0) {
    conj = [](double s) { return s <= 1.0 ? 0.0 : kInf; };
  } else {
    conj = [p](double s) { return (p - 1.0) * std::pow(s / p, p / (p - 1.0)); };
  }
  return YoungFn([p](double t) { return p == 1.0 ? t : std::pow(t, p); }, kInf, kInf,
                 p == 1.0 ? 1.0 : kInf, std::move(conj), YoungFamily::power,
                 "power(p=" + fmt_param(p) + ")");
}

YoungFn make_linf() {
  return YoungFn([](double t) { return t < 1.0 ? 0.0 : kInf; }, 1.0, 0.0, kInf,
                 YoungFn::Fn([](double s) { return s; }), YoungFamily::linf, "linf");
}

YoungFn make_exp() {
  return YoungFn([](double t) { return std::expm1(t); }, kInf, kInf, kInf,
                 YoungFn::Fn([](double s) { return s <= 1.0 ? 0.0 : s * std::log(s) - s + 1.0; }),
                 YoungFamily::exp, "exp");
}

YoungFn make_piecewise(std::vector<double> knots, std::vector<double> slopes,
                       std::optional<double> cap) {
  if (slopes.size() != knots.size() + 1) {
    throw ParameterError("piecewise Young function needs one more slope than knots");
  }
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!(knots[k] > (k == 0 ? 0.0 : knots[k - 1])) || !std::isfinite(knots[k])) {
      throw ParameterError("piecewise knots must be finite, positive and strictly increasing");
    }
  }
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    if (!(slopes[k] >= 0.0) || !std::isfinite(slopes[k]) ||
        (k > 0 && slopes[k] < slopes[k - 1])) {
      throw ParameterError("piecewise slopes must be finite, nonnegative and nondecreasing");
    }
  }
  if (!cap && !(slopes.back() > 0.0)) {
    throw ParameterError("piecewise Young function without a cap needs a positive last slope");
  }
  if (cap && (!(*cap > 0.0) || !std::isfinite(*cap))) {
    throw ParameterError("piecewise cap must be positive and finite");
  }
  // Values of phi at the knots.
  std::vector<double> at(knots.size());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    acc += slopes[k] * (knots[k] - prev);
    at[k] = acc;
    prev = knots[k];
  }
  auto eval = [knots, slopes, at](double t) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    const std::size_t seg = static_cast<std::size_t>(it - knots.begin());
    const double base_t = seg == 0 ? 0.0 : knots[seg - 1];
    const double base_v = seg == 0 ? 0.0 : at[seg - 1];
    return base_v + slopes[seg] * (t - base_t);
  };
  const double finite_sup = cap ? *cap : kInf;
  const double edge = cap ? eval(*cap) : kInf;
  const double slope = cap ? kInf : slopes.back();
  std::ostringstream label;
  label << "piecewise(" << knots.size() + 1 << " pieces" << (cap ? ", capped" : "") << ")";
  return YoungFn(eval, finite_sup, edge, slope, std::nullopt, YoungFamily::piecewise,
                 label.str());
}

YoungFn make_custom(YoungFn::Fn eval, double finite_sup, std::string label,
                    double asymptotic_slope) {
  double edge = kInf;
  if (std::isfinite(finite_sup)) {
    edge = eval(finite_sup);
    if (!std::isfinite(edge)) {
      edge = eval(finite_sup * (1.0 - 1e-12));
    }
  }
  return YoungFn(std::move(eval), finite_sup, edge, asymptotic_slope, std::nullopt,
                 YoungFamily::custom, std::move(label));
}

double numeric_conjugate(const YoungFn& phi, double s) {
  if (!(s >= 0.0)) {
    throw ParameterError("conjugate Young function is defined for s >= 0");
  }
  if (s == 0.0) {
    return 0.0;
  }
  const auto gain = [&phi, s](double t) {
    if (t < 0.0) {
      return -kInf;
    }
    const double v = phi(t);
    return std::isinf(v) ? -kInf : s * t - v;
  };
  const double fs = phi.finite_sup();
  if (std::isfinite(fs)) {
    const auto loss = [&gain](double t) { return -gain(t); };
    const auto r = solvers::golden_min(loss, {0.0, fs}, {.rel_tol = 1e-10, .abs_tol = 1e-14});
    const double edge = s * fs - phi.edge_value();
    return std::max({0.0, -r.value, edge});
  }
  const auto r = solvers::line_max(gain, 0.0, 1.0, 1e-10);
  return std::max(0.0, r.value);
}

double conjugate(const YoungFn& phi, double s) {
  if (!(s >= 0.0)) {
    throw ParameterError("conjugate Young function is defined for s >= 0");
  }
  if (phi.conjugate_closed_form()) {
    return (*phi.conjugate_closed_form())(s);
  }
  return numeric_conjugate(phi, s);
}

YoungFn conjugate_fn(const YoungFn& phi) {
  const YoungFn::Fn original = [phi](double t) { return phi(t); };
  const std::string label = "conjugate(" + phi.label() + ")";
  // Finiteness threshold of phi* is the asymptotic slope of phi and vice versa.
  const double fs = phi.asymptotic_slope();
  const double slope = phi.finite_sup();
  if (phi.conjugate_closed_form()) {
    const auto closed = *phi.conjugate_closed_form();
    const double edge = std::isfinite(fs) ? closed(fs) : kInf;
    return YoungFn(closed, fs, edge, slope, original, YoungFamily::custom, label);
  }
  const YoungFn::Fn numeric = [phi](double s) { return numeric_conjugate(phi, s); };
  const double edge = std::isfinite(fs) ? numeric(fs) : kInf;
  return YoungFn(numeric, fs, edge, slope, original, YoungFamily::custom, label);
}

YoungValidation validate(const YoungFn& phi, std::size_t grid_points) {
  YoungValidation out;
  auto fail = [&out](std::string what, std::vector<double> witness) {
    out.ok = false;
    out.failure = std::move(what);
    out.witness = std::move(witness);
    return out;
  };
  if (phi(0.0) != 0.0) {
    return fail("origin", {0.0});
  }
  grid_points = std::max<std::size_t>(grid_points, 3);
  // Open finite domain only: the boundary point finite_sup is excluded.
  const double upper = std::isfinite(phi.finite_sup())
                           ? std::min(phi.finite_sup() * (1.0 - 1e-9), 1e6)
                           : 1e6;
  const double lower = upper * 1e-9;
  std::vector<double> grid(grid_points);
  std::vector<double> val(grid_points);
  const double ratio = std::pow(upper / lower, 1.0 / static_cast<double>(grid_points - 1));
  for (std::size_t k = 0; k < grid_points; ++k) {
    grid[k] = k + 1 == grid_points ? upper : lower * std::pow(ratio, static_cast<double>(k));
    val[k] = phi(grid[k]);
  }
  if (!std::isfinite(val.front())) {
    return fail("finite-near-zero", {grid.front()});
  }
  auto slack = [](double v) { return 1e-12 * std::max(1.0, std::abs(v)); };
  if (val.front() < -slack(0.0)) {
    return fail("monotonicity", {0.0, grid.front()});
  }
  for (std::size_t k = 1; k < grid_points; ++k) {
    if (val[k] < val[k - 1] - slack(val[k - 1])) {
      return fail("monotonicity", {grid[k - 1], grid[k]});
    }
  }
  for (std::size_t stride = 1; stride < grid_points; stride *= 2) {
    for (std::size_t k = 0; k + stride < grid_points; ++k) {
      const double a = grid[k];
      const double b = grid[k + stride];
      if (!std::isfinite(val[k + stride])) {
        continue;
      }
      const double mid = phi(0.5 * (a + b));
      const double avg = 0.5 * (val[k] + val[k + stride]);
      if (mid > avg + slack(avg)) {
        return fail("convexity", {a, 0.5 * (a + b), b});
      }
    }
  }
  bool diverges = false;
  for (double t = 1e6; t <= 1e15 && !diverges; t *= 10.0) {
    diverges = phi(t) > 1e6;
  }
  if (!diverges) {
    return fail("divergence", {1e15});
  }
  return out;
}

} // namespace orlicz_risk
