#include "orlicz_risk/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace orlicz_risk::solvers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498948482;
constexpr std::size_t kMaxDoublings = 60;
constexpr double kLimitImprovement = 1e-12;
constexpr double kFarEdge = 1e150;
constexpr double kArmijo = 1e-4;
constexpr std::size_t kNonmonotoneWindow = 10;
constexpr double kValueNoise = 1e-15;
constexpr std::size_t kStallWindow = 200;

double nan_to(double v, double replacement) { return std::isnan(v) ? replacement : v; }

// Golden section on [a, b]; f must already map NaN to +inf.
SolveReport golden_core(const ScalarFn& f, double a, double b, double rel_tol, double abs_tol,
                        std::size_t max_iterations) {
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  std::size_t it = 0;
  auto wide = [&] { return b - a > rel_tol * std::max(std::abs(a), std::abs(b)) + abs_tol; };
  while (wide() && it < max_iterations) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++it;
  }
  SolveReport r;
  r.point = {f1 <= f2 ? x1 : x2};
  r.value = std::min(f1, f2);
  r.iterations = it;
  r.converged = !wide();
  return r;
}

} // namespace

SolveReport bisect_monotone(const ScalarFn& f, double target, Interval bracket, double rel_tol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) {
    throw NoBracketError("bisection bracket must satisfy lo < hi");
  }
  SolveReport r;
  const double flo = f(lo);
  if (flo <= target) {
    r.point = {lo};
    r.value = flo;
    r.converged = true;
    return r;
  }
  double fhi = f(hi);
  std::size_t doublings = 0;
  while (!(fhi <= target)) {
    if (doublings == kMaxDoublings) {
      throw NoBracketError("no point with f <= target after 60 doublings of the bracket");
    }
    lo = hi;
    hi *= 2.0;
    fhi = f(hi);
    ++doublings;
  }
  std::size_t it = 0;
  while (hi - lo > rel_tol * std::abs(hi) && it < 4000) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) {
      break;
    }
    const double fm = f(mid);
    if (fm <= target) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
    }
    ++it;
  }
  r.point = {hi};
  r.value = fhi;
  r.iterations = it + doublings;
  r.converged = true;
  return r;
}

SolveReport golden_min(const ScalarFn& f_raw, Interval bracket, const GoldenOptions& opts) {
  const ScalarFn f = [&f_raw](double t) { return nan_to(f_raw(t), kInf); };
  double a = bracket.lo;
  double c = bracket.hi;
  if (!(a < c)) {
    throw NoBracketError("golden-section bracket must satisfy lo < hi");
  }
  std::size_t expansions = 0;
  if (opts.expand_right) {
    double b = a + 0.5 * (c - a);
    double fb = f(b);
    double fc = f(c);
    // A tie after a strict decrease means the gain fell below one ulp: a limit.
    bool decreasing = false;
    while (fc < fb || (decreasing && fc == fb)) {
      decreasing = true;
      const double improvement = fb - fc;
      if (improvement <= kLimitImprovement * std::max(1.0, std::abs(fc))) {
        return SolveReport{{c}, fc, expansions, true, false};
      }
      if (expansions == opts.max_expansions) {
        return SolveReport{{c}, fc, expansions, false, false};
      }
      const double next = a + opts.expansion_factor * (c - a);
      if (!std::isfinite(next) || std::abs(next) > kFarEdge) {
        return SolveReport{{c}, fc, expansions, false, false};
      }
      a = b;
      b = c;
      fb = fc;
      c = next;
      fc = f(c);
      ++expansions;
    }
  }
  SolveReport r = golden_core(f, a, c, opts.rel_tol, opts.abs_tol, opts.max_iterations);
  r.iterations += expansions;
  return r;
}

SolveReport line_max(const ScalarFn& f_raw, double start, double initial_step, double rel_tol) {
  const ScalarFn g = [&f_raw](double t) { return nan_to(f_raw(t), -kInf); };
  const ScalarFn neg = [&g](double t) { return -g(t); };
  const double h = std::max(std::abs(initial_step), 1e-12);
  const double f0 = g(start);
  if (f0 == kInf) {
    return SolveReport{{start}, kInf, 0, true, false};
  }
  const double fp = g(start + h);
  const double fm = g(start - h);
  auto finish = [&](double lo, double hi, std::size_t extra) {
    SolveReport r = golden_core(neg, lo, hi, rel_tol, 1e-12, 10000);
    r.value = -r.value;
    r.iterations += extra;
    if (f0 >= r.value) {
      r.point = {start};
      r.value = f0;
    }
    return r;
  };
  if (fp <= f0 && fm <= f0) {
    return finish(start - h, start + h, 0);
  }
  const double dir = fp >= fm ? 1.0 : -1.0;
  double a = start;
  double b = start + dir * h;
  double fb = dir > 0 ? fp : fm;
  double step = h;
  for (std::size_t k = 0;; ++k) {
    if (fb == kInf) {
      return SolveReport{{b}, kInf, k, true, false};
    }
    step *= 4.0;
    const double c = b + dir * step;
    const double fc = g(c);
    if (fc <= fb) {
      return finish(std::min(a, c), std::max(a, c), k);
    }
    const double improvement = fc - fb;
    if (fc == kInf || k >= 200 || std::abs(c) > kFarEdge) {
      // Slope test at the far edge: still climbing means unbounded.
      if (improvement > 0.0) {
        return SolveReport{{c}, kInf, k, true, false};
      }
      return SolveReport{{c}, fc, k, false, false};
    }
    if (improvement <= kLimitImprovement * std::max(1.0, std::abs(fc))) {
      return SolveReport{{c}, fc, k, true, false};
    }
    a = b;
    b = c;
    fb = fc;
  }
}

SolveReport coordinate_ascent(const VectorFn& f, std::vector<double> start,
                              const CoordinateAscentOptions& opts) {
  std::vector<double> x = std::move(start);
  double fx = f(x);
  SolveReport r;
  if (std::isnan(fx)) {
    throw Error("coordinate ascent started at a point where the objective is NaN");
  }
  if (fx == kInf) {
    r.point = x;
    r.value = kInf;
    r.converged = true;
    r.attained = false;
    return r;
  }
  std::vector<double> steps(x.size(), 1.0);
  std::vector<double> work = x;
  std::size_t quiet_sweeps = 0;
  bool attained = true;
  std::size_t sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    const double before = fx;
    attained = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      work = x;
      const ScalarFn along = [&](double t) {
        work[i] = t;
        return f(work);
      };
      const SolveReport line = line_max(along, x[i], steps[i]);
      if (line.value == kInf) {
        x[i] = line.point.front();
        r.point = x;
        r.value = kInf;
        r.iterations = sweep + 1;
        r.converged = true;
        r.attained = false;
        return r;
      }
      attained = attained && line.attained;
      if (line.value > fx) {
        const double delta = line.point.front() - x[i];
        x[i] = line.point.front();
        fx = line.value;
        steps[i] = std::max(2.0 * std::abs(delta), 1e-6);
      } else {
        steps[i] = std::max(0.5 * steps[i], 1e-6);
      }
    }
    if (fx - before <= opts.rel_tol * std::max(1.0, std::abs(fx))) {
      if (++quiet_sweeps >= 2) {
        ++sweep;
        r.converged = true;
        break;
      }
    } else {
      quiet_sweeps = 0;
    }
  }
  r.point = x;
  r.value = fx;
  r.iterations = sweep;
  r.attained = attained;
  return r;
}

std::vector<double> project_weighted_simplex(std::span<const double> z,
                                             std::span<const double> weights) {
  const std::size_t n = z.size();
  if (weights.size() != n || n == 0) {
    throw StructuralError("simplex projection needs matching, nonempty point and weights");
  }
  // Minimize sum_i w_i (q_i - z_i)^2 subject to <w,q> = 1, q >= 0.
  // The solution is q = max(z - tau, 0) for the unique tau making <w,q> = 1.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });
  double wz = 0.0;
  double wsum = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    wz += weights[i] * z[i];
    wsum += weights[i];
    const double candidate = (wz - 1.0) / wsum;
    if (k == 0 || z[i] > candidate) {
      tau = candidate;
    } else {
      break;
    }
  }
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = std::max(z[i] - tau, 0.0);
  }
  return q;
}

namespace {

// Finite-difference gradient of q -> g(q / <w,q>) at a simplex point.
void fd_gradient(const VectorFn& g, std::span<const double> q, std::span<const double> w,
                 std::span<double> grad) {
  const std::size_t n = q.size();
  std::vector<double> probe(q.begin(), q.end());
  auto eval = [&](std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += w[i] * v[i];
    }
    std::vector<double> scaled(v.begin(), v.end());
    for (double& e : scaled) {
      e /= s;
    }
    return g(scaled);
  };
  const double f0 = eval(q);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(q[i]));
    probe[i] = q[i] + h;
    const double fp = eval(probe);
    if (q[i] >= h) {
      probe[i] = q[i] - h;
      const double fm = eval(probe);
      grad[i] = (fp - fm) / (2.0 * h);
    } else {
      grad[i] = (fp - f0) / h;
    }
    probe[i] = q[i];
  }
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += w[i] * a[i] * b[i];
  }
  return s;
}

} // namespace

SolveReport simplex_max(const SimplexObjective& g, std::span<const double> weights,
                        double rel_tol, std::size_t max_iterations) {
  const std::size_t n = weights.size();
  if (n == 0) {
    throw StructuralError("simplex_max on an empty atom");
  }
  if (n > kMaxSimplexSize) {
    throw StructuralError("simplex_max supports atoms of at most 64 outcomes, got " +
                          std::to_string(n));
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw StructuralError("simplex weights must be positive and finite");
    }
  }

  SolveReport r;
  if (g.linear) {
    std::vector<double> vertex(n, 0.0);
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      vertex.assign(n, 0.0);
      vertex[i] = 1.0 / weights[i];
      const double v = nan_to(g.value(vertex), -kInf);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    r.point.assign(n, 0.0);
    r.point[arg] = 1.0 / weights[arg];
    r.value = best;
    r.iterations = n;
    r.converged = true;
    return r;
  }

  std::vector<double> q(n, 1.0);
  double fq = nan_to(g.value(q), -kInf);
  if (fq == -kInf) {
    throw Error("simplex_max: objective is infeasible at the barycenter");
  }
  std::vector<double> grad(n), gw(n), gw_prev(n), q_prev(n), trial(n), z(n), step_vec(n);
  auto compute_gw = [&] {
    if (g.gradient) {
      g.gradient(q, grad);
    } else {
      fd_gradient(g.value, q, weights, grad);
    }
    for (std::size_t i = 0; i < n; ++i) {
      gw[i] = grad[i] / weights[i];
    }
  };
  compute_gw();
  double eta = 1.0;
  // Acceptance is measured against the worst of the last few values, which
  // lets BB steps ride through rounding noise near the optimum.
  std::vector<double> recent{fq};
  std::vector<double> best_q = q;
  double best_f = fq;
  std::size_t stalled = 0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    // Stationarity: size of the unit projected-gradient step.
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = q[i] + gw[i];
    }
    const auto unit = project_weighted_simplex(z, weights);
    double resid = 0.0;
    double qmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      resid = std::max(resid, std::abs(unit[i] - q[i]));
      qmax = std::max(qmax, std::abs(q[i]));
    }
    if (resid <= rel_tol * std::max(1.0, qmax)) {
      r.point = fq >= best_f ? q : best_q;
      r.value = std::max(fq, best_f);
      r.iterations = it;
      r.converged = true;
      return r;
    }

    const double f_ref = *std::min_element(recent.begin(), recent.end()) -
                         kValueNoise * std::max(1.0, std::abs(fq));
    bool accepted = false;
    double t = eta;
    for (std::size_t halving = 0; halving < 80; ++halving, t *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = q[i] + t * gw[i];
      }
      trial = project_weighted_simplex(z, weights);
      for (std::size_t i = 0; i < n; ++i) {
        step_vec[i] = trial[i] - q[i];
      }
      if (std::all_of(step_vec.begin(), step_vec.end(), [](double d) { return d == 0.0; })) {
        break;
      }
      const double ft = nan_to(g.value(trial), -kInf);
      if (ft >= f_ref + kArmijo * weighted_dot(gw, step_vec, weights)) {
        accepted = true;
        q_prev = q;
        q = trial;
        fq = ft;
        break;
      }
    }
    if (!accepted) {
      // No ascent step moves the iterate: numerically stationary.
      r.point = fq >= best_f ? q : best_q;
      r.value = std::max(fq, best_f);
      r.iterations = it;
      r.converged = true;
      return r;
    }
    if (fq > best_f + kValueNoise * std::max(1.0, std::abs(best_f))) {
      stalled = 0;
    } else if (!g.gradient && ++stalled >= kStallWindow) {
      // Finite-difference gradients: only noise-level gains for a long stretch.
      r.point = fq >= best_f ? q : best_q;
      r.value = std::max(fq, best_f);
      r.iterations = it + 1;
      r.converged = true;
      return r;
    }
    if (fq > best_f) {
      best_f = fq;
      best_q = q;
    }
    recent.push_back(fq);
    if (recent.size() > kNonmonotoneWindow) {
      recent.erase(recent.begin());
    }
    gw_prev = gw;
    compute_gw();
    // Barzilai-Borwein step for the next trial.
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = q[i] - q_prev[i];
      const double y = gw[i] - gw_prev[i];
      ss += weights[i] * s * s;
      sy += weights[i] * s * y;
    }
    eta = (sy < 0.0 && std::isfinite(ss / -sy)) ? std::clamp(ss / -sy, 1e-12, 1e12) : 1.0;
  }
  SolveReport best{best_q, best_f, max_iterations, false, true};
  throw ConvergenceError("simplex_max did not converge in " + std::to_string(max_iterations) +
                             " iterations",
                         std::move(best));
}

} // namespace orlicz_risk::solvers
