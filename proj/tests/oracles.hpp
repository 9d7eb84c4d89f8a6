#pragma once

// Reference computations used by the tests. None of these call the library's
// solvers; each is a closed form, a brute-force search or a plain bisection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec = std::vector<double>;
using Phi = std::function<double(double)>;

inline Vec normalized(const Vec& p) {
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  Vec w(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    w[i] = p[i] / s;
  }
  return w;
}

inline double max_abs(const Vec& x) {
  double m = 0.0;
  for (double v : x) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

/// E[|x|^p]^{1/p} under weights w.
inline double p_norm(const Vec& x, const Vec& w, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += w[i] * std::pow(std::abs(x[i]), p);
  }
  return std::pow(acc, 1.0 / p);
}

/// Amemiya norm under t^p: for p > 1 the minimizer of (1 + lambda^p m) / lambda
/// is lambda = ((p-1) m)^{-1/p}, giving p^{1/p} q^{1/q} ||x||_p. For p = 1 the
/// infimum is the limit E|x|.
inline double amemiya_power(const Vec& x, const Vec& w, double p) {
  const double lp = p_norm(x, w, p);
  if (p == 1.0) {
    return lp;
  }
  const double q = p / (p - 1.0);
  return std::pow(p, 1.0 / p) * std::pow(q, 1.0 / q) * lp;
}

inline double modular(const Vec& x, const Vec& w, const Phi& phi, double scale) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = phi(std::abs(x[i]) * scale);
    if (v == kInf) {
      return kInf;
    }
    acc += w[i] * v;
  }
  return acc;
}

/// Luxemburg norm by plain bisection on lambda over [0, hi] with 300 halvings.
/// `phi` may return +inf.
inline double luxemburg_bisect(const Vec& x, const Vec& w, const Phi& phi) {
  const double m = max_abs(x);
  if (m == 0.0) {
    return 0.0;
  }
  double hi = m;
  while (modular(x, w, phi, 1.0 / hi) > 1.0) {
    hi *= 2.0;
  }
  double lo = 0.0;
  for (int i = 0; i < 300 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (modular(x, w, phi, 1.0 / mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Amemiya norm by brute force: scan lambda on a log grid, then refine the
/// best cell with ternary search. `lambda_max` caps the scan.
inline double amemiya_scan(const Vec& x, const Vec& w, const Phi& phi, double lambda_max = 1e6) {
  const double m = max_abs(x);
  if (m == 0.0) {
    return 0.0;
  }
  auto f = [&](double u) {
    const double lambda = std::exp(u);
    const double mod = modular(x, w, phi, lambda);
    return mod == kInf ? kInf : (1.0 + mod) / lambda;
  };
  const double u0 = std::log(1e-6 / m);
  const double u1 = std::log(lambda_max);
  const int steps = 20000;
  const double h = (u1 - u0) / steps;
  int best = 0;
  double best_v = kInf;
  for (int i = 0; i <= steps; ++i) {
    const double v = f(u0 + i * h);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = u0 + (best - 1) * h;
  double b = u0 + (best + 1) * h;
  for (int i = 0; i < 200; ++i) {
    const double c = a + (b - a) / 3.0;
    const double d = b - (b - a) / 3.0;
    if (f(c) <= f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return std::min(best_v, f(0.5 * (a + b)));
}

/// (1/gamma) log E[exp(-gamma x)], computed directly without shifting.
inline double entropic(const Vec& x, const Vec& w, double gamma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += w[i] * std::exp(-gamma * x[i]);
  }
  return std::log(acc) / gamma;
}

/// Gibbs density q = exp(-gamma x) / E[exp(-gamma x)].
inline Vec gibbs(const Vec& x, const Vec& w, double gamma) {
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    z += w[i] * std::exp(-gamma * x[i]);
  }
  Vec q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    q[i] = std::exp(-gamma * x[i]) / z;
  }
  return q;
}

/// (1/gamma) E[q log q].
inline double relative_entropy(const Vec& q, const Vec& w, double gamma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) {
      acc += w[i] * q[i] * std::log(q[i]);
    }
  }
  return acc / gamma;
}

/// Maximum over the weighted simplex {q >= 0, sum w q = 1} by enumerating
/// the barycentric grid t = w q with step 1/denominator.
inline double simplex_grid_max(const std::function<double(const Vec&)>& g, const Vec& w,
                               int denominator, Vec* argmax = nullptr) {
  const std::size_t n = w.size();
  Vec t(n), q(n);
  double best = -kInf;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == n) {
      t[i] = static_cast<double>(left) / denominator;
      for (std::size_t j = 0; j < n; ++j) {
        q[j] = t[j] / w[j];
      }
      const double v = g(q);
      if (v > best) {
        best = v;
        if (argmax) {
          *argmax = q;
        }
      }
      return;
    }
    for (int k = 0; k <= left; ++k) {
      t[i] = static_cast<double>(k) / denominator;
      rec(i + 1, left - k);
    }
  };
  rec(0, denominator);
  return best;
}

/// Grid maximum with local refinement: coarse step 1/coarse over the whole
/// simplex, then step 1/fine on a box of half-width 2/coarse around the best
/// coarse point. Used where the full fine grid is too large.
inline double simplex_grid_max_refined(const std::function<double(const Vec&)>& g, const Vec& w,
                                       int coarse, int fine) {
  const std::size_t n = w.size();
  Vec best_q;
  double best = simplex_grid_max(g, w, coarse, &best_q);
  Vec center(n);
  for (std::size_t i = 0; i < n; ++i) {
    center[i] = best_q[i] * w[i];
  }
  const int radius = 2 * fine / coarse;
  Vec t(n), q(n);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double used) {
    if (i + 1 == n) {
      t[i] = 1.0 - used;
      if (t[i] < -1e-15 || std::abs(t[i] - center[i]) > radius / static_cast<double>(fine) + 1e-12) {
        return;
      }
      t[i] = std::max(t[i], 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        q[j] = t[j] / w[j];
      }
      best = std::max(best, g(q));
      return;
    }
    const int c = static_cast<int>(std::lround(center[i] * fine));
    for (int k = std::max(0, c - radius); k <= std::min(fine, c + radius); ++k) {
      t[i] = static_cast<double>(k) / fine;
      if (used + t[i] <= 1.0 + 1e-12) {
        rec(i + 1, used + t[i]);
      }
    }
  };
  rec(0, 0.0);
  return best;
}

/// sup_t (s t - phi(t)) on a dense grid over [0, t_max] followed by ternary
/// refinement.
inline double conjugate_scan(const Phi& phi, double s, double t_max) {
  auto f = [&](double t) {
    const double v = phi(t);
    return v == kInf ? -kInf : s * t - v;
  };
  const int steps = 200000;
  const double h = t_max / steps;
  int best = 0;
  double best_v = -kInf;
  for (int i = 0; i <= steps; ++i) {
    const double v = f(i * h);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1) * h);
  double b = std::min(t_max, (best + 1) * h);
  for (int i = 0; i < 200; ++i) {
    const double c = a + (b - a) / 3.0;
    const double d = b - (b - a) / 3.0;
    if (f(c) >= f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return std::max(best_v, f(0.5 * (a + b)));
}

/// Central finite-difference derivative.
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace oracle
