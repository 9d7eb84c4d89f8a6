#include "orlicz_risk/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "orlicz_risk/errors.hpp"
#include "orlicz_risk/solvers.hpp"

namespace orlicz_risk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBracketCap = 200;

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw StructuralError("conditional norms require finite-valued variables");
    }
    m = std::max(m, std::abs(v));
  }
  return m;
}

// phi(t), with t at or past the finite threshold read as the left limit.
double phi_left_clamped(const YoungFn& phi, double t) {
  return t >= phi.finite_sup() ? phi.edge_value() : phi(t);
}

// sum_i w_i phi(|x_i| * scale); `at_edge` reads the boundary as a left limit.
double modular(std::span<const double> x, std::span<const double> w, const YoungFn& phi,
               double scale, bool at_edge) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::abs(x[i]) * scale;
    const double v = at_edge ? phi_left_clamped(phi, t) : phi(t);
    acc = ext_add(acc, ext_mul(w[i], v));
  }
  return acc;
}

void require_atom_shape(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size() || x.empty()) {
    throw StructuralError("atom values and weights must be nonempty and of equal length");
  }
}

template <class AtomSolver>
CondNorm per_atom_norm(const RandomVar& x, const SubAlgebra& F, const YoungFn& phi,
                       Parallelism mode, NormMethod method, AtomSolver solve) {
  const auto& space = *x.space();
  require_compatible(space, F);
  std::vector<AtomNorm> results(F.n_atoms());
  for_each_atom(F.n_atoms(), mode, [&](std::size_t k) {
    const auto values = restrict_to_atom(x, F, k);
    const auto weights = atom_weights(space, F, k);
    results[k] = solve(values, weights, phi);
  });
  std::vector<double> vals(F.n_atoms());
  std::vector<bool> attained(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    vals[k] = results[k].value;
    attained[k] = results[k].attained;
  }
  return CondNorm{broadcast(x.space(), F, vals), method, kNormRelTol, std::move(attained)};
}

} // namespace

AtomNorm luxemburg_on_atom(std::span<const double> x, std::span<const double> w,
                           const YoungFn& phi) {
  require_atom_shape(x, w);
  const double m = max_abs(x);
  if (m == 0.0) {
    return {0.0, true};
  }
  const auto mod = [&](double lambda) { return modular(x, w, phi, 1.0 / lambda, false); };
  const double fs = phi.finite_sup();

  double lo = 0.0;
  if (std::isfinite(fs)) {
    // Below m / fs the modular is infinite; at m / fs it equals its left limit.
    const double breakpoint = m / fs;
    if (modular(x, w, phi, 1.0 / breakpoint, true) <= 1.0) {
      return {breakpoint, mod(breakpoint) <= 1.0};
    }
    lo = breakpoint;
  } else {
    double t_star = 1.0;
    for (std::size_t k = 0; phi(t_star) < 1.0; ++k) {
      if (k == kBracketCap) {
        throw DivergenceError("Young function never reaches 1: " + phi.label());
      }
      t_star *= 2.0;
    }
    lo = m / t_star;
    for (std::size_t k = 0; mod(lo) <= 1.0; ++k) {
      if (k == kBracketCap) {
        throw DivergenceError("Luxemburg bracket: modular stays <= 1 as lambda shrinks");
      }
      lo *= 0.5;
    }
  }
  double t0 = 1.0;
  for (std::size_t k = 0; phi(t0) > 1.0; ++k) {
    if (k == kBracketCap) {
      throw DivergenceError("Young function exceeds 1 arbitrarily close to 0: " + phi.label());
    }
    t0 *= 0.5;
  }
  const double hi = std::max(m / t0, 2.0 * lo);
  try {
    const auto r = solvers::bisect_monotone(mod, 1.0, {lo, hi}, kNormRelTol);
    return {r.point.front(), true};
  } catch (const NoBracketError& e) {
    throw DivergenceError(std::string("Luxemburg modular never drops to 1: ") + e.what());
  }
}

AtomNorm amemiya_on_atom(std::span<const double> x, std::span<const double> w,
                         const YoungFn& phi) {
  require_atom_shape(x, w);
  const double m = max_abs(x);
  if (m == 0.0) {
    return {0.0, true};
  }
  const double lux = luxemburg_on_atom(x, w, phi).value;
  const auto objective = [&](double u) {
    const double lambda = std::exp(u);
    return ext_add(1.0, modular(x, w, phi, lambda, false)) / lambda;
  };
  // objective(lambda) >= 1/lambda, and the minimum is at most 2 * lux, so
  // nothing below lambda = 1 / (2 lux) can win.
  const double u_lo = -std::log(2.0 * lux) - 0.01;
  const solvers::GoldenOptions opts{.rel_tol = kNormRelTol, .abs_tol = 1e-11};
  const double fs = phi.finite_sup();
  if (std::isfinite(fs)) {
    const double lambda_edge = fs / m;
    const double u_hi = std::log(lambda_edge);
    const auto inner = solvers::golden_min(objective, {u_lo, u_hi}, opts);
    const double edge =
        ext_add(1.0, modular(x, w, phi, lambda_edge, true)) / lambda_edge;
    if (edge <= inner.value) {
      return {edge, objective(u_hi) <= edge};
    }
    return {inner.value, true};
  }
  auto expanding = opts;
  expanding.expand_right = true;
  const auto r = solvers::golden_min(objective, {u_lo, -std::log(lux) + 1.0}, expanding);
  return {r.value, r.attained};
}

CondNorm luxemburg_norm(const RandomVar& x, const SubAlgebra& F, const YoungFn& phi,
                        Parallelism mode) {
  return per_atom_norm(x, F, phi, mode, NormMethod::luxemburg, luxemburg_on_atom);
}

CondNorm amemiya_norm(const RandomVar& x, const SubAlgebra& F, const YoungFn& phi,
                      Parallelism mode) {
  return per_atom_norm(x, F, phi, mode, NormMethod::amemiya, amemiya_on_atom);
}

RandomVar pairing(const RandomVar& x, const RandomVar& y, const SubAlgebra& F) {
  return cond_expectation(x * y, F);
}

CondNorm pairing_operator_norm(const RandomVar& y, const SubAlgebra& F, const YoungFn& phi,
                               Parallelism mode) {
  const YoungFn dual = conjugate_fn(phi);
  return per_atom_norm(y, F, dual, mode, NormMethod::amemiya, amemiya_on_atom);
}

namespace {

double scale_of(const RandomVar& v) {
  double s = 1.0;
  for (double e : v.values()) {
    s = std::max(s, std::abs(e));
  }
  return s;
}

bool close(const RandomVar& a, const RandomVar& b, double rel) {
  const double s = std::max(scale_of(a), scale_of(b));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= rel * s)) {
      return false;
    }
  }
  return true;
}

RandomVar checked_call(const LinearFunctional& mu, const RandomVar& x) {
  RandomVar out = mu(x);
  if (out.size() != x.size()) {
    throw StructuralError("functional returned a variable of the wrong dimension");
  }
  return out;
}

} // namespace

RandomVar recover_density(const LinearFunctional& mu, const SpacePtr& space, const SubAlgebra& F,
                          std::uint64_t seed, std::size_t probes) {
  require_compatible(*space, F);
  constexpr double kProbeTol = 1e-9;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const std::size_t n = space->size();
  auto random_var = [&] {
    std::vector<double> v(n);
    for (double& e : v) {
      e = unif(rng);
    }
    return RandomVar(space, std::move(v));
  };

  for (std::size_t p = 0; p < probes; ++p) {
    const RandomVar x1 = random_var();
    const RandomVar x2 = random_var();
    const double a = unif(rng);
    const double b = unif(rng);
    const RandomVar lhs = checked_call(mu, a * x1 + b * x2);
    const RandomVar rhs = a * checked_call(mu, x1) + b * checked_call(mu, x2);
    if (!close(lhs, rhs, kProbeTol)) {
      throw ContractError("linearity probe " + std::to_string(p) + " failed");
    }
    const RandomVar fx = checked_call(mu, x1);
    for (std::size_t k = 0; k < F.n_atoms(); ++k) {
      const auto& atom = F.atom(k);
      for (std::size_t i : atom) {
        if (std::abs(fx[i] - fx[atom.front()]) > kProbeTol * scale_of(fx)) {
          throw ContractError("measurability probe " + std::to_string(p) +
                              ": output not constant on atom " + std::to_string(k));
        }
      }
      const RandomVar ind = RandomVar::indicator(space, atom);
      const RandomVar local = checked_call(mu, ind * x1);
      for (std::size_t i : atom) {
        if (std::abs(local[i] - fx[i]) > kProbeTol * std::max(scale_of(fx), scale_of(local))) {
          throw ContractError("locality probe " + std::to_string(p) + " failed on atom " +
                              std::to_string(k));
        }
      }
    }
  }

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t idx[] = {i};
    const RandomVar basis = RandomVar::indicator(space, idx);
    const double response = checked_call(mu, basis)[i];
    y[i] = response * atom_prob(*space, F, F.atom_of(i)) / space->prob(i);
  }
  RandomVar density(space, std::move(y));

  for (std::size_t p = 0; p < probes; ++p) {
    const RandomVar x = random_var();
    if (!close(checked_call(mu, x), pairing(x, density, F), kProbeTol)) {
      throw ContractError("reproduction probe " + std::to_string(p) +
                          ": recovered density does not represent the functional");
    }
  }
  return density;
}

} // namespace orlicz_risk
