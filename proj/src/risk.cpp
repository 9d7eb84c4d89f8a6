#include "orlicz_risk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "orlicz_risk/errors.hpp"
#include "orlicz_risk/sampling.hpp"

namespace orlicz_risk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogFloor = 1e-300;

std::string atom_list(const std::vector<std::size_t>& atoms) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    os << (i ? "," : "") << atoms[i];
  }
  os << '}';
  return os.str();
}

RandomVar per_atom_map(const RandomVar& x, const SubAlgebra& F,
                       const std::function<double(std::span<const double>,
                                                  std::span<const double>, std::size_t)>& fn) {
  const auto& space = x.space();
  require_compatible(*space, F);
  std::vector<double> out(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    const auto vals = restrict_to_atom(x, F, k);
    std::vector<double> p(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) {
      p[j] = space->prob(F.atom(k)[j]);
    }
    out[k] = fn(vals, p, k);
  }
  return broadcast(space, F, out);
}

void require_finite(const RandomVar& x, const char* who) {
  if (!x.is_finite()) {
    throw StructuralError(std::string(who) + " requires a finite-valued position");
  }
}

bool atom_feasible(std::span<const double> y, std::span<const double> w) {
  double mean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] <= kSignTol)) {
      return false;
    }
    mean += w[i] * y[i];
  }
  return std::abs(mean + 1.0) <= kConstraintTol;
}

RandomVar values_on_atom(const SpacePtr& space, const SubAlgebra& F, std::size_t k,
                         std::span<const double> v, double fill) {
  std::vector<double> out(space->size(), fill);
  const auto& atom = F.atom(k);
  for (std::size_t j = 0; j < atom.size(); ++j) {
    out[atom[j]] = v[j];
  }
  return RandomVar(space, std::move(out));
}

double max_abs_diff(const RandomVar& a, const RandomVar& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = (a[i] == b[i]) ? 0.0 : std::abs(a[i] - b[i]);
    d = std::max(d, std::isnan(e) ? kInf : e);
  }
  return d;
}

void require_admissible(const CondRiskMeasure& rho, const SpacePtr& space, const SubAlgebra& F,
                        const ConjugateOptions& opts) {
  const AxiomReport axioms = check_axioms(rho, space, F, opts.axiom_trials, opts.seed);
  if (!axioms.pass()) {
    std::string which = !axioms.monotonicity.pass      ? axioms.monotonicity.detail
                        : !axioms.cash_invariance.pass ? axioms.cash_invariance.detail
                        : !axioms.convexity.pass       ? axioms.convexity.detail
                                                       : axioms.measurability.detail;
    throw ContractError("risk measure '" + rho.label() +
                        "' fails the axiom checks required for conjugation: " + which);
  }
  const LocalMap f = [&](const RandomVar& x) { return rho.evaluate(x, F); };
  const CheckResult local = locality_check(f, space, F, opts.axiom_trials, opts.seed + 1);
  if (!local.pass) {
    throw ContractError("risk measure '" + rho.label() + "' is not local: " + local.detail);
  }
}

// Penalty rho*(-q) on atom k for q on the weighted simplex, without the
// closed form: sup over x supported on the atom.
double numeric_penalty_on_atom(const CondRiskMeasure& rho, const SpacePtr& space,
                               const SubAlgebra& F, std::size_t k, std::span<const double> q) {
  std::vector<double> y(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    y[j] = -q[j];
  }
  const RandomVar yv = values_on_atom(space, F, k, y, -1.0);
  return numeric_conjugate_on_atom(rho, yv, F, k).value;
}

} // namespace

std::string to_string(RiskTag tag) {
  switch (tag) {
  case RiskTag::entropic:
    return "entropic";
  case RiskTag::worst_case:
    return "worst_case";
  case RiskTag::linear:
    return "linear";
  case RiskTag::custom:
    return "custom";
  }
  return "unknown";
}

CondRiskMeasure::CondRiskMeasure(Evaluator evaluate, std::optional<AtomPenalty> penalty,
                                 RiskTag tag, std::string label)
    : evaluate_(std::move(evaluate)), penalty_(std::move(penalty)), tag_(tag),
      label_(std::move(label)) {
  if (!evaluate_) {
    throw StructuralError("risk measure needs an evaluator");
  }
}

RandomVar CondRiskMeasure::evaluate(const RandomVar& x, const SubAlgebra& F) const {
  require_compatible(*x.space(), F);
  RandomVar out = evaluate_(x, F);
  if (out.size() != x.size()) {
    throw StructuralError("risk measure '" + label_ + "' returned a variable of wrong dimension");
  }
  return out;
}

RandomVar CondRiskMeasure::conjugate_closed_form(const RandomVar& y, const SubAlgebra& F) const {
  if (!penalty_) {
    throw ContractError("risk measure '" + label_ + "' has no closed-form conjugate");
  }
  const AtomPenalty& pen = *penalty_;
  return per_atom_map(y, F, [&](std::span<const double> yv, std::span<const double> p,
                                std::size_t) {
    double pa = 0.0;
    for (double e : p) {
      pa += e;
    }
    std::vector<double> w(p.size()), q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      w[i] = p[i] / pa;
      q[i] = std::max(0.0, -yv[i]);
    }
    if (!atom_feasible(yv, w)) {
      return kInf;
    }
    return pen.value(q, w);
  });
}

std::vector<bool> dual_feasible(const RandomVar& y, const SubAlgebra& F) {
  require_compatible(*y.space(), F);
  std::vector<bool> out(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    const auto w = atom_weights(*y.space(), F, k);
    out[k] = atom_feasible(restrict_to_atom(y, F, k), w);
  }
  return out;
}

CondRiskMeasure entropic(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("entropic risk needs gamma > 0");
  }
  auto eval = [gamma](const RandomVar& x, const SubAlgebra& F) {
    require_finite(x, "entropic risk");
    return per_atom_map(x, F, [gamma](std::span<const double> v, std::span<const double> p,
                                      std::size_t) {
      const double m = *std::min_element(v.begin(), v.end());
      double s = 0.0;
      double pa = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        s += p[i] * std::exp(-gamma * (v[i] - m));
        pa += p[i];
      }
      return (std::log(s) - std::log(pa)) / gamma - m + 0.0;
    });
  };
  AtomPenalty pen;
  pen.value = [gamma](std::span<const double> q, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] > 0.0) {
        acc += w[i] * q[i] * std::log(q[i]);
      }
    }
    return acc / gamma;
  };
  pen.gradient = [gamma](std::span<const double> q, std::span<const double> w,
                         std::span<double> out) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      out[i] = w[i] * (std::log(std::max(q[i], kLogFloor)) + 1.0) / gamma;
    }
  };
  std::ostringstream label;
  label << "entropic(gamma=" << gamma << ")";
  return CondRiskMeasure(eval, pen, RiskTag::entropic, label.str());
}

CondRiskMeasure worst_case() {
  auto eval = [](const RandomVar& x, const SubAlgebra& F) {
    require_finite(x, "worst-case risk");
    return ess_sup_cond(-x, F);
  };
  AtomPenalty pen;
  pen.value = [](std::span<const double>, std::span<const double>) { return 0.0; };
  pen.gradient = [](std::span<const double>, std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  pen.vanishes_on_simplex = true;
  return CondRiskMeasure(eval, pen, RiskTag::worst_case, "worst_case");
}

CondRiskMeasure linear_risk() {
  auto eval = [](const RandomVar& x, const SubAlgebra& F) {
    require_finite(x, "linear risk");
    return cond_expectation(-x, F);
  };
  AtomPenalty pen;
  pen.value = [](std::span<const double> q, std::span<const double>) {
    for (double e : q) {
      if (std::abs(e - 1.0) > kConstraintTol) {
        return kInf;
      }
    }
    return 0.0;
  };
  pen.singleton_domain = true;
  return CondRiskMeasure(eval, pen, RiskTag::linear, "linear");
}

CondRiskMeasure custom_risk(CondRiskMeasure::Evaluator evaluate, std::string label) {
  return CondRiskMeasure(std::move(evaluate), std::nullopt, RiskTag::custom, std::move(label));
}

solvers::SolveReport numeric_conjugate_on_atom(const CondRiskMeasure& rho, const RandomVar& y,
                                               const SubAlgebra& F, std::size_t k) {
  const SpacePtr& space = y.space();
  require_compatible(*space, F);
  const auto yv = restrict_to_atom(y, F, k);
  const auto w = atom_weights(*space, F, k);
  const std::size_t rep = F.atom(k).front();
  const solvers::VectorFn objective = [&](std::span<const double> v) {
    double pair = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      pair += w[i] * v[i] * yv[i];
    }
    const RandomVar x = values_on_atom(space, F, k, v, 0.0);
    return pair - rho.evaluate(x, F)[rep];
  };
  return solvers::coordinate_ascent(objective, std::vector<double>(yv.size(), 0.0));
}

RandomVar fenchel_conjugate(const CondRiskMeasure& rho, const RandomVar& y, const SubAlgebra& F,
                            const ConjugateOptions& opts) {
  require_compatible(*y.space(), F);
  if (rho.has_closed_form_conjugate()) {
    return rho.conjugate_closed_form(y, F);
  }
  require_admissible(rho, y.space(), F, opts);
  const auto feasible = dual_feasible(y, F);
  std::vector<double> out(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    out[k] = feasible[k] ? numeric_conjugate_on_atom(rho, y, F, k).value : kInf;
  }
  return broadcast(y.space(), F, out);
}

DualCertificate robust_representation(const CondRiskMeasure& rho, const RandomVar& x,
                                      const SubAlgebra& F, const DualOptions& opts) {
  const SpacePtr& space = x.space();
  require_compatible(*space, F);
  require_finite(x, "robust representation");
  if (!rho.has_closed_form_conjugate()) {
    require_admissible(rho, space, F, {});
  }
  const std::size_t K = F.n_atoms();
  std::vector<solvers::SolveReport> reports(K);
  std::vector<std::string> failures(K);
  for_each_atom(K, opts.mode, [&](std::size_t k) {
    const auto xv = restrict_to_atom(x, F, k);
    const auto w = atom_weights(*space, F, k);
    const std::size_t n = xv.size();
    const auto& pen = rho.atom_penalty();
    if (pen && pen->singleton_domain) {
      solvers::SolveReport r;
      r.point.assign(n, 1.0);
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v -= w[i] * xv[i];
      }
      r.value = v - pen->value(r.point, w);
      r.converged = true;
      reports[k] = std::move(r);
      return;
    }
    solvers::SimplexObjective g;
    g.linear = pen && pen->vanishes_on_simplex;
    g.value = [&](std::span<const double> q) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v -= w[i] * xv[i] * q[i];
      }
      const double p = pen ? pen->value(q, w) : numeric_penalty_on_atom(rho, space, F, k, q);
      return v - p;
    };
    if (pen && pen->gradient) {
      g.gradient = [&](std::span<const double> q, std::span<double> out) {
        pen->gradient(q, w, out);
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = -w[i] * xv[i] - out[i];
        }
      };
    }
    try {
      reports[k] = solvers::simplex_max(g, w, opts.rel_tol);
    } catch (const solvers::ConvergenceError& e) {
      reports[k] = e.best();
      failures[k] = e.what();
    }
  });

  std::vector<double> y(space->size());
  for (std::size_t k = 0; k < K; ++k) {
    const auto& atom = F.atom(k);
    for (std::size_t j = 0; j < atom.size(); ++j) {
      y[atom[j]] = -reports[k].point[j];
    }
  }
  DualCertificate cert{RandomVar(space, std::move(y)), RandomVar::zeros(space),
                       RandomVar::zeros(space), RandomVar::zeros(space),
                       RandomVar::zeros(space), std::move(reports)};
  cert.penalty = fenchel_conjugate(rho, cert.y, F);
  cert.risk = rho.evaluate(x, F);
  std::vector<double> dual(K), gap(K);
  const auto pairing = per_atom_values(cond_expectation(x * cert.y, F), F);
  const auto pen = per_atom_values(cert.penalty, F);
  const auto risk = per_atom_values(cert.risk, F);
  for (std::size_t k = 0; k < K; ++k) {
    dual[k] = pairing[k] - pen[k];
    gap[k] = risk[k] - dual[k];
  }
  cert.dual_value = broadcast(space, F, dual);
  cert.gap = broadcast(space, F, gap);
  for (std::size_t k = 0; k < K; ++k) {
    if (!failures[k].empty()) {
      throw DualConvergenceError("dual solve on atom " + std::to_string(k) + ": " + failures[k],
                                 std::move(cert));
    }
  }
  return cert;
}

AttainmentReport attainment_check(const CondRiskMeasure& rho, const RandomVar& x,
                                  const SubAlgebra& F, const DualOptions& opts) {
  DualCertificate cert = robust_representation(rho, x, F, opts);
  const RandomVar recomputed = cond_expectation(x * cert.y, F) - fenchel_conjugate(rho, cert.y, F);
  CheckResult check{.name = "attainment", .allowed = kGapTol};
  const auto lhs = per_atom_values(cert.risk, F);
  const auto rhs = per_atom_values(recomputed, F);
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    check.record(std::abs(lhs[k] - rhs[k]), "atom " + std::to_string(k));
  }
  return AttainmentReport{
      std::move(check), std::move(cert), recomputed,
      "finite space: the feasible densities of each atom form a compact simplex, so a continuous "
      "risk measure attains its dual supremum"};
}

LebesgueReport lebesgue_check(const CondRiskMeasure& rho, const SpacePtr& space,
                              const SubAlgebra& F, std::size_t trials, std::uint64_t seed,
                              double tail_index) {
  require_compatible(*space, F);
  sampling::Rng rng(seed);
  LebesgueReport rep;
  rep.tail = CheckResult{.name = "lebesgue_tail", .allowed = 1e-6};
  rep.rate = CheckResult{.name = "lebesgue_rate", .allowed = kIdentityTol};
  std::vector<double> grid;
  for (double n = 1.0; n < tail_index; n *= 10.0) {
    grid.push_back(n);
  }
  grid.push_back(tail_index);
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomVar x = sampling::uniform_var(rng, space, -2.0, 2.0);
    const RandomVar z = sampling::uniform_var(rng, space, -1.0, 1.0);
    double zmax = 0.0;
    for (double e : z.values()) {
      zmax = std::max(zmax, std::abs(e));
    }
    const RandomVar base = rho.evaluate(x, F);
    const std::string tag = "trial " + std::to_string(t);
    rep.tail.record(max_abs_diff(rho.evaluate(x + (1.0 / (tail_index * tail_index)) * z, F), base),
                    tag);
    double harmonic_tail = 0.0;
    for (double n : grid) {
      const double dev = max_abs_diff(rho.evaluate(x + (1.0 / n) * z, F), base);
      rep.rate.record(n * dev - zmax, tag + ", n=" + std::to_string(static_cast<long long>(n)));
      harmonic_tail = dev;
    }
    rep.harmonic_tail_deviation.push_back(harmonic_tail);
  }
  return rep;
}

double ScalarizedRisk::evaluate(const RandomVar& x) const {
  return expectation(rho_.evaluate(x, F_));
}

double ScalarizedRisk::conjugate_definitional(const RandomVar& y) const {
  const SpacePtr& space = y.space();
  require_compatible(*space, F_);
  const solvers::VectorFn objective = [&](std::span<const double> v) {
    const RandomVar x(space, std::vector<double>(v.begin(), v.end()));
    return expectation(x * y) - evaluate(x);
  };
  return solvers::coordinate_ascent(objective, std::vector<double>(space->size(), 0.0)).value;
}

double ScalarizedRisk::conjugate_via_conditional(const RandomVar& y) const {
  const RandomVar c = fenchel_conjugate(rho_, y, F_);
  if (!c.is_finite()) {
    return kInf;
  }
  return expectation(c);
}

ScalarizedRisk scalarize(const CondRiskMeasure& rho, const SubAlgebra& F) {
  return ScalarizedRisk(rho, F);
}

CheckResult scalarization_check(const CondRiskMeasure& rho, const SubAlgebra& F,
                                std::span<const RandomVar> ys) {
  const ScalarizedRisk rho0 = scalarize(rho, F);
  CheckResult check{.name = "scalarization", .allowed = kGapTol};
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double a = rho0.conjugate_definitional(ys[i]);
    const double b = rho0.conjugate_via_conditional(ys[i]);
    const double dev = (a == b) ? 0.0 : std::abs(a - b);
    check.record(std::isnan(dev) ? kInf : dev, "y #" + std::to_string(i));
  }
  return check;
}

CheckResult locality_check(const LocalMap& f, const SpacePtr& space, const SubAlgebra& F,
                           std::size_t trials, std::uint64_t seed) {
  require_compatible(*space, F);
  sampling::Rng rng(seed);
  const std::size_t K = F.n_atoms();
  std::vector<std::vector<std::size_t>> masks;
  if (K <= 10) {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << K); ++m) {
      std::vector<std::size_t> atoms;
      for (std::size_t k = 0; k < K; ++k) {
        if (m >> k & 1U) {
          atoms.push_back(k);
        }
      }
      masks.push_back(std::move(atoms));
    }
  } else {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < K; ++k) {
      masks.push_back({k});
    }
    for (std::size_t r = 0; r < 64; ++r) {
      std::vector<std::size_t> atoms;
      for (std::size_t k = 0; k < K; ++k) {
        if (coin(rng)) {
          atoms.push_back(k);
        }
      }
      if (!atoms.empty()) {
        masks.push_back(std::move(atoms));
      }
    }
  }
  CheckResult check{.name = "locality", .allowed = kIdentityTol};
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomVar x = sampling::uniform_var(rng, space, -2.0, 2.0);
    const RandomVar fx = f(x);
    for (const auto& atoms : masks) {
      std::vector<std::size_t> outcomes;
      for (std::size_t k : atoms) {
        outcomes.insert(outcomes.end(), F.atom(k).begin(), F.atom(k).end());
      }
      const RandomVar ind = RandomVar::indicator(space, outcomes);
      const RandomVar local = f(ind * x);
      double dev = 0.0;
      for (std::size_t i : outcomes) {
        const double e = (local[i] == fx[i]) ? 0.0 : std::abs(local[i] - fx[i]);
        dev = std::max(dev, std::isnan(e) ? kInf : e);
      }
      check.record(dev, "trial " + std::to_string(t) + ", A = atoms " + atom_list(atoms));
    }
  }
  return check;
}

CheckResult extension_check(const CondRiskMeasure& rho, const SpacePtr& space,
                            const SubAlgebra& F, const SubAlgebra& partition, std::size_t trials,
                            std::uint64_t seed) {
  require_compatible(*space, F);
  require_compatible(*space, partition);
  if (!partition.is_coarser_than(F)) {
    throw StructuralError("extension check: partition pieces must be F-measurable");
  }
  sampling::Rng rng(seed);
  CheckResult check{.name = "extension", .allowed = kIdentityTol};
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<RandomVar> pieces;
    std::vector<RandomVar> risks;
    for (std::size_t k = 0; k < partition.n_atoms(); ++k) {
      pieces.push_back(sampling::uniform_var(rng, space, -2.0, 2.0));
      risks.push_back(rho.evaluate(pieces.back(), F));
    }
    const RandomVar glued = rho.evaluate(concatenate(pieces, partition), F);
    check.record(max_abs_diff(glued, concatenate(risks, partition)), "trial " + std::to_string(t));
  }
  return check;
}

PenaltyBoundReport penalty_bound_check(const CondRiskMeasure& rho, const RandomVar& x,
                                       const RandomVar& y, const RandomVar& beta,
                                       const SubAlgebra& F) {
  const SpacePtr& space = x.space();
  require_compatible(*space, F);
  require_same_space(x, y);
  require_same_space(x, beta);
  if (!is_measurable(beta, F)) {
    throw StructuralError("penalty bound: beta must be F-measurable");
  }
  const auto rho0 = per_atom_values(rho.evaluate(RandomVar::zeros(space), F), F);
  const auto pen = per_atom_values(fenchel_conjugate(rho, y, F), F);
  const auto pair = per_atom_values(cond_expectation(x * y, F), F);
  const auto tail = per_atom_values(rho.evaluate(-2.0 * x.abs(), F), F);
  const auto b = per_atom_values(beta, F);
  PenaltyBoundReport rep;
  rep.check = CheckResult{.name = "penalty_bound", .allowed = kInequalityTol};
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    // Normalized measure rho - rho(0) has conjugate rho* + rho(0).
    const double pen_n = pen[k] + rho0[k];
    const double tail_n = tail[k] - rho0[k];
    if (!(pair[k] - pen_n >= -b[k])) {
      ++rep.atoms_excluded;
      continue;
    }
    ++rep.atoms_checked;
    rep.check.record(pen_n - (2.0 * b[k] + 2.0 * tail_n), "atom " + std::to_string(k));
  }
  return rep;
}

OrderContinuityReport uniform_order_continuity_check(
    std::span<const RandomVar> C, const SubAlgebra& F,
    const std::function<RandomVar(double n)>& u, double n_max, double tail_tol) {
  if (!(n_max >= 1.0)) {
    throw ParameterError("order continuity: n_max must be at least 1");
  }
  OrderContinuityReport rep;
  rep.check = CheckResult{.name = "uniform_order_continuity", .allowed = tail_tol};
  for (double n = 1.0; n < n_max; n *= 2.0) {
    rep.sampled_n.push_back(n);
  }
  rep.sampled_n.push_back(n_max);
  std::optional<RandomVar> prev;
  for (double n : rep.sampled_n) {
    const RandomVar un = u(n);
    require_compatible(*un.space(), F);
    for (std::size_t i = 0; i < un.size(); ++i) {
      if (!(un[i] >= 0.0) || !std::isfinite(un[i])) {
        throw ContractError("order continuity: u_n must be finite and nonnegative");
      }
      if (prev && un[i] > (*prev)[i]) {
        throw ContractError("order continuity: u_n is not nonincreasing at outcome " +
                            std::to_string(i) + ", n=" + std::to_string(n));
      }
    }
    double s = 0.0;
    for (const RandomVar& z : C) {
      require_same_space(un, z);
      const RandomVar e = cond_expectation((un * z).abs(), F);
      for (double v : e.values()) {
        s = std::max(s, v);
      }
    }
    rep.s_values.push_back(s);
    prev = un;
  }
  rep.check.record(rep.s_values.back(), "n=" + std::to_string(n_max));
  return rep;
}

AxiomReport check_axioms(const CondRiskMeasure& rho, const SpacePtr& space, const SubAlgebra& F,
                         std::size_t trials, std::uint64_t seed) {
  require_compatible(*space, F);
  sampling::Rng rng(seed);
  AxiomReport rep;
  rep.monotonicity = CheckResult{.name = "monotonicity", .allowed = kIdentityTol};
  rep.cash_invariance = CheckResult{.name = "cash_invariance", .allowed = kIdentityTol};
  rep.convexity = CheckResult{.name = "convexity", .allowed = kIdentityTol};
  rep.measurability = CheckResult{.name = "measurability", .allowed = 0.0};
  const RandomVar r0 = rho.evaluate(RandomVar::zeros(space), F);
  for (double v : r0.values()) {
    rep.rho_at_zero_max_abs = std::max(rep.rho_at_zero_max_abs, std::abs(v));
  }
  auto spread = [&](const RandomVar& v) {
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double e = std::abs(v[i] - v[F.atom(F.atom_of(i)).front()]);
      d = std::max(d, std::isnan(e) ? kInf : e);
    }
    return d;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const std::string tag = "trial " + std::to_string(t);
    const RandomVar x = sampling::uniform_var(rng, space, -2.0, 2.0);
    const RandomVar bump = sampling::uniform_var(rng, space, 0.0, 1.0);
    const RandomVar y = x + bump;
    const RandomVar m = sampling::uniform_measurable(rng, space, F, -3.0, 3.0);
    const RandomVar lam = sampling::uniform_measurable(rng, space, F, 0.0, 1.0);
    const RandomVar other = sampling::uniform_var(rng, space, -2.0, 2.0);
    const RandomVar rx = rho.evaluate(x, F);
    const RandomVar ry = rho.evaluate(y, F);
    const RandomVar rxm = rho.evaluate(x + m, F);
    const RandomVar ro = rho.evaluate(other, F);
    const RandomVar one_minus = RandomVar::constant(space, 1.0) - lam;
    const RandomVar rmix = rho.evaluate(lam * x + one_minus * other, F);
    double mono = 0.0, cash = 0.0, conv = -kInf;
    for (std::size_t i = 0; i < space->size(); ++i) {
      mono = std::max(mono, ry[i] - rx[i]);
      cash = std::max(cash, std::abs(rxm[i] - (rx[i] - m[i])));
      conv = std::max(conv, rmix[i] - (lam[i] * rx[i] + one_minus[i] * ro[i]));
    }
    rep.monotonicity.record(mono, tag);
    rep.cash_invariance.record(cash, tag);
    rep.convexity.record(conv, tag);
    rep.measurability.record(std::max({spread(rx), spread(ry), spread(rmix)}), tag);
  }
  return rep;
}

DynamicRiskMeasure::DynamicRiskMeasure(Filtration filtration,
                                       std::vector<CondRiskMeasure> measures)
    : filtration_(std::move(filtration)), measures_(std::move(measures)) {
  if (filtration_.size() != measures_.size()) {
    throw StructuralError("dynamic risk measure: " + std::to_string(measures_.size()) +
                          " measures for " + std::to_string(filtration_.size()) + " stages");
  }
}

std::vector<RandomVar> dynamic_evaluate(const DynamicRiskMeasure& D, const RandomVar& x) {
  require_finite(x, "dynamic evaluation");
  std::vector<RandomVar> out;
  for (std::size_t t = 0; t < D.filtration().size(); ++t) {
    out.push_back(D.measures()[t].evaluate(x, D.filtration()[t]));
  }
  return out;
}

} // namespace orlicz_risk
