#include "orlicz_risk/prob_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "orlicz_risk/errors.hpp"

namespace orlicz_risk {

namespace {

constexpr double kProbSumTol = 1e-12;

std::string str(std::size_t v) { return std::to_string(v); }

} // namespace

FiniteProbSpace::FiniteProbSpace(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw ParameterError("probability space needs at least one outcome");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p <= 0.0) {
      throw ParameterError("outcome " + str(i) + " has non-positive or non-finite probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw ParameterError("probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

std::shared_ptr<const FiniteProbSpace> FiniteProbSpace::make(std::vector<double> probs) {
  return std::make_shared<const FiniteProbSpace>(std::move(probs));
}

std::shared_ptr<const FiniteProbSpace> FiniteProbSpace::uniform(std::size_t n) {
  if (n == 0) {
    throw ParameterError("probability space needs at least one outcome");
  }
  return make(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SubAlgebra::SubAlgebra(std::size_t n_outcomes, std::vector<std::vector<std::size_t>> atoms)
    : atoms_(std::move(atoms)), atom_of_(n_outcomes, n_outcomes) {
  for (auto& a : atoms_) {
    if (a.empty()) {
      throw StructuralError("sub-algebra has an empty atom");
    }
    std::sort(a.begin(), a.end());
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const auto& l, const auto& r) { return l.front() < r.front(); });
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    for (std::size_t i : atoms_[k]) {
      if (i >= n_outcomes) {
        throw StructuralError("atom references outcome " + str(i) + " outside [0, " +
                              str(n_outcomes) + ")");
      }
      if (atom_of_[i] != n_outcomes) {
        throw StructuralError("outcome " + str(i) + " appears in more than one atom");
      }
      atom_of_[i] = k;
    }
  }
  for (std::size_t i = 0; i < n_outcomes; ++i) {
    if (atom_of_[i] == n_outcomes) {
      throw StructuralError("outcome " + str(i) + " is not covered by any atom");
    }
  }
}

SubAlgebra SubAlgebra::trivial(std::size_t n) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return SubAlgebra(n, {std::move(all)});
}

SubAlgebra SubAlgebra::discrete(std::size_t n) {
  std::vector<std::vector<std::size_t>> atoms(n);
  for (std::size_t i = 0; i < n; ++i) {
    atoms[i] = {i};
  }
  return SubAlgebra(n, std::move(atoms));
}

bool SubAlgebra::is_coarser_than(const SubAlgebra& finer) const {
  if (finer.n_outcomes() != n_outcomes()) {
    return false;
  }
  // Coarser iff every fine atom sits inside a single coarse atom.
  for (const auto& fine_atom : finer.atoms()) {
    const std::size_t k = atom_of(fine_atom.front());
    for (std::size_t i : fine_atom) {
      if (atom_of(i) != k) {
        return false;
      }
    }
  }
  return true;
}

RandomVar::RandomVar(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) {
    throw StructuralError("random variable without a probability space");
  }
  if (values_.size() != space_->size()) {
    throw StructuralError("random variable has " + str(values_.size()) + " values, space has " +
                          str(space_->size()) + " outcomes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::isnan(values_[i])) {
      throw StructuralError("random variable value " + str(i) + " is NaN");
    }
  }
}

RandomVar RandomVar::constant(SpacePtr space, double c) {
  const std::size_t n = space ? space->size() : 0;
  return RandomVar(std::move(space), std::vector<double>(n, c));
}

RandomVar RandomVar::indicator(SpacePtr space, std::span<const std::size_t> outcomes) {
  const std::size_t n = space ? space->size() : 0;
  std::vector<double> v(n, 0.0);
  for (std::size_t i : outcomes) {
    v.at(i) = 1.0;
  }
  return RandomVar(std::move(space), std::move(v));
}

bool RandomVar::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RandomVar RandomVar::abs() const {
  std::vector<double> v(values_);
  for (double& e : v) {
    e = std::abs(e);
  }
  return RandomVar(space_, std::move(v));
}

RandomVar RandomVar::map(double (*fn)(double)) const {
  std::vector<double> v(values_);
  for (double& e : v) {
    e = fn(e);
  }
  return RandomVar(space_, std::move(v));
}

void require_same_space(const RandomVar& a, const RandomVar& b) {
  if (a.space() != b.space() && !(*a.space() == *b.space())) {
    throw StructuralError("random variables live on different probability spaces");
  }
}

namespace {

template <class Op>
RandomVar zip(const RandomVar& a, const RandomVar& b, Op op) {
  require_same_space(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = op(a[i], b[i]);
  }
  return RandomVar(a.space(), std::move(v));
}

} // namespace

RandomVar operator+(const RandomVar& a, const RandomVar& b) {
  return zip(a, b, [](double l, double r) { return l + r; });
}

RandomVar operator-(const RandomVar& a, const RandomVar& b) {
  return zip(a, b, [](double l, double r) { return l - r; });
}

RandomVar operator*(const RandomVar& a, const RandomVar& b) {
  return zip(a, b, [](double l, double r) { return l * r; });
}

RandomVar operator*(double c, const RandomVar& a) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& e : v) {
    e *= c;
  }
  return RandomVar(a.space(), std::move(v));
}

RandomVar operator+(const RandomVar& a, double c) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& e : v) {
    e += c;
  }
  return RandomVar(a.space(), std::move(v));
}

RandomVar operator-(const RandomVar& a) { return -1.0 * a; }

Filtration::Filtration(std::vector<SubAlgebra> stages) : stages_(std::move(stages)) {
  if (stages_.empty()) {
    throw StructuralError("filtration needs at least one stage");
  }
  for (std::size_t t = 1; t < stages_.size(); ++t) {
    if (!stages_[t - 1].is_coarser_than(stages_[t])) {
      throw StructuralError("filtration stage " + str(t) + " does not refine stage " +
                            str(t - 1));
    }
  }
}

void require_compatible(const FiniteProbSpace& space, const SubAlgebra& F) {
  if (space.size() != F.n_outcomes()) {
    throw StructuralError("sub-algebra covers " + str(F.n_outcomes()) +
                          " outcomes, space has " + str(space.size()));
  }
}

double atom_prob(const FiniteProbSpace& space, const SubAlgebra& F, std::size_t k) {
  double total = 0.0;
  for (std::size_t i : F.atom(k)) {
    total += space.prob(i);
  }
  return total;
}

std::vector<double> atom_weights(const FiniteProbSpace& space, const SubAlgebra& F, std::size_t k) {
  const double pa = atom_prob(space, F, k);
  std::vector<double> w;
  w.reserve(F.atom(k).size());
  for (std::size_t i : F.atom(k)) {
    w.push_back(space.prob(i) / pa);
  }
  return w;
}

std::vector<double> restrict_to_atom(const RandomVar& x, const SubAlgebra& F, std::size_t k) {
  std::vector<double> out;
  out.reserve(F.atom(k).size());
  for (std::size_t i : F.atom(k)) {
    out.push_back(x[i]);
  }
  return out;
}

RandomVar broadcast(SpacePtr space, const SubAlgebra& F, std::span<const double> per_atom) {
  require_compatible(*space, F);
  if (per_atom.size() != F.n_atoms()) {
    throw StructuralError("got " + str(per_atom.size()) + " atom values for " +
                          str(F.n_atoms()) + " atoms");
  }
  std::vector<double> v(F.n_outcomes());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = per_atom[F.atom_of(i)];
  }
  return RandomVar(std::move(space), std::move(v));
}

std::vector<double> per_atom_values(const RandomVar& x, const SubAlgebra& F) {
  require_compatible(*x.space(), F);
  std::vector<double> out(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    out[k] = x[F.atom(k).front()];
  }
  return out;
}

RandomVar cond_expectation(const RandomVar& x, const SubAlgebra& F) {
  const auto& space = *x.space();
  require_compatible(space, F);
  if (!x.is_finite()) {
    throw StructuralError("conditional expectation requires a finite-valued variable");
  }
  std::vector<double> means(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    double mass = 0.0;
    double acc = 0.0;
    for (std::size_t i : F.atom(k)) {
      mass += space.prob(i);
      acc += space.prob(i) * x[i];
    }
    means[k] = acc / mass;
  }
  return broadcast(x.space(), F, means);
}

namespace {

template <class Pick>
RandomVar per_atom_extreme(const RandomVar& x, const SubAlgebra& F, Pick pick) {
  require_compatible(*x.space(), F);
  std::vector<double> best(F.n_atoms());
  for (std::size_t k = 0; k < F.n_atoms(); ++k) {
    const auto& atom = F.atom(k);
    double b = x[atom.front()];
    for (std::size_t i : atom) {
      b = pick(b, x[i]);
    }
    best[k] = b;
  }
  return broadcast(x.space(), F, best);
}

} // namespace

RandomVar ess_sup_cond(const RandomVar& x, const SubAlgebra& F) {
  return per_atom_extreme(x, F, [](double a, double b) { return std::max(a, b); });
}

RandomVar ess_inf_cond(const RandomVar& x, const SubAlgebra& F) {
  return per_atom_extreme(x, F, [](double a, double b) { return std::min(a, b); });
}

RandomVar concatenate(std::span<const RandomVar> pieces, const SubAlgebra& partition) {
  if (pieces.size() != partition.n_atoms()) {
    throw StructuralError("concatenation got " + str(pieces.size()) + " pieces for " +
                          str(partition.n_atoms()) + " atoms");
  }
  if (pieces.empty()) {
    throw StructuralError("concatenation of an empty family");
  }
  const auto& space = pieces.front().space();
  require_compatible(*space, partition);
  std::vector<double> v(partition.n_outcomes());
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    require_same_space(pieces.front(), pieces[k]);
    for (std::size_t i : partition.atom(k)) {
      v[i] = pieces[k][i];
    }
  }
  return RandomVar(space, std::move(v));
}

bool is_measurable(const RandomVar& x, const SubAlgebra& F) {
  require_compatible(*x.space(), F);
  for (const auto& atom : F.atoms()) {
    const double first = x[atom.front()];
    for (std::size_t i : atom) {
      if (x[i] != first) {
        return false;
      }
    }
  }
  return true;
}

double expectation(const RandomVar& x) {
  if (!x.is_finite()) {
    throw StructuralError("expectation requires a finite-valued variable");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x.space()->prob(i) * x[i];
  }
  return acc;
}

} // namespace orlicz_risk
