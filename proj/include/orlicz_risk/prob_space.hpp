#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace orlicz_risk {

/// Finite sample space with the full power set as ambient algebra.
///
/// Every outcome carries strictly positive mass, so almost-sure equality
/// is plain equality and no quotient bookkeeping is needed.
class FiniteProbSpace {
public:
  explicit FiniteProbSpace(std::vector<double> probs);

  static std::shared_ptr<const FiniteProbSpace> make(std::vector<double> probs);
  static std::shared_ptr<const FiniteProbSpace> uniform(std::size_t n);

  std::size_t size() const noexcept { return probs_.size(); }
  double prob(std::size_t i) const { return probs_.at(i); }
  std::span<const double> probs() const noexcept { return probs_; }

  bool operator==(const FiniteProbSpace& other) const noexcept { return probs_ == other.probs_; }

private:
  std::vector<double> probs_;
};

using SpacePtr = std::shared_ptr<const FiniteProbSpace>;

/// A sub-sigma-algebra, stored as the partition of outcome indices into atoms.
///
/// Atoms are kept in canonical order: indices sorted inside each atom and
/// atoms sorted by their smallest index. All per-atom reductions iterate
/// in this order, which keeps results bit-deterministic.
class SubAlgebra {
public:
  SubAlgebra(std::size_t n_outcomes, std::vector<std::vector<std::size_t>> atoms);

  static SubAlgebra trivial(std::size_t n);
  static SubAlgebra discrete(std::size_t n);

  std::size_t n_outcomes() const noexcept { return atom_of_.size(); }
  std::size_t n_atoms() const noexcept { return atoms_.size(); }
  const std::vector<std::vector<std::size_t>>& atoms() const noexcept { return atoms_; }
  const std::vector<std::size_t>& atom(std::size_t k) const { return atoms_.at(k); }
  std::size_t atom_of(std::size_t outcome) const { return atom_of_.at(outcome); }

  /// True when every atom of *this is a union of atoms of `finer`.
  bool is_coarser_than(const SubAlgebra& finer) const;

  bool operator==(const SubAlgebra& other) const noexcept { return atoms_ == other.atoms_; }

private:
  std::vector<std::vector<std::size_t>> atoms_;
  std::vector<std::size_t> atom_of_;
};

/// Real (or extended-real) random variable over a finite space. NaN is
/// rejected at construction; +-inf is allowed and individual operations
/// decide whether they accept it.
class RandomVar {
public:
  RandomVar(SpacePtr space, std::vector<double> values);
  static RandomVar constant(SpacePtr space, double c);
  static RandomVar zeros(SpacePtr space) { return constant(std::move(space), 0.0); }
  static RandomVar indicator(SpacePtr space, std::span<const std::size_t> outcomes);

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  bool is_finite() const noexcept;

  RandomVar abs() const;
  RandomVar map(double (*fn)(double)) const;

  friend RandomVar operator+(const RandomVar& a, const RandomVar& b);
  friend RandomVar operator-(const RandomVar& a, const RandomVar& b);
  friend RandomVar operator*(const RandomVar& a, const RandomVar& b);
  friend RandomVar operator*(double c, const RandomVar& a);
  friend RandomVar operator+(const RandomVar& a, double c);
  friend RandomVar operator-(const RandomVar& a);

  bool operator==(const RandomVar& other) const noexcept { return values_ == other.values_; }

private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Increasing sequence of sub-algebras; each stage refines the previous one.
class Filtration {
public:
  explicit Filtration(std::vector<SubAlgebra> stages);

  std::size_t size() const noexcept { return stages_.size(); }
  const SubAlgebra& operator[](std::size_t t) const { return stages_.at(t); }
  const std::vector<SubAlgebra>& stages() const noexcept { return stages_; }

private:
  std::vector<SubAlgebra> stages_;
};

/// Throws StructuralError unless `F` partitions exactly the outcomes of `space`.
void require_compatible(const FiniteProbSpace& space, const SubAlgebra& F);

/// Throws StructuralError unless both variables live on the same space.
void require_same_space(const RandomVar& a, const RandomVar& b);

/// P(A) for atom k, summed in canonical index order.
double atom_prob(const FiniteProbSpace& space, const SubAlgebra& F, std::size_t k);

/// Conditional weights p_w / P(A) of the outcomes of atom k.
std::vector<double> atom_weights(const FiniteProbSpace& space, const SubAlgebra& F, std::size_t k);

/// Values of x on atom k, in canonical index order.
std::vector<double> restrict_to_atom(const RandomVar& x, const SubAlgebra& F, std::size_t k);

/// Builds the F-measurable variable taking `per_atom[k]` on atom k.
RandomVar broadcast(SpacePtr space, const SubAlgebra& F, std::span<const double> per_atom);

/// Reads one value per atom off an F-measurable variable.
std::vector<double> per_atom_values(const RandomVar& x, const SubAlgebra& F);

/// E[x|F]. Requires finite x.
RandomVar cond_expectation(const RandomVar& x, const SubAlgebra& F);

/// Per-atom maximum / minimum; accepts infinite values.
RandomVar ess_sup_cond(const RandomVar& x, const SubAlgebra& F);
RandomVar ess_inf_cond(const RandomVar& x, const SubAlgebra& F);

/// Glues `pieces[k]` on atom k of `partition`.
RandomVar concatenate(std::span<const RandomVar> pieces, const SubAlgebra& partition);

/// Constancy on every atom, compared with exact equality.
bool is_measurable(const RandomVar& x, const SubAlgebra& F);

/// Plain expectation E[x].
double expectation(const RandomVar& x);

} // namespace orlicz_risk
