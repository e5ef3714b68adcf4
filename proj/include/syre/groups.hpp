#pragma once

#include <vector>

#include "syre/model.hpp"
#include "syre/regularizer.hpp"
#include "syre/types.hpp"

namespace syre::groups {

// A finite group of orthogonal d x d matrices, identity first, closed under
// multiplication. Products are matched to elements by max-norm distance; the
// exact constructions used here (sign flips, rational rotations, permutations)
// separate far above the matching tolerance.
class FiniteGroupRep {
 public:
  explicit FiniteGroupRep(std::vector<Matrix> elements, double match_tol = 1e-9);

  Index dim() const { return dim_; }
  Index order() const { return static_cast<Index>(elements_.size()); }
  const Matrix& element(Index i) const { return elements_[static_cast<size_t>(i)]; }
  const std::vector<Matrix>& elements() const { return elements_; }

  Index multiply(Index a, Index b) const { return table_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
  Index inverse(Index a) const { return inverse_[static_cast<size_t>(a)]; }
  Index element_order(Index a) const;

  // closure of a generating subset, as sorted element indices
  std::vector<Index> closure(std::vector<Index> generators) const;
  bool is_closed(const std::vector<Index>& subset) const;

 private:
  Index find(const Matrix& m, double tol) const;

  Index dim_ = 0;
  std::vector<Matrix> elements_;
  std::vector<std::vector<Index>> table_;
  std::vector<Index> inverse_;
};

// standard constructors
FiniteGroupRep sign_flip_group(Index d, const std::vector<std::vector<Index>>& generator_flips);
FiniteGroupRep sign_flip_group(Index d, Index k);  // Z2^k flipping coords 0..k-1
FiniteGroupRep cyclic_rotation_group(Index n, Index d = 2);  // C_n on coords (0, 1)
FiniteGroupRep permutation_group(Index n);  // S_n as n x n permutation matrices, n <= 5

// group-averaging projector (1/|U|) sum_u u over a closed subset of G
Matrix group_average(const FiniteGroupRep& g, const std::vector<Index>& subset);
Matrix group_average(const FiniteGroupRep& g);

struct SubgroupCatalog {
  std::vector<std::vector<Index>> subgroups;  // sorted element-index sets, trivial first
  std::vector<Index> minimal;                 // indices into subgroups (prime order)
  Index minimal_generating_set_size = 0;
};

// All subgroups of order <= max_order by closure extension, plus the size of
// the smallest generating set of G (breadth-first over generator-set sizes).
// Refuses |G| > 512.
SubgroupCatalog enumerate_subgroups(const FiniteGroupRep& g, Index max_order);

// Delta_V = ||(I - Vbar) grad L(theta)||, the removal strength for subgroup V,
// with the objective read in model coordinates (theta + bias convention).
double removal_strength(const RegularizedObjective& obj, const Vector& theta,
                        const FiniteGroupRep& g, const std::vector<Index>& subgroup,
                        const Batch& batch = Batch::empty());

struct StrengthProfile {
  std::vector<std::vector<Index>> subgroups;  // the nontrivial subgroups profiled
  std::vector<double> median_strength;        // per subgroup, over bias draws
  std::vector<double> min_strength_draws;     // min over subgroups, one per draw
  double epsilon_at_confidence = 0.0;         // empirical eps with Pr(min > eps) >= delta
  double confidence = 0.0;
};

// Monte-Carlo over fresh bias draws of min_V Delta_V across the catalog's
// nontrivial subgroups; reports the empirical epsilon achieving confidence
// delta. The trivial group yields an infinite sentinel.
StrengthProfile min_strength_profile(const RegularizedObjective& obj, const Vector& theta,
                                     const FiniteGroupRep& g, const SubgroupCatalog& catalog,
                                     Index trials, double delta, RngStream& rng,
                                     const Batch& batch = Batch::empty());

}  // namespace syre::groups
