#include "syre/groups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace syre::groups {

namespace {
constexpr Index kMaxOrder = 512;

bool is_prime(Index n) {
  if (n < 2) return false;
  for (Index p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}
}  // namespace

FiniteGroupRep::FiniteGroupRep(std::vector<Matrix> elements, double match_tol)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("FiniteGroupRep: no elements");
  if (static_cast<Index>(elements_.size()) > kMaxOrder) {
    throw std::invalid_argument("FiniteGroupRep: group order exceeds the supported 512");
  }
  dim_ = elements_[0].rows();
  const Matrix eye = Matrix::Identity(dim_, dim_);
  for (const Matrix& m : elements_) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw std::invalid_argument("FiniteGroupRep: inconsistent element dimensions");
    }
    if ((m.transpose() * m - eye).cwiseAbs().maxCoeff() > match_tol) {
      throw std::invalid_argument("FiniteGroupRep: element is not orthogonal");
    }
  }
  if ((elements_[0] - eye).cwiseAbs().maxCoeff() > match_tol) {
    throw std::invalid_argument("FiniteGroupRep: first element must be the identity");
  }
  const Index n = order();
  table_.assign(static_cast<size_t>(n), std::vector<Index>(static_cast<size_t>(n), -1));
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const Matrix prod = elements_[static_cast<size_t>(a)] * elements_[static_cast<size_t>(b)];
      const Index idx = find(prod, match_tol);
      if (idx < 0) {
        throw std::invalid_argument("FiniteGroupRep: set is not closed under multiplication");
      }
      table_[static_cast<size_t>(a)][static_cast<size_t>(b)] = idx;
    }
  }
  inverse_.assign(static_cast<size_t>(n), -1);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (multiply(a, b) == 0) {
        inverse_[static_cast<size_t>(a)] = b;
        break;
      }
    }
    if (inverse_[static_cast<size_t>(a)] < 0) {
      throw std::invalid_argument("FiniteGroupRep: element has no inverse in the set");
    }
  }
}

Index FiniteGroupRep::find(const Matrix& m, double tol) const {
  for (Index i = 0; i < order(); ++i) {
    if ((elements_[static_cast<size_t>(i)] - m).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return -1;
}

Index FiniteGroupRep::element_order(Index a) const {
  Index cur = a;
  Index k = 1;
  while (cur != 0) {
    cur = multiply(cur, a);
    ++k;
  }
  return k;
}

std::vector<Index> FiniteGroupRep::closure(std::vector<Index> generators) const {
  std::set<Index> members{0};
  for (Index g : generators) members.insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Index> current(members.begin(), members.end());
    for (Index a : current) {
      for (Index b : current) {
        if (members.insert(multiply(a, b)).second) grew = true;
      }
    }
  }
  return {members.begin(), members.end()};
}

bool FiniteGroupRep::is_closed(const std::vector<Index>& subset) const {
  std::set<Index> members(subset.begin(), subset.end());
  if (!members.count(0)) return false;
  for (Index a : subset) {
    for (Index b : subset) {
      if (!members.count(multiply(a, b))) return false;
    }
  }
  return true;
}

FiniteGroupRep sign_flip_group(Index d, const std::vector<std::vector<Index>>& generator_flips) {
  std::vector<Matrix> gens;
  for (const auto& coords : generator_flips) {
    Matrix m = Matrix::Identity(d, d);
    for (Index c : coords) {
      if (c < 0 || c >= d) throw std::invalid_argument("sign_flip_group: coordinate out of range");
      m(c, c) = -1.0;
    }
    gens.push_back(std::move(m));
  }
  // generate the full group by closure over products of generators
  std::vector<Matrix> elems{Matrix::Identity(d, d)};
  auto find_in = [&](const Matrix& m) {
    for (const Matrix& e : elems) {
      if ((e - m).cwiseAbs().maxCoeff() <= 1e-9) return true;
    }
    return false;
  };
  bool grew = true;
  while (grew) {
    grew = false;
    const size_t count = elems.size();
    for (size_t i = 0; i < count; ++i) {
      for (const Matrix& g : gens) {
        Matrix prod = elems[i] * g;
        if (!find_in(prod)) {
          elems.push_back(std::move(prod));
          grew = true;
        }
      }
    }
  }
  return FiniteGroupRep(std::move(elems));
}

FiniteGroupRep sign_flip_group(Index d, Index k) {
  if (k > d) throw std::invalid_argument("sign_flip_group: k must not exceed d");
  std::vector<std::vector<Index>> gens;
  for (Index i = 0; i < k; ++i) gens.push_back({i});
  return sign_flip_group(d, gens);
}

FiniteGroupRep cyclic_rotation_group(Index n, Index d) {
  if (n < 1) throw std::invalid_argument("cyclic_rotation_group: n must be positive");
  if (d < 2) throw std::invalid_argument("cyclic_rotation_group: d must be at least 2");
  std::vector<Matrix> elems;
  for (Index j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    Matrix m = Matrix::Identity(d, d);
    m(0, 0) = std::cos(angle);
    m(0, 1) = -std::sin(angle);
    m(1, 0) = std::sin(angle);
    m(1, 1) = std::cos(angle);
    elems.push_back(std::move(m));
  }
  return FiniteGroupRep(std::move(elems));
}

FiniteGroupRep permutation_group(Index n) {
  if (n < 1 || n > 5) throw std::invalid_argument("permutation_group: n must be in [1, 5]");
  std::vector<Index> perm(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  std::vector<Matrix> elems;
  do {
    Matrix m = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) m(perm[static_cast<size_t>(i)], i) = 1.0;
    elems.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  // identity is the first permutation in lexicographic order
  return FiniteGroupRep(std::move(elems));
}

Matrix group_average(const FiniteGroupRep& g, const std::vector<Index>& subset) {
  if (subset.empty()) throw std::invalid_argument("group_average: empty subset");
  if (!g.is_closed(subset)) {
    throw std::invalid_argument("group_average: subset is not closed under multiplication");
  }
  Matrix sum = Matrix::Zero(g.dim(), g.dim());
  for (Index i : subset) sum += g.element(i);
  return sum / static_cast<double>(subset.size());
}

Matrix group_average(const FiniteGroupRep& g) {
  std::vector<Index> all(static_cast<size_t>(g.order()));
  for (Index i = 0; i < g.order(); ++i) all[static_cast<size_t>(i)] = i;
  return group_average(g, all);
}

SubgroupCatalog enumerate_subgroups(const FiniteGroupRep& g, Index max_order) {
  const Index n = g.order();
  if (n > kMaxOrder) {
    throw std::invalid_argument("enumerate_subgroups: group order exceeds the supported 512");
  }
  // Every subgroup is reachable from the trivial one by repeatedly adjoining a
  // single element and closing, through a chain that stays inside it; pruning
  // by max_order is therefore exact for the catalog returned.
  std::set<std::vector<Index>> found;
  std::vector<std::vector<Index>> frontier{{0}};
  found.insert({0});
  while (!frontier.empty()) {
    std::vector<std::vector<Index>> next;
    for (const auto& sub : frontier) {
      std::set<Index> members(sub.begin(), sub.end());
      for (Index e = 1; e < n; ++e) {
        if (members.count(e)) continue;
        std::vector<Index> gens = sub;
        gens.push_back(e);
        std::vector<Index> grown = g.closure(std::move(gens));
        if (static_cast<Index>(grown.size()) > max_order) continue;
        if (found.insert(grown).second) next.push_back(std::move(grown));
      }
    }
    frontier = std::move(next);
  }

  SubgroupCatalog catalog;
  catalog.subgroups.assign(found.begin(), found.end());
  std::sort(catalog.subgroups.begin(), catalog.subgroups.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  for (Index i = 0; i < static_cast<Index>(catalog.subgroups.size()); ++i) {
    if (is_prime(static_cast<Index>(catalog.subgroups[static_cast<size_t>(i)].size()))) {
      catalog.minimal.push_back(i);
    }
  }

  // smallest generating set of the full group, breadth-first over sizes
  if (n == 1) {
    catalog.minimal_generating_set_size = 0;
    return catalog;
  }
  std::vector<Index> candidates;
  for (Index e = 1; e < n; ++e) candidates.push_back(e);
  for (Index k = 1; k <= n; ++k) {
    std::vector<Index> pick(static_cast<size_t>(k));
    // iterate k-subsets of candidates
    std::vector<Index> idx(static_cast<size_t>(k));
    for (Index i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    const Index m = static_cast<Index>(candidates.size());
    if (k > m) break;
    while (true) {
      for (Index i = 0; i < k; ++i) {
        pick[static_cast<size_t>(i)] = candidates[static_cast<size_t>(idx[static_cast<size_t>(i)])];
      }
      if (static_cast<Index>(g.closure(pick).size()) == n) {
        catalog.minimal_generating_set_size = k;
        return catalog;
      }
      Index i = k - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == m - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<size_t>(i)];
      for (Index j = i + 1; j < k; ++j) {
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      }
    }
  }
  throw std::logic_error("enumerate_subgroups: no generating set found");
}

double removal_strength(const RegularizedObjective& obj, const Vector& theta,
                        const FiniteGroupRep& g, const std::vector<Index>& subgroup,
                        const Batch& batch) {
  const Matrix vbar = group_average(g, subgroup);
  const Vector grad = obj.model_grad(theta, batch);
  return (grad - vbar * grad).norm();
}

StrengthProfile min_strength_profile(const RegularizedObjective& obj, const Vector& theta,
                                     const FiniteGroupRep& g, const SubgroupCatalog& catalog,
                                     Index trials, double delta, RngStream& rng,
                                     const Batch& batch) {
  StrengthProfile profile;
  profile.confidence = delta;
  std::vector<Matrix> vbars;
  for (const auto& sub : catalog.subgroups) {
    if (sub.size() <= 1) continue;  // trivial subgroup removes nothing
    profile.subgroups.push_back(sub);
    vbars.push_back(group_average(g, sub));
  }
  if (profile.subgroups.empty()) {
    profile.epsilon_at_confidence = std::numeric_limits<double>::infinity();
    return profile;
  }
  std::vector<std::vector<double>> per_subgroup(profile.subgroups.size());
  profile.min_strength_draws.reserve(static_cast<size_t>(trials));
  for (Index t = 0; t < trials; ++t) {
    const RegularizedObjective draw = obj.resample_bias(rng);
    const Vector grad = draw.model_grad(theta, batch);
    double min_strength = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < vbars.size(); ++s) {
      const double strength = (grad - vbars[s] * grad).norm();
      per_subgroup[s].push_back(strength);
      min_strength = std::min(min_strength, strength);
    }
    profile.min_strength_draws.push_back(min_strength);
  }
  for (auto& values : per_subgroup) {
    std::sort(values.begin(), values.end());
    profile.median_strength.push_back(values[values.size() / 2]);
  }
  // empirical epsilon with Pr(min > eps) >= delta: the (1 - delta) quantile
  std::vector<double> sorted = profile.min_strength_draws;
  std::sort(sorted.begin(), sorted.end());
  const double q = 1.0 - delta;
  const auto pos = static_cast<size_t>(q * static_cast<double>(sorted.size() - 1));
  profile.epsilon_at_confidence = sorted[pos];
  return profile;
}

}  // namespace syre::groups
