#pragma once

#include "syre/model.hpp"
#include "syre/types.hpp"

namespace syre {

class RegularizedObjective;

// A reflection theta -> (I - 2P)(theta - center) + center with P = O O^T.
// P is stored through its orthonormal column basis O (d x k); rank(P) = k is
// small in every case handled here, and P^2 = P holds by construction.
class ReflectionSymmetry {
 public:
  // O must have orthonormal columns; center must satisfy P center = center.
  ReflectionSymmetry(Matrix o, Vector center);

  // rank-k reflection about the origin
  static ReflectionSymmetry about_origin(Matrix o);
  // k = 0: the identity "reflection" on dimension d
  static ReflectionSymmetry none(Index d);

  Index dim() const { return o_.rows(); }
  Index rank() const { return o_.cols(); }
  const Matrix& basis() const { return o_; }
  const Vector& center() const { return center_; }

  Vector project(const Vector& v) const;   // P v
  Matrix projector() const;                // dense P, for small d only
  Vector reflect(const Vector& phi) const; // (I - 2P)(phi - center) + center

 private:
  Matrix o_;
  Vector center_;
};

inline Vector reflect(const Vector& phi, const ReflectionSymmetry& s) { return s.reflect(phi); }

struct SymmetryReport {
  Index degree = 0;        // directions with |v_i^T w| < threshold
  Vector overlaps;         // |v_i^T w| per direction
  double threshold = 0.0;
};

// Empirical symmetry certificate: max |loss(reflect(theta)) - loss(theta)|
// over random parameter draws (and random single-row sub-batches when data is
// present). A result <= 1e-8 certifies the symmetry at the sampled points.
double check_symmetry(const LossModel& model, const ReflectionSymmetry& s, Index samples,
                      RngStream& rng, const Batch& batch = Batch::empty(),
                      double theta_scale = 1.0);

// Counts near-orthogonal benchmark directions; columns of `directions` must be
// unit norm. Overlaps are |v_i^T w|; the signed form would also count
// anti-aligned directions, which the quartic objective treats identically.
SymmetryReport degree_of_symmetry(const Vector& w, const Matrix& directions, double threshold);

// Normalized loss gap between a configuration and its reflection,
//   Delta = [L(theta + theta*) - L((I-2P) theta + theta*)] / ||P theta||,
// where L is the regularized objective read in the coordinates the base model
// sees (theta + bias). Requires ||P theta|| > 1e-12; at symmetric points use
// grad_projection_norm instead.
double breaking_strength(const RegularizedObjective& obj, const Vector& theta,
                         const ReflectionSymmetry& s, const Batch& batch = Batch::empty());

// ||P grad L(theta)|| with the same model-coordinate convention; finite limit
// of breaking_strength as P theta -> 0.
double grad_projection_norm(const RegularizedObjective& obj, const Vector& theta,
                            const ReflectionSymmetry& s, const Batch& batch = Batch::empty());

}  // namespace syre
