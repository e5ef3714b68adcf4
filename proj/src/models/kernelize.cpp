#include <stdexcept>

#include "syre/linalg.hpp"
#include "syre/models.hpp"

namespace syre::models {

LinearizedModel::LinearizedModel(Matrix features, Vector targets)
    : features_(std::move(features)), targets_(std::move(targets)) {
  if (features_.rows() != targets_.size()) {
    throw std::invalid_argument("LinearizedModel: feature rows and targets differ");
  }
}

double LinearizedModel::loss(const Vector& theta, const Batch&) const {
  return (features_ * theta - targets_).squaredNorm();
}

Vector LinearizedModel::grad(const Vector& theta, const Batch&) const {
  return 2.0 * (features_.transpose() * (features_ * theta - targets_));
}

Kernelization kernelize(const LossModel& base, const Vector& theta0,
                        const ReflectionSymmetry& sym, const Dataset& data, double pinv_tol) {
  if (!base.has_sample_output()) {
    throw std::invalid_argument("kernelize: base model lacks the per-sample output interface");
  }
  if (theta0.size() != base.dim() || sym.dim() != base.dim()) {
    throw std::invalid_argument("kernelize: dimension mismatch");
  }
  if (sym.project(theta0).norm() > 1e-10 * (1.0 + theta0.norm())) {
    throw std::invalid_argument("kernelize: P theta0 must vanish");
  }
  const Index n = data.size();
  const Index d_out = base.output_dim();
  const Index d = base.dim();
  Matrix features(n * d_out, d);
  Vector targets(n * d_out);
  for (Index i = 0; i < n; ++i) {
    const Matrix j = base.output_jacobian(theta0, data.inputs.row(i).transpose());
    for (Index k = 0; k < d_out; ++k) {
      Vector row = j.row(k).transpose();
      row -= sym.project(row);  // mask the symmetry-broken directions
      features.row(i * d_out + k) = row.transpose();
      targets(i * d_out + k) = data.targets(i, k);
    }
  }
  const Matrix gram = features.transpose() * features;
  const Vector rhs = features.transpose() * targets;
  Kernelization out;
  out.closed_form = linalg::pinv(gram, pinv_tol) * rhs;
  out.model = std::make_shared<LinearizedModel>(std::move(features), std::move(targets));
  return out;
}

}  // namespace syre::models
