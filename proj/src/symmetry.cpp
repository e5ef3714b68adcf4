#include "syre/symmetry.hpp"

#include <cmath>
#include <stdexcept>

#include "syre/linalg.hpp"
#include "syre/regularizer.hpp"

namespace syre {

namespace {
constexpr double kOrthoTol = 1e-10;
constexpr double kCenterTol = 1e-10;
constexpr double kProjectedNormCutoff = 1e-12;
}  // namespace

ReflectionSymmetry::ReflectionSymmetry(Matrix o, Vector center)
    : o_(std::move(o)), center_(std::move(center)) {
  if (o_.rows() != center_.size()) {
    throw std::invalid_argument("ReflectionSymmetry: basis and center dimensions differ");
  }
  if (o_.cols() > 0) {
    const Matrix gram = o_.transpose() * o_;
    const Matrix eye = Matrix::Identity(o_.cols(), o_.cols());
    if ((gram - eye).cwiseAbs().maxCoeff() > kOrthoTol) {
      throw std::invalid_argument("ReflectionSymmetry: columns of O are not orthonormal");
    }
  }
  if ((project(center_) - center_).cwiseAbs().maxCoeff() > kCenterTol) {
    throw std::invalid_argument("ReflectionSymmetry: center must satisfy P center = center");
  }
}

ReflectionSymmetry ReflectionSymmetry::about_origin(Matrix o) {
  Vector zero = Vector::Zero(o.rows());
  return ReflectionSymmetry(std::move(o), std::move(zero));
}

ReflectionSymmetry ReflectionSymmetry::none(Index d) {
  return ReflectionSymmetry(Matrix(d, 0), Vector::Zero(d));
}

Vector ReflectionSymmetry::project(const Vector& v) const {
  if (o_.cols() == 0) return Vector::Zero(v.size());
  return o_ * (o_.transpose() * v);
}

Matrix ReflectionSymmetry::projector() const {
  if (o_.cols() == 0) return Matrix::Zero(o_.rows(), o_.rows());
  return o_ * o_.transpose();
}

Vector ReflectionSymmetry::reflect(const Vector& phi) const {
  if (phi.size() != dim()) {
    throw std::invalid_argument("reflect: dimension mismatch");
  }
  const Vector shifted = phi - center_;
  return shifted - 2.0 * project(shifted) + center_;
}

double check_symmetry(const LossModel& model, const ReflectionSymmetry& s, Index samples,
                      RngStream& rng, const Batch& batch, double theta_scale) {
  if (s.dim() != model.dim()) {
    throw std::invalid_argument("check_symmetry: symmetry dimension does not match model");
  }
  double worst = 0.0;
  const Index n = batch.size();
  Matrix row_x, row_y;
  for (Index k = 0; k < samples; ++k) {
    const Vector theta = linalg::gaussian_vector(rng, model.dim(), theta_scale);
    const Vector mirrored = s.reflect(theta);
    double violation = 0.0;
    if (n > 1) {
      // per-sample symmetry is the stronger statement; probe one row at a time
      const Index i = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n));
      row_x = batch.inputs().row(i);
      row_y = batch.targets().row(i);
      const Batch one(row_x, row_y);
      violation = std::abs(model.loss(mirrored, one) - model.loss(theta, one));
    } else {
      violation = std::abs(model.loss(mirrored, batch) - model.loss(theta, batch));
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

SymmetryReport degree_of_symmetry(const Vector& w, const Matrix& directions, double threshold) {
  if (directions.rows() != w.size()) {
    throw std::invalid_argument("degree_of_symmetry: dimension mismatch");
  }
  for (Index j = 0; j < directions.cols(); ++j) {
    if (std::abs(directions.col(j).norm() - 1.0) > 1e-6) {
      throw std::invalid_argument("degree_of_symmetry: direction columns must be unit norm");
    }
  }
  SymmetryReport report;
  report.threshold = threshold;
  report.overlaps = (directions.transpose() * w).cwiseAbs();
  report.degree = 0;
  for (Index i = 0; i < report.overlaps.size(); ++i) {
    if (report.overlaps(i) < threshold) ++report.degree;
  }
  return report;
}

double breaking_strength(const RegularizedObjective& obj, const Vector& theta,
                         const ReflectionSymmetry& s, const Batch& batch) {
  const Vector p_theta = s.project(theta);
  const double denom = p_theta.norm();
  if (denom <= kProjectedNormCutoff) {
    throw std::domain_error(
        "breaking_strength: ||P theta|| is numerically zero; use grad_projection_norm");
  }
  const Vector& star = s.center();
  const Vector plus = theta + star;
  const Vector minus = (theta - 2.0 * p_theta) + star;  // (I-2P) theta + theta*
  return (obj.model_loss(plus, batch) - obj.model_loss(minus, batch)) / denom;
}

double grad_projection_norm(const RegularizedObjective& obj, const Vector& theta,
                            const ReflectionSymmetry& s, const Batch& batch) {
  const Vector g = obj.model_grad(theta, batch);
  return s.project(g).norm();
}

}  // namespace syre
