#include <stdexcept>

#include "syre/linalg.hpp"
#include "syre/models.hpp"

namespace syre::models {

namespace {
void require_shape(const Batch& batch, Index d_in) {
  if (batch.size() == 0) {
    throw std::invalid_argument("LinearRegression: empty batch");
  }
  if (batch.inputs().cols() != d_in || batch.targets().cols() != 1) {
    throw std::invalid_argument("LinearRegression: batch shape mismatch");
  }
}
}  // namespace

double LinearRegression::loss(const Vector& w, const Batch& batch) const {
  require_shape(batch, d_in_);
  const Vector r = batch.inputs() * w - batch.targets().col(0);
  return r.squaredNorm() / static_cast<double>(batch.size());
}

Vector LinearRegression::grad(const Vector& w, const Batch& batch) const {
  require_shape(batch, d_in_);
  const Vector r = batch.inputs() * w - batch.targets().col(0);
  return 2.0 * (batch.inputs().transpose() * r) / static_cast<double>(batch.size());
}

Vector LinearRegression::output(const Vector& w, const Vector& x) const {
  Vector out(1);
  out(0) = w.dot(x);
  return out;
}

Matrix LinearRegression::output_jacobian(const Vector&, const Vector& x) const {
  Matrix j(1, x.size());
  j.row(0) = x.transpose();
  return j;
}

Vector biased_ridge_solution(const Dataset& data, double gamma, const Vector& theta0) {
  if (gamma <= 0.0) {
    throw std::invalid_argument("biased_ridge_solution: gamma must be positive");
  }
  const double n = static_cast<double>(data.size());
  const Matrix a = data.inputs.transpose() * data.inputs / n;
  const Vector xy = data.inputs.transpose() * data.targets.col(0) / n;
  const Matrix lhs = gamma * Matrix::Identity(a.rows(), a.cols()) + a;
  return lhs.ldlt().solve(xy + gamma * theta0);
}

Vector least_squares_solution(const Dataset& data, double pinv_tol) {
  const double n = static_cast<double>(data.size());
  const Matrix a = data.inputs.transpose() * data.inputs / n;
  const Vector xy = data.inputs.transpose() * data.targets.col(0) / n;
  return linalg::pinv(a, pinv_tol) * xy;
}

}  // namespace syre::models
