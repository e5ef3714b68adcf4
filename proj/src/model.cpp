#include "syre/model.hpp"

#include <stdexcept>

namespace syre {

const Batch& Batch::empty() {
  static const Matrix x(0, 0);
  static const Matrix y(0, 0);
  static const Batch b(x, y);
  return b;
}

Vector LossModel::output(const Vector&, const Vector&) const {
  throw std::logic_error("LossModel: per-sample output not supported");
}

Matrix LossModel::output_jacobian(const Vector&, const Vector&) const {
  throw std::logic_error("LossModel: per-sample output jacobian not supported");
}

Matrix LossModel::hidden_features(const Vector&, const Matrix&) const {
  throw std::logic_error("LossModel: hidden features not supported");
}

double LossModel::dropout_eval(const Vector&, const Batch&, double, RngStream&, Vector*) const {
  throw std::logic_error("LossModel: dropout not supported");
}

Vector fd_hessian_vector_product(const LossModel& model, const Vector& theta,
                                 const Vector& v, const Batch& batch, double step) {
  const double h = step * (1.0 + theta.norm());
  return (model.grad(theta + h * v, batch) - model.grad(theta - h * v, batch)) / (2.0 * h);
}

}  // namespace syre
