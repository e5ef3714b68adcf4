#include <stdexcept>

#include "syre/linalg.hpp"
#include "syre/models.hpp"

namespace syre::models {

QuarticBenchmark::QuarticBenchmark(Matrix b) : b_(std::move(b)) {
  if (!linalg::is_symmetric(b_)) {
    throw std::invalid_argument("QuarticBenchmark: B must be symmetric");
  }
  auto eig = linalg::sym_eig(b_);
  eigenvalues_ = std::move(eig.eigenvalues);
  eigenvectors_ = std::move(eig.eigenvectors);
}

QuarticBenchmark QuarticBenchmark::unstructured(Index d, RngStream& rng) {
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.gaussian(1.0);
  return QuarticBenchmark(g + g.transpose());
}

QuarticBenchmark QuarticBenchmark::structured(Index d, RngStream& rng) {
  Matrix b = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) b(i, i) = rng.gaussian(1.0);
  return QuarticBenchmark(std::move(b));
}

double QuarticBenchmark::loss(const Vector& w, const Batch&) const {
  const double sq = w.squaredNorm();
  return sq * sq - w.dot(b_ * w);
}

Vector QuarticBenchmark::grad(const Vector& w, const Batch&) const {
  return 4.0 * w.squaredNorm() * w - 2.0 * (b_ * w);
}

double QuarticBenchmark::dropout_eval(const Vector& w, const Batch& batch, double rate,
                                      RngStream& rng, Vector* grad_out) const {
  const Index d = w.size();
  const double keep = 1.0 - rate;
  Vector mask(d);
  for (Index i = 0; i < d; ++i) mask(i) = rng.uniform() < rate ? 0.0 : 1.0 / keep;
  const Vector wd = mask.cwiseProduct(w);
  if (grad_out) {
    *grad_out = mask.cwiseProduct(grad(wd, batch));
  }
  return loss(wd, batch);
}

ReflectionSymmetry QuarticBenchmark::eigen_reflection(Index i) const {
  if (i < 0 || i >= b_.rows()) {
    throw std::invalid_argument("eigen_reflection: index out of range");
  }
  Matrix o = eigenvectors_.col(i);
  return ReflectionSymmetry::about_origin(std::move(o));
}

}  // namespace syre::models
