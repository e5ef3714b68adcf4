#include <stdexcept>

#include "syre/models.hpp"

namespace syre::models {

namespace {
void require_shape(const Batch& batch, Index m) {
  if (batch.inputs().cols() != m || batch.targets().cols() != 1) {
    throw std::invalid_argument("ReparamRegression: batch shape mismatch");
  }
}
}  // namespace

double ReparamRegression::loss(const Vector& theta, const Batch& batch) const {
  if (theta.size() != 2 * m_) throw std::invalid_argument("ReparamRegression: bad theta size");
  require_shape(batch, m_);
  const auto u = theta.head(m_);
  const auto w = theta.tail(m_);
  const Vector beta = u.cwiseProduct(w);
  const Vector r = batch.inputs() * beta - batch.targets().col(0);
  return r.squaredNorm();
}

Vector ReparamRegression::grad(const Vector& theta, const Batch& batch) const {
  if (theta.size() != 2 * m_) throw std::invalid_argument("ReparamRegression: bad theta size");
  require_shape(batch, m_);
  const auto u = theta.head(m_);
  const auto w = theta.tail(m_);
  const Vector beta = u.cwiseProduct(w);
  const Vector r = batch.inputs() * beta - batch.targets().col(0);
  const Vector g_beta = 2.0 * (batch.inputs().transpose() * r);
  Vector g(2 * m_);
  g.head(m_) = g_beta.cwiseProduct(w);
  g.tail(m_) = g_beta.cwiseProduct(u);
  return g;
}

Index ReparamRegression::dead_neuron_count(const Vector& theta, double threshold) const {
  const auto u = theta.head(m_);
  const auto w = theta.tail(m_);
  Index dead = 0;
  for (Index i = 0; i < m_; ++i) {
    if (std::max(std::abs(u(i)), std::abs(w(i))) < threshold) ++dead;
  }
  return dead;
}

}  // namespace syre::models
