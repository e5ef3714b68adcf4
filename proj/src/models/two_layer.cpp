#include <cmath>
#include <stdexcept>

#include "syre/models.hpp"

namespace syre::models {

TwoLayerNet::TwoLayerNet(Index d_in, Index hidden, Index d_out, Activation act,
                         LossKind loss_kind)
    : d_in_(d_in), hidden_(hidden), d_out_(d_out), act_(act), loss_kind_(loss_kind) {
  if (d_in <= 0 || hidden <= 0 || d_out <= 0) {
    throw std::invalid_argument("TwoLayerNet: sizes must be positive");
  }
}

Eigen::Map<const Matrix> TwoLayerNet::w1(const Vector& theta) const {
  return Eigen::Map<const Matrix>(theta.data(), hidden_, d_in_);
}

Eigen::Map<const Matrix> TwoLayerNet::w2(const Vector& theta) const {
  return Eigen::Map<const Matrix>(theta.data() + hidden_ * d_in_, d_out_, hidden_);
}

Matrix TwoLayerNet::activate(const Matrix& z) const {
  if (act_ == Activation::Tanh) return z.array().tanh();
  return z.cwiseMax(0.0);
}

Matrix TwoLayerNet::activate_derivative(const Matrix& z) const {
  if (act_ == Activation::Tanh) {
    return 1.0 - z.array().tanh().square();
  }
  return (z.array() > 0.0).cast<double>();
}

namespace {

// column-wise softmax of logits
Matrix softmax(const Matrix& f) {
  Matrix p = f;
  for (Index j = 0; j < p.cols(); ++j) {
    const double m = p.col(j).maxCoeff();
    p.col(j) = (p.col(j).array() - m).exp();
    p.col(j) /= p.col(j).sum();
  }
  return p;
}

}  // namespace

double TwoLayerNet::loss(const Vector& theta, const Batch& batch) const {
  const Index n = batch.size();
  if (n == 0) throw std::invalid_argument("TwoLayerNet: empty batch");
  if (batch.inputs().cols() != d_in_ || batch.targets().cols() != d_out_) {
    throw std::invalid_argument("TwoLayerNet: batch shape mismatch");
  }
  const Matrix z = w1(theta) * batch.inputs().transpose();  // hidden x n
  const Matrix f = w2(theta) * activate(z);                 // d_out x n
  if (loss_kind_ == LossKind::Squared) {
    return (f - batch.targets().transpose()).squaredNorm() / static_cast<double>(n);
  }
  const Matrix p = softmax(f);
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < d_out_; ++k) {
      const double y = batch.targets()(j, k);
      if (y != 0.0) total -= y * std::log(std::max(p(k, j), 1e-300));
    }
  }
  return total / static_cast<double>(n);
}

Vector TwoLayerNet::grad(const Vector& theta, const Batch& batch) const {
  const Index n = batch.size();
  if (n == 0) throw std::invalid_argument("TwoLayerNet: empty batch");
  if (batch.inputs().cols() != d_in_ || batch.targets().cols() != d_out_) {
    throw std::invalid_argument("TwoLayerNet: batch shape mismatch");
  }
  const Matrix& x = batch.inputs();
  const Matrix z = w1(theta) * x.transpose();
  const Matrix h = activate(z);
  const Matrix f = w2(theta) * h;

  Matrix df;  // d_out x n
  if (loss_kind_ == LossKind::Squared) {
    df = 2.0 * (f - batch.targets().transpose()) / static_cast<double>(n);
  } else {
    df = (softmax(f) - batch.targets().transpose()) / static_cast<double>(n);
  }

  const Matrix dw2 = df * h.transpose();
  const Matrix dh = w2(theta).transpose() * df;
  const Matrix dz = dh.cwiseProduct(activate_derivative(z));
  const Matrix dw1 = dz * x;

  Vector g(dim());
  Eigen::Map<Matrix>(g.data(), hidden_, d_in_) = dw1;
  Eigen::Map<Matrix>(g.data() + hidden_ * d_in_, d_out_, hidden_) = dw2;
  return g;
}

Vector TwoLayerNet::output(const Vector& theta, const Vector& x) const {
  const Vector z = w1(theta) * x;
  const Vector h = activate(z);
  return w2(theta) * h;
}

Matrix TwoLayerNet::output_jacobian(const Vector& theta, const Vector& x) const {
  const Vector z = w1(theta) * x;
  const Vector h = activate(z);
  const Vector hp = activate_derivative(z);
  const auto v2 = w2(theta);
  Matrix j = Matrix::Zero(d_out_, dim());
  // d f_k / d W1_{u,c} = W2_{k,u} act'(z_u) x_c
  for (Index c = 0; c < d_in_; ++c) {
    for (Index u = 0; u < hidden_; ++u) {
      const Index col = u + hidden_ * c;
      for (Index k = 0; k < d_out_; ++k) {
        j(k, col) = v2(k, u) * hp(u) * x(c);
      }
    }
  }
  // d f_k / d W2_{k,u} = h_u
  const Index offset = hidden_ * d_in_;
  for (Index u = 0; u < hidden_; ++u) {
    for (Index k = 0; k < d_out_; ++k) {
      j(k, offset + k + d_out_ * u) = h(u);
    }
  }
  return j;
}

Matrix TwoLayerNet::hidden_features(const Vector& theta, const Matrix& inputs) const {
  return activate(w1(theta) * inputs.transpose()).transpose();  // n x hidden
}

double TwoLayerNet::dropout_eval(const Vector& theta, const Batch& batch, double rate,
                                 RngStream& rng, Vector* grad_out) const {
  const Index n = batch.size();
  if (n == 0) throw std::invalid_argument("TwoLayerNet: empty batch");
  const double keep = 1.0 - rate;
  const Matrix& x = batch.inputs();
  const Matrix z = w1(theta) * x.transpose();
  Matrix mask(hidden_, n);
  for (Index j = 0; j < n; ++j)
    for (Index u = 0; u < hidden_; ++u) mask(u, j) = rng.uniform() < rate ? 0.0 : 1.0 / keep;
  const Matrix h = activate(z).cwiseProduct(mask);
  const Matrix f = w2(theta) * h;

  double value;
  Matrix df;
  if (loss_kind_ == LossKind::Squared) {
    const Matrix r = f - batch.targets().transpose();
    value = r.squaredNorm() / static_cast<double>(n);
    df = 2.0 * r / static_cast<double>(n);
  } else {
    const Matrix p = softmax(f);
    value = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < d_out_; ++k) {
        const double y = batch.targets()(j, k);
        if (y != 0.0) value -= y * std::log(std::max(p(k, j), 1e-300));
      }
    value /= static_cast<double>(n);
    df = (p - batch.targets().transpose()) / static_cast<double>(n);
  }
  if (grad_out) {
    const Matrix dw2 = df * h.transpose();
    const Matrix dh = (w2(theta).transpose() * df).cwiseProduct(mask);
    const Matrix dz = dh.cwiseProduct(activate_derivative(z));
    const Matrix dw1 = dz * x;
    grad_out->resize(dim());
    Eigen::Map<Matrix>(grad_out->data(), hidden_, d_in_) = dw1;
    Eigen::Map<Matrix>(grad_out->data() + hidden_ * d_in_, d_out_, hidden_) = dw2;
  }
  return value;
}

std::vector<Index> TwoLayerNet::unit_coordinates(Index unit) const {
  if (unit < 0 || unit >= hidden_) {
    throw std::invalid_argument("unit_coordinates: unit out of range");
  }
  std::vector<Index> coords;
  coords.reserve(d_in_ + d_out_);
  for (Index c = 0; c < d_in_; ++c) coords.push_back(unit + hidden_ * c);
  const Index offset = hidden_ * d_in_;
  for (Index k = 0; k < d_out_; ++k) coords.push_back(offset + k + d_out_ * unit);
  return coords;
}

Vector TwoLayerNet::random_init(RngStream& rng, double scale) const {
  Vector theta(dim());
  for (Index i = 0; i < theta.size(); ++i) theta(i) = rng.gaussian(scale);
  return theta;
}

Vector TwoLayerNet::cloned_unit_init(RngStream& rng, Index distinct, double scale) const {
  if (distinct < 1 || distinct > hidden_) {
    throw std::invalid_argument("cloned_unit_init: distinct must be in [1, hidden]");
  }
  Matrix in_patterns(distinct, d_in_), out_patterns(d_out_, distinct);
  for (Index p = 0; p < distinct; ++p) {
    for (Index c = 0; c < d_in_; ++c) in_patterns(p, c) = rng.gaussian(scale);
    for (Index k = 0; k < d_out_; ++k) out_patterns(k, p) = rng.gaussian(scale);
  }
  Vector theta = Vector::Zero(dim());
  Eigen::Map<Matrix> m1(theta.data(), hidden_, d_in_);
  Eigen::Map<Matrix> m2(theta.data() + hidden_ * d_in_, d_out_, hidden_);
  for (Index u = 0; u < hidden_; ++u) {
    const Index p = u % distinct;
    m1.row(u) = in_patterns.row(p);
    m2.col(u) = out_patterns.col(p);
  }
  return theta;
}

Vector TwoLayerNet::with_dead_units(Vector theta, const std::vector<Index>& units) const {
  for (Index u : units) {
    for (Index c : unit_coordinates(u)) theta(c) = 0.0;
  }
  return theta;
}

ReflectionSymmetry TwoLayerNet::unit_sign_flip(Index unit) const {
  const auto coords = unit_coordinates(unit);
  Matrix o = Matrix::Zero(dim(), static_cast<Index>(coords.size()));
  for (Index j = 0; j < static_cast<Index>(coords.size()); ++j) o(coords[j], j) = 1.0;
  return ReflectionSymmetry::about_origin(std::move(o));
}

ReflectionSymmetry TwoLayerNet::unit_swap(Index a, Index b) const {
  if (a == b) throw std::invalid_argument("unit_swap: units must differ");
  const auto ca = unit_coordinates(a);
  const auto cb = unit_coordinates(b);
  const double s = 1.0 / std::sqrt(2.0);
  Matrix o = Matrix::Zero(dim(), static_cast<Index>(ca.size()));
  for (Index j = 0; j < static_cast<Index>(ca.size()); ++j) {
    o(ca[j], j) = s;
    o(cb[j], j) = -s;
  }
  return ReflectionSymmetry::about_origin(std::move(o));
}

Dataset TwoLayerNet::sample_teacher_dataset(const Vector& theta, Index n, RngStream& rng) const {
  Dataset data;
  data.inputs.resize(n, d_in_);
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < d_in_; ++c) data.inputs(i, c) = rng.gaussian(1.0);
  if (d_out_ == 1) {
    data.targets.resize(n, 1);
    for (Index i = 0; i < n; ++i) {
      data.targets(i, 0) = output(theta, data.inputs.row(i).transpose())(0);
    }
  } else {
    data.targets = Matrix::Zero(n, d_out_);
    for (Index i = 0; i < n; ++i) {
      const Vector f = output(theta, data.inputs.row(i).transpose());
      Index best = 0;
      f.maxCoeff(&best);
      data.targets(i, best) = 1.0;
    }
  }
  return data;
}

}  // namespace syre::models
