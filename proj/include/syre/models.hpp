#pragma once

#include <memory>
#include <vector>

#include "syre/model.hpp"
#include "syre/symmetry.hpp"

namespace syre::models {

// Loss that is identically constant; useful as the base objective when only
// the regularizer term matters.
class ConstantModel : public LossModel {
 public:
  ConstantModel(Index dim, double value = 0.0) : dim_(dim), value_(value) {}
  Index dim() const override { return dim_; }
  double loss(const Vector&, const Batch&) const override { return value_; }
  Vector grad(const Vector& theta, const Batch&) const override {
    return Vector::Zero(theta.size());
  }

 private:
  Index dim_;
  double value_;
};

// (w^T w)^2 - w^T B w for a symmetric B. Data-free. Every eigenvector of B
// induces a reflection symmetry of the objective.
class QuarticBenchmark : public LossModel {
 public:
  explicit QuarticBenchmark(Matrix b);

  // B = G + G^T with standard-normal G
  static QuarticBenchmark unstructured(Index d, RngStream& rng);
  // B = diag(v) with standard-normal v
  static QuarticBenchmark structured(Index d, RngStream& rng);

  Index dim() const override { return b_.rows(); }
  double loss(const Vector& w, const Batch&) const override;
  Vector grad(const Vector& w, const Batch&) const override;

  bool supports_dropout() const override { return true; }
  // Inverted dropout on the coordinates of w, the model's only layer.
  double dropout_eval(const Vector& w, const Batch& batch, double rate, RngStream& rng,
                      Vector* grad_out) const override;

  const Matrix& b() const { return b_; }
  const Vector& eigenvalues() const { return eigenvalues_; }   // descending
  const Matrix& eigenvectors() const { return eigenvectors_; }
  ReflectionSymmetry eigen_reflection(Index i) const;

 private:
  Matrix b_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

// Mean squared error (1/n) sum_i (w^T x_i - y_i)^2 with analytic gradient.
class LinearRegression : public LossModel {
 public:
  explicit LinearRegression(Index d_in) : d_in_(d_in) {}
  Index dim() const override { return d_in_; }
  double loss(const Vector& w, const Batch& batch) const override;
  Vector grad(const Vector& w, const Batch& batch) const override;

  bool has_sample_output() const override { return true; }
  Index output_dim() const override { return 1; }
  Vector output(const Vector& w, const Vector& x) const override;
  Matrix output_jacobian(const Vector& w, const Vector& x) const override;

 private:
  Index d_in_;
};

// Closed-form minimizer of the bias-plus-decay-wrapped linear regression,
// w* = (gamma I + A)^{-1} (E[x y] + gamma theta0) with A = E[x x^T].
// theta0 = 0 reduces to plain ridge.
Vector biased_ridge_solution(const Dataset& data, double gamma, const Vector& theta0);

// Limit gamma -> 0+ of the above on possibly singular A (minimum-norm least
// squares via the PSD pseudo-inverse).
Vector least_squares_solution(const Dataset& data, double pinv_tol = 1e-10);

// ||(u . w)^T x - y||^2 summed over the batch, parameters theta = [u; w].
// The rescaling symmetry of each (u_i, w_i) pair makes u_i = w_i = 0 a dead,
// gradient-free state.
class ReparamRegression : public LossModel {
 public:
  explicit ReparamRegression(Index m) : m_(m) {}
  Index dim() const override { return 2 * m_; }
  double loss(const Vector& theta, const Batch& batch) const override;
  Vector grad(const Vector& theta, const Batch& batch) const override;

  Index neuron_count() const { return m_; }
  Index dead_neuron_count(const Vector& theta, double threshold = 1e-3) const;

 private:
  Index m_;
};

// f(x) = W2 act(W1 x), no biases; squared loss or softmax cross-entropy,
// both averaged over the batch. Parameters are [vec(W1); vec(W2)]
// column-major, W1 is hidden x d_in and W2 is d_out x hidden.
class TwoLayerNet : public LossModel {
 public:
  enum class Activation { Tanh, Relu };
  enum class LossKind { Squared, SoftmaxCrossEntropy };

  TwoLayerNet(Index d_in, Index hidden, Index d_out, Activation act,
              LossKind loss_kind = LossKind::Squared);

  Index dim() const override { return d_in_ * hidden_ + hidden_ * d_out_; }
  Index input_dim() const { return d_in_; }
  Index hidden_dim() const { return hidden_; }
  double loss(const Vector& theta, const Batch& batch) const override;
  Vector grad(const Vector& theta, const Batch& batch) const override;

  bool has_sample_output() const override { return true; }
  Index output_dim() const override { return d_out_; }
  Vector output(const Vector& theta, const Vector& x) const override;
  Matrix output_jacobian(const Vector& theta, const Vector& x) const override;

  bool has_hidden_features() const override { return true; }
  Matrix hidden_features(const Vector& theta, const Matrix& inputs) const override;

  bool supports_dropout() const override { return true; }
  // Inverted dropout on the hidden activations.
  double dropout_eval(const Vector& theta, const Batch& batch, double rate, RngStream& rng,
                      Vector* grad_out) const override;

  // parameter layout helpers
  Eigen::Map<const Matrix> w1(const Vector& theta) const;
  Eigen::Map<const Matrix> w2(const Vector& theta) const;
  std::vector<Index> unit_coordinates(Index unit) const;  // in+out weight indices

  // initializers
  Vector random_init(RngStream& rng, double scale) const;
  // all hidden units cloned from `distinct` independent draws, round-robin
  Vector cloned_unit_init(RngStream& rng, Index distinct, double scale) const;
  // zero the in- and out-weights of the listed units
  Vector with_dead_units(Vector theta, const std::vector<Index>& units) const;

  // reflection symmetries of the loss
  ReflectionSymmetry unit_sign_flip(Index unit) const;  // exact for tanh
  ReflectionSymmetry unit_swap(Index a, Index b) const;

  // teacher-student data: standard-gaussian inputs, one-hot argmax labels of
  // this net at theta
  Dataset sample_teacher_dataset(const Vector& theta, Index n, RngStream& rng) const;

  Activation activation() const { return act_; }
  LossKind loss_kind() const { return loss_kind_; }

 private:
  Matrix activate(const Matrix& z) const;
  Matrix activate_derivative(const Matrix& z) const;

  Index d_in_, hidden_, d_out_;
  Activation act_;
  LossKind loss_kind_;
};

// Linear model g(x, theta) = Phi(x) theta with fixed feature rows; loss is the
// squared error summed over rows. Used as the output of kernelize().
class LinearizedModel : public LossModel {
 public:
  LinearizedModel(Matrix features, Vector targets);
  Index dim() const override { return features_.cols(); }
  double loss(const Vector& theta, const Batch&) const override;
  Vector grad(const Vector& theta, const Batch&) const override;

  const Matrix& features() const { return features_; }
  const Vector& targets() const { return targets_; }
  Matrix gram() const { return features_.transpose() * features_; }

 private:
  Matrix features_;
  Vector targets_;
};

struct Kernelization {
  std::shared_ptr<LinearizedModel> model;
  Vector closed_form;  // pseudo-inverse least-squares solution
};

// Linearize `base` around theta0 with the symmetry-broken directions masked:
// feature rows are (I - P) grad_theta f(x, theta0) per sample and output.
// Requires P theta0 = 0 and the per-sample output interface.
Kernelization kernelize(const LossModel& base, const Vector& theta0,
                        const ReflectionSymmetry& sym, const Dataset& data,
                        double pinv_tol = 1e-10);

}  // namespace syre::models
