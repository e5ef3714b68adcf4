#pragma once

#include "syre/rng.hpp"
#include "syre/types.hpp"

namespace syre {

struct Dataset {
  Matrix inputs;       // n x d_in
  Matrix targets;      // n x d_out
  double alpha = 1.0;  // input scale, already applied to inputs; kept for reporting

  Index size() const { return inputs.rows(); }
  Index input_dim() const { return inputs.cols(); }
  Index target_dim() const { return targets.cols(); }
};

// Non-owning view of a (sub)set of rows used for one loss evaluation.
class Batch {
 public:
  Batch(const Matrix& inputs, const Matrix& targets) : x_(&inputs), y_(&targets) {}

  static const Batch& empty();
  static Batch full(const Dataset& data) { return Batch(data.inputs, data.targets); }

  const Matrix& inputs() const { return *x_; }
  const Matrix& targets() const { return *y_; }
  Index size() const { return x_->rows(); }

 private:
  const Matrix* x_;
  const Matrix* y_;
};

// A differentiable objective over a flat parameter vector. Data-free models
// ignore the batch. Implementations provide analytic gradients; the optional
// per-sample interface powers linearization and the capacity probes.
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual Index dim() const = 0;
  virtual double loss(const Vector& theta, const Batch& batch) const = 0;
  virtual Vector grad(const Vector& theta, const Batch& batch) const = 0;

  // per-sample model output f(x, theta) and its parameter Jacobian
  virtual bool has_sample_output() const { return false; }
  virtual Index output_dim() const { return 0; }
  virtual Vector output(const Vector& theta, const Vector& x) const;
  virtual Matrix output_jacobian(const Vector& theta, const Vector& x) const;  // d_out x dim

  // first-layer representation, one row per sample
  virtual bool has_hidden_features() const { return false; }
  virtual Matrix hidden_features(const Vector& theta, const Matrix& inputs) const;

  // inverted-dropout evaluation for models that support it; loss and gradient
  // share one mask per call
  virtual bool supports_dropout() const { return false; }
  virtual double dropout_eval(const Vector& theta, const Batch& batch, double rate,
                              RngStream& rng, Vector* grad_out) const;
};

// Hessian-vector product by central finite differences on the gradient.
Vector fd_hessian_vector_product(const LossModel& model, const Vector& theta,
                                 const Vector& v, const Batch& batch, double step = 1e-5);

}  // namespace syre
