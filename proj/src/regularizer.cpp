#include "syre/regularizer.hpp"

#include <cmath>
#include <stdexcept>

#include "syre/linalg.hpp"

namespace syre {

std::string to_string(RegMode mode) {
  switch (mode) {
    case RegMode::None: return "none";
    case RegMode::WeightDecay: return "wd";
    case RegMode::Syre: return "syre";
    case RegMode::AdvancedRemoval: return "ar";
    case RegMode::WFix: return "wfix";
    case RegMode::Dropout: return "dropout";
  }
  return "none";
}

RegMode reg_mode_from_string(const std::string& s) {
  if (s == "none") return RegMode::None;
  if (s == "wd") return RegMode::WeightDecay;
  if (s == "syre") return RegMode::Syre;
  if (s == "ar") return RegMode::AdvancedRemoval;
  if (s == "wfix") return RegMode::WFix;
  if (s == "dropout") return RegMode::Dropout;
  throw std::invalid_argument("unknown regularizer mode: " + s);
}

RegularizedObjective::RegularizedObjective(std::shared_ptr<const LossModel> base, RegMode mode,
                                           double gamma, Vector theta0, Vector reg_diag)
    : base_(std::move(base)),
      mode_(mode),
      gamma_(gamma),
      theta0_(std::move(theta0)),
      reg_diag_(std::move(reg_diag)) {
  const Index d = base_->dim();
  if (theta0_.size() != d || reg_diag_.size() != d) {
    throw std::invalid_argument("RegularizedObjective: vector sizes do not match model dim");
  }
  if (gamma_ < 0.0) {
    throw std::invalid_argument("RegularizedObjective: gamma must be non-negative");
  }
  const bool bias_free = theta0_.isZero(0.0);
  const bool identity_diag = (reg_diag_.array() == 1.0).all();
  switch (mode_) {
    case RegMode::None:
    case RegMode::WeightDecay:
    case RegMode::WFix:
    case RegMode::Dropout:
      if (!bias_free || !identity_diag) {
        throw std::invalid_argument("RegularizedObjective: mode requires theta0 = 0, D = I");
      }
      break;
    case RegMode::Syre:
      if (!identity_diag) {
        throw std::invalid_argument("RegularizedObjective: syre requires D = I");
      }
      break;
    case RegMode::AdvancedRemoval: {
      if ((reg_diag_.array() <= 0.0).any()) {
        throw std::invalid_argument("RegularizedObjective: D must be positive");
      }
      Vector sorted = reg_diag_;
      std::sort(sorted.begin(), sorted.end());
      for (Index i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted(i) == sorted(i + 1)) {
          throw std::invalid_argument("RegularizedObjective: ar requires distinct D entries");
        }
      }
      break;
    }
  }
  wfix_mask_ = Vector::Zero(d);
  wfix_values_ = Vector::Zero(d);
}

Vector RegularizedObjective::to_model(const Vector& theta) const {
  if (mode_ == RegMode::WFix) {
    return (Vector::Ones(theta.size()) - wfix_mask_).cwiseProduct(theta) +
           wfix_mask_.cwiseProduct(wfix_values_);
  }
  return theta + theta0_;
}

Vector RegularizedObjective::from_model(const Vector& model_theta) const {
  if (mode_ == RegMode::WFix) return model_theta;  // free coords agree; frozen are pinned
  return model_theta - theta0_;
}

double RegularizedObjective::loss(const Vector& theta, const Batch& batch) const {
  double value = base_->loss(to_model(theta), batch);
  if (gamma_ != 0.0) {
    value += gamma_ * theta.dot(reg_diag_.cwiseProduct(theta));
  }
  return value;
}

Vector RegularizedObjective::grad(const Vector& theta, const Batch& batch) const {
  Vector g = base_->grad(to_model(theta), batch);
  if (mode_ == RegMode::WFix) {
    g = (Vector::Ones(theta.size()) - wfix_mask_).cwiseProduct(g);
  }
  if (gamma_ != 0.0) {
    Vector decay = 2.0 * gamma_ * reg_diag_.cwiseProduct(theta);
    if (mode_ == RegMode::WFix) {
      decay = (Vector::Ones(theta.size()) - wfix_mask_).cwiseProduct(decay);
    }
    g += decay;
  }
  return g;
}

double RegularizedObjective::train_eval(const Vector& theta, const Batch& batch, RngStream& rng,
                                        Vector* grad_out) const {
  if (mode_ == RegMode::Dropout && dropout_rate_ > 0.0) {
    double value = base_->dropout_eval(theta, batch, dropout_rate_, rng, grad_out);
    if (gamma_ != 0.0) {
      value += gamma_ * theta.dot(reg_diag_.cwiseProduct(theta));
      if (grad_out) *grad_out += 2.0 * gamma_ * reg_diag_.cwiseProduct(theta);
    }
    return value;
  }
  if (grad_out) *grad_out = grad(theta, batch);
  return loss(theta, batch);
}

double RegularizedObjective::model_loss(const Vector& model_theta, const Batch& batch) const {
  return loss(from_model(model_theta), batch);
}

Vector RegularizedObjective::model_grad(const Vector& model_theta, const Batch& batch) const {
  return grad(from_model(model_theta), batch);
}

RegularizedObjective RegularizedObjective::resample_bias(RngStream& rng) const {
  RegularizedObjective out = *this;
  if (mode_ == RegMode::Syre || mode_ == RegMode::AdvancedRemoval) {
    out.theta0_ = linalg::gaussian_vector(rng, base_->dim(), sigma0_abs_);
  }
  return out;
}

void RegularizedObjective::set_wfix(Vector fixed_mask, Vector fixed_values) {
  if (fixed_mask.size() != dim() || fixed_values.size() != dim()) {
    throw std::invalid_argument("set_wfix: size mismatch");
  }
  wfix_mask_ = std::move(fixed_mask);
  wfix_values_ = std::move(fixed_values);
}

void RegularizedObjective::set_dropout_rate(double rate) {
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("set_dropout_rate: rate must be in [0, 1)");
  }
  dropout_rate_ = rate;
}

RegularizedObjective wrap(std::shared_ptr<const LossModel> base, RegMode mode, double gamma,
                          double sigma0, double sigmaD, RngStream& rng) {
  if (sigma0 < 0.0 || sigmaD < 0.0) {
    throw std::invalid_argument("wrap: sigma0 and sigmaD must be non-negative");
  }
  const Index d = base->dim();
  const double sigma0_abs = sigma0 / std::sqrt(static_cast<double>(d));
  Vector theta0 = Vector::Zero(d);
  Vector diag = Vector::Ones(d);
  switch (mode) {
    case RegMode::None:
    case RegMode::WeightDecay:
      break;
    case RegMode::Syre:
      theta0 = linalg::gaussian_vector(rng, d, sigma0_abs);
      break;
    case RegMode::AdvancedRemoval: {
      if (sigmaD == 0.0) {
        throw std::invalid_argument("wrap: ar mode requires sigmaD > 0 (distinct D entries)");
      }
      theta0 = linalg::gaussian_vector(rng, d, sigma0_abs);
      for (Index i = 0; i < d; ++i) diag(i) = rng.uniform(1.0 - sigmaD, 1.0 + sigmaD);
      break;
    }
    case RegMode::WFix:
    case RegMode::Dropout:
      throw std::invalid_argument("wrap: use wrap_wfix / wrap_dropout for these modes");
  }
  RegularizedObjective obj(std::move(base), mode, gamma, std::move(theta0), std::move(diag));
  obj.set_sigma0_abs(mode == RegMode::Syre || mode == RegMode::AdvancedRemoval ? sigma0_abs : 0.0);
  return obj;
}

RegularizedObjective wrap_wfix(std::shared_ptr<const LossModel> base, double phi, double kappa,
                               RngStream& rng, double gamma) {
  if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("wrap_wfix: phi must be in [0, 1]");
  if (kappa < 0.0) throw std::invalid_argument("wrap_wfix: kappa must be non-negative");
  const Index d = base->dim();
  Vector mask = Vector::Zero(d);
  Vector values = Vector::Zero(d);
  const double sd = std::sqrt(kappa);
  for (Index i = 0; i < d; ++i) {
    if (rng.uniform() < phi) {
      mask(i) = 1.0;
      values(i) = rng.gaussian(sd);
    }
  }
  RegularizedObjective obj(std::move(base), RegMode::WFix, gamma, Vector::Zero(d),
                           Vector::Ones(d));
  obj.set_wfix(std::move(mask), std::move(values));
  return obj;
}

RegularizedObjective wrap_dropout(std::shared_ptr<const LossModel> base, double rate,
                                  double gamma) {
  if (!base->supports_dropout()) {
    throw std::invalid_argument("wrap_dropout: base model does not support dropout");
  }
  const Index d = base->dim();
  RegularizedObjective obj(std::move(base), RegMode::Dropout, gamma, Vector::Zero(d),
                           Vector::Ones(d));
  obj.set_dropout_rate(rate);
  return obj;
}

}  // namespace syre
