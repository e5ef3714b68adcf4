#pragma once

#include <memory>
#include <string>

#include "syre/model.hpp"

namespace syre {

enum class RegMode { None, WeightDecay, Syre, AdvancedRemoval, WFix, Dropout };

std::string to_string(RegMode mode);
RegMode reg_mode_from_string(const std::string& s);

// Wraps a base loss as
//   L(theta) = base(theta + theta0) + gamma ||theta||_D^2,
// with theta0 a static gaussian bias sampled once per run and D a positive
// diagonal (identity unless mode is AdvancedRemoval). WFix pins a random
// fraction of coordinates to frozen values instead; Dropout delegates to the
// base model's inverted-dropout evaluation during training.
//
// The parameter the base model sees is theta + theta0 ("model coordinates");
// to_model/from_model convert between the two frames.
class RegularizedObjective : public LossModel {
 public:
  RegularizedObjective(std::shared_ptr<const LossModel> base, RegMode mode, double gamma,
                       Vector theta0, Vector reg_diag);

  Index dim() const override { return base_->dim(); }
  double loss(const Vector& theta, const Batch& batch) const override;
  Vector grad(const Vector& theta, const Batch& batch) const override;

  // training-time evaluation; rng drives dropout masks when applicable
  double train_eval(const Vector& theta, const Batch& batch, RngStream& rng,
                    Vector* grad_out) const;

  // model-coordinate view
  Vector to_model(const Vector& theta) const;
  Vector from_model(const Vector& model_theta) const;
  double model_loss(const Vector& model_theta, const Batch& batch) const;
  Vector model_grad(const Vector& model_theta, const Batch& batch) const;

  const LossModel& base() const { return *base_; }
  std::shared_ptr<const LossModel> base_ptr() const { return base_; }
  RegMode mode() const { return mode_; }
  double gamma() const { return gamma_; }
  const Vector& bias() const { return theta0_; }
  const Vector& reg_diag() const { return reg_diag_; }
  double sigma0_abs() const { return sigma0_abs_; }

  // fresh bias draw with everything else unchanged (Monte-Carlo over theta0)
  RegularizedObjective resample_bias(RngStream& rng) const;

  // WFix / Dropout configuration
  void set_wfix(Vector fixed_mask, Vector fixed_values);
  void set_dropout_rate(double rate);
  double dropout_rate() const { return dropout_rate_; }
  const Vector& wfix_mask() const { return wfix_mask_; }
  const Vector& wfix_values() const { return wfix_values_; }

  void set_sigma0_abs(double s) { sigma0_abs_ = s; }

 private:
  std::shared_ptr<const LossModel> base_;
  RegMode mode_;
  double gamma_ = 0.0;
  Vector theta0_;    // zero unless Syre/AdvancedRemoval
  Vector reg_diag_;  // ones unless AdvancedRemoval
  double sigma0_abs_ = 0.0;
  Vector wfix_mask_;    // 1 where frozen
  Vector wfix_values_;  // frozen values
  double dropout_rate_ = 0.0;
};

// Build a wrapped objective. sigma0 is stated in relative units of 1/sqrt(d):
// the absolute bias scale is sigma0 / sqrt(d). D_ii ~ Uniform(1 - sigmaD,
// 1 + sigmaD) for AdvancedRemoval, which rejects sigmaD == 0 since all
// diagonal entries must be distinct.
RegularizedObjective wrap(std::shared_ptr<const LossModel> base, RegMode mode, double gamma,
                          double sigma0, double sigmaD, RngStream& rng);

// Freeze a random fraction phi of coordinates at N(0, kappa) draws (kappa is
// a variance); their gradients are zeroed and training never moves them.
RegularizedObjective wrap_wfix(std::shared_ptr<const LossModel> base, double phi, double kappa,
                               RngStream& rng, double gamma = 0.0);

// Dropout comparison baseline; the base model must support dropout.
RegularizedObjective wrap_dropout(std::shared_ptr<const LossModel> base, double rate,
                                  double gamma = 0.0);

inline constexpr double kDefaultSigma0 = 0.01;  // relative units

}  // namespace syre
