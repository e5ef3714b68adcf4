#pragma once

#include <string>

#include "syre/model.hpp"
#include "syre/types.hpp"

namespace syre {

// Standard eigenvalue cutoffs: features/NTK, noisy-label studies, and latent
// (encoder) covariances respectively.
inline constexpr double kFeatureRankThreshold = 1e-4;
inline constexpr double kNoisyRankThreshold = 1e-3;
inline constexpr double kLatentRankThreshold = 1e-6;

// Effective-rank instruments for capacity collapse. Thresholds are absolute
// eigenvalue cutoffs; 1e-4 is the feature-covariance default.
struct CapacityProbe {
  enum class Kind { FeatureCovarianceRank, GradientSecondMomentRank, EmpiricalNtkRank };
  Kind kind = Kind::FeatureCovarianceRank;
  double threshold = 1e-4;
  Index batch_size = 1000;
};

std::string to_string(CapacityProbe::Kind kind);

// Rank of (i) the centered first-layer feature covariance, (ii) the per-sample
// output-gradient second moment, or (iii) the empirical NTK
// K_ij = sum_k grad f_k(x_i)^T grad f_k(x_j), at model-coordinate parameters.
// Uses the first min(batch_size, n) rows of `data`.
Index probe_rank(const LossModel& model, const Vector& model_theta, const Dataset& data,
                 const CapacityProbe& probe);

}  // namespace syre
