#include "syre/probes.hpp"

#include <stdexcept>

#include "syre/linalg.hpp"

namespace syre {

std::string to_string(CapacityProbe::Kind kind) {
  switch (kind) {
    case CapacityProbe::Kind::FeatureCovarianceRank: return "feature_covariance_rank";
    case CapacityProbe::Kind::GradientSecondMomentRank: return "gradient_second_moment_rank";
    case CapacityProbe::Kind::EmpiricalNtkRank: return "empirical_ntk_rank";
  }
  return "feature_covariance_rank";
}

Index probe_rank(const LossModel& model, const Vector& model_theta, const Dataset& data,
                 const CapacityProbe& probe) {
  const Index n = std::min<Index>(probe.batch_size, data.size());
  if (n <= 0) throw std::invalid_argument("probe_rank: no data rows");
  const Matrix x = data.inputs.topRows(n);

  if (probe.kind == CapacityProbe::Kind::FeatureCovarianceRank) {
    if (!model.has_hidden_features()) {
      throw std::invalid_argument("probe_rank: model lacks hidden features");
    }
    Matrix h = model.hidden_features(model_theta, x);  // n x hidden
    h.rowwise() -= h.colwise().mean();
    const Matrix cov = h.transpose() * h / static_cast<double>(n);
    return linalg::effective_rank(cov, probe.threshold);
  }

  if (!model.has_sample_output()) {
    throw std::invalid_argument("probe_rank: model lacks per-sample outputs");
  }
  const Index d = model.dim();
  const Index d_out = model.output_dim();
  // per-sample gradients, one backprop at a time
  Matrix g(n * d_out, d);
  for (Index i = 0; i < n; ++i) {
    g.middleRows(i * d_out, d_out) = model.output_jacobian(model_theta, x.row(i).transpose());
  }
  if (probe.kind == CapacityProbe::Kind::GradientSecondMomentRank) {
    const Matrix m2 = g.transpose() * g / static_cast<double>(n);
    return linalg::effective_rank(m2, probe.threshold);
  }
  // empirical NTK with outputs traced out: K = sum_c G_c G_c^T, one n x d
  // slice per output so memory stays at n^2 + n d
  Matrix k = Matrix::Zero(n, n);
  Matrix slice(n, d);
  for (Index c = 0; c < d_out; ++c) {
    for (Index i = 0; i < n; ++i) slice.row(i) = g.row(i * d_out + c);
    k.noalias() += slice * slice.transpose();
  }
  return linalg::effective_rank(k, probe.threshold);
}

}  // namespace syre
