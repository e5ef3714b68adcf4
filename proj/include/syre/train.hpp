#pragma once

#include <functional>
#include <string>
#include <vector>

#include "syre/probes.hpp"
#include "syre/regularizer.hpp"

namespace syre {

struct OptimizerConfig {
  enum class Kind { GD, SGD, Adam };
  Kind kind = Kind::GD;
  double learning_rate = 1e-2;
  Index batch_size = 0;  // 0 means full batch; GD ignores it
  long steps = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
};

struct ProbeSeries {
  CapacityProbe probe;
  std::vector<long> steps;
  std::vector<Index> ranks;
};

struct TrainTrace {
  std::vector<double> losses;  // objective value at each step, before the update
  Vector theta_final;          // optimization coordinates
  std::vector<std::pair<long, Vector>> snapshots;
  std::vector<ProbeSeries> probes;
  bool aborted = false;
  long abort_step = -1;
  std::string abort_reason;

  double final_loss() const { return losses.empty() ? 0.0 : losses.back(); }
};

// Deterministic given (config, seed). Probes run on the base model at the
// model-coordinate parameters every probe_every steps (and at the end);
// snapshots are stored at the same cadence when keep_snapshots is set.
// A non-finite objective aborts with a diagnostic trace instead of throwing.
TrainTrace train(const RegularizedObjective& obj, const OptimizerConfig& opt,
                 const Dataset& data, const Vector& theta_init,
                 const std::vector<CapacityProbe>& probes = {}, long probe_every = 0,
                 bool keep_snapshots = false,
                 const std::function<void(long, const Vector&)>& on_step = nullptr);

}  // namespace syre
