#include "syre/train.hpp"

#include <cmath>
#include <numeric>

namespace syre {

namespace {

// sample `count` distinct row indices, deterministic partial Fisher-Yates
std::vector<Index> sample_rows(std::vector<Index>& pool, Index count, RngStream& rng) {
  const Index n = static_cast<Index>(pool.size());
  std::vector<Index> picked(static_cast<size_t>(count));
  for (Index i = 0; i < count; ++i) {
    const Index j = i + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    picked[static_cast<size_t>(i)] = pool[static_cast<size_t>(i)];
  }
  return picked;
}

}  // namespace

TrainTrace train(const RegularizedObjective& obj, const OptimizerConfig& opt,
                 const Dataset& data, const Vector& theta_init,
                 const std::vector<CapacityProbe>& probes, long probe_every,
                 bool keep_snapshots, const std::function<void(long, const Vector&)>& on_step) {
  if (theta_init.size() != obj.dim()) {
    throw std::invalid_argument("train: theta_init does not match objective dimension");
  }
  if (opt.learning_rate <= 0.0) {
    throw std::invalid_argument("train: learning rate must be positive");
  }
  const Index n = data.size();
  // GD is full-batch by definition; SGD and Adam subsample when asked to
  const bool minibatch = opt.kind != OptimizerConfig::Kind::GD && opt.batch_size > 0 && n > 0 &&
                         opt.batch_size < n;

  TrainTrace trace;
  trace.losses.reserve(static_cast<size_t>(opt.steps));
  for (const CapacityProbe& p : probes) {
    trace.probes.push_back(ProbeSeries{p, {}, {}});
  }

  RngStream rng(opt.seed, 0xB47C);
  Vector theta = theta_init;
  Vector grad(theta.size());
  Vector m = Vector::Zero(theta.size());
  Vector v = Vector::Zero(theta.size());

  std::vector<Index> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  Matrix batch_x, batch_y;

  auto run_probes = [&](long step, const Vector& current) {
    if (trace.probes.empty() && !keep_snapshots) return;
    const Vector model_theta = obj.to_model(current);
    for (ProbeSeries& series : trace.probes) {
      series.steps.push_back(step);
      series.ranks.push_back(probe_rank(obj.base(), model_theta, data, series.probe));
    }
    if (keep_snapshots) trace.snapshots.emplace_back(step, current);
  };

  for (long step = 0; step < opt.steps; ++step) {
    const Batch* batch = &Batch::empty();
    Batch full = n > 0 ? Batch::full(data) : Batch::empty();
    Batch mini = Batch::empty();
    if (minibatch) {
      const auto rows = sample_rows(pool, opt.batch_size, rng);
      batch_x.resize(opt.batch_size, data.inputs.cols());
      batch_y.resize(opt.batch_size, data.targets.cols());
      for (Index i = 0; i < opt.batch_size; ++i) {
        batch_x.row(i) = data.inputs.row(rows[static_cast<size_t>(i)]);
        batch_y.row(i) = data.targets.row(rows[static_cast<size_t>(i)]);
      }
      mini = Batch(batch_x, batch_y);
      batch = &mini;
    } else if (n > 0) {
      batch = &full;
    }

    const double value = obj.train_eval(theta, *batch, rng, &grad);
    trace.losses.push_back(value);
    if (!std::isfinite(value) || !grad.allFinite()) {
      trace.aborted = true;
      trace.abort_step = step;
      trace.abort_reason = !std::isfinite(value) ? "non-finite objective" : "non-finite gradient";
      trace.theta_final = theta;
      return trace;
    }

    if (probe_every > 0 && step % probe_every == 0) run_probes(step, theta);
    if (on_step) on_step(step, theta);

    switch (opt.kind) {
      case OptimizerConfig::Kind::GD:
      case OptimizerConfig::Kind::SGD:
        theta -= opt.learning_rate * grad;
        break;
      case OptimizerConfig::Kind::Adam: {
        const double t = static_cast<double>(step + 1);
        m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
        v = opt.beta2 * v + (1.0 - opt.beta2) * grad.cwiseProduct(grad);
        const double mc = 1.0 - std::pow(opt.beta1, t);
        const double vc = 1.0 - std::pow(opt.beta2, t);
        theta -= opt.learning_rate *
                 (m / mc).cwiseQuotient(((v / vc).cwiseSqrt().array() + opt.epsilon).matrix());
        break;
      }
    }
  }

  trace.theta_final = theta;
  if (probe_every > 0) run_probes(opt.steps, theta);
  if (on_step) on_step(opt.steps, theta);
  return trace;
}

}  // namespace syre
