#include <cmath>

#include "experiments_impl.hpp"
#include "syre/csv.hpp"
#include "syre/linalg.hpp"
#include "syre/models.hpp"
#include "syre/train.hpp"

namespace syre::experiments {

namespace {
using csv::format_int;
using csv::format_real;
using csv::ResultTable;

double test_loss(const Matrix& x, const Vector& y, const Vector& w) {
  return (x * w - y).squaredNorm() / static_cast<double>(x.rows());
}
}  // namespace

ExperimentDef make_ridge() {
  ExperimentDef def;
  def.name = "ridge";
  def.summary = "double-descent spike of unregularized regression at n = d and its removal"
                " by decay, with and without the static bias";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "base rng seed"}},
      {"d", {config::FieldType::Integer, "50", "feature dimension"}},
      {"alpha_grid", {config::FieldType::Text, "0.25,0.5,0.8,1,1.25,2,4", "n/d ratios"}},
      {"noise", {config::FieldType::Real, "0.5", "label noise std"}},
      {"gamma", {config::FieldType::Real, "0.1", "decay for the regularized arm"}},
      {"gamma_compare", {config::FieldType::Real, "0.01", "decay for the bias-vs-ridge check"}},
      {"sigma0", {config::FieldType::Real, "0.01", "bias scale, relative units"}},
      {"n_test", {config::FieldType::Integer, "2000", "test rows"}},
      {"seeds", {config::FieldType::Integer, "5", "seeds"}},
  };
  def.run = [](const RunContext& ctx) {
    const Index d = ctx.cfg.get_int("d");
    const double noise = ctx.cfg.get_real("noise");
    const double gamma = ctx.cfg.get_real("gamma");
    const double gamma_cmp = ctx.cfg.get_real("gamma_compare");
    const double sigma0_abs =
        ctx.cfg.get_real("sigma0") / std::sqrt(static_cast<double>(d));
    const Index n_test = ctx.cfg.get_int("n_test");
    const Index seeds = ctx.cfg.get_int("seeds");

    ResultTable table({"alpha", "n_train", "seed", "method", "gamma", "test_loss",
                       "rel_diff_vs_ridge"});
    for (Index s = 0; s < seeds; ++s) {
      RngStream rng(ctx.seed, 7000 + static_cast<std::uint64_t>(s));
      Vector teacher = linalg::gaussian_vector(rng, d, 1.0);
      teacher /= teacher.norm();
      Matrix x_test(n_test, d);
      for (Index i = 0; i < n_test; ++i)
        for (Index j = 0; j < d; ++j) x_test(i, j) = rng.gaussian(1.0);
      const Vector y_test = x_test * teacher;  // estimator error, no test noise

      for (const double alpha : parse_grid(ctx.cfg.get_text("alpha_grid"))) {
        const auto n = static_cast<Index>(std::lround(alpha * static_cast<double>(d)));
        Dataset data;
        data.inputs.resize(n, d);
        data.targets.resize(n, 1);
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < d; ++j) data.inputs(i, j) = rng.gaussian(1.0);
          data.targets(i, 0) = data.inputs.row(i).dot(teacher) + rng.gaussian(noise);
        }

        const Vector w_ols = models::least_squares_solution(data);
        const Vector w_ridge = models::biased_ridge_solution(data, gamma, Vector::Zero(d));
        table.add_row({format_real(alpha), format_int(n), format_int(s), "ols",
                       format_real(0.0), format_real(test_loss(x_test, y_test, w_ols)),
                       format_real(0.0)});
        table.add_row({format_real(alpha), format_int(n), format_int(s), "ridge",
                       format_real(gamma), format_real(test_loss(x_test, y_test, w_ridge)),
                       format_real(0.0)});

        // bias-vs-ridge closed forms at the comparison decay
        const Vector theta0 = linalg::gaussian_vector(rng, d, sigma0_abs);
        const Vector w_ridge_cmp = models::biased_ridge_solution(data, gamma_cmp, Vector::Zero(d));
        const Vector w_syre = models::biased_ridge_solution(data, gamma_cmp, theta0);
        const double rel = (w_syre - w_ridge_cmp).norm() / w_ridge_cmp.norm();
        table.add_row({format_real(alpha), format_int(n), format_int(s), "syre",
                       format_real(gamma_cmp), format_real(test_loss(x_test, y_test, w_syre)),
                       format_real(rel)});
      }
    }
    table.save(ctx.out_dir / "ridge.csv");
  };
  return def;
}

ExperimentDef make_reparam() {
  ExperimentDef def;
  def.name = "reparam";
  def.summary = "dead-neuron escape in the elementwise-product regression for plain SGD,"
                " W-fix and the bias-plus-decay objective";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "base rng seed"}},
      {"m", {config::FieldType::Integer, "200", "neuron count (u, w in R^m)"}},
      {"n_train", {config::FieldType::Integer, "256", "training rows"}},
      {"steps", {config::FieldType::Integer, "20000", "SGD steps"}},
      {"lr", {config::FieldType::Real, "2e-3", "learning rate (sum-form loss)"}},
      {"batch", {config::FieldType::Integer, "32", "SGD batch size"}},
      {"dead_fraction", {config::FieldType::Real, "0.3", "fraction of dead pairs at init"}},
      {"init_scale", {config::FieldType::Real, "0.3", "init std of live coordinates"}},
      {"gamma", {config::FieldType::Real, "0.01", "decay for the syre arm"}},
      {"sigma0", {config::FieldType::Real, "0.01", "bias scale, relative units"}},
      {"wfix_phi", {config::FieldType::Real, "0.3", "W-fix frozen fraction"}},
      {"wfix_kappa", {config::FieldType::Real, "0.01", "W-fix frozen variance"}},
      {"teacher_coef", {config::FieldType::Real, "0.1", "|beta*_i| of the dense teacher"}},
      {"seeds", {config::FieldType::Integer, "5", "seeds"}},
      {"probe_every", {config::FieldType::Integer, "500", "loss-curve cadence"}},
  };
  def.run = [](const RunContext& ctx) {
    const Index m = ctx.cfg.get_int("m");
    const Index n = ctx.cfg.get_int("n_train");
    const Index seeds = ctx.cfg.get_int("seeds");
    const double dead_fraction = ctx.cfg.get_real("dead_fraction");
    const double coef = ctx.cfg.get_real("teacher_coef");
    auto model = std::make_shared<models::ReparamRegression>(m);

    OptimizerConfig opt;
    opt.kind = OptimizerConfig::Kind::SGD;
    opt.batch_size = ctx.cfg.get_int("batch");
    opt.learning_rate = ctx.cfg.get_real("lr");
    opt.steps = ctx.cfg.get_int("steps");

    ResultTable table({"method", "seed", "terminal_dead", "terminal_loss"});
    ResultTable curves({"method", "seed", "step", "loss", "dead"});
    const long cadence = ctx.cfg.get_int("probe_every");

    for (Index s = 0; s < seeds; ++s) {
      RngStream rng(ctx.seed, 8000 + static_cast<std::uint64_t>(s));
      // dense teacher with all coefficients the same magnitude
      Vector beta(m);
      for (Index i = 0; i < m; ++i) beta(i) = rng.uniform() < 0.5 ? coef : -coef;
      Dataset data;
      data.inputs.resize(n, m);
      data.targets.resize(n, 1);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) data.inputs(i, j) = rng.gaussian(1.0);
        data.targets(i, 0) = data.inputs.row(i).dot(beta);
      }

      // init with an exact dead fraction: u_i = w_i = 0 on the first block
      Vector init(2 * m);
      const auto n_dead = static_cast<Index>(std::lround(dead_fraction * m));
      for (Index i = 0; i < m; ++i) {
        const bool dead = i < n_dead;
        init(i) = dead ? 0.0 : rng.gaussian(ctx.cfg.get_real("init_scale"));
        init(m + i) = dead ? 0.0 : rng.gaussian(ctx.cfg.get_real("init_scale"));
      }

      struct Arm {
        std::string name;
        RegularizedObjective obj;
      };
      RngStream wrap_rng = rng.fork(5);
      std::vector<Arm> arms;
      arms.push_back({"vanilla", wrap(model, RegMode::None, 0.0, 0.0, 0.0, wrap_rng)});
      arms.push_back({"wfix", wrap_wfix(model, ctx.cfg.get_real("wfix_phi"),
                                        ctx.cfg.get_real("wfix_kappa"), wrap_rng)});
      arms.push_back({"syre", wrap(model, RegMode::Syre, ctx.cfg.get_real("gamma"),
                                   ctx.cfg.get_real("sigma0"), 0.0, wrap_rng)});

      for (const Arm& arm : arms) {
        opt.seed = ctx.seed * 100 + static_cast<std::uint64_t>(s);
        const Batch full = Batch::full(data);
        const TrainTrace trace = train(
            arm.obj, opt, data, arm.obj.from_model(init), {}, 0, false,
            [&](long step, const Vector& theta) {
              if (step % cadence == 0 || step == opt.steps) {
                const Vector w = arm.obj.to_model(theta);
                curves.add_row({arm.name, format_int(s), format_int(step),
                                format_real(model->loss(w, full)),
                                format_int(model->dead_neuron_count(w))});
              }
            });
        if (trace.aborted) {
          table.save(ctx.out_dir / "reparam.csv");
          curves.save(ctx.out_dir / "reparam_curves.csv");
          throw NumericalAbort("reparam: " + arm.name + " diverged");
        }
        const Vector w = arm.obj.to_model(trace.theta_final);
        table.add_row({arm.name, format_int(s), format_int(model->dead_neuron_count(w)),
                       format_real(model->loss(w, full))});
      }
    }
    table.save(ctx.out_dir / "reparam.csv");
    curves.save(ctx.out_dir / "reparam_curves.csv");
  };
  return def;
}

}  // namespace syre::experiments
