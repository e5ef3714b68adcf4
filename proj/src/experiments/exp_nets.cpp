#include <cmath>

#include "experiments_impl.hpp"
#include "syre/csv.hpp"
#include "syre/idx.hpp"
#include "syre/models.hpp"
#include "syre/train.hpp"

namespace syre::experiments {

namespace {
using csv::format_int;
using csv::format_real;
using csv::ResultTable;
}  // namespace

ExperimentDef make_entrapment() {
  ExperimentDef def;
  def.name = "entrapment";
  def.summary = "terminal loss of low-capacity (cloned-unit) inits, graded by the number"
                " of distinct hidden units, with and without the static bias";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "base rng seed"}},
      {"dataset", {config::FieldType::Text, "synthetic", "synthetic | mnist"}},
      {"d_in", {config::FieldType::Integer, "20", "synthetic input width"}},
      {"classes", {config::FieldType::Integer, "4", "synthetic class count"}},
      {"hidden", {config::FieldType::Integer, "16", "student hidden units"}},
      {"grades", {config::FieldType::Text, "1,2,4,8,16", "#distinct hidden units at init"}},
      {"n_train", {config::FieldType::Integer, "2000", "training rows (mnist: subset)"}},
      {"steps", {config::FieldType::Integer, "4000", "Adam steps"}},
      {"lr", {config::FieldType::Real, "0.01", "Adam learning rate"}},
      {"batch", {config::FieldType::Integer, "64", "batch size"}},
      {"gamma", {config::FieldType::Real, "0.01", "decay for the syre arm"}},
      {"sigma0", {config::FieldType::Real, "0.5", "bias scale, relative units"}},
      {"init_scale", {config::FieldType::Real, "0.5", "unit init std"}},
      {"seeds", {config::FieldType::Integer, "3", "seeds"}},
      {"mnist_images", {config::FieldType::Text, "train-images-idx3-ubyte", "image file"}},
      {"mnist_labels", {config::FieldType::Text, "train-labels-idx1-ubyte", "label file"}},
  };
  def.run = [](const RunContext& ctx) {
    const bool mnist = ctx.cfg.get_text("dataset") == "mnist";
    const Index seeds = ctx.cfg.get_int("seeds");
    const auto grades = parse_grid(ctx.cfg.get_text("grades"));

    ResultTable table({"arm", "grade", "seed", "terminal_loss"});
    ResultTable curves({"arm", "grade", "seed", "step", "loss"});
    for (Index s = 0; s < seeds; ++s) {
      RngStream rng(ctx.seed, 9000 + static_cast<std::uint64_t>(s));
      Dataset data;
      if (mnist) {
        data = idx::load_mnist_idx(ctx.data_dir / ctx.cfg.get_text("mnist_images"),
                                   ctx.data_dir / ctx.cfg.get_text("mnist_labels"),
                                   ctx.cfg.get_int("n_train"));
      } else {
        data = idx::synthetic_classification(rng, ctx.cfg.get_int("n_train"),
                                             ctx.cfg.get_int("d_in"),
                                             ctx.cfg.get_int("classes"));
      }
      auto net = std::make_shared<models::TwoLayerNet>(
          data.input_dim(), ctx.cfg.get_int("hidden"), data.target_dim(),
          models::TwoLayerNet::Activation::Tanh,
          models::TwoLayerNet::LossKind::SoftmaxCrossEntropy);

      OptimizerConfig opt;
      opt.kind = OptimizerConfig::Kind::Adam;
      opt.batch_size = ctx.cfg.get_int("batch");
      opt.learning_rate = ctx.cfg.get_real("lr");
      opt.steps = ctx.cfg.get_int("steps");

      for (const double grade_real : grades) {
        const auto grade = static_cast<Index>(grade_real);
        const Vector init =
            net->cloned_unit_init(rng, grade, ctx.cfg.get_real("init_scale") /
                                                  std::sqrt(static_cast<double>(data.input_dim())));
        RngStream wrap_rng = rng.fork(40 + static_cast<std::uint64_t>(grade));
        for (const std::string& arm : {std::string("vanilla"), std::string("syre")}) {
          RegularizedObjective obj =
              arm == "vanilla"
                  ? wrap(net, RegMode::None, 0.0, 0.0, 0.0, wrap_rng)
                  : wrap(net, RegMode::Syre, ctx.cfg.get_real("gamma"),
                         ctx.cfg.get_real("sigma0"), 0.0, wrap_rng);
          opt.seed = ctx.seed * 100 + static_cast<std::uint64_t>(s);
          const Batch full = Batch::full(data);
          const TrainTrace trace =
              train(obj, opt, data, obj.from_model(init), {}, 0, false,
                    [&](long step, const Vector& theta) {
                      if (step % 500 == 0 || step == opt.steps) {
                        curves.add_row({arm, format_int(grade), format_int(s), format_int(step),
                                        format_real(net->loss(obj.to_model(theta), full))});
                      }
                    });
          if (trace.aborted) {
            table.save(ctx.out_dir / "entrapment.csv");
            throw NumericalAbort("entrapment: " + arm + " diverged");
          }
          // report the data loss of the physical parameters, decay excluded
          const double terminal = net->loss(obj.to_model(trace.theta_final), full);
          table.add_row({arm, format_int(grade), format_int(s), format_real(terminal)});
        }
      }
    }
    table.save(ctx.out_dir / "entrapment.csv");
    curves.save(ctx.out_dir / "entrapment_curves.csv");
  };
  return def;
}

ExperimentDef make_teacher_student_rank() {
  ExperimentDef def;
  def.name = "teacher-student-rank";
  def.summary = "feature-covariance rank of trained students versus input dimension,"
                " label noise and input noise";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "base rng seed"}},
      {"input_dims", {config::FieldType::Text, "5,10,20,40", "input widths"}},
      {"hidden", {config::FieldType::Integer, "64", "student hidden units (300 at full scale)"}},
      {"teacher_hidden", {config::FieldType::Integer, "64", "teacher hidden units"}},
      {"classes", {config::FieldType::Integer, "10", "output classes"}},
      {"n_train", {config::FieldType::Integer, "4000", "train rows (10000 at full scale)"}},
      {"steps", {config::FieldType::Integer, "1500", "Adam steps"}},
      {"lr", {config::FieldType::Real, "0.01", "Adam learning rate"}},
      {"batch", {config::FieldType::Integer, "64", "batch size"}},
      {"gamma", {config::FieldType::Real, "0.01", "weight decay"}},
      {"sigma0", {config::FieldType::Real, "0.01", "bias scale, relative units"}},
      {"rank_threshold", {config::FieldType::Real, "1e-4", "eigenvalue cutoff"}},
      {"rank_batch", {config::FieldType::Integer, "1000", "probe batch size"}},
      {"label_noise_grid", {config::FieldType::Text, "0", "label corruption fractions"}},
      {"input_noise_grid", {config::FieldType::Text, "0", "input noise stds"}},
      {"seeds", {config::FieldType::Integer, "1", "seeds"}},
  };
  def.run = [](const RunContext& ctx) {
    const auto dims = parse_grid(ctx.cfg.get_text("input_dims"));
    const auto label_noises = parse_grid(ctx.cfg.get_text("label_noise_grid"));
    const auto input_noises = parse_grid(ctx.cfg.get_text("input_noise_grid"));
    const Index hidden = ctx.cfg.get_int("hidden");
    const Index classes = ctx.cfg.get_int("classes");
    const Index seeds = ctx.cfg.get_int("seeds");

    CapacityProbe probe{CapacityProbe::Kind::FeatureCovarianceRank,
                        ctx.cfg.get_real("rank_threshold"), ctx.cfg.get_int("rank_batch")};

    ResultTable table(
        {"arm", "d_in", "label_noise", "input_noise", "seed", "rank", "train_loss"});
    for (Index s = 0; s < seeds; ++s) {
      for (const double d_in_real : dims) {
        const auto d_in = static_cast<Index>(d_in_real);
        for (const double label_noise : label_noises) {
          for (const double input_noise : input_noises) {
            RngStream rng(ctx.seed, 10000 + static_cast<std::uint64_t>(s) * 131 +
                                        static_cast<std::uint64_t>(d_in));
            models::TwoLayerNet teacher(d_in, ctx.cfg.get_int("teacher_hidden"), classes,
                                        models::TwoLayerNet::Activation::Tanh);
            const Vector teacher_theta =
                teacher.random_init(rng, 1.0 / std::sqrt(static_cast<double>(d_in)));
            Dataset data =
                teacher.sample_teacher_dataset(teacher_theta, ctx.cfg.get_int("n_train"), rng);
            // optional corruptions
            if (label_noise > 0.0) {
              for (Index i = 0; i < data.size(); ++i) {
                if (rng.uniform() < label_noise) {
                  data.targets.row(i).setZero();
                  const auto c = static_cast<Index>(rng.next_u64() %
                                                    static_cast<std::uint64_t>(classes));
                  data.targets(i, c) = 1.0;
                }
              }
            }
            if (input_noise > 0.0) {
              for (Index i = 0; i < data.size(); ++i)
                for (Index j = 0; j < d_in; ++j) data.inputs(i, j) += rng.gaussian(input_noise);
            }

            auto student = std::make_shared<models::TwoLayerNet>(
                d_in, hidden, classes, models::TwoLayerNet::Activation::Tanh,
                models::TwoLayerNet::LossKind::SoftmaxCrossEntropy);
            const Vector init =
                student->random_init(rng, 1.0 / std::sqrt(static_cast<double>(d_in)));

            OptimizerConfig opt;
            opt.kind = OptimizerConfig::Kind::Adam;
            opt.learning_rate = ctx.cfg.get_real("lr");
            opt.batch_size = ctx.cfg.get_int("batch");
            opt.steps = ctx.cfg.get_int("steps");
            opt.seed = ctx.seed * 100 + static_cast<std::uint64_t>(d_in);

            for (const std::string& arm : {std::string("vanilla"), std::string("syre")}) {
              RngStream wrap_rng = rng.fork(arm == "syre" ? 2 : 1);
              RegularizedObjective obj =
                  arm == "vanilla"
                      ? wrap(student, RegMode::WeightDecay, ctx.cfg.get_real("gamma"), 0.0, 0.0,
                             wrap_rng)
                      : wrap(student, RegMode::Syre, ctx.cfg.get_real("gamma"),
                             ctx.cfg.get_real("sigma0"), 0.0, wrap_rng);
              const TrainTrace trace = train(obj, opt, data, obj.from_model(init));
              if (trace.aborted) {
                table.save(ctx.out_dir / "teacher_student_rank.csv");
                throw NumericalAbort("teacher-student-rank: " + arm + " diverged");
              }
              const Vector w = obj.to_model(trace.theta_final);
              const Index rank = probe_rank(*student, w, data, probe);
              table.add_row({arm, format_int(d_in), format_real(label_noise),
                             format_real(input_noise), format_int(s), format_int(rank),
                             format_real(student->loss(w, Batch::full(data)))});
            }
          }
        }
      }
    }
    table.save(ctx.out_dir / "teacher_student_rank.csv");
  };
  return def;
}

}  // namespace syre::experiments
