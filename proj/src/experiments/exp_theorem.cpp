#include <cmath>

#include "experiments_impl.hpp"
#include "syre/csv.hpp"
#include "syre/groups.hpp"
#include "syre/linalg.hpp"
#include "syre/models.hpp"
#include "syre/symmetry.hpp"

namespace syre::experiments {

namespace {

using csv::format_int;
using csv::format_real;
using csv::ResultTable;

std::vector<double> log_grid(double lo, double hi, Index points) {
  std::vector<double> out;
  for (Index i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(lo * std::pow(hi / lo, t));
  }
  return out;
}

// Sign-flip invariant toy loss sum_i c_i w_i^2 + (w^T w)^2; every coordinate
// sign flip (and any product of them) leaves it unchanged.
class FlipInvariantLoss : public LossModel {
 public:
  explicit FlipInvariantLoss(Vector curvatures) : c_(std::move(curvatures)) {}
  Index dim() const override { return c_.size(); }
  double loss(const Vector& w, const Batch&) const override {
    const double sq = w.squaredNorm();
    return w.dot(c_.cwiseProduct(w)) + sq * sq;
  }
  Vector grad(const Vector& w, const Batch&) const override {
    return 2.0 * c_.cwiseProduct(w) + 4.0 * w.squaredNorm() * w;
  }

 private:
  Vector c_;
};

}  // namespace

ExperimentDef make_theorem3() {
  ExperimentDef def;
  def.name = "theorem3";
  def.summary = "loss-gap strength |Delta| vs gamma*sigma0 scaling, plus the"
                " gradient-projection lower bound at stationary symmetric points";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "rng seed"}},
      {"gamma", {config::FieldType::Real, "0.1", "weight decay"}},
      {"gs_min", {config::FieldType::Real, "1e-4", "smallest gamma*sigma0 (absolute units)"}},
      {"gs_max", {config::FieldType::Real, "1e-2", "largest gamma*sigma0 (absolute units)"}},
      {"gs_points", {config::FieldType::Integer, "9", "grid points"}},
      {"draws", {config::FieldType::Integer, "100", "bias draws per grid point"}},
      {"d_in", {config::FieldType::Integer, "4", "net input width"}},
      {"hidden", {config::FieldType::Integer, "4", "net hidden width"}},
      {"d_out", {config::FieldType::Integer, "2", "net output width"}},
      {"batch", {config::FieldType::Integer, "32", "data rows for loss evaluations"}},
  };
  def.run = [](const RunContext& ctx) {
    RngStream rng(ctx.seed, 3);
    const Index d_in = ctx.cfg.get_int("d_in");
    const Index hidden = ctx.cfg.get_int("hidden");
    const Index d_out = ctx.cfg.get_int("d_out");
    auto net = std::make_shared<models::TwoLayerNet>(d_in, hidden, d_out,
                                                     models::TwoLayerNet::Activation::Tanh);
    const ReflectionSymmetry sym = net->unit_sign_flip(0);
    const double d = static_cast<double>(net->dim());

    // evaluation data and a fixed generic probe point with ||P theta|| > 0
    Dataset data;
    data.inputs.resize(ctx.cfg.get_int("batch"), d_in);
    data.targets.resize(ctx.cfg.get_int("batch"), d_out);
    for (Index i = 0; i < data.inputs.rows(); ++i) {
      for (Index j = 0; j < d_in; ++j) data.inputs(i, j) = rng.gaussian(1.0);
      for (Index j = 0; j < d_out; ++j) data.targets(i, j) = rng.gaussian(1.0);
    }
    const Batch batch = Batch::full(data);
    const Vector probe = linalg::gaussian_vector(rng, net->dim(), 1.0);
    const Vector stationary = Vector::Zero(net->dim());  // all-zero net: grad = 0, P theta = 0

    const double gamma = ctx.cfg.get_real("gamma");
    const auto grid = log_grid(ctx.cfg.get_real("gs_min"), ctx.cfg.get_real("gs_max"),
                               ctx.cfg.get_int("gs_points"));
    const Index draws = ctx.cfg.get_int("draws");

    ResultTable table({"seed", "gamma_sigma0", "draw", "abs_delta", "corollary_grad_norm"});
    for (const double gs : grid) {
      const double sigma0_rel = (gs / gamma) * std::sqrt(d);  // wrap() divides by sqrt(d)
      for (Index t = 0; t < draws; ++t) {
        auto obj = wrap(net, RegMode::Syre, gamma, sigma0_rel, 0.0, rng);
        const double delta = breaking_strength(obj, probe, sym, batch);
        const double gpn = grad_projection_norm(obj, stationary, sym, batch);
        if (!std::isfinite(delta) || !std::isfinite(gpn)) {
          throw NumericalAbort("theorem3: non-finite instrument value");
        }
        table.add_row({format_int(static_cast<long>(ctx.seed)), format_real(gs), format_int(t),
                       format_real(std::abs(delta)), format_real(gpn)});
      }
    }
    table.save(ctx.out_dir / "theorem3.csv");
  };
  return def;
}

ExperimentDef make_theorem4() {
  ExperimentDef def;
  def.name = "theorem4";
  def.summary = "required gamma*sigma0 for Pr(min_i |Delta_i| > eps) >= delta vs the"
                " number of reflections N";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "rng seed"}},
      {"dim", {config::FieldType::Integer, "16", "parameter dimension"}},
      {"n_list", {config::FieldType::Text, "2,4,8,16", "reflection counts"}},
      {"draws", {config::FieldType::Integer, "1000", "bias draws"}},
      {"gamma", {config::FieldType::Real, "1.0", "weight decay"}},
      {"sigma0_abs", {config::FieldType::Real, "0.01", "reference bias scale (absolute)"}},
      {"epsilon", {config::FieldType::Real, "1e-3", "target strength"}},
      {"delta", {config::FieldType::Real, "0.9", "target confidence"}},
  };
  def.run = [](const RunContext& ctx) {
    RngStream rng(ctx.seed, 4);
    const Index dim = ctx.cfg.get_int("dim");
    const double gamma = ctx.cfg.get_real("gamma");
    const double sigma0_abs = ctx.cfg.get_real("sigma0_abs");
    const double sigma0_rel = sigma0_abs * std::sqrt(static_cast<double>(dim));
    const double epsilon = ctx.cfg.get_real("epsilon");
    const double delta = ctx.cfg.get_real("delta");
    const Index draws = ctx.cfg.get_int("draws");

    auto base = std::make_shared<models::ConstantModel>(dim);
    // coordinate reflections P_i = e_i e_i^T about the origin
    std::vector<ReflectionSymmetry> reflections;
    for (Index i = 0; i < dim; ++i) {
      Matrix o = Matrix::Zero(dim, 1);
      o(i, 0) = 1.0;
      reflections.push_back(ReflectionSymmetry::about_origin(std::move(o)));
    }
    const Vector probe = Vector::Ones(dim);

    ResultTable table({"seed", "n_reflections", "quantile_min_abs_delta", "required_gamma_sigma0"});
    for (const double n_real : parse_grid(ctx.cfg.get_text("n_list"))) {
      const auto n = static_cast<Index>(n_real);
      std::vector<double> mins;
      mins.reserve(static_cast<size_t>(draws));
      for (Index t = 0; t < draws; ++t) {
        auto obj = wrap(base, RegMode::Syre, gamma, sigma0_rel, 0.0, rng);
        double min_abs = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < n; ++i) {
          min_abs = std::min(min_abs, std::abs(breaking_strength(obj, probe, reflections[i])));
        }
        mins.push_back(min_abs);
      }
      // Pr(min > eps) >= delta at the reference scale iff eps <= q, the
      // (1 - delta) quantile; strengths are linear in gamma*sigma0, so the
      // required product rescales the reference by eps / q.
      const double q = csv::quantile(mins, 1.0 - delta);
      const double required = (epsilon / q) * gamma * sigma0_abs;
      table.add_row({format_int(static_cast<long>(ctx.seed)), format_int(n), format_real(q),
                     format_real(required)});
    }
    table.save(ctx.out_dir / "theorem4.csv");
  };
  return def;
}

ExperimentDef make_theorem5() {
  ExperimentDef def;
  def.name = "theorem5";
  def.summary = "group-averaging projector identities, nested-subgroup reduction, and"
                " removal-strength scaling on Z2^k, C6, S3";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "rng seed"}},
      {"draws", {config::FieldType::Integer, "8000", "bias draws for strength medians"}},
      {"x_samples", {config::FieldType::Integer, "1000", "random vectors for the nesting check"}},
      {"gamma", {config::FieldType::Real, "0.1", "weight decay"}},
      {"sigma0_abs", {config::FieldType::Real, "0.01", "bias scale (absolute)"}},
      {"sigma_d", {config::FieldType::Real, "0.1", "diagonal spread for the ar variant"}},
  };
  def.run = [](const RunContext& ctx) {
    RngStream rng(ctx.seed, 5);
    const Index draws = ctx.cfg.get_int("draws");
    const Index x_samples = ctx.cfg.get_int("x_samples");
    const double gamma = ctx.cfg.get_real("gamma");
    const double sigma0_abs = ctx.cfg.get_real("sigma0_abs");

    ResultTable table({"seed", "rep", "check", "value", "expected"});
    auto emit = [&](const std::string& rep, const std::string& check, double value,
                    double expected) {
      table.add_row({format_int(static_cast<long>(ctx.seed)), rep, check, format_real(value),
                      format_real(expected)});
    };

    struct Rep {
      std::string name;
      groups::FiniteGroupRep group;
      Index expect_subgroups;
      Index expect_minimal;
      Index expect_gen_size;
    };
    // Z2^4 with generators flipping 1, 2, 4 and 8 coordinates: rank(I - Vbar)
    // over the generator subgroups spans {1, 2, 4, 8}
    const std::vector<std::vector<Index>> flip_sets = {
        {0}, {1, 2}, {3, 4, 5, 6}, {7, 8, 9, 10, 11, 12, 13, 14}};
    std::vector<Rep> reps;
    reps.push_back({"z2_4", groups::sign_flip_group(16, flip_sets), 67, 15, 4});
    reps.push_back({"c6", groups::cyclic_rotation_group(6, 4), 4, 2, 1});
    reps.push_back({"s3", groups::permutation_group(3), 6, 4, 2});

    for (const Rep& rep : reps) {
      const auto& g = rep.group;
      const auto catalog = groups::enumerate_subgroups(g, g.order());
      emit(rep.name, "subgroup_count", static_cast<double>(catalog.subgroups.size()),
           static_cast<double>(rep.expect_subgroups));
      emit(rep.name, "minimal_count", static_cast<double>(catalog.minimal.size()),
           static_cast<double>(rep.expect_minimal));
      emit(rep.name, "min_generating_set", static_cast<double>(catalog.minimal_generating_set_size),
           static_cast<double>(rep.expect_gen_size));

      // projector identities: Ubar^2 = Ubar and u Ubar = Ubar for all u
      double worst_proj = 0.0;
      for (const auto& sub : catalog.subgroups) {
        const Matrix ubar = groups::group_average(g, sub);
        worst_proj = std::max(worst_proj, (ubar * ubar - ubar).cwiseAbs().maxCoeff());
        for (Index e : sub) {
          worst_proj =
              std::max(worst_proj, (g.element(e) * ubar - ubar).cwiseAbs().maxCoeff());
        }
      }
      emit(rep.name, "projector_identity_error", worst_proj, 0.0);

      // nested reduction: for V inside U, ||(I - Ubar) x|| >= ||(I - Vbar) x||
      double worst_nesting = 0.0;
      for (size_t a = 0; a < catalog.subgroups.size(); ++a) {
        for (size_t b = 0; b < catalog.subgroups.size(); ++b) {
          if (a == b) continue;
          const auto& small = catalog.subgroups[a];
          const auto& large = catalog.subgroups[b];
          if (!std::includes(large.begin(), large.end(), small.begin(), small.end())) continue;
          const Matrix vbar = groups::group_average(g, small);
          const Matrix ubar = groups::group_average(g, large);
          RngStream xs = rng.fork(1000 + static_cast<std::uint64_t>(a * 131 + b));
          for (Index t = 0; t < x_samples; ++t) {
            const Vector x = linalg::gaussian_vector(xs, g.dim(), 1.0);
            const double broken_small = (x - vbar * x).norm();
            const double broken_large = (x - ubar * x).norm();
            worst_nesting = std::max(worst_nesting, broken_small - broken_large);
          }
        }
      }
      emit(rep.name, "nesting_violation", worst_nesting, 0.0);
    }

    // strength scaling on Z2^4: median Delta_V over bias draws, generator
    // subgroups of broken rank 1, 2, 4, 8
    {
      const auto& g = reps[0].group;
      const Index d = g.dim();
      Vector curv(d);
      for (Index i = 0; i < d; ++i) curv(i) = 1.0 + rng.uniform();
      auto invariant = std::make_shared<FlipInvariantLoss>(curv);
      auto obj = wrap(invariant, RegMode::Syre, gamma,
                      sigma0_abs * std::sqrt(static_cast<double>(d)), 0.0, rng);
      const Vector theta = Vector::Zero(d);  // invariant subspace of the full group

      std::vector<std::vector<Index>> generator_subs;
      for (const auto& coords : flip_sets) {
        Matrix m = Matrix::Identity(d, d);
        for (Index c : coords) m(c, c) = -1.0;
        for (Index e = 0; e < g.order(); ++e) {
          if ((g.element(e) - m).cwiseAbs().maxCoeff() < 1e-12) {
            generator_subs.push_back({0, e});
            break;
          }
        }
      }
      std::vector<double> norm_medians;
      RngStream draws_rng = rng.fork(77);
      for (const auto& sub : generator_subs) {
        const Matrix vbar = groups::group_average(g, sub);
        const double rank = std::round((Matrix::Identity(d, d) - vbar).trace());
        std::vector<double> strengths;
        RngStream local = draws_rng.fork(static_cast<std::uint64_t>(sub[1]));
        for (Index t = 0; t < draws; ++t) {
          const auto draw = obj.resample_bias(local);
          strengths.push_back(groups::removal_strength(draw, theta, g, sub));
        }
        const double med = csv::median(strengths);
        emit("z2_4", "median_strength_rank_" + std::to_string(static_cast<long>(rank)), med,
             2.0 * gamma * sigma0_abs * std::sqrt(rank));
        norm_medians.push_back(med / std::sqrt(rank));
      }
      const double ratio = *std::max_element(norm_medians.begin(), norm_medians.end()) /
                           *std::min_element(norm_medians.begin(), norm_medians.end());
      emit("z2_4", "sqrt_rank_scaling_ratio", ratio, 1.0);

      // closed-form check: Delta_V = 2 gamma ||(I - Vbar) theta0|| exactly for
      // syre, within sigma_d relative error for the anisotropic variant
      double worst_rel_syre = 0.0;
      RngStream check_rng = rng.fork(88);
      for (Index t = 0; t < 200; ++t) {
        const auto draw = obj.resample_bias(check_rng);
        const Matrix vbar = groups::group_average(g, generator_subs[2]);
        const double measured = groups::removal_strength(draw, theta, g, generator_subs[2]);
        const double predicted = 2.0 * gamma * (draw.bias() - vbar * draw.bias()).norm();
        if (predicted > 0.0) {
          worst_rel_syre = std::max(worst_rel_syre, std::abs(measured - predicted) / predicted);
        }
      }
      emit("z2_4", "closed_form_rel_error_syre", worst_rel_syre, 0.0);

      const double sigma_d = ctx.cfg.get_real("sigma_d");
      auto obj_ar = wrap(invariant, RegMode::AdvancedRemoval, gamma,
                         sigma0_abs * std::sqrt(static_cast<double>(d)), sigma_d, check_rng);
      double worst_rel_ar = 0.0;
      for (Index t = 0; t < 200; ++t) {
        const auto draw = obj_ar.resample_bias(check_rng);
        const Matrix vbar = groups::group_average(g, generator_subs[2]);
        const double measured = groups::removal_strength(draw, theta, g, generator_subs[2]);
        const double predicted = 2.0 * gamma * (draw.bias() - vbar * draw.bias()).norm();
        if (predicted > 0.0) {
          worst_rel_ar = std::max(worst_rel_ar, std::abs(measured - predicted) / predicted);
        }
      }
      emit("z2_4", "closed_form_rel_error_ar", worst_rel_ar, sigma_d);

      // abelian reduction: the min over all nontrivial subgroups equals the
      // min over the generator subgroups for every draw
      double worst_reduction = 0.0;
      RngStream red_rng = rng.fork(99);
      const auto profile_catalog = groups::enumerate_subgroups(g, g.order());
      std::vector<Matrix> all_vbars;
      for (const auto& sub : profile_catalog.subgroups) {
        if (sub.size() > 1) all_vbars.push_back(groups::group_average(g, sub));
      }
      std::vector<Matrix> gen_vbars;
      for (const auto& sub : generator_subs) gen_vbars.push_back(groups::group_average(g, sub));
      for (Index t = 0; t < 500; ++t) {
        const auto draw = obj.resample_bias(red_rng);
        const Vector grad = draw.model_grad(theta, Batch::empty());
        double min_all = std::numeric_limits<double>::infinity();
        for (const Matrix& vbar : all_vbars) min_all = std::min(min_all, (grad - vbar * grad).norm());
        double min_gen = std::numeric_limits<double>::infinity();
        for (const Matrix& vbar : gen_vbars) min_gen = std::min(min_gen, (grad - vbar * grad).norm());
        worst_reduction = std::max(worst_reduction, min_gen - min_all);
      }
      emit("z2_4", "abelian_reduction_violation", worst_reduction, 0.0);

      // doubling gamma*sigma0 doubles the achievable confidence threshold
      const auto catalog16 = groups::enumerate_subgroups(g, 2);
      RngStream prof_rng = rng.fork(111);
      const auto profile1 =
          groups::min_strength_profile(obj, theta, g, catalog16, 600, 0.9, prof_rng);
      auto obj2 = wrap(invariant, RegMode::Syre, 2.0 * gamma,
                       sigma0_abs * std::sqrt(static_cast<double>(d)), 0.0, prof_rng);
      const auto profile2 =
          groups::min_strength_profile(obj2, theta, g, catalog16, 600, 0.9, prof_rng);
      emit("z2_4", "epsilon_doubling_ratio",
           profile2.epsilon_at_confidence / profile1.epsilon_at_confidence, 2.0);
    }

    table.save(ctx.out_dir / "theorem5.csv");
  };
  return def;
}

}  // namespace syre::experiments
