#include <cmath>

#include "experiments_impl.hpp"
#include "syre/csv.hpp"
#include "syre/linalg.hpp"
#include "syre/models.hpp"
#include "syre/symmetry.hpp"
#include "syre/train.hpp"

namespace syre::experiments {

namespace {

using csv::format_int;
using csv::format_real;
using csv::ResultTable;

struct Cell {
  std::string method;
  double gamma = 0.0;
  double phi = 0.0;
  double dropout = 0.0;
  double sigma0_rel = 0.0;
};

}  // namespace

ExperimentDef make_benchmark() {
  ExperimentDef def;
  def.name = "benchmark";
  def.summary = "objective vs degree-of-symmetry frontier on the quartic benchmark for"
                " plain GD, weight decay, bias-plus-decay, W-fix and dropout";
  def.schema = {
      {"seed", {config::FieldType::Integer, "1", "base rng seed"}},
      {"d", {config::FieldType::Integer, "200", "benchmark dimension"}},
      {"steps", {config::FieldType::Integer, "8000", "GD steps"}},
      {"lr", {config::FieldType::Real, "1e-3", "learning rate (use 1e-4 at d=1000)"}},
      {"spectrum", {config::FieldType::Text, "both", "unstructured | structured | both"}},
      {"seeds", {config::FieldType::Integer, "5", "seeds per cell"}},
      {"init_scale", {config::FieldType::Real, "0.1", "init std per coordinate"}},
      {"gamma_grid", {config::FieldType::Text, "0.1,0.3,1,2,3,5,10", "decay sweep (syre and wd)"}},
      {"sigma0_grid", {config::FieldType::Text, "1,2,4,8", "bias scales, relative units"}},
      {"wfix_grid", {config::FieldType::Text, "0.001,0.01,0.03,0.1", "W-fix phi sweep"}},
      {"wfix_kappa", {config::FieldType::Real, "0.01", "W-fix frozen variance"}},
      {"dropout_grid", {config::FieldType::Text, "0.01,0.1,0.3,0.6", "dropout sweep"}},
      {"c_th_unstructured", {config::FieldType::Real, "1e-3", "degree threshold"}},
      {"c_th_structured", {config::FieldType::Real, "1e-1", "degree threshold"}},
  };
  def.run = [](const RunContext& ctx) {
    const Index d = ctx.cfg.get_int("d");
    const Index seeds = ctx.cfg.get_int("seeds");
    const auto gamma_grid = parse_grid(ctx.cfg.get_text("gamma_grid"));
    const auto sigma0_grid = parse_grid(ctx.cfg.get_text("sigma0_grid"));
    const auto wfix_grid = parse_grid(ctx.cfg.get_text("wfix_grid"));
    const auto dropout_grid = parse_grid(ctx.cfg.get_text("dropout_grid"));
    const double kappa = ctx.cfg.get_real("wfix_kappa");

    std::vector<Cell> cells;
    cells.push_back({"vanilla", 0, 0, 0, 0});
    for (double g : gamma_grid) cells.push_back({"wd", g, 0, 0, 0});
    for (double g : gamma_grid)
      for (double s : sigma0_grid) cells.push_back({"syre", g, 0, 0, s});
    for (double p : wfix_grid) cells.push_back({"wfix", 0, p, 0, 0});
    for (double r : dropout_grid) cells.push_back({"dropout", 0, 0, r, 0});

    std::vector<std::string> spectra;
    const std::string which = ctx.cfg.get_text("spectrum");
    if (which == "both" || which == "unstructured") spectra.push_back("unstructured");
    if (which == "both" || which == "structured") spectra.push_back("structured");
    if (spectra.empty()) throw config::ConfigError("spectrum must be unstructured|structured|both");

    OptimizerConfig opt;
    opt.kind = OptimizerConfig::Kind::GD;
    opt.learning_rate = ctx.cfg.get_real("lr");
    opt.steps = ctx.cfg.get_int("steps");

    ResultTable table({"spectrum", "method", "gamma", "phi", "dropout", "sigma0_rel", "seed",
                       "objective", "degree", "c_th", "lambda_max"});
    for (const std::string& spectrum : spectra) {
      const double c_th = spectrum == "unstructured" ? ctx.cfg.get_real("c_th_unstructured")
                                                     : ctx.cfg.get_real("c_th_structured");
      for (Index s = 0; s < seeds; ++s) {
        RngStream rng(ctx.seed, 6000 + static_cast<std::uint64_t>(s) * 17 +
                                    (spectrum == "structured" ? 1 : 0));
        auto quartic = std::make_shared<models::QuarticBenchmark>(
            spectrum == "unstructured" ? models::QuarticBenchmark::unstructured(d, rng)
                                       : models::QuarticBenchmark::structured(d, rng));
        const Vector init = linalg::gaussian_vector(rng, d, ctx.cfg.get_real("init_scale"));

        for (const Cell& cell : cells) {
          RngStream wrap_rng = rng.fork(static_cast<std::uint64_t>(&cell - cells.data()) + 31);
          RegularizedObjective obj = [&] {
            if (cell.method == "vanilla") {
              return wrap(quartic, RegMode::None, 0.0, 0.0, 0.0, wrap_rng);
            }
            if (cell.method == "wd") {
              return wrap(quartic, RegMode::WeightDecay, cell.gamma, 0.0, 0.0, wrap_rng);
            }
            if (cell.method == "syre") {
              return wrap(quartic, RegMode::Syre, cell.gamma, cell.sigma0_rel, 0.0, wrap_rng);
            }
            if (cell.method == "wfix") {
              return wrap_wfix(quartic, cell.phi, kappa, wrap_rng);
            }
            return wrap_dropout(quartic, cell.dropout);
          }();
          opt.seed = ctx.seed * 1000 + static_cast<std::uint64_t>(s);
          const TrainTrace trace = train(obj, opt, Dataset{}, obj.from_model(init));
          if (trace.aborted) {
            table.save(ctx.out_dir / "benchmark.csv");
            throw NumericalAbort("benchmark: " + cell.method + " diverged at step " +
                                 std::to_string(trace.abort_step));
          }
          const Vector w = obj.to_model(trace.theta_final);
          const double objective = quartic->loss(w, Batch::empty());
          const auto report = degree_of_symmetry(w, quartic->eigenvectors(), c_th);
          table.add_row({spectrum, cell.method, format_real(cell.gamma), format_real(cell.phi),
                         format_real(cell.dropout), format_real(cell.sigma0_rel), format_int(s),
                         format_real(objective), format_int(report.degree), format_real(c_th),
                         format_real(quartic->eigenvalues()(0))});
        }
      }
    }
    table.save(ctx.out_dir / "benchmark.csv");
  };
  return def;
}

}  // namespace syre::experiments
