#include <cstdlib>
#include <fstream>
#include <iostream>

#include "experiments_impl.hpp"
#include "syre/experiments.hpp"

namespace syre::experiments {

const std::vector<ExperimentDef>& registry() {
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> v;
    v.push_back(make_benchmark());
    v.push_back(make_ridge());
    v.push_back(make_reparam());
    v.push_back(make_entrapment());
    v.push_back(make_teacher_student_rank());
    v.push_back(make_theorem3());
    v.push_back(make_theorem4());
    v.push_back(make_theorem5());
    v.push_back(make_prop1_prop2());
    v.push_back(make_ntk_rank());
    return v;
  }();
  return defs;
}

const ExperimentDef* find(const std::string& name) {
  for (const ExperimentDef& def : registry()) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::string cell;
  std::istringstream ss(text);
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) {
      throw config::ConfigError("bad grid entry: '" + cell + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw config::ConfigError("empty grid");
  return out;
}

config::Config resolved_config(
    const ExperimentDef& def,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  config::Config cfg = config::from_defaults(def.schema);
  for (const auto& [key, value] : overrides) cfg.set(key, value);
  return cfg;
}

void run_experiment(const ExperimentDef& def, const config::Config& cfg,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path data_dir;
  if (const char* env = std::getenv(kDataDirEnv)) data_dir = env;
  const RunContext ctx{cfg, static_cast<std::uint64_t>(cfg.get_int("seed")), out_dir, data_dir};

  // manifest first: the resolved config echo, which re-parses to an equal config
  {
    std::ofstream manifest(out_dir / "manifest.txt", std::ios::binary);
    manifest << cfg.serialize();
  }
  auto write_info = [&](const std::string& status, const std::string& detail) {
    std::ofstream info(out_dir / "run_info.txt", std::ios::binary);
    info << "experiment = " << def.name << '\n';
    info << "status = " << status << '\n';
    if (!detail.empty()) info << "detail = " << detail << '\n';
  };
  try {
    def.run(ctx);
  } catch (const NumericalAbort& e) {
    write_info("aborted", e.what());
    throw;
  }
  write_info("ok", "");
}

int run_cli(const std::string& name, const std::string& config_path, bool has_seed,
            std::uint64_t seed, const std::string& out_dir) {
  const ExperimentDef* def = find(name);
  if (!def) {
    std::cerr << "unknown experiment: " << name << "\nuse `syre-lab list`\n";
    return 2;
  }
  try {
    config::Config cfg = config_path.empty() ? config::from_defaults(def->schema)
                                             : config::parse_file(config_path, def->schema);
    if (has_seed) cfg.set("seed", std::to_string(seed));
    const std::filesystem::path out =
        out_dir.empty() ? std::filesystem::path("out") / name : std::filesystem::path(out_dir);
    run_experiment(*def, cfg, out);
    std::cout << "wrote results to " << out.string() << '\n';
    return 0;
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace syre::experiments
