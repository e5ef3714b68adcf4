#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "syre/config.hpp"

namespace syre::experiments {

// Raised when an experiment hits non-finite numerics; the CLI maps it to
// exit code 3 after flagging partial outputs.
struct NumericalAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunContext {
  config::Config cfg;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  std::filesystem::path data_dir;  // from SYRE_DATA_DIR, may be empty
};

struct ExperimentDef {
  std::string name;
  std::string summary;
  config::Schema schema;
  std::function<void(const RunContext&)> run;
};

const std::vector<ExperimentDef>& registry();
const ExperimentDef* find(const std::string& name);

inline constexpr const char* kDataDirEnv = "SYRE_DATA_DIR";

// Resolve config (file optional), run, and write manifest.txt (the resolved
// config echo) plus run_info.txt. Returns 0 on success, 2 on config errors,
// 3 on numerical aborts.
int run_cli(const std::string& name, const std::string& config_path, bool has_seed,
            std::uint64_t seed, const std::string& out_dir);

// Convenience used by the acceptance suite: run with overrides applied to the
// experiment's defaults.
config::Config resolved_config(const ExperimentDef& def,
                               const std::vector<std::pair<std::string, std::string>>& overrides);
void run_experiment(const ExperimentDef& def, const config::Config& cfg,
                    const std::filesystem::path& out_dir);

// Per-directory summary statistics and gnuplot scripts.
void write_report(const std::filesystem::path& dir, std::ostream& out);

std::vector<double> parse_grid(const std::string& text);  // comma-separated reals

}  // namespace syre::experiments
