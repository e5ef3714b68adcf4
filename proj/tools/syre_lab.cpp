#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "syre/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"syre-lab: symmetry-removal experiments at desk scale"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a registered experiment");
  std::string name, config_path, out_dir;
  std::uint64_t seed = 1;
  run->add_option("experiment", name, "experiment name (see `syre-lab list`)")->required();
  run->add_option("--config", config_path, "key = value config file");
  auto* seed_opt = run->add_option("--seed", seed, "seed override");
  run->add_option("--out", out_dir, "output directory (default out/<experiment>)");

  auto* list = app.add_subcommand("list", "list experiments and their config keys");

  auto* report = app.add_subcommand("report", "summarize a results directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "directory with result CSVs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& def : syre::experiments::registry()) {
      std::cout << def.name << "\n    " << def.summary << "\n    keys:";
      for (const auto& [key, spec] : def.schema) {
        std::cout << ' ' << key << "=" << spec.default_value;
      }
      std::cout << "\n";
    }
    return 0;
  }
  if (run->parsed()) {
    return syre::experiments::run_cli(name, config_path, seed_opt->count() > 0, seed, out_dir);
  }
  if (report->parsed()) {
    try {
      std::ofstream file(std::filesystem::path(report_dir) / "summary.txt");
      std::ostringstream buffer;
      syre::experiments::write_report(report_dir, buffer);
      file << buffer.str();
      std::cout << buffer.str();
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "report failed: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
