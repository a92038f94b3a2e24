// Command-line front end: parses flags and the experiment config, dispatches
// to the command drivers, and writes their tables as CSV under the output
// directory. Exit codes: 0 success, 2 configuration problem (bad flags, bad
// config file), 3 computation failure.

#include "CLI11.hpp"

#include "chemcompass/commands.hpp"
#include "chemcompass/version.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;

using chemcompass::CommandOutput;
using chemcompass::ExperimentConfig;

struct Overrides {
  std::string config_path;
  std::string out_dir;
  int jobs = -1;
  long long seed = -1;
  int grid = -1;
  bool full_theta = false;
};

ExperimentConfig resolve_config(const Overrides& ov, bool jobs_from_flag,
                                std::string& jobs_source) {
  ExperimentConfig cfg = ov.config_path.empty()
                             ? chemcompass::default_config()
                             : chemcompass::load_config_file(ov.config_path);
  jobs_source = "config";
  if (jobs_from_flag) {
    cfg.jobs = ov.jobs;
    jobs_source = "flag";
  } else if (const char* env = std::getenv("CHEMCOMPASS_JOBS")) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(env, &pos);
      if (pos != std::string(env).size() || v < 0) throw std::invalid_argument("");
      cfg.jobs = v;
      jobs_source = "env";
    } catch (const std::exception&) {
      throw chemcompass::ConfigError(std::string("CHEMCOMPASS_JOBS is not a valid job count: '") +
                                     env + "'");
    }
  }
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.grid > 0) cfg.grid = ov.grid;
  if (ov.full_theta) cfg.full_theta = true;
  cfg.validate();
  return cfg;
}

int run_command(const std::string& name,
                const std::function<CommandOutput(const ExperimentConfig&)>& fn,
                const Overrides& ov, bool jobs_from_flag) {
  ExperimentConfig cfg;
  std::string jobs_source;
  try {
    cfg = resolve_config(ov, jobs_from_flag, jobs_source);
  } catch (const chemcompass::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    CommandOutput out = fn(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    for (auto& [table_name, table] : out.tables) {
      table.add_meta("jobs_source", jobs_source);
      std::filesystem::path path = std::filesystem::path(cfg.out_dir) / (table_name + ".csv");
      table.write_csv(path.string(), cfg.precision);
      std::cout << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
      for (const auto& [key, value] : table.metadata)
        if (key == "best_d_s" || key == "d_s_controlled" || key == "d_s_uncontrolled")
          std::cout << "  " << key << " = " << value << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << name << " failed: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("chemcompass ") + chemcompass::kVersion +
               ": radical-pair compass simulation and optimization"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  auto* jobs_opt =
      app.add_option("--jobs", ov.jobs, "parallel workers (0 = auto); overrides CHEMCOMPASS_JOBS");
  app.add_option("--config", ov.config_path, "experiment configuration file (INI-like)");
  app.add_option("--out", ov.out_dir, "output directory; overrides [output] out_dir");
  app.add_option("--seed", ov.seed, "optimizer seed; overrides [run] seed");
  app.add_option("--grid", ov.grid, "theta grid size; overrides [run] grid");
  app.add_flag("--full-theta", ov.full_theta, "scan theta over [0, pi] instead of [0, pi/2]");

  const std::map<std::string, std::pair<std::string, CommandOutput (*)(const ExperimentConfig&)>>
      commands{
          {"yield", {"singlet yield vs field direction", chemcompass::cmd_yield}},
          {"fig1", {"sensitivity vs coupling strength, lifetime table", chemcompass::cmd_fig1}},
          {"fig2", {"control-field optimization with yield traces", chemcompass::cmd_fig2}},
          {"fig3", {"sensitivity vs dephasing rate and correlation", chemcompass::cmd_fig3}},
          {"dephasing-scan", {"alias of fig3", chemcompass::cmd_fig3}},
          {"optimize", {"hyperfine or control optimization report", chemcompass::cmd_optimize}},
          {"sweep", {"D_S scan over one model axis", chemcompass::cmd_sweep}},
      };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return run_command(name, commands.at(name).second, ov, jobs_opt->count() > 0);
}
