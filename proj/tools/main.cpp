// minkdim: run one dimension experiment from a JSON config.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenario.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitPipeline = 2;

struct RunOptions {
  std::string config;
  std::string out = ".";
  std::vector<std::string> overrides;
};

void add_run_options(CLI::App* cmd, RunOptions& opts, bool config_required) {
  auto* c = cmd->add_option("--config,-c", opts.config, "JSON scenario config");
  if (config_required) c->required();
  cmd->add_option("--out,-o", opts.out, "Output directory")->capture_default_str();
  cmd->add_option("--override,-s", opts.overrides,
                  "Set a config key, e.g. params.alpha=0.5 (repeatable)");
}

int execute(const RunOptions& opts, const std::string& forced_kind) {
  using namespace minkdim;
  try {
    std::vector<std::string> overrides;
    if (!forced_kind.empty()) overrides.push_back("kind=\"" + forced_kind + "\"");
    overrides.insert(overrides.end(), opts.overrides.begin(), opts.overrides.end());
    const cli::ScenarioConfig config = cli::load_config(opts.config, overrides);
    const cli::ResultRecord record = cli::run_scenario(config, opts.out);
    std::cout << cli::to_json(record).dump(2) << "\n";
    return 0;
  } catch (const cli::ConfigError& e) {
    std::cerr << "minkdim: invalid config: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "minkdim: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "minkdim: " << e.what() << "\n";
    return kExitPipeline;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical Minkowski dimension of trajectories, orbits and spirals"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  add_run_options(run, run_opts, true);

  std::vector<std::pair<CLI::App*, std::string>> kind_commands;
  std::vector<RunOptions> kind_opts(std::size(minkdim::cli::kKinds));
  std::size_t i = 0;
  for (const char* kind : minkdim::cli::kKinds) {
    auto* cmd = app.add_subcommand(kind, std::string("Run a ") + kind +
                                             " scenario; the config file is optional");
    add_run_options(cmd, kind_opts[i++], false);
    kind_commands.emplace_back(cmd, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*run) return execute(run_opts, "");
  for (std::size_t k = 0; k < kind_commands.size(); ++k) {
    if (*kind_commands[k].first) return execute(kind_opts[k], kind_commands[k].second);
  }
  return kExitValidation;
}
