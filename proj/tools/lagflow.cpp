#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagflow/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lagflow: Lagrangian mean curvature flow with prescribed gradient image"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;

  const std::vector<std::string> modes = {"flow", "steady", "legendre-check", "monitor-replay"};
  for (const auto& m : modes) {
    CLI::App* sub = app.add_subcommand(m);
    sub->add_option("--config", config_path, "run configuration file");
    sub->add_option("--set", overrides, "key=value overrides applied after the config file");
    sub->add_option("--out", out_dir, "output directory");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    lagflow::RunConfig cfg =
        config_path.empty() ? lagflow::RunConfig{} : lagflow::RunConfig::load(config_path);
    cfg.mode = lagflow::parse_mode(app.get_subcommands().front()->get_name());
    for (const auto& kv : overrides) cfg.apply_override(kv);

    if (out_dir.empty()) out_dir = cfg.output_dir;
    if (out_dir.empty()) {
      if (const char* env = std::getenv("LAGFLOW_OUT")) out_dir = env;
    }
    if (out_dir.empty()) out_dir = "out";

    return lagflow::run_config(cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "lagflow: " << e.what() << '\n';
    return 2;
  }
}
