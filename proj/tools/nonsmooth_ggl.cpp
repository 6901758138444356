#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ggl/experiment.hpp"

namespace {

void report(const ggl::RunResult& r) {
  if (r.exit_code == 1) {
    std::cerr << "error: " << r.error << "\n";
    return;
  }
  const auto& s = r.summary;
  std::printf("%s/%s: %zu steps, min gap %.3e m, E %.6g -> %.6g J, wall %.2f s -> %s\n", s.model.c_str(),
              s.scheme.c_str(), s.steps, s.min_gap, s.energy_initial, s.energy_final, s.wall_time,
              r.trajectory_path.string().c_str());
  if (s.nonconverged_steps > 0) std::printf("  %zu non-converged steps\n", s.nonconverged_steps);
}

int run_config_file(const std::string& path, const std::string& out_dir) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  ggl::RunConfig cfg;
  try {
    cfg = ggl::parse_config(buf.str());
  } catch (const ggl::ConfigError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    cfg.output = (std::filesystem::path(out_dir) / std::filesystem::path(cfg.output).filename()).string();
  }
  const auto result = ggl::run_experiment(cfg);
  report(result);
  return result.exit_code;
}

int run_preset(const std::string& name, bool full, const std::string& out_dir) {
  ggl::Preset p;
  try {
    p = ggl::preset(name, full);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << dir.string() << "\n";
    return 1;
  }
  const auto sweep = ggl::run_preset(p, dir, ggl::sweep_threads());
  for (const auto& r : sweep.runs) report(r);
  if (sweep.unified_over_moreau) std::printf("wall time ggl_unified/moreau: %.2f\n", *sweep.unified_over_moreau);
  std::printf("summary: %s\n", sweep.summary_path.string().c_str());
  return sweep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timestepping schemes for impacting mechanical systems"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a configuration file or a named preset");
  std::string config_path, preset_name, out_dir;
  bool full = false;
  auto* config_opt = run->add_option("--config", config_path, "key=value run configuration")->check(CLI::ExistingFile);
  auto* preset_opt = run->add_option("--preset", preset_name, "preset name (see list-presets)");
  config_opt->excludes(preset_opt);
  run->add_flag("--full", full, "4 s horizons for slider-crank presets");
  run->add_option("--out", out_dir, "output directory");

  auto* list = app.add_subcommand("list-presets", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (list->parsed()) {
    for (const auto& name : ggl::preset_names()) {
      std::printf("%-18s %s\n", name.c_str(), ggl::preset(name).description.c_str());
    }
    return 0;
  }
  if (config_path.empty() == preset_name.empty()) {
    std::cerr << "error: run needs exactly one of --config or --preset\n";
    return 1;
  }
  if (!config_path.empty()) return run_config_file(config_path, out_dir);
  return run_preset(preset_name, full, out_dir);
}
