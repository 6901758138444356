#include "ggl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "ggl/output.hpp"
#include "json.hpp"

namespace ggl {
namespace {

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [iters, count] : s.iteration_histogram) hist[std::to_string(iters)] = count;
  return {
      {"model", s.model},
      {"scheme", s.scheme},
      {"dt", s.dt},
      {"t_end", s.t_end},
      {"steps", s.steps},
      {"min_gap", s.min_gap},
      {"violation_time", s.violation_time},
      {"per_contact_min_gap", s.per_contact_min},
      {"E0", s.energy_initial},
      {"E_end", s.energy_final},
      {"max_energy_jump", s.max_energy_jump},
      {"newton_iteration_histogram", hist},
      {"nonconverged_steps", s.nonconverged_steps},
      {"wall_time_s", s.wall_time},
  };
}

bool write_text(const std::filesystem::path& path, const std::string& text, std::string& error) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    error = "cannot write " + path.string();
    return false;
  }
  return true;
}

}  // namespace

RunSummary summarize(const RunConfig& cfg, const MechanicalModel& model, const TrajectoryRecord& rec,
                     double wall_time) {
  RunSummary s;
  s.model = std::string(to_string(cfg.model));
  s.scheme = std::string(to_string(cfg.scheme));
  s.dt = cfg.dt;
  s.t_end = cfg.t_end;
  s.steps = rec.size() - 1;
  const auto pen = penetration_stats(rec);
  s.min_gap = pen.min_gap;
  s.violation_time = pen.violation_time;
  s.per_contact_min.assign(pen.per_contact_min.begin(), pen.per_contact_min.end());
  const auto energy = energy_series(model, rec);
  s.energy_initial = energy.energies.front();
  s.energy_final = energy.energies.back();
  s.max_energy_jump = energy.max_increase;
  for (std::size_t k = 1; k < rec.size(); ++k) ++s.iteration_histogram[rec.iterations[k]];
  s.nonconverged_steps = rec.nonconverged_steps();
  s.wall_time = wall_time;
  return s;
}

std::string summary_json(const RunSummary& summary) { return to_json(summary).dump(2) + "\n"; }

std::filesystem::path summary_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p.replace_extension(".summary.json");
  return p;
}

RunResult run_experiment(const RunConfig& cfg) {
  RunResult result;
  try {
    validate_config(cfg);
    const auto model = make_model(cfg);
    const auto start = std::chrono::steady_clock::now();
    const TrajectoryRecord rec = simulate(*model, cfg.scheme, cfg.solver(), initial_state(cfg), cfg.t_end);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.summary = summarize(cfg, *model, rec, wall);

    result.trajectory_path = cfg.output;
    result.summary_path = summary_path_for(cfg.output);
    if (result.trajectory_path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(result.trajectory_path.parent_path(), ec);
    }
    std::ofstream out(result.trajectory_path, std::ios::binary);
    if (cfg.format == OutputFormat::csv) {
      write_trajectory_csv(out, *model, rec, cfg.record_stride);
    } else {
      write_trajectory_json(out, *model, rec, cfg.record_stride);
    }
    out.close();
    if (!out) {
      result.exit_code = 1;
      result.error = "cannot write " + result.trajectory_path.string();
      return result;
    }
    if (!write_text(result.summary_path, summary_json(result.summary), result.error)) {
      result.exit_code = 1;
      return result;
    }
    result.exit_code = result.summary.nonconverged_steps > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.error = e.what();
  }
  return result;
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("NONSMOOTH_GGL_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_preset(const Preset& p, const std::filesystem::path& out_dir, unsigned threads) {
  SweepResult sweep;
  sweep.runs.resize(p.runs.size());
  std::vector<RunConfig> configs = p.runs;
  for (auto& cfg : configs) {
    std::filesystem::path file = cfg.output;
    if (cfg.format == OutputFormat::json) file.replace_extension(".json");
    cfg.output = (out_dir / file).string();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) sweep.runs[i] = run_experiment(configs[i]);
  };
  const unsigned n = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(configs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::optional<double> moreau_time, unified_time;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : sweep.runs) {
    sweep.exit_code = std::max(sweep.exit_code, r.exit_code);
    if (r.exit_code == 1) {
      runs.push_back({{"error", r.error}});
      continue;
    }
    runs.push_back(to_json(r.summary));
    if (r.summary.scheme == "moreau") moreau_time = r.summary.wall_time;
    if (r.summary.scheme == "ggl_unified") unified_time = r.summary.wall_time;
  }
  nlohmann::json doc = {{"preset", p.name}, {"description", p.description}, {"runs", runs}};
  if (moreau_time && unified_time && *moreau_time > 0.0) {
    sweep.unified_over_moreau = *unified_time / *moreau_time;
    doc["wall_time_ratio_unified_over_moreau"] = *sweep.unified_over_moreau;
  }
  sweep.summary_path = out_dir / (p.name + ".summary.json");
  std::string error;
  if (!write_text(sweep.summary_path, doc.dump(2) + "\n", error)) sweep.exit_code = 1;
  return sweep;
}

}  // namespace ggl
