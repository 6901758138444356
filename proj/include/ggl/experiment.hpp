#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ggl/config.hpp"
#include "ggl/diagnostics.hpp"

namespace ggl {

struct RunSummary {
  std::string model;
  std::string scheme;
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t steps = 0;
  double min_gap = 0.0;
  double violation_time = 0.0;
  std::vector<double> per_contact_min;
  double energy_initial = 0.0;
  double energy_final = 0.0;
  double max_energy_jump = 0.0;
  std::map<int, std::size_t> iteration_histogram;
  std::size_t nonconverged_steps = 0;
  double wall_time = 0.0;  // seconds, simulation only
};

RunSummary summarize(const RunConfig& cfg, const MechanicalModel& model, const TrajectoryRecord& rec,
                     double wall_time);
std::string summary_json(const RunSummary& summary);

/// Exit status of a run: 0 converged, 1 configuration or I/O failure,
/// 2 at least one non-converged step (files are still written).
struct RunResult {
  int exit_code = 0;
  std::string error;
  RunSummary summary;
  std::filesystem::path trajectory_path;
  std::filesystem::path summary_path;
};

/// `output` with its extension replaced by ".summary.json".
std::filesystem::path summary_path_for(const std::filesystem::path& output);

/// Simulates `cfg`, writes the trajectory (every record_stride-th step) and
/// the summary file.
RunResult run_experiment(const RunConfig& cfg);

struct SweepResult {
  int exit_code = 0;
  std::vector<RunResult> runs;
  /// Wall time of ggl_unified over moreau when the preset contains both.
  std::optional<double> unified_over_moreau;
  std::filesystem::path summary_path;
};

/// Worker count for preset sweeps: NONSMOOTH_GGL_THREADS if set and
/// positive, otherwise the hardware concurrency.
unsigned sweep_threads();

/// Runs every member of `p` into `out_dir`, at most `threads` at a time,
/// and writes `<name>.summary.json` next to the per-run files.
SweepResult run_preset(const Preset& p, const std::filesystem::path& out_dir, unsigned threads);

}  // namespace ggl
