#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ggl/models.hpp"
#include "ggl/stepping.hpp"

namespace ggl {

enum class ModelKind { slider_unilateral, slider_bilateral, ball };
enum class OutputFormat { csv, json };

std::string_view to_string(ModelKind kind);
std::string_view to_string(OutputFormat format);

/// Parse failure; `line()` is 0 for errors not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  ModelKind model = ModelKind::slider_unilateral;
  Scheme scheme = Scheme::moreau;
  double dt = 1e-5;
  double t_end = 0.5;
  /// One value per contact after parsing; empty for the bilateral model.
  std::vector<double> epsilon;
  ProxWeighting r_mode = ProxWeighting::delassus;
  double r_value = 1.0;
  double newton_tol = 1e-10;
  int max_iter = 50;
  double active_tol = 0.0;
  std::string output = "trajectory.csv";
  OutputFormat format = OutputFormat::csv;
  int record_stride = 10;

  bool operator==(const RunConfig&) const = default;

  SolverConfig solver() const;
};

/// Parses `key=value` lines (blank lines and `#` comments ignored), applies
/// defaults and validates. Unknown keys, malformed values and incompatible
/// model/scheme pairs raise ConfigError naming the line.
RunConfig parse_config(std::string_view text);

/// Inverse of parse_config for validated configurations.
std::string serialize_config(const RunConfig& cfg);

/// Throws ConfigError(0, ...) on an inconsistent configuration.
void validate_config(const RunConfig& cfg);

int contact_count(ModelKind kind);
std::unique_ptr<MechanicalModel> make_model(const RunConfig& cfg);
/// Reference initial state of the configured model.
GeneralizedState initial_state(const RunConfig& cfg);

/// Named experiment: one run or a sweep of runs.
struct Preset {
  std::string name;
  std::string description;
  std::vector<RunConfig> runs;
};

const std::vector<std::string>& preset_names();
/// `full` extends the slider-crank horizons from 0.5 s to 4 s.
Preset preset(std::string_view name, bool full = false);

}  // namespace ggl
