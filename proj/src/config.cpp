#include "ggl/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "ggl/simulation.hpp"

namespace ggl {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(int line, const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(line, "key '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

int parse_int(int line, const std::string& key, const std::string& value) {
  int out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(line, "key '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

ModelKind parse_model(int line, const std::string& value) {
  if (value == "slider_unilateral") return ModelKind::slider_unilateral;
  if (value == "slider_bilateral") return ModelKind::slider_bilateral;
  if (value == "ball") return ModelKind::ball;
  throw ConfigError(line, "unknown model '" + value + "'");
}

double default_restitution(ModelKind kind) { return kind == ModelKind::ball ? 0.5 : 0.1; }

RunConfig make_run(ModelKind model, Scheme scheme, double dt, double t_end, double eps, int stride,
                   const std::string& output) {
  RunConfig cfg;
  cfg.model = model;
  cfg.scheme = scheme;
  cfg.dt = dt;
  cfg.t_end = t_end;
  if (model != ModelKind::slider_bilateral) cfg.epsilon.assign(static_cast<std::size_t>(contact_count(model)), eps);
  cfg.record_stride = stride;
  cfg.output = output;
  return cfg;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::slider_unilateral:
      return "slider_unilateral";
    case ModelKind::slider_bilateral:
      return "slider_bilateral";
    case ModelKind::ball:
      return "ball";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

int contact_count(ModelKind kind) {
  switch (kind) {
    case ModelKind::slider_unilateral:
      return 4;
    case ModelKind::slider_bilateral:
    case ModelKind::ball:
      return 1;
  }
  return 0;
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.dt = dt;
  s.newton_tol = newton_tol;
  s.max_iter = max_iter;
  s.active_tol = active_tol;
  s.weighting = r_mode;
  s.prox_value = r_value;
  return s;
}

void validate_config(const RunConfig& cfg) {
  const bool bilateral_scheme = !is_contact_scheme(cfg.scheme);
  if (bilateral_scheme && cfg.model != ModelKind::slider_bilateral) {
    throw ConfigError(0, "scheme " + std::string(to_string(cfg.scheme)) + " requires model slider_bilateral");
  }
  if (!bilateral_scheme && cfg.model == ModelKind::slider_bilateral) {
    throw ConfigError(0, "scheme " + std::string(to_string(cfg.scheme)) +
                             " requires a contact model (slider_unilateral or ball)");
  }
  if (!(cfg.dt > 0.0)) throw ConfigError(0, "dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError(0, "t_end must be positive");
  try {
    (void)step_count(cfg.t_end, cfg.dt);
  } catch (const ContractError&) {
    throw ConfigError(0, "dt must divide t_end");
  }
  if (cfg.model == ModelKind::slider_bilateral) {
    if (!cfg.epsilon.empty()) throw ConfigError(0, "epsilon is not used by model slider_bilateral");
  } else if (cfg.epsilon.size() != static_cast<std::size_t>(contact_count(cfg.model))) {
    throw ConfigError(0, "model " + std::string(to_string(cfg.model)) + " needs " +
                             std::to_string(contact_count(cfg.model)) + " restitution coefficients");
  }
  for (double e : cfg.epsilon) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError(0, "epsilon values must lie in [0, 1]");
  }
  if (!(cfg.newton_tol > 0.0)) throw ConfigError(0, "newton_tol must be positive");
  if (cfg.max_iter < 1) throw ConfigError(0, "max_iter must be at least 1");
  if (cfg.r_mode == ProxWeighting::scalar && !(cfg.r_value > 0.0)) throw ConfigError(0, "r_mode must be positive");
  if (cfg.record_stride < 1) throw ConfigError(0, "record_stride must be at least 1");
  if (cfg.output.empty()) throw ConfigError(0, "output must not be empty");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::vector<double> epsilon;
  bool epsilon_scalar = false;
  int scheme_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(std::string_view(raw).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value, got '" + content + "'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (seen.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    seen[key] = line;

    if (key == "model") {
      cfg.model = parse_model(line, value);
    } else if (key == "scheme") {
      try {
        cfg.scheme = parse_scheme(value);
      } catch (const ContractError&) {
        throw ConfigError(line, "unknown scheme '" + value + "'");
      }
      scheme_line = line;
    } else if (key == "dt") {
      cfg.dt = parse_double(line, key, value);
    } else if (key == "t_end") {
      cfg.t_end = parse_double(line, key, value);
    } else if (key == "epsilon") {
      epsilon.clear();
      if (!value.empty()) {
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) epsilon.push_back(parse_double(line, key, trim(item)));
      }
      epsilon_scalar = epsilon.size() == 1;
    } else if (key == "r_mode") {
      if (value == "delassus") {
        cfg.r_mode = ProxWeighting::delassus;
      } else if (value == "unit") {
        cfg.r_mode = ProxWeighting::unit;
      } else {
        cfg.r_mode = ProxWeighting::scalar;
        cfg.r_value = parse_double(line, key, value);
      }
    } else if (key == "newton_tol") {
      cfg.newton_tol = parse_double(line, key, value);
    } else if (key == "max_iter") {
      cfg.max_iter = parse_int(line, key, value);
    } else if (key == "active_tol") {
      cfg.active_tol = parse_double(line, key, value);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "format") {
      if (value == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (value == "json") {
        cfg.format = OutputFormat::json;
      } else {
        throw ConfigError(line, "unknown format '" + value + "'");
      }
    } else if (key == "record_stride") {
      cfg.record_stride = parse_int(line, key, value);
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }
  if (!seen.count("model")) throw ConfigError(0, "missing required key 'model'");
  if (!seen.count("scheme")) throw ConfigError(0, "missing required key 'scheme'");

  if (cfg.model == ModelKind::slider_bilateral) {
    if (!epsilon.empty()) throw ConfigError(seen["epsilon"], "epsilon is not used by model slider_bilateral");
  } else {
    const auto n = static_cast<std::size_t>(contact_count(cfg.model));
    if (epsilon.empty()) {
      cfg.epsilon.assign(n, default_restitution(cfg.model));
    } else if (epsilon_scalar) {
      cfg.epsilon.assign(n, epsilon.front());
    } else if (epsilon.size() == n) {
      cfg.epsilon = epsilon;
    } else {
      throw ConfigError(seen["epsilon"], "model " + std::string(to_string(cfg.model)) + " needs 1 or " +
                                             std::to_string(n) + " restitution coefficients");
    }
  }

  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    // Attach the most relevant line to validation failures.
    const std::string msg = e.what();
    int at = 0;
    if (msg.rfind("scheme ", 0) == 0) {
      at = scheme_line;
    } else {
      for (const auto& [key, l] : seen) {
        if (msg.rfind(key, 0) == 0) at = l;
      }
    }
    throw ConfigError(at, msg);
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "model=" << to_string(cfg.model) << '\n';
  out << "scheme=" << to_string(cfg.scheme) << '\n';
  out << "dt=" << format_double(cfg.dt) << '\n';
  out << "t_end=" << format_double(cfg.t_end) << '\n';
  if (!cfg.epsilon.empty()) {
    out << "epsilon=";
    for (std::size_t i = 0; i < cfg.epsilon.size(); ++i) out << (i ? "," : "") << format_double(cfg.epsilon[i]);
    out << '\n';
  }
  switch (cfg.r_mode) {
    case ProxWeighting::delassus:
      out << "r_mode=delassus\n";
      break;
    case ProxWeighting::unit:
      out << "r_mode=unit\n";
      break;
    case ProxWeighting::scalar:
      out << "r_mode=" << format_double(cfg.r_value) << '\n';
      break;
  }
  out << "newton_tol=" << format_double(cfg.newton_tol) << '\n';
  out << "max_iter=" << cfg.max_iter << '\n';
  out << "active_tol=" << format_double(cfg.active_tol) << '\n';
  out << "output=" << cfg.output << '\n';
  out << "format=" << to_string(cfg.format) << '\n';
  out << "record_stride=" << cfg.record_stride << '\n';
  return out.str();
}

std::unique_ptr<MechanicalModel> make_model(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::slider_unilateral:
      return std::make_unique<UnilateralSliderCrank>(
          SliderCrankParams{}, Eigen::Map<const Vector>(cfg.epsilon.data(), static_cast<Eigen::Index>(cfg.epsilon.size())));
    case ModelKind::slider_bilateral:
      return std::make_unique<BilateralSliderCrank>();
    case ModelKind::ball: {
      BouncingBallParams p;
      p.restitution = cfg.epsilon.empty() ? 0.5 : cfg.epsilon.front();
      return std::make_unique<BouncingBall>(p);
    }
  }
  throw ConfigError(0, "unknown model");
}

GeneralizedState initial_state(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::slider_unilateral:
      return slider_crank_initial_state(true);
    case ModelKind::slider_bilateral:
      return slider_crank_initial_state(false);
    case ModelKind::ball:
      return BouncingBall().initial_state();
  }
  throw ConfigError(0, "unknown model");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig3_eps01", "fig3_eps04", "fig3_eps06", "fig3_eps09", "fig5_gaps",        "fig6_drift",
      "fig9_eps01", "fig9_eps04", "fig9_eps06", "fig9_eps09", "fig10_energy",     "decoupled_energy",
      "ball_zeno",
  };
  return names;
}

Preset preset(std::string_view name, bool full) {
  const double horizon = full ? 4.0 : 0.5;
  const std::string stem(name);
  auto file = [&](Scheme s) { return stem + "_" + std::string(to_string(s)) + ".csv"; };
  auto eps_of = [](std::string_view suffix) {
    if (suffix == "01") return 0.1;
    if (suffix == "04") return 0.4;
    if (suffix == "06") return 0.6;
    if (suffix == "09") return 0.9;
    return -1.0;
  };

  Preset p;
  p.name = stem;
  if (name.size() == 10 && (name.rfind("fig3_eps", 0) == 0 || name.rfind("fig9_eps", 0) == 0)) {
    const double eps = eps_of(name.substr(8));
    if (eps >= 0.0) {
      const Scheme scheme = name[3] == '3' ? Scheme::moreau : Scheme::ggl_unified;
      p.description = "unilateral slider-crank, " + std::string(to_string(scheme)) + ", eps=" + format_double(eps);
      p.runs.push_back(make_run(ModelKind::slider_unilateral, scheme, 1e-5, horizon, eps, 10, file(scheme)));
      return p;
    }
  }
  if (name == "fig5_gaps") {
    p.description = "gap functions and gap velocities under Moreau's rule, eps=0.1";
    p.runs.push_back(make_run(ModelKind::slider_unilateral, Scheme::moreau, 1e-5, horizon, 0.1, 10,
                              file(Scheme::moreau)));
    return p;
  }
  if (name == "fig6_drift") {
    p.description = "bilateral slider-crank drift for velocity, acceleration and GGL constraint levels, 5 s";
    for (Scheme s : {Scheme::dae_vel, Scheme::dae_acc, Scheme::dae_ggl}) {
      p.runs.push_back(make_run(ModelKind::slider_bilateral, s, 1e-4, 5.0, 0.0, 10, file(s)));
    }
    return p;
  }
  if (name == "fig10_energy") {
    p.description = "energy content of Moreau, unified GGL and the impact-law-only reference, eps=0.1";
    for (Scheme s : {Scheme::moreau, Scheme::ggl_unified, Scheme::ggl_reference}) {
      p.runs.push_back(make_run(ModelKind::slider_unilateral, s, 1e-5, horizon, 0.1, 10, file(s)));
    }
    return p;
  }
  if (name == "decoupled_energy") {
    p.description = "energy of the decoupled projection scheme against the unified scheme, eps=0.1, 0.2 s";
    const double t = full ? 4.0 : 0.2;
    for (Scheme s : {Scheme::ggl_decoupled, Scheme::ggl_unified}) {
      p.runs.push_back(make_run(ModelKind::slider_unilateral, s, 1e-5, t, 0.1, 10, file(s)));
    }
    return p;
  }
  if (name == "ball_zeno") {
    p.description = "ball dropped from 0.1 m, eps=0.5, until rest";
    for (Scheme s : {Scheme::moreau, Scheme::ggl_decoupled, Scheme::ggl_unified}) {
      p.runs.push_back(make_run(ModelKind::ball, s, 1e-4, 1.0, 0.5, 1, file(s)));
    }
    return p;
  }
  throw ConfigError(0, "unknown preset '" + stem + "'");
}

}  // namespace ggl
