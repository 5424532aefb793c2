#pragma once

// Run configuration for the annulus-lab front end. The file form is a JSON
// document; every field has a default, so a file only lists overrides.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "alab/ensembles.hpp"
#include "alab/solver.hpp"

namespace alab {

inline constexpr int kConfigSchemaVersion = 1;

/// Accepted slope interval for one fitted curve, applied to bins whose lower
/// edge r_bin lies in [r_min, r_max].
struct FitWindow {
  double r_min = 4.0;
  double r_max = 16.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  double min_r_squared = 0.0;
  bool enforce = false;
  /// Moment orders whose fits are checked; the mixed curve only has order 1.
  std::vector<int> orders{2};
};

struct RunConfig {
  int d = 2;
  int L = 32;
  EnsembleSpec ensemble{};
  /// Massive parameter; unset means (L/4)^2.
  std::optional<double> T;
  SolverConfig solver{};
  std::int64_t samples = 10;
  std::vector<double> radii{2.0, 4.0};
  std::vector<int> moment_orders{1, 2, 4};
  std::string out = "out";

  int identity_instances = 100;

  std::vector<double> quenched_mixed_radii;
  double band_threshold = 4.0;
  std::size_t max_ball_vertices = 64;

  bool annealed_mixed = true;
  std::vector<double> mixed_radii{2.0, 4.0};
  FitWindow gradient_fit{4.0, 16.0, -1.25, -0.75, 0.9, false, {2}};
  FitWindow mixed_fit{4.0, 16.0, -2.4, -1.6, 0.0, false, {1}};

  std::int64_t sample_index = 0;
  std::string fit_input;

  double resolved_T() const { return T.value_or(0.0625 * L * L); }
};

nlohmann::ordered_json to_json(const RunConfig& cfg);
/// Unknown keys and malformed values raise ConfigError. Missing keys keep the
/// values already in `base`.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Named presets; ConfigError for unknown names.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Common checks (lattice shape, ensemble, solver, samples); command-specific
/// radius windows are checked by the commands.
void validate(const RunConfig& cfg);

}  // namespace alab
