// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptspin/cycles.hpp"
#include "ptspin/model.hpp"
#include "ptspin/spectral.hpp"
#include "ptspin/thermo.hpp"

namespace ptspin::cli {

/// Bad configuration: unknown key, wrong type or out-of-range value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  ModelParams model;
  SpectralOptions spectral;
  ThermoOptions thermo;

  // Temperatures (GHz) for thermo and tc-map.
  std::vector<double> temperatures;
  bool thermo_rescale = false;
  // NV counts for the rescaled thermo sweep; empty runs the base model only.
  std::vector<int> thermo_ns;
  int max_doublings = 3;

  std::vector<double> alphas;
  std::vector<double> g_values;

  Sweep eps_sweep;
  double eps_precision = 1e-6;
  std::vector<double> eps_unity_g;

  std::vector<double> spinodal_tr;
  int spinodal_alpha_points = 400;

  CycleKind cycle_kind = CycleKind::kCarnot;
  GridRanges carnot;
  GridRanges stirling;

  std::vector<int> rescale_np;
  double rescale_G0 = 0.0;
  double rescale_target = 0.0;
  double rescale_t_low = 0.0;

  SystemSize oracle_size{HalfInt::from_twice(1), 1, 1};
  std::vector<double> oracle_alpha;
  std::vector<double> oracle_g;
  std::vector<double> oracle_beta;
  double oracle_tol = 1e-8;

  int workers = 1;
  std::string out_dir = ".";

  /// Every key with its resolved value, in key order, as JSON text.
  std::map<std::string, std::string> resolved;
};

/// Environment variable naming the default configuration file.
inline constexpr const char* kConfigEnv = "PTSPIN_CONFIG";

/// All recognised keys.
std::vector<std::string> known_keys();

/// Builds a configuration from defaults, then an optional JSON file (flat dotted keys or
/// nested objects), then "key=value" overrides (value parsed as JSON, else as a string).
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Same from JSON text instead of a file.
RunConfig config_from_json(const std::string& json_text, const std::vector<std::string>& overrides);

}  // namespace ptspin::cli
