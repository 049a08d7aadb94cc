// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptspin_cli/commands.hpp"
#include "ptspin_cli/config.hpp"
#include "ptspin_cli/version.hpp"

namespace {

using ptspin::cli::ConfigError;

struct GridFlag {
  const char* flag;
  const char* key;
  const char* help;
};

const std::vector<GridFlag> kTempFlags = {
    {"--t-min", "grid.t_min", "lowest temperature (GHz)"},
    {"--t-max", "grid.t_max", "highest temperature (GHz)"},
    {"--t-steps", "grid.t_steps", "number of temperatures"},
    {"--t-spacing", "grid.t_spacing", "log or linear"},
};
const std::vector<GridFlag> kAlphaFlags = {
    {"--alpha-min", "grid.alpha_min", "lowest alpha"},
    {"--alpha-max", "grid.alpha_max", "highest alpha"},
    {"--alpha-steps", "grid.alpha_steps", "number of alpha values"},
};

std::map<std::string, std::vector<GridFlag>> subcommand_flags() {
  std::map<std::string, std::vector<GridFlag>> out;
  out["spectrum"] = {{"--alpha", "model.alpha", "interaction asymmetry"},
                     {"--g", "model.g", "qubit coupling (GHz)"}};
  out["eps"] = {{"--param", "eps.param", "alpha or g"},
                {"--lo", "eps.lo", "sweep start"},
                {"--hi", "eps.hi", "sweep end"},
                {"--steps", "eps.coarse_steps", "coarse scan steps"},
                {"--precision", "eps.precision", "bracket width"},
                {"--unity-g", "eps.unity_g_values", "JSON list of couplings"}};
  out["tc-map"] = kTempFlags;
  out["tc-map"].insert(out["tc-map"].end(), kAlphaFlags.begin(), kAlphaFlags.end());
  out["tc-map"].push_back({"--g-values", "grid.g_values", "JSON list of couplings"});
  out["thermo"] = kTempFlags;
  out["thermo"].push_back({"--rescale", "thermo.rescale", "true for rescaled constants"});
  out["thermo"].push_back({"--ns", "thermo.ns_values", "JSON list of NV counts"});
  out["spinodal"] = {{"--tr-min", "spinodal.tr_min", "lowest T/D"},
                     {"--tr-max", "spinodal.tr_max", "highest T/D"},
                     {"--tr-steps", "spinodal.tr_steps", "number of isotherms"},
                     {"--alpha-points", "spinodal.alpha_points", "points per isotherm"}};
  out["spinodal"].insert(out["spinodal"].end(), kAlphaFlags.begin(), kAlphaFlags.end());
  out["cycle"] = {{"--kind", "cycle.kind", "carnot or stirling"},
                  {"--t-min", "cycle.t_min", "lowest reservoir temperature"},
                  {"--t-max", "cycle.t_max", "highest reservoir temperature"},
                  {"--t-steps", "cycle.t_steps", "number of temperatures"},
                  {"--s-min", "cycle.s_min", "lowest entropy (Carnot)"},
                  {"--s-max", "cycle.s_max", "highest entropy (Carnot)"},
                  {"--s-step", "cycle.s_step", "entropy step (Carnot)"},
                  {"--alpha-min", "cycle.alpha_min", "lowest alpha (Stirling)"},
                  {"--alpha-max", "cycle.alpha_max", "highest alpha (Stirling)"},
                  {"--alpha-step", "cycle.alpha_step", "alpha step (Stirling)"}};
  out["rescale-fit"] = kTempFlags;
  out["rescale-fit"].push_back({"--np", "rescale.np_values", "JSON list of pair counts"});
  out["rescale-fit"].push_back({"--target", "rescale.target", "gap to pin (GHz)"});
  out["oracle-check"] = {{"--tol", "oracle.tol", "agreement tolerance"}};
  out["blocks-dump"] = {};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact thermodynamics of a non-Hermitian NV/qubit spin model"};
  app.set_version_flag("--version", std::string(ptspin::cli::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::vector<std::string> sets;
  bool list_keys = false;
  app.add_option("--config", config_path,
                 std::string("JSON configuration file (default: $") + ptspin::cli::kConfigEnv +
                     ")");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "override a configuration key, key=value");
  app.add_flag("--list-keys", list_keys, "print every configuration key and exit");

  const auto flags = subcommand_flags();
  std::map<std::string, std::vector<std::pair<const GridFlag*, std::string>>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : ptspin::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    subs[name] = sub;
    auto& slots = values[name];
    slots.reserve(flags.at(name).size());
    for (const auto& f : flags.at(name)) {
      slots.emplace_back(&f, std::string());
      sub->add_option(f.flag, slots.back().second, std::string(f.help) + " [" + f.key + "]");
    }
  }

  // --list-keys is useful without a subcommand.
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--list-keys") {
      for (const auto& k : ptspin::cli::known_keys()) {
        std::cout << k << '\n';
      }
      return 0;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ptspin::cli::kExitInfeasible;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) {
      command = name;
    }
  }

  std::vector<std::string> overrides = sets;
  for (const auto& [f, value] : values[command]) {
    if (!value.empty()) {
      overrides.push_back(std::string(f->key) + "=" + value);
    }
  }
  if (!out_dir.empty()) {
    overrides.push_back("run.out_dir=" + nlohmann::json(out_dir).dump());
  }
  if (workers > 0) {
    overrides.push_back("run.workers=" + std::to_string(workers));
  }
  if (config_path.empty()) {
    if (const char* env = std::getenv(ptspin::cli::kConfigEnv)) {
      config_path = env;
    }
  }

  ptspin::cli::RunConfig config;
  try {
    config = ptspin::cli::load_config(config_path, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return ptspin::cli::kExitInfeasible;
  }
  return ptspin::cli::run(command, config, std::cout, std::cerr);
}
