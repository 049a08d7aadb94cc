// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ptspin::cli {

namespace {

using json = nlohmann::json;

json defaults() {
  return json{
      {"model.D", 2.878},
      {"model.E", 0.26},
      {"model.G", 1.73},
      {"model.g", 1.73},
      {"model.alpha", 1.0},
      {"model.eps1", -1.0},
      {"model.eps2", 1.0},
      {"model.mu_s", 0.0},
      {"model.mu_qb", 0.0},
      {"model.coupling", "imbalance"},
      {"system.omega", 4.0},
      {"system.omega1", 2},
      {"system.omega2", 2},
      {"spectral.tie_tol", 1e-7},
      {"spectral.defect_tol", 1e-6},
      {"spectral.im_tol_rel", 1e-9},
      {"thermo.z_floor", 1e-300},
      {"thermo.gap", "collective"},
      {"thermo.fd_checks", false},
      {"thermo.rescale", false},
      {"thermo.ns_values", json::array()},
      {"grid.t_min", 0.01},
      {"grid.t_max", 3.75},
      {"grid.t_steps", 200},
      {"grid.t_spacing", "log"},
      {"grid.alpha_min", 0.0},
      {"grid.alpha_max", 1.2},
      {"grid.alpha_steps", 100},
      {"grid.g_values", json::array({1.73})},
      {"zeros.max_doublings", 3},
      {"eps.param", "alpha"},
      {"eps.lo", 0.0},
      {"eps.hi", 4.0},
      {"eps.coarse_steps", 80},
      {"eps.precision", 1e-6},
      {"eps.unity_g_values", json::array()},
      {"spinodal.tr_min", 0.04},
      {"spinodal.tr_max", 0.10},
      {"spinodal.tr_steps", 13},
      {"spinodal.alpha_points", 400},
      {"cycle.kind", "carnot"},
      {"cycle.t_min", 0.1},
      {"cycle.t_max", 3.75},
      {"cycle.t_steps", 16},
      {"cycle.s_min", 2.0},
      {"cycle.s_max", 12.0},
      {"cycle.s_step", 0.5},
      {"cycle.alpha_min", 0.05},
      {"cycle.alpha_max", 1.2},
      {"cycle.alpha_step", 0.05},
      {"cycle.bracket_lo", 0.0},
      {"cycle.bracket_hi", 4.0},
      {"cycle.scan_steps", 200},
      {"rescale.np_values", json::array({2, 3, 4})},
      {"rescale.G0", model::kG0},
      {"rescale.target", 2.1},
      {"rescale.t_low", 0.01},
      {"oracle.omega", 0.5},
      {"oracle.omega1", 1},
      {"oracle.omega2", 1},
      {"oracle.alpha_values", json::array({1.0, 0.4})},
      {"oracle.g_values", json::array({1.0, 1.73})},
      {"oracle.beta_values", json::array({0.1, 1.0, 5.0, 20.0})},
      {"oracle.tol", 1e-8},
      {"run.workers", 1},
      {"run.out_dir", "."},
  };
}

std::string valid_key_list() {
  std::string out;
  for (const auto& k : known_keys()) {
    out += "\n  " + k;
  }
  return out;
}

void flatten(const json& j, const std::string& prefix, json& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out[key] = *it;
    }
  }
}

void merge(json& flat, const json& incoming, const std::string& source) {
  const json base = defaults();
  for (auto it = incoming.begin(); it != incoming.end(); ++it) {
    if (!base.contains(it.key())) {
      throw ConfigError("unknown configuration key '" + it.key() + "' in " + source +
                        "; valid keys:" + valid_key_list());
    }
    const json& expected = base[it.key()];
    const bool ok = (expected.is_number() && it->is_number()) ||
                    (expected.is_string() && it->is_string()) ||
                    (expected.is_boolean() && it->is_boolean()) ||
                    (expected.is_array() && it->is_array());
    if (!ok) {
      throw ConfigError("configuration key '" + it.key() + "' in " + source + " expects a " +
                        expected.type_name() + ", got " + it->type_name());
    }
    flat[it.key()] = *it;
  }
}

template <typename T>
T get(const json& flat, const char* key) {
  return flat.at(key).get<T>();
}

int get_int(const json& flat, const char* key) {
  const double v = flat.at(key).get<double>();
  if (v != std::floor(v)) {
    throw ConfigError(std::string("configuration key '") + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::vector<double> get_list(const json& flat, const char* key) {
  std::vector<double> out;
  for (const auto& v : flat.at(key)) {
    if (!v.is_number()) {
      throw ConfigError(std::string("configuration key '") + key + "' must list numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> stepped(double lo, double hi, double step, const char* what) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw ConfigError(std::string(what) + " range needs lo <= hi and a positive step");
  }
  std::vector<double> out;
  const auto n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) {
    out.push_back(lo + step * i);
  }
  return out;
}

RunConfig build(const json& flat) {
  RunConfig c;
  ModelParams& m = c.model;
  m.D = get<double>(flat, "model.D");
  m.E = get<double>(flat, "model.E");
  m.G = get<double>(flat, "model.G");
  m.g = get<double>(flat, "model.g");
  m.alpha = get<double>(flat, "model.alpha");
  m.eps1 = get<double>(flat, "model.eps1");
  m.eps2 = get<double>(flat, "model.eps2");
  m.mu_s = get<double>(flat, "model.mu_s");
  m.mu_qb = get<double>(flat, "model.mu_qb");
  const auto coupling = get<std::string>(flat, "model.coupling");
  if (coupling == "imbalance") {
    m.coupling = QubitCoupling::kImbalance;
  } else if (coupling == "total") {
    m.coupling = QubitCoupling::kTotal;
  } else {
    throw ConfigError("model.coupling must be 'imbalance' or 'total'");
  }
  try {
    m.size.omega = HalfInt::from_double(get<double>(flat, "system.omega"));
  } catch (const std::exception&) {
    throw ConfigError("system.omega must be a positive multiple of 1/2");
  }
  m.size.omega1 = get_int(flat, "system.omega1");
  m.size.omega2 = get_int(flat, "system.omega2");
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  c.spectral.tie_tol = get<double>(flat, "spectral.tie_tol");
  c.spectral.defect_tol = get<double>(flat, "spectral.defect_tol");
  c.spectral.im_tol_rel = get<double>(flat, "spectral.im_tol_rel");
  c.thermo.z_floor = get<double>(flat, "thermo.z_floor");
  const auto gap = get<std::string>(flat, "thermo.gap");
  if (gap != "collective" && gap != "diagonal") {
    throw ConfigError("thermo.gap must be 'collective' or 'diagonal'");
  }
  c.thermo.gap = gap == "collective" ? GapOperator::kCollective : GapOperator::kDiagonal;
  c.thermo.finite_difference_checks = get<bool>(flat, "thermo.fd_checks");
  c.thermo_rescale = get<bool>(flat, "thermo.rescale");
  for (double v : get_list(flat, "thermo.ns_values")) {
    if (v != std::floor(v) || v < 1) {
      throw ConfigError("thermo.ns_values must be positive integers");
    }
    c.thermo_ns.push_back(static_cast<int>(v));
  }
  for (double tol : {c.spectral.tie_tol, c.spectral.defect_tol, c.spectral.im_tol_rel,
                     c.thermo.z_floor}) {
    if (!(tol > 0.0)) {
      throw ConfigError("tolerances must be positive");
    }
  }

  const auto t_steps = get_int(flat, "grid.t_steps");
  const auto spacing = get<std::string>(flat, "grid.t_spacing");
  const double t_min = get<double>(flat, "grid.t_min");
  const double t_max = get<double>(flat, "grid.t_max");
  if (t_steps >= 1) {
    if (spacing == "log") {
      c.temperatures = thermo::logspace(t_min, t_max, t_steps);
    } else if (spacing == "linear") {
      c.temperatures = thermo::linspace(t_min, t_max, t_steps);
    } else {
      throw ConfigError("grid.t_spacing must be 'log' or 'linear'");
    }
  }
  c.max_doublings = get_int(flat, "zeros.max_doublings");
  const auto a_steps = get_int(flat, "grid.alpha_steps");
  if (a_steps >= 1) {
    c.alphas = thermo::linspace(get<double>(flat, "grid.alpha_min"),
                                get<double>(flat, "grid.alpha_max"), a_steps);
  }
  c.g_values = get_list(flat, "grid.g_values");

  const auto param = get<std::string>(flat, "eps.param");
  if (param != "alpha" && param != "g") {
    throw ConfigError("eps.param must be 'alpha' or 'g'");
  }
  c.eps_sweep.param = param == "alpha" ? SweepParam::kAlpha : SweepParam::kCoupling;
  c.eps_sweep.lo = get<double>(flat, "eps.lo");
  c.eps_sweep.hi = get<double>(flat, "eps.hi");
  c.eps_sweep.coarse_steps = get_int(flat, "eps.coarse_steps");
  c.eps_precision = get<double>(flat, "eps.precision");
  c.eps_unity_g = get_list(flat, "eps.unity_g_values");

  const auto tr_steps = get_int(flat, "spinodal.tr_steps");
  if (tr_steps >= 1) {
    c.spinodal_tr = thermo::linspace(get<double>(flat, "spinodal.tr_min"),
                                     get<double>(flat, "spinodal.tr_max"), tr_steps);
  }
  c.spinodal_alpha_points = get_int(flat, "spinodal.alpha_points");

  const auto kind = get<std::string>(flat, "cycle.kind");
  if (kind != "carnot" && kind != "stirling") {
    throw ConfigError("cycle.kind must be 'carnot' or 'stirling'");
  }
  c.cycle_kind = kind == "carnot" ? CycleKind::kCarnot : CycleKind::kStirling;
  AlphaBracket bracket;
  bracket.lo = get<double>(flat, "cycle.bracket_lo");
  bracket.hi = get<double>(flat, "cycle.bracket_hi");
  bracket.scan_steps = get_int(flat, "cycle.scan_steps");
  const auto cycle_t_steps = get_int(flat, "cycle.t_steps");
  std::vector<double> cycle_t;
  if (cycle_t_steps >= 1) {
    cycle_t = thermo::linspace(get<double>(flat, "cycle.t_min"), get<double>(flat, "cycle.t_max"),
                               cycle_t_steps);
  }
  c.carnot = {cycle_t,
              stepped(get<double>(flat, "cycle.s_min"), get<double>(flat, "cycle.s_max"),
                      get<double>(flat, "cycle.s_step"), "cycle entropy"),
              bracket};
  c.stirling = {cycle_t,
                stepped(get<double>(flat, "cycle.alpha_min"), get<double>(flat, "cycle.alpha_max"),
                        get<double>(flat, "cycle.alpha_step"), "cycle alpha"),
                bracket};

  for (double v : get_list(flat, "rescale.np_values")) {
    if (v != std::floor(v) || v < 1) {
      throw ConfigError("rescale.np_values must be positive integers");
    }
    c.rescale_np.push_back(static_cast<int>(v));
  }
  c.rescale_G0 = get<double>(flat, "rescale.G0");
  c.rescale_target = get<double>(flat, "rescale.target");
  c.rescale_t_low = get<double>(flat, "rescale.t_low");

  try {
    c.oracle_size.omega = HalfInt::from_double(get<double>(flat, "oracle.omega"));
  } catch (const std::exception&) {
    throw ConfigError("oracle.omega must be a positive multiple of 1/2");
  }
  c.oracle_size.omega1 = get_int(flat, "oracle.omega1");
  c.oracle_size.omega2 = get_int(flat, "oracle.omega2");
  c.oracle_alpha = get_list(flat, "oracle.alpha_values");
  c.oracle_g = get_list(flat, "oracle.g_values");
  c.oracle_beta = get_list(flat, "oracle.beta_values");
  c.oracle_tol = get<double>(flat, "oracle.tol");
  if (c.oracle_alpha.size() != c.oracle_g.size()) {
    throw ConfigError("oracle.alpha_values and oracle.g_values must pair up");
  }

  c.workers = get_int(flat, "run.workers");
  if (c.workers < 1) {
    throw ConfigError("run.workers must be at least 1");
  }
  c.out_dir = get<std::string>(flat, "run.out_dir");

  for (auto it = flat.begin(); it != flat.end(); ++it) {
    c.resolved[it.key()] = it->dump();
  }
  return c;
}

json parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + text + "' must look like key=value");
  }
  const std::string key = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  json v = json::parse(value, nullptr, false);
  if (v.is_discarded()) {
    v = value;
  }
  return json{{key, v}};
}

RunConfig resolve(const json& file_json, const std::string& source,
                  const std::vector<std::string>& overrides) {
  json flat = defaults();
  if (!file_json.is_null()) {
    if (!file_json.is_object()) {
      throw ConfigError(source + " must hold a JSON object");
    }
    json incoming = json::object();
    flatten(file_json, "", incoming);
    merge(flat, incoming, source);
  }
  for (const auto& o : overrides) {
    merge(flat, parse_override(o), "override '" + o + "'");
  }
  return build(flat);
}

}  // namespace

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  const json base = defaults();
  for (auto it = base.begin(); it != base.end(); ++it) {
    keys.push_back(it.key());
  }
  return keys;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) {
    return resolve(json(), "", overrides);
  }
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open configuration file " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("configuration file " + path + " is not valid JSON");
  }
  return resolve(j, path, overrides);
}

RunConfig config_from_json(const std::string& json_text, const std::vector<std::string>& overrides) {
  const json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("configuration text is not valid JSON");
  }
  return resolve(j, "configuration text", overrides);
}

}  // namespace ptspin::cli
