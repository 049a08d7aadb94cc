// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>

#include "ptspin/blocks.hpp"
#include "ptspin/cycles.hpp"
#include "ptspin/errors.hpp"
#include "ptspin/oracle.hpp"
#include "ptspin/parallel.hpp"
#include "ptspin/rescaling.hpp"
#include "ptspin/spectral.hpp"
#include "ptspin/stability.hpp"
#include "ptspin/state_surface.hpp"
#include "ptspin/thermo.hpp"
#include "ptspin_cli/table.hpp"

namespace ptspin::cli {

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string num(int v) { return format_number(v); }
std::string flag(bool b) { return b ? "1" : "0"; }
std::string half(HalfInt h) { return format_number(h.value()); }

// Free text must not break the tab layout.
std::string text(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n'; }, ' ');
  return s;
}

void require_grid(const char* name, const std::vector<double>& grid) {
  if (grid.empty()) {
    throw ConfigError(std::string("empty grid: ") + name);
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ConfigError(std::string("grid is not increasing: ") + name);
    }
  }
}

struct Context {
  const RunConfig& cfg;
  std::string command;
  std::ostream& log;

  TableWriter table(const std::string& file, std::vector<std::string> columns) const {
    const auto path = (std::filesystem::path(cfg.out_dir) / file).string();
    log << path << '\n';
    return TableWriter(path, command, cfg, std::move(columns));
  }
};

int cmd_spectrum(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ModelSpectrum spec = spectral::compute_spectrum(cfg.model, cfg.spectral, cfg.workers);
  auto out = ctx.table("spectrum.tsv",
                       {"block_id", "S", "s1", "s2", "mult", "level", "re_E", "im_E"});
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& block = spec.blocks[b];
    BigInt mult = 0;
    for (const auto& w : block.weights) {
      mult += w.exact;
    }
    const std::string mult_text = mult.str();
    for (std::size_t n = 0; n < block.eigenvalues.size(); ++n) {
      out.row({num(static_cast<int>(b)), half(block.key.nv_spin), half(block.key.s1),
               half(block.key.s2), mult_text, num(static_cast<int>(n)),
               num(block.eigenvalues[n].real()), num(block.eigenvalues[n].imag())});
    }
  }
  const auto gs = spectral::ground_state_info(spec, cfg.spectral.tie_tol, cfg.spectral.im_tol_rel);
  auto summary = ctx.table("spectrum_ground.tsv", {"re_E0", "im_E0", "complex", "gamma0",
                                                   "degeneracy", "max_abs_im", "near_defective"});
  summary.row({num(gs.e0.real()), num(gs.e0.imag()), flag(gs.is_complex), num(gs.gamma0),
               num(gs.degeneracy), num(spectral::max_abs_imag(spec)),
               flag(spec.near_defective())});
  return kExitOk;
}

int cmd_eps(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto eps = spectral::find_eps(cfg.model, cfg.eps_sweep, cfg.eps_precision, cfg.spectral);
  auto out = ctx.table("eps.tsv", {"param", "value", "lo", "hi", "S", "s1", "s2", "level",
                                   "re_E", "broken_above"});
  for (const auto& ep : eps) {
    out.row({spectral::param_name(ep.param), num(ep.value), num(ep.lo), num(ep.hi),
             half(ep.block.nv_spin), half(ep.block.s1), half(ep.block.s2), num(ep.level),
             num(ep.re_energy), flag(ep.broken_above)});
  }
  if (!cfg.eps_unity_g.empty()) {
    require_grid("eps.unity_g_values", cfg.eps_unity_g);
    const auto rows = spectral::first_eps_about_unity(
        cfg.model, cfg.eps_unity_g, cfg.eps_sweep.lo, cfg.eps_sweep.hi,
        cfg.eps_sweep.coarse_steps, cfg.eps_precision, cfg.spectral);
    const double nan = std::nan("");
    auto unity = ctx.table("eps_unity.tsv", {"g", "alpha_below", "alpha_above"});
    for (const auto& r : rows) {
      unity.row({num(r.g), num(r.alpha_below.value_or(nan)), num(r.alpha_above.value_or(nan))});
    }
    const auto trend = spectral::summarize_ep_trend(rows);
    auto t = ctx.table("eps_trend.tsv", {"below_relative_spread", "below_count",
                                         "above_r_squared", "above_slope", "above_count"});
    t.row({num(trend.below_relative_spread), num(trend.below_count), num(trend.above_r_squared),
           num(trend.above_slope), num(trend.above_count)});
  }
  return kExitOk;
}

int cmd_tc_map(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_grid("temperatures", cfg.temperatures);
  require_grid("alpha", cfg.alphas);
  if (cfg.g_values.empty()) {
    throw ConfigError("empty grid: grid.g_values");
  }
  struct Point {
    ZeroScan scan;
    GroundStateInfo gs;
  };
  auto out = ctx.table("tc_map.tsv", {"g", "alpha", "Tc", "zero_count", "doublings",
                                      "ground_complex", "ground_re", "ground_im", "warning"});
  auto zeros = ctx.table("tc_zeros.tsv",
                         {"g", "alpha", "T_zero", "lo", "hi", "sign_below", "sign_above"});
  for (double g : cfg.g_values) {
    const auto points = parallel_map<Point>(cfg.alphas.size(), cfg.workers, [&](std::size_t i) {
      ModelParams p = cfg.model.with_g(g).with_alpha(cfg.alphas[i]);
      SpectralOptions so = cfg.spectral;
      so.compute_vectors = false;
      ModelSpectrum spec = spectral::compute_spectrum(p, so);
      Point pt;
      pt.gs = spectral::ground_state_info(spec, so.tie_tol, so.im_tol_rel);
      ThermoOptions to = cfg.thermo;
      const ThermoEngine engine(std::move(spec), to);
      pt.scan = thermo::find_zeros(engine, cfg.temperatures, cfg.max_doublings);
      return pt;
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& pt = points[i];
      out.row({num(g), num(cfg.alphas[i]), num(pt.scan.Tc),
               num(static_cast<int>(pt.scan.zeros.size())), num(pt.scan.doublings),
               flag(pt.gs.is_complex), num(pt.gs.e0.real()), num(pt.gs.e0.imag()),
               text(pt.scan.warning)});
      for (const auto& z : pt.scan.zeros) {
        zeros.row({num(g), num(cfg.alphas[i]), num(z.T_zero), num(z.lo), num(z.hi),
                   num(z.sign_below), num(z.sign_above)});
      }
    }
  }
  return kExitOk;
}

int cmd_thermo(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_grid("temperatures", cfg.temperatures);
  struct Variant {
    int ns;
    ModelParams p;
  };
  std::vector<Variant> variants;
  const int base_ns = cfg.model.size.omega.twice();
  if (cfg.thermo_rescale) {
    const std::vector<int> ns_list = cfg.thermo_ns.empty() ? std::vector<int>{base_ns}
                                                           : cfg.thermo_ns;
    for (int ns : ns_list) {
      variants.push_back({ns, model::rescaled_model(cfg.model, cfg.model.size.omega1, ns)});
    }
  } else {
    if (!cfg.thermo_ns.empty()) {
      throw ConfigError("thermo.ns_values needs thermo.rescale = true");
    }
    variants.push_back({base_ns, cfg.model});
  }
  auto out = ctx.table("thermo.tsv", {"ns", "g", "alpha", "T", "T_r", "ln_abs_Z", "sign_Z", "F",
                                      "U", "S", "Cv", "Delta", "valid", "quality_warning",
                                      "S_fd", "Cv_fd"});
  for (const auto& v : variants) {
    const ThermoEngine engine(spectral::compute_spectrum(v.p, cfg.spectral, cfg.workers),
                              cfg.thermo);
    const auto points = parallel_map<ThermoPoint>(
        cfg.temperatures.size(), cfg.workers,
        [&](std::size_t i) { return engine.potentials(cfg.temperatures[i]); });
    for (const auto& pt : points) {
      out.row({num(v.ns), num(v.p.g), num(v.p.alpha), num(pt.T), num(pt.T / v.p.D),
               num(pt.Z.log_abs), num(pt.Z.sign), num(pt.F), num(pt.U), num(pt.S), num(pt.Cv),
               num(pt.Delta), flag(pt.valid), flag(pt.quality_warning), num(pt.S_fd),
               num(pt.Cv_fd)});
    }
  }
  return kExitOk;
}

int cmd_spinodal(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_grid("spinodal temperatures", cfg.spinodal_tr);
  require_grid("alpha", cfg.alphas);
  if (cfg.spinodal_alpha_points < 5) {
    throw ConfigError("spinodal.alpha_points must be at least 5");
  }
  const auto alpha_grid =
      thermo::linspace(cfg.alphas.front(), cfg.alphas.back(), cfg.spinodal_alpha_points);
  std::vector<double> temps;
  for (double tr : cfg.spinodal_tr) {
    temps.push_back(tr * cfg.model.D);
  }
  const StateSurface surface(cfg.model, cfg.thermo);
  const auto isos = stability::isotherms(surface, temps, alpha_grid, cfg.workers);

  auto curves = ctx.table("spinodal_isotherms.tsv", {"T_r", "T", "alpha", "F", "valid"});
  auto points = ctx.table("spinodal_points.tsv", {"T_r", "type", "alpha", "F"});
  auto intervals = ctx.table("spinodal_intervals.tsv", {"T_r", "kind", "lo", "hi", "p_eq"});
  auto summary = ctx.table("spinodal_summary.tsv", {"T_r", "T", "minima", "inflections",
                                                    "binodal", "spinodal", "halving_stable",
                                                    "warning"});
  const double nan = std::nan("");
  for (std::size_t t = 0; t < isos.size(); ++t) {
    const auto& iso = isos[t];
    const double tr = cfg.spinodal_tr[t];
    for (std::size_t i = 0; i < iso.alpha.size(); ++i) {
      curves.row({num(tr), num(iso.T), num(iso.alpha[i]), num(iso.F[i]), flag(iso.valid[i])});
    }
    const SpinodalResult res = stability::spinodal_analysis(iso);
    for (const auto& m : res.minima) {
      points.row({num(tr), "minimum", num(m.alpha), num(m.F)});
    }
    for (const auto& m : res.inflections) {
      points.row({num(tr), "inflection", num(m.alpha), num(m.F)});
    }
    for (std::size_t i = 0; i < res.binodal.size(); ++i) {
      const auto& in = res.binodal[i];
      intervals.row({num(tr), stability::interval_name(in.kind), num(in.lo), num(in.hi),
                     num(i < res.p_eq.size() ? res.p_eq[i] : nan)});
    }
    for (const auto* set : {&res.metastable, &res.spinodal, &res.indeterminate}) {
      for (const auto& in : *set) {
        intervals.row({num(tr), stability::interval_name(in.kind), num(in.lo), num(in.hi),
                       num(nan)});
      }
    }
    summary.row({num(tr), num(iso.T), num(static_cast<int>(res.minima.size())),
                 num(static_cast<int>(res.inflections.size())),
                 num(static_cast<int>(res.binodal.size())),
                 num(static_cast<int>(res.spinodal.size())), flag(res.halving_stable),
                 text(res.warning)});
  }
  return kExitOk;
}

int cmd_cycle(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const GridRanges& ranges = cfg.cycle_kind == CycleKind::kCarnot ? cfg.carnot : cfg.stirling;
  require_grid("cycle temperatures", ranges.T);
  require_grid(cfg.cycle_kind == CycleKind::kCarnot ? "cycle entropies" : "cycle alphas",
               ranges.x);
  const StateSurface surface(cfg.model, cfg.thermo);
  const EfficiencyGrid grid = cycles::efficiency_grid(surface, cfg.cycle_kind, ranges,
                                                      cfg.workers);
  const std::string stem = std::string("cycle_") + cycles::kind_name(cfg.cycle_kind);
  const char* x = cfg.cycle_kind == CycleKind::kCarnot ? "S" : "alpha";
  auto cells = ctx.table(stem + "_cells.tsv",
                         {"T1", "T2", std::string(x) + "1", std::string(x) + "2", "feasible",
                          "degenerate", "eta", "eta_classical", "delta_eta", "energy_residual",
                          "R_alpha", "note"});
  for (const auto& c : grid.cells) {
    cells.row({num(c.T1), num(c.T2), num(c.x1), num(c.x2), flag(c.feasible), flag(c.degenerate),
               num(c.eta), num(c.eta_classical), num(c.delta_eta), num(c.energy_residual),
               num(c.R_alpha), text(c.note)});
  }
  const auto projection = [&](const std::string& file, const std::vector<ProjectionCell>& proj,
                              const std::string& a, const std::string& b) {
    auto out = ctx.table(file, {a + "1", a + "2", "any_feasible", "eta_max", "eta_classical",
                                "delta_eta", b + "1", b + "2"});
    for (const auto& p : proj) {
      out.row({num(p.a1), num(p.a2), flag(p.any_feasible), num(p.eta_max), num(p.eta_classical),
               num(p.delta_eta), num(p.b1), num(p.b2)});
    }
  };
  projection(stem + "_by_x.tsv", grid.by_x, x, "T");
  projection(stem + "_by_T.tsv", grid.by_T, "T", x);
  return kExitOk;
}

int cmd_rescale_fit(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.rescale_np.empty()) {
    throw ConfigError("empty grid: rescale.np_values");
  }
  RescalingOptions opts;
  opts.t_low = cfg.rescale_t_low;
  opts.gap = cfg.thermo.gap;
  const RescalingFit fit =
      model::fit_rescaling(cfg.rescale_np, cfg.rescale_G0, cfg.rescale_target, cfg.model, opts);
  auto out = ctx.table("rescale_fit.tsv", {"np", "G", "f", "f_fit", "f_reference", "residual"});
  for (std::size_t i = 0; i < fit.np.size(); ++i) {
    out.row({num(fit.np[i]), num(fit.G[i]), num(fit.f[i]), num(fit.f[i] - fit.residuals[i]),
             num(model::f_np(fit.np[i])), num(fit.residuals[i])});
  }
  auto coeffs = ctx.table("rescale_coeffs.tsv", {"a", "b", "a_reference", "b_reference"});
  coeffs.row({num(fit.a), num(fit.b), num(model::kRescaleA), num(model::kRescaleB)});

  if (!cfg.temperatures.empty()) {
    require_grid("temperatures", cfg.temperatures);
    auto gap = ctx.table("rescale_gap.tsv", {"np", "G_r", "T", "T_r", "Delta", "Delta_r"});
    for (int np : cfg.rescale_np) {
      const double gr = cfg.rescale_G0 * model::f_np(np);
      const auto deltas = parallel_map<double>(
          cfg.temperatures.size(), cfg.workers, [&](std::size_t i) {
            return model::decoupled_gap(cfg.model, np, gr, cfg.temperatures[i], cfg.thermo.gap);
          });
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double T = cfg.temperatures[i];
        gap.row({num(np), num(gr), num(T), num(T / cfg.model.D), num(deltas[i]),
                 num(deltas[i] / cfg.model.D)});
      }
    }
  }
  return kExitOk;
}

int cmd_oracle_check(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.oracle_alpha.empty() || cfg.oracle_beta.empty()) {
    throw ConfigError("empty grid: oracle.alpha_values / oracle.beta_values");
  }
  auto out = ctx.table("oracle.tsv", {"alpha", "g", "beta", "ln_abs_Z_blocks", "sign_blocks",
                                      "ln_abs_Z_fock", "sign_fock", "z_rel_diff",
                                      "spectrum_distance", "pass"});
  bool all_pass = true;
  for (std::size_t i = 0; i < cfg.oracle_alpha.size(); ++i) {
    ModelParams p = cfg.model.with_alpha(cfg.oracle_alpha[i]).with_g(cfg.oracle_g[i]);
    p.size = cfg.oracle_size;
    const ModelSpectrum spec = spectral::compute_spectrum(p, cfg.spectral);
    const double dist =
        oracle::multiset_distance(oracle::block_multiset(spec), oracle::fock_eigenvalues(p));
    for (double beta : cfg.oracle_beta) {
      const SignedLog zb = thermo::partition_function(spec, beta);
      const SignedLog zf = oracle::fock_log_partition(p, beta);
      double rel = std::numeric_limits<double>::infinity();
      if (zb.sign == zf.sign) {
        rel = zb.sign == 0 ? 0.0 : std::abs(std::expm1(zb.log_abs - zf.log_abs));
      }
      const bool pass = rel <= cfg.oracle_tol && dist <= cfg.oracle_tol;
      all_pass = all_pass && pass;
      out.row({num(p.alpha), num(p.g), num(beta), num(zb.log_abs), num(zb.sign), num(zf.log_abs),
               num(zf.sign), num(rel), num(dist), flag(pass)});
    }
  }
  return all_pass ? kExitOk : kExitInternal;
}

int cmd_blocks_dump(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto blocks = blocks::enumerate_blocks(cfg.model.size);
  auto out = ctx.table("blocks.tsv", {"N", "tau", "k", "S", "s1", "s2", "mult", "dim"});
  for (const auto& b : blocks) {
    out.row({num(b.nv.n), half(b.nv.tau), num(b.nv.k), half(b.nv.spin), half(b.qb.s1),
             half(b.qb.s2), b.mult().str(), num(b.dim())});
  }
  const BigInt sum = blocks::completeness_sum(blocks);
  const BigInt dim = cfg.model.size.total_dimension();
  auto summary = ctx.table("blocks_summary.tsv",
                           {"blocks", "modes", "dimension", "completeness_sum", "complete"});
  summary.row({num(static_cast<int>(blocks.size())), num(cfg.model.size.total_modes()), dim.str(),
               sum.str(), flag(sum == dim)});
  return sum == dim ? kExitOk : kExitInternal;
}

using Handler = int (*)(const Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"spectrum", cmd_spectrum},         {"eps", cmd_eps},
      {"tc-map", cmd_tc_map},             {"thermo", cmd_thermo},
      {"spinodal", cmd_spinodal},         {"cycle", cmd_cycle},
      {"rescale-fit", cmd_rescale_fit},   {"oracle-check", cmd_oracle_check},
      {"blocks-dump", cmd_blocks_dump},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "spectrum", "eps",         "tc-map",       "thermo",     "spinodal",
      "cycle",    "rescale-fit", "oracle-check", "blocks-dump"};
  return names;
}

int run(const std::string& command, const RunConfig& config, std::ostream& log,
        std::ostream& err) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) {
    err << "unknown command " << command << '\n';
    return kExitInfeasible;
  }
  try {
    std::filesystem::create_directories(config.out_dir);
    return it->second(Context{config, command, log});
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InvalidArgument& e) {
    err << "invalid request: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace ptspin::cli
