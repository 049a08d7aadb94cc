// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "ptspin/parallel.hpp"

namespace ptspin {

namespace {

void require_increasing(std::span<const double> xs, const char* what) {
  if (xs.empty()) {
    throw InvalidArgument(std::string(what) + " grid is empty");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || (i > 0 && !(xs[i] > xs[i - 1]))) {
      throw InvalidArgument(std::string(what) + " grid must be finite and strictly increasing");
    }
  }
}

bool usable(const ThermoPoint& pt) { return pt.valid && !pt.z_nonpositive && std::isfinite(pt.S); }

CycleState state_of(const ThermoPoint& pt, double alpha) {
  CycleState s;
  s.T = pt.T;
  s.alpha = alpha;
  s.S = pt.S;
  s.U = pt.U;
  s.F = pt.F;
  s.z_nonpositive = !pt.valid || pt.z_nonpositive;
  return s;
}

using CachedStateFn = std::function<ThermoPoint(double alpha, bool cache)>;

AlphaSolution solve_alpha_impl(const CachedStateFn& state, double target,
                               const AlphaBracket& bracket) {
  bracket.validate();
  const int n = bracket.scan_steps + 1;
  std::vector<double> alpha(n);
  std::vector<double> resid(n);
  std::vector<bool> ok(n);
  double s_min = std::numeric_limits<double>::infinity();
  double s_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    alpha[i] = bracket.lo + (bracket.hi - bracket.lo) * i / bracket.scan_steps;
    const ThermoPoint pt = state(alpha[i], true);
    ok[i] = usable(pt);
    resid[i] = pt.S - target;
    if (ok[i]) {
      s_min = std::min(s_min, pt.S);
      s_max = std::max(s_max, pt.S);
    }
  }

  AlphaSolution sol;
  for (int i = 0; i < n; ++i) {
    if (!ok[i]) {
      continue;
    }
    if (resid[i] == 0.0) {
      sol.roots.push_back(alpha[i]);
      continue;
    }
    if (i + 1 >= n || !ok[i + 1] || resid[i + 1] == 0.0 || (resid[i] > 0.0) == (resid[i + 1] > 0.0)) {
      continue;
    }
    double lo = alpha[i];
    double hi = alpha[i + 1];
    const bool lo_positive = resid[i] > 0.0;
    bool fragmented = false;
    while (hi - lo > 1e-8) {
      const double mid = 0.5 * (lo + hi);
      const ThermoPoint pt = state(mid, false);
      if (!usable(pt)) {
        fragmented = true;
        break;
      }
      ((pt.S - target > 0.0) == lo_positive ? lo : hi) = mid;
    }
    if (!fragmented) {
      sol.roots.push_back(0.5 * (lo + hi));
    }
  }
  if (sol.roots.empty()) {
    throw Infeasible("no alpha in [" + std::to_string(bracket.lo) + ", " +
                     std::to_string(bracket.hi) + "] reaches S = " + std::to_string(target) +
                     "; attained S range [" + std::to_string(s_min) + ", " +
                     std::to_string(s_max) + "]");
  }
  sol.root_count = static_cast<int>(sol.roots.size());
  sol.alpha = sol.roots.front();
  sol.residual = std::abs(state(sol.alpha, false).S - target);
  return sol;
}

CycleState carnot_corner(const StateSurface& surface, double T, double S,
                         const AlphaBracket& bracket) {
  const AlphaSolution sol = cycles::solve_alpha(surface, T, S, bracket);
  CycleState c = state_of(surface.at(T, sol.alpha, false), sol.alpha);
  c.root_count = sol.root_count;
  return c;
}

struct Pair {
  std::size_t lo;
  std::size_t hi;
};

std::vector<Pair> ordered_pairs(std::size_t n) {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back({i, j});
    }
  }
  return out;
}

GridCell cell_from(const CycleResult& r, double T1, double T2, double x1, double x2) {
  GridCell c;
  c.T1 = T1;
  c.T2 = T2;
  c.x1 = x1;
  c.x2 = x2;
  c.feasible = true;
  c.degenerate = r.degenerate;
  c.eta = r.eta;
  c.eta_classical = r.eta_classical;
  c.delta_eta = r.eta - r.eta_classical;
  c.energy_residual = r.energy_residual;
  c.R_alpha = r.R_alpha;
  c.note = r.note;
  return c;
}

std::vector<ProjectionCell> project(const std::vector<GridCell>& cells, bool by_x) {
  std::map<std::pair<double, double>, ProjectionCell> best;
  for (const auto& c : cells) {
    const auto key = by_x ? std::make_pair(c.x1, c.x2) : std::make_pair(c.T1, c.T2);
    auto [it, inserted] = best.try_emplace(key);
    ProjectionCell& p = it->second;
    if (inserted) {
      p.a1 = key.first;
      p.a2 = key.second;
    }
    if (!c.feasible || !std::isfinite(c.eta)) {
      continue;
    }
    if (!p.any_feasible || c.eta > p.eta_max) {
      p.any_feasible = true;
      p.eta_max = c.eta;
      p.eta_classical = c.eta_classical;
      p.delta_eta = c.delta_eta;
      p.b1 = by_x ? c.T1 : c.x1;
      p.b2 = by_x ? c.T2 : c.x2;
    }
  }
  std::vector<ProjectionCell> out;
  out.reserve(best.size());
  for (auto& [key, cell] : best) {
    out.push_back(cell);
  }
  return out;
}

}  // namespace

void AlphaBracket::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo) || lo < 0.0) {
    throw InvalidArgument("alpha bracket must satisfy 0 <= lo < hi");
  }
  if (scan_steps < 1) {
    throw InvalidArgument("alpha bracket needs at least one scan step");
  }
}

void CycleSpec::validate() const {
  if (!(T1 > 0.0) || !(T2 >= T1)) {
    throw InvalidArgument("cycle temperatures must satisfy 0 < T1 <= T2");
  }
  if (kind == CycleKind::kCarnot && !(S2 >= S1)) {
    throw InvalidArgument("Carnot entropies must satisfy S1 <= S2");
  }
  if (kind == CycleKind::kStirling && (!(alpha1 >= 0.0) || !(alpha2 >= alpha1))) {
    throw InvalidArgument("Stirling asymmetries must satisfy 0 <= alpha1 <= alpha2");
  }
  bracket.validate();
}

void GridRanges::validate() const {
  require_increasing(T, "temperature");
  require_increasing(x, "cycle coordinate");
  if (!(T.front() > 0.0)) {
    throw InvalidArgument("grid temperatures must be positive");
  }
  bracket.validate();
}

namespace cycles {

const char* kind_name(CycleKind kind) { return kind == CycleKind::kCarnot ? "carnot" : "stirling"; }

double stirling_classical_efficiency(double T1, double T2, double alpha1, double alpha2) {
  if (T2 == T1) {
    return 0.0;
  }
  const double log_ratio = std::log(alpha2 / alpha1);
  return (T2 - T1) / (T2 + 2.5 * (T2 - T1) / log_ratio);
}

AlphaSolution solve_alpha(const EntropyFn& state, double target, const AlphaBracket& bracket) {
  return solve_alpha_impl([&](double a, bool) { return state(a); }, target, bracket);
}

AlphaSolution solve_alpha(const StateSurface& surface, double T, double target,
                          const AlphaBracket& bracket) {
  if (!(T > 0.0)) {
    throw InvalidArgument("temperature must be positive");
  }
  return solve_alpha_impl([&](double a, bool cache) { return surface.at(T, a, cache); }, target,
                          bracket);
}

AlphaSolution solve_alpha(const ModelParams& p, double T, double target,
                          const AlphaBracket& bracket) {
  return solve_alpha(StateSurface(p), T, target, bracket);
}

CycleResult assemble(CycleKind kind, const std::array<CycleState, 4>& corners,
                     CycleDirection direction) {
  CycleResult r;
  r.kind = kind;
  r.direction = direction;
  std::array<CycleLeg, 4> legs{};
  for (std::size_t i = 0; i < 4; ++i) {
    const CycleState& a = corners[i];
    const CycleState& b = corners[(i + 1) % 4];
    CycleLeg& leg = legs[i];
    leg.dU = b.U - a.U;
    leg.dS = b.S - a.S;
    leg.isothermal = i % 2 == 0;
    if (leg.isothermal) {
      leg.Q = a.T * leg.dS;
      leg.W = leg.dU - leg.Q;
    } else if (kind == CycleKind::kCarnot) {
      leg.Q = 0.0;
      leg.W = leg.dU;
    } else {
      leg.Q = leg.dU;
      leg.W = 0.0;
    }
  }
  // An engine does net work (W_T <= 0). When S falls with alpha the listed Stirling order
  // runs as a refrigerator, so the engine is the reversed traversal.
  double w_listed = 0.0;
  for (const CycleLeg& leg : legs) {
    w_listed += leg.W;
  }
  const bool listed_is_engine = w_listed <= 0.0;
  if (!listed_is_engine) {
    r.reversed_order = true;
  }
  const bool reverse = (direction == CycleDirection::kEngine) != listed_is_engine;
  // Cold reservoir heat absorbed when running as a refrigerator.
  const double q_cold_refrigerator = listed_is_engine ? -legs[2].Q : legs[2].Q;

  if (!reverse) {
    r.corners = corners;
    r.legs = legs;
  } else {
    r.corners = {corners[0], corners[3], corners[2], corners[1]};
    for (std::size_t i = 0; i < 4; ++i) {
      const CycleLeg& e = legs[3 - i];
      r.legs[i] = {-e.Q, -e.W, -e.dU, -e.dS, e.isothermal};
    }
  }

  double sum_du = 0.0;
  double sum_ds = 0.0;
  for (const CycleLeg& leg : r.legs) {
    r.W_T += leg.W;
    sum_du += leg.dU;
    sum_ds += leg.dS;
    if (leg.Q > 0.0) {
      r.Q_in += leg.Q;
    } else {
      r.Q_out += leg.Q;
    }
  }
  r.energy_residual = std::abs(sum_du);
  r.entropy_residual = std::abs(sum_ds);
  r.eta = r.Q_in > 0.0 ? std::abs(r.W_T) / r.Q_in : 0.0;
  if (r.W_T != 0.0) {
    r.cop = std::abs(q_cold_refrigerator) / std::abs(r.W_T);
  }

  const double T1 = corners[2].T;
  const double T2 = corners[0].T;
  if (kind == CycleKind::kCarnot) {
    r.eta_classical = T2 > 0.0 ? 1.0 - T1 / T2 : 0.0;
    // alpha at the end of legs 1..4 of the engine traversal.
    r.R_alpha = (corners[1].alpha / corners[2].alpha) / (corners[0].alpha / corners[3].alpha);
  } else {
    r.eta_classical =
        stirling_classical_efficiency(T1, T2, corners[0].alpha, corners[1].alpha);
  }

  for (const CycleState& c : corners) {
    if (c.z_nonpositive) {
      r.degenerate = true;
      r.note = "corner at T = " + std::to_string(c.T) + ", alpha = " + std::to_string(c.alpha) +
               " has Z <= 0";
    }
  }
  if (r.W_T == 0.0 || r.Q_in == 0.0) {
    r.degenerate = true;
    if (r.note.empty()) {
      r.note = "cycle encloses no area";
    }
  }
  return r;
}

CycleResult carnot_cycle(const StateSurface& surface, const CycleSpec& spec) {
  spec.validate();
  if (spec.kind != CycleKind::kCarnot) {
    throw InvalidArgument("carnot_cycle needs a Carnot spec");
  }
  // Corner order: (T2,S1) -> (T2,S2) -> (T1,S2) -> (T1,S1).
  const std::array<std::pair<double, double>, 4> targets{
      {{spec.T2, spec.S1}, {spec.T2, spec.S2}, {spec.T1, spec.S2}, {spec.T1, spec.S1}}};
  std::array<CycleState, 4> corners{};
  for (std::size_t i = 0; i < 4; ++i) {
    try {
      corners[i] = carnot_corner(surface, targets[i].first, targets[i].second, spec.bracket);
    } catch (const Infeasible& e) {
      throw Infeasible("Carnot leg " + std::to_string(i + 1) + " start corner (T = " +
                       std::to_string(targets[i].first) + ", S = " +
                       std::to_string(targets[i].second) + "): " + e.what());
    }
  }
  return assemble(CycleKind::kCarnot, corners, spec.direction);
}

CycleResult stirling_cycle(const StateSurface& surface, const CycleSpec& spec) {
  spec.validate();
  if (spec.kind != CycleKind::kStirling) {
    throw InvalidArgument("stirling_cycle needs a Stirling spec");
  }
  // Corner order: (T2,a1) -> (T2,a2) -> (T1,a2) -> (T1,a1).
  const std::array<CycleState, 4> corners{
      state_of(surface.at(spec.T2, spec.alpha1), spec.alpha1),
      state_of(surface.at(spec.T2, spec.alpha2), spec.alpha2),
      state_of(surface.at(spec.T1, spec.alpha2), spec.alpha2),
      state_of(surface.at(spec.T1, spec.alpha1), spec.alpha1)};
  return assemble(CycleKind::kStirling, corners, spec.direction);
}

CycleResult carnot_cycle(const ModelParams& p, const CycleSpec& spec) {
  return carnot_cycle(StateSurface(p), spec);
}

CycleResult stirling_cycle(const ModelParams& p, const CycleSpec& spec) {
  return stirling_cycle(StateSurface(p), spec);
}

EfficiencyGrid efficiency_grid(const StateSurface& surface, CycleKind kind,
                               const GridRanges& ranges, int workers) {
  ranges.validate();
  const std::size_t nT = ranges.T.size();
  const std::size_t nx = ranges.x.size();

  // Corner states indexed by (T, x); Carnot corners need root-finding, so solve each once.
  struct Corner {
    std::optional<CycleState> state;
    std::string error;
  };
  const auto corners = parallel_map<Corner>(nT * nx, workers, [&](std::size_t idx) {
    const double T = ranges.T[idx / nx];
    const double x = ranges.x[idx % nx];
    Corner c;
    if (kind == CycleKind::kStirling) {
      c.state = state_of(surface.at(T, x), x);
      return c;
    }
    try {
      c.state = carnot_corner(surface, T, x, ranges.bracket);
    } catch (const Infeasible& e) {
      c.error = e.what();
    }
    return c;
  });
  const auto corner = [&](std::size_t t, std::size_t x) -> const Corner& {
    return corners[t * nx + x];
  };

  EfficiencyGrid grid;
  grid.kind = kind;
  for (const Pair& tp : ordered_pairs(nT)) {
    for (const Pair& xp : ordered_pairs(nx)) {
      const double T1 = ranges.T[tp.lo];
      const double T2 = ranges.T[tp.hi];
      const double x1 = ranges.x[xp.lo];
      const double x2 = ranges.x[xp.hi];
      const std::array<const Corner*, 4> cs{&corner(tp.hi, xp.lo), &corner(tp.hi, xp.hi),
                                            &corner(tp.lo, xp.hi), &corner(tp.lo, xp.lo)};
      const auto missing = std::find_if(cs.begin(), cs.end(),
                                        [](const Corner* c) { return !c->state.has_value(); });
      if (missing != cs.end()) {
        GridCell cell;
        cell.T1 = T1;
        cell.T2 = T2;
        cell.x1 = x1;
        cell.x2 = x2;
        cell.note = "infeasible: " + (*missing)->error;
        grid.cells.push_back(std::move(cell));
        continue;
      }
      const std::array<CycleState, 4> states{*cs[0]->state, *cs[1]->state, *cs[2]->state,
                                             *cs[3]->state};
      grid.cells.push_back(
          cell_from(assemble(kind, states, CycleDirection::kEngine), T1, T2, x1, x2));
    }
  }
  grid.by_x = project(grid.cells, true);
  grid.by_T = project(grid.cells, false);
  return grid;
}

EfficiencyGrid efficiency_grid(const ModelParams& p, CycleKind kind, const GridRanges& ranges,
                               int workers) {
  return efficiency_grid(StateSurface(p), kind, ranges, workers);
}

}  // namespace cycles
}  // namespace ptspin
