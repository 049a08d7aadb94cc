// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ptspin/state_surface.hpp"

namespace ptspin {

enum class CycleKind { kCarnot, kStirling };
enum class CycleDirection { kEngine, kRefrigerator };

struct AlphaBracket {
  double lo = 0.0;
  double hi = 4.0;
  int scan_steps = 200;

  void validate() const;
};

struct CycleSpec {
  CycleKind kind = CycleKind::kCarnot;
  double T1 = 0.0;  // cold
  double T2 = 0.0;  // hot
  double S1 = 0.0;  // Carnot only
  double S2 = 0.0;
  double alpha1 = 0.0;  // Stirling only
  double alpha2 = 0.0;
  AlphaBracket bracket;
  CycleDirection direction = CycleDirection::kEngine;

  void validate() const;
};

struct AlphaSolution {
  double alpha = 0.0;
  int root_count = 0;
  std::vector<double> roots;
  double residual = 0.0;  // |S(alpha) - target|
};

struct CycleState {
  double T = 0.0;
  double alpha = 0.0;
  double S = 0.0;
  double U = 0.0;
  double F = 0.0;
  bool z_nonpositive = false;
  int root_count = 0;  // Carnot corners only
};

struct CycleLeg {
  double Q = 0.0;
  double W = 0.0;
  double dU = 0.0;
  double dS = 0.0;
  bool isothermal = false;
};

struct CycleResult {
  CycleKind kind = CycleKind::kCarnot;
  CycleDirection direction = CycleDirection::kEngine;
  std::array<CycleState, 4> corners{};
  std::array<CycleLeg, 4> legs{};
  double W_T = 0.0;
  double Q_in = 0.0;
  double Q_out = 0.0;
  double eta = 0.0;
  double eta_classical = 0.0;
  double cop = std::numeric_limits<double>::quiet_NaN();
  double R_alpha = std::numeric_limits<double>::quiet_NaN();
  double energy_residual = 0.0;
  double entropy_residual = 0.0;
  bool degenerate = false;
  // The listed corner order runs as a refrigerator (S falls with alpha along the
  // isotherms), so the engine traverses it backwards.
  bool reversed_order = false;
  std::string note;
};

/// Carnot: x = S, Stirling: x = alpha.
struct GridRanges {
  std::vector<double> T;
  std::vector<double> x;
  AlphaBracket bracket;

  void validate() const;
};

struct GridCell {
  double T1 = 0.0;
  double T2 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  bool feasible = false;
  bool degenerate = false;
  double eta = std::numeric_limits<double>::quiet_NaN();
  double eta_classical = std::numeric_limits<double>::quiet_NaN();
  double delta_eta = std::numeric_limits<double>::quiet_NaN();
  double energy_residual = std::numeric_limits<double>::quiet_NaN();
  double R_alpha = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

/// Maximum efficiency over the hidden pair, keyed by the shown pair.
struct ProjectionCell {
  double a1 = 0.0;
  double a2 = 0.0;
  bool any_feasible = false;
  double eta_max = std::numeric_limits<double>::quiet_NaN();
  double eta_classical = std::numeric_limits<double>::quiet_NaN();  // at the argmax
  double delta_eta = std::numeric_limits<double>::quiet_NaN();
  double b1 = std::numeric_limits<double>::quiet_NaN();  // hidden pair at the argmax
  double b2 = std::numeric_limits<double>::quiet_NaN();
};

struct EfficiencyGrid {
  CycleKind kind = CycleKind::kCarnot;
  std::vector<GridCell> cells;           // ordered by (T1, T2, x1, x2) grid indices
  std::vector<ProjectionCell> by_x;      // max over temperature pairs
  std::vector<ProjectionCell> by_T;      // max over x pairs
};

using EntropyFn = std::function<ThermoPoint(double alpha)>;

namespace cycles {

const char* kind_name(CycleKind kind);

/// Stirling comparator (T2 - T1) / (T2 + (5/2)(T2 - T1) / ln(alpha2/alpha1)).
double stirling_classical_efficiency(double T1, double T2, double alpha1, double alpha2);

/// Roots of S(alpha) = target on the bracket, each bisected to |d alpha| <= 1e-8; points
/// with Z <= 0 fragment the bracket. Returns the smallest root; throws Infeasible carrying
/// the attained S range when there is none.
AlphaSolution solve_alpha(const EntropyFn& state, double target, const AlphaBracket& bracket);
AlphaSolution solve_alpha(const StateSurface& surface, double T, double target,
                          const AlphaBracket& bracket = {});
AlphaSolution solve_alpha(const ModelParams& p, double T, double target,
                          const AlphaBracket& bracket = {});

/// Assembles a cycle from four corners in the listed order. The engine direction is the
/// traversal with W_T <= 0; the refrigerator is its reverse.
CycleResult assemble(CycleKind kind, const std::array<CycleState, 4>& corners,
                     CycleDirection direction);

CycleResult carnot_cycle(const StateSurface& surface, const CycleSpec& spec);
CycleResult stirling_cycle(const StateSurface& surface, const CycleSpec& spec);
CycleResult carnot_cycle(const ModelParams& p, const CycleSpec& spec);
CycleResult stirling_cycle(const ModelParams& p, const CycleSpec& spec);

EfficiencyGrid efficiency_grid(const StateSurface& surface, CycleKind kind,
                               const GridRanges& ranges, int workers = 1);
EfficiencyGrid efficiency_grid(const ModelParams& p, CycleKind kind, const GridRanges& ranges,
                               int workers = 1);

}  // namespace cycles
}  // namespace ptspin
