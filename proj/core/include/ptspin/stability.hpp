// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ptspin/state_surface.hpp"

namespace ptspin {

/// F(alpha) at fixed T. Points where Z <= 0 are kept but marked invalid.
struct Isotherm {
  double T = 0.0;
  std::vector<double> alpha;
  std::vector<double> F;
  std::vector<bool> valid;

  void validate() const;
};

struct StationaryPoint {
  double alpha = 0.0;
  double F = 0.0;
};

enum class IntervalKind { kBinodal, kMetastable, kSpinodal, kIndeterminate };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  IntervalKind kind = IntervalKind::kBinodal;
};

struct SpinodalResult {
  double T = 0.0;
  std::vector<StationaryPoint> minima;
  std::vector<StationaryPoint> inflections;
  std::vector<Interval> binodal;
  std::vector<Interval> metastable;
  std::vector<Interval> spinodal;
  std::vector<Interval> indeterminate;
  std::vector<double> p_eq;  // one per binodal interval
  bool halving_stable = true;
  std::string warning;
};

struct MaxwellCheck {
  double dS_dalpha = 0.0;
  double dp_dT = 0.0;
  double residual = 0.0;
  bool flagged = false;  // stencil touched Z <= 0; residual not meaningful
};

using FreeEnergyFn = std::function<double(double alpha)>;
using FreeEnergySurfaceFn = std::function<double(double T, double alpha)>;

namespace stability {

inline constexpr int kDefaultAlphaPoints = 400;

const char* interval_name(IntervalKind kind);

/// F on alpha_grid at each temperature; one spectrum per alpha shared by all T.
std::vector<Isotherm> isotherms(const StateSurface& surface, std::span<const double> temperatures,
                                std::span<const double> alpha_grid, int workers = 1);
Isotherm isotherm(const StateSurface& surface, double T, std::span<const double> alpha_grid);

/// -dF/dalpha by a Richardson-refined central difference with step rel_step * max(|alpha|, 1).
double pressure_alpha(const FreeEnergyFn& F, double alpha, double rel_step = 1e-3);
/// Throws NumericalQuality when a stencil point has Z <= 0.
double pressure_alpha(const StateSurface& surface, double T, double alpha, double rel_step = 1e-3);
double pressure_alpha(const ModelParams& p, double T, double alpha, double rel_step = 1e-3);

/// Minima and inflections from discrete derivative sign changes, parabolically refined,
/// then binodal / metastable / spinodal classification. Needs >= 5 valid points.
SpinodalResult spinodal_analysis(const Isotherm& iso);

/// Lever-rule free energy on the binodal containing alpha. Throws InvalidArgument outside
/// every binodal and InternalError if the chord lies above the homogeneous F.
double heterogeneous_free_energy(const SpinodalResult& res, const Isotherm& iso, double alpha);

/// dS/dalpha against dp/dT with p = -dF/dalpha, both by central differences.
MaxwellCheck maxwell_check(const FreeEnergySurfaceFn& F, double T, double alpha,
                           double rel_step = 1e-3);
MaxwellCheck maxwell_check(const StateSurface& surface, double T, double alpha,
                           double rel_step = 1e-3);
MaxwellCheck maxwell_check(const ModelParams& p, double T, double alpha, double rel_step = 1e-3);

}  // namespace stability
}  // namespace ptspin
