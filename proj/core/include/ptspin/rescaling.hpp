// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "ptspin/model.hpp"
#include "ptspin/thermo.hpp"

namespace ptspin {

/// f(Np) = a / (2 Np + b) fitted to the couplings that pin the low-temperature gap.
struct RescalingFit {
  double a = 0.0;
  double b = 0.0;
  std::vector<int> np;
  std::vector<double> G;          // coupling that reproduces the target gap
  std::vector<double> f;          // G / G0
  std::vector<double> residuals;  // f - a / (2 Np + b)
};

struct RescalingOptions {
  double t_low = 1e-2;  // GHz; stands in for T = 0
  double g_tol = 1e-10;  // relative bisection tolerance on G
  GapOperator gap = GapOperator::kCollective;
  // b used when a single Np is given (one equation cannot fix both coefficients).
  double single_point_b = model::kRescaleB;
};

namespace model {

/// Pairing gap at temperature T for np pairs per level, coupling G and g = 0. The NV
/// sector decouples at g = 0, so the smallest ensemble is used.
double decoupled_gap(const ModelParams& base, int np, double G, double T,
                     GapOperator mode = GapOperator::kCollective);

/// Coupling G at which decoupled_gap(.., t_low) equals target. Throws SolverFailure when no
/// bracket is found.
double coupling_for_gap(const ModelParams& base, int np, double target,
                        const RescalingOptions& opts = {});

/// Least-squares fit of f = a / (2 Np + b) to (np, f) samples.
RescalingFit fit_rescaling_curve(std::span<const int> np, std::span<const double> f,
                                 double single_point_b = kRescaleB);

/// For each Np finds G with Delta(t_low, G) = target and fits G / G0 against a / (2 Np + b).
RescalingFit fit_rescaling(std::span<const int> np_list, double G0, double target,
                           const ModelParams& base = {}, const RescalingOptions& opts = {});

}  // namespace model
}  // namespace ptspin
