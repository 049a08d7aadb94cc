// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ptspin/spectral.hpp"

namespace ptspin {

/// sign * exp(log_abs). sign == 0 encodes an exact zero.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

enum class GapOperator { kCollective, kDiagonal };

struct ThermoOptions {
  // Z is treated as zero when |Z| falls below z_floor times its largest term.
  double z_floor = 1e-300;
  GapOperator gap = GapOperator::kCollective;
  // Also evaluate -dF/dT and dU/dT by central differences.
  bool finite_difference_checks = false;
  double fd_rel_step = 1e-3;
};

struct ThermoPoint {
  double T = 0.0;
  SignedLog Z;
  double F = 0.0;
  double U = 0.0;
  double S = 0.0;
  double Cv = 0.0;
  double Delta = 0.0;
  bool z_nonpositive = false;
  bool valid = true;              // false when |Z| is below the floor
  bool quality_warning = false;   // near-defective blocks contributed
  double S_fd = std::numeric_limits<double>::quiet_NaN();
  double Cv_fd = std::numeric_limits<double>::quiet_NaN();
};

/// Z = (Z0 + Zprime) * exp(log_scale), with log_scale = -beta Re(E0) so that neither
/// term overflows at low temperature.
struct DominantSplit {
  double Z0 = 0.0;
  double Zprime = 0.0;
  double log_scale = 0.0;
};

struct ZeroRecord {
  double T_zero = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int sign_below = 0;  // sign of Z just below lo
  int sign_above = 0;
};

struct ZeroScan {
  std::vector<ZeroRecord> zeros;
  double Tc = 0.0;  // largest zero, 0 when Z > 0 on the whole grid
  int doublings = 0;
  std::string warning;
};

struct Expectation {
  double value = 0.0;
  double imag_residue = 0.0;
  bool quality_warning = false;
};

/// Per-eigenvalue <L_n|O|R_n>/<L_n|R_n>, block by block.
using ObservableDiagonal = std::vector<std::vector<Complex>>;
using ObservableFamily = std::function<RealMatrix(const BlockKey&)>;

namespace thermo {

ObservableDiagonal observable_diagonal(const ModelSpectrum& spectrum, const ObservableFamily& op);

ObservableFamily gap_operator_family(const SystemSize& size, GapOperator mode);

/// Builds a spectrum from bare levels (each with multiplicity 1, N = 0, N_qb = 0).
ModelSpectrum spectrum_from_levels(std::span<const Complex> levels, const ModelParams& p = {});

}  // namespace thermo

/// Grand-canonical thermodynamics over a fixed spectrum. Read-only after construction,
/// so one engine may serve any number of concurrent temperature evaluations.
class ThermoEngine {
 public:
  explicit ThermoEngine(ModelSpectrum spectrum, ThermoOptions opts = {});

  const ModelSpectrum& spectrum() const { return spectrum_; }
  const ThermoOptions& options() const { return opts_; }

  SignedLog partition_function(double beta) const;
  DominantSplit dominant_split(double beta) const;
  ThermoPoint potentials(double T) const;
  Expectation expectation(const ObservableDiagonal& diag, double T) const;
  double pairing_gap(double T) const;

 private:
  struct Sums;
  Sums accumulate(double beta, const ObservableDiagonal* diag, bool z_only = false) const;
  ThermoPoint potentials_no_fd(double T) const;

  ModelSpectrum spectrum_;
  ThermoOptions opts_;
  ObservableDiagonal gap_diag_;
  double ground_re_ = 0.0;
};

namespace thermo {

SignedLog partition_function(const ModelSpectrum& spectrum, double beta);

DominantSplit dominant_split(const ModelSpectrum& spectrum, double beta);

/// Sign changes of Z on the grid, refined by bisection to relative 1e-8. The grid is
/// doubled until the number of zeros above Tc/2 is stable (at most max_doublings times).
ZeroScan find_zeros(const ThermoEngine& engine, std::span<const double> t_grid,
                    int max_doublings = 3);
ZeroScan find_zeros(const ModelParams& p, std::span<const double> t_grid, int max_doublings = 3);

ThermoPoint potentials(const ModelParams& p, double T, const ThermoOptions& opts = {});

Expectation thermal_expectation(const ModelSpectrum& spectrum, const ObservableFamily& op,
                                double T);

double pairing_gap(const ModelParams& p, double T, GapOperator mode = GapOperator::kCollective);

std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace thermo
}  // namespace ptspin
