// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace ptspin {

namespace {

// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    m = std::max(m, x);
  }
  if (!std::isfinite(m)) {
    return m;
  }
  double s = 0.0;
  for (double x : xs) {
    s += std::exp(x - m);
  }
  return m + std::log(s);
}

}  // namespace

struct ThermoEngine::Sums {
  double shift = 0.0;  // every sum below is scaled by exp(-shift)
  double z = 0.0;
  double h = 0.0;
  double k = 0.0;
  double hk = 0.0;
  double ns = 0.0;
  double nqb = 0.0;
  Complex o{0.0, 0.0};
  bool defective = false;
};

namespace thermo {

ObservableDiagonal observable_diagonal(const ModelSpectrum& spectrum, const ObservableFamily& op) {
  ObservableDiagonal out;
  out.reserve(spectrum.blocks.size());
  for (const auto& b : spectrum.blocks) {
    std::vector<Complex> diag(b.eigenvalues.size(), Complex(0.0));
    if (b.right.cols() == static_cast<Eigen::Index>(b.eigenvalues.size()) && !b.eigenvalues.empty()) {
      const ComplexMatrix o = op(b.key).cast<Complex>();
      const ComplexMatrix o_right = o * b.right;
      for (std::size_t n = 0; n < diag.size(); ++n) {
        const auto col = static_cast<Eigen::Index>(n);
        const Complex num = b.left.col(col).transpose() * o_right.col(col);
        diag[n] = num / b.biorth_norms[n];
      }
    }
    out.push_back(std::move(diag));
  }
  return out;
}

ObservableFamily gap_operator_family(const SystemSize& size, GapOperator mode) {
  if (mode == GapOperator::kCollective) {
    return [](const BlockKey& key) { return model::collective_pair_operator(key); };
  }
  return [size](const BlockKey& key) { return model::pair_number_operator(size, key); };
}

ModelSpectrum spectrum_from_levels(std::span<const Complex> levels, const ModelParams& p) {
  ModelSpectrum out;
  out.params = p;
  BlockSpectrum b;
  b.weights.push_back({0, BigInt(1), 1.0});
  b.eigenvalues.assign(levels.begin(), levels.end());
  std::sort(b.eigenvalues.begin(), b.eigenvalues.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  b.pair_numbers.assign(levels.size(), 0.0);
  out.blocks.push_back(std::move(b));
  return out;
}

}  // namespace thermo

ThermoEngine::ThermoEngine(ModelSpectrum spectrum, ThermoOptions opts)
    : spectrum_(std::move(spectrum)), opts_(opts) {
  const bool have_vectors = std::all_of(
      spectrum_.blocks.begin(), spectrum_.blocks.end(), [](const BlockSpectrum& b) {
        return b.right.cols() == static_cast<Eigen::Index>(b.eigenvalues.size());
      });
  if (have_vectors) {
    gap_diag_ = thermo::observable_diagonal(
        spectrum_, thermo::gap_operator_family(spectrum_.params.size, opts_.gap));
  }
  bool first = true;
  for (const auto& b : spectrum_.blocks) {
    for (Complex e : b.eigenvalues) {
      if (first || e.real() < ground_re_) {
        ground_re_ = e.real();
        first = false;
      }
    }
  }
}

ThermoEngine::Sums ThermoEngine::accumulate(double beta, const ObservableDiagonal* diag,
                                            bool z_only) const {
  const double mu_s = spectrum_.params.mu_s;
  const double mu_qb = spectrum_.params.mu_qb;

  // Per block: log of the mu_S-weighted multiplicity and the mean NV particle number.
  std::vector<double> log_w(spectrum_.blocks.size());
  std::vector<double> mean_n(spectrum_.blocks.size());
  std::vector<double> terms;
  for (std::size_t bi = 0; bi < spectrum_.blocks.size(); ++bi) {
    const auto& b = spectrum_.blocks[bi];
    terms.clear();
    for (const auto& w : b.weights) {
      terms.push_back(std::log(w.mult) + beta * mu_s * w.n);
    }
    log_w[bi] = log_sum_exp(terms);
    double nbar = 0.0;
    for (std::size_t j = 0; j < b.weights.size(); ++j) {
      nbar += b.weights[j].n * std::exp(terms[j] - log_w[bi]);
    }
    mean_n[bi] = nbar;
  }

  Sums s;
  s.shift = -std::numeric_limits<double>::infinity();
  for (std::size_t bi = 0; bi < spectrum_.blocks.size(); ++bi) {
    const auto& b = spectrum_.blocks[bi];
    for (std::size_t n = 0; n < b.eigenvalues.size(); ++n) {
      const double re_k = b.eigenvalues[n].real() - mu_qb * b.pair_numbers[n];
      s.shift = std::max(s.shift, log_w[bi] - beta * re_k);
    }
  }

  CompensatedSum z, h, k, hk, ns, nqb, o_re, o_im;
  for (std::size_t bi = 0; bi < spectrum_.blocks.size(); ++bi) {
    const auto& b = spectrum_.blocks[bi];
    s.defective = s.defective || b.near_defective;
    for (std::size_t n = 0; n < b.eigenvalues.size(); ++n) {
      const Complex e = b.eigenvalues[n];
      const double nq = b.pair_numbers[n];
      const Complex k_shifted = e - mu_qb * nq;
      const double mag = std::exp(log_w[bi] - beta * k_shifted.real() - s.shift);
      const double phase = beta * k_shifted.imag();
      const Complex c = mag * Complex(std::cos(phase), -std::sin(phase));
      const Complex kk = k_shifted - mu_s * mean_n[bi];
      z.add(c.real());
      if (z_only) {
        continue;
      }
      h.add((e * c).real());
      k.add((kk * c).real());
      hk.add((e * kk * c).real());
      ns.add(mean_n[bi] * c.real());
      nqb.add(nq * c.real());
      if (diag != nullptr) {
        const Complex oc = (*diag)[bi][n] * c;
        o_re.add(oc.real());
        o_im.add(oc.imag());
      }
    }
  }
  s.z = z.value();
  s.h = h.value();
  s.k = k.value();
  s.hk = hk.value();
  s.ns = ns.value();
  s.nqb = nqb.value();
  s.o = Complex(o_re.value(), o_im.value());
  return s;
}

SignedLog ThermoEngine::partition_function(double beta) const {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  const Sums s = accumulate(beta, nullptr, true);
  SignedLog out;
  if (s.z == 0.0) {
    return out;
  }
  out.sign = s.z > 0.0 ? 1 : -1;
  out.log_abs = std::log(std::abs(s.z)) + s.shift;
  return out;
}

DominantSplit ThermoEngine::dominant_split(double beta) const {
  const GroundStateInfo gs = spectral::ground_state_info(spectrum_);
  const SignedLog z = partition_function(beta);
  DominantSplit out;
  out.log_scale = -beta * gs.e0.real();
  out.Z0 = gs.is_complex ? 2.0 * gs.degeneracy * std::cos(beta * gs.gamma0) : gs.degeneracy;
  const double scaled_z = z.sign == 0 ? 0.0 : z.sign * std::exp(z.log_abs - out.log_scale);
  out.Zprime = scaled_z - out.Z0;
  return out;
}

ThermoPoint ThermoEngine::potentials_no_fd(double T) const {
  if (!(T > 0.0)) {
    throw InvalidArgument("temperature must be positive");
  }
  const double beta = 1.0 / T;
  const Sums s = accumulate(beta, gap_diag_.empty() ? nullptr : &gap_diag_);
  ThermoPoint pt;
  pt.T = T;
  pt.quality_warning = s.defective;
  // The largest scaled term is at most the largest block multiplicity ratio, i.e. O(1).
  if (s.z == 0.0 || std::abs(s.z) < opts_.z_floor) {
    pt.valid = false;
    pt.z_nonpositive = true;
    pt.Z = {};
    return pt;
  }
  pt.Z.sign = s.z > 0.0 ? 1 : -1;
  pt.Z.log_abs = std::log(std::abs(s.z)) + s.shift;
  pt.z_nonpositive = pt.Z.sign < 0;

  const double mu_s = spectrum_.params.mu_s;
  const double mu_qb = spectrum_.params.mu_qb;
  const double mean_h = s.h / s.z;
  const double mean_k = s.k / s.z;
  const double mean_hk = s.hk / s.z;
  pt.U = mean_h;
  pt.F = -T * pt.Z.log_abs + mu_s * (s.ns / s.z) + mu_qb * (s.nqb / s.z);
  pt.S = (pt.U - pt.F) / T;
  pt.Cv = beta * beta * (mean_hk - mean_h * mean_k);
  if (!gap_diag_.empty()) {
    const double pair_corr = (s.o / s.z).real();
    if (pair_corr < -1e-8 && !pt.z_nonpositive) {
      pt.quality_warning = true;
    }
    pt.Delta = 0.5 * spectrum_.params.G * std::sqrt(std::max(0.0, pair_corr));
  }
  return pt;
}

ThermoPoint ThermoEngine::potentials(double T) const {
  ThermoPoint pt = potentials_no_fd(T);
  if (opts_.finite_difference_checks && pt.valid) {
    const double h = opts_.fd_rel_step * T;
    const ThermoPoint lo = potentials_no_fd(T - h);
    const ThermoPoint hi = potentials_no_fd(T + h);
    if (lo.valid && hi.valid) {
      // Grand potential -T ln|Z|; equals F when the chemical potentials vanish.
      const double phi_lo = -lo.T * lo.Z.log_abs;
      const double phi_hi = -hi.T * hi.Z.log_abs;
      pt.S_fd = -(phi_hi - phi_lo) / (2.0 * h);
      pt.Cv_fd = (hi.U - lo.U) / (2.0 * h);
    }
  }
  return pt;
}

Expectation ThermoEngine::expectation(const ObservableDiagonal& diag, double T) const {
  if (!(T > 0.0)) {
    throw InvalidArgument("temperature must be positive");
  }
  if (diag.size() != spectrum_.blocks.size()) {
    throw InvalidArgument("observable does not match the spectrum's blocks");
  }
  const Sums s = accumulate(1.0 / T, &diag);
  if (s.z == 0.0 || std::abs(s.z) < opts_.z_floor) {
    throw NumericalQuality("partition function vanishes at T = " + std::to_string(T) +
                           "; expectation values are undefined there");
  }
  Expectation out;
  const Complex v = s.o / s.z;
  out.value = v.real();
  out.imag_residue = v.imag();
  out.quality_warning = s.defective;
  return out;
}

double ThermoEngine::pairing_gap(double T) const {
  if (gap_diag_.empty()) {
    throw InvalidArgument("pairing gap needs a spectrum with eigenvectors");
  }
  const Expectation e = expectation(gap_diag_, T);
  if (e.value < -1e-8) {
    throw NumericalQuality("negative pair correlation " + std::to_string(e.value) +
                           " at T = " + std::to_string(T));
  }
  return 0.5 * spectrum_.params.G * std::sqrt(std::max(0.0, e.value));
}

namespace thermo {

SignedLog partition_function(const ModelSpectrum& spectrum, double beta) {
  return ThermoEngine(spectrum).partition_function(beta);
}

DominantSplit dominant_split(const ModelSpectrum& spectrum, double beta) {
  return ThermoEngine(spectrum).dominant_split(beta);
}

namespace {

int z_sign(const ThermoEngine& engine, double T) {
  return engine.partition_function(1.0 / T).sign;
}

std::vector<ZeroRecord> scan_grid(const ThermoEngine& engine, std::span<const double> grid) {
  std::vector<ZeroRecord> zeros;
  std::vector<int> signs;
  signs.reserve(grid.size());
  for (double T : grid) {
    signs.push_back(z_sign(engine, T));
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (signs[i] == 0) {
      zeros.push_back({grid[i], grid[i], grid[i], i > 0 ? signs[i - 1] : 0, signs[i + 1]});
      continue;
    }
    if (signs[i + 1] == 0 || signs[i] == signs[i + 1]) {
      continue;
    }
    double lo = grid[i];
    double hi = grid[i + 1];
    while (hi - lo > 1e-8 * hi) {
      const double mid = 0.5 * (lo + hi);
      const int sm = z_sign(engine, mid);
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == signs[i]) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    zeros.push_back({0.5 * (lo + hi), lo, hi, signs[i], signs[i + 1]});
  }
  if (!grid.empty() && signs.back() == 0) {
    zeros.push_back({grid.back(), grid.back(), grid.back(),
                     signs.size() > 1 ? signs[signs.size() - 2] : 0, 0});
  }
  return zeros;
}

// Zeros at or above half the largest one. Below a complex ground state zeros pile up as
// T -> 0, so only the upper part of the set can be expected to converge.
std::size_t upper_zero_count(const std::vector<ZeroRecord>& zeros) {
  double tc = 0.0;
  for (const auto& z : zeros) {
    tc = std::max(tc, z.T_zero);
  }
  return static_cast<std::size_t>(std::count_if(
      zeros.begin(), zeros.end(), [tc](const ZeroRecord& z) { return z.T_zero >= 0.5 * tc; }));
}

std::vector<double> refine(std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(2 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(grid[i]);
    if (i + 1 < grid.size()) {
      out.push_back(std::sqrt(grid[i] * grid[i + 1]));
    }
  }
  return out;
}

}  // namespace

ZeroScan find_zeros(const ThermoEngine& engine, std::span<const double> t_grid, int max_doublings) {
  if (t_grid.empty()) {
    throw InvalidArgument("temperature grid is empty");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw InvalidArgument("temperature grid must be positive and increasing");
    }
  }
  ZeroScan scan;
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  scan.zeros = scan_grid(engine, grid);
  for (int d = 0; d < max_doublings; ++d) {
    grid = refine(grid);
    auto finer = scan_grid(engine, grid);
    ++scan.doublings;
    const bool stable = upper_zero_count(finer) == upper_zero_count(scan.zeros);
    scan.zeros = std::move(finer);
    if (stable) {
      break;
    }
    if (d + 1 == max_doublings) {
      scan.warning = "zero count still changing after " + std::to_string(max_doublings) +
                     " grid doublings; refine the temperature grid below T = " +
                     std::to_string(scan.zeros.empty() ? 0.0 : scan.zeros.back().T_zero);
    }
  }
  for (const auto& z : scan.zeros) {
    scan.Tc = std::max(scan.Tc, z.T_zero);
  }
  return scan;
}

ZeroScan find_zeros(const ModelParams& p, std::span<const double> t_grid, int max_doublings) {
  SpectralOptions opts;
  opts.compute_vectors = false;
  return find_zeros(ThermoEngine(spectral::compute_spectrum(p, opts)), t_grid, max_doublings);
}

ThermoPoint potentials(const ModelParams& p, double T, const ThermoOptions& opts) {
  return ThermoEngine(spectral::compute_spectrum(p), opts).potentials(T);
}

Expectation thermal_expectation(const ModelSpectrum& spectrum, const ObservableFamily& op,
                                double T) {
  const ThermoEngine engine(spectrum);
  return engine.expectation(observable_diagonal(spectrum, op), T);
}

double pairing_gap(const ModelParams& p, double T, GapOperator mode) {
  ThermoOptions opts;
  opts.gap = mode;
  return ThermoEngine(spectral::compute_spectrum(p), opts).pairing_gap(T);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) {
    throw InvalidArgument("grid needs at least one point");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  if (n > 1) {
    out.back() = hi;
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0)) {
    throw InvalidArgument("log grid bounds must be positive");
  }
  auto out = linspace(std::log(lo), std::log(hi), n);
  for (double& x : out) {
    x = std::exp(x);
  }
  return out;
}

}  // namespace thermo
}  // namespace ptspin
