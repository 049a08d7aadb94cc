// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptspin/algebra.hpp"
#include "ptspin/blocks.hpp"
#include "ptspin/model.hpp"

namespace ptspin {

using Complex = std::complex<double>;

struct SpectralOptions {
  // Eigenvalue matching between H and H^T and degeneracy counting for g(0).
  double tie_tol = 1e-7;
  // |<L|R>| (unit vectors) below this marks the block near-defective.
  double defect_tol = 1e-6;
  // An eigenvalue is real iff |Im E| <= im_tol_rel * max(1, |E|).
  double im_tol_rel = 1e-9;
  bool compute_vectors = true;
};

/// Right/left eigenpairs of a real square matrix. Columns of right and left have unit
/// norm; biorth_norms[n] = left_n^T right_n (bilinear, so conjugate pairs stay paired).
struct EigenDecomposition {
  std::vector<Complex> eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;
  std::vector<Complex> biorth_norms;
  bool near_defective = false;
};

/// Multiplicity of one block that shares a Hamiltonian with others; n is its NV
/// particle number.
struct BlockWeight {
  int n = 0;
  BigInt exact;
  double mult = 0.0;
};

struct BlockSpectrum {
  BlockKey key;
  std::vector<BlockWeight> weights;
  std::vector<Complex> eigenvalues;  // sorted by (Re, Im)
  std::vector<double> pair_numbers;  // N_qb of each eigenvector
  ComplexMatrix right;
  ComplexMatrix left;
  std::vector<Complex> biorth_norms;
  bool near_defective = false;

  double total_mult() const;
};

struct ModelSpectrum {
  ModelParams params;
  std::vector<BlockSpectrum> blocks;  // one per distinct BlockKey, ordered by key

  const BlockSpectrum& find(const BlockKey& key) const;
  bool near_defective() const;
};

struct ConjugatePair {
  double eps = 0.0;
  double gamma = 0.0;  // > 0
};

struct Classification {
  std::vector<double> real_levels;
  std::vector<ConjugatePair> complex_pairs;
};

struct GroundStateInfo {
  Complex e0;
  bool is_complex = false;
  double gamma0 = 0.0;
  double degeneracy = 0.0;  // g(0), a conjugate pair counted once
};

enum class SweepParam { kAlpha, kCoupling };

struct Sweep {
  SweepParam param = SweepParam::kAlpha;
  double lo = 0.0;
  double hi = 1.0;
  int coarse_steps = 50;
};

struct EpLocation {
  SweepParam param = SweepParam::kAlpha;
  double value = 0.0;
  double lo = 0.0;  // bracket, hi - lo <= precision
  double hi = 0.0;
  BlockKey block;
  int level = 0;            // index of the Im > 0 member at the broken side
  double re_energy = 0.0;   // Re(E) of the coalescing pair
  bool broken_above = true;  // the pair exists for parameter values above the EP
};

struct EpTableRow {
  double g = 0.0;
  std::optional<double> alpha_below;
  std::optional<double> alpha_above;
};

struct EpTrend {
  double below_relative_spread = 0.0;  // (max - min)/mean over the upper half of the grid
  double above_r_squared = 0.0;        // linear fit alpha_above(g)
  double above_slope = 0.0;
  int below_count = 0;
  int above_count = 0;
};

namespace spectral {

std::string param_name(SweepParam p);

bool is_real(Complex e, double im_tol_rel);

EigenDecomposition diagonalize(const RealMatrix& h, const SpectralOptions& opts = {});

/// Diagonalizes each invariant sector (basis indices sharing a label) separately and
/// embeds the eigenvectors back into the full block. sector_of_level receives the label
/// of every eigenvalue.
EigenDecomposition diagonalize_sectored(const RealMatrix& h, std::span<const int> labels,
                                        const SpectralOptions& opts,
                                        std::vector<int>* sector_of_level = nullptr);

BlockSpectrum diagonalize_block(const ModelParams& p, const BlockKey& key,
                                const SpectralOptions& opts = {});

/// Groups enumerate_blocks(p.size) by BlockKey and diagonalizes each distinct key.
ModelSpectrum compute_spectrum(const ModelParams& p, const SpectralOptions& opts = {},
                               int workers = 1);

Classification classify(std::span<const Complex> eigenvalues, double im_tol_rel = 1e-9);
Classification classify(const BlockSpectrum& spec, double im_tol_rel = 1e-9);

GroundStateInfo ground_state_info(const ModelSpectrum& spectrum, double tie_tol = 1e-7,
                                  double im_tol_rel = 1e-9);

// Number of conjugate pairs (Im > 0 members) in a list of eigenvalues.
int complex_pair_count(std::span<const Complex> eigenvalues, double im_tol_rel);

double max_abs_imag(const ModelSpectrum& spectrum);

/// Scans the sweep on a coarse grid, tracking the number of conjugate pairs in every
/// block; each change is bisected on that block alone down to |bracket| <= precision.
std::vector<EpLocation> find_eps(const ModelParams& p, const Sweep& sweep, double precision,
                                 const SpectralOptions& opts = {});

/// EP nearest to alpha = 1 from below (searched in [alpha_lo, 1]) and from above
/// ([1, alpha_hi]) for every coupling in g_grid.
std::vector<EpTableRow> first_eps_about_unity(const ModelParams& p, std::span<const double> g_grid,
                                              double alpha_lo = 0.0, double alpha_hi = 4.0,
                                              int coarse_steps = 80, double precision = 1e-6,
                                              const SpectralOptions& opts = {});

EpTrend summarize_ep_trend(std::span<const EpTableRow> rows);

}  // namespace spectral
}  // namespace ptspin
