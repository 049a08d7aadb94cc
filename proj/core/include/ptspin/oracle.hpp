// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "ptspin/model.hpp"
#include "ptspin/spectral.hpp"
#include "ptspin/thermo.hpp"

namespace ptspin {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Occupation-number basis over NV modes (2 levels x 2 Omega sublevels) followed by qubit
/// modes (2 Omega_i states per level). Bit p of a basis index is the occupation of mode p.
class FockSpace {
 public:
  static constexpr int kMaxModes = 16;

  explicit FockSpace(const SystemSize& size);

  const SystemSize& size() const { return size_; }
  int nv_modes() const { return nv_modes_; }
  int qb_modes() const { return qb_modes_; }
  int modes() const { return nv_modes_ + qb_modes_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << modes(); }

  /// NV mode for sublevel k and level 1 or 2.
  int nv_mode(int k, int level) const;
  /// Qubit mode for level 1 or 2, pair j in [0, Omega_i) and partner 0 (+m) or 1 (-m).
  int qb_mode(int level, int j, int partner) const;

  /// Jordan-Wigner annihilation operator for mode p.
  SparseMatrix annihilate(int p) const;
  SparseMatrix create(int p) const { return annihilate(p).transpose(); }
  SparseMatrix number(int p) const;
  SparseMatrix identity() const;

 private:
  SystemSize size_;
  int nv_modes_ = 0;
  int qb_modes_ = 0;
};

struct FockOperators {
  SparseMatrix nv_sz, nv_sp, nv_sm;  // collective NV quasispin
  SparseMatrix sz1, sp1, sm1;        // pair quasispin of qubit level 1
  SparseMatrix sz2, sp2, sm2;
  SparseMatrix n_nv;                 // NV particle number
  SparseMatrix n_qb;                 // qubit pair number (N1 + N2) / 2
};

namespace oracle {

FockOperators fock_operators(const FockSpace& space);

/// Many-body Hamiltonian; throws InvalidArgument beyond FockSpace::kMaxModes modes.
SparseMatrix fock_hamiltonian(const ModelParams& p);

/// Eigenvalues of the Fock Hamiltonian sorted by (Re, Im).
std::vector<Complex> fock_eigenvalues(const ModelParams& p);

/// Direct trace of exp(-beta (H - mu_S N - mu_qb N_qb)).
SignedLog fock_log_partition(const ModelParams& p, double beta);
double fock_partition(const ModelParams& p, double beta);

/// Tr(exp(-beta K) O) / Z for an operator on the Fock space.
double fock_expectation(const SparseMatrix& op, const ModelParams& p, double beta);

/// Block eigenvalues repeated by their integer multiplicities, sorted by (Re, Im).
std::vector<Complex> block_multiset(const ModelSpectrum& spectrum);

/// Largest distance in a greedy nearest-neighbour matching of two multisets; infinity
/// when the sizes differ.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

}  // namespace oracle
}  // namespace ptspin
