// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "ptspin/algebra.hpp"
#include "ptspin/blocks.hpp"

namespace ptspin {

/// Which qubit z operator multiplies the NV drive in the interaction term.
enum class QubitCoupling {
  kImbalance,  // Sz2 - Sz1: the level imbalance that eps multiplies when eps2 = -eps1
  kTotal,      // Sz1 + Sz2: total pair quasispin
};

/// Hamiltonian constants (GHz, k_B = 1) and subsystem sizes.
struct ModelParams {
  double D = 2.878;    // zero-field splitting
  double E = 0.26;     // strain / Lipkin constant
  double G = 1.73;     // pairing constant
  double g = 1.73;     // qubit-ensemble coupling
  double alpha = 1.0;  // interaction asymmetry
  double eps1 = -1.0;
  double eps2 = 1.0;
  double mu_s = 0.0;
  double mu_qb = 0.0;
  QubitCoupling coupling = QubitCoupling::kImbalance;
  SystemSize size;

  void validate() const;

  ModelParams with_alpha(double a) const {
    ModelParams p = *this;
    p.alpha = a;
    return p;
  }
  ModelParams with_g(double coupling) const {
    ModelParams p = *this;
    p.g = coupling;
    return p;
  }
};

/// Parameters after the dimension-agnostic rescaling for N_p pairs and N_s NVs.
struct RescaledParams {
  double Gr = 0.0;
  double gr = 0.0;
  double Er = 0.0;
  double Tr = 0.0;
  double Delta0 = 0.0;
};

namespace model {

// f(N_p) = a / (2 N_p + b), G_r = G0 f(N_p).
inline constexpr double kRescaleA = 2.7289;
inline constexpr double kRescaleB = 0.73029;
inline constexpr double kG0 = 3.006;

/// Single-factor operators of a block embedded in s1 (x) s2 (x) S.
struct BlockOperators {
  RealMatrix identity;
  RealMatrix sz1, sp1, sm1;
  RealMatrix sz2, sp2, sm2;
  RealMatrix sz_nv, sp_nv, sm_nv;
};

BlockOperators block_operators(const BlockKey& key);

/// The qubit z operator of the interaction term.
RealMatrix coupling_operator(const BlockOperators& ops, QubitCoupling coupling);

/// eps1 Sz1 + eps2 Sz2 - G (S+1 + S+2)(S-1 + S-2) + D Sz^2 + (E/2)(S+^2 + S-^2)
///   + g sz (alpha S+ + S-), with sz chosen by p.coupling.
RealMatrix build_block_hamiltonian(const ModelParams& p, const BlockKey& key);
RealMatrix build_block_hamiltonian(const ModelParams& p, const BlockLabel& block);

/// 2 * (m1 + m2) for every basis vector of the block. Sz1 + Sz2 commutes with H, so
/// these labels split the block into invariant sectors.
std::vector<int> qubit_sector_labels(const BlockKey& key);

/// Pair number N_qb = Sz1 + Sz2 + (Omega1 + Omega2)/2.
RealMatrix pair_number_operator(const SystemSize& size, const BlockKey& key);

/// (S+1 + S+2)(S-1 + S-2).
RealMatrix collective_pair_operator(const BlockKey& key);

double f_np(int np);

/// Rescaled constants for np pairs, ns NVs at temperature T. delta0 <= 0 selects D.
RescaledParams rescale(const ModelParams& p, int np, int ns, double T, double delta0 = 0.0);

/// A copy of p with G -> G0 f(np), g -> g/sqrt(ns), E -> E/ns, Omega = ns/2,
/// Omega1 = Omega2 = np.
ModelParams rescaled_model(const ModelParams& p, int np, int ns);

/// Zero-temperature BCS gap: solves 1 = G sum_k 1/(2 sqrt(Delta^2 + eps_k^2)).
/// Returns 0 when G is below the critical coupling.
double solve_gap_t0(double G, std::span<const double> levels);

}  // namespace model
}  // namespace ptspin
