// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <vector>

#include "ptspin/half_int.hpp"

namespace ptspin {

using BigInt = boost::multiprecision::cpp_int;

/// Sizes of the three subsystems. The NV ensemble lives on two levels with 2*omega
/// sublevels each (4*omega modes); qubit level i has 2*omega_i states grouped in
/// omega_i time-reversed pairs.
struct SystemSize {
  HalfInt omega = HalfInt::from_int(4);
  int omega1 = 2;
  int omega2 = 2;

  void validate() const;
  // log2 of the full Fock-space dimension, 4*omega + 2*(omega1 + omega2).
  int total_modes() const { return 2 * omega.twice() + 2 * (omega1 + omega2); }
  BigInt total_dimension() const;
};

// One irreducible NV sector: N particles, 2*tau singly occupied sublevels, quasispin
// S = tau - k, appearing mult times.
struct NvBlockLabel {
  int n = 0;
  HalfInt tau;
  int k = 0;
  HalfInt spin;
  BigInt mult;
};

// Qubit quasispins (s1, s2) with multiplicity d(omega1, s1) * d(omega2, s2).
struct QubitBlockLabel {
  HalfInt s1;
  HalfInt s2;
  BigInt mult;
};

// Identifies the Hamiltonian matrix of a block: it depends on (S, s1, s2) only, so many
// blocks share one spectrum.
struct BlockKey {
  HalfInt nv_spin;
  HalfInt s1;
  HalfInt s2;

  int dim() const { return s1.multiplet() * s2.multiplet() * nv_spin.multiplet(); }
  auto operator<=>(const BlockKey&) const = default;
};

struct BlockLabel {
  NvBlockLabel nv;
  QubitBlockLabel qb;

  int dim() const { return key().dim(); }
  BigInt mult() const { return nv.mult * qb.mult; }
  BlockKey key() const { return {nv.spin, qb.s1, qb.s2}; }
};

namespace blocks {

BigInt factorial(int n);

/// Multiplicity of quasispin tau - k among the 2^(2 tau) states of 2 tau spins-1/2.
BigInt d_s(HalfInt tau, int k);

/// D_S(N, tau, k): number of sublevel distributions times d_s, with
/// nu1 = N/2 - tau doubly occupied and nu2 = 2 Omega - tau - N/2 empty sublevels.
BigInt nv_multiplicity(HalfInt omega, int n, HalfInt tau, int k);

/// Multiplicity of quasispin s among 2 tau_qb pair-spins-1/2.
BigInt g_qb(HalfInt tau_qb, HalfInt s);

/// d(Omega_i, s): multiplicity of quasispin s on a level with omega_i pairs.
BigInt qubit_level_multiplicity(int omega_i, HalfInt s);

std::vector<NvBlockLabel> enumerate_nv_blocks(HalfInt omega);
std::vector<QubitBlockLabel> enumerate_qubit_blocks(int omega1, int omega2);

/// Every admissible (N, tau, k, s1, s2), lexicographically ordered.
std::vector<BlockLabel> enumerate_blocks(const SystemSize& size);

/// Sum over blocks of mult * dim; equals size.total_dimension() when complete.
BigInt completeness_sum(const std::vector<BlockLabel>& blocks);

}  // namespace blocks
}  // namespace ptspin
