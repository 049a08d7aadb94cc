// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <set>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ptspin/blocks.hpp"
#include "ptspin/errors.hpp"
#include "ptspin/oracle.hpp"

using namespace ptspin;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) {
    return 0;
  }
  return blocks::factorial(n) / (blocks::factorial(k) * blocks::factorial(n - k));
}

// Number of spin-(n/2 - k) irreps among n spins-1/2.
BigInt irreps(int n, int k) { return binomial(n, k) - binomial(n, k - 1); }

BigInt pow2(int n) { return BigInt(1) << n; }

using Label = std::tuple<int, int, int, int>;  // N, 4S(S+1), 4s1(s1+1), 4s2(s2+1)

// Joint eigen-decomposition of N and the three Casimirs on the Fock space.
std::map<Label, BigInt> fock_state_counts(const SystemSize& size) {
  const FockSpace space(size);
  const FockOperators ops = oracle::fock_operators(space);
  auto casimir = [](const SparseMatrix& sz, const SparseMatrix& sp, const SparseMatrix& sm) {
    return Eigen::MatrixXd(sm * sp + sz * sz + sz);
  };
  const Eigen::MatrixXd c_nv = casimir(ops.nv_sz, ops.nv_sp, ops.nv_sm);
  const Eigen::MatrixXd c_1 = casimir(ops.sz1, ops.sp1, ops.sm1);
  const Eigen::MatrixXd c_2 = casimir(ops.sz2, ops.sp2, ops.sm2);
  const Eigen::MatrixXd n_nv(ops.n_nv);
  // Codes stay below 1000, so one weighted sum separates all three labels.
  const Eigen::MatrixXd combined = 4.0 * c_nv + 4000.0 * c_1 + 4.0e6 * c_2;

  std::map<Label, BigInt> counts;
  const Eigen::Index dim = space.dimension();
  for (int n = 0; n <= space.nv_modes(); ++n) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::lround(n_nv(i, i)) == n) {
        idx.push_back(i);
      }
    }
    if (idx.empty()) {
      continue;
    }
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        sub(a, b) = combined(idx[a], idx[b]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const long code = std::lround(es.eigenvalues()[i]);
      counts[{n, static_cast<int>(code % 1000), static_cast<int>((code / 1000) % 1000),
              static_cast<int>(code / 1000000)}] += 1;
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("d_s closed values") {
  for (int t = 0; t <= 12; ++t) {
    CHECK(blocks::d_s(h(t), 0) == 1);
  }
  CHECK(blocks::d_s(h(2), 1) == 1);
}

TEST_CASE("d_s matches the irrep count of 2 tau spins-1/2 and is complete") {
  for (int t = 0; t <= 12; ++t) {
    BigInt states = 0;
    for (int k = 0; 2 * k <= t; ++k) {
      CAPTURE(t);
      CAPTURE(k);
      CHECK(blocks::d_s(h(t), k) == irreps(t, k));
      states += blocks::d_s(h(t), k) * (t - 2 * k + 1);
    }
    CHECK(states == pow2(t));
  }
}

TEST_CASE("nv multiplicity examples") {
  CHECK(blocks::nv_multiplicity(h(1), 1, h(1), 0) == 1);
  CHECK(blocks::nv_multiplicity(h(1), 0, h(0), 0) == 1);
  CHECK_THROWS_AS(blocks::nv_multiplicity(h(1), 1, h(2), 0), InvalidArgument);
}

TEST_CASE("nv multiplicities fill 2^(4 Omega)") {
  for (int twice : {1, 2, 3, 4, 8}) {
    BigInt states = 0;
    for (const auto& b : blocks::enumerate_nv_blocks(h(twice))) {
      CHECK(b.mult > 0);
      states += b.mult * b.spin.multiplet();
    }
    CHECK(states == pow2(2 * twice));
  }
}

TEST_CASE("g_qb values") {
  for (int t = 0; t <= 8; ++t) {
    CHECK(blocks::g_qb(h(t), h(t)) == 1);
  }
  CHECK(blocks::g_qb(h(2), h(0)) == 1);
  CHECK(blocks::g_qb(h(4), h(0)) == 2);
}

TEST_CASE("qubit level multiplicities") {
  CHECK(blocks::qubit_level_multiplicity(1, h(1)) == 1);
  CHECK(blocks::qubit_level_multiplicity(1, h(0)) == 2);
  CHECK(blocks::qubit_level_multiplicity(2, h(0)) == 5);
  CHECK(blocks::qubit_level_multiplicity(2, h(1)) == 4);
  CHECK(blocks::qubit_level_multiplicity(2, h(2)) == 1);
  CHECK_THROWS_AS(blocks::qubit_level_multiplicity(2, h(3)), InvalidArgument);
  for (int omega = 1; omega <= 8; ++omega) {
    BigInt states = 0;
    for (int t = 0; t <= omega; ++t) {
      states += blocks::qubit_level_multiplicity(omega, h(t)) * (t + 1);
    }
    CHECK(states == pow2(2 * omega));
  }
}

TEST_CASE("completeness of the full block list") {
  for (const auto& size : {SystemSize{h(1), 1, 1}, SystemSize{h(2), 1, 1}, SystemSize{h(4), 2, 2},
                           SystemSize{h(8), 2, 2}, SystemSize{h(20), 3, 1}}) {
    const auto list = blocks::enumerate_blocks(size);
    CHECK(blocks::completeness_sum(list) == size.total_dimension());
    CHECK(size.total_dimension() == pow2(size.total_modes()));
  }
  CHECK(blocks::completeness_sum(blocks::enumerate_blocks({h(1), 1, 1})) == 64);
  CHECK(SystemSize{}.total_dimension() == 16777216);
}

TEST_CASE("block list is deterministic, duplicate-free and positive") {
  const SystemSize size{h(4), 2, 2};
  const auto a = blocks::enumerate_blocks(size);
  const auto b = blocks::enumerate_blocks(size);
  REQUIRE(a.size() == b.size());
  std::set<std::tuple<int, int, int, int, int>> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mult() == b[i].mult());
    CHECK(a[i].key() == b[i].key());
    CHECK(a[i].mult() > 0);
    seen.insert({a[i].nv.n, a[i].nv.tau.twice(), a[i].nv.k, a[i].qb.s1.twice(),
                 a[i].qb.s2.twice()});
  }
  CHECK(seen.size() == a.size());
}

TEST_CASE("big-integer multiplicities at Omega = 10") {
  const SystemSize size{h(20), 2, 2};
  CHECK(blocks::completeness_sum(blocks::enumerate_blocks(size)) == pow2(48));
}

TEST_CASE("block labels match a Casimir decomposition of the Fock space") {
  for (const auto& size : {SystemSize{h(1), 1, 1}, SystemSize{h(2), 1, 1}, SystemSize{h(1), 2, 1}}) {
    std::map<Label, BigInt> expected;
    for (const auto& b : blocks::enumerate_blocks(size)) {
      auto code = [](HalfInt s) { return s.twice() * (s.twice() + 2); };
      expected[{b.nv.n, code(b.nv.spin), code(b.qb.s1), code(b.qb.s2)}] += b.mult() * b.dim();
    }
    CHECK(fock_state_counts(size) == expected);
  }
}
