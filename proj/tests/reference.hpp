// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

// Reference computations that bypass the block spectrum and thermo engine.

#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ptspin/algebra.hpp"
#include "ptspin/blocks.hpp"
#include "ptspin/model.hpp"

namespace ptspin::test {

inline double to_double(const BigInt& b) { return b.convert_to<double>(); }

// ln sum_i w_i exp(-beta e_i) for real levels.
inline double log_sum(const std::vector<std::pair<double, double>>& weighted, double beta) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& [w, e] : weighted) {
    lo = std::min(lo, e);
  }
  long double sum = 0.0L;
  for (const auto& [w, e] : weighted) {
    sum += static_cast<long double>(w) * std::exp(-static_cast<long double>(beta) * (e - lo));
  }
  return static_cast<double>(std::log(sum)) - beta * lo;
}

// Subsystem levels at g = 0, built directly from spin matrices.
inline std::vector<std::pair<double, double>> nv_levels(const ModelParams& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& b : blocks::enumerate_nv_blocks(p.size.omega)) {
    const auto s = algebra::spin_operators(b.spin);
    const RealMatrix hm = p.D * s.sz * s.sz + 0.5 * p.E * (s.splus * s.splus + s.sminus * s.sminus);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(hm, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      out.emplace_back(to_double(b.mult), es.eigenvalues()[i]);
    }
  }
  return out;
}

inline std::vector<std::pair<double, double>> qubit_levels(const ModelParams& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& q : blocks::enumerate_qubit_blocks(p.size.omega1, p.size.omega2)) {
    const auto a = algebra::spin_operators(q.s1);
    const auto b = algebra::spin_operators(q.s2);
    const RealMatrix ia = RealMatrix::Identity(a.sz.rows(), a.sz.rows());
    const RealMatrix ib = RealMatrix::Identity(b.sz.rows(), b.sz.rows());
    const RealMatrix sp = algebra::kron(a.splus, ib) + algebra::kron(ia, b.splus);
    const RealMatrix hm = p.eps1 * algebra::kron(a.sz, ib) + p.eps2 * algebra::kron(ia, b.sz) -
                          p.G * sp * sp.transpose();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(hm, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      out.emplace_back(to_double(q.mult), es.eigenvalues()[i]);
    }
  }
  return out;
}

struct Direct {
  double F, U, S, Cv;
};

// Hermitian path for alpha = 1: symmetric solver, plain ensemble sums.
inline Direct hermitian_potentials(const ModelParams& p, double T) {
  std::vector<std::pair<double, double>> levels;
  for (const auto& b : blocks::enumerate_blocks(p.size)) {
    const RealMatrix hm = model::build_block_hamiltonian(p, b);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(hm, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      levels.emplace_back(to_double(b.mult()), es.eigenvalues()[i]);
    }
  }
  const double beta = 1.0 / T;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& [w, e] : levels) {
    lo = std::min(lo, e);
  }
  // Weights normalized by their own sum; Cv from centered moments.
  std::vector<long double> weight;
  long double z = 0.0L, u = 0.0L;
  for (const auto& [w, e] : levels) {
    weight.push_back(w * std::exp(-static_cast<long double>(beta) * (e - lo)));
    z += weight.back();
    u += weight.back() * e;
  }
  u /= z;
  long double var = 0.0L;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const long double de = levels[i].second - u;
    var += weight[i] * de * de;
  }
  var /= z;
  const double U = static_cast<double>(u);
  const double F = -T * (static_cast<double>(std::log(z)) - beta * lo);
  return {F, U, (U - F) / T, static_cast<double>(var * beta * beta)};
}

}  // namespace ptspin::test
