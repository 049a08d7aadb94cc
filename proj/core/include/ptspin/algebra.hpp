// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "ptspin/half_int.hpp"

namespace ptspin {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace algebra {

/// Spin-s matrices in the basis |s,m>, m = s, s-1, ..., -s (row/column 0 is m = s).
/// Only Sy is complex; everything assembled downstream uses the real ones.
struct SpinOperators {
  RealMatrix sz;
  RealMatrix splus;
  RealMatrix sminus;
  RealMatrix sx;
  ComplexMatrix sy;
};

SpinOperators spin_operators(HalfInt s);
// Throws InvalidArgument unless 2s is a non-negative integer.
SpinOperators spin_operators(double s);

RealMatrix kron(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// a (x) b (x) c on the space (qubit level 1) (x) (qubit level 2) (x) (NV quasispin).
RealMatrix embed3(const RealMatrix& a, const RealMatrix& b, const RealMatrix& c);

template <typename Derived>
auto commutator(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  return (a * b - b * a).eval();
}

}  // namespace algebra
}  // namespace ptspin
