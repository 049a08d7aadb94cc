// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/algebra.hpp"

#include <cmath>
#include <complex>

namespace ptspin::algebra {

SpinOperators spin_operators(HalfInt s) {
  if (s.twice() < 0) {
    throw InvalidArgument("spin must be non-negative, got " + s.str());
  }
  const int dim = s.multiplet();
  const double sv = s.value();

  SpinOperators ops;
  ops.sz = RealMatrix::Zero(dim, dim);
  ops.splus = RealMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = sv - i;
    ops.sz(i, i) = m;
    if (i > 0) {
      // <s, m+1 | S+ | s, m>, row i-1 holds m+1.
      ops.splus(i - 1, i) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
    }
  }
  ops.sminus = ops.splus.transpose();
  ops.sx = 0.5 * (ops.splus + ops.sminus);
  const std::complex<double> minus_half_i(0.0, -0.5);
  ops.sy = minus_half_i * (ops.splus - ops.sminus).cast<std::complex<double>>();
  return ops;
}

SpinOperators spin_operators(double s) {
  const HalfInt h = HalfInt::from_double(s);
  if (h.twice() < 0) {
    throw InvalidArgument("spin must be non-negative");
  }
  return spin_operators(h);
}

namespace {

template <typename M>
M kron_impl(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) { return kron_impl(a, b); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kron_impl(a, b); }

RealMatrix embed3(const RealMatrix& a, const RealMatrix& b, const RealMatrix& c) {
  return kron(kron(a, b), c);
}

}  // namespace ptspin::algebra
