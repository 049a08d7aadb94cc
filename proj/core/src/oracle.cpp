// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace ptspin {

FockSpace::FockSpace(const SystemSize& size) : size_(size) {
  size_.validate();
  nv_modes_ = 2 * size_.omega.twice();
  qb_modes_ = 2 * (size_.omega1 + size_.omega2);
  if (modes() > kMaxModes) {
    throw InvalidArgument("Fock space with " + std::to_string(modes()) +
                          " modes exceeds the 2^16 dimension guard");
  }
}

int FockSpace::nv_mode(int k, int level) const {
  if (k < 0 || k >= size_.omega.twice() || (level != 1 && level != 2)) {
    throw InvalidArgument("NV mode out of range");
  }
  return 2 * k + (level - 1);
}

int FockSpace::qb_mode(int level, int j, int partner) const {
  const int pairs = level == 1 ? size_.omega1 : size_.omega2;
  if ((level != 1 && level != 2) || j < 0 || j >= pairs || (partner != 0 && partner != 1)) {
    throw InvalidArgument("qubit mode out of range");
  }
  const int offset = nv_modes_ + (level == 1 ? 0 : 2 * size_.omega1);
  return offset + 2 * j + partner;
}

SparseMatrix FockSpace::annihilate(int p) const {
  if (p < 0 || p >= modes()) {
    throw InvalidArgument("mode index out of range");
  }
  const Eigen::Index dim = dimension();
  const auto bit = std::uint32_t{1} << p;
  const auto below = bit - 1;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(dim / 2));
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto state = static_cast<std::uint32_t>(b);
    if ((state & bit) == 0) {
      continue;
    }
    const double sign = (std::popcount(state & below) % 2 == 0) ? 1.0 : -1.0;
    entries.emplace_back(static_cast<Eigen::Index>(state ^ bit), b, sign);
  }
  SparseMatrix c(dim, dim);
  c.setFromTriplets(entries.begin(), entries.end());
  return c;
}

SparseMatrix FockSpace::number(int p) const {
  const SparseMatrix c = annihilate(p);
  return SparseMatrix(c.transpose() * c);
}

SparseMatrix FockSpace::identity() const {
  SparseMatrix id(dimension(), dimension());
  id.setIdentity();
  return id;
}

namespace oracle {

namespace {

SparseMatrix zero(const FockSpace& space) { return SparseMatrix(space.dimension(), space.dimension()); }

Eigen::MatrixXcd to_dense_complex(const SparseMatrix& m) {
  return Eigen::MatrixXd(m).cast<Complex>();
}

SparseMatrix grand_operator(const ModelParams& p, const FockSpace& space,
                            const FockOperators& ops) {
  SparseMatrix k = fock_hamiltonian(p);
  k -= p.mu_s * ops.n_nv;
  k -= p.mu_qb * ops.n_qb;
  return k;
}

struct FockEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

FockEigen diagonalize_dense(const SparseMatrix& k, bool vectors) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(k), vectors);
  if (es.info() != Eigen::Success) {
    throw SolverFailure("Fock-space diagonalization did not converge");
  }
  FockEigen out;
  out.values = es.eigenvalues();
  if (vectors) {
    out.vectors = es.eigenvectors();
  }
  return out;
}

}  // namespace

FockOperators fock_operators(const FockSpace& space) {
  FockOperators ops;
  const SystemSize& size = space.size();
  ops.nv_sz = zero(space);
  ops.nv_sp = zero(space);
  ops.n_nv = zero(space);
  for (int k = 0; k < size.omega.twice(); ++k) {
    const int lo = space.nv_mode(k, 1);
    const int hi = space.nv_mode(k, 2);
    ops.nv_sp += space.create(hi) * space.annihilate(lo);
    ops.nv_sz += 0.5 * (space.number(hi) - space.number(lo));
    ops.n_nv += space.number(hi) + space.number(lo);
  }
  ops.nv_sm = ops.nv_sp.transpose();

  const auto level = [&](int l, int pairs, SparseMatrix& sz, SparseMatrix& sp, SparseMatrix& sm) {
    sz = zero(space);
    sp = zero(space);
    SparseMatrix n = zero(space);
    for (int j = 0; j < pairs; ++j) {
      const int a = space.qb_mode(l, j, 0);
      const int b = space.qb_mode(l, j, 1);
      sp += space.create(a) * space.create(b);
      n += space.number(a) + space.number(b);
    }
    sm = sp.transpose();
    sz = 0.5 * (n - static_cast<double>(pairs) * space.identity());
    return n;
  };
  const SparseMatrix n1 = level(1, size.omega1, ops.sz1, ops.sp1, ops.sm1);
  const SparseMatrix n2 = level(2, size.omega2, ops.sz2, ops.sp2, ops.sm2);
  ops.n_qb = 0.5 * (n1 + n2);
  return ops;
}

SparseMatrix fock_hamiltonian(const ModelParams& p) {
  p.validate();
  const FockSpace space(p.size);
  const FockOperators o = fock_operators(space);
  const SparseMatrix sp = o.sp1 + o.sp2;
  const SparseMatrix sm = o.sm1 + o.sm2;
  const SparseMatrix qubit_sz =
      p.coupling == QubitCoupling::kTotal ? SparseMatrix(o.sz1 + o.sz2) : SparseMatrix(o.sz2 - o.sz1);
  SparseMatrix h = p.eps1 * o.sz1 + p.eps2 * o.sz2;
  h -= p.G * SparseMatrix(sp * sm);
  h += p.D * SparseMatrix(o.nv_sz * o.nv_sz);
  h += (0.5 * p.E) * SparseMatrix(o.nv_sp * o.nv_sp + o.nv_sm * o.nv_sm);
  const SparseMatrix drive = p.alpha * o.nv_sp + o.nv_sm;
  h += p.g * SparseMatrix(qubit_sz * drive);
  h.prune(0.0);
  return h;
}

std::vector<Complex> fock_eigenvalues(const ModelParams& p) {
  const FockEigen e = diagonalize_dense(fock_hamiltonian(p), false);
  std::vector<Complex> out(e.values.data(), e.values.data() + e.values.size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

SignedLog fock_log_partition(const ModelParams& p, double beta) {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  const FockSpace space(p.size);
  const FockEigen e = diagonalize_dense(grand_operator(p, space, fock_operators(space)), false);
  double shift = -std::numeric_limits<double>::infinity();
  for (const Complex& l : e.values) {
    shift = std::max(shift, -beta * l.real());
  }
  Complex sum{0.0, 0.0};
  for (const Complex& l : e.values) {
    sum += std::exp(-beta * l - shift);
  }
  SignedLog out;
  if (sum.real() != 0.0) {
    out.sign = sum.real() > 0.0 ? 1 : -1;
    out.log_abs = std::log(std::abs(sum.real())) + shift;
  }
  return out;
}

double fock_partition(const ModelParams& p, double beta) { return fock_log_partition(p, beta).value(); }

double fock_expectation(const SparseMatrix& op, const ModelParams& p, double beta) {
  if (!(beta > 0.0)) {
    throw InvalidArgument("beta must be positive");
  }
  const FockSpace space(p.size);
  if (op.rows() != space.dimension() || op.cols() != space.dimension()) {
    throw InvalidArgument("operator does not act on this Fock space");
  }
  const FockEigen e = diagonalize_dense(grand_operator(p, space, fock_operators(space)), true);
  const Eigen::MatrixXcd vinv = e.vectors.inverse();
  const Eigen::MatrixXcd transformed = vinv * to_dense_complex(op) * e.vectors;
  double shift = -std::numeric_limits<double>::infinity();
  for (const Complex& l : e.values) {
    shift = std::max(shift, -beta * l.real());
  }
  Complex z{0.0, 0.0};
  Complex num{0.0, 0.0};
  for (Eigen::Index n = 0; n < e.values.size(); ++n) {
    const Complex w = std::exp(-beta * e.values(n) - shift);
    z += w;
    num += w * transformed(n, n);
  }
  if (z.real() == 0.0) {
    throw NumericalQuality("Fock partition function vanishes");
  }
  return (num / z.real()).real();
}

std::vector<Complex> block_multiset(const ModelSpectrum& spectrum) {
  std::vector<Complex> out;
  for (const auto& b : spectrum.blocks) {
    BigInt total = 0;
    for (const auto& w : b.weights) {
      total += w.exact;
    }
    if (total > BigInt(1) << 24) {
      throw InvalidArgument("multiset too large to expand");
    }
    const auto count = total.convert_to<long long>();
    for (const Complex& e : b.eigenvalues) {
      out.insert(out.end(), static_cast<std::size_t>(count), e);
    }
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(x - b[j]) < best_d) {
        best_d = std::abs(x - b[j]);
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace oracle
}  // namespace ptspin
