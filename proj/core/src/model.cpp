// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/model.hpp"

#include <cmath>
#include <string>

namespace ptspin {

void ModelParams::validate() const {
  const double all[] = {D, E, G, g, alpha, eps1, eps2, mu_s, mu_qb};
  for (double v : all) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("model parameters must be finite");
    }
  }
  if (D < 0.0 || G < 0.0 || alpha < 0.0) {
    throw InvalidArgument("D, G and alpha must be non-negative");
  }
  size.validate();
}

namespace model {

BlockOperators block_operators(const BlockKey& key) {
  const auto q1 = algebra::spin_operators(key.s1);
  const auto q2 = algebra::spin_operators(key.s2);
  const auto nv = algebra::spin_operators(key.nv_spin);
  const RealMatrix i1 = RealMatrix::Identity(key.s1.multiplet(), key.s1.multiplet());
  const RealMatrix i2 = RealMatrix::Identity(key.s2.multiplet(), key.s2.multiplet());
  const RealMatrix inv = RealMatrix::Identity(key.nv_spin.multiplet(), key.nv_spin.multiplet());

  BlockOperators ops;
  ops.identity = RealMatrix::Identity(key.dim(), key.dim());
  ops.sz1 = algebra::embed3(q1.sz, i2, inv);
  ops.sp1 = algebra::embed3(q1.splus, i2, inv);
  ops.sm1 = algebra::embed3(q1.sminus, i2, inv);
  ops.sz2 = algebra::embed3(i1, q2.sz, inv);
  ops.sp2 = algebra::embed3(i1, q2.splus, inv);
  ops.sm2 = algebra::embed3(i1, q2.sminus, inv);
  ops.sz_nv = algebra::embed3(i1, i2, nv.sz);
  ops.sp_nv = algebra::embed3(i1, i2, nv.splus);
  ops.sm_nv = algebra::embed3(i1, i2, nv.sminus);
  return ops;
}

RealMatrix coupling_operator(const BlockOperators& ops, QubitCoupling coupling) {
  return coupling == QubitCoupling::kTotal ? RealMatrix(ops.sz1 + ops.sz2)
                                           : RealMatrix(ops.sz2 - ops.sz1);
}

RealMatrix build_block_hamiltonian(const ModelParams& p, const BlockKey& key) {
  const auto ops = block_operators(key);
  const RealMatrix sp = ops.sp1 + ops.sp2;
  const RealMatrix sm = ops.sm1 + ops.sm2;
  const RealMatrix qubit_sz = coupling_operator(ops, p.coupling);

  RealMatrix h = p.eps1 * ops.sz1 + p.eps2 * ops.sz2;
  h.noalias() -= p.G * (sp * sm);
  h.noalias() += p.D * (ops.sz_nv * ops.sz_nv);
  h.noalias() += (0.5 * p.E) * (ops.sp_nv * ops.sp_nv + ops.sm_nv * ops.sm_nv);
  const RealMatrix nv_drive = p.alpha * ops.sp_nv + ops.sm_nv;
  h.noalias() += p.g * (qubit_sz * nv_drive);
  if (h.rows() != key.dim() || h.cols() != key.dim()) {
    throw InternalError("block Hamiltonian has the wrong dimension");
  }
  return h;
}

RealMatrix build_block_hamiltonian(const ModelParams& p, const BlockLabel& block) {
  return build_block_hamiltonian(p, block.key());
}

std::vector<int> qubit_sector_labels(const BlockKey& key) {
  const int d1 = key.s1.multiplet();
  const int d2 = key.s2.multiplet();
  const int dn = key.nv_spin.multiplet();
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(key.dim()));
  for (int i1 = 0; i1 < d1; ++i1) {
    for (int i2 = 0; i2 < d2; ++i2) {
      // 2 m = 2 s - 2 i
      const int twice_m = (key.s1.twice() - 2 * i1) + (key.s2.twice() - 2 * i2);
      for (int in = 0; in < dn; ++in) {
        labels.push_back(twice_m);
      }
    }
  }
  return labels;
}

RealMatrix pair_number_operator(const SystemSize& size, const BlockKey& key) {
  const auto ops = block_operators(key);
  return ops.sz1 + ops.sz2 + 0.5 * (size.omega1 + size.omega2) * ops.identity;
}

RealMatrix collective_pair_operator(const BlockKey& key) {
  const auto ops = block_operators(key);
  return (ops.sp1 + ops.sp2) * (ops.sm1 + ops.sm2);
}

double f_np(int np) { return kRescaleA / (2.0 * np + kRescaleB); }

RescaledParams rescale(const ModelParams& p, int np, int ns, double T, double delta0) {
  if (np < 1 || ns < 1) {
    throw InvalidArgument("rescale requires Np >= 1 and Ns >= 1");
  }
  RescaledParams r;
  r.Delta0 = delta0 > 0.0 ? delta0 : p.D;
  if (!(r.Delta0 > 0.0)) {
    throw InvalidArgument("Delta0 must be positive");
  }
  r.Gr = kG0 * f_np(np);
  r.gr = p.g / std::sqrt(static_cast<double>(ns));
  r.Er = p.E / ns;
  r.Tr = T / r.Delta0;
  return r;
}

ModelParams rescaled_model(const ModelParams& p, int np, int ns) {
  const RescaledParams r = rescale(p, np, ns, 1.0);
  ModelParams out = p;
  out.G = r.Gr;
  out.g = r.gr;
  out.E = r.Er;
  out.size.omega = HalfInt::from_twice(ns);
  out.size.omega1 = np;
  out.size.omega2 = np;
  return out;
}

double solve_gap_t0(double G, std::span<const double> levels) {
  if (levels.empty()) {
    throw InvalidArgument("gap equation needs at least one level");
  }
  if (G < 0.0) {
    throw InvalidArgument("pairing constant must be non-negative");
  }
  if (G == 0.0) {
    return 0.0;
  }
  auto residual = [&](double delta) {
    double sum = 0.0;
    for (double e : levels) {
      sum += 0.5 / std::hypot(delta, e);
    }
    return G * sum - 1.0;
  };

  bool has_zero_level = false;
  for (double e : levels) {
    has_zero_level = has_zero_level || e == 0.0;
  }
  if (!has_zero_level && residual(0.0) <= 0.0) {
    return 0.0;
  }
  // At Delta = G n / 2 every term is <= 1/(2 Delta), so the residual is <= 0.
  double lo = 0.0;
  double hi = 0.5 * G * static_cast<double>(levels.size());
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace model
}  // namespace ptspin
