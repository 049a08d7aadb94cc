// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ptspin/algebra.hpp"
#include "ptspin/errors.hpp"
#include "ptspin/model.hpp"
#include "ptspin/rescaling.hpp"
#include "support.hpp"

using namespace ptspin;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

BlockKey random_key(test::Gen& gen) {
  return {h(gen.integer(0, 8)), h(gen.integer(0, 2)), h(gen.integer(0, 2))};
}

}  // namespace

TEST_CASE("decoupled S = 1 block has the NV triplet levels") {
  ModelParams p;
  p.g = 0.0;
  const RealMatrix hm = model::build_block_hamiltonian(p, BlockKey{h(2), h(0), h(0)});
  REQUIRE(hm.rows() == 3);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(hm);
  const auto& ev = es.eigenvalues();
  CHECK(ev[0] == doctest::Approx(0.0));
  CHECK(ev[1] == doctest::Approx(p.D - p.E).epsilon(1e-14));
  CHECK(ev[2] == doctest::Approx(p.D + p.E).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(2.618).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(3.138).epsilon(1e-12));
}

TEST_CASE("alpha = 1 gives a symmetric matrix for every block") {
  test::Gen gen(7);
  for (int i = 0; i < 30; ++i) {
    ModelParams p;
    p.alpha = 1.0;
    p.g = gen.uniform(0.0, 5.0);
    const RealMatrix hm = model::build_block_hamiltonian(p, random_key(gen));
    CHECK((hm - hm.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("asymmetry is linear in |alpha - 1| g and vanishes only at alpha = 1") {
  test::Gen gen(8);
  const BlockKey key{h(4), h(1), h(2)};
  ModelParams ref;
  ref.alpha = 2.0;
  ref.g = 1.0;
  const RealMatrix h_ref = model::build_block_hamiltonian(ref, key);
  const double unit = (h_ref - h_ref.transpose()).cwiseAbs().maxCoeff();
  REQUIRE(unit > 0.0);
  for (int i = 0; i < 30; ++i) {
    ModelParams p;
    p.alpha = gen.uniform(0.0, 3.0);
    p.g = gen.uniform(0.1, 4.0);
    const RealMatrix hm = model::build_block_hamiltonian(p, key);
    const double asym = (hm - hm.transpose()).cwiseAbs().maxCoeff();
    CHECK(asym == doctest::Approx(unit * std::abs(p.alpha - 1.0) * p.g).epsilon(1e-12));
  }
}

TEST_CASE("total qubit Sz commutes with H under both couplings") {
  test::Gen gen(9);
  for (auto coupling : {QubitCoupling::kImbalance, QubitCoupling::kTotal}) {
    for (int i = 0; i < 20; ++i) {
      ModelParams p;
      p.coupling = coupling;
      p.alpha = gen.uniform(0.0, 2.0);
      p.g = gen.uniform(0.0, 4.0);
      const BlockKey key = random_key(gen);
      const auto ops = model::block_operators(key);
      const RealMatrix hm = model::build_block_hamiltonian(p, key);
      const RealMatrix sz = ops.sz1 + ops.sz2;
      CHECK(algebra::commutator(hm, sz).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("coupling operator readings") {
  const auto ops = model::block_operators(BlockKey{h(1), h(1), h(2)});
  CHECK(model::coupling_operator(ops, QubitCoupling::kImbalance).isApprox(ops.sz2 - ops.sz1));
  CHECK(model::coupling_operator(ops, QubitCoupling::kTotal).isApprox(ops.sz1 + ops.sz2));
}

TEST_CASE("sector labels match the qubit Sz diagonal") {
  const BlockKey key{h(3), h(2), h(1)};
  const auto ops = model::block_operators(key);
  const auto labels = model::qubit_sector_labels(key);
  REQUIRE(static_cast<Eigen::Index>(labels.size()) == ops.sz1.rows());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    CHECK(labels[i] == std::lround(2.0 * (ops.sz1(j, j) + ops.sz2(j, j))));
  }
}

TEST_CASE("invalid parameters are rejected") {
  ModelParams p;
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  ModelParams q;
  q.size.omega1 = 0;
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
}

TEST_CASE("rescaling constants") {
  const ModelParams p;
  CHECK(model::f_np(2) == doctest::Approx(0.57690).epsilon(1e-4));
  const auto r = model::rescale(p, 2, 8, 1.0);
  CHECK(r.Gr == doctest::Approx(1.734).epsilon(1e-3));
  const auto one = model::rescale(p, 2, 1, 1.0);
  CHECK(one.gr == p.g);
  CHECK(one.Er == p.E);
  CHECK(model::rescale(p, 2, 4, 1.0).gr == doctest::Approx(p.g / 2.0));
  CHECK(r.Tr == doctest::Approx(1.0 / p.D));
  CHECK_THROWS_AS(model::rescale(p, 0, 4, 1.0), InvalidArgument);
  const ModelParams m = model::rescaled_model(p, 3, 6);
  CHECK(m.size.omega.twice() == 6);
  CHECK(m.size.omega1 == 3);
  CHECK(m.G == doctest::Approx(model::kG0 * model::f_np(3)));
}

TEST_CASE("zero-temperature BCS gap") {
  const std::vector<double> single{0.0};
  CHECK(model::solve_gap_t0(1.3, single) == doctest::Approx(0.65).epsilon(1e-10));
  const std::vector<double> pair{-1.0, 1.0};
  CHECK(model::solve_gap_t0(1.73, pair) ==
        doctest::Approx(std::sqrt(1.73 * 1.73 - 1.0)).epsilon(1e-10));
  CHECK(model::solve_gap_t0(1e-3, pair) == 0.0);
  CHECK(model::solve_gap_t0(0.0, pair) == 0.0);
}

TEST_CASE("rescaling curve fit round-trips synthetic data") {
  test::Gen gen(12);
  for (int i = 0; i < 20; ++i) {
    const double a = gen.uniform(1.0, 4.0), b = gen.uniform(0.1, 2.0);
    std::vector<int> np{1, 2, 3, 4, 6};
    std::vector<double> f;
    for (int n : np) {
      f.push_back(a / (2.0 * n + b));
    }
    const RescalingFit fit = model::fit_rescaling_curve(np, f);
    CHECK(fit.a == doctest::Approx(a).epsilon(1e-6));
    CHECK(fit.b == doctest::Approx(b).epsilon(1e-6));
  }
}

TEST_CASE("single-point fit interpolates exactly") {
  const std::vector<int> np{3};
  const std::vector<double> f{0.4};
  const RescalingFit fit = model::fit_rescaling_curve(np, f);
  CHECK(fit.b == model::kRescaleB);
  CHECK(std::abs(fit.residuals[0]) <= 1e-15);
}

TEST_CASE("fitted f(2) reproduces the published constant") {
  const std::vector<int> np{2, 3, 4};
  const RescalingFit fit = model::fit_rescaling(np, model::kG0, 2.1);
  REQUIRE(fit.f.size() == 3);
  const double f2 = fit.a / (4.0 + fit.b);
  CHECK(std::abs(f2 / 0.57690 - 1.0) < 0.05);
}
