// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "doctest.h"
#include "ptspin/model.hpp"
#include "ptspin/spectral.hpp"
#include "ptspin/thermo.hpp"
#include "support.hpp"

using namespace ptspin;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

ModelParams with(double alpha, double g) {
  ModelParams p;
  p.alpha = alpha;
  p.g = g;
  return p;
}

double block_max_imag(const BlockSpectrum& b) {
  double m = 0.0;
  for (const auto& e : b.eigenvalues) {
    m = std::max(m, std::abs(e.imag()));
  }
  return m;
}

}  // namespace

TEST_CASE("rotation generator has imaginary eigenvalues") {
  RealMatrix m(2, 2);
  m << 0.0, 1.7, -1.7, 0.0;
  const auto d = spectral::diagonalize(m);
  REQUIRE(d.eigenvalues.size() == 2);
  CHECK(d.eigenvalues[0].real() == doctest::Approx(0.0));
  CHECK(std::abs(d.eigenvalues[0].imag()) == doctest::Approx(1.7));
  CHECK(d.eigenvalues[0].imag() == doctest::Approx(-d.eigenvalues[1].imag()));
}

TEST_CASE("alpha = 1 spectrum is real") {
  for (double g : {0.5, 1.73, 4.0}) {
    const ModelSpectrum s = spectral::compute_spectrum(with(1.0, g));
    CHECK(spectral::max_abs_imag(s) <= 1e-9);
  }
}

TEST_CASE("classify") {
  const std::vector<Complex> real{1.0, 2.0, -3.0};
  CHECK(spectral::classify(real).complex_pairs.empty());
  const std::vector<Complex> mixed{{1.0, 0.0}, {2.0, 0.3}, {2.0, -0.3}};
  const auto c = spectral::classify(mixed);
  REQUIRE(c.complex_pairs.size() == 1);
  CHECK(c.complex_pairs[0].eps == doctest::Approx(2.0));
  CHECK(c.complex_pairs[0].gamma == doctest::Approx(0.3));
  REQUIRE(c.real_levels.size() == 1);
  CHECK(spectral::complex_pair_count(mixed, 1e-9) == 1);
}

TEST_CASE("classification is stable under tolerance halving away from EPs") {
  const ModelSpectrum s = spectral::compute_spectrum(with(0.36, 1.73));
  for (const auto& b : s.blocks) {
    const auto a = spectral::classify(b, 1e-9);
    const auto c = spectral::classify(b, 5e-10);
    CHECK(a.complex_pairs.size() == c.complex_pairs.size());
    CHECK(a.real_levels.size() == c.real_levels.size());
  }
}

TEST_CASE("ground state information") {
  CHECK_FALSE(
      spectral::ground_state_info(spectral::compute_spectrum(with(0.5, 1.0))).is_complex);
  const auto gs = spectral::ground_state_info(spectral::compute_spectrum(with(0.2, 3.46)));
  CHECK(gs.is_complex);
  CHECK(gs.gamma0 > 0.0);

  const std::vector<Complex> one{{-2.5, 0.0}};
  const auto toy = spectral::ground_state_info(thermo::spectrum_from_levels(one));
  CHECK(toy.e0 == Complex(-2.5, 0.0));
  CHECK(toy.degeneracy == 1.0);
}

TEST_CASE("conjugation closure and biorthogonal completeness in every block") {
  test::Gen gen(21);
  for (int trial = 0; trial < 4; ++trial) {
    const ModelParams p = with(gen.uniform(0.05, 2.0), gen.uniform(0.5, 4.0));
    CAPTURE(p.alpha);
    CAPTURE(p.g);
    const ModelSpectrum s = spectral::compute_spectrum(p);
    for (const auto& b : s.blocks) {
      std::vector<Complex> conj;
      for (const auto& e : b.eigenvalues) {
        conj.push_back(std::conj(e));
      }
      std::vector<bool> used(conj.size(), false);
      double worst = 0.0;
      for (const auto& e : b.eigenvalues) {
        std::size_t best = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < conj.size(); ++j) {
          if (!used[j] && std::abs(conj[j] - e) < dist) {
            dist = std::abs(conj[j] - e);
            best = j;
          }
        }
        used[best] = true;
        worst = std::max(worst, dist);
      }
      CHECK(worst <= 1e-10);
      if (b.near_defective) {
        continue;
      }
      const Eigen::Index n = b.right.rows();
      ComplexMatrix sum = ComplexMatrix::Zero(n, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        sum += b.right.col(k) * b.left.col(k).transpose() / b.biorth_norms[k];
      }
      CHECK((sum - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("sector splitting reproduces the full-block eigenvalues") {
  const ModelParams p = with(0.36, 1.73);
  const BlockKey key{h(4), h(2), h(2)};
  const RealMatrix hm = model::build_block_hamiltonian(p, key);
  const auto labels = model::qubit_sector_labels(key);
  const auto full = spectral::diagonalize(hm);
  const auto split = spectral::diagonalize_sectored(hm, labels, {});
  REQUIRE(full.eigenvalues.size() == split.eigenvalues.size());
  for (std::size_t i = 0; i < full.eigenvalues.size(); ++i) {
    CHECK(std::abs(full.eigenvalues[i] - split.eigenvalues[i]) <= 1e-9);
  }
}

TEST_CASE("structured input at alpha = 0 still diagonalizes") {
  const ModelParams p = with(0.0, 4.0);
  CHECK_NOTHROW(spectral::diagonalize_block(p, BlockKey{h(1), h(1), h(2)}));
  CHECK_NOTHROW(spectral::compute_spectrum(p));
}

TEST_CASE("EPs on both sides of alpha = 1 at the reference coupling") {
  const ModelParams p = with(1.0, 1.73);
  const double precision = 1e-6;
  const auto eps = spectral::find_eps(p, {SweepParam::kAlpha, 0.0, 2.0, 80}, precision);
  bool below = false, above = false;
  for (const auto& ep : eps) {
    CHECK(std::abs(ep.value - 1.0) > precision);
    CHECK(ep.hi - ep.lo <= precision);
    below = below || ep.value < 1.0;
    above = above || ep.value > 1.0;
  }
  CHECK(below);
  CHECK(above);
}

TEST_CASE("EP brackets separate real and broken sides of the block") {
  const ModelParams p = with(1.0, 1.73);
  const SpectralOptions opts;
  const auto eps = spectral::find_eps(p, {SweepParam::kAlpha, 0.2, 0.6, 40}, 1e-7);
  REQUIRE(!eps.empty());
  for (const auto& ep : eps) {
    const auto lo = spectral::diagonalize_block(p.with_alpha(ep.lo), ep.block, opts);
    const auto hi = spectral::diagonalize_block(p.with_alpha(ep.hi), ep.block, opts);
    const int n_lo = spectral::complex_pair_count(lo.eigenvalues, opts.im_tol_rel);
    const int n_hi = spectral::complex_pair_count(hi.eigenvalues, opts.im_tol_rel);
    CHECK(n_lo != n_hi);
    CHECK(ep.broken_above == (n_hi > n_lo));
  }
}

TEST_CASE("EP positions do not depend on the coarse grid") {
  const ModelParams p = with(1.0, 1.73);
  const double precision = 1e-7;
  const auto a = spectral::find_eps(p, {SweepParam::kAlpha, 0.2, 0.6, 40}, precision);
  const auto b = spectral::find_eps(p, {SweepParam::kAlpha, 0.2, 0.6, 53}, precision);
  int matched = 0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x.block == y.block && std::abs(x.value - y.value) <= 2 * precision) {
        ++matched;
        break;
      }
    }
  }
  CHECK(matched >= 1);
  const auto again = spectral::find_eps(p, {SweepParam::kAlpha, 0.2, 0.6, 40}, precision);
  REQUIRE(again.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(again[i].value == a[i].value);
  }
}

TEST_CASE("weak coupling leaves a window around alpha = 1 free of EPs") {
  const ModelParams p = with(1.0, 1e-2);
  CHECK(spectral::find_eps(p, {SweepParam::kAlpha, 0.8, 1.2, 40}, 1e-6).empty());
}

TEST_CASE("EP trend summary on synthetic rows") {
  std::vector<EpTableRow> rows;
  for (int i = 0; i < 10; ++i) {
    const double g = 0.5 + 0.5 * i;
    rows.push_back({g, 0.8, 1.0 + 0.1 * g});
  }
  const EpTrend t = spectral::summarize_ep_trend(rows);
  CHECK(t.below_relative_spread == doctest::Approx(0.0));
  CHECK(t.above_r_squared == doctest::Approx(1.0));
  CHECK(t.above_slope == doctest::Approx(0.1));
}
