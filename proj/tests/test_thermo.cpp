// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ptspin/algebra.hpp"
#include "ptspin/blocks.hpp"
#include "ptspin/model.hpp"
#include "ptspin/spectral.hpp"
#include "ptspin/thermo.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace ptspin;
using namespace ptspin::test;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

ModelParams with(double alpha, double g) {
  ModelParams p;
  p.alpha = alpha;
  p.g = g;
  return p;
}

}  // namespace

TEST_CASE("infinite temperature counts every state") {
  const ModelSpectrum s = spectral::compute_spectrum(ModelParams{});
  const SignedLog z = thermo::partition_function(s, 1e-12);
  CHECK(z.sign == 1);
  CHECK(z.log_abs == doctest::Approx(24.0 * std::numbers::ln2).epsilon(1e-9));
  CHECK(std::exp(z.log_abs) == doctest::Approx(16777216.0).epsilon(1e-9));
}

TEST_CASE("single conjugate pair") {
  const double eps = -0.4, gamma = 0.5;
  const std::vector<Complex> levels{{eps, gamma}, {eps, -gamma}};
  const ModelSpectrum s = thermo::spectrum_from_levels(levels);
  for (double beta : {0.1, 1.0, 2.0, 5.0}) {
    const double expected = 2.0 * std::exp(-beta * eps) * std::cos(beta * gamma);
    CHECK(thermo::partition_function(s, beta).value() == doctest::Approx(expected).epsilon(1e-12));
  }
  const ThermoEngine engine(s);
  const auto grid = thermo::linspace(0.01, 2.0, 400);
  const ZeroScan scan = thermo::find_zeros(engine, grid);
  CHECK(scan.Tc == doctest::Approx(2.0 * gamma / std::numbers::pi).epsilon(1e-7));
  CHECK(scan.zeros.size() >= 2);
}

TEST_CASE("two-level toy potentials") {
  const std::vector<Complex> levels{{-1.0, 0.0}, {1.0, 0.0}};
  ThermoOptions opts;
  opts.finite_difference_checks = true;
  const ThermoEngine engine(thermo::spectrum_from_levels(levels), opts);
  for (double T : {0.2, 0.7, 1.0, 3.0}) {
    const double beta = 1.0 / T;
    const ThermoPoint pt = engine.potentials(T);
    CHECK(pt.U == doctest::Approx(-std::tanh(beta)).epsilon(1e-12));
    CHECK(pt.S ==
          doctest::Approx(std::log(2.0 * std::cosh(beta)) - beta * std::tanh(beta)).epsilon(1e-12));
    CHECK(pt.Cv == doctest::Approx(beta * beta / std::pow(std::cosh(beta), 2)).epsilon(1e-10));
    CHECK(rel_diff(pt.S, pt.S_fd) <= 1e-4);
  }
}

TEST_CASE("decoupled limit factorizes into NV and qubit partition functions") {
  ModelParams p = with(0.4, 0.0);
  const ModelSpectrum s = spectral::compute_spectrum(p);
  const auto nv = nv_levels(p);
  const auto qb = qubit_levels(p);
  for (double beta : thermo::logspace(0.01, 20.0, 20)) {
    const SignedLog z = thermo::partition_function(s, beta);
    REQUIRE(z.sign == 1);
    CHECK(std::abs(z.log_abs - (log_sum(nv, beta) + log_sum(qb, beta))) <= 1e-10);
  }
}

TEST_CASE("Hermitian limit matches the symmetric-solver path") {
  const ModelParams p = with(1.0, 1.73);
  const ThermoEngine engine(spectral::compute_spectrum(p));
  for (double T : {0.05, 0.3, 1.0, 3.75}) {
    const ThermoPoint pt = engine.potentials(T);
    const Direct d = hermitian_potentials(p, T);
    CHECK(rel_diff(pt.F, d.F) <= 1e-10);
    CHECK(rel_diff(pt.U, d.U) <= 1e-10);
    // S and Cv vanish as T -> 0; their error is measured against max(|x|, 1).
    CHECK(std::abs(pt.S - d.S) <= 1e-10 * std::max(std::abs(d.S), 1.0));
    CHECK(std::abs(pt.Cv - d.Cv) <= 1e-10 * std::max(std::abs(d.Cv), 1.0));
  }
}

TEST_CASE("thermal expectation values") {
  const ModelParams p = with(1.0, 1.73);
  const ModelSpectrum s = spectral::compute_spectrum(p);
  const ObservableFamily identity = [](const BlockKey& k) {
    return RealMatrix(RealMatrix::Identity(k.dim(), k.dim()));
  };
  CHECK(thermo::thermal_expectation(s, identity, 0.5).value == doctest::Approx(1.0).epsilon(1e-12));
  const ObservableFamily pair = [](const BlockKey& k) { return model::collective_pair_operator(k); };
  // Direct Hermitian average of the same operator.
  const double T = 0.8, beta = 1.0 / T;
  std::vector<std::pair<double, double>> levels;
  long double num = 0.0L, den = 0.0L;
  const double e0 = spectral::ground_state_info(s).e0.real();
  for (const auto& b : blocks::enumerate_blocks(p.size)) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(model::build_block_hamiltonian(p, b));
    const RealMatrix o = model::collective_pair_operator(b.key());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const long double w = to_double(b.mult()) * std::exp(-beta * (es.eigenvalues()[i] - e0));
      num += w * es.eigenvectors().col(i).dot(o * es.eigenvectors().col(i));
      den += w;
    }
  }
  const Expectation e = thermo::thermal_expectation(s, pair, T);
  CHECK(rel_diff(e.value, static_cast<double>(num / den)) <= 1e-10);
}

TEST_CASE("blockwise Z equals the merged multiset sum") {
  const ModelSpectrum s = spectral::compute_spectrum(with(0.36, 1.73));
  for (double beta : {0.1, 1.0, 4.0}) {
    const double e0 = spectral::ground_state_info(s).e0.real();
    long double sum = 0.0L;
    for (const auto& b : s.blocks) {
      for (const auto& e : b.eigenvalues) {
        const std::complex<long double> term =
            std::exp(std::complex<long double>(-beta * (e.real() - e0), -beta * e.imag()));
        sum += static_cast<long double>(b.total_mult()) * term.real();
      }
    }
    const SignedLog z = thermo::partition_function(s, beta);
    const double merged = static_cast<double>(std::log(std::abs(sum))) - beta * e0;
    CHECK(z.sign == (sum > 0 ? 1 : -1));
    CHECK(std::abs(z.log_abs - merged) <= 1e-12 * std::max(1.0, std::abs(merged)));
  }
}

TEST_CASE("Legendre and finite-difference consistency at random points") {
  test::Gen gen(31);
  ThermoOptions opts;
  opts.finite_difference_checks = true;
  int checked = 0;
  while (checked < 12) {
    const double alpha = gen.uniform(0.0, 1.2);
    const double T = gen.uniform(0.1, 3.75);
    const ThermoPoint pt = thermo::potentials(with(alpha, 1.73), T, opts);
    if (!pt.valid || pt.z_nonpositive) {
      continue;
    }
    CAPTURE(alpha);
    CAPTURE(T);
    CHECK(rel_diff(pt.F, pt.U - T * pt.S) <= 1e-6);
    CHECK(rel_diff(pt.S, pt.S_fd) <= 1e-4);
    CHECK(rel_diff(pt.Cv, pt.Cv_fd) <= 1e-4);
    ++checked;
  }
}

TEST_CASE("no zeros below the pairing coupling") {
  const auto grid = thermo::logspace(0.01, 3.75, 200);
  for (int i = 0; i <= 10; ++i) {
    CHECK(thermo::find_zeros(with(0.1 * i, 1.0), grid).Tc == 0.0);
  }
}

TEST_CASE("zeros inside the critical window") {
  const ModelParams p = with(0.36, 1.73);
  const ThermoEngine engine(spectral::compute_spectrum(p));
  const auto grid = thermo::logspace(0.01, 3.75, 200);
  const ZeroScan scan = thermo::find_zeros(engine, grid);
  REQUIRE(scan.Tc > 0.0);
  CHECK(scan.warning.empty());
  // Z changes sign repeatedly below Tc.
  CHECK(scan.zeros.size() >= 3);
  // Z0 + Z' changes sign across every refined bracket.
  for (const auto& z : scan.zeros) {
    const DominantSplit below = engine.dominant_split(1.0 / z.lo);
    const DominantSplit above = engine.dominant_split(1.0 / z.hi);
    REQUIRE(std::isfinite(below.Z0 + below.Zprime));
    CHECK((below.Z0 + below.Zprime) * (above.Z0 + above.Zprime) <= 0.0);
  }
  CHECK(engine.dominant_split(1.0 / (0.98 * scan.Tc)).Z0 < 0.0);

  const ZeroScan fine = thermo::find_zeros(engine, thermo::logspace(0.01, 3.75, 400));
  CHECK(fine.Tc == doctest::Approx(scan.Tc).epsilon(1e-7));
}

TEST_CASE("real ground state keeps the dominant term positive") {
  const ThermoEngine engine(spectral::compute_spectrum(with(0.5, 1.0)));
  for (double beta : {0.1, 1.0, 10.0, 50.0}) {
    CHECK(engine.dominant_split(beta).Z0 > 0.0);
  }
}

TEST_CASE("high-temperature entropy approaches the state count") {
  const ThermoEngine engine(spectral::compute_spectrum(ModelParams{}));
  CHECK(engine.potentials(1e5).S == doctest::Approx(24.0 * std::numbers::ln2).epsilon(1e-6));
}

TEST_CASE("pairing gap vanishes without pairing") {
  ModelParams p = with(1.0, 0.0);
  p.G = 0.0;
  for (double T : {0.05, 1.0}) {
    CHECK(thermo::pairing_gap(p, T) == doctest::Approx(0.0));
    CHECK(thermo::pairing_gap(p, T, GapOperator::kDiagonal) == doctest::Approx(0.0));
  }
}

TEST_CASE("grids") {
  const auto lin = thermo::linspace(0.0, 1.0, 5);
  CHECK(lin.back() == 1.0);
  CHECK(lin[1] == 0.25);
  const auto lg = thermo::logspace(0.01, 1.0, 3);
  CHECK(lg[1] == doctest::Approx(0.1));
  CHECK(thermo::linspace(2.0, 2.0, 1).size() == 1);
}
