// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/rescaling.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace ptspin::model {

double decoupled_gap(const ModelParams& base, int np, double G, double T, GapOperator mode) {
  if (np < 1) {
    throw InvalidArgument("Np must be at least 1");
  }
  ModelParams p = base;
  p.g = 0.0;
  p.G = G;
  p.size.omega = HalfInt::from_twice(1);
  p.size.omega1 = np;
  p.size.omega2 = np;
  return thermo::pairing_gap(p, T, mode);
}

double coupling_for_gap(const ModelParams& base, int np, double target,
                        const RescalingOptions& opts) {
  if (!(target > 0.0)) {
    throw InvalidArgument("target gap must be positive");
  }
  auto gap = [&](double G) { return decoupled_gap(base, np, G, opts.t_low, opts.gap); };
  double lo = 0.0;
  double hi = target;
  int expansions = 0;
  while (gap(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 60) {
      throw SolverFailure("no coupling reaches the target gap for Np = " + std::to_string(np));
    }
  }
  while (hi - lo > opts.g_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RescalingFit fit_rescaling_curve(std::span<const int> np, std::span<const double> f,
                                 double single_point_b) {
  if (np.empty() || np.size() != f.size()) {
    throw InvalidArgument("fit needs matching, non-empty Np and f lists");
  }
  for (double v : f) {
    if (!(v > 0.0)) {
      throw InvalidArgument("f samples must be positive");
    }
  }
  RescalingFit fit;
  fit.np.assign(np.begin(), np.end());
  fit.f.assign(f.begin(), f.end());
  const auto n = static_cast<Eigen::Index>(np.size());

  if (n == 1) {
    fit.b = single_point_b;
    fit.a = f[0] * (2.0 * np[0] + fit.b);
  } else {
    // 1/f = (2/a) Np + b/a is linear in Np; this seeds Gauss-Newton on the f residuals.
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      A(i, 0) = np[i];
      A(i, 1) = 1.0;
      y(i) = 1.0 / f[i];
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    fit.a = 2.0 / c(0);
    fit.b = c(1) * fit.a;
    for (int it = 0; it < 50; ++it) {
      Eigen::MatrixXd J(n, 2);
      Eigen::VectorXd r(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double den = 2.0 * np[i] + fit.b;
        r(i) = f[i] - fit.a / den;
        J(i, 0) = 1.0 / den;
        J(i, 1) = -fit.a / (den * den);
      }
      const Eigen::Vector2d step = J.colPivHouseholderQr().solve(r);
      fit.a += step(0);
      fit.b += step(1);
      if (step.norm() < 1e-14 * (std::abs(fit.a) + std::abs(fit.b))) {
        break;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    fit.residuals.push_back(f[i] - fit.a / (2.0 * np[i] + fit.b));
  }
  return fit;
}

RescalingFit fit_rescaling(std::span<const int> np_list, double G0, double target,
                           const ModelParams& base, const RescalingOptions& opts) {
  if (np_list.empty()) {
    throw InvalidArgument("Np list is empty");
  }
  if (!(G0 > 0.0)) {
    throw InvalidArgument("G0 must be positive");
  }
  std::vector<double> G;
  std::vector<double> f;
  for (int np : np_list) {
    G.push_back(coupling_for_gap(base, np, target, opts));
    f.push_back(G.back() / G0);
  }
  RescalingFit fit = fit_rescaling_curve(np_list, f, opts.single_point_b);
  fit.G = std::move(G);
  return fit;
}

}  // namespace ptspin::model
