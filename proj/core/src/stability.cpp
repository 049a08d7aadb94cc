// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptspin/parallel.hpp"

namespace ptspin {

void Isotherm::validate() const {
  if (alpha.size() != F.size() || alpha.size() != valid.size()) {
    throw InvalidArgument("isotherm arrays differ in length");
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i > 0 && !(alpha[i] > alpha[i - 1])) {
      throw InvalidArgument("isotherm alpha grid must be strictly increasing");
    }
    if (valid[i] && !std::isfinite(F[i])) {
      throw InvalidArgument("isotherm F must be finite at valid points");
    }
  }
}

namespace stability {

namespace {

// Vertex of the parabola through three points; falls back to the middle point when the
// points are collinear or the vertex escapes the bracket.
StationaryPoint parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double c = (d12 - d01) / (x2 - x0);
  if (c == 0.0) {
    return {x1, y1};
  }
  const double b = d01 - c * (x0 + x1);
  const double xv = -b / (2.0 * c);
  if (!(xv >= x0 && xv <= x2)) {
    return {x1, y1};
  }
  const double yv = y1 + (xv - x1) * (d01 + c * (xv - x0));
  return {xv, yv};
}

struct Run {
  std::size_t begin;
  std::size_t end;  // exclusive
};

std::vector<Run> valid_runs(const Isotherm& iso) {
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < iso.alpha.size()) {
    if (!iso.valid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < iso.alpha.size() && iso.valid[j]) {
      ++j;
    }
    runs.push_back({i, j});
    i = j;
  }
  return runs;
}

struct RunPoints {
  std::vector<StationaryPoint> minima;
  std::vector<StationaryPoint> inflections;
};

RunPoints stationary_points(const Isotherm& iso, const Run& run) {
  RunPoints out;
  const std::size_t n = run.end - run.begin;
  if (n < 3) {
    return out;
  }
  const auto a = [&](std::size_t i) { return iso.alpha[run.begin + i]; };
  const auto f = [&](std::size_t i) { return iso.F[run.begin + i]; };
  std::vector<double> mid(n - 1);
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mid[i] = 0.5 * (a(i) + a(i + 1));
    d[i] = (f(i + 1) - f(i)) / (a(i + 1) - a(i));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] < 0.0 && d[i] >= 0.0 && !(d[i] == 0.0 && i + 1 < d.size() && d[i + 1] <= 0.0)) {
      out.minima.push_back(parabola_vertex(a(i - 1), f(i - 1), a(i), f(i), a(i + 1), f(i + 1)));
    }
  }
  // An inflection is an extremum of F'; refine it on the midpoint derivatives.
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    const double s_lo = d[i] - d[i - 1];
    const double s_hi = d[i + 1] - d[i];
    if ((s_lo < 0.0 && s_hi >= 0.0) || (s_lo > 0.0 && s_hi <= 0.0)) {
      if (s_hi == 0.0 && i + 2 < d.size() && (d[i + 2] - d[i + 1]) * s_lo > 0.0) {
        continue;
      }
      const StationaryPoint v =
          parabola_vertex(mid[i - 1], d[i - 1], mid[i], d[i], mid[i + 1], d[i + 1]);
      // F at the inflection by linear interpolation on the grid.
      std::size_t k = 0;
      while (k + 2 < n && a(k + 1) < v.alpha) {
        ++k;
      }
      const double t = (v.alpha - a(k)) / (a(k + 1) - a(k));
      out.inflections.push_back({v.alpha, f(k) + t * (f(k + 1) - f(k))});
    }
  }
  return out;
}

std::size_t minima_count(const Isotherm& iso) {
  std::size_t count = 0;
  for (const Run& run : valid_runs(iso)) {
    count += stationary_points(iso, run).minima.size();
  }
  return count;
}

Isotherm every_other(const Isotherm& iso) {
  Isotherm out;
  out.T = iso.T;
  for (std::size_t i = 0; i < iso.alpha.size(); i += 2) {
    out.alpha.push_back(iso.alpha[i]);
    out.F.push_back(iso.F[i]);
    out.valid.push_back(iso.valid[i]);
  }
  return out;
}

double interpolate_F(const Isotherm& iso, double alpha) {
  const auto it = std::lower_bound(iso.alpha.begin(), iso.alpha.end(), alpha);
  if (it == iso.alpha.end()) {
    return iso.F.back();
  }
  const auto hi = static_cast<std::size_t>(it - iso.alpha.begin());
  if (hi == 0 || *it == alpha) {
    return iso.F[hi];
  }
  const std::size_t lo = hi - 1;
  const double t = (alpha - iso.alpha[lo]) / (iso.alpha[hi] - iso.alpha[lo]);
  return iso.F[lo] + t * (iso.F[hi] - iso.F[lo]);
}

double valid_F(const ThermoPoint& pt, double T, double alpha) {
  if (!pt.valid || pt.z_nonpositive) {
    throw NumericalQuality("Z <= 0 at T = " + std::to_string(T) +
                           ", alpha = " + std::to_string(alpha));
  }
  return pt.F;
}

double step_for(double x, double rel_step) { return rel_step * std::max(std::abs(x), 1.0); }

double central(const FreeEnergyFn& F, double x, double h) {
  return (F(x + h) - F(x - h)) / (2.0 * h);
}

}  // namespace

const char* interval_name(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::kBinodal:
      return "binodal";
    case IntervalKind::kMetastable:
      return "metastable";
    case IntervalKind::kSpinodal:
      return "spinodal";
    case IntervalKind::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

Isotherm isotherm(const StateSurface& surface, double T, std::span<const double> alpha_grid) {
  const double temps[] = {T};
  return isotherms(surface, temps, alpha_grid).front();
}

std::vector<Isotherm> isotherms(const StateSurface& surface, std::span<const double> temperatures,
                                std::span<const double> alpha_grid, int workers) {
  if (temperatures.empty() || alpha_grid.empty()) {
    throw InvalidArgument("isotherms need non-empty temperature and alpha grids");
  }
  // Column per alpha so each spectrum is built once.
  const auto columns = parallel_map<std::vector<ThermoPoint>>(
      alpha_grid.size(), workers, [&](std::size_t j) {
        const auto engine = surface.engine(alpha_grid[j]);
        std::vector<ThermoPoint> col;
        col.reserve(temperatures.size());
        for (double T : temperatures) {
          col.push_back(engine->potentials(T));
        }
        return col;
      });
  std::vector<Isotherm> out(temperatures.size());
  for (std::size_t t = 0; t < temperatures.size(); ++t) {
    Isotherm& iso = out[t];
    iso.T = temperatures[t];
    iso.alpha.assign(alpha_grid.begin(), alpha_grid.end());
    for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
      const ThermoPoint& pt = columns[j][t];
      iso.valid.push_back(pt.valid && !pt.z_nonpositive);
      iso.F.push_back(pt.valid ? pt.F : std::numeric_limits<double>::quiet_NaN());
    }
    iso.validate();
  }
  return out;
}

double pressure_alpha(const FreeEnergyFn& F, double alpha, double rel_step) {
  if (!(rel_step > 0.0)) {
    throw InvalidArgument("finite-difference step must be positive");
  }
  const double h = step_for(alpha, rel_step);
  const double coarse = central(F, alpha, h);
  const double fine = central(F, alpha, 0.5 * h);
  return -(4.0 * fine - coarse) / 3.0;
}

double pressure_alpha(const StateSurface& surface, double T, double alpha, double rel_step) {
  if (alpha - step_for(alpha, rel_step) < 0.0) {
    throw InvalidArgument("pressure stencil would leave alpha >= 0");
  }
  return pressure_alpha(
      [&](double a) { return valid_F(surface.at(T, a), T, a); }, alpha, rel_step);
}

double pressure_alpha(const ModelParams& p, double T, double alpha, double rel_step) {
  return pressure_alpha(StateSurface(p), T, alpha, rel_step);
}

SpinodalResult spinodal_analysis(const Isotherm& iso) {
  iso.validate();
  const auto n_valid = std::count(iso.valid.begin(), iso.valid.end(), true);
  if (n_valid < 5) {
    throw InvalidArgument("spinodal analysis needs at least 5 valid points");
  }
  SpinodalResult res;
  res.T = iso.T;

  struct Tagged {
    StationaryPoint pt;
    std::size_t run;
  };
  std::vector<Tagged> minima;
  std::vector<StationaryPoint> inflections;
  const auto runs = valid_runs(iso);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const RunPoints pts = stationary_points(iso, runs[r]);
    for (const auto& m : pts.minima) {
      minima.push_back({m, r});
      res.minima.push_back(m);
    }
    inflections.insert(inflections.end(), pts.inflections.begin(), pts.inflections.end());
  }
  res.inflections = inflections;

  if (iso.alpha.size() >= 10) {
    const Isotherm coarse = every_other(iso);
    if (std::count(coarse.valid.begin(), coarse.valid.end(), true) >= 5 &&
        minima_count(coarse) != res.minima.size()) {
      res.halving_stable = false;
      res.warning = "minima count changes when the alpha grid is halved; classification withheld";
    }
  }

  for (std::size_t i = 0; i + 1 < minima.size(); ++i) {
    const StationaryPoint& m1 = minima[i].pt;
    const StationaryPoint& m2 = minima[i + 1].pt;
    if (!res.halving_stable || minima[i].run != minima[i + 1].run) {
      res.indeterminate.push_back({m1.alpha, m2.alpha, IntervalKind::kIndeterminate});
      continue;
    }
    std::vector<double> inside;
    for (const auto& f : inflections) {
      if (f.alpha > m1.alpha && f.alpha < m2.alpha) {
        inside.push_back(f.alpha);
      }
    }
    if (inside.size() < 2) {
      res.indeterminate.push_back({m1.alpha, m2.alpha, IntervalKind::kIndeterminate});
      continue;
    }
    std::sort(inside.begin(), inside.end());
    res.binodal.push_back({m1.alpha, m2.alpha, IntervalKind::kBinodal});
    res.metastable.push_back({m1.alpha, inside.front(), IntervalKind::kMetastable});
    res.spinodal.push_back({inside.front(), inside.back(), IntervalKind::kSpinodal});
    res.metastable.push_back({inside.back(), m2.alpha, IntervalKind::kMetastable});
    res.p_eq.push_back(std::abs((m2.F - m1.F) / (m2.alpha - m1.alpha)));
  }
  return res;
}

double heterogeneous_free_energy(const SpinodalResult& res, const Isotherm& iso, double alpha) {
  for (std::size_t i = 0; i < res.binodal.size(); ++i) {
    const Interval& b = res.binodal[i];
    if (alpha < b.lo || alpha > b.hi) {
      continue;
    }
    const auto endpoint_F = [&](double a) {
      for (const auto& m : res.minima) {
        if (m.alpha == a) {
          return m.F;
        }
      }
      throw InternalError("binodal endpoint is not a recorded minimum");
    };
    const double f1 = endpoint_F(b.lo);
    const double f2 = endpoint_F(b.hi);
    const double c1 = (b.hi - alpha) / (b.hi - b.lo);
    const double f_het = c1 * f1 + (1.0 - c1) * f2;
    const double f_hom = alpha == b.lo ? f1 : alpha == b.hi ? f2 : interpolate_F(iso, alpha);
    const double tol = 1e-9 * std::max({1.0, std::abs(f1), std::abs(f2)});
    if (f_het > f_hom + tol) {
      throw InternalError("lever-rule free energy " + std::to_string(f_het) +
                          " exceeds the homogeneous value " + std::to_string(f_hom) +
                          " at alpha = " + std::to_string(alpha));
    }
    return f_het;
  }
  throw InvalidArgument("alpha = " + std::to_string(alpha) + " is outside every binodal");
}

MaxwellCheck maxwell_check(const FreeEnergySurfaceFn& F, double T, double alpha,
                           double rel_step) {
  const double hT = rel_step * T;
  const double ha = step_for(alpha, rel_step);
  const auto S = [&](double t, double a) { return -(F(t + hT, a) - F(t - hT, a)) / (2.0 * hT); };
  const auto P = [&](double t, double a) { return -(F(t, a + ha) - F(t, a - ha)) / (2.0 * ha); };
  MaxwellCheck out;
  out.dS_dalpha = (S(T, alpha + ha) - S(T, alpha - ha)) / (2.0 * ha);
  out.dp_dT = (P(T + hT, alpha) - P(T - hT, alpha)) / (2.0 * hT);
  const double scale = std::max({std::abs(out.dS_dalpha), std::abs(out.dp_dT), 1e-12});
  out.residual = std::abs(out.dS_dalpha - out.dp_dT) / scale;
  return out;
}

MaxwellCheck maxwell_check(const StateSurface& surface, double T, double alpha, double rel_step) {
  if (!(T > 0.0)) {
    throw InvalidArgument("temperature must be positive");
  }
  const double hT = rel_step * T;
  const double ha = step_for(alpha, rel_step);
  if (alpha - ha < 0.0) {
    throw InvalidArgument("Maxwell stencil would leave alpha >= 0");
  }
  bool flagged = false;
  const auto point = [&](double t, double a) {
    const ThermoPoint pt = surface.at(t, a);
    flagged = flagged || !pt.valid || pt.z_nonpositive;
    return pt;
  };
  const auto P = [&](double t) {
    return -(point(t, alpha + ha).F - point(t, alpha - ha).F) / (2.0 * ha);
  };
  MaxwellCheck out;
  out.dS_dalpha = (point(T, alpha + ha).S - point(T, alpha - ha).S) / (2.0 * ha);
  out.dp_dT = (P(T + hT) - P(T - hT)) / (2.0 * hT);
  const double scale = std::max({std::abs(out.dS_dalpha), std::abs(out.dp_dT), 1e-12});
  out.residual = std::abs(out.dS_dalpha - out.dp_dT) / scale;
  out.flagged = flagged;
  return out;
}

MaxwellCheck maxwell_check(const ModelParams& p, double T, double alpha, double rel_step) {
  return maxwell_check(StateSurface(p), T, alpha, rel_step);
}

}  // namespace stability
}  // namespace ptspin
