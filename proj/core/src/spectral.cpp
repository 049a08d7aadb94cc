// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "ptspin/parallel.hpp"

namespace ptspin {

double BlockSpectrum::total_mult() const {
  double total = 0.0;
  for (const auto& w : weights) {
    total += w.mult;
  }
  return total;
}

const BlockSpectrum& ModelSpectrum::find(const BlockKey& key) const {
  auto it = std::lower_bound(blocks.begin(), blocks.end(), key,
                             [](const BlockSpectrum& b, const BlockKey& k) { return b.key < k; });
  if (it == blocks.end() || it->key != key) {
    throw InvalidArgument("no block with key (S=" + key.nv_spin.str() + ", s1=" + key.s1.str() +
                          ", s2=" + key.s2.str() + ")");
  }
  return *it;
}

bool ModelSpectrum::near_defective() const {
  return std::any_of(blocks.begin(), blocks.end(),
                     [](const BlockSpectrum& b) { return b.near_defective; });
}

namespace spectral {

namespace {

bool by_re_im(Complex a, Complex b) {
  if (a.real() != b.real()) {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

std::string describe(const BlockKey& key) {
  return "(S=" + key.nv_spin.str() + ", s1=" + key.s1.str() + ", s2=" + key.s2.str() + ")";
}

// Connected components of eigenvalues closer than tol * max(1, |E|).
std::vector<std::vector<int>> degenerate_clusters(const Eigen::VectorXcd& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double scale = std::max(1.0, std::abs(values[i]));
      if (std::abs(values[i] - values[j]) <= tol * scale) {
        parent[root(i)] = root(j);
      }
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    groups[root(i)].push_back(i);
  }
  std::vector<std::vector<int>> out;
  for (auto& [r, members] : groups) {
    out.push_back(std::move(members));
  }
  return out;
}

}  // namespace

std::string param_name(SweepParam p) { return p == SweepParam::kAlpha ? "alpha" : "g"; }

bool is_real(Complex e, double im_tol_rel) {
  return std::abs(e.imag()) <= im_tol_rel * std::max(1.0, std::abs(e));
}

namespace {

struct RawEigen {
  Eigen::VectorXcd values;
  ComplexMatrix vectors;
};

// Francis QR can stall on exactly structured input (alpha = 0 leaves a nilpotent coupling).
// Retry with a larger iteration budget, then on a fixed orthogonal similarity of h.
RawEigen solve_eigen(const RealMatrix& h, bool vectors) {
  const Eigen::Index n = h.rows();
  Eigen::EigenSolver<RealMatrix> solver;
  solver.compute(h, vectors);
  if (solver.info() == Eigen::Success) {
    return {solver.eigenvalues(), vectors ? solver.eigenvectors() : ComplexMatrix()};
  }
  solver.setMaxIterations(static_cast<Eigen::Index>(1000) * n);
  solver.compute(h, vectors);
  if (solver.info() == Eigen::Success) {
    return {solver.eigenvalues(), vectors ? solver.eigenvectors() : ComplexMatrix()};
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  RealMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, j) = normal(rng);
    }
  }
  const RealMatrix q = Eigen::HouseholderQR<RealMatrix>(m).householderQ();
  solver.compute(q.transpose() * h * q, vectors);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("real Schur iteration did not converge");
  }
  RawEigen out{solver.eigenvalues(), ComplexMatrix()};
  if (vectors) {
    out.vectors = q.cast<Complex>() * solver.eigenvectors();
    out.vectors.colwise().normalize();
  }
  return out;
}

}  // namespace

EigenDecomposition diagonalize(const RealMatrix& h, const SpectralOptions& opts) {
  if (h.rows() != h.cols()) {
    throw InvalidArgument("diagonalize needs a square matrix");
  }
  const Eigen::Index n = h.rows();
  EigenDecomposition out;
  if (n == 0) {
    return out;
  }

  const RawEigen right_solver = solve_eigen(h, opts.compute_vectors);
  const Eigen::VectorXcd& values = right_solver.values;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return by_re_im(values[a], values[b]); });
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (int idx : order) {
    out.eigenvalues.push_back(values[idx]);
  }
  if (!opts.compute_vectors) {
    return out;
  }

  const ComplexMatrix& right_raw = right_solver.vectors;
  const RawEigen left_solver = solve_eigen(h.transpose(), true);
  const Eigen::VectorXcd& left_values = left_solver.values;
  const ComplexMatrix& left_raw = left_solver.vectors;

  // Greedy nearest-eigenvalue matching; H is real, so H and H^T share the spectrum and
  // a conjugate pair is matched member by member.
  ComplexMatrix left_matched(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = -1;
    double best_dist = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) {
        continue;
      }
      const double dist = std::abs(left_values[j] - values[i]);
      if (best < 0 || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    left_matched.col(i) = left_raw.col(best);
  }

  Eigen::VectorXcd norms(n);
  for (const auto& cluster : degenerate_clusters(values, opts.tie_tol)) {
    const int k = static_cast<int>(cluster.size());
    ComplexMatrix rc(n, k);
    ComplexMatrix lc(n, k);
    for (int c = 0; c < k; ++c) {
      rc.col(c) = right_raw.col(cluster[c]);
      lc.col(c) = left_matched.col(cluster[c]);
    }
    ComplexMatrix overlap = lc.transpose() * rc;
    if (k > 1) {
      // Within a degenerate eigenspace the left basis is arbitrary: rotate it so that
      // L^T R = 1 on the cluster.
      Eigen::FullPivLU<ComplexMatrix> lu(overlap);
      if (lu.rcond() > opts.defect_tol) {
        lc = lc * lu.inverse().transpose();
        for (int c = 0; c < k; ++c) {
          lc.col(c).normalize();
        }
        overlap = lc.transpose() * rc;
      }
    } else {
      lc.col(0).normalize();
      overlap = lc.transpose() * rc;
    }
    for (int c = 0; c < k; ++c) {
      left_matched.col(cluster[c]) = lc.col(c);
      norms[cluster[c]] = overlap(c, c);
    }
  }

  out.right.resize(n, n);
  out.left.resize(n, n);
  out.biorth_norms.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index pos = 0; pos < n; ++pos) {
    const int idx = order[static_cast<std::size_t>(pos)];
    out.right.col(pos) = right_raw.col(idx);
    out.left.col(pos) = left_matched.col(idx);
    out.biorth_norms.push_back(norms[idx]);
    if (std::abs(norms[idx]) < opts.defect_tol) {
      out.near_defective = true;
    }
  }
  return out;
}

EigenDecomposition diagonalize_sectored(const RealMatrix& h, std::span<const int> labels,
                                        const SpectralOptions& opts,
                                        std::vector<int>* sector_of_level) {
  const Eigen::Index n = h.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n || h.cols() != n) {
    throw InternalError("sector labels do not match the matrix dimension");
  }
  std::map<int, std::vector<Eigen::Index>> sectors;
  for (Eigen::Index i = 0; i < n; ++i) {
    sectors[labels[static_cast<std::size_t>(i)]].push_back(i);
  }

  struct Level {
    Complex value;
    Complex norm;
    int sector;
    Eigen::VectorXcd right;
    Eigen::VectorXcd left;
  };
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(n));
  bool defective = false;
  for (const auto& [label, idx] : sectors) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    RealMatrix sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        sub(a, b) = h(idx[a], idx[b]);
      }
    }
    EigenDecomposition part = diagonalize(sub, opts);
    defective = defective || part.near_defective;
    for (Eigen::Index c = 0; c < m; ++c) {
      Level level{part.eigenvalues[static_cast<std::size_t>(c)], Complex(1.0), label, {}, {}};
      if (opts.compute_vectors) {
        level.norm = part.biorth_norms[static_cast<std::size_t>(c)];
        level.right = Eigen::VectorXcd::Zero(n);
        level.left = Eigen::VectorXcd::Zero(n);
        for (Eigen::Index a = 0; a < m; ++a) {
          level.right[idx[a]] = part.right(a, c);
          level.left[idx[a]] = part.left(a, c);
        }
      }
      levels.push_back(std::move(level));
    }
  }
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return by_re_im(a.value, b.value); });

  EigenDecomposition out;
  out.near_defective = defective;
  if (sector_of_level) {
    sector_of_level->clear();
  }
  if (opts.compute_vectors) {
    out.right.resize(n, n);
    out.left.resize(n, n);
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.eigenvalues.push_back(levels[i].value);
    if (sector_of_level) {
      sector_of_level->push_back(levels[i].sector);
    }
    if (opts.compute_vectors) {
      out.biorth_norms.push_back(levels[i].norm);
      out.right.col(static_cast<Eigen::Index>(i)) = levels[i].right;
      out.left.col(static_cast<Eigen::Index>(i)) = levels[i].left;
    }
  }
  return out;
}

BlockSpectrum diagonalize_block(const ModelParams& p, const BlockKey& key,
                                const SpectralOptions& opts) {
  const RealMatrix h = model::build_block_hamiltonian(p, key);
  const std::vector<int> labels = model::qubit_sector_labels(key);
  std::vector<int> sector_of_level;
  EigenDecomposition dec;
  try {
    dec = diagonalize_sectored(h, labels, opts, &sector_of_level);
  } catch (const SolverFailure& e) {
    throw SolverFailure(std::string(e.what()) + " in block " + describe(key));
  }

  BlockSpectrum out;
  out.key = key;
  out.eigenvalues = std::move(dec.eigenvalues);
  out.right = std::move(dec.right);
  out.left = std::move(dec.left);
  out.biorth_norms = std::move(dec.biorth_norms);
  out.near_defective = dec.near_defective;
  const double offset = 0.5 * (p.size.omega1 + p.size.omega2);
  out.pair_numbers.reserve(sector_of_level.size());
  for (int twice_m : sector_of_level) {
    out.pair_numbers.push_back(0.5 * twice_m + offset);
  }
  return out;
}

ModelSpectrum compute_spectrum(const ModelParams& p, const SpectralOptions& opts, int workers) {
  p.validate();
  std::map<BlockKey, std::vector<BlockWeight>> grouped;
  for (const auto& b : blocks::enumerate_blocks(p.size)) {
    const BigInt m = b.mult();
    grouped[b.key()].push_back({b.nv.n, m, m.convert_to<double>()});
  }
  std::vector<BlockKey> keys;
  keys.reserve(grouped.size());
  for (const auto& [k, w] : grouped) {
    keys.push_back(k);
  }

  ModelSpectrum out;
  out.params = p;
  out.blocks = parallel_map<BlockSpectrum>(keys.size(), workers, [&](std::size_t i) {
    return diagonalize_block(p, keys[i], opts);
  });
  for (auto& b : out.blocks) {
    b.weights = grouped[b.key];
  }
  return out;
}

int complex_pair_count(std::span<const Complex> eigenvalues, double im_tol_rel) {
  int count = 0;
  for (Complex e : eigenvalues) {
    if (e.imag() > 0.0 && !is_real(e, im_tol_rel)) {
      ++count;
    }
  }
  return count;
}

Classification classify(std::span<const Complex> eigenvalues, double im_tol_rel) {
  Classification out;
  std::vector<Complex> upper;
  std::vector<Complex> lower;
  for (Complex e : eigenvalues) {
    if (is_real(e, im_tol_rel)) {
      out.real_levels.push_back(e.real());
    } else if (e.imag() > 0.0) {
      upper.push_back(e);
    } else {
      lower.push_back(e);
    }
  }
  if (upper.size() != lower.size()) {
    throw InternalError("complex eigenvalues are not closed under conjugation");
  }
  std::vector<bool> used(lower.size(), false);
  for (Complex u : upper) {
    std::size_t best = lower.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < lower.size(); ++j) {
      const double dist = std::abs(std::conj(lower[j]) - u);
      if (!used[j] && (best == lower.size() || dist < best_dist)) {
        best = j;
        best_dist = dist;
      }
    }
    if (best_dist > 1e-6 * std::max(1.0, std::abs(u))) {
      throw InternalError("unpaired complex eigenvalue");
    }
    used[best] = true;
    out.complex_pairs.push_back({u.real(), u.imag()});
  }
  return out;
}

Classification classify(const BlockSpectrum& spec, double im_tol_rel) {
  return classify(spec.eigenvalues, im_tol_rel);
}

GroundStateInfo ground_state_info(const ModelSpectrum& spectrum, double tie_tol,
                                  double im_tol_rel) {
  GroundStateInfo out;
  bool found = false;
  for (const auto& b : spectrum.blocks) {
    for (Complex e : b.eigenvalues) {
      if (!found || e.real() < out.e0.real() ||
          (e.real() == out.e0.real() && e.imag() > out.e0.imag())) {
        out.e0 = e;
        found = true;
      }
    }
  }
  if (!found) {
    return out;
  }
  const double re0 = out.e0.real();
  for (const auto& b : spectrum.blocks) {
    const double mult = b.total_mult();
    for (Complex e : b.eigenvalues) {
      if (std::abs(e.real() - re0) > tie_tol) {
        continue;
      }
      if (is_real(e, im_tol_rel)) {
        out.degeneracy += mult;
      } else if (e.imag() > 0.0) {
        out.degeneracy += mult;
        out.is_complex = true;
        out.gamma0 = std::max(out.gamma0, e.imag());
        out.e0 = Complex(re0, out.gamma0);
      }
    }
  }
  return out;
}

double max_abs_imag(const ModelSpectrum& spectrum) {
  double m = 0.0;
  for (const auto& b : spectrum.blocks) {
    for (Complex e : b.eigenvalues) {
      m = std::max(m, std::abs(e.imag()));
    }
  }
  return m;
}

namespace {

ModelParams at(const ModelParams& p, SweepParam param, double x) {
  return param == SweepParam::kAlpha ? p.with_alpha(x) : p.with_g(x);
}

std::vector<Complex> block_eigenvalues(const ModelParams& p, const BlockKey& key,
                                       const SpectralOptions& opts) {
  SpectralOptions fast = opts;
  fast.compute_vectors = false;
  return diagonalize_block(p, key, fast).eigenvalues;
}

}  // namespace

std::vector<EpLocation> find_eps(const ModelParams& p, const Sweep& sweep, double precision,
                                 const SpectralOptions& opts) {
  if (!(sweep.lo < sweep.hi) || sweep.coarse_steps < 2) {
    throw InvalidArgument("EP sweep needs lo < hi and at least 2 coarse steps");
  }
  if (!(precision > 0.0)) {
    throw InvalidArgument("EP precision must be positive");
  }
  p.validate();
  std::vector<BlockKey> keys;
  {
    std::map<BlockKey, int> seen;
    for (const auto& b : blocks::enumerate_blocks(p.size)) {
      if (seen.emplace(b.key(), 0).second) {
        keys.push_back(b.key());
      }
    }
  }

  const int steps = sweep.coarse_steps;
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid[i] = sweep.lo + (sweep.hi - sweep.lo) * i / (steps - 1);
  }

  std::vector<EpLocation> out;
  for (const auto& key : keys) {
    auto pairs_at = [&](double x) {
      return complex_pair_count(block_eigenvalues(at(p, sweep.param, x), key, opts),
                                 opts.im_tol_rel);
    };
    int prev = pairs_at(grid[0]);
    for (int i = 1; i < steps; ++i) {
      const int cur = pairs_at(grid[i]);
      if (cur == prev) {
        continue;
      }
      double lo = grid[i - 1];
      double hi = grid[i];
      const int count_lo = prev;
      while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (pairs_at(mid) == count_lo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      EpLocation ep;
      ep.param = sweep.param;
      ep.lo = lo;
      ep.hi = hi;
      ep.value = 0.5 * (lo + hi);
      ep.block = key;
      ep.broken_above = pairs_at(hi) > count_lo;
      // The pair born at the EP has the smallest |Im| on the broken side.
      const double broken_side = ep.broken_above ? hi : lo;
      const auto values = block_eigenvalues(at(p, sweep.param, broken_side), key, opts);
      double best_gamma = -1.0;
      for (std::size_t n = 0; n < values.size(); ++n) {
        const Complex e = values[n];
        if (e.imag() > 0.0 && !is_real(e, opts.im_tol_rel) &&
            (best_gamma < 0.0 || e.imag() < best_gamma)) {
          best_gamma = e.imag();
          ep.level = static_cast<int>(n);
          ep.re_energy = e.real();
        }
      }
      out.push_back(ep);
      prev = cur;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EpLocation& a, const EpLocation& b) { return a.value < b.value; });
  return out;
}

std::vector<EpTableRow> first_eps_about_unity(const ModelParams& p, std::span<const double> g_grid,
                                              double alpha_lo, double alpha_hi, int coarse_steps,
                                              double precision, const SpectralOptions& opts) {
  if (!(alpha_lo < 1.0 && alpha_hi > 1.0)) {
    throw InvalidArgument("alpha window must contain 1");
  }
  std::vector<EpTableRow> rows;
  for (double g : g_grid) {
    const ModelParams pg = p.with_g(g);
    EpTableRow row;
    row.g = g;
    const auto below =
        find_eps(pg, {SweepParam::kAlpha, alpha_lo, 1.0, coarse_steps}, precision, opts);
    for (const auto& ep : below) {
      if (!row.alpha_below || ep.value > *row.alpha_below) {
        row.alpha_below = ep.value;
      }
    }
    const auto above =
        find_eps(pg, {SweepParam::kAlpha, 1.0, alpha_hi, coarse_steps}, precision, opts);
    for (const auto& ep : above) {
      if (!row.alpha_above || ep.value < *row.alpha_above) {
        row.alpha_above = ep.value;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

EpTrend summarize_ep_trend(std::span<const EpTableRow> rows) {
  EpTrend t;
  const std::size_t half = rows.size() / 2;
  std::vector<double> below;
  for (std::size_t i = half; i < rows.size(); ++i) {
    if (rows[i].alpha_below) {
      below.push_back(*rows[i].alpha_below);
    }
  }
  t.below_count = static_cast<int>(below.size());
  if (!below.empty()) {
    const auto [mn, mx] = std::minmax_element(below.begin(), below.end());
    const double mean = std::accumulate(below.begin(), below.end(), 0.0) / below.size();
    t.below_relative_spread = mean != 0.0 ? (*mx - *mn) / std::abs(mean) : 0.0;
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    if (r.alpha_above) {
      xs.push_back(r.g);
      ys.push_back(*r.alpha_above);
    }
  }
  t.above_count = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    t.above_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    t.above_r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  }
  return t;
}

}  // namespace spectral
}  // namespace ptspin
