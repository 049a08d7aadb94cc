// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/blocks.hpp"

#include <mutex>
#include <string>

namespace ptspin {

void SystemSize::validate() const {
  if (omega.twice() <= 0 || omega1 <= 0 || omega2 <= 0) {
    throw InvalidArgument("system sizes must be positive (Omega=" + omega.str() +
                          ", Omega1=" + std::to_string(omega1) +
                          ", Omega2=" + std::to_string(omega2) + ")");
  }
}

BigInt SystemSize::total_dimension() const {
  BigInt one = 1;
  return one << total_modes();
}

namespace blocks {

BigInt factorial(int n) {
  if (n < 0) {
    throw InvalidArgument("factorial of negative number " + std::to_string(n));
  }
  static std::mutex mutex;
  static std::vector<BigInt> table{BigInt(1)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(table.size()) <= n) {
    table.push_back(table.back() * static_cast<unsigned>(table.size()));
  }
  return table[static_cast<std::size_t>(n)];
}

BigInt d_s(HalfInt tau, int k) {
  const int two_tau = tau.twice();
  if (two_tau < 0 || k < 0 || two_tau - 2 * k < 0) {
    throw InvalidArgument("d_S(tau=" + tau.str() + ", k=" + std::to_string(k) +
                          ") requires 0 <= k <= tau");
  }
  const BigInt num = factorial(two_tau) * (two_tau - 2 * k + 1);
  const BigInt den = factorial(k) * factorial(two_tau - k + 1);
  if (num % den != 0) {
    throw InternalError("d_S is not an integer");
  }
  return num / den;
}

BigInt nv_multiplicity(HalfInt omega, int n, HalfInt tau, int k) {
  const int two_nu1 = n - tau.twice();
  const int two_nu2 = 2 * omega.twice() - tau.twice() - n;
  if (omega.twice() <= 0 || n < 0 || n > 2 * omega.twice() || tau.twice() < 0 ||
      two_nu1 < 0 || two_nu2 < 0 || two_nu1 % 2 != 0) {
    throw InvalidArgument("invalid NV label (Omega=" + omega.str() + ", N=" + std::to_string(n) +
                          ", tau=" + tau.str() + ")");
  }
  const BigInt configs = factorial(omega.twice()) /
                         (factorial(tau.twice()) * factorial(two_nu1 / 2) * factorial(two_nu2 / 2));
  return configs * d_s(tau, k);
}

BigInt g_qb(HalfInt tau_qb, HalfInt s) {
  const int diff = tau_qb.twice() - s.twice();
  if (s.twice() < 0 || diff < 0 || diff % 2 != 0) {
    throw InvalidArgument("g_qb(tau=" + tau_qb.str() + ", s=" + s.str() +
                          ") requires tau - s a non-negative integer");
  }
  const int t_minus_s = diff / 2;
  const int t_plus_s_plus_1 = (tau_qb.twice() + s.twice()) / 2 + 1;
  const BigInt num = factorial(tau_qb.twice()) * (s.twice() + 1);
  const BigInt den = factorial(t_minus_s) * factorial(t_plus_s_plus_1);
  if (num % den != 0) {
    throw InternalError("g_qb is not an integer");
  }
  return num / den;
}

BigInt qubit_level_multiplicity(int omega_i, HalfInt s) {
  if (omega_i <= 0 || s.twice() < 0 || s.twice() > omega_i) {
    throw InvalidArgument("d(Omega_i=" + std::to_string(omega_i) + ", s=" + s.str() +
                          ") requires 0 <= s <= Omega_i/2");
  }
  BigInt total = 0;
  // 2 tau_qb seniority-zero pairs; the remaining omega_i - 2 tau_qb pairs hold one
  // particle in one of two states.
  for (int two_tau = s.twice(); two_tau <= omega_i; two_tau += 2) {
    const BigInt choose = factorial(omega_i) / (factorial(two_tau) * factorial(omega_i - two_tau));
    const BigInt blocked = BigInt(1) << (omega_i - two_tau);
    total += choose * blocked * g_qb(HalfInt::from_twice(two_tau), s);
  }
  return total;
}

std::vector<NvBlockLabel> enumerate_nv_blocks(HalfInt omega) {
  std::vector<NvBlockLabel> out;
  const int max_n = 2 * omega.twice();
  for (int n = 0; n <= max_n; ++n) {
    for (int two_tau = 0; two_tau <= omega.twice(); ++two_tau) {
      const int two_nu1 = n - two_tau;
      const int two_nu2 = max_n - two_tau - n;
      if (two_nu1 < 0 || two_nu2 < 0 || two_nu1 % 2 != 0) {
        continue;
      }
      const HalfInt tau = HalfInt::from_twice(two_tau);
      for (int k = 0; two_tau - 2 * k >= 0; ++k) {
        out.push_back({n, tau, k, HalfInt::from_twice(two_tau - 2 * k),
                       nv_multiplicity(omega, n, tau, k)});
      }
    }
  }
  return out;
}

std::vector<QubitBlockLabel> enumerate_qubit_blocks(int omega1, int omega2) {
  std::vector<QubitBlockLabel> out;
  for (int t1 = 0; t1 <= omega1; ++t1) {
    const HalfInt s1 = HalfInt::from_twice(t1);
    const BigInt d1 = qubit_level_multiplicity(omega1, s1);
    for (int t2 = 0; t2 <= omega2; ++t2) {
      const HalfInt s2 = HalfInt::from_twice(t2);
      out.push_back({s1, s2, d1 * qubit_level_multiplicity(omega2, s2)});
    }
  }
  return out;
}

std::vector<BlockLabel> enumerate_blocks(const SystemSize& size) {
  size.validate();
  const auto nv = enumerate_nv_blocks(size.omega);
  const auto qb = enumerate_qubit_blocks(size.omega1, size.omega2);
  std::vector<BlockLabel> out;
  out.reserve(nv.size() * qb.size());
  for (const auto& a : nv) {
    for (const auto& b : qb) {
      out.push_back({a, b});
    }
  }
  return out;
}

BigInt completeness_sum(const std::vector<BlockLabel>& blocks) {
  BigInt total = 0;
  for (const auto& b : blocks) {
    total += b.mult() * b.dim();
  }
  return total;
}

}  // namespace blocks
}  // namespace ptspin
