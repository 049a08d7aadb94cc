// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "ptspin/thermo.hpp"

namespace ptspin {

/// Thermodynamic potentials on the (T, alpha) plane at fixed g. Spectra are computed once
/// per (alpha, g) and shared; safe for concurrent use.
class StateSurface {
 public:
  explicit StateSurface(ModelParams base, ThermoOptions opts = {}, bool with_vectors = false);

  const ModelParams& params() const { return base_; }

  /// With cache = false a missing spectrum is built but not retained (root-finding
  /// midpoints would otherwise grow the cache without bound).
  std::shared_ptr<const ThermoEngine> engine(double alpha, bool cache = true) const;
  ThermoPoint at(double T, double alpha, bool cache = true) const {
    return engine(alpha, cache)->potentials(T);
  }

  std::size_t cached_spectra() const;

 private:
  ModelParams base_;
  ThermoOptions opts_;
  bool with_vectors_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, double>, std::shared_ptr<const ThermoEngine>> cache_;
};

}  // namespace ptspin
