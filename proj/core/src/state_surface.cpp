// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin/state_surface.hpp"

namespace ptspin {

StateSurface::StateSurface(ModelParams base, ThermoOptions opts, bool with_vectors)
    : base_(std::move(base)), opts_(opts), with_vectors_(with_vectors) {
  base_.validate();
}

std::shared_ptr<const ThermoEngine> StateSurface::engine(double alpha, bool cache) const {
  const std::pair<double, double> key{alpha, base_.g};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      return it->second;
    }
  }
  // Built outside the lock; a racing duplicate is discarded below.
  SpectralOptions sopts;
  sopts.compute_vectors = with_vectors_;
  auto built = std::make_shared<const ThermoEngine>(
      spectral::compute_spectrum(base_.with_alpha(alpha), sopts), opts_);
  if (!cache) {
    return built;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(key, std::move(built)).first->second;
}

std::size_t StateSurface::cached_spectra() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

}  // namespace ptspin
