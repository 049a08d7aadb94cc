// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "ptspin/errors.hpp"

namespace ptspin {

/// A non-negative or negative multiple of 1/2, stored exactly as twice its value.
/// Used for spins, quasispins and the sublevel counts Omega, tau.
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt from_int(int value) { return HalfInt(2 * value); }

  /// Throws InvalidArgument unless 2*value is an integer.
  static HalfInt from_double(double value) {
    const double twice = 2.0 * value;
    const double rounded = std::round(twice);
    if (!std::isfinite(value) || std::abs(twice - rounded) > 1e-9) {
      throw InvalidArgument("not a half-integer: " + std::to_string(value));
    }
    return HalfInt(static_cast<int>(rounded));
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  // Dimension 2s+1 of the spin-s irrep.
  constexpr int multiplet() const { return twice_ + 1; }

  constexpr HalfInt operator+(HalfInt other) const { return HalfInt(twice_ + other.twice_); }
  constexpr HalfInt operator-(HalfInt other) const { return HalfInt(twice_ - other.twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

}  // namespace ptspin
