// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ptspin {

// Bad input: out-of-range quantum numbers, malformed grids, unknown config keys.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative or dense solver did not converge.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result violates a numerical-quality guard (e.g. negative <S+S->).
class NumericalQuality : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well-formed but has no solution (no root in bracket, alpha outside a
// binodal, unsolvable cycle corner). Maps to CLI exit status 2.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ptspin
