// Copyright 2026 The qcorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong shape, out-of-range parameter, non-Hermitian matrix.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computation produced a result that violates its own postcondition.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NotPsd : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// A matrix that was supposed to be a density matrix is not one.
class NotAState : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Depolarizing weights went genuinely negative: the parameters do not
/// describe a completely positive map at this time.
class CpViolation : public Error {
 public:
  using Error::Error;
};

/// A Kraus weight sits exactly on a square-root branch point with a
/// non-vanishing rate, so the time derivative does not exist.
class DerivativeSingularity : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Failure inside a time sweep, tagged with the grid coordinate.
class SweepFailure : public NumericalFailure {
 public:
  SweepFailure(const std::string& what, double time, bool invalid_input)
      : NumericalFailure(what), time_(time), invalid_input_(invalid_input) {}

  double time() const noexcept { return time_; }
  bool invalid_input() const noexcept { return invalid_input_; }

 private:
  double time_;
  bool invalid_input_;
};

}  // namespace qcorr
