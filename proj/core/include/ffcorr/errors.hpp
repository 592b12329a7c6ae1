// Copyright 2026 The ffcorr Authors
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

namespace ffcorr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (non-Hermitian operator, bad
/// duration, mismatched channels, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds what the implementation supports (e.g. qubit count).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the valid domain (e.g. time outside [0, tau]).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed; the message carries the residual.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ffcorr
