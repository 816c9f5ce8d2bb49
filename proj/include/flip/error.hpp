// Copyright 2026 The flip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace flip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failures (missing file, unreadable path).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data; carries the 1-based physical row when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row) : Error(what), row_(row) {}
  long row() const noexcept { return row_; }

 private:
  long row_;
};

/// A precondition on an operation's arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numeric failure: overflow guard, rank deficiency, non-PD matrix.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The Theorem-3 budget condition failed (spectrum too flat for the
/// constant-shift neighborhood at this delta).
class DegenerateBudget : public Error {
 public:
  using Error::Error;
};

/// The attacker's series predicts the sensitive series perfectly; the
/// residual spectrum carries no mass and no mechanism can help.
class PerfectPrediction : public Error {
 public:
  using Error::Error;
};

}  // namespace flip
