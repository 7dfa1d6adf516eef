// Copyright 2026 The entlab Authors
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

namespace entlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or local dimensions that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the documented domain (e.g. gamma > 1, m > n).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input that should be Hermitian but is not; carries the measured asymmetry.
class HermiticityError : public Error {
 public:
  HermiticityError(const std::string& what, double asymmetry)
      : Error(what), asymmetry_(asymmetry) {}
  double asymmetry() const { return asymmetry_; }

 private:
  double asymmetry_;
};

/// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// Problem size beyond a configured limit (dense oracle, enumeration, ...).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace entlab
