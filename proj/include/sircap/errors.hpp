// Copyright 2026 The sircap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace sircap {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (time outside [0, T], z < -1/e).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid problem instance or configuration.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Control schedule with gaps, overlaps or inadmissible values.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

// A boundary arc extended past the point where x stays positive.
class ArcOverrunError : public Error {
 public:
  using Error::Error;
};

// Integration left the forward-invariant region or a solver diverged.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// No admissible schedule keeps y below the cap (e.g. y0 >= K), or a search
// found no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A bracket that the theory guarantees turned out not to exist.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sircap
