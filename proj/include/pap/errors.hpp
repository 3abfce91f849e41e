// Copyright 2026 The pap Authors
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

namespace pap {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or input data (CLI exit code 2). The message names
// the offending field or file.
struct ConfigError : Error {
  using Error::Error;
};

// Numerical failure at runtime: integrator tolerance not met, step
// underflow, degenerate eigenproblem (CLI exit code 3).
struct NumericsError : Error {
  using Error::Error;
};

}  // namespace pap
