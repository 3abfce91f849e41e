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

#include <cmath>

// Unit system: hbar = 1, time in femtoseconds, energies and angular
// frequencies in rad/fs, wavelengths in nm. With these choices a laser
// wavelength maps to its angular carrier frequency via omega = 2*pi*c/lambda.

namespace pap {

inline constexpr double kSpeedOfLightNmPerFs = 299.792458;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Angular carrier frequency (rad/fs) of light with the given vacuum
// wavelength (nm).
template <typename Scalar>
Scalar carrier_from_wavelength(Scalar wavelength_nm) {
  return static_cast<Scalar>(kTwoPi * kSpeedOfLightNmPerFs) / wavelength_nm;
}

}  // namespace pap
