// Copyright 2026 The qsl authors
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

#include <cstdint>

namespace qsl {

// Units: hbar = k_B = 1 everywhere. Energies are dimensionless, entropies in
// nats, temperatures enter only through inverse temperatures beta.

/// Numerical tolerances used when validating and comparing operators.
/// Defaults are sized for double precision at total dimensions up to a few
/// hundred; every knob can be overridden per call site or per scenario.
struct Tolerances {
  double herm = 1e-9;          // Hermiticity residual, max-norm
  double trace = 1e-9;         // |tr(rho) - 1|
  double psd = 1e-10;          // admissible negative eigenvalue magnitude
  double unitary = 1e-9;       // ||U^dag U - I||_F
  double recon = 1e-9;         // spectral reconstruction residual
  double eps_support = 1e-12;  // eigenvalues below this are off-support for ln
  double support_leak = 1e-10; // weight outside support that triggers +inf
  double slack = 1e-8;         // inequality slack below -slack is a violation
  double energy = 1e-8;        // energy bookkeeping closure
  double fixed_point = 1e-9;   // channel fixed-point residual
  double root = 1e-10;         // bisection convergence (entropy matching)
};

/// Soft guard on the total Hilbert-space dimension. Dense O(d^3) spectral
/// calculus is the engine; past this size runs stop being interactive.
inline constexpr std::int64_t kMaxTotalDimension = 4096;

} // namespace qsl
