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

#include <optional>
#include <string>

#include "qsl/core.hpp"
#include "qsl/evolution.hpp"

namespace qsl {

/// Result of rearranging a state into its passive form with respect to an
/// observable: descending state eigenvalues paired with ascending observable
/// eigenvalues.
struct PassiveDecomposition {
  DensityMatrix rho_pass;
  double ergotropy = 0.0;      // <A>_rho - <A>_pass >= 0
  double passive_energy = 0.0; // <A>_pass
  UnitaryOperator extracting_unitary; // maps rho onto rho_pass
};

/// Minimizes tr[U rho U^dag A] over all unitaries. Degenerate observable
/// eigenvalues are tie-broken by a stable (eigenvalue, index) sort, which
/// never changes the minimal value.
PassiveDecomposition passive_rearrangement(const DensityMatrix& rho, const HermitianOperator& a);

/// <A> of the passive form of rho, i.e. sum of descending eigenvalues of rho
/// times ascending eigenvalues of A.
double passive_energy(const DensityMatrix& rho, const HermitianOperator& a);

struct PassivityCheck {
  bool passive = false;
  double gap = 0.0; // <A>_rho - minimal value over unitaries
  /// On failure: a two-level unitary in the eigenbasis of A that strictly
  /// lowers <A>.
  std::optional<UnitaryOperator> witness;
};

PassivityCheck is_passive(const DensityMatrix& rho, const HermitianOperator& a,
                          double tol = 1e-9);

struct CompletePassivityResult {
  bool passive = false;    // passive for every n checked
  int failing_n = 0;       // smallest n at which passivity fails (0 if none)
  double worst_gap = 0.0;
};

/// Checks passivity of rho^(x n) against the n-fold embedded sum of h for
/// n = 1..n_max. Gibbs states pass every n; passive-but-not-thermal states
/// fail at some finite n. Spectra are combined combinatorially, so the cost
/// stays polynomial in d^n without forming d^n-dimensional matrices.
CompletePassivityResult complete_passivity_check(const DensityMatrix& rho,
                                                 const HermitianOperator& h, int n_max,
                                                 double tol = 1e-9);

enum class RankPolicy {
  strict,     // rank-deficient rho0 is a hard error
  regularize, // mix with 1e-10 I/d first; flagged in the operator
};

/// B = (-ln rho0)^alpha, the global-passivity observable family. Eigenvalue
/// ordering is opposite to rho0's by construction, so Delta<B> >= 0 under any
/// mixture of unitaries applied to rho0.
struct GlobalPassivityOperator {
  HermitianOperator b;
  double alpha = 1.0;
  bool regularized = false;
};

GlobalPassivityOperator global_passivity_operator(const DensityMatrix& rho0, double alpha,
                                                  RankPolicy policy = RankPolicy::strict,
                                                  const Tolerances& tol = {});

/// Change in the passive energy of one microbath over a protocol run:
/// E(final reduced state) - E(initial reduced state) with respect to its
/// local Hamiltonian. Initial Gibbs baths have E equal to <H>; squeezing
/// leaves E unchanged.
double passive_energy_change(const PreparedSetup& setup, const Protocol& protocol,
                             const std::string& label);

} // namespace qsl
