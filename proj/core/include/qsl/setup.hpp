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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/core.hpp"

namespace qsl {

enum class FactorKind { system, microbath };

struct Factor {
  std::string label;
  Index dim = 0;
  FactorKind kind = FactorKind::microbath;
  std::optional<double> beta; // required for microbaths; absent for the system
};

/// Ordered tensor-factor structure of a setup. The global Kronecker order is
/// the factor order given here; all embeddings pad with identities.
class SetupLayout {
public:
  explicit SetupLayout(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  const Factor& factor(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  bool has(std::string_view label) const;

  Index total_dim() const;
  std::vector<Index> dims() const;

  std::optional<std::size_t> system_index() const;
  std::vector<std::size_t> microbath_indices() const;

private:
  std::vector<Factor> factors_;
};

enum class PreparationKind { product, coupled_gibbs };

/// A fully constructed initial condition: global state, local Hamiltonians,
/// and the static interaction term present at t0 (zero for product setups).
struct PreparedSetup {
  SetupLayout layout;
  DensityMatrix rho0;
  std::map<std::string, HermitianOperator> local_hamiltonians;
  HermitianOperator h_int0; // full dimension; zero unless coupled preparation
  bool correlated = false;
  PreparationKind preparation = PreparationKind::product;
  std::optional<std::string> hot_label;               // coupled_gibbs only
  std::map<std::string, UnitaryOperator> squeezing;   // label -> local squeeze

  const HermitianOperator& local_hamiltonian(std::string_view label) const;
  HermitianOperator embedded_hamiltonian(std::string_view label) const;
  /// Sum of all embedded element Hamiltonians plus h_int0.
  HermitianOperator total_hamiltonian() const;
  /// Reduced state of one factor of rho0.
  DensityMatrix reduced(std::string_view label) const;
  DensityMatrix reduced(const DensityMatrix& state, std::string_view label) const;
};

/// e^{-beta H} / Z, computed spectrally with the spectrum shifted so the
/// ground level never underflows.
DensityMatrix gibbs_state(const HermitianOperator& h, double beta);

/// Product preparation: system state (if a system factor exists) tensored
/// with a Gibbs state per microbath. `hamiltonians` maps factor labels to
/// local operators; every factor needs one.
PreparedSetup build_product_setup(const SetupLayout& layout,
                                  const std::optional<DensityMatrix>& system_state,
                                  const std::map<std::string, HermitianOperator>& hamiltonians);

/// Coupled preparation: the system is jointly thermal with the `hot` bath,
/// rho0 ~ e^{-beta_h (H_h + H_s + H_int0)} (x) Gibbs factors for the rest.
/// `h_int0_local` acts on (hot, system) in layout order.
PreparedSetup build_coupled_gibbs_setup(const SetupLayout& layout, std::string_view hot_label,
                                        const HermitianOperator& h_int0_local,
                                        const std::map<std::string, HermitianOperator>& hamiltonians);

/// -(1/beta_h) ln rho0^sys, gauge-fixed so the minimum eigenvalue is 0
/// (the potential-of-mean-force Hamiltonian of the reduced system state).
HermitianOperator effective_hamiltonian(const PreparedSetup& prepared);

/// Replaces one microbath's Gibbs factor by U rho U^dag. Only valid for
/// product preparations; the factor keeps its recorded beta.
PreparedSetup squeeze_microbath(const PreparedSetup& prepared, std::string_view label,
                                const UnitaryOperator& u_local);

struct EffectiveTemperature {
  enum class Boundary { finite, frozen, maximally_mixed };
  double beta = 0.0; // +inf when frozen (S = 0), 0 when maximally mixed
  Boundary boundary = Boundary::finite;
};

/// Solves S(Gibbs(h, beta)) = S(rho) for beta by bisection; the Gibbs entropy
/// is monotone decreasing in beta, which is asserted during the search.
EffectiveTemperature effective_temperature(const DensityMatrix& rho, const HermitianOperator& h,
                                           const Tolerances& tol = {});

} // namespace qsl
