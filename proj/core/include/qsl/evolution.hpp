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

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsl/setup.hpp"

namespace qsl {

// Protocols are finite ordered lists of steps. Continuous driving must be
// pre-discretized by the caller; every segment has a constant generator, so
// the compiled evolution is exactly unitary.

/// Evolve for `duration` under embed(h_sys_local) + sum_k embed(H_k) + h_int.
/// Bath Hamiltonians are never driven; they come from the setup. For bath-only
/// setups leave h_sys_local empty.
struct SegmentStep {
  std::optional<HermitianOperator> h_sys_local;
  std::optional<HermitianOperator> h_int_full; // full setup dimension
  double duration = 0.0;
};

/// Instantaneous change of the system Hamiltonian (adiabatic quench). No time
/// evolution; only the work bookkeeping and subsequent segments see it.
struct QuenchStep {
  HermitianOperator h_sys_local;
};

struct UnitaryStep {
  UnitaryOperator u; // full setup dimension
};

struct MixtureStep;

/// Transient fresh-microbath contact: a bath prepared in Gibbs(h_bath, beta)
/// is coupled to one layout factor by `contact` (acting on bath (x) factor)
/// and traced out afterwards. Models full or partial thermalization by large
/// reservoirs without growing the persistent Hilbert space.
struct BathContactStep {
  std::string factor;
  HermitianOperator h_bath;
  double beta = 1.0;
  UnitaryOperator contact;
};

using ProtocolStep =
    std::variant<SegmentStep, QuenchStep, UnitaryStep, MixtureStep, BathContactStep>;
using Protocol = std::vector<ProtocolStep>;

/// Probabilistic mixture of sub-protocols (protocol noise, Eq.-of-motion level
/// classical randomness). Probabilities must be positive and sum to 1.
struct MixtureStep {
  std::vector<std::pair<double, Protocol>> branches;
};

// ---------------------------------------------------------------------------
// Channels (dilation form)

/// CPTP map on a system given by env state + joint unitary on env (x) sys;
/// the environment factor comes first and is traced out.
class QuantumChannel {
public:
  QuantumChannel(DensityMatrix env_state, UnitaryOperator u);

  Index env_dim() const { return env_state_.dim(); }
  Index sys_dim() const { return u_.dim() / env_state_.dim(); }
  const DensityMatrix& env_state() const { return env_state_; }
  const UnitaryOperator& unitary() const { return u_; }

private:
  DensityMatrix env_state_;
  UnitaryOperator u_;
};

DensityMatrix apply_channel(const DensityMatrix& rho_sys, const QuantumChannel& ch);

/// Frobenius norm ||M(candidate) - candidate||.
double fixed_point_residual(const QuantumChannel& ch, const DensityMatrix& candidate);

/// (D(rho|sigma), D(M(rho)|M(sigma))); CPTP maps are contractive so the first
/// entry dominates the second for all valid inputs.
std::pair<double, double> check_contractivity(const QuantumChannel& ch, const DensityMatrix& rho,
                                              const DensityMatrix& sigma);

// ---------------------------------------------------------------------------
// Evolution and accounting

/// Compiles a mixture-free, contact-free protocol into the single unitary
/// exp(-i H_n t_n) ... exp(-i H_1 t_1) (later steps left-multiply).
UnitaryOperator compile_unitary(const PreparedSetup& setup, const Protocol& protocol);

/// Final state of the setup under the protocol. Mixtures are flattened to a
/// single (p_k, U_k) list before application; bath contacts are applied
/// sequentially in place.
DensityMatrix evolve(const PreparedSetup& setup, const Protocol& protocol);

enum class SegmentClass { adiabat, isochore, unclassified };

struct SegmentRecord {
  std::string kind;
  SegmentClass cls = SegmentClass::adiabat;
  double work = 0.0; // quench work included
  double heat = 0.0;
};

/// Per-contact record of a transient microbath: everything the inequality
/// ledger needs after the bath has been traced out.
struct TransientBath {
  double beta = 0.0;
  double q = 0.0;                    // energy change of the bath
  double passive_energy_change = 0.0;
  double divergence = 0.0;           // D(rho_f^bath | rho_0^bath)
};

/// Heat/work bookkeeping over a protocol run.
///
/// `work_on_system` follows the system-based definition (integral of
/// tr[rho dH/dt], i.e. quench work), `heat_to_system` the complementary
/// integral over isochores; `q` holds per-microbath energy changes. Energy
/// conservation closes as extracted_work() + sum q_k + Delta<H_sys> +
/// Delta<H_int> = 0 within tolerance for every classifiable protocol.
struct AccountingLedger {
  std::map<std::string, double> q;
  std::vector<TransientBath> transient;
  double work_on_system = 0.0;
  double heat_to_system = 0.0;
  bool split_available = true;
  std::string split_note;
  double delta_h_sys = 0.0; // instantaneous system Hamiltonians at endpoints
  double delta_h_int = 0.0; // endpoint interaction energies
  std::vector<SegmentRecord> log;
  std::optional<DensityMatrix> rho_final;
  std::optional<HermitianOperator> h_sys_final; // after all quenches

  double sum_beta_q(const SetupLayout& layout) const;
  /// Work delivered to the external repository, -(dH_sys + sum q + dH_int).
  double extracted_work() const;
};

AccountingLedger account(const PreparedSetup& setup, const Protocol& protocol);

/// Quench-and-thermalize staircase along a Hamiltonian path: n steps, each an
/// instantaneous quench to the interpolated Hamiltonian followed by a contact
/// with a fresh Gibbs microbath matched to it. The default contact angle pi/2
/// is a full SWAP (complete thermalization); smaller angles give the
/// finite-bath partial-swap mode. As n grows the protocol approaches a
/// reversible isotherm and the Clausius slack decays as O(1/n).
Protocol stepwise_isotherm(const std::vector<HermitianOperator>& h_path, double beta, int steps,
                           const std::string& factor_label = "sys",
                           double contact_angle = 1.5707963267948966);

} // namespace qsl
