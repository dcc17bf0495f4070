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

#include <string>
#include <vector>

#include "qsl/evolution.hpp"
#include "qsl/passivity.hpp"
#include "qsl/setup.hpp"

namespace qsl {

// Every second-law-like inequality is evaluated into a uniform report:
// named terms, totals, slack = lhs - rhs, and a verdict. Regime violations
// (correlated preparation for the plain Clausius form, rank deficiency for
// the B-operator family, missing work/heat split) yield the `inapplicable`
// verdict with a reason note; the formal term values are still filled in
// whenever they can be computed, so searches over out-of-regime protocols
// can see what the naive formula would have said. Structural misuse
// (dimension mismatch, wrong preparation kind) throws instead.

enum class Verdict { holds, violated, inapplicable };

std::string to_string(Verdict v);

struct InequalityReport {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0; // lhs - rhs
  Verdict verdict = Verdict::holds;
  std::string note;

  double term(const std::string& key) const;
  bool holds() const { return verdict == Verdict::holds; }
};

/// Sum of reduced entropy changes over all elements, >= 0 for any mixture of
/// unitaries from an uncorrelated start. Strictly entropic; no heat involved.
InequalityReport entropic_form(const PreparedSetup& setup, const DensityMatrix& rho_f,
                               const Tolerances& tol = {});

/// Clausius: Delta S_sys + sum_k beta_k q_k >= 0 for uncorrelated thermal
/// preparations. Pass the accounting ledger to include transient microbaths.
InequalityReport clausius(const PreparedSetup& setup, const DensityMatrix& rho_f,
                          const AccountingLedger* acct = nullptr, const Tolerances& tol = {});

/// Strong form: same lhs, but bounded below by the sum of final-vs-initial
/// bath divergences instead of zero.
InequalityReport clausius_strong(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                 const AccountingLedger* acct = nullptr,
                                 const Tolerances& tol = {});

/// Observable-only analog: Delta<-ln rho0_sys> + sum beta_k q_k >= 0. Linear
/// in the final state; weaker than Clausius by D(rho_f_sys|rho0_sys).
InequalityReport observable_ci(const PreparedSetup& setup, const DensityMatrix& rho_f,
                               const AccountingLedger* acct = nullptr,
                               const Tolerances& tol = {});

/// Correlation-compatible Clausius: Delta S_sys + Delta<B_tot> - Delta<B_sys>
/// >= 0 for arbitrary full-rank preparations, correlated or not. Also reports
/// the Delta<B_env> + Delta<B_corr> split, which vanishes identically for
/// product preparations.
InequalityReport cci(const PreparedSetup& setup, const DensityMatrix& rho_f,
                     const AccountingLedger* acct = nullptr, const Tolerances& tol = {});

/// Five-term decomposition of the CCI for coupled system-bath Gibbs
/// preparations: bare Clausius terms + interaction change + dressing term.
InequalityReport cci_coupled_gibbs(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                   const Tolerances& tol = {});

/// Passive form: Delta S_sys + sum beta_k Delta E_k >= 0 with E the passive
/// energy, valid for locally squeezed thermal baths.
InequalityReport passive_ci(const PreparedSetup& setup, const DensityMatrix& rho_f,
                            const AccountingLedger* acct = nullptr, const Tolerances& tol = {});

/// Global passivity family: Delta<(-ln rho0_tot)^alpha> >= 0 per alpha. All
/// hold for genuine mixtures of unitaries; violations flag feedback.
std::vector<InequalityReport> alpha_family(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                           const std::vector<double>& alpha_grid = {0.5, 1.0, 2.0,
                                                                                    3.0},
                                           const AccountingLedger* acct = nullptr,
                                           const Tolerances& tol = {});

/// Passivity-divergence relation: Delta<B_tot> >= D(rho_f_tot | rho0_tot).
InequalityReport passivity_divergence(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                      const AccountingLedger* acct = nullptr,
                                      const Tolerances& tol = {});

/// W <= -Delta F with F = <H_sys> - T S(rho_sys), single bath temperature,
/// no initial or final interaction terms.
InequalityReport free_energy_bound(const PreparedSetup& setup, const AccountingLedger& acct,
                                   const Tolerances& tol = {});

struct KaCoherenceResult {
  double delta_s_entropy_route = 0.0;    // S[diag(rho)] - S(rho)
  double delta_s_divergence_route = 0.0; // D[rho | diag(rho)]
  double w_rev = 0.0;                    // T * Delta S_II
  DensityMatrix dephased;
};

/// Reversible coherence-removal bookkeeping: both expressions for the stage-II
/// entropy change, which must agree, and the work equivalent at temperature T.
/// diag() is taken in the eigenbasis of h_s.
KaCoherenceResult ka_coherence_work(const DensityMatrix& rho_i, const HermitianOperator& h_s,
                                    double temperature, const Tolerances& tol = {});

/// beta q >= B_Q with B_Q = -ln tr(M rho0), M the dilation applied to the
/// unnormalized system identity. Terms carry both identity conventions (the
/// normalized one shifts B_Q by ln d). The environment Hamiltonian is
/// recovered from the thermal env state as -(1/beta) ln rho_env.
InequalityReport bq_bound(const DensityMatrix& rho0_sys, const QuantumChannel& ch, double beta,
                          const Tolerances& tol = {});

struct DemonVerdict {
  enum class Kind { none_detected, ci_violation, alpha_violation };
  Kind kind = Kind::none_detected;
  std::vector<double> violated_alphas;
  std::string minimal_violated; // name of the weakest violated inequality
};

std::string to_string(DemonVerdict::Kind kind);

/// Classifies a report bundle: CI violation dominates, then any alpha-family
/// violation, else nothing detected. Requires the clausius report and at
/// least one alpha-family report to be present.
DemonVerdict demon_verdict(const std::vector<InequalityReport>& reports);

} // namespace qsl
