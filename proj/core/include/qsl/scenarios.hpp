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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsl/ledger.hpp"
#include "qsl/random.hpp"

namespace qsl {

// A scenario is a single JSON document: layout, per-factor Hamiltonians,
// preparation, protocol, requested inequalities, optional feedback (demon)
// block and optional parameter sweep. Matrices are written row-major as
// [re, im] pairs, or through named generators (pauli_z, number, swap, gibbs,
// ...). Nothing is defaulted implicitly: dimensions and betas are always
// explicit, and `seed` fully determines every randomized element.

/// Parsed scenario. `document` retains the raw JSON so sweeps can patch any
/// field by JSON pointer and re-resolve.
struct ScenarioSpec {
  std::string name;
  std::uint64_t seed = 0;
  std::string document; // canonical JSON text

  static ScenarioSpec from_json_text(const std::string& text);
  static ScenarioSpec from_file(const std::filesystem::path& path);
};

/// Outcome-conditioned unitary attached to a measurement result.
struct ConditionalAction {
  std::vector<int> outcome; // level index per measured factor
  Matrix unitary;           // full setup dimension
};

/// Projective measurement in the local energy eigenbases of `measured`
/// followed by the matching conditional unitary. The only non-unitary
/// primitive in the toolkit; feedback is exactly what the inequality family
/// is meant to catch.
struct FeedbackDemon {
  std::vector<std::string> measured;
  std::vector<ConditionalAction> actions;
  Protocol asleep;  // applied with probability 1 - duty
  double duty = 1.0;
};

DensityMatrix evolve_with_feedback(const PreparedSetup& setup, const FeedbackDemon& demon);

struct SweepPoint {
  double value = 0.0;
  std::vector<InequalityReport> reports;
  std::optional<DemonVerdict> verdict;
};

struct ReportBundle {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<InequalityReport> reports;
  std::optional<AccountingLedger> ledger;
  std::optional<DemonVerdict> verdict;
  std::string sweep_param;
  std::vector<SweepPoint> sweep;

  bool any_violation() const;
};

/// Executes a scenario: builds the setup, runs the protocol (or feedback
/// model), evaluates every requested inequality, and runs the sweep if one is
/// declared. Deterministic given (document, seed).
ReportBundle run_scenario(const ScenarioSpec& spec, const Tolerances& tol = {});

/// Overrides for `run`: replaces the seed and/or sweep declaration.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sweep_param; // JSON pointer, e.g. /protocol/0/duration
  std::vector<double> sweep_grid;
};

ReportBundle run_scenario(const ScenarioSpec& spec, const RunOverrides& overrides,
                          const Tolerances& tol = {});

enum class ReportFormat { records, table };

/// Writes the bundle: a `<name>.reports.json` (records) or `<name>.reports.tsv`
/// (table) plus one two-column `<name>.sweep.<inequality>.tsv` series per
/// inequality when a sweep ran. Emission is byte-stable for identical bundles.
std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle, ReportFormat format,
                                               const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Built-in scenarios

std::vector<std::string> builtin_scenario_names();
ScenarioSpec builtin_scenario(const std::string& name);

// ---------------------------------------------------------------------------
// X machines

struct XMachineTask {
  HermitianOperator target; // embedded on the full setup dimension
  PreparedSetup resource;
};

struct XMachineResult {
  double minimum = 0.0;
  UnitaryOperator achieving_unitary;
};

/// Minimum of tr[U rho0 U^dag A_target] over all global unitaries: descending
/// state spectrum paired with ascending target spectrum.
XMachineResult xmachine_optimum(const XMachineTask& task);

// ---------------------------------------------------------------------------
// Lazy-demon sweep

struct DemonSweepRow {
  double duty = 0.0;
  double clausius_slack = 0.0;
  std::vector<std::pair<double, double>> alpha_slacks; // (alpha, slack)
  DemonVerdict verdict;
};

std::vector<DemonSweepRow> run_lazy_demon_sweep(const PreparedSetup& setup,
                                                const FeedbackDemon& demon_template,
                                                const std::vector<double>& duty_grid,
                                                const std::vector<double>& alpha_grid = {0.5, 1.0,
                                                                                         2.0, 3.0},
                                                const Tolerances& tol = {});

/// The seeded two-qubit conditional-swap demon used by the lazy-demon builtin
/// and the acceptance suite: cold and hot qubits with distinct gaps, free
/// partial-swap exchange while asleep, excitation moved cold -> hot when awake.
struct LazyDemonConstruction {
  PreparedSetup setup;
  FeedbackDemon demon;
};
LazyDemonConstruction make_lazy_demon(double beta_cold = 2.0, double beta_hot = 0.5,
                                      double gap_cold = 1.0, double gap_hot = 1.6,
                                      double free_angle = 0.3);

} // namespace qsl
