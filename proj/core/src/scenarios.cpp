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

#include "qsl/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qsl {

using nlohmann::json;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("scenario/" + where + ": " + what);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) fail(where, "missing numeric field '" + key + "'");
  return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) fail(where, "missing string field '" + key + "'");
  return j[key].get<std::string>();
}

Matrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "matrix must be a nonempty array of rows");
  const std::size_t n = j.size();
  Matrix m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != n) fail(where, "matrix must be square");
    for (std::size_t c = 0; c < n; ++c) {
      const auto& e = row[c];
      if (e.is_number()) {
        m(static_cast<Index>(r), static_cast<Index>(c)) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(static_cast<Index>(r), static_cast<Index>(c)) =
            Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        fail(where, "matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

HermitianOperator parse_operator(const json& j, const std::string& where) {
  if (j.contains("matrix")) {
    return HermitianOperator(parse_matrix(j["matrix"], where));
  }
  if (j.contains("diag")) {
    const auto& d = j["diag"];
    if (!d.is_array() || d.empty()) fail(where, "'diag' must be a nonempty array");
    RealVector levels(static_cast<Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) levels[static_cast<Index>(i)] = d[i].get<double>();
    return HermitianOperator::diagonal(levels);
  }
  if (j.contains("generator")) {
    const std::string g = j["generator"].get<std::string>();
    const double scale = j.value("scale", 1.0);
    auto scaled = [&](const HermitianOperator& op) {
      return hermitian_unchecked(scale * op.matrix());
    };
    if (g == "pauli_x") return scaled(pauli_x());
    if (g == "pauli_y") return scaled(pauli_y());
    if (g == "pauli_z") return scaled(pauli_z());
    const auto dim = static_cast<Index>(j.value("dim", 0.0));
    if (dim <= 0) fail(where, "generator '" + g + "' needs a positive 'dim'");
    if (g == "number") return scaled(number_operator(dim));
    if (g == "identity") return scaled(HermitianOperator::identity(dim));
    if (g == "zero") return HermitianOperator::zero(dim);
    if (g == "swap") return scaled(swap_generator(dim));
    fail(where, "unknown generator '" + g + "'");
  }
  fail(where, "operator needs one of 'matrix', 'diag', 'generator'");
}

DensityMatrix parse_state(const json& j, const std::string& where) {
  if (j.contains("matrix")) return DensityMatrix(parse_matrix(j["matrix"], where));
  if (j.contains("diag")) {
    const auto& d = j["diag"];
    RealVector p(static_cast<Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) p[static_cast<Index>(i)] = d[i].get<double>();
    return DensityMatrix::diagonal(p);
  }
  if (j.contains("gibbs")) {
    const auto& g = j["gibbs"];
    return gibbs_state(parse_operator(g["hamiltonian"], where + "/gibbs"),
                       require_number(g, "beta", where + "/gibbs"));
  }
  if (j.contains("state")) {
    const std::string s = j["state"].get<std::string>();
    const auto dim = static_cast<Index>(j.value("dim", 2.0));
    if (s == "maximally_mixed") return DensityMatrix::maximally_mixed(dim);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    if (s == "ground") {
      psi[0] = 1.0;
    } else if (s == "excited") {
      psi[dim - 1] = 1.0;
    } else if (s == "plus") {
      psi.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
    } else {
      fail(where, "unknown state '" + s + "'");
    }
    return DensityMatrix::pure(psi);
  }
  fail(where, "state needs one of 'matrix', 'diag', 'gibbs', 'state'");
}

UnitaryOperator parse_unitary(const json& j, const std::string& where, Rng& rng) {
  if (j.contains("matrix")) return UnitaryOperator(parse_matrix(j["matrix"], where));
  if (j.contains("swap")) {
    return swap_unitary(static_cast<Index>(require_number(j["swap"], "dim", where + "/swap")));
  }
  if (j.contains("partial_swap")) {
    const auto& p = j["partial_swap"];
    return partial_swap(static_cast<Index>(require_number(p, "dim", where)),
                        require_number(p, "theta", where));
  }
  if (j.contains("exp")) {
    const auto& e = j["exp"];
    return hamiltonian_exponential(parse_operator(e["hamiltonian"], where + "/exp"),
                                   require_number(e, "time", where + "/exp"));
  }
  if (j.contains("haar")) {
    return random_unitary(static_cast<Index>(require_number(j["haar"], "dim", where)), rng);
  }
  fail(where, "unitary needs one of 'matrix', 'swap', 'partial_swap', 'exp', 'haar'");
}

struct ParsedScenario {
  json doc;
  SetupLayout layout{{Factor{"placeholder", 1, FactorKind::system, std::nullopt}}};
  PreparedSetup setup{layout,
                      DensityMatrix::maximally_mixed(1),
                      {},
                      HermitianOperator::zero(1),
                      false,
                      PreparationKind::product,
                      std::nullopt,
                      {}};
  Protocol protocol;
  std::optional<FeedbackDemon> feedback;
  std::vector<std::string> inequalities;
  std::vector<double> alpha_grid{0.5, 1.0, 2.0, 3.0};
};

SetupLayout parse_layout(const json& j) {
  if (!j.contains("layout") || !j["layout"].is_array() || j["layout"].empty()) {
    fail("layout", "scenario needs a nonempty 'layout' array");
  }
  std::vector<Factor> factors;
  for (const auto& f : j["layout"]) {
    Factor fac;
    fac.label = require_string(f, "label", "layout");
    fac.dim = static_cast<Index>(require_number(f, "dim", "layout"));
    const std::string kind = require_string(f, "kind", "layout");
    if (kind == "system") {
      fac.kind = FactorKind::system;
    } else if (kind == "microbath") {
      fac.kind = FactorKind::microbath;
      fac.beta = require_number(f, "beta", "layout");
    } else {
      fail("layout", "kind must be 'system' or 'microbath'");
    }
    factors.push_back(std::move(fac));
  }
  return SetupLayout(std::move(factors));
}

Matrix parse_embedded(const json& j, const SetupLayout& layout, const Matrix& op,
                      const std::string& where) {
  if (!j.contains("factors")) {
    if (op.rows() != layout.total_dim()) {
      fail(where, "operator without 'factors' must act on the full setup");
    }
    return op;
  }
  std::vector<std::size_t> factors;
  for (const auto& lbl : j["factors"]) {
    factors.push_back(layout.index_of(lbl.get<std::string>()));
  }
  return embed(op, layout.dims(), factors);
}

Protocol parse_protocol(const json& steps, const SetupLayout& layout, Rng& rng,
                        const std::string& where);

ProtocolStep parse_step(const json& s, const SetupLayout& layout, Rng& rng,
                        const std::string& where) {
  const std::string type = require_string(s, "type", where);
  if (type == "segment") {
    SegmentStep seg;
    seg.duration = require_number(s, "duration", where);
    if (s.contains("h_sys")) seg.h_sys_local = parse_operator(s["h_sys"], where + "/h_sys");
    if (s.contains("h_int")) {
      const auto& hi = s["h_int"];
      const HermitianOperator local = parse_operator(hi["op"], where + "/h_int");
      seg.h_int_full =
          hermitian_unchecked(parse_embedded(hi, layout, local.matrix(), where + "/h_int"));
    }
    return seg;
  }
  if (type == "quench") {
    return QuenchStep{parse_operator(s["h_sys"], where + "/h_sys")};
  }
  if (type == "unitary") {
    const UnitaryOperator u = parse_unitary(s["op"], where + "/op", rng);
    return UnitaryStep{UnitaryOperator(parse_embedded(s, layout, u.matrix(), where))};
  }
  if (type == "random_unitary") {
    // Haar on the listed factors (or the full setup), seeded by the scenario.
    if (s.contains("factors")) {
      Index d = 1;
      for (const auto& lbl : s["factors"]) d *= layout.factor(lbl.get<std::string>()).dim;
      const Matrix u = random_unitary_matrix(d, rng);
      return UnitaryStep{UnitaryOperator(parse_embedded(s, layout, u, where))};
    }
    return UnitaryStep{random_unitary(layout.total_dim(), rng)};
  }
  if (type == "random_mixture") {
    const int branches = static_cast<int>(s.value("branches", 2.0));
    if (branches < 1) fail(where, "random_mixture needs at least one branch");
    std::vector<double> probs(branches);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    double total = 0.0;
    for (auto& p : probs) total += (p = unit(rng));
    MixtureStep mix;
    for (int b = 0; b < branches; ++b) {
      mix.branches.emplace_back(probs[b] / total,
                                Protocol{UnitaryStep{random_unitary(layout.total_dim(), rng)}});
    }
    return mix;
  }
  if (type == "mixture") {
    MixtureStep mix;
    if (!s.contains("branches") || !s["branches"].is_array() || s["branches"].empty()) {
      fail(where, "mixture needs a nonempty 'branches' array");
    }
    for (const auto& b : s["branches"]) {
      mix.branches.emplace_back(require_number(b, "p", where + "/branches"),
                                parse_protocol(b["protocol"], layout, rng, where + "/branches"));
    }
    return mix;
  }
  if (type == "bath_contact") {
    BathContactStep c{require_string(s, "factor", where),
                      parse_operator(s["h_bath"], where + "/h_bath"),
                      require_number(s, "beta", where), UnitaryOperator::identity(1)};
    if (s.contains("contact")) {
      c.contact = parse_unitary(s["contact"], where + "/contact", rng);
    } else {
      const double theta = s.value("theta", kHalfPi);
      c.contact = partial_swap(layout.factor(c.factor).dim, theta);
    }
    return c;
  }
  fail(where, "unknown step type '" + type + "'");
}

Protocol parse_protocol(const json& steps, const SetupLayout& layout, Rng& rng,
                        const std::string& where) {
  Protocol out;
  if (!steps.is_array()) fail(where, "protocol must be an array of steps");
  for (const auto& s : steps) {
    const std::string type = require_string(s, "type", where);
    if (type == "stepwise_isotherm") {
      std::vector<HermitianOperator> path;
      for (const auto& h : s["path"]) path.push_back(parse_operator(h, where + "/path"));
      const auto expanded = stepwise_isotherm(
          path, require_number(s, "beta", where),
          static_cast<int>(require_number(s, "steps", where)),
          s.value("factor", std::string("sys")), s.value("theta", kHalfPi));
      out.insert(out.end(), expanded.begin(), expanded.end());
    } else {
      out.push_back(parse_step(s, layout, rng, where));
    }
  }
  return out;
}

ParsedScenario parse_scenario(const json& doc, Rng& rng) {
  ParsedScenario p;
  p.doc = doc;
  p.layout = parse_layout(doc);

  std::map<std::string, HermitianOperator> hams;
  if (!doc.contains("hamiltonians") || !doc["hamiltonians"].is_object()) {
    fail("hamiltonians", "scenario needs a 'hamiltonians' object");
  }
  for (const auto& [label, spec] : doc["hamiltonians"].items()) {
    hams.insert_or_assign(label, parse_operator(spec, "hamiltonians/" + label));
  }

  if (!doc.contains("preparation")) fail("preparation", "scenario needs a 'preparation' block");
  const auto& prep = doc["preparation"];
  const std::string ptype = require_string(prep, "type", "preparation");
  if (ptype == "product") {
    std::optional<DensityMatrix> sys_state;
    if (prep.contains("system_state")) {
      sys_state = parse_state(prep["system_state"], "preparation/system_state");
    }
    p.setup = build_product_setup(p.layout, sys_state, hams);
    if (prep.contains("squeeze")) {
      for (const auto& [label, uspec] : prep["squeeze"].items()) {
        p.setup = squeeze_microbath(p.setup, label,
                                    parse_unitary(uspec, "preparation/squeeze", rng));
      }
    }
  } else if (ptype == "coupled_gibbs") {
    const std::string hot = require_string(prep, "hot", "preparation");
    const HermitianOperator h_int0 = parse_operator(prep["h_int0"], "preparation/h_int0");
    p.setup = build_coupled_gibbs_setup(p.layout, hot, h_int0, hams);
  } else {
    fail("preparation", "unknown preparation type '" + ptype + "'");
  }

  if (doc.contains("protocol")) {
    p.protocol = parse_protocol(doc["protocol"], p.layout, rng, "protocol");
  }

  if (doc.contains("feedback")) {
    const auto& fb = doc["feedback"];
    FeedbackDemon demon;
    demon.duty = require_number(fb, "duty", "feedback");
    if (demon.duty < 0.0 || demon.duty > 1.0) fail("feedback", "duty must be in [0, 1]");
    for (const auto& m : fb["measured"]) demon.measured.push_back(m.get<std::string>());
    if (demon.measured.empty()) fail("feedback", "needs at least one measured factor");
    for (const auto& a : fb["actions"]) {
      ConditionalAction act;
      for (const auto& o : a["outcome"]) act.outcome.push_back(o.get<int>());
      if (act.outcome.size() != demon.measured.size()) {
        fail("feedback", "outcome arity must match the measured factor list");
      }
      const UnitaryOperator u = parse_unitary(a["op"], "feedback/actions", rng);
      act.unitary = parse_embedded(a, p.layout, u.matrix(), "feedback/actions");
      demon.actions.push_back(std::move(act));
    }
    if (fb.contains("asleep")) {
      demon.asleep = parse_protocol(fb["asleep"], p.layout, rng, "feedback/asleep");
    }
    p.feedback = std::move(demon);
  }

  if (doc.contains("inequalities")) {
    for (const auto& i : doc["inequalities"]) p.inequalities.push_back(i.get<std::string>());
  }
  if (doc.contains("alpha_grid")) {
    p.alpha_grid.clear();
    for (const auto& a : doc["alpha_grid"]) p.alpha_grid.push_back(a.get<double>());
  }
  return p;
}

} // namespace

// ---------------------------------------------------------------------------
// Feedback evolution

DensityMatrix evolve_with_feedback(const PreparedSetup& setup, const FeedbackDemon& demon) {
  const auto dims = setup.layout.dims();
  const Index total = setup.layout.total_dim();

  // Projector ladder per measured factor, in its local energy eigenbasis
  // (ascending).
  std::vector<std::vector<Matrix>> projectors;
  std::vector<std::size_t> measured_idx;
  for (const auto& label : demon.measured) {
    const std::size_t idx = setup.layout.index_of(label);
    measured_idx.push_back(idx);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(setup.local_hamiltonian(label).matrix());
    std::vector<Matrix> ladder;
    for (Index level = 0; level < setup.layout.factors()[idx].dim; ++level) {
      const Eigen::VectorXcd v = solver.eigenvectors().col(level);
      ladder.push_back(embed(Matrix(v * v.adjoint()), dims, {idx}));
    }
    projectors.push_back(std::move(ladder));
  }

  // Enumerate outcome tuples.
  std::vector<std::vector<int>> outcomes{{}};
  for (std::size_t m = 0; m < demon.measured.size(); ++m) {
    std::vector<std::vector<int>> next;
    const Index d = setup.layout.factors()[measured_idx[m]].dim;
    for (const auto& o : outcomes) {
      for (int level = 0; level < d; ++level) {
        auto e = o;
        e.push_back(level);
        next.push_back(std::move(e));
      }
    }
    outcomes = std::move(next);
  }

  Matrix awake = Matrix::Zero(total, total);
  for (const auto& o : outcomes) {
    Matrix proj = Matrix::Identity(total, total);
    for (std::size_t m = 0; m < o.size(); ++m) proj = (projectors[m][o[m]] * proj).eval();
    Matrix collapsed = proj * setup.rho0.matrix() * proj.adjoint();
    for (const auto& act : demon.actions) {
      if (act.outcome == o) {
        collapsed = (act.unitary * collapsed * act.unitary.adjoint()).eval();
        break;
      }
    }
    awake += collapsed;
  }

  if (demon.duty >= 1.0) return DensityMatrix(std::move(awake));
  const DensityMatrix asleep = evolve(setup, demon.asleep);
  return DensityMatrix(demon.duty * awake + (1.0 - demon.duty) * asleep.matrix());
}

// ---------------------------------------------------------------------------
// ScenarioSpec

ScenarioSpec ScenarioSpec::from_json_text(const std::string& text) {
  json doc = json::parse(text);
  ScenarioSpec spec;
  spec.name = doc.value("name", std::string("unnamed"));
  spec.seed = static_cast<std::uint64_t>(doc.value("seed", 0.0));
  spec.document = doc.dump();
  return spec;
}

ScenarioSpec ScenarioSpec::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

bool ReportBundle::any_violation() const {
  for (const auto& r : reports) {
    if (r.verdict == Verdict::violated) return true;
  }
  for (const auto& p : sweep) {
    for (const auto& r : p.reports) {
      if (r.verdict == Verdict::violated) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// run_scenario

namespace {

std::vector<InequalityReport> evaluate_inequalities(const ParsedScenario& p,
                                                    const DensityMatrix& rho_f,
                                                    const AccountingLedger* acct, Rng& rng,
                                                    const Tolerances& tol) {
  std::vector<InequalityReport> reports;
  for (const auto& id : p.inequalities) {
    if (id == "entropic_form") {
      reports.push_back(entropic_form(p.setup, rho_f, tol));
    } else if (id == "clausius") {
      reports.push_back(clausius(p.setup, rho_f, acct, tol));
    } else if (id == "clausius_strong") {
      reports.push_back(clausius_strong(p.setup, rho_f, acct, tol));
    } else if (id == "observable_ci") {
      reports.push_back(observable_ci(p.setup, rho_f, acct, tol));
    } else if (id == "cci") {
      reports.push_back(cci(p.setup, rho_f, acct, tol));
    } else if (id == "cci_coupled_gibbs") {
      reports.push_back(cci_coupled_gibbs(p.setup, rho_f, tol));
    } else if (id == "passive_ci") {
      reports.push_back(passive_ci(p.setup, rho_f, acct, tol));
    } else if (id == "passivity_divergence") {
      reports.push_back(passivity_divergence(p.setup, rho_f, acct, tol));
    } else if (id == "alpha_family") {
      auto family = alpha_family(p.setup, rho_f, p.alpha_grid, acct, tol);
      reports.insert(reports.end(), family.begin(), family.end());
    } else if (id == "free_energy_bound") {
      if (acct) {
        reports.push_back(free_energy_bound(p.setup, *acct, tol));
      } else {
        InequalityReport r;
        r.name = "free_energy_bound";
        r.verdict = Verdict::inapplicable;
        r.note = "feedback_protocol_has_no_work_accounting";
        reports.push_back(std::move(r));
      }
    } else if (id == "ka_coherence") {
      const auto sys = p.setup.layout.system_index();
      if (!sys) fail("inequalities", "ka_coherence needs a system factor");
      const auto& label = p.setup.layout.factors()[*sys].label;
      double temperature = 1.0;
      if (p.doc.contains("ka") && p.doc["ka"].contains("temperature")) {
        temperature = p.doc["ka"]["temperature"].get<double>();
      } else if (!p.setup.layout.microbath_indices().empty()) {
        temperature =
            1.0 / *p.setup.layout.factors()[p.setup.layout.microbath_indices()[0]].beta;
      }
      const auto ka = ka_coherence_work(p.setup.reduced(label),
                                        p.setup.local_hamiltonian(label), temperature, tol);
      InequalityReport r;
      r.name = "ka_coherence";
      r.terms = {{"delta_S_entropy_route", ka.delta_s_entropy_route},
                 {"delta_S_divergence_route", ka.delta_s_divergence_route},
                 {"w_rev", ka.w_rev},
                 {"route_mismatch",
                  std::abs(ka.delta_s_entropy_route - ka.delta_s_divergence_route)}};
      r.lhs = ka.delta_s_divergence_route;
      r.rhs = 0.0;
      r.slack = r.lhs;
      const bool ok = r.slack >= -tol.slack && r.term("route_mismatch") <= 1e-8;
      r.verdict = ok ? Verdict::holds : Verdict::violated;
      if (!ok) r.note = "route_mismatch";
      reports.push_back(std::move(r));
    } else if (id == "xmachine") {
      if (!p.doc.contains("xmachine")) fail("inequalities", "missing 'xmachine' block");
      const auto& xj = p.doc["xmachine"];
      const HermitianOperator local = parse_operator(xj["target"]["op"], "xmachine/target");
      const Matrix target =
          parse_embedded(xj["target"], p.setup.layout, local.matrix(), "xmachine/target");
      XMachineTask task{hermitian_unchecked(target), p.setup};
      const auto opt = xmachine_optimum(task);
      const int samples = static_cast<int>(xj.value("samples", 1000.0));
      double best_random = std::numeric_limits<double>::infinity();
      const Index d = p.setup.layout.total_dim();
      for (int s = 0; s < samples; ++s) {
        const Matrix u = random_unitary_matrix(d, rng);
        const double value =
            ((u * p.setup.rho0.matrix() * u.adjoint()) * target).trace().real();
        best_random = std::min(best_random, value);
      }
      InequalityReport r;
      r.name = "xmachine";
      r.terms = {{"optimum", opt.minimum},
                 {"random_best", best_random},
                 {"samples", static_cast<double>(samples)}};
      r.lhs = best_random;
      r.rhs = opt.minimum;
      r.slack = r.lhs - r.rhs;
      r.verdict = (r.slack >= -1e-9) ? Verdict::holds : Verdict::violated;
      reports.push_back(std::move(r));
    } else {
      fail("inequalities", "unknown inequality id '" + id + "'");
    }
  }
  return reports;
}

std::pair<std::vector<InequalityReport>, std::optional<AccountingLedger>> run_once(
    const ParsedScenario& p, Rng& rng, const Tolerances& tol) {
  if (p.feedback) {
    const DensityMatrix rho_f = evolve_with_feedback(p.setup, *p.feedback);
    return {evaluate_inequalities(p, rho_f, nullptr, rng, tol), std::nullopt};
  }
  AccountingLedger acct = account(p.setup, p.protocol);
  const DensityMatrix rho_f = *acct.rho_final;
  auto reports = evaluate_inequalities(p, rho_f, &acct, rng, tol);
  return {std::move(reports), std::move(acct)};
}

std::optional<DemonVerdict> maybe_verdict(const std::vector<InequalityReport>& reports) {
  bool have_ci = false, have_alpha = false;
  for (const auto& r : reports) {
    if (r.name == "clausius") have_ci = true;
    if (r.name.rfind("global_passivity_alpha_", 0) == 0) have_alpha = true;
  }
  if (have_ci && have_alpha) return demon_verdict(reports);
  return std::nullopt;
}

} // namespace

ReportBundle run_scenario(const ScenarioSpec& spec, const Tolerances& tol) {
  return run_scenario(spec, RunOverrides{}, tol);
}

ReportBundle run_scenario(const ScenarioSpec& spec, const RunOverrides& overrides,
                          const Tolerances& tol) {
  json doc = json::parse(spec.document);
  const std::uint64_t seed =
      overrides.seed ? *overrides.seed : static_cast<std::uint64_t>(doc.value("seed", 0.0));

  ReportBundle bundle;
  bundle.scenario = doc.value("name", std::string("unnamed"));
  bundle.seed = seed;

  {
    Rng rng(seed);
    ParsedScenario p = parse_scenario(doc, rng);
    auto [reports, acct] = run_once(p, rng, tol);
    bundle.reports = std::move(reports);
    bundle.ledger = std::move(acct);
    bundle.verdict = maybe_verdict(bundle.reports);
  }

  std::string sweep_param;
  std::vector<double> grid;
  if (overrides.sweep_param) {
    sweep_param = *overrides.sweep_param;
    grid = overrides.sweep_grid;
  } else if (doc.contains("sweep")) {
    sweep_param = require_string(doc["sweep"], "param", "sweep");
    for (const auto& v : doc["sweep"]["grid"]) grid.push_back(v.get<double>());
  }
  if (!sweep_param.empty() && grid.empty()) fail("sweep", "sweep grid must be nonempty");

  if (!sweep_param.empty()) {
    bundle.sweep_param = sweep_param;
    for (double value : grid) {
      json patched = doc;
      try {
        patched[json::json_pointer(sweep_param)] = value;
      } catch (const json::exception& e) {
        fail("sweep", std::string("cannot set '") + sweep_param + "': " + e.what());
      }
      Rng rng(seed);
      ParsedScenario p = parse_scenario(patched, rng);
      auto [reports, acct] = run_once(p, rng, tol);
      SweepPoint point;
      point.value = value;
      point.verdict = maybe_verdict(reports);
      point.reports = std::move(reports);
      bundle.sweep.push_back(std::move(point));
    }
  }
  return bundle;
}

// ---------------------------------------------------------------------------
// Report emission

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json report_to_json(const InequalityReport& r) {
  json terms = json::object();
  for (const auto& [k, v] : r.terms) terms[k] = v;
  return json{{"name", r.name},     {"terms", terms},   {"lhs", r.lhs},
              {"rhs", r.rhs},       {"slack", r.slack}, {"verdict", to_string(r.verdict)},
              {"note", r.note}};
}

json verdict_to_json(const DemonVerdict& v) {
  return json{{"kind", to_string(v.kind)},
              {"violated_alphas", v.violated_alphas},
              {"minimal_violated", v.minimal_violated}};
}

} // namespace

std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle, ReportFormat format,
                                               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  if (format == ReportFormat::records) {
    json doc;
    doc["scenario"] = bundle.scenario;
    doc["seed"] = bundle.seed;
    doc["reports"] = json::array();
    for (const auto& r : bundle.reports) doc["reports"].push_back(report_to_json(r));
    if (bundle.verdict) doc["demon_verdict"] = verdict_to_json(*bundle.verdict);
    if (bundle.ledger) {
      json lg;
      lg["work_on_system"] = bundle.ledger->work_on_system;
      lg["heat_to_system"] = bundle.ledger->heat_to_system;
      lg["split_available"] = bundle.ledger->split_available;
      lg["delta_h_sys"] = bundle.ledger->delta_h_sys;
      lg["delta_h_int"] = bundle.ledger->delta_h_int;
      lg["extracted_work"] = bundle.ledger->extracted_work();
      json qm = json::object();
      for (const auto& [label, qk] : bundle.ledger->q) qm[label] = qk;
      lg["q"] = qm;
      json tr = json::array();
      for (const auto& t : bundle.ledger->transient) {
        tr.push_back(json{{"beta", t.beta},
                          {"q", t.q},
                          {"passive_energy_change", t.passive_energy_change},
                          {"divergence", t.divergence}});
      }
      lg["transient"] = tr;
      doc["accounting"] = lg;
    }
    if (!bundle.sweep.empty()) {
      doc["sweep_param"] = bundle.sweep_param;
      doc["sweep"] = json::array();
      for (const auto& p : bundle.sweep) {
        json pt;
        pt["value"] = p.value;
        pt["reports"] = json::array();
        for (const auto& r : p.reports) pt["reports"].push_back(report_to_json(r));
        if (p.verdict) pt["demon_verdict"] = verdict_to_json(*p.verdict);
        doc["sweep"].push_back(std::move(pt));
      }
    }
    const auto path = out_dir / (bundle.scenario + ".reports.json");
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
    written.push_back(path);
  } else {
    const auto path = out_dir / (bundle.scenario + ".reports.tsv");
    std::ofstream out(path);
    out << "name\tlhs\trhs\tslack\tverdict\tnote\n";
    for (const auto& r : bundle.reports) {
      out << r.name << "\t" << format_double(r.lhs) << "\t" << format_double(r.rhs) << "\t"
          << format_double(r.slack) << "\t" << to_string(r.verdict) << "\t" << r.note << "\n";
    }
    written.push_back(path);
  }

  if (!bundle.sweep.empty()) {
    // One plot-ready two-column series per inequality name.
    std::vector<std::string> names;
    for (const auto& r : bundle.sweep.front().reports) names.push_back(r.name);
    for (const auto& name : names) {
      const auto path = out_dir / (bundle.scenario + ".sweep." + name + ".tsv");
      std::ofstream out(path);
      for (const auto& p : bundle.sweep) {
        for (const auto& r : p.reports) {
          if (r.name == name) {
            out << format_double(p.value) << "\t" << format_double(r.slack) << "\n";
          }
        }
      }
      written.push_back(path);
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// X machines

XMachineResult xmachine_optimum(const XMachineTask& task) {
  if (task.target.dim() != task.resource.layout.total_dim()) {
    throw std::invalid_argument("xmachine_optimum: target must act on the full setup");
  }
  const auto decomposition = passive_rearrangement(task.resource.rho0, task.target);
  return XMachineResult{decomposition.passive_energy, decomposition.extracting_unitary};
}

// ---------------------------------------------------------------------------
// Lazy demon

LazyDemonConstruction make_lazy_demon(double beta_cold, double beta_hot, double gap_cold,
                                      double gap_hot, double free_angle) {
  SetupLayout layout({Factor{"c", 2, FactorKind::microbath, beta_cold},
                      Factor{"h", 2, FactorKind::microbath, beta_hot}});
  std::map<std::string, HermitianOperator> hams{
      {"c", hermitian_unchecked(gap_cold * number_operator(2).matrix())},
      {"h", hermitian_unchecked(gap_hot * number_operator(2).matrix())}};
  PreparedSetup setup = build_product_setup(layout, std::nullopt, hams);

  FeedbackDemon demon;
  demon.duty = 1.0;
  demon.measured = {"c", "h"};
  // Awake: when both qubits are excited, dump the hot excitation (feedback
  // work extraction from the top of the spectrum).
  ConditionalAction act;
  act.outcome = {1, 1};
  act.unitary = embed(pauli_x().matrix(), layout.dims(), {1});
  demon.actions.push_back(std::move(act));
  // Asleep: exchange-plus-pump coupling. Heat flows hot -> cold on average
  // and the counter-rotating part pumps both qubits, so every inequality
  // holds at duty 0.
  const Matrix xx = kron(pauli_x().matrix(), pauli_x().matrix());
  demon.asleep = {UnitaryStep{hamiltonian_exponential(hermitian_unchecked(xx), free_angle)}};
  return LazyDemonConstruction{std::move(setup), std::move(demon)};
}

std::vector<DemonSweepRow> run_lazy_demon_sweep(const PreparedSetup& setup,
                                                const FeedbackDemon& demon_template,
                                                const std::vector<double>& duty_grid,
                                                const std::vector<double>& alpha_grid,
                                                const Tolerances& tol) {
  std::vector<DemonSweepRow> rows;
  for (double duty : duty_grid) {
    FeedbackDemon demon = demon_template;
    demon.duty = duty;
    const DensityMatrix rho_f = evolve_with_feedback(setup, demon);

    std::vector<InequalityReport> reports;
    reports.push_back(clausius(setup, rho_f, nullptr, tol));
    auto family = alpha_family(setup, rho_f, alpha_grid, nullptr, tol);
    reports.insert(reports.end(), family.begin(), family.end());

    DemonSweepRow row;
    row.duty = duty;
    row.clausius_slack = reports.front().slack;
    for (std::size_t i = 1; i < reports.size(); ++i) {
      row.alpha_slacks.emplace_back(reports[i].term("alpha"), reports[i].slack);
    }
    row.verdict = demon_verdict(reports);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Built-in scenarios

namespace {

const std::map<std::string, const char*>& builtin_table() {
  static const std::map<std::string, const char*> table = {
      {"swap-thermalization", R"json({
  "name": "swap-thermalization",
  "seed": 1,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 2},
    {"label": "b1", "kind": "microbath", "dim": 2, "beta": 1.0}
  ],
  "hamiltonians": {
    "sys": {"generator": "number", "dim": 2},
    "b1": {"generator": "number", "dim": 2}
  },
  "preparation": {"type": "product", "system_state": {"state": "ground", "dim": 2}},
  "protocol": [
    {"type": "unitary", "op": {"swap": {"dim": 2}}, "factors": ["sys", "b1"]}
  ],
  "inequalities": ["entropic_form", "clausius", "clausius_strong", "passive_ci"]
})json"},
      {"two-bath-heat-flow", R"json({
  "name": "two-bath-heat-flow",
  "seed": 1,
  "layout": [
    {"label": "cold", "kind": "microbath", "dim": 2, "beta": 2.0},
    {"label": "hot", "kind": "microbath", "dim": 2, "beta": 0.5}
  ],
  "hamiltonians": {
    "cold": {"generator": "number", "dim": 2},
    "hot": {"generator": "number", "dim": 2}
  },
  "preparation": {"type": "product"},
  "protocol": [
    {"type": "unitary", "op": {"partial_swap": {"dim": 2, "theta": 0.7853981633974483}},
     "factors": ["cold", "hot"]}
  ],
  "inequalities": ["entropic_form", "clausius", "clausius_strong"]
})json"},
      {"coupled-gibbs-cci", R"json({
  "name": "coupled-gibbs-cci",
  "seed": 11,
  "layout": [
    {"label": "hot", "kind": "microbath", "dim": 2, "beta": 1.0},
    {"label": "sys", "kind": "system", "dim": 2},
    {"label": "cold", "kind": "microbath", "dim": 2, "beta": 2.0}
  ],
  "hamiltonians": {
    "hot": {"generator": "number", "dim": 2},
    "sys": {"generator": "number", "dim": 2},
    "cold": {"generator": "number", "dim": 2}
  },
  "preparation": {"type": "coupled_gibbs", "hot": "hot",
                  "h_int0": {"generator": "swap", "dim": 2, "scale": 0.5}},
  "protocol": [{"type": "random_unitary"}],
  "inequalities": ["clausius", "cci", "cci_coupled_gibbs", "alpha_family"]
})json"},
      {"squeezed-passive-ci", R"json({
  "name": "squeezed-passive-ci",
  "seed": 3,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 2},
    {"label": "b1", "kind": "microbath", "dim": 2, "beta": 1.0}
  ],
  "hamiltonians": {
    "sys": {"generator": "number", "dim": 2},
    "b1": {"generator": "number", "dim": 2}
  },
  "preparation": {
    "type": "product",
    "system_state": {"diag": [0.8, 0.2]},
    "squeeze": {"b1": {"exp": {"hamiltonian": {"generator": "pauli_y"}, "time": 0.39269908169872414}}}
  },
  "protocol": [
    {"type": "unitary", "op": {"partial_swap": {"dim": 2, "theta": 0.9}},
     "factors": ["sys", "b1"]}
  ],
  "inequalities": ["entropic_form", "passive_ci", "clausius"]
})json"},
      {"ka-coherence", R"json({
  "name": "ka-coherence",
  "seed": 1,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 2},
    {"label": "b1", "kind": "microbath", "dim": 2, "beta": 1.0}
  ],
  "hamiltonians": {
    "sys": {"generator": "number", "dim": 2},
    "b1": {"generator": "number", "dim": 2}
  },
  "preparation": {"type": "product", "system_state": {"state": "plus", "dim": 2}},
  "protocol": [],
  "ka": {"temperature": 1.0},
  "inequalities": ["ka_coherence"]
})json"},
      {"cold-bath-deficiency", R"json({
  "name": "cold-bath-deficiency",
  "seed": 1,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 2},
    {"label": "b1", "kind": "microbath", "dim": 2, "beta": 50.0}
  ],
  "hamiltonians": {
    "sys": {"generator": "number", "dim": 2},
    "b1": {"generator": "number", "dim": 2}
  },
  "preparation": {"type": "product", "system_state": {"diag": [0.4, 0.6]}},
  "protocol": [
    {"type": "unitary", "op": {"partial_swap": {"dim": 2, "theta": 0.7853981633974483}},
     "factors": ["sys", "b1"]}
  ],
  "inequalities": ["clausius", "entropic_form"]
})json"},
      {"dephasing-deficiency", R"json({
  "name": "dephasing-deficiency",
  "seed": 1,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 2},
    {"label": "b1", "kind": "microbath", "dim": 2, "beta": 1.0}
  ],
  "hamiltonians": {
    "sys": {"generator": "pauli_z", "scale": 0.5},
    "b1": {"generator": "pauli_z", "scale": 0.5}
  },
  "preparation": {"type": "product", "system_state": {"state": "plus", "dim": 2}},
  "protocol": [
    {"type": "segment", "duration": 2.0,
     "h_int": {"op": {"matrix": [[0.8, 0, 0, 0], [0, -0.8, 0, 0], [0, 0, -0.8, 0], [0, 0, 0, 0.8]]},
               "factors": ["sys", "b1"]}}
  ],
  "inequalities": ["clausius", "entropic_form", "clausius_strong"]
})json"},
      {"stepwise-isotherm", R"json({
  "name": "stepwise-isotherm",
  "seed": 1,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 2}
  ],
  "hamiltonians": {
    "sys": {"diag": [0.0, 1.0]}
  },
  "preparation": {"type": "product",
                  "system_state": {"gibbs": {"hamiltonian": {"diag": [0.0, 1.0]}, "beta": 1.0}}},
  "protocol": [
    {"type": "stepwise_isotherm", "beta": 1.0, "steps": 8, "factor": "sys",
     "path": [{"diag": [0.0, 1.0]}, {"diag": [0.0, 2.0]}]}
  ],
  "inequalities": ["clausius", "free_energy_bound"],
  "sweep": {"param": "/protocol/0/steps", "grid": [2, 8, 32, 64]}
})json"},
      {"lazy-demon-sweep", R"json({
  "name": "lazy-demon-sweep",
  "seed": 1,
  "layout": [
    {"label": "c", "kind": "microbath", "dim": 2, "beta": 2.0},
    {"label": "h", "kind": "microbath", "dim": 2, "beta": 0.5}
  ],
  "hamiltonians": {
    "c": {"generator": "number", "dim": 2},
    "h": {"generator": "number", "dim": 2, "scale": 1.6}
  },
  "preparation": {"type": "product"},
  "feedback": {
    "duty": 1.0,
    "measured": ["c", "h"],
    "actions": [
      {"outcome": [1, 1],
       "op": {"matrix": [[0, 1], [1, 0]]},
       "factors": ["h"]}
    ],
    "asleep": [
      {"type": "unitary",
       "op": {"exp": {"hamiltonian": {"matrix": [[0,0,0,1],[0,0,1,0],[0,1,0,0],[1,0,0,0]]}, "time": 0.3}},
       "factors": ["c", "h"]}
    ]
  },
  "inequalities": ["clausius", "alpha_family"],
  "sweep": {"param": "/feedback/duty",
            "grid": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0]}
})json"},
      {"xmachine-qutrit", R"json({
  "name": "xmachine-qutrit",
  "seed": 5,
  "layout": [
    {"label": "sys", "kind": "system", "dim": 3},
    {"label": "s1", "kind": "microbath", "dim": 2, "beta": 1.0},
    {"label": "s2", "kind": "microbath", "dim": 2, "beta": 1.0},
    {"label": "s3", "kind": "microbath", "dim": 2, "beta": 1.0}
  ],
  "hamiltonians": {
    "sys": {"generator": "number", "dim": 3},
    "s1": {"generator": "number", "dim": 2},
    "s2": {"generator": "number", "dim": 2},
    "s3": {"generator": "number", "dim": 2}
  },
  "preparation": {"type": "product",
                  "system_state": {"gibbs": {"hamiltonian": {"generator": "number", "dim": 3}, "beta": 1.0}}},
  "protocol": [],
  "xmachine": {"target": {"op": {"diag": [0.0, 0.0, 1.0]}, "factors": ["sys"]}, "samples": 2000},
  "inequalities": ["xmachine"]
})json"},
  };
  return table;
}

} // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : builtin_table()) names.push_back(name);
  return names;
}

ScenarioSpec builtin_scenario(const std::string& name) {
  const auto& table = builtin_table();
  auto it = table.find(name);
  if (it == table.end()) {
    throw std::invalid_argument("unknown builtin scenario '" + name + "'");
  }
  return ScenarioSpec::from_json_text(it->second);
}

} // namespace qsl
