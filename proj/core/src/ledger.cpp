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

#include "qsl/ledger.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace qsl {

namespace {

struct BathTerm {
  std::string label;
  double beta = 0.0;
  double q = 0.0;
  double divergence = 0.0;
  double passive_change = 0.0;
};

std::vector<BathTerm> collect_bath_terms(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                         const AccountingLedger* acct, const Tolerances& tol) {
  std::vector<BathTerm> out;
  for (std::size_t k : setup.layout.microbath_indices()) {
    const Factor& f = setup.layout.factors()[k];
    const HermitianOperator& h = setup.local_hamiltonian(f.label);
    const DensityMatrix bath_f = setup.reduced(rho_f, f.label);
    const DensityMatrix bath_0 = setup.reduced(f.label);
    BathTerm t;
    t.label = f.label;
    t.beta = *f.beta;
    t.q = expectation(bath_f, h) - expectation(bath_0, h);
    t.divergence = relative_entropy(bath_f, bath_0, tol);
    t.passive_change = passive_energy(bath_f, h) - passive_energy(bath_0, h);
    out.push_back(std::move(t));
  }
  if (acct) {
    int i = 0;
    for (const auto& tr : acct->transient) {
      BathTerm t;
      t.label = "transient[" + std::to_string(i++) + "]";
      t.beta = tr.beta;
      t.q = tr.q;
      t.divergence = tr.divergence;
      t.passive_change = tr.passive_energy_change;
      out.push_back(std::move(t));
    }
  }
  return out;
}

double system_entropy_change(const PreparedSetup& setup, const DensityMatrix& rho_f,
                             const Tolerances& tol) {
  const auto sys = setup.layout.system_index();
  if (!sys) return 0.0;
  const auto& label = setup.layout.factors()[*sys].label;
  return vn_entropy(setup.reduced(rho_f, label), tol) - vn_entropy(setup.reduced(label), tol);
}

std::optional<HermitianOperator> minus_ln_full_rank(const DensityMatrix& rho,
                                                    const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  if (solver.eigenvalues().minCoeff() <= tol.eps_support) return std::nullopt;
  RealVector vals(solver.eigenvalues().size());
  for (Index i = 0; i < vals.size(); ++i) vals[i] = -std::log(solver.eigenvalues()[i]);
  return hermitian_unchecked(solver.eigenvectors() * vals.cast<Complex>().asDiagonal() *
                             solver.eigenvectors().adjoint());
}

double delta_expectation(const Matrix& rho_f, const Matrix& rho_0, const Matrix& x) {
  return ((rho_f - rho_0) * x).trace().real();
}

void finalize(InequalityReport& r, bool applicable, const std::string& note,
              const Tolerances& tol) {
  r.slack = r.lhs - r.rhs;
  if (!applicable) {
    r.verdict = Verdict::inapplicable;
    r.note = note;
  } else if (std::isnan(r.slack)) {
    r.verdict = Verdict::inapplicable;
    r.note = "non_finite_terms";
  } else {
    r.verdict = (r.slack >= -tol.slack) ? Verdict::holds : Verdict::violated;
  }
}

bool has_transient(const AccountingLedger* acct) {
  return acct != nullptr && !acct->transient.empty();
}

std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

} // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "unknown";
}

double InequalityReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms) {
    if (k == key) return v;
  }
  throw std::out_of_range("InequalityReport: no term named '" + key + "'");
}

// ---------------------------------------------------------------------------

InequalityReport entropic_form(const PreparedSetup& setup, const DensityMatrix& rho_f,
                               const Tolerances& tol) {
  InequalityReport r;
  r.name = "entropic_form";
  double sum = 0.0;
  for (const auto& f : setup.layout.factors()) {
    const double ds =
        vn_entropy(setup.reduced(rho_f, f.label), tol) - vn_entropy(setup.reduced(f.label), tol);
    r.terms.emplace_back("delta_S[" + f.label + "]", ds);
    sum += ds;
  }
  r.lhs = sum;
  r.rhs = 0.0;
  finalize(r, !setup.correlated, "correlated_initial_state", tol);
  return r;
}

InequalityReport clausius(const PreparedSetup& setup, const DensityMatrix& rho_f,
                          const AccountingLedger* acct, const Tolerances& tol) {
  InequalityReport r;
  r.name = "clausius";
  const double ds = system_entropy_change(setup, rho_f, tol);
  if (setup.layout.system_index()) r.terms.emplace_back("delta_S_sys", ds);
  double sum_beta_q = 0.0;
  for (const auto& t : collect_bath_terms(setup, rho_f, acct, tol)) {
    r.terms.emplace_back("beta_q[" + t.label + "]", t.beta * t.q);
    sum_beta_q += t.beta * t.q;
  }
  r.lhs = ds + sum_beta_q;
  r.rhs = 0.0;

  bool applicable = true;
  std::string note;
  if (setup.correlated) {
    applicable = false;
    note = "correlated_initial_state";
  } else if (!setup.squeezing.empty()) {
    applicable = false;
    note = "squeezed_bath_not_initially_thermal";
  }
  finalize(r, applicable, note, tol);
  return r;
}

InequalityReport clausius_strong(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                 const AccountingLedger* acct, const Tolerances& tol) {
  InequalityReport r;
  r.name = "clausius_strong";
  const double ds = system_entropy_change(setup, rho_f, tol);
  if (setup.layout.system_index()) r.terms.emplace_back("delta_S_sys", ds);
  double sum_beta_q = 0.0, sum_div = 0.0;
  bool divergence_finite = true;
  for (const auto& t : collect_bath_terms(setup, rho_f, acct, tol)) {
    r.terms.emplace_back("beta_q[" + t.label + "]", t.beta * t.q);
    r.terms.emplace_back("D[" + t.label + "]", t.divergence);
    sum_beta_q += t.beta * t.q;
    sum_div += t.divergence;
    if (!std::isfinite(t.divergence)) divergence_finite = false;
  }
  r.lhs = ds + sum_beta_q;
  r.rhs = sum_div;

  bool applicable = true;
  std::string note;
  if (setup.correlated) {
    applicable = false;
    note = "correlated_initial_state";
  } else if (!setup.squeezing.empty()) {
    applicable = false;
    note = "squeezed_bath_not_initially_thermal";
  } else if (!divergence_finite) {
    applicable = false;
    note = "infinite_bath_divergence";
  }
  finalize(r, applicable, note, tol);
  return r;
}

InequalityReport observable_ci(const PreparedSetup& setup, const DensityMatrix& rho_f,
                               const AccountingLedger* acct, const Tolerances& tol) {
  InequalityReport r;
  r.name = "observable_ci";
  const auto sys = setup.layout.system_index();
  bool applicable = true;
  std::string note;

  double delta_b_sys = 0.0;
  if (sys) {
    const auto& label = setup.layout.factors()[*sys].label;
    const DensityMatrix sys0 = setup.reduced(label);
    const auto b_sys = minus_ln_full_rank(sys0, tol);
    if (!b_sys) {
      applicable = false;
      note = "rank_deficient_system_state";
    } else {
      delta_b_sys = delta_expectation(setup.reduced(rho_f, label).matrix(), sys0.matrix(),
                                      b_sys->matrix());
      r.terms.emplace_back("delta_B_sys", delta_b_sys);
    }
  }
  double sum_beta_q = 0.0;
  for (const auto& t : collect_bath_terms(setup, rho_f, acct, tol)) {
    r.terms.emplace_back("beta_q[" + t.label + "]", t.beta * t.q);
    sum_beta_q += t.beta * t.q;
  }
  r.lhs = delta_b_sys + sum_beta_q;
  r.rhs = 0.0;

  if (applicable && setup.correlated) {
    applicable = false;
    note = "correlated_initial_state";
  } else if (applicable && !setup.squeezing.empty()) {
    applicable = false;
    note = "squeezed_bath_not_initially_thermal";
  }
  finalize(r, applicable, note, tol);
  return r;
}

namespace {

// Shared machinery of the B_tot-based reports. Transient baths extend the
// setup: for alpha = 1 operators they contribute exactly sum beta_tr q_tr,
// for alpha != 1 the traced-out bath makes the report inapplicable.
struct BTotContext {
  bool ok = false;
  std::string note;
  double delta_b_tot = 0.0;          // persistent-part Delta<B_tot>
  double transient_beta_q = 0.0;     // extension terms (alpha = 1 only)
  HermitianOperator b_tot = HermitianOperator::zero(1);
};

BTotContext make_btot(const PreparedSetup& setup, const DensityMatrix& rho_f,
                      const AccountingLedger* acct, const Tolerances& tol) {
  BTotContext ctx;
  const auto b_tot = minus_ln_full_rank(setup.rho0, tol);
  if (!b_tot) {
    ctx.note = "rank_deficient_total_state";
    return ctx;
  }
  ctx.b_tot = *b_tot;
  ctx.delta_b_tot = delta_expectation(rho_f.matrix(), setup.rho0.matrix(), b_tot->matrix());
  if (has_transient(acct)) {
    for (const auto& t : acct->transient) ctx.transient_beta_q += t.beta * t.q;
  }
  ctx.ok = true;
  return ctx;
}

} // namespace

InequalityReport cci(const PreparedSetup& setup, const DensityMatrix& rho_f,
                     const AccountingLedger* acct, const Tolerances& tol) {
  InequalityReport r;
  r.name = "cci";
  const auto sys = setup.layout.system_index();
  if (!sys) {
    throw std::invalid_argument("cci: layout has no system factor to compare against");
  }
  const auto& sys_label = setup.layout.factors()[*sys].label;

  auto ctx = make_btot(setup, rho_f, acct, tol);
  if (!ctx.ok) {
    r.lhs = std::numeric_limits<double>::quiet_NaN();
    finalize(r, false, ctx.note, tol);
    return r;
  }

  const DensityMatrix sys0 = setup.reduced(sys_label);
  const auto b_sys = minus_ln_full_rank(sys0, tol);
  if (!b_sys) {
    r.lhs = std::numeric_limits<double>::quiet_NaN();
    finalize(r, false, "rank_deficient_system_state", tol);
    return r;
  }
  const DensityMatrix sys_f = setup.reduced(rho_f, sys_label);
  const double ds = vn_entropy(sys_f, tol) - vn_entropy(sys0, tol);
  const double delta_b_tot = ctx.delta_b_tot + ctx.transient_beta_q;
  const double delta_b_sys = delta_expectation(sys_f.matrix(), sys0.matrix(), b_sys->matrix());

  r.terms.emplace_back("delta_S_sys", ds);
  r.terms.emplace_back("delta_B_tot", delta_b_tot);
  r.terms.emplace_back("delta_B_sys", delta_b_sys);
  if (ctx.transient_beta_q != 0.0) {
    r.terms.emplace_back("transient_beta_q", ctx.transient_beta_q);
  }

  // Informational Eq.-style split into environment and correlation operators
  // (identically zero correlation part for product preparations).
  const auto dims = setup.layout.dims();
  std::vector<std::size_t> env_factors;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k != *sys) env_factors.push_back(k);
  }
  if (!env_factors.empty()) {
    const DensityMatrix env0(partial_trace_matrix(setup.rho0.matrix(), dims, env_factors));
    if (const auto b_env = minus_ln_full_rank(env0, tol)) {
      const Matrix b_env_full = embed(b_env->matrix(), dims, env_factors);
      const Matrix b_sys_full = embed(b_sys->matrix(), dims, {*sys});
      const Matrix b_corr = ctx.b_tot.matrix() - b_env_full - b_sys_full;
      const double delta_b_env =
          delta_expectation(rho_f.matrix(), setup.rho0.matrix(), b_env_full);
      r.terms.emplace_back("delta_B_env", delta_b_env + ctx.transient_beta_q);
      r.terms.emplace_back("delta_B_corr",
                           delta_expectation(rho_f.matrix(), setup.rho0.matrix(), b_corr));
      r.terms.emplace_back("B_corr_t0", expectation_matrix(setup.rho0.matrix(), b_corr));
    }
  }

  r.lhs = ds + delta_b_tot - delta_b_sys;
  r.rhs = 0.0;
  finalize(r, true, "", tol);
  return r;
}

InequalityReport cci_coupled_gibbs(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                   const Tolerances& tol) {
  if (setup.preparation != PreparationKind::coupled_gibbs || !setup.hot_label) {
    throw std::invalid_argument("cci_coupled_gibbs: setup was not built by "
                                "build_coupled_gibbs_setup");
  }
  InequalityReport r;
  r.name = "cci_coupled_gibbs";
  const auto sys = *setup.layout.system_index();
  const auto& sys_label = setup.layout.factors()[sys].label;
  const double beta_h = *setup.layout.factor(*setup.hot_label).beta;

  const double ds = system_entropy_change(setup, rho_f, tol);
  r.terms.emplace_back("delta_S_sys", ds);

  double bare = 0.0;
  for (const auto& t : collect_bath_terms(setup, rho_f, nullptr, tol)) {
    r.terms.emplace_back("beta_q[" + t.label + "]", t.beta * t.q);
    bare += t.beta * t.q;
  }

  const double d_int = delta_expectation(rho_f.matrix(), setup.rho0.matrix(),
                                         setup.h_int0.matrix());
  r.terms.emplace_back("beta_h_delta_H_int0", beta_h * d_int);

  const HermitianOperator h_eff = effective_hamiltonian(setup);
  const Matrix dressing =
      embed(setup.local_hamiltonian(sys_label).matrix() - h_eff.matrix(), setup.layout.dims(),
            {sys});
  const double d_dress = delta_expectation(rho_f.matrix(), setup.rho0.matrix(), dressing);
  r.terms.emplace_back("beta_h_delta_dressing", beta_h * d_dress);

  r.lhs = ds + bare + beta_h * d_int + beta_h * d_dress;
  r.rhs = 0.0;
  finalize(r, true, "", tol);
  return r;
}

InequalityReport passive_ci(const PreparedSetup& setup, const DensityMatrix& rho_f,
                            const AccountingLedger* acct, const Tolerances& tol) {
  InequalityReport r;
  r.name = "passive_ci";
  const double ds = system_entropy_change(setup, rho_f, tol);
  if (setup.layout.system_index()) r.terms.emplace_back("delta_S_sys", ds);
  double sum = 0.0;
  for (const auto& t : collect_bath_terms(setup, rho_f, acct, tol)) {
    r.terms.emplace_back("beta_dE_passive[" + t.label + "]", t.beta * t.passive_change);
    sum += t.beta * t.passive_change;
  }
  r.lhs = ds + sum;
  r.rhs = 0.0;
  finalize(r, !setup.correlated, "correlated_initial_state", tol);
  return r;
}

std::vector<InequalityReport> alpha_family(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                           const std::vector<double>& alpha_grid,
                                           const AccountingLedger* acct, const Tolerances& tol) {
  std::vector<InequalityReport> out;
  const bool transient = has_transient(acct);
  for (double alpha : alpha_grid) {
    InequalityReport r;
    r.name = "global_passivity_alpha_" + format_alpha(alpha);
    r.terms.emplace_back("alpha", alpha);
    bool applicable = true;
    std::string note;
    if (!(alpha > 0.0)) {
      applicable = false;
      note = "nonpositive_alpha";
      r.lhs = std::numeric_limits<double>::quiet_NaN();
    } else if (transient && alpha != 1.0) {
      applicable = false;
      note = "transient_baths_outside_setup";
      r.lhs = std::numeric_limits<double>::quiet_NaN();
    } else {
      try {
        const auto b = global_passivity_operator(setup.rho0, alpha, RankPolicy::strict, tol);
        double delta = delta_expectation(rho_f.matrix(), setup.rho0.matrix(), b.b.matrix());
        if (transient && alpha == 1.0) {
          for (const auto& t : acct->transient) delta += t.beta * t.q;
        }
        r.terms.emplace_back("delta_B_alpha", delta);
        r.lhs = delta;
      } catch (const std::domain_error&) {
        applicable = false;
        note = "rank_deficient_total_state";
        r.lhs = std::numeric_limits<double>::quiet_NaN();
      }
    }
    r.rhs = 0.0;
    finalize(r, applicable, note, tol);
    out.push_back(std::move(r));
  }
  return out;
}

InequalityReport passivity_divergence(const PreparedSetup& setup, const DensityMatrix& rho_f,
                                      const AccountingLedger* acct, const Tolerances& tol) {
  InequalityReport r;
  r.name = "passivity_divergence";
  if (has_transient(acct)) {
    r.lhs = std::numeric_limits<double>::quiet_NaN();
    finalize(r, false, "transient_baths_outside_setup", tol);
    return r;
  }
  auto ctx = make_btot(setup, rho_f, nullptr, tol);
  if (!ctx.ok) {
    r.lhs = std::numeric_limits<double>::quiet_NaN();
    finalize(r, false, ctx.note, tol);
    return r;
  }
  r.terms.emplace_back("delta_B_tot", ctx.delta_b_tot);
  const double div = relative_entropy(rho_f, setup.rho0, tol);
  r.terms.emplace_back("D_tot", div);
  r.lhs = ctx.delta_b_tot;
  r.rhs = div;
  finalize(r, std::isfinite(div), "infinite_total_divergence", tol);
  return r;
}

InequalityReport free_energy_bound(const PreparedSetup& setup, const AccountingLedger& acct,
                                   const Tolerances& tol) {
  InequalityReport r;
  r.name = "free_energy_bound";
  if (!acct.rho_final) {
    throw std::invalid_argument("free_energy_bound: accounting ledger has no final state");
  }
  const auto sys = setup.layout.system_index();
  if (!sys) throw std::invalid_argument("free_energy_bound: no system factor");

  bool applicable = true;
  std::string note;

  std::vector<double> betas;
  for (std::size_t k : setup.layout.microbath_indices()) {
    betas.push_back(*setup.layout.factors()[k].beta);
  }
  for (const auto& t : acct.transient) betas.push_back(t.beta);
  if (betas.empty()) {
    applicable = false;
    note = "no_bath";
  } else {
    for (double b : betas) {
      if (std::abs(b - betas.front()) > 1e-12) {
        applicable = false;
        note = "multiple_bath_temperatures";
        break;
      }
    }
  }
  if (applicable && !acct.split_available) {
    applicable = false;
    note = "no_wq_split: " + acct.split_note;
  }
  if (applicable && (std::abs(acct.delta_h_int) > tol.energy ||
                     !setup.h_int0.is_zero(tol.energy))) {
    applicable = false;
    note = "endpoint_interaction_energy";
  }

  const double temperature = betas.empty() ? 0.0 : 1.0 / betas.front();
  const auto& sys_label = setup.layout.factors()[*sys].label;
  const double ds = vn_entropy(setup.reduced(*acct.rho_final, sys_label), tol) -
                    vn_entropy(setup.reduced(sys_label), tol);
  const double delta_f = acct.delta_h_sys - temperature * ds;
  const double w = acct.extracted_work();

  r.terms.emplace_back("W_extracted", w);
  r.terms.emplace_back("minus_delta_F", -delta_f);
  r.terms.emplace_back("delta_H_sys", acct.delta_h_sys);
  r.terms.emplace_back("T_delta_S_sys", temperature * ds);
  r.lhs = -delta_f;
  r.rhs = w;
  finalize(r, applicable, note, tol);
  return r;
}

KaCoherenceResult ka_coherence_work(const DensityMatrix& rho_i, const HermitianOperator& h_s,
                                    double temperature, const Tolerances& tol) {
  if (rho_i.dim() != h_s.dim()) {
    throw std::invalid_argument("ka_coherence_work: dimension mismatch");
  }
  // Dephase in the eigenbasis of h_s (for degenerate spectra this fixes the
  // solver's basis; the protocol is defined relative to that choice).
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h_s.matrix());
  const Matrix v = solver.eigenvectors();
  const Matrix in_basis = v.adjoint() * rho_i.matrix() * v;
  const Matrix dephased_basis = in_basis.diagonal().asDiagonal();
  DensityMatrix dephased(v * dephased_basis * v.adjoint());

  KaCoherenceResult out{0.0, 0.0, 0.0, dephased};
  out.delta_s_entropy_route = vn_entropy(dephased, tol) - vn_entropy(rho_i, tol);
  out.delta_s_divergence_route = relative_entropy(rho_i, dephased, tol);
  out.w_rev = temperature * out.delta_s_entropy_route;
  return out;
}

InequalityReport bq_bound(const DensityMatrix& rho0_sys, const QuantumChannel& ch, double beta,
                          const Tolerances& tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("bq_bound: beta must be positive and finite");
  }
  if (rho0_sys.dim() != ch.sys_dim()) {
    throw std::invalid_argument("bq_bound: system state does not match the channel");
  }
  InequalityReport r;
  r.name = "bq_bound";

  // Recover the environment Hamiltonian from its thermal state.
  const auto minus_ln_env = minus_ln_full_rank(ch.env_state(), tol);
  if (!minus_ln_env) {
    throw std::domain_error("bq_bound: environment state is not full rank (not thermal)");
  }
  const HermitianOperator h_env = hermitian_unchecked(minus_ln_env->matrix() / beta);

  const std::vector<Index> dims = {ch.env_dim(), ch.sys_dim()};
  const Matrix joint0 = kron(ch.env_state().matrix(), rho0_sys.matrix());
  const Matrix joint1 = ch.unitary().matrix() * joint0 * ch.unitary().matrix().adjoint();
  const Matrix env1 = partial_trace_matrix(joint1, dims, {0});
  const double q = expectation_matrix(env1, h_env.matrix()) -
                   expectation_matrix(ch.env_state().matrix(), h_env.matrix());

  // M = tr_E[U (rho_env (x) I_sys) U^dag], the unnormalized identity-input
  // evolution of the dilation.
  const Matrix id_in = kron(ch.env_state().matrix(),
                            Matrix::Identity(ch.sys_dim(), ch.sys_dim()));
  const Matrix m = partial_trace_matrix(
      ch.unitary().matrix() * id_in * ch.unitary().matrix().adjoint(), dims, {1});
  const double tr_m_rho = (m * rho0_sys.matrix()).trace().real();

  r.terms.emplace_back("beta_q", beta * q);
  r.terms.emplace_back("tr_M_rho0", tr_m_rho);

  bool applicable = true;
  std::string note;
  double b_q = std::numeric_limits<double>::quiet_NaN();
  if (tr_m_rho <= tol.eps_support) {
    applicable = false;
    note = "nonpositive_tr_M_rho0";
  } else {
    b_q = -std::log(tr_m_rho);
    r.terms.emplace_back("B_Q", b_q);
    r.terms.emplace_back("B_Q_normalized_identity",
                         b_q + std::log(static_cast<double>(ch.sys_dim())));
  }
  r.lhs = beta * q;
  r.rhs = b_q;
  finalize(r, applicable, note, tol);
  return r;
}

std::string to_string(DemonVerdict::Kind kind) {
  switch (kind) {
    case DemonVerdict::Kind::none_detected: return "none_detected";
    case DemonVerdict::Kind::ci_violation: return "ci_violation";
    case DemonVerdict::Kind::alpha_violation: return "alpha_violation";
  }
  return "unknown";
}

DemonVerdict demon_verdict(const std::vector<InequalityReport>& reports) {
  const InequalityReport* ci = nullptr;
  std::vector<const InequalityReport*> alphas;
  for (const auto& r : reports) {
    if (r.name == "clausius") ci = &r;
    if (r.name.rfind("global_passivity_alpha_", 0) == 0) alphas.push_back(&r);
  }
  if (!ci || alphas.empty()) {
    throw std::invalid_argument("demon_verdict: need the clausius report and an alpha family");
  }
  DemonVerdict out;
  if (ci->verdict == Verdict::violated) {
    out.kind = DemonVerdict::Kind::ci_violation;
    out.minimal_violated = ci->name;
    return out;
  }
  for (const auto* a : alphas) {
    if (a->verdict == Verdict::violated) {
      out.violated_alphas.push_back(a->term("alpha"));
      if (out.minimal_violated.empty()) out.minimal_violated = a->name;
    }
  }
  if (!out.violated_alphas.empty()) {
    out.kind = DemonVerdict::Kind::alpha_violation;
  }
  return out;
}

} // namespace qsl
