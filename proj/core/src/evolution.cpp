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

#include "qsl/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "qsl/passivity.hpp"

namespace qsl {

namespace {

constexpr std::size_t kMaxFlattenedBranches = 16384;

struct Flat {
  double p;
  Matrix u;
};

struct WalkState {
  std::optional<Matrix> h_sys_embedded; // current system Hamiltonian, full dim
  std::optional<HermitianOperator> h_sys_local;
  Matrix h_int; // current interaction term, full dim
};

Matrix bath_hamiltonian_sum(const PreparedSetup& setup) {
  const auto dims = setup.layout.dims();
  Matrix acc = Matrix::Zero(setup.layout.total_dim(), setup.layout.total_dim());
  for (std::size_t k : setup.layout.microbath_indices()) {
    const auto& f = setup.layout.factors()[k];
    acc += embed(setup.local_hamiltonian(f.label).matrix(), dims, {k});
  }
  return acc;
}

WalkState initial_walk_state(const PreparedSetup& setup) {
  WalkState w;
  if (auto sys = setup.layout.system_index()) {
    const auto& label = setup.layout.factors()[*sys].label;
    w.h_sys_local = setup.local_hamiltonian(label);
    w.h_sys_embedded = embed(w.h_sys_local->matrix(), setup.layout.dims(), {*sys});
  }
  w.h_int = setup.h_int0.matrix();
  return w;
}

Matrix segment_generator(const PreparedSetup& setup, const Matrix& baths, const WalkState& w) {
  Matrix g = baths + w.h_int;
  if (w.h_sys_embedded) g += *w.h_sys_embedded;
  return g;
}

Matrix segment_unitary(const Matrix& generator, double duration) {
  return hamiltonian_exponential(hermitian_unchecked(generator), duration).matrix();
}

void apply_quench(const PreparedSetup& setup, WalkState& w, const HermitianOperator& h_new) {
  const auto sys = setup.layout.system_index();
  if (!sys) throw std::invalid_argument("protocol: quench on a setup without a system factor");
  const auto& f = setup.layout.factors()[*sys];
  if (h_new.dim() != f.dim) {
    throw std::invalid_argument("protocol: quench Hamiltonian dimension mismatch");
  }
  w.h_sys_local = h_new;
  w.h_sys_embedded = embed(h_new.matrix(), setup.layout.dims(), {*sys});
}

void apply_interaction(const PreparedSetup& setup, WalkState& w, const HermitianOperator& h_int) {
  if (h_int.dim() != setup.layout.total_dim()) {
    throw std::invalid_argument("protocol: interaction term must act on the full setup");
  }
  w.h_int = h_int.matrix();
}

// Flattens a contact-free protocol into a (p, U) list per the mixture of
// unitaries picture, advancing the walk state through quenches. All mixture
// branches must leave the system Hamiltonian and interaction in the same
// place, otherwise the continuation would be ambiguous.
std::vector<Flat> flatten(const PreparedSetup& setup, const Matrix& baths, const Protocol& protocol,
                          WalkState& w) {
  std::vector<Flat> flats{
      {1.0, Matrix::Identity(setup.layout.total_dim(), setup.layout.total_dim())}};
  auto left_multiply = [&](const Matrix& u) {
    for (auto& f : flats) f.u = (u * f.u).eval();
  };

  for (const auto& step : protocol) {
    if (std::holds_alternative<SegmentStep>(step)) {
      const auto& seg = std::get<SegmentStep>(step);
      if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration)) {
        throw std::invalid_argument("protocol: segment duration must be finite and nonnegative");
      }
      if (seg.h_sys_local) apply_quench(setup, w, *seg.h_sys_local);
      if (seg.h_int_full) apply_interaction(setup, w, *seg.h_int_full);
      if (seg.duration > 0.0) {
        left_multiply(segment_unitary(segment_generator(setup, baths, w), seg.duration));
      }
    } else if (std::holds_alternative<QuenchStep>(step)) {
      apply_quench(setup, w, std::get<QuenchStep>(step).h_sys_local);
    } else if (std::holds_alternative<UnitaryStep>(step)) {
      const auto& u = std::get<UnitaryStep>(step).u;
      if (u.dim() != setup.layout.total_dim()) {
        throw std::invalid_argument("protocol: unitary dimension mismatch");
      }
      left_multiply(u.matrix());
    } else if (std::holds_alternative<MixtureStep>(step)) {
      const auto& mix = std::get<MixtureStep>(step);
      if (mix.branches.empty()) throw std::invalid_argument("protocol: empty mixture");
      double total_p = 0.0;
      std::vector<std::vector<Flat>> branch_flats;
      std::optional<WalkState> w_after;
      for (const auto& [p, branch] : mix.branches) {
        if (!(p > 0.0)) {
          throw std::invalid_argument("protocol: mixture probabilities must be positive");
        }
        total_p += p;
        WalkState wb = w;
        branch_flats.push_back(flatten(setup, baths, branch, wb));
        if (!w_after) {
          w_after = wb;
        } else {
          const bool sys_same =
              (!wb.h_sys_embedded && !w_after->h_sys_embedded) ||
              (wb.h_sys_embedded && w_after->h_sys_embedded &&
               (*wb.h_sys_embedded - *w_after->h_sys_embedded).cwiseAbs().maxCoeff() <= 1e-12);
          const bool int_same = (wb.h_int - w_after->h_int).cwiseAbs().maxCoeff() <= 1e-12;
          if (!sys_same || !int_same) {
            throw std::invalid_argument(
                "protocol: mixture branches leave different Hamiltonian schedules");
          }
        }
      }
      if (std::abs(total_p - 1.0) > 1e-12) {
        throw std::invalid_argument("protocol: mixture probabilities must sum to 1");
      }
      std::vector<Flat> combined;
      combined.reserve(flats.size() * branch_flats.size());
      for (std::size_t b = 0; b < branch_flats.size(); ++b) {
        for (const auto& bf : branch_flats[b]) {
          for (const auto& f : flats) {
            combined.push_back({mix.branches[b].first * bf.p, bf.u * f.u});
          }
        }
      }
      if (combined.size() > kMaxFlattenedBranches) {
        throw std::invalid_argument("protocol: mixture expansion too large");
      }
      w = *w_after;
      flats = std::move(combined);
    } else {
      throw std::invalid_argument(
          "protocol: bath contacts cannot appear inside a flattened (mixture/unitary) context");
    }
  }
  return flats;
}

Matrix apply_flats(const std::vector<Flat>& flats, const Matrix& state) {
  Matrix out = Matrix::Zero(state.rows(), state.cols());
  for (const auto& f : flats) {
    out += f.p * f.u * state * f.u.adjoint();
  }
  return out;
}

struct ContactOutcome {
  Matrix state_after;
  TransientBath record;
  bool factor_is_system = false;
};

ContactOutcome apply_contact(const PreparedSetup& setup, const BathContactStep& contact,
                             const Matrix& state) {
  const std::size_t idx = setup.layout.index_of(contact.factor);
  const Index fdim = setup.layout.factors()[idx].dim;
  const Index bdim = contact.h_bath.dim();
  if (contact.contact.dim() != bdim * fdim) {
    throw std::invalid_argument("bath contact: unitary must act on bath (x) factor");
  }
  if (!(contact.beta > 0.0) || !std::isfinite(contact.beta)) {
    throw std::invalid_argument("bath contact: beta must be positive and finite");
  }

  const DensityMatrix bath0 = gibbs_state(contact.h_bath, contact.beta);
  std::vector<Index> ext_dims;
  ext_dims.push_back(bdim);
  for (Index d : setup.layout.dims()) ext_dims.push_back(d);
  const Matrix u_full = embed(contact.contact.matrix(), ext_dims, {0, idx + 1});

  const Matrix joint0 = kron(bath0.matrix(), state);
  const Matrix joint1 = u_full * joint0 * u_full.adjoint();

  std::vector<std::size_t> keep_rest(setup.layout.dims().size());
  for (std::size_t k = 0; k < keep_rest.size(); ++k) keep_rest[k] = k + 1;

  ContactOutcome out{partial_trace_matrix(joint1, ext_dims, keep_rest), {}, false};

  const DensityMatrix bath1(partial_trace_matrix(joint1, ext_dims, {0}));
  out.record.beta = contact.beta;
  out.record.q = expectation(bath1, contact.h_bath) - expectation(bath0, contact.h_bath);
  out.record.passive_energy_change =
      passive_energy(bath1, contact.h_bath) - passive_energy(bath0, contact.h_bath);
  out.record.divergence = relative_entropy(bath1, bath0);

  const auto sys = setup.layout.system_index();
  out.factor_is_system = sys.has_value() && *sys == idx;
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Channels

QuantumChannel::QuantumChannel(DensityMatrix env_state, UnitaryOperator u)
    : env_state_(std::move(env_state)), u_(std::move(u)) {
  if (u_.dim() % env_state_.dim() != 0 || u_.dim() <= env_state_.dim()) {
    throw std::invalid_argument("QuantumChannel: unitary must act on env (x) sys");
  }
}

DensityMatrix apply_channel(const DensityMatrix& rho_sys, const QuantumChannel& ch) {
  if (rho_sys.dim() != ch.sys_dim()) {
    throw std::invalid_argument("apply_channel: dimension mismatch");
  }
  const Matrix joint = ch.unitary().matrix() * kron(ch.env_state().matrix(), rho_sys.matrix()) *
                       ch.unitary().matrix().adjoint();
  return DensityMatrix(partial_trace_matrix(joint, {ch.env_dim(), ch.sys_dim()}, {1}));
}

double fixed_point_residual(const QuantumChannel& ch, const DensityMatrix& candidate) {
  const DensityMatrix mapped = apply_channel(candidate, ch);
  return (mapped.matrix() - candidate.matrix()).norm();
}

std::pair<double, double> check_contractivity(const QuantumChannel& ch, const DensityMatrix& rho,
                                              const DensityMatrix& sigma) {
  const double before = relative_entropy(rho, sigma);
  const double after = relative_entropy(apply_channel(rho, ch), apply_channel(sigma, ch));
  return {before, after};
}

// ---------------------------------------------------------------------------
// Evolution

UnitaryOperator compile_unitary(const PreparedSetup& setup, const Protocol& protocol) {
  for (const auto& step : protocol) {
    if (std::holds_alternative<MixtureStep>(step) ||
        std::holds_alternative<BathContactStep>(step)) {
      throw std::invalid_argument("compile_unitary: protocol must be mixture- and contact-free");
    }
  }
  const Matrix baths = bath_hamiltonian_sum(setup);
  WalkState w = initial_walk_state(setup);
  auto flats = flatten(setup, baths, protocol, w);
  return UnitaryOperator(std::move(flats[0].u));
}

DensityMatrix evolve(const PreparedSetup& setup, const Protocol& protocol) {
  const Matrix baths = bath_hamiltonian_sum(setup);
  WalkState w = initial_walk_state(setup);
  Matrix state = setup.rho0.matrix();

  Protocol run;
  auto flush = [&]() {
    if (run.empty()) return;
    state = apply_flats(flatten(setup, baths, run, w), state);
    run.clear();
  };
  for (const auto& step : protocol) {
    if (std::holds_alternative<BathContactStep>(step)) {
      flush();
      state = apply_contact(setup, std::get<BathContactStep>(step), state).state_after;
    } else {
      run.push_back(step);
    }
  }
  flush();
  return DensityMatrix(std::move(state));
}

// ---------------------------------------------------------------------------
// Accounting

double AccountingLedger::sum_beta_q(const SetupLayout& layout) const {
  double total = 0.0;
  for (const auto& [label, qk] : q) {
    total += *layout.factor(label).beta * qk;
  }
  for (const auto& t : transient) total += t.beta * t.q;
  return total;
}

double AccountingLedger::extracted_work() const {
  double qsum = 0.0;
  for (const auto& [label, qk] : q) qsum += qk;
  for (const auto& t : transient) qsum += t.q;
  return -(delta_h_sys + qsum + delta_h_int);
}

AccountingLedger account(const PreparedSetup& setup, const Protocol& protocol) {
  const Matrix baths = bath_hamiltonian_sum(setup);
  const auto dims = setup.layout.dims();
  WalkState w = initial_walk_state(setup);
  Matrix state = setup.rho0.matrix();

  AccountingLedger ledger;
  const double e_sys_0 = w.h_sys_embedded ? expectation_matrix(state, *w.h_sys_embedded) : 0.0;
  const double e_int_0 = expectation_matrix(state, w.h_int);

  auto e_sys = [&]() {
    return w.h_sys_embedded ? expectation_matrix(state, *w.h_sys_embedded) : 0.0;
  };
  auto e_baths = [&]() { return expectation_matrix(state, baths); };
  auto e_int = [&]() { return expectation_matrix(state, w.h_int); };

  auto mark_unavailable = [&](const std::string& why) {
    if (ledger.split_available) {
      ledger.split_available = false;
      ledger.split_note = why;
    }
  };

  auto do_quench = [&](const HermitianOperator& h_new, bool interaction_active) {
    const Matrix old_h = w.h_sys_embedded ? *w.h_sys_embedded
                                          : Matrix::Zero(state.rows(), state.cols());
    apply_quench(setup, w, h_new);
    const double work = expectation_matrix(state, *w.h_sys_embedded - old_h);
    ledger.work_on_system += work;
    ledger.log.push_back({"quench", SegmentClass::adiabat, work, 0.0});
    if (interaction_active) {
      mark_unavailable("system drive while an interaction is active");
    }
  };

  auto do_interaction_switch = [&](const HermitianOperator& h_new) {
    const double work = expectation_matrix(state, h_new.matrix() - w.h_int);
    apply_interaction(setup, w, h_new);
    if (work != 0.0) {
      ledger.log.push_back({"coupling", SegmentClass::adiabat, work, 0.0});
    }
  };

  // Classifies an instantaneous CPTP kick (explicit unitary or mixture) by
  // where the declared energy moved.
  auto account_kick = [&](const std::vector<Flat>& flats, const char* kind) {
    const double es0 = e_sys(), eb0 = e_baths(), ei0 = e_int();
    state = apply_flats(flats, state);
    const double d_sys = e_sys() - es0;
    const double d_bath = e_baths() - eb0;
    const double d_int = e_int() - ei0;
    const double scale = 1e-9 * (1.0 + std::abs(d_sys) + std::abs(d_bath) + std::abs(d_int));
    SegmentRecord rec{kind, SegmentClass::unclassified, 0.0, 0.0};
    if (std::abs(d_int) <= scale && std::abs(d_sys + d_bath) <= scale) {
      // Energy-conserving exchange with the baths: isochore-like.
      rec.cls = SegmentClass::isochore;
      rec.heat = d_sys;
      ledger.heat_to_system += d_sys;
    } else if (std::abs(d_bath) <= scale && std::abs(d_int) <= scale) {
      // System-local drive: adiabat-like, the energy change is work.
      rec.cls = SegmentClass::adiabat;
      rec.work = d_sys;
      ledger.work_on_system += d_sys;
    } else {
      mark_unavailable("kick moves energy into the interaction term or spans both channels");
    }
    ledger.log.push_back(rec);
  };

  for (const auto& step : protocol) {
    if (std::holds_alternative<SegmentStep>(step)) {
      const auto& seg = std::get<SegmentStep>(step);
      if (seg.h_sys_local) {
        const bool interaction_on =
            seg.h_int_full ? !seg.h_int_full->is_zero(1e-15)
                           : w.h_int.cwiseAbs().maxCoeff() > 1e-15;
        if (w.h_sys_embedded) {
          const Matrix new_embedded =
              embed(seg.h_sys_local->matrix(), dims, {*setup.layout.system_index()});
          if ((new_embedded - *w.h_sys_embedded).cwiseAbs().maxCoeff() > 1e-15) {
            do_quench(*seg.h_sys_local, interaction_on);
          }
        } else {
          apply_quench(setup, w, *seg.h_sys_local); // throws: no system factor
        }
      }
      if (seg.h_int_full) do_interaction_switch(*seg.h_int_full);

      if (seg.duration > 0.0) {
        const double es0 = e_sys();
        const Matrix u = segment_unitary(segment_generator(setup, baths, w), seg.duration);
        state = (u * state * u.adjoint()).eval();
        const double d_sys = e_sys() - es0;
        const bool isochore = w.h_int.cwiseAbs().maxCoeff() > 1e-15;
        SegmentRecord rec{"segment", isochore ? SegmentClass::isochore : SegmentClass::adiabat,
                          0.0, isochore ? d_sys : 0.0};
        if (isochore) ledger.heat_to_system += d_sys;
        ledger.log.push_back(rec);
      }
    } else if (std::holds_alternative<QuenchStep>(step)) {
      const bool interaction_on = w.h_int.cwiseAbs().maxCoeff() > 1e-15;
      do_quench(std::get<QuenchStep>(step).h_sys_local, interaction_on);
    } else if (std::holds_alternative<UnitaryStep>(step)) {
      const auto& u = std::get<UnitaryStep>(step).u;
      if (u.dim() != setup.layout.total_dim()) {
        throw std::invalid_argument("protocol: unitary dimension mismatch");
      }
      account_kick({{1.0, u.matrix()}}, "unitary");
    } else if (std::holds_alternative<MixtureStep>(step)) {
      WalkState w_before = w;
      const Protocol single = {step};
      const auto flats = flatten(setup, baths, single, w);
      const bool quenched =
          w.h_sys_embedded && w_before.h_sys_embedded &&
          (*w.h_sys_embedded - *w_before.h_sys_embedded).cwiseAbs().maxCoeff() > 1e-12;
      if (quenched) {
        mark_unavailable("mixture branches drive the system Hamiltonian");
      }
      account_kick(flats, "mixture");
    } else {
      const auto& contact = std::get<BathContactStep>(step);
      const double es0 = e_sys(), ei0 = e_int();
      auto outcome = apply_contact(setup, contact, state);
      state = std::move(outcome.state_after);
      const double d_sys = e_sys() - es0;
      const double d_int = e_int() - ei0;
      const double scale = 1e-9 * (1.0 + std::abs(d_sys) + std::abs(outcome.record.q));
      SegmentRecord rec{"bath_contact", SegmentClass::unclassified, 0.0, 0.0};
      if (std::abs(d_int) <= scale && std::abs(d_sys + outcome.record.q) <= scale) {
        rec.cls = SegmentClass::isochore;
        rec.heat = d_sys;
        ledger.heat_to_system += d_sys;
      } else if (outcome.factor_is_system) {
        mark_unavailable("bath contact does not conserve declared energy");
      }
      ledger.transient.push_back(outcome.record);
      ledger.log.push_back(rec);
    }
  }

  ledger.delta_h_sys = e_sys() - e_sys_0;
  ledger.delta_h_int = e_int() - e_int_0;
  ledger.h_sys_final = w.h_sys_local;
  ledger.rho_final = DensityMatrix(state);

  // Persistent-bath energy changes from the endpoint reduced states; valid
  // because bath Hamiltonians are never driven.
  for (std::size_t k : setup.layout.microbath_indices()) {
    const auto& f = setup.layout.factors()[k];
    const Matrix h_embedded = embed(setup.local_hamiltonian(f.label).matrix(), dims, {k});
    ledger.q[f.label] = expectation_matrix(state, h_embedded) -
                        expectation_matrix(setup.rho0.matrix(), h_embedded);
  }
  return ledger;
}

Protocol stepwise_isotherm(const std::vector<HermitianOperator>& h_path, double beta, int steps,
                           const std::string& factor_label, double contact_angle) {
  if (h_path.empty()) throw std::invalid_argument("stepwise_isotherm: empty Hamiltonian path");
  if (steps < 1) throw std::invalid_argument("stepwise_isotherm: need at least one step");
  const Index d = h_path.front().dim();
  for (const auto& h : h_path) {
    if (h.dim() != d) throw std::invalid_argument("stepwise_isotherm: inhomogeneous path dims");
  }

  auto interpolate = [&](double s) -> HermitianOperator {
    if (h_path.size() == 1) return h_path.front();
    const double t = s * static_cast<double>(h_path.size() - 1);
    const auto j = static_cast<std::size_t>(
        std::min(t, static_cast<double>(h_path.size() - 2)));
    const double u = t - static_cast<double>(j);
    return hermitian_unchecked((1.0 - u) * h_path[j].matrix() + u * h_path[j + 1].matrix());
  };

  Protocol protocol;
  for (int i = 1; i <= steps; ++i) {
    const HermitianOperator h_i = interpolate(static_cast<double>(i) / steps);
    protocol.push_back(QuenchStep{h_i});
    protocol.push_back(BathContactStep{factor_label, h_i, beta, partial_swap(d, contact_angle)});
  }
  return protocol;
}

} // namespace qsl
