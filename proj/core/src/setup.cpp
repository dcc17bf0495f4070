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

#include "qsl/setup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsl {

SetupLayout::SetupLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("SetupLayout: no factors");
  std::size_t systems = 0;
  for (const auto& f : factors_) {
    if (f.dim <= 0) throw std::invalid_argument("SetupLayout: nonpositive factor dimension");
    if (f.kind == FactorKind::system) {
      ++systems;
      if (f.beta.has_value()) {
        throw std::invalid_argument("SetupLayout: system factor must not carry beta");
      }
    } else if (!f.beta.has_value() || !(*f.beta > 0.0) || !std::isfinite(*f.beta)) {
      throw std::invalid_argument("SetupLayout: microbath '" + f.label +
                                  "' needs a positive finite beta");
    }
    for (const auto& g : factors_) {
      if (&f != &g && f.label == g.label) {
        throw std::invalid_argument("SetupLayout: duplicate label '" + f.label + "'");
      }
    }
  }
  if (systems > 1) {
    throw std::invalid_argument("SetupLayout: at most one system factor per scenario");
  }
  if (total_dim() > kMaxTotalDimension) {
    throw std::invalid_argument("SetupLayout: total dimension exceeds the supported maximum");
  }
}

const Factor& SetupLayout::factor(std::string_view label) const {
  return factors_[index_of(label)];
}

std::size_t SetupLayout::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].label == label) return k;
  }
  throw std::invalid_argument("SetupLayout: unknown label '" + std::string(label) + "'");
}

bool SetupLayout::has(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

Index SetupLayout::total_dim() const {
  Index d = 1;
  for (const auto& f : factors_) d *= f.dim;
  return d;
}

std::vector<Index> SetupLayout::dims() const {
  std::vector<Index> d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.dim);
  return d;
}

std::optional<std::size_t> SetupLayout::system_index() const {
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].kind == FactorKind::system) return k;
  }
  return std::nullopt;
}

std::vector<std::size_t> SetupLayout::microbath_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].kind == FactorKind::microbath) out.push_back(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PreparedSetup helpers

const HermitianOperator& PreparedSetup::local_hamiltonian(std::string_view label) const {
  auto it = local_hamiltonians.find(std::string(label));
  if (it == local_hamiltonians.end()) {
    throw std::invalid_argument("PreparedSetup: no Hamiltonian for '" + std::string(label) + "'");
  }
  return it->second;
}

HermitianOperator PreparedSetup::embedded_hamiltonian(std::string_view label) const {
  return embed(local_hamiltonian(label), layout.dims(), {layout.index_of(label)});
}

HermitianOperator PreparedSetup::total_hamiltonian() const {
  Matrix acc = h_int0.matrix();
  for (const auto& f : layout.factors()) {
    acc += embedded_hamiltonian(f.label).matrix();
  }
  return hermitian_unchecked(std::move(acc));
}

DensityMatrix PreparedSetup::reduced(std::string_view label) const {
  return reduced(rho0, label);
}

DensityMatrix PreparedSetup::reduced(const DensityMatrix& state, std::string_view label) const {
  return partial_trace(state, layout.dims(), {layout.index_of(label)});
}

// ---------------------------------------------------------------------------
// Preparations

DensityMatrix gibbs_state(const HermitianOperator& h, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("gibbs_state: beta must be positive and finite");
  }
  auto s = spectral(h);
  const double ground = s.eigenvalues.minCoeff();
  RealVector weights(s.eigenvalues.size());
  for (Index i = 0; i < weights.size(); ++i) {
    weights[i] = std::exp(-beta * (s.eigenvalues[i] - ground));
  }
  weights /= weights.sum();
  Matrix rho = s.eigenvectors * weights.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
  return DensityMatrix(std::move(rho));
}

namespace {

void require_hamiltonians(const SetupLayout& layout,
                          const std::map<std::string, HermitianOperator>& hams) {
  for (const auto& f : layout.factors()) {
    auto it = hams.find(f.label);
    if (it == hams.end()) {
      throw std::invalid_argument("setup: missing Hamiltonian for factor '" + f.label + "'");
    }
    if (it->second.dim() != f.dim) {
      throw std::invalid_argument("setup: Hamiltonian dimension mismatch for '" + f.label + "'");
    }
  }
}

} // namespace

PreparedSetup build_product_setup(const SetupLayout& layout,
                                  const std::optional<DensityMatrix>& system_state,
                                  const std::map<std::string, HermitianOperator>& hamiltonians) {
  require_hamiltonians(layout, hamiltonians);
  const auto sys = layout.system_index();
  if (sys.has_value() && !system_state.has_value()) {
    throw std::invalid_argument("build_product_setup: layout has a system but no state given");
  }
  if (!sys.has_value() && system_state.has_value()) {
    throw std::invalid_argument("build_product_setup: system state given for a bath-only layout");
  }

  std::vector<DensityMatrix> parts;
  parts.reserve(layout.factors().size());
  for (std::size_t k = 0; k < layout.factors().size(); ++k) {
    const Factor& f = layout.factors()[k];
    if (f.kind == FactorKind::system) {
      if (system_state->dim() != f.dim) {
        throw std::invalid_argument("build_product_setup: system state dimension mismatch");
      }
      parts.push_back(*system_state);
    } else {
      parts.push_back(gibbs_state(hamiltonians.at(f.label), *f.beta));
    }
  }

  PreparedSetup out{layout,
                    tensor(std::span<const DensityMatrix>(parts.data(), parts.size())),
                    hamiltonians,
                    HermitianOperator::zero(layout.total_dim()),
                    /*correlated=*/false,
                    PreparationKind::product,
                    std::nullopt,
                    {}};
  return out;
}

PreparedSetup build_coupled_gibbs_setup(const SetupLayout& layout, std::string_view hot_label,
                                        const HermitianOperator& h_int0_local,
                                        const std::map<std::string, HermitianOperator>& hamiltonians) {
  require_hamiltonians(layout, hamiltonians);
  const auto sys = layout.system_index();
  if (!sys.has_value()) {
    throw std::invalid_argument("build_coupled_gibbs_setup: layout has no system factor");
  }
  const std::size_t hot = layout.index_of(hot_label);
  if (layout.factors()[hot].kind != FactorKind::microbath) {
    throw std::invalid_argument("build_coupled_gibbs_setup: hot label is not a microbath");
  }
  const double beta_h = *layout.factors()[hot].beta;

  // Factors of the joint (hot, sys) block, in layout order.
  std::vector<std::size_t> block = {hot, *sys};
  std::sort(block.begin(), block.end());
  const Index block_dim = layout.factors()[block[0]].dim * layout.factors()[block[1]].dim;
  if (h_int0_local.dim() != block_dim) {
    throw std::invalid_argument("build_coupled_gibbs_setup: H_int0 must act on hot (x) system");
  }

  std::vector<Index> block_dims = {layout.factors()[block[0]].dim, layout.factors()[block[1]].dim};
  Matrix joint_h = embed(hamiltonians.at(layout.factors()[block[0]].label).matrix(), block_dims, {0}) +
                   embed(hamiltonians.at(layout.factors()[block[1]].label).matrix(), block_dims, {1}) +
                   h_int0_local.matrix();
  const DensityMatrix joint = gibbs_state(hermitian_unchecked(std::move(joint_h)), beta_h);

  // Remaining factors are ordinary Gibbs microbaths; assemble in layout order,
  // treating the coupled block as one slot at the position of its first factor.
  std::vector<DensityMatrix> parts;
  for (std::size_t k = 0; k < layout.factors().size(); ++k) {
    if (k == block[0]) {
      parts.push_back(joint);
    } else if (k == block[1]) {
      continue;
    } else {
      const Factor& f = layout.factors()[k];
      if (f.kind == FactorKind::system) {
        throw std::invalid_argument("build_coupled_gibbs_setup: system must sit in the block");
      }
      parts.push_back(gibbs_state(hamiltonians.at(f.label), *f.beta));
    }
  }
  // The block occupies two adjacent layout slots only when block[1] == block[0]+1;
  // otherwise the plain Kronecker fold would misplace factors.
  if (block[1] != block[0] + 1) {
    throw std::invalid_argument(
        "build_coupled_gibbs_setup: hot bath and system must be adjacent in the layout");
  }
  DensityMatrix rho0 = tensor(std::span<const DensityMatrix>(parts.data(), parts.size()));

  // Correlation flag from the factorization residual of the (hot, sys) block.
  const std::vector<Index> dims = layout.dims();
  const Matrix red_hot = partial_trace_matrix(rho0.matrix(), dims, {hot});
  const Matrix red_sys = partial_trace_matrix(rho0.matrix(), dims, {*sys});
  const Matrix joint_red = partial_trace_matrix(rho0.matrix(), dims, {block[0], block[1]});
  const Matrix product =
      (block[0] == hot) ? kron(red_hot, red_sys) : kron(red_sys, red_hot);
  const bool correlated = (joint_red - product).cwiseAbs().maxCoeff() > 1e-9;

  PreparedSetup out{layout,
                    std::move(rho0),
                    hamiltonians,
                    embed(h_int0_local, dims, {block[0], block[1]}),
                    correlated,
                    PreparationKind::coupled_gibbs,
                    std::string(hot_label),
                    {}};
  return out;
}

HermitianOperator effective_hamiltonian(const PreparedSetup& prepared) {
  const auto sys = prepared.layout.system_index();
  if (!sys.has_value()) {
    throw std::invalid_argument("effective_hamiltonian: no system factor");
  }
  double beta = 1.0;
  if (prepared.preparation == PreparationKind::coupled_gibbs) {
    beta = *prepared.layout.factors()[prepared.layout.index_of(*prepared.hot_label)].beta;
  } else if (!prepared.layout.microbath_indices().empty()) {
    beta = *prepared.layout.factors()[prepared.layout.microbath_indices()[0]].beta;
  }

  const DensityMatrix rho_sys = prepared.reduced(prepared.layout.factors()[*sys].label);
  const Spectrum s = spectral(rho_sys);
  Tolerances tol;
  if (s.eigenvalues.minCoeff() <= tol.eps_support) {
    throw std::domain_error("effective_hamiltonian: reduced system state is rank deficient");
  }
  RealVector levels(s.eigenvalues.size());
  for (Index i = 0; i < levels.size(); ++i) {
    levels[i] = -std::log(s.eigenvalues[i]) / beta;
  }
  levels.array() -= levels.minCoeff(); // gauge: lowest level at 0
  Matrix h = s.eigenvectors * levels.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
  return hermitian_unchecked(std::move(h));
}

PreparedSetup squeeze_microbath(const PreparedSetup& prepared, std::string_view label,
                                const UnitaryOperator& u_local) {
  const std::size_t idx = prepared.layout.index_of(label);
  const Factor& f = prepared.layout.factors()[idx];
  if (f.kind != FactorKind::microbath) {
    throw std::invalid_argument("squeeze_microbath: '" + std::string(label) +
                                "' is not a microbath");
  }
  if (prepared.preparation != PreparationKind::product) {
    throw std::invalid_argument("squeeze_microbath: only product preparations can be squeezed");
  }
  if (u_local.dim() != f.dim) {
    throw std::invalid_argument("squeeze_microbath: unitary dimension mismatch");
  }
  const Matrix u_full = embed(u_local.matrix(), prepared.layout.dims(), {idx});
  PreparedSetup out = prepared;
  out.rho0 = DensityMatrix(u_full * prepared.rho0.matrix() * u_full.adjoint());
  auto [it, inserted] = out.squeezing.insert_or_assign(std::string(label), u_local);
  (void)it;
  (void)inserted;
  return out;
}

EffectiveTemperature effective_temperature(const DensityMatrix& rho, const HermitianOperator& h,
                                           const Tolerances& tol) {
  if (rho.dim() != h.dim()) {
    throw std::invalid_argument("effective_temperature: dimension mismatch");
  }
  const double target = vn_entropy(rho, tol);
  const double s_max = std::log(static_cast<double>(rho.dim()));
  const double eps = 1e-9;
  if (target < eps) {
    return {std::numeric_limits<double>::infinity(), EffectiveTemperature::Boundary::frozen};
  }
  if (target > s_max - eps) {
    return {0.0, EffectiveTemperature::Boundary::maximally_mixed};
  }

  auto entropy_at = [&](double beta) { return vn_entropy(gibbs_state(h, beta), tol); };
  double lo = 1e-6, hi = 1e6;
  double s_lo = entropy_at(lo), s_hi = entropy_at(hi);
  if (!(s_lo >= s_hi)) {
    throw std::runtime_error("effective_temperature: Gibbs entropy is not monotone in beta");
  }
  if (target > s_lo) {
    return {lo, EffectiveTemperature::Boundary::maximally_mixed};
  }
  if (target < s_hi) {
    // Degenerate ground space keeps S above the target for every finite beta.
    return {std::numeric_limits<double>::infinity(), EffectiveTemperature::Boundary::frozen};
  }
  // Bisection on ln(beta); S(Gibbs) is monotone decreasing in beta.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double s_mid = entropy_at(mid);
    if (std::abs(s_mid - target) < tol.root || (hi - lo) < tol.root * lo) {
      return {mid, EffectiveTemperature::Boundary::finite};
    }
    if (s_mid > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {std::sqrt(lo * hi), EffectiveTemperature::Boundary::finite};
}

} // namespace qsl
