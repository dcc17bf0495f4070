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

#include "qsl/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qsl/setup.hpp"

namespace qsl {

namespace {

// Ascending observable spectrum; Eigen's solver already returns eigenvalues
// ascending with a deterministic order within degenerate blocks.
Spectrum ascending_observable(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("is_passive: eigensolver failed");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

} // namespace

PassiveDecomposition passive_rearrangement(const DensityMatrix& rho, const HermitianOperator& a) {
  if (rho.dim() != a.dim()) {
    throw std::invalid_argument("passive_rearrangement: dimension mismatch");
  }
  const Spectrum rho_desc = spectral(rho);
  const Spectrum a_asc = ascending_observable(a);

  const Index d = rho.dim();
  RealVector probs = rho_desc.eigenvalues;
  for (Index i = 0; i < d; ++i) probs[i] = std::max(probs[i], 0.0);

  Matrix rho_pass =
      a_asc.eigenvectors * probs.cast<Complex>().asDiagonal() * a_asc.eigenvectors.adjoint();
  // Maps the k-th descending eigenvector of rho onto the k-th ascending
  // eigenvector of A, so U rho U^dag = rho_pass.
  Matrix u = a_asc.eigenvectors * rho_desc.eigenvectors.adjoint();

  PassiveDecomposition out{DensityMatrix(std::move(rho_pass)), 0.0, 0.0,
                           UnitaryOperator(std::move(u))};
  out.passive_energy = probs.dot(a_asc.eigenvalues);
  out.ergotropy = expectation(rho, a) - out.passive_energy;
  return out;
}

double passive_energy(const DensityMatrix& rho, const HermitianOperator& a) {
  if (rho.dim() != a.dim()) throw std::invalid_argument("passive_energy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> rho_solver(rho.matrix(), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> a_solver(a.matrix(), Eigen::EigenvaluesOnly);
  const RealVector p_desc = rho_solver.eigenvalues().reverse();
  const RealVector a_asc = a_solver.eigenvalues();
  double e = 0.0;
  for (Index i = 0; i < p_desc.size(); ++i) e += std::max(p_desc[i], 0.0) * a_asc[i];
  return e;
}

PassivityCheck is_passive(const DensityMatrix& rho, const HermitianOperator& a, double tol) {
  if (rho.dim() != a.dim()) throw std::invalid_argument("is_passive: dimension mismatch");
  PassivityCheck out;
  out.gap = expectation(rho, a) - passive_energy(rho, a);
  const double scale = 1.0 + a.matrix().cwiseAbs().maxCoeff();
  out.passive = out.gap <= tol * scale;
  if (out.passive) return out;

  // Two-level witness in the eigenbasis of A: the level pair whose 2x2 block
  // of rho yields the largest energy drop when its smaller eigenvalue is
  // rotated to the upper level. Covers both population inversion and
  // coherence between nondegenerate levels.
  const Spectrum a_asc = ascending_observable(a);
  const Matrix rho_a = a_asc.eigenvectors.adjoint() * rho.matrix() * a_asc.eigenvectors;
  const Index d = rho.dim();
  double best_gain = 0.0;
  Index best_k = -1, best_l = -1;
  Matrix best_block;
  for (Index k = 0; k < d; ++k) {
    for (Index l = k + 1; l < d; ++l) {
      const double de = a_asc.eigenvalues[l] - a_asc.eigenvalues[k];
      if (de <= 0.0) continue;
      const double pk = rho_a(k, k).real();
      const double pl = rho_a(l, l).real();
      const Complex c = rho_a(k, l);
      const double mean = 0.5 * (pk + pl);
      const double radius = std::sqrt(0.25 * (pk - pl) * (pk - pl) + std::norm(c));
      // After an optimal two-level rotation the block populations become
      // mean +/- radius; parking mean - radius at the upper level gains:
      const double gain = de * (pl - (mean - radius));
      if (gain > best_gain) {
        best_gain = gain;
        best_k = k;
        best_l = l;
        best_block.resize(2, 2);
        best_block << pk, c, std::conj(c), pl;
      }
    }
  }
  if (best_k >= 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> block(best_block); // ascending
    // Send the block eigenvector of the larger population to level k and the
    // smaller one to level l.
    Matrix v = Matrix::Identity(d, d);
    v(best_k, best_k) = block.eigenvectors()(0, 1);
    v(best_l, best_k) = block.eigenvectors()(1, 1);
    v(best_k, best_l) = block.eigenvectors()(0, 0);
    v(best_l, best_l) = block.eigenvectors()(1, 0);
    out.witness =
        UnitaryOperator(a_asc.eigenvectors * v.adjoint() * a_asc.eigenvectors.adjoint());
  }
  return out;
}

CompletePassivityResult complete_passivity_check(const DensityMatrix& rho,
                                                 const HermitianOperator& h, int n_max,
                                                 double tol) {
  if (rho.dim() != h.dim()) {
    throw std::invalid_argument("complete_passivity_check: dimension mismatch");
  }
  if (n_max < 1) throw std::invalid_argument("complete_passivity_check: n_max must be >= 1");
  double cap = 1.0;
  for (int n = 0; n < n_max; ++n) cap *= static_cast<double>(rho.dim());
  if (cap > static_cast<double>(kMaxTotalDimension) * 16.0) {
    throw std::invalid_argument("complete_passivity_check: d^n_max exceeds the dimension guard");
  }

  CompletePassivityResult out;
  const auto first = is_passive(rho, h, tol);
  if (!first.passive) {
    out.failing_n = 1;
    out.worst_gap = first.gap;
    return out;
  }
  // Passive at n = 1, so rho is diagonal in an eigenbasis of h with sorted
  // populations; higher copy numbers reduce to combining spectra:
  // probabilities multiply, energies add.
  Eigen::SelfAdjointEigenSolver<Matrix> rho_solver(rho.matrix(), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> h_solver(h.matrix(), Eigen::EigenvaluesOnly);
  // Passivity at n = 1 pins the joint pairing: descending populations sit on
  // ascending energies (ties cannot change the value at any n).
  const RealVector p1 = rho_solver.eigenvalues().reverse();
  const RealVector e1 = h_solver.eigenvalues();
  const double e_scale = 1.0 + e1.cwiseAbs().maxCoeff() * static_cast<double>(n_max);

  const std::vector<double> probs(p1.data(), p1.data() + p1.size());
  const std::vector<double> energies(e1.data(), e1.data() + e1.size());
  std::vector<double> p_copy = probs, e_copy = energies;

  for (int n = 2; n <= n_max; ++n) {
    std::vector<double> p_next(p_copy.size() * probs.size());
    std::vector<double> e_next(p_copy.size() * probs.size());
    for (std::size_t i = 0; i < p_copy.size(); ++i) {
      for (std::size_t j = 0; j < probs.size(); ++j) {
        p_next[i * probs.size() + j] = p_copy[i] * probs[j];
        e_next[i * probs.size() + j] = e_copy[i] + energies[j];
      }
    }
    p_copy = std::move(p_next);
    e_copy = std::move(e_next);

    // Passive iff the as-is pairing of probabilities to energies is already
    // minimal over all rearrangements.
    std::vector<std::size_t> by_energy(e_copy.size());
    std::iota(by_energy.begin(), by_energy.end(), 0);
    std::stable_sort(by_energy.begin(), by_energy.end(),
                     [&](std::size_t a, std::size_t b) { return e_copy[a] < e_copy[b]; });
    std::vector<double> p_sorted(p_copy.size());
    for (std::size_t k = 0; k < by_energy.size(); ++k) p_sorted[k] = p_copy[by_energy[k]];
    std::vector<double> p_desc = p_sorted;
    std::sort(p_desc.begin(), p_desc.end(), std::greater<>());

    double value = 0.0, minimal = 0.0;
    for (std::size_t k = 0; k < by_energy.size(); ++k) {
      const double e = e_copy[by_energy[k]];
      value += p_sorted[k] * e;
      minimal += p_desc[k] * e;
    }
    const double gap = value - minimal;
    if (gap > tol * e_scale) {
      out.failing_n = n;
      out.worst_gap = gap;
      return out;
    }
  }
  out.passive = true;
  return out;
}

GlobalPassivityOperator global_passivity_operator(const DensityMatrix& rho0, double alpha,
                                                  RankPolicy policy, const Tolerances& tol) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("global_passivity_operator: alpha must be positive");
  }
  Matrix source = rho0.matrix();
  bool regularized = false;
  Eigen::SelfAdjointEigenSolver<Matrix> probe(source, Eigen::EigenvaluesOnly);
  if (probe.eigenvalues().minCoeff() <= tol.eps_support) {
    if (policy == RankPolicy::strict) {
      throw std::domain_error(
          "global_passivity_operator: rho0 is rank deficient so -ln rho0 is unbounded; "
          "use RankPolicy::regularize for exploratory runs");
    }
    const double eps = 1e-10;
    source = (1.0 - eps) * source +
             eps * Matrix::Identity(rho0.dim(), rho0.dim()) / static_cast<double>(rho0.dim());
    regularized = true;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(source);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("global_passivity_operator: eigensolver failed");
  }
  RealVector b_vals(solver.eigenvalues().size());
  for (Index i = 0; i < b_vals.size(); ++i) {
    const double lambda = solver.eigenvalues()[i];
    if (lambda <= 0.0) {
      throw std::domain_error("global_passivity_operator: nonpositive eigenvalue survived");
    }
    // Eigenvalues of a state never exceed 1, but guard the top end against
    // roundoff before taking the fractional power.
    b_vals[i] = std::pow(std::max(-std::log(lambda), 0.0), alpha);
  }
  Matrix b =
      solver.eigenvectors() * b_vals.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
  return GlobalPassivityOperator{hermitian_unchecked(std::move(b)), alpha, regularized};
}

double passive_energy_change(const PreparedSetup& setup, const Protocol& protocol,
                             const std::string& label) {
  const std::size_t idx = setup.layout.index_of(label);
  if (setup.layout.factors()[idx].kind != FactorKind::microbath) {
    throw std::invalid_argument("passive_energy_change: '" + label + "' is not a microbath");
  }
  const HermitianOperator& h = setup.local_hamiltonian(label);
  const DensityMatrix rho_f = evolve(setup, protocol);
  const DensityMatrix bath_f = setup.reduced(rho_f, label);
  const DensityMatrix bath_0 = setup.reduced(label);
  return passive_energy(bath_f, h) - passive_energy(bath_0, h);
}

} // namespace qsl
