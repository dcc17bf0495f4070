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

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsl/config.hpp"

namespace qsl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense Hermitian operator. The constructor symmetrizes once, (M + M^dag)/2,
/// after checking the input is Hermitian within tol.herm; from then on the
/// stored matrix is exactly Hermitian and the value is immutable.
class HermitianOperator {
public:
  explicit HermitianOperator(Matrix entries, const Tolerances& tol = {});

  static HermitianOperator zero(Index dim);
  static HermitianOperator identity(Index dim);
  /// Diagonal operator with the given real levels.
  static HermitianOperator diagonal(const RealVector& levels);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  bool is_zero(double tol = 0.0) const;

private:
  struct AlreadyHermitian {};
  HermitianOperator(Matrix entries, AlreadyHermitian) : entries_(std::move(entries)) {}
  Matrix entries_;

  friend HermitianOperator hermitian_unchecked(Matrix entries);
};

/// Internal fast path for matrices that are Hermitian by construction.
HermitianOperator hermitian_unchecked(Matrix entries);

/// Unit-trace positive-semidefinite operator. Construction symmetrizes and
/// validates trace = 1 within tol.trace and min eigenvalue >= -tol.psd.
/// Eigenvalues in [-tol.psd, 0] are treated as 0 by every consumer that needs
/// a probability vector.
class DensityMatrix {
public:
  explicit DensityMatrix(Matrix entries, const Tolerances& tol = {});

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(Index dim);
  /// Diagonal state from a probability vector (normalized within tol.trace).
  static DensityMatrix diagonal(const RealVector& probabilities);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  /// Eigenvalues as a probability vector: negatives in [-tol.psd, 0] clipped
  /// to 0, then renormalized. Sorted descending.
  RealVector probabilities(const Tolerances& tol = {}) const;

private:
  Matrix entries_;
};

class UnitaryOperator {
public:
  explicit UnitaryOperator(Matrix entries, const Tolerances& tol = {});
  static UnitaryOperator identity(Index dim);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

private:
  Matrix entries_;
};

/// Eigendecomposition with eigenvalues sorted descending and matching
/// column-orthonormal eigenvectors.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

// ---------------------------------------------------------------------------
// Composition and reduction

Matrix kron(const Matrix& a, const Matrix& b);

HermitianOperator tensor(std::span<const HermitianOperator> factors);
DensityMatrix tensor(std::span<const DensityMatrix> factors);
HermitianOperator tensor(std::initializer_list<HermitianOperator> factors);
DensityMatrix tensor(std::initializer_list<DensityMatrix> factors);

/// Places `op` (given on the tensor product of `factors`, in that order) into
/// the full space described by `dims`, identity on all other factors. Handles
/// arbitrary factor order, e.g. an interaction written as (sys, bath) when the
/// layout order is (bath, sys).
Matrix embed(const Matrix& op, const std::vector<Index>& dims,
             const std::vector<std::size_t>& factors);
HermitianOperator embed(const HermitianOperator& op, const std::vector<Index>& dims,
                        const std::vector<std::size_t>& factors);

/// Traces out every factor not listed in `keep`. `dims` is the full factor
/// dimension list; `keep` must be nonempty, sorted unique factor indices. The
/// kept factors stay in their original relative order.
DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<Index>& dims,
                            const std::vector<std::size_t>& keep,
                            const Tolerances& tol = {});
Matrix partial_trace_matrix(const Matrix& state, const std::vector<Index>& dims,
                            const std::vector<std::size_t>& keep);

// ---------------------------------------------------------------------------
// Spectral calculus

/// Full eigensystem of a Hermitian operator, eigenvalues descending.
Spectrum spectral(const HermitianOperator& op);
Spectrum spectral(const DensityMatrix& rho);

/// Applies a real scalar function to the eigenvalues in the eigenbasis.
/// Throws if f evaluates to a non-finite value on any eigenvalue.
HermitianOperator matrix_function(const HermitianOperator& op,
                                  const std::function<double(double)>& f);

/// exp(-i H t) for Hermitian H, computed spectrally (exactly unitary up to
/// solver precision).
UnitaryOperator hamiltonian_exponential(const HermitianOperator& h, double t);

// ---------------------------------------------------------------------------
// Entropies and expectations (nats throughout)

/// Von Neumann entropy -sum p ln p with 0 ln 0 = 0.
double vn_entropy(const DensityMatrix& rho, const Tolerances& tol = {});

/// Quantum relative entropy D(rho|sigma) = tr[rho (ln rho - ln sigma)].
/// Returns +infinity when rho carries weight (> tol.support_leak) outside the
/// support of sigma; the ln is always taken on the support only.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol = {});

/// tr[rho A]; throws if the imaginary residual exceeds tolerance.
double expectation(const DensityMatrix& rho, const HermitianOperator& a);
double expectation_matrix(const Matrix& rho, const Matrix& a);

double variance(const DensityMatrix& rho, const HermitianOperator& a);

/// cov(A_i, B_j) = <A_i B_j> - <A_i><B_j> for observables on two distinct
/// factors of a composite state. Throws if i == j.
double covariance(const DensityMatrix& rho, const std::vector<Index>& dims,
                  const HermitianOperator& a, std::size_t factor_a,
                  const HermitianOperator& b, std::size_t factor_b);

// ---------------------------------------------------------------------------
// Named generators used across setups and scenario files

HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();
/// diag(0, 1, ..., d-1); the reference ladder Hamiltonian.
HermitianOperator number_operator(Index dim);

/// SWAP of two d-dimensional factors.
UnitaryOperator swap_unitary(Index d);
/// Hermitian generator S with exp(-i theta S) = cos(theta) I - i sin(theta) S.
HermitianOperator swap_generator(Index d);
UnitaryOperator partial_swap(Index d, double theta);

/// Excitation exchange on two qubits: rotation in the {|01>, |10>} block.
/// Commutes with the total number operator, hence with resonant H_s + H_b.
UnitaryOperator excitation_exchange(double theta);

} // namespace qsl
