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

#include "qsl/core.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qsl {

namespace {

void check_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and nonempty");
  }
  if (m.rows() > kMaxTotalDimension) {
    throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                                " exceeds the supported maximum " +
                                std::to_string(kMaxTotalDimension));
  }
}

double hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Ascending eigensystem of an (exactly) Hermitian matrix.
std::pair<RealVector, Matrix> eigensystem(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge (ill-conditioned input?)");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Spectrum descending_spectrum(const Matrix& m) {
  auto [vals, vecs] = eigensystem(m);
  Spectrum s;
  s.eigenvalues = vals.reverse();
  s.eigenvectors = vecs.rowwise().reverse();
  return s;
}

std::vector<Index> strides_for(const std::vector<Index>& dims) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * dims[k];
  }
  return strides;
}

Index product_dim(const std::vector<Index>& dims) {
  Index d = 1;
  for (Index v : dims) {
    if (v <= 0) throw std::invalid_argument("factor dimensions must be positive");
    d *= v;
  }
  return d;
}

} // namespace

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(Matrix entries, const Tolerances& tol) {
  check_square(entries, "HermitianOperator");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  if (hermiticity_residual(entries) > tol.herm * scale) {
    throw std::invalid_argument("HermitianOperator: input is not Hermitian within tolerance");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator hermitian_unchecked(Matrix entries) {
  entries = 0.5 * (entries + entries.adjoint()).eval();
  return HermitianOperator(std::move(entries), HermitianOperator::AlreadyHermitian{});
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return hermitian_unchecked(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return hermitian_unchecked(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& levels) {
  if (levels.size() == 0) throw std::invalid_argument("diagonal: empty level list");
  return hermitian_unchecked(levels.cast<Complex>().asDiagonal());
}

bool HermitianOperator::is_zero(double tol) const {
  return entries_.cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries, const Tolerances& tol) {
  check_square(entries, "DensityMatrix");
  if (hermiticity_residual(entries) > tol.herm) {
    throw std::invalid_argument("DensityMatrix: input is not Hermitian within tolerance");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
  const double tr = entries_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("DensityMatrix: eigensolver failed");
  }
  if (solver.eigenvalues().minCoeff() < -tol.psd) {
    throw std::invalid_argument("DensityMatrix: minimum eigenvalue " +
                                std::to_string(solver.eigenvalues().minCoeff()) +
                                " below -tol_psd");
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("pure: zero vector");
  Eigen::VectorXcd v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probabilities) {
  return DensityMatrix(probabilities.cast<Complex>().asDiagonal());
}

RealVector DensityMatrix::probabilities(const Tolerances& tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  RealVector p = solver.eigenvalues().reverse();
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) {
      if (p[i] < -tol.psd) throw std::runtime_error("probabilities: state is not PSD");
      p[i] = 0.0;
    }
  }
  const double total = p.sum();
  if (total <= 0.0) throw std::runtime_error("probabilities: vanishing trace");
  return p / total;
}

// ---------------------------------------------------------------------------
// UnitaryOperator

UnitaryOperator::UnitaryOperator(Matrix entries, const Tolerances& tol) {
  check_square(entries, "UnitaryOperator");
  const Matrix gram = entries.adjoint() * entries;
  const double residual = (gram - Matrix::Identity(entries.rows(), entries.cols())).norm();
  if (residual > tol.unitary * std::sqrt(static_cast<double>(entries.rows()))) {
    throw std::invalid_argument("UnitaryOperator: U^dag U deviates from identity by " +
                                std::to_string(residual));
  }
  entries_ = std::move(entries);
}

UnitaryOperator UnitaryOperator::identity(Index dim) {
  return UnitaryOperator(Matrix::Identity(dim, dim));
}

// ---------------------------------------------------------------------------
// Composition and reduction

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {
template <typename T> Matrix kron_fold(std::span<const T> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  Matrix acc = factors[0].matrix();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    acc = kron(acc, factors[k].matrix());
  }
  return acc;
}
} // namespace

HermitianOperator tensor(std::span<const HermitianOperator> factors) {
  return hermitian_unchecked(kron_fold(factors));
}

DensityMatrix tensor(std::span<const DensityMatrix> factors) {
  return DensityMatrix(kron_fold(factors));
}

HermitianOperator tensor(std::initializer_list<HermitianOperator> factors) {
  return tensor(std::span<const HermitianOperator>(factors.begin(), factors.size()));
}

DensityMatrix tensor(std::initializer_list<DensityMatrix> factors) {
  return tensor(std::span<const DensityMatrix>(factors.begin(), factors.size()));
}

Matrix embed(const Matrix& op, const std::vector<Index>& dims,
             const std::vector<std::size_t>& factors) {
  const Index total = product_dim(dims);
  if (factors.empty()) throw std::invalid_argument("embed: empty factor list");
  Index op_dim = 1;
  for (std::size_t f : factors) {
    if (f >= dims.size()) throw std::invalid_argument("embed: factor index out of range");
    op_dim *= dims[f];
  }
  if (op.rows() != op_dim || op.cols() != op_dim) {
    throw std::invalid_argument("embed: operator dimension does not match selected factors");
  }

  std::vector<char> on(dims.size(), 0);
  for (std::size_t f : factors) {
    if (on[f]) throw std::invalid_argument("embed: repeated factor index");
    on[f] = 1;
  }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!on[k]) rest.push_back(k);
  }

  const auto strides = strides_for(dims);
  // Strides of the selected factors inside the operator's own index space
  // (ordered as `factors`), and of the rest inside their identity space.
  std::vector<Index> op_strides(factors.size(), 1);
  for (std::size_t k = factors.size(); k-- > 1;) {
    op_strides[k - 1] = op_strides[k] * dims[factors[k]];
  }
  Index rest_dim = 1;
  for (std::size_t f : rest) rest_dim *= dims[f];

  Matrix out = Matrix::Zero(total, total);
  std::vector<Index> rest_idx(rest.size(), 0);
  for (Index r = 0; r < rest_dim; ++r) {
    // Decompose r into the rest factors' indices.
    Index rr = r;
    for (std::size_t k = rest.size(); k-- > 0;) {
      rest_idx[k] = rr % dims[rest[k]];
      rr /= dims[rest[k]];
    }
    Index base = 0;
    for (std::size_t k = 0; k < rest.size(); ++k) base += rest_idx[k] * strides[rest[k]];

    for (Index i = 0; i < op_dim; ++i) {
      Index gi = base, ii = i;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        gi += (ii / op_strides[k]) * strides[factors[k]];
        ii %= op_strides[k];
      }
      for (Index j = 0; j < op_dim; ++j) {
        const Complex v = op(i, j);
        if (v == Complex(0.0, 0.0)) continue;
        Index gj = base, jj = j;
        for (std::size_t k = 0; k < factors.size(); ++k) {
          gj += (jj / op_strides[k]) * strides[factors[k]];
          jj %= op_strides[k];
        }
        out(gi, gj) = v;
      }
    }
  }
  return out;
}

HermitianOperator embed(const HermitianOperator& op, const std::vector<Index>& dims,
                        const std::vector<std::size_t>& factors) {
  return hermitian_unchecked(embed(op.matrix(), dims, factors));
}

Matrix partial_trace_matrix(const Matrix& state, const std::vector<Index>& dims,
                            const std::vector<std::size_t>& keep) {
  const Index total = product_dim(dims);
  if (state.rows() != total || state.cols() != total) {
    throw std::invalid_argument("partial_trace: state dimension does not match layout");
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  for (std::size_t k = 0; k + 1 < keep.size(); ++k) {
    if (keep[k] >= keep[k + 1]) {
      throw std::invalid_argument("partial_trace: keep indices must be sorted unique");
    }
  }
  if (keep.back() >= dims.size()) {
    throw std::invalid_argument("partial_trace: keep index out of range");
  }

  std::vector<char> kept(dims.size(), 0);
  for (std::size_t f : keep) kept[f] = 1;
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!kept[k]) traced.push_back(k);
  }

  const auto strides = strides_for(dims);
  Index keep_dim = 1;
  for (std::size_t f : keep) keep_dim *= dims[f];
  Index traced_dim = 1;
  for (std::size_t f : traced) traced_dim *= dims[f];

  // Map each reduced index to its contribution in the global index.
  std::vector<Index> keep_offsets(keep_dim), traced_offsets(traced_dim);
  for (Index r = 0; r < keep_dim; ++r) {
    Index rr = r, off = 0;
    for (std::size_t k = keep.size(); k-- > 0;) {
      off += (rr % dims[keep[k]]) * strides[keep[k]];
      rr /= dims[keep[k]];
    }
    keep_offsets[r] = off;
  }
  for (Index t = 0; t < traced_dim; ++t) {
    Index tt = t, off = 0;
    for (std::size_t k = traced.size(); k-- > 0;) {
      off += (tt % dims[traced[k]]) * strides[traced[k]];
      tt /= dims[traced[k]];
    }
    traced_offsets[t] = off;
  }

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (Index r = 0; r < keep_dim; ++r) {
    for (Index c = 0; c < keep_dim; ++c) {
      Complex acc(0.0, 0.0);
      for (Index t = 0; t < traced_dim; ++t) {
        acc += state(keep_offsets[r] + traced_offsets[t], keep_offsets[c] + traced_offsets[t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<Index>& dims,
                            const std::vector<std::size_t>& keep, const Tolerances& tol) {
  return DensityMatrix(partial_trace_matrix(state.matrix(), dims, keep), tol);
}

// ---------------------------------------------------------------------------
// Spectral calculus

Spectrum spectral(const HermitianOperator& op) { return descending_spectrum(op.matrix()); }
Spectrum spectral(const DensityMatrix& rho) { return descending_spectrum(rho.matrix()); }

HermitianOperator matrix_function(const HermitianOperator& op,
                                  const std::function<double(double)>& f) {
  auto [vals, vecs] = eigensystem(op.matrix());
  RealVector mapped(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    mapped[i] = f(vals[i]);
    if (!std::isfinite(mapped[i])) {
      throw std::domain_error("matrix_function: f is not finite at eigenvalue " +
                              std::to_string(vals[i]));
    }
  }
  Matrix out = vecs * mapped.cast<Complex>().asDiagonal() * vecs.adjoint();
  return hermitian_unchecked(std::move(out));
}

UnitaryOperator hamiltonian_exponential(const HermitianOperator& h, double t) {
  auto [vals, vecs] = eigensystem(h.matrix());
  Eigen::VectorXcd phases(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    phases[i] = std::exp(Complex(0.0, -vals[i] * t));
  }
  return UnitaryOperator(vecs * phases.asDiagonal() * vecs.adjoint());
}

// ---------------------------------------------------------------------------
// Entropies and expectations

double vn_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  const RealVector p = rho.probabilities(tol);
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
  }
  return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  auto [svals, svecs] = eigensystem(sigma.matrix());

  // tr[rho ln sigma] restricted to the support of sigma, and the weight of
  // rho leaking outside that support.
  const Matrix overlap = svecs.adjoint() * rho.matrix() * svecs;
  double tr_rho_ln_sigma = 0.0;
  double leak = 0.0;
  for (Index j = 0; j < svals.size(); ++j) {
    const double w = overlap(j, j).real();
    if (svals[j] <= tol.eps_support) {
      leak += w;
    } else {
      tr_rho_ln_sigma += w * std::log(svals[j]);
    }
  }
  if (leak > tol.support_leak) {
    return std::numeric_limits<double>::infinity();
  }

  // tr[rho ln rho] from the clipped probability vector.
  const RealVector p = rho.probabilities(tol);
  double tr_rho_ln_rho = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] > tol.eps_support) tr_rho_ln_rho += p[i] * std::log(p[i]);
  }
  return tr_rho_ln_rho - tr_rho_ln_sigma;
}

double expectation_matrix(const Matrix& rho, const Matrix& a) {
  return (rho * a).trace().real();
}

double expectation(const DensityMatrix& rho, const HermitianOperator& a) {
  if (rho.dim() != a.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  const Complex tr = (rho.matrix() * a.matrix()).trace();
  return tr.real();
}

double variance(const DensityMatrix& rho, const HermitianOperator& a) {
  const double mean = expectation(rho, a);
  const double second = (rho.matrix() * a.matrix() * a.matrix()).trace().real();
  return second - mean * mean;
}

double covariance(const DensityMatrix& rho, const std::vector<Index>& dims,
                  const HermitianOperator& a, std::size_t factor_a,
                  const HermitianOperator& b, std::size_t factor_b) {
  if (factor_a == factor_b) {
    throw std::invalid_argument("covariance: observables must act on distinct factors");
  }
  const Matrix a_full = embed(a.matrix(), dims, {factor_a});
  const Matrix b_full = embed(b.matrix(), dims, {factor_b});
  const double joint = (rho.matrix() * a_full * b_full).trace().real();
  const double ma = expectation_matrix(rho.matrix(), a_full);
  const double mb = expectation_matrix(rho.matrix(), b_full);
  return joint - ma * mb;
}

// ---------------------------------------------------------------------------
// Named generators

HermitianOperator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return hermitian_unchecked(std::move(m));
}

HermitianOperator pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return hermitian_unchecked(std::move(m));
}

HermitianOperator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return hermitian_unchecked(std::move(m));
}

HermitianOperator number_operator(Index dim) {
  RealVector levels(dim);
  for (Index i = 0; i < dim; ++i) levels[i] = static_cast<double>(i);
  return HermitianOperator::diagonal(levels);
}

namespace {
Matrix swap_matrix(Index d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      s(i * d + j, j * d + i) = 1.0;
    }
  }
  return s;
}
} // namespace

UnitaryOperator swap_unitary(Index d) { return UnitaryOperator(swap_matrix(d)); }

HermitianOperator swap_generator(Index d) { return hermitian_unchecked(swap_matrix(d)); }

UnitaryOperator partial_swap(Index d, double theta) {
  // S^2 = I, so exp(-i theta S) = cos(theta) I - i sin(theta) S.
  const Matrix s = swap_matrix(d);
  Matrix u = std::cos(theta) * Matrix::Identity(d * d, d * d) - Complex(0, 1) * std::sin(theta) * s;
  return UnitaryOperator(std::move(u));
}

UnitaryOperator excitation_exchange(double theta) {
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = std::cos(theta);
  u(2, 2) = std::cos(theta);
  u(1, 2) = Complex(0, -std::sin(theta));
  u(2, 1) = Complex(0, -std::sin(theta));
  return UnitaryOperator(std::move(u));
}

} // namespace qsl
