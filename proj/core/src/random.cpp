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

#include "qsl/random.hpp"

#include <cmath>

namespace qsl {

Matrix random_complex_gaussian(Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  return g;
}

Matrix random_unitary_matrix(Index dim, Rng& rng) {
  const Matrix g = random_complex_gaussian(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases of R so Q is Haar rather than QR-convention biased.
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

UnitaryOperator random_unitary(Index dim, Rng& rng) {
  return UnitaryOperator(random_unitary_matrix(dim, rng));
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  const Matrix g = random_complex_gaussian(dim, rng);
  return hermitian_unchecked(0.5 * (g + g.adjoint()));
}

DensityMatrix random_density(Index dim, Rng& rng) {
  const Matrix g = random_complex_gaussian(dim, rng);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m));
}

DensityMatrix random_pure(Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd psi(dim);
  for (Index i = 0; i < dim; ++i) psi[i] = Complex(normal(rng), normal(rng));
  return DensityMatrix::pure(psi);
}

UnitaryOperator random_commuting_unitary(const HermitianOperator& h, Rng& rng,
                                         double degeneracy_tol) {
  const Spectrum s = spectral(h);
  const Index d = h.dim();
  Matrix u = Matrix::Zero(d, d);
  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    while (end < d && std::abs(s.eigenvalues[end] - s.eigenvalues[start]) <= degeneracy_tol) {
      ++end;
    }
    const Index block = end - start;
    const Matrix ub = (block == 1)
                          ? Matrix::Identity(1, 1) *
                                std::exp(Complex(0.0, std::uniform_real_distribution<double>(
                                                          0.0, 2.0 * M_PI)(rng)))
                          : random_unitary_matrix(block, rng);
    const Matrix vecs = s.eigenvectors.middleCols(start, block);
    u += vecs * ub * vecs.adjoint();
    start = end;
  }
  return UnitaryOperator(std::move(u));
}

} // namespace qsl
