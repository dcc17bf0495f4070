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

#include <random>

#include "qsl/core.hpp"

namespace qsl {

using Rng = std::mt19937_64;

/// Matrix of iid standard complex normals (Ginibre ensemble).
Matrix random_complex_gaussian(Index dim, Rng& rng);

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal phase
/// correction that makes the measure invariant.
UnitaryOperator random_unitary(Index dim, Rng& rng);
Matrix random_unitary_matrix(Index dim, Rng& rng);

HermitianOperator random_hermitian(Index dim, Rng& rng);

/// Full-rank state G G^dag / tr[...] (Hilbert-Schmidt measure).
DensityMatrix random_density(Index dim, Rng& rng);

DensityMatrix random_pure(Index dim, Rng& rng);

/// Random unitary commuting with `h`: Haar blocks within each eigenspace of
/// h (eigenvalues grouped within `degeneracy_tol`).
UnitaryOperator random_commuting_unitary(const HermitianOperator& h, Rng& rng,
                                         double degeneracy_tol = 1e-9);

} // namespace qsl
