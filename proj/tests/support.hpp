// Copyright 2026 The seaq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Random state generators for property tests.

#pragma once

#include <random>

#include "seaq/quantum.hpp"

namespace seaq::testing {

inline CVector gaussian_vector(std::mt19937_64 &rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(n(rng), n(rng));
    return v;
}

/// Haar-random pure state.
inline PureState haar_pure(std::mt19937_64 &rng, int dim) {
    return PureState::normalized(gaussian_vector(rng, dim));
}

/// Ginibre-ensemble mixed state of the given rank (full rank by default).
inline DensityMatrix ginibre_mixed(std::mt19937_64 &rng, int dim, int rank = 0) {
    if (rank <= 0) rank = dim;
    CMatrix g(dim, rank);
    for (int k = 0; k < rank; ++k) g.col(k) = gaussian_vector(rng, dim);
    return DensityMatrix::from_hermitian(g * g.adjoint());
}

/// Mixes pure, low-rank and full-rank states.
inline DensityMatrix random_state(std::mt19937_64 &rng, int dim) {
    std::uniform_int_distribution<int> pick(1, dim);
    int rank = pick(rng);
    if (rank == 1) return DensityMatrix(haar_pure(rng, dim));
    return ginibre_mixed(rng, dim, rank);
}

/// Random unitary via QR of a Ginibre matrix.
inline CMatrix haar_unitary(std::mt19937_64 &rng, int dim) {
    CMatrix g(dim, dim);
    for (int k = 0; k < dim; ++k) g.col(k) = gaussian_vector(rng, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace seaq::testing
