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

// Small dense complex linear algebra used throughout: Pauli operators,
// Kronecker products, partial traces and Hermitian matrix functions.
// Every matrix here is at most 4x4 (16x16 for the chi solve).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace seaq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kSqrtHalf = std::numbers::sqrt2 / 2.0;

/// Operator basis {I, X, Y, Z}; index 0..3.
inline CMatrix pauli(int index) {
    CMatrix m(2, 2);
    switch (index) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, -kI, kI, 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline const std::array<CMatrix, 4> &pauli_basis() {
    static const std::array<CMatrix, 4> basis{pauli(0), pauli(1), pauli(2), pauli(3)};
    return basis;
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Trace over the second qubit of a 4x4 operator.
inline CMatrix partial_trace_b(const CMatrix &m) {
    CMatrix out = CMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
        }
    }
    return out;
}

/// Trace over the first qubit of a 4x4 operator.
inline CMatrix partial_trace_a(const CMatrix &m) {
    CMatrix out = CMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out(i, j) = m(i, j) + m(2 + i, 2 + j);
        }
    }
    return out;
}

/// Swaps the two qubits of a 4x4 operator.
inline CMatrix swap_qubits(const CMatrix &m) {
    static constexpr std::array<int, 4> perm{0, 2, 1, 3};
    CMatrix out(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out(i, j) = m(perm[i], perm[j]);
        }
    }
    return out;
}

inline CMatrix hermitian_part(const CMatrix &m) {
    return (m + m.adjoint()) / 2.0;
}

inline double hermiticity_error(const CMatrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double trace_real(const CMatrix &m) {
    return m.trace().real();
}

/// Eigenvalues in ascending order of the Hermitian part of `m`.
inline RVector hermitian_eigenvalues(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline double min_eigenvalue(const CMatrix &m) {
    return hermitian_eigenvalues(m).minCoeff();
}

/// f(M) for Hermitian M through its eigendecomposition, with eigenvalues
/// clamped at zero first.
template <typename F>
CMatrix psd_function(const CMatrix &m, F &&f) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
    RVector values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        values(i) = f(std::max(values(i), 0.0));
    }
    const CMatrix &vectors = solver.eigenvectors();
    return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

inline CMatrix sqrt_psd(const CMatrix &m) {
    return psd_function(m, [](double x) { return std::sqrt(x); });
}

/// Hermitian part of `m` with negative eigenvalues set to zero.
inline CMatrix clamp_psd(const CMatrix &m) {
    return psd_function(m, [](double x) { return x; });
}

}  // namespace seaq
