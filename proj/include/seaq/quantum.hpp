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

// Polarization qubit states, Born-rule probabilities, fidelities and the
// chi-matrix process formalism.
//
// Conventions used everywhere in the library:
//   * computational basis is {|H>, |V>}; sigma_z = |H><H| - |V><V|
//   * Stokes vector (s1, s2, s3) = (<X>, <Y>, <Z>), i.e. s1 = P_D - P_A,
//     s2 = P_R - P_L, s3 = P_H - P_V, and rho = (s0 I + s.sigma) / 2
//   * chi is expressed over {I, X, Y, Z} with rho_out = sum chi_mn A_m rho A_n^dagger,
//     so the identity channel has chi_II = 1 and a trace preserving chi has trace 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "seaq/error.hpp"
#include "seaq/linalg.hpp"

namespace seaq {

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double norm = 1e-12;
inline constexpr double fidelity_psd = 1e-8;
inline constexpr double chi_trace = 1e-10;
}  // namespace tol

class PureState {
   public:
    /// Requires unit norm. The global phase is fixed so that the first
    /// non-negligible amplitude is real and positive.
    explicit PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() != 2 && amps_.size() != 4) {
            throw ValidationError("pure state dimension must be 2 or 4, got " + std::to_string(amps_.size()));
        }
        if (std::abs(amps_.squaredNorm() - 1.0) > tol::norm) {
            throw ValidationError("pure state is not normalized");
        }
        fix_phase();
    }

    static PureState normalized(const CVector &v) {
        double n = v.norm();
        if (n == 0.0) {
            throw ValidationError("cannot normalize a zero vector");
        }
        return PureState(v / n);
    }

    int dim() const {
        return static_cast<int>(amps_.size());
    }
    const CVector &amplitudes() const {
        return amps_;
    }
    cplx operator[](int i) const {
        return amps_(i);
    }
    CMatrix projector() const {
        return amps_ * amps_.adjoint();
    }

   private:
    void fix_phase() {
        for (Eigen::Index i = 0; i < amps_.size(); ++i) {
            if (std::abs(amps_(i)) > 1e-12) {
                cplx phase = std::conj(amps_(i)) / std::abs(amps_(i));
                amps_ *= phase;
                amps_(i) = std::abs(amps_(i));
                return;
            }
        }
    }

    CVector amps_;
};

inline PureState tensor(const PureState &a, const PureState &b) {
    return PureState::normalized(kron(a.amplitudes(), b.amplitudes()));
}

class DensityMatrix {
   public:
    /// Validates Hermiticity, unit trace and positivity.
    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4)) {
            throw ValidationError("density matrix must be 2x2 or 4x4");
        }
        if (hermiticity_error(m_) > tol::hermitian) {
            throw ValidationError("density matrix is not Hermitian");
        }
        if (std::abs(m_.trace() - cplx(1.0)) > tol::trace) {
            throw ValidationError("density matrix trace is not 1");
        }
        if (min_eigenvalue(m_) < -tol::psd) {
            throw ValidationError("density matrix has a negative eigenvalue");
        }
    }

    DensityMatrix(const PureState &psi) : m_(psi.projector()) {
    }

    /// Symmetrizes and renormalizes a numerically computed state before validating.
    static DensityMatrix from_hermitian(const CMatrix &m) {
        CMatrix h = hermitian_part(m);
        double t = trace_real(h);
        if (!(t > 0.0)) {
            throw ValidationError("matrix has non-positive trace");
        }
        return DensityMatrix(h / t);
    }

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const CMatrix &matrix() const {
        return m_;
    }
    cplx operator()(int i, int j) const {
        return m_(i, j);
    }

    double purity() const {
        return (m_ * m_).trace().real();
    }

   private:
    CMatrix m_;
};

struct StokesVector {
    double s0 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    double degree_of_polarization() const {
        return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3) / s0;
    }
};

class ChiMatrix {
   public:
    /// Validates Hermiticity and the unit-trace normalization.
    explicit ChiMatrix(CMatrix m) : m_(std::move(m)) {
        if (m_.rows() != 4 || m_.cols() != 4) {
            throw ValidationError("chi matrix must be 4x4");
        }
        if (hermiticity_error(m_) > tol::hermitian) {
            throw ValidationError("chi matrix is not Hermitian");
        }
        if (std::abs(m_.trace() - cplx(1.0)) > tol::chi_trace) {
            throw ValidationError("chi matrix trace is not 1");
        }
    }

    static ChiMatrix from_hermitian(const CMatrix &m) {
        CMatrix h = hermitian_part(m);
        double t = trace_real(h);
        if (!(t > 0.0)) {
            throw ValidationError("chi matrix has non-positive trace");
        }
        return ChiMatrix(h / t);
    }

    const CMatrix &matrix() const {
        return m_;
    }
    cplx operator()(int m, int n) const {
        return m_(m, n);
    }

    /// sum chi_mn A_n^dagger A_m, which equals I for a trace preserving map.
    CMatrix trace_preservation_operator() const {
        const auto &basis = pauli_basis();
        CMatrix acc = CMatrix::Zero(2, 2);
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                acc += m_(m, n) * basis[n].adjoint() * basis[m];
            }
        }
        return acc;
    }

    bool is_trace_preserving(double tolerance = 1e-8) const {
        return (trace_preservation_operator() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= tolerance;
    }

   private:
    CMatrix m_;
};

// ---------------------------------------------------------------------------
// States

/// Linear polarization at `angle` from horizontal.
inline PureState linear_polarization(double angle) {
    CVector v(2);
    v << std::cos(angle), std::sin(angle);
    return PureState::normalized(v);
}

/// One of the six probe states H, V, D, A, R, L.
inline PureState probe_state(std::string_view label) {
    CVector v(2);
    if (label == "H") {
        v << 1, 0;
    } else if (label == "V") {
        v << 0, 1;
    } else if (label == "D") {
        v << kSqrtHalf, kSqrtHalf;
    } else if (label == "A") {
        v << kSqrtHalf, -kSqrtHalf;
    } else if (label == "R") {
        v << kSqrtHalf, kI * kSqrtHalf;
    } else if (label == "L") {
        v << kSqrtHalf, -kI * kSqrtHalf;
    } else {
        throw InputError("unknown probe label '" + std::string(label) + "'");
    }
    return PureState(v);
}

inline constexpr std::array<const char *, 6> kProbeLabels{"H", "V", "D", "A", "R", "L"};

/// Analyzer settings: a probe label, or "lin<degrees>" for a linear
/// polarizer at that angle (e.g. "lin22.5").
inline PureState projector_state(std::string_view label) {
    if (label.size() > 3 && label.substr(0, 3) == "lin") {
        std::string number(label.substr(3));
        std::size_t used = 0;
        double deg = 0.0;
        try {
            deg = std::stod(number, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != number.size()) {
            throw InputError("bad linear analyzer label '" + std::string(label) + "'");
        }
        return linear_polarization(deg * std::numbers::pi / 180.0);
    }
    return probe_state(label);
}

/// Label of the orthogonal analyzer port.
inline std::string orthogonal_label(std::string_view label) {
    if (label == "H") return "V";
    if (label == "V") return "H";
    if (label == "D") return "A";
    if (label == "A") return "D";
    if (label == "R") return "L";
    if (label == "L") return "R";
    if (label.size() > 3 && label.substr(0, 3) == "lin") {
        double deg = std::stod(std::string(label.substr(3)));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "lin%.10g", deg + 90.0);
        return buf;
    }
    throw InputError("unknown analyzer label '" + std::string(label) + "'");
}

/// (|HV> - |VH>)/sqrt(2) as a density matrix.
inline DensityMatrix singlet() {
    CVector v = CVector::Zero(4);
    v(1) = kSqrtHalf;
    v(2) = -kSqrtHalf;
    return DensityMatrix(PureState(v));
}

/// visibility * singlet + (1 - visibility) * I/4.
inline DensityMatrix werner(double visibility) {
    if (visibility < 0.0 || visibility > 1.0) {
        throw InputError("Werner visibility must be in [0, 1]");
    }
    CMatrix m = visibility * singlet().matrix() + (1.0 - visibility) * CMatrix::Identity(4, 4) / 4.0;
    return DensityMatrix::from_hermitian(m);
}

inline DensityMatrix maximally_mixed(int dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

inline DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw InputError("tensor product is defined for two single-qubit states");
    }
    return DensityMatrix::from_hermitian(kron(a.matrix(), b.matrix()));
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, int keep_qubit) {
    if (rho.dim() != 4) {
        throw InputError("partial trace needs a two-qubit state");
    }
    return DensityMatrix::from_hermitian(keep_qubit == 0 ? partial_trace_b(rho.matrix())
                                                         : partial_trace_a(rho.matrix()));
}

// ---------------------------------------------------------------------------
// Measurement

/// <psi|rho|psi>, clamped into [0, 1].
inline double measure_prob(const DensityMatrix &rho, const PureState &projector) {
    if (rho.dim() != projector.dim()) {
        throw InputError("projector dimension " + std::to_string(projector.dim()) +
                         " does not match state dimension " + std::to_string(rho.dim()));
    }
    const CVector &psi = projector.amplitudes();
    double p = psi.dot(rho.matrix() * psi).real();
    return std::clamp(p, 0.0, 1.0);
}

inline StokesVector rho_to_stokes(const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw InputError("Stokes parameters are defined for single qubits");
    }
    const CMatrix &m = rho.matrix();
    StokesVector s;
    s.s0 = 1.0;
    s.s1 = 2.0 * m(0, 1).real();
    s.s2 = -2.0 * m(0, 1).imag();
    s.s3 = (m(0, 0) - m(1, 1)).real();
    return s;
}

/// Builds rho from a Stokes vector; s0 is normalized away. Rejects vectors
/// outside the Bloch ball (projection is the tomography module's job).
inline DensityMatrix stokes_to_rho(const StokesVector &s) {
    if (!(s.s0 > 0.0)) {
        throw ValidationError("Stokes s0 must be positive");
    }
    double x = s.s1 / s.s0, y = s.s2 / s.s0, z = s.s3 / s.s0;
    if (x * x + y * y + z * z > 1.0 + 1e-10) {
        throw ValidationError("Stokes vector lies outside the Bloch ball");
    }
    CMatrix m(2, 2);
    m << (1.0 + z) / 2.0, cplx(x, -y) / 2.0, cplx(x, y) / 2.0, (1.0 - z) / 2.0;
    return DensityMatrix(m);
}

/// Hermitian matrix (I + s.sigma)/2 without any physicality check.
inline CMatrix stokes_matrix(double s1, double s2, double s3) {
    CMatrix m(2, 2);
    m << (1.0 + s3) / 2.0, cplx(s1, -s2) / 2.0, cplx(s1, s2) / 2.0, (1.0 - s3) / 2.0;
    return m;
}

// ---------------------------------------------------------------------------
// Fidelity

/// (tr sqrt(sqrt(a) b sqrt(a)))^2 for PSD a, b of equal trace, evaluated as
/// the squared trace norm of sqrt(a) sqrt(b). Eigenvalues at round-off level
/// are taken as zero before the square roots.
inline double uhlmann_fidelity(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows()) {
        throw InputError("fidelity arguments have different dimensions");
    }
    if (min_eigenvalue(a) < -tol::fidelity_psd || min_eigenvalue(b) < -tol::fidelity_psd) {
        throw ValidationError("fidelity argument is not positive semidefinite");
    }
    auto root = [](const CMatrix &m) {
        double floor = 64.0 * std::numeric_limits<double>::epsilon() * m.cwiseAbs().maxCoeff();
        return psd_function(m, [floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
    };
    Eigen::JacobiSVD<CMatrix> svd(root(a) * root(b));
    double tr = svd.singularValues().sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

inline double state_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    return uhlmann_fidelity(rho.matrix(), sigma.matrix());
}

inline double process_fidelity(const ChiMatrix &a, const ChiMatrix &b) {
    return uhlmann_fidelity(a.matrix(), b.matrix());
}

// ---------------------------------------------------------------------------
// Processes

inline CMatrix rotation_unitary(double angle, const Eigen::Vector3d &axis) {
    Eigen::Vector3d n = axis.normalized();
    CMatrix u = std::cos(angle / 2.0) * pauli(0);
    for (int k = 0; k < 3; ++k) {
        u -= kI * std::sin(angle / 2.0) * n(k) * pauli(k + 1);
    }
    return u;
}

/// Jones matrix of a half-wave plate with fast axis at `angle` from horizontal.
inline CMatrix half_wave_plate(double angle) {
    CMatrix m(2, 2);
    double c = std::cos(2.0 * angle), s = std::sin(2.0 * angle);
    m << c, s, s, -c;
    return m;
}

/// chi of rho -> U rho U^dagger: chi = u u^dagger with u_m = tr(A_m U)/2.
inline ChiMatrix chi_from_unitary(const CMatrix &u) {
    CVector coeff(4);
    for (int m = 0; m < 4; ++m) {
        coeff(m) = (pauli(m).adjoint() * u).trace() / 2.0;
    }
    return ChiMatrix::from_hermitian(coeff * coeff.adjoint());
}

inline ChiMatrix chi_identity() {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    return ChiMatrix(m);
}

/// rho -> (1 - p) rho + p I/2.
inline ChiMatrix chi_depolarizing(double p) {
    if (p < 0.0 || p > 1.0) {
        throw InputError("depolarization probability must be in [0, 1]");
    }
    CMatrix m = CMatrix::Identity(4, 4) * (p / 4.0);
    m(0, 0) += 1.0 - p;
    return ChiMatrix(m);
}

/// sum chi_mn A_m M A_n^dagger with no normalization.
inline CMatrix chi_action(const ChiMatrix &chi, const CMatrix &m) {
    const auto &basis = pauli_basis();
    CMatrix out = CMatrix::Zero(2, 2);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (chi(a, b) != cplx(0.0)) {
                out += chi(a, b) * basis[a] * m * basis[b].adjoint();
            }
        }
    }
    return out;
}

/// The channel acting on qubit B of a two-qubit operator.
inline CMatrix chi_action_on_b(const ChiMatrix &chi, const CMatrix &m) {
    const auto &basis = pauli_basis();
    CMatrix id = CMatrix::Identity(2, 2);
    CMatrix out = CMatrix::Zero(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (chi(a, b) != cplx(0.0)) {
                out += chi(a, b) * kron(id, basis[a]) * m * kron(id, basis[b]).adjoint();
            }
        }
    }
    return out;
}

/// Output state renormalized to unit trace; loss is not part of chi.
inline DensityMatrix apply_process(const ChiMatrix &chi, const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw InputError("apply_process takes a single-qubit state");
    }
    return DensityMatrix::from_hermitian(chi_action(chi, rho.matrix()));
}

inline DensityMatrix apply_process_on_b(const ChiMatrix &chi, const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw InputError("apply_process_on_b takes a two-qubit state");
    }
    return DensityMatrix::from_hermitian(chi_action_on_b(chi, rho.matrix()));
}

/// Composition: first `first`, then `second`.
inline ChiMatrix compose(const ChiMatrix &second, const ChiMatrix &first) {
    // chi_{(ac),(bd)} collapses through A_a A_c = sum_k c_{ac}^k A_k.
    const auto &basis = pauli_basis();
    std::array<std::array<CVector, 4>, 4> product;
    for (int a = 0; a < 4; ++a) {
        for (int c = 0; c < 4; ++c) {
            CMatrix p = basis[a] * basis[c];
            CVector coeff(4);
            for (int k = 0; k < 4; ++k) {
                coeff(k) = (basis[k].adjoint() * p).trace() / 2.0;
            }
            product[a][c] = coeff;
        }
    }
    CMatrix out = CMatrix::Zero(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    cplx w = second(a, b) * first(c, d);
                    if (w == cplx(0.0)) continue;
                    out += w * product[a][c] * product[b][d].adjoint();
                }
            }
        }
    }
    return ChiMatrix::from_hermitian(out);
}

/// Mean of <psi|E(psi)|psi> over the six probe states.
inline double average_probe_fidelity(const ChiMatrix &chi) {
    double acc = 0.0;
    for (const char *label : kProbeLabels) {
        PureState psi = probe_state(label);
        acc += measure_prob(apply_process(chi, DensityMatrix(psi)), psi);
    }
    return acc / 6.0;
}

}  // namespace seaq
