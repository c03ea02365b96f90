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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "seaq/matrix_json.hpp"
#include "seaq/quantum.hpp"
#include "support.hpp"

namespace seaq {
namespace {

using testing::ginibre_mixed;
using testing::haar_pure;
using testing::max_abs_diff;
using testing::random_state;

TEST(ProbeState, ComputationalBasisDefinitions) {
    PureState h = probe_state("H");
    EXPECT_EQ(h[0], cplx(1.0));
    EXPECT_EQ(h[1], cplx(0.0));
    PureState d = probe_state("D");
    EXPECT_NEAR(d[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(d[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
    PureState r = probe_state("R");
    EXPECT_NEAR(r[1].imag(), 1.0 / std::sqrt(2.0), 1e-15);
    PureState l = probe_state("L");
    EXPECT_NEAR(l[1].imag(), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ProbeState, BasisPairsAreOrthogonal) {
    const char *pairs[3][2] = {{"H", "V"}, {"D", "A"}, {"R", "L"}};
    for (auto &p : pairs) {
        cplx overlap = probe_state(p[0]).amplitudes().dot(probe_state(p[1]).amplitudes());
        EXPECT_LT(std::abs(overlap), 1e-15) << p[0] << p[1];
    }
}

TEST(ProbeState, UnknownLabelThrows) {
    EXPECT_THROW(probe_state("X"), InputError);
    EXPECT_THROW(projector_state("linabc"), InputError);
}

TEST(ProbeState, LinearAnalyzerLabels) {
    EXPECT_LT(max_abs_diff(projector_state("lin45").projector(), probe_state("D").projector()), 1e-15);
    EXPECT_LT(max_abs_diff(projector_state("lin90").projector(), probe_state("V").projector()), 1e-15);
    EXPECT_EQ(orthogonal_label("lin22.5"), "lin112.5");
    EXPECT_EQ(orthogonal_label("R"), "L");
}

TEST(PureStateType, PhaseFixedAndNormChecked) {
    CVector v(2);
    v << cplx(0.0, 1.0), 0.0;
    PureState s(v);
    EXPECT_NEAR(s[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(s[0].imag(), 0.0, 1e-15);
    CVector bad(2);
    bad << 1.0, 1.0;
    EXPECT_THROW(PureState{bad}, ValidationError);
    EXPECT_THROW(PureState{CVector::Zero(3)}, ValidationError);
}

TEST(DensityMatrixType, RejectsUnphysical) {
    CMatrix m = CMatrix::Identity(2, 2) / 2.0;
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix{m}, ValidationError);  // not Hermitian
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 2)}, ValidationError);  // trace 2
    CMatrix neg(2, 2);
    neg << 1.2, 0.0, 0.0, -0.2;
    EXPECT_THROW(DensityMatrix{neg}, ValidationError);
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(3, 3) / 3.0}, ValidationError);
}

TEST(Singlet, PureAndMaximallyEntangled) {
    DensityMatrix s = singlet();
    EXPECT_NEAR(s.purity(), 1.0, 1e-14);
    for (int keep = 0; keep < 2; ++keep) {
        EXPECT_LT(max_abs_diff(partial_trace(s, keep).matrix(), CMatrix::Identity(2, 2) / 2.0), 1e-15);
    }
    // |HV> is index 1, |VH> is index 2.
    EXPECT_NEAR(s(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(s(1, 2).real(), -0.5, 1e-15);
    EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-15);
}

TEST(MeasureProb, SpecExamples) {
    DensityMatrix h(probe_state("H"));
    EXPECT_NEAR(measure_prob(h, probe_state("H")), 1.0, 1e-15);
    EXPECT_NEAR(measure_prob(h, probe_state("D")), 0.5, 1e-15);
    // <DD|psi-> = (<D|H><D|V> - <D|V><D|H>)/sqrt2 = 0.
    cplx dh = probe_state("D").amplitudes().dot(probe_state("H").amplitudes());
    cplx dv = probe_state("D").amplitudes().dot(probe_state("V").amplitudes());
    cplx amp = (dh * dv - dv * dh) / std::sqrt(2.0);
    double oracle = std::norm(amp);
    DensityMatrix s = singlet();
    EXPECT_NEAR(measure_prob(s, tensor(probe_state("D"), probe_state("D"))), oracle, 1e-15);
    EXPECT_NEAR(measure_prob(s, tensor(probe_state("D"), probe_state("A"))), 0.5, 1e-15);
    EXPECT_NEAR(measure_prob(s, tensor(probe_state("R"), probe_state("R"))), 0.0, 1e-15);
}

TEST(MeasureProb, DimensionMismatchThrows) {
    EXPECT_THROW(measure_prob(singlet(), probe_state("H")), InputError);
}

TEST(Stokes, SpecExamples) {
    StokesVector h{1, 0, 0, 1};
    EXPECT_LT(max_abs_diff(stokes_to_rho(h).matrix(), probe_state("H").projector()), 1e-15);
    StokesVector mixed{1, 0, 0, 0};
    EXPECT_LT(max_abs_diff(stokes_to_rho(mixed).matrix(), CMatrix::Identity(2, 2) / 2.0), 1e-15);
    StokesVector d = rho_to_stokes(DensityMatrix(probe_state("D")));
    EXPECT_NEAR(d.s1, 1.0, 1e-15);
    StokesVector r = rho_to_stokes(DensityMatrix(probe_state("R")));
    EXPECT_NEAR(r.s2, 1.0, 1e-15);
    EXPECT_THROW(stokes_to_rho(StokesVector{1, 0.8, 0.0, 0.8}), ValidationError);
}

TEST(Stokes, RoundTripProperty) {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        DensityMatrix rho = random_state(rng, 2);
        DensityMatrix back = stokes_to_rho(rho_to_stokes(rho));
        worst = std::max(worst, max_abs_diff(rho.matrix(), back.matrix()));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Fidelity, IdentityAndOrthogonal) {
    std::mt19937_64 rng(3);
    for (int dim : {2, 4}) {
        for (int i = 0; i < 100; ++i) {
            DensityMatrix rho = random_state(rng, dim);
            EXPECT_NEAR(state_fidelity(rho, rho), 1.0, 1e-9);
        }
    }
    EXPECT_NEAR(state_fidelity(DensityMatrix(probe_state("H")), DensityMatrix(probe_state("V"))), 0.0, 1e-15);
}

TEST(Fidelity, PureStateOverlapOracle) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        PureState a = haar_pure(rng, 4);
        PureState b = haar_pure(rng, 4);
        double oracle = std::norm(a.amplitudes().dot(b.amplitudes()));
        EXPECT_NEAR(state_fidelity(DensityMatrix(a), DensityMatrix(b)), oracle, 1e-8);
    }
}

TEST(Fidelity, SymmetricAndBounded) {
    std::mt19937_64 rng(7);
    for (int dim : {2, 4}) {
        for (int i = 0; i < 500; ++i) {
            DensityMatrix a = random_state(rng, dim);
            DensityMatrix b = random_state(rng, dim);
            double fab = state_fidelity(a, b);
            double fba = state_fidelity(b, a);
            EXPECT_LT(std::abs(fab - fba), 1e-10);
            EXPECT_GE(fab, 0.0);
            EXPECT_LE(fab, 1.0 + 1e-10);
        }
    }
}

TEST(Fidelity, RejectsNonPsd) {
    CMatrix bad(2, 2);
    bad << 1.1, 0.0, 0.0, -0.1;
    EXPECT_THROW(uhlmann_fidelity(bad, CMatrix::Identity(2, 2) / 2.0), ValidationError);
    EXPECT_THROW(uhlmann_fidelity(CMatrix::Identity(2, 2) / 2.0, CMatrix::Identity(4, 4) / 4.0), InputError);
}

TEST(Linalg, SquareRootProperty) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        CMatrix m = ginibre_mixed(rng, 4, 1 + i % 4).matrix() * 3.0;
        CMatrix r = sqrt_psd(m);
        EXPECT_LT(max_abs_diff(r * r, m), 1e-10);
    }
}

TEST(Linalg, PartialTraceOfProduct) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        DensityMatrix a = random_state(rng, 2);
        DensityMatrix b = random_state(rng, 2);
        DensityMatrix ab = tensor(a, b);
        EXPECT_LT(max_abs_diff(partial_trace(ab, 0).matrix(), a.matrix()), 1e-12);
        EXPECT_LT(max_abs_diff(partial_trace(ab, 1).matrix(), b.matrix()), 1e-12);
    }
}

TEST(ProcessFidelity, IdentityAndPiRotation) {
    EXPECT_NEAR(process_fidelity(chi_identity(), chi_identity()), 1.0, 1e-15);
    // R_z(pi) = -i Z: chi has a single entry on (Z, Z).
    CMatrix zz = CMatrix::Zero(4, 4);
    zz(3, 3) = 1.0;
    ChiMatrix oracle(zz);
    ChiMatrix rz = chi_from_unitary(rotation_unitary(std::numbers::pi, Eigen::Vector3d(0, 0, 1)));
    EXPECT_LT(max_abs_diff(rz.matrix(), oracle.matrix()), 1e-15);
    EXPECT_NEAR(process_fidelity(chi_identity(), rz), 0.0, 1e-15);
}

TEST(ProcessFidelity, DepolarizingClosedForms) {
    for (double p : {0.0, 0.01, 0.05, 0.3, 1.0}) {
        ChiMatrix chi = chi_depolarizing(p);
        // Overlap with chi_identity picks out chi_II = 1 - 3p/4.
        EXPECT_NEAR(process_fidelity(chi_identity(), chi), 1.0 - 0.75 * p, 1e-12);
        // Probe fidelity <psi|(1-p)psi + p I/2|psi> = 1 - p/2.
        EXPECT_NEAR(average_probe_fidelity(chi), 1.0 - 0.5 * p, 1e-12);
    }
}

TEST(ApplyProcess, IdentityAndFullDepolarization) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        DensityMatrix rho = random_state(rng, 2);
        EXPECT_LT(max_abs_diff(apply_process(chi_identity(), rho).matrix(), rho.matrix()), 1e-15);
    }
    DensityMatrix out = apply_process(chi_depolarizing(1.0), DensityMatrix(probe_state("H")));
    EXPECT_LT(max_abs_diff(out.matrix(), CMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(ApplyProcess, HalfWavePlateJonesOracle) {
    // Jones matrix of a HWP with fast axis at 22.5 deg: [[cos45, sin45], [sin45, -cos45]].
    double c = std::cos(std::numbers::pi / 4.0), s = std::sin(std::numbers::pi / 4.0);
    CMatrix jones(2, 2);
    jones << c, s, s, -c;
    CMatrix h = probe_state("H").projector();
    CMatrix oracle = jones * h * jones.adjoint();
    DensityMatrix out = apply_process(chi_from_unitary(half_wave_plate(std::numbers::pi / 8.0)), DensityMatrix(h));
    EXPECT_LT(max_abs_diff(out.matrix(), oracle), 1e-14);
    EXPECT_LT(max_abs_diff(out.matrix(), probe_state("D").projector()), 1e-14);
}

TEST(ApplyProcess, UnitaryChannelMatchesConjugation) {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 200; ++i) {
        CMatrix u = testing::haar_unitary(rng, 2);
        DensityMatrix rho = random_state(rng, 2);
        DensityMatrix out = apply_process(chi_from_unitary(u), rho);
        EXPECT_LT(max_abs_diff(out.matrix(), u * rho.matrix() * u.adjoint()), 1e-12);
    }
}

TEST(ApplyProcess, Linearity) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        ChiMatrix chi = ChiMatrix::from_hermitian(ginibre_mixed(rng, 4).matrix());
        DensityMatrix r1 = random_state(rng, 2);
        DensityMatrix r2 = random_state(rng, 2);
        double a = unit(rng);
        CMatrix lhs = chi_action(chi, a * r1.matrix() + (1 - a) * r2.matrix());
        CMatrix rhs = a * chi_action(chi, r1.matrix()) + (1 - a) * chi_action(chi, r2.matrix());
        EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
    }
}

TEST(ChiMatrixType, TracePreservation) {
    EXPECT_TRUE(chi_identity().is_trace_preserving());
    EXPECT_TRUE(chi_depolarizing(0.4).is_trace_preserving());
    std::mt19937_64 rng(29);
    for (int i = 0; i < 50; ++i) {
        EXPECT_TRUE(chi_from_unitary(testing::haar_unitary(rng, 2)).is_trace_preserving());
    }
    CMatrix amp = CMatrix::Zero(4, 4);
    amp(0, 0) = 0.5;
    amp(0, 3) = 0.5;
    amp(3, 0) = 0.5;
    amp(3, 3) = 0.5;  // projector onto |H>: not trace preserving
    EXPECT_FALSE(ChiMatrix(amp).is_trace_preserving());
    CMatrix bad = CMatrix::Identity(4, 4);
    EXPECT_THROW(ChiMatrix{bad}, ValidationError);
}

TEST(ChiMatrixType, CompositionMatchesSequentialApplication) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        ChiMatrix first = compose(chi_depolarizing(0.1), chi_from_unitary(testing::haar_unitary(rng, 2)));
        ChiMatrix second = chi_from_unitary(testing::haar_unitary(rng, 2));
        DensityMatrix rho = random_state(rng, 2);
        DensityMatrix seq = apply_process(second, apply_process(first, rho));
        DensityMatrix joint = apply_process(compose(second, first), rho);
        EXPECT_LT(max_abs_diff(seq.matrix(), joint.matrix()), 1e-12);
    }
}

TEST(ChiMatrixType, ActionOnSecondQubit) {
    ChiMatrix flip = chi_from_unitary(pauli(1));
    DensityMatrix out = apply_process_on_b(flip, tensor(DensityMatrix(probe_state("H")), DensityMatrix(probe_state("H"))));
    EXPECT_NEAR(measure_prob(out, tensor(probe_state("H"), probe_state("V"))), 1.0, 1e-14);
}

TEST(MatrixJson, RoundTripAndValidation) {
    std::mt19937_64 rng(37);
    DensityMatrix rho = random_state(rng, 4);
    nlohmann::json j = to_json(rho);
    EXPECT_EQ(j["dim"], 4);
    EXPECT_EQ(j["re"].size(), 16u);
    DensityMatrix back = density_matrix_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_LT(max_abs_diff(back.matrix(), rho.matrix()), 1e-15);

    ChiMatrix chi = chi_depolarizing(0.2);
    EXPECT_LT(max_abs_diff(chi_matrix_from_json(to_json(chi)).matrix(), chi.matrix()), 1e-15);

    nlohmann::json bad = matrix_to_json(CMatrix::Identity(2, 2));
    EXPECT_THROW(density_matrix_from_json(bad), ValidationError);
    bad["re"] = std::vector<double>{1.0};
    EXPECT_THROW(matrix_from_json(bad), ValidationError);
    EXPECT_THROW(matrix_from_json(nlohmann::json::object()), ValidationError);
}

}  // namespace
}  // namespace seaq
