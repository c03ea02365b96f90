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

// State and process reconstruction from count data.
//
// Single-qubit data follows the two-detector analyzer layout: for analyzer
// setting x in {H, V, D, A, R, L}, APD1 sits on the port projecting onto |x>
// and APD2 on the orthogonal port. With detector efficiencies e1, e2,
//
//     C_x1 ~ e1 P(x),   C_x2 ~ e2 P(x_perp),
//
// so for a basis pair (x, y = x_perp) the ratio
// eta = sqrt(C_x1 C_y1 / (C_x2 C_y2)) estimates e1 / e2 and
// (C_x1 - eta C_x2) / (C_x1 + eta C_x2) estimates P(x) - P(y) free of the imbalance.

#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seaq/count_csv.hpp"
#include "seaq/error.hpp"
#include "seaq/mle.hpp"
#include "seaq/quantum.hpp"

namespace seaq {

struct TomoDataset1Q {
    /// setting label -> {APD1 counts, APD2 counts}
    std::map<std::string, std::array<double, 2>> counts;

    void validate() const {
        for (const char *label : kProbeLabels) {
            auto it = counts.find(label);
            if (it == counts.end()) {
                throw InputError(std::string("single-qubit dataset lacks setting ") + label);
            }
            if (it->second[0] < 0.0 || it->second[1] < 0.0) {
                throw InputError(std::string("negative count for setting ") + label);
            }
        }
    }

    double c(const std::string &label, int detector) const {
        return counts.at(label)[detector - 1];
    }
};

/// The settings pair of each basis, in (x, x_perp) order.
inline std::pair<std::string, std::string> basis_labels(Basis b) {
    switch (b) {
        case Basis::HV:
            return {"H", "V"};
        case Basis::DA:
            return {"D", "A"};
        case Basis::RL:
            return {"R", "L"};
    }
    return {"H", "V"};
}

/// Relative efficiency e1/e2 estimated from one basis.
///
/// Uses sqrt(C_x1 C_y1 / (C_x2 C_y2)). When one of the products vanishes
/// (e.g. a pure eigenstate with no noise) the pooled ratio
/// (C_x1 + C_y1) / (C_x2 + C_y2) is used, which equals the same quantity on
/// noiseless data. A detector with no counts in the basis is degenerate.
inline double efficiency_ratio(const TomoDataset1Q &data, Basis basis) {
    auto [x, y] = basis_labels(basis);
    double x1 = data.c(x, 1), y1 = data.c(y, 1), x2 = data.c(x, 2), y2 = data.c(y, 2);
    if (x2 + y2 <= 0.0) {
        throw DegenerateDataError(x + "2/" + y + "2", "no APD2 counts in basis " + std::string(to_string(basis)));
    }
    if (x1 + y1 <= 0.0) {
        throw DegenerateDataError(x + "1/" + y + "1", "no APD1 counts in basis " + std::string(to_string(basis)));
    }
    double num = x1 * y1, den = x2 * y2;
    if (num > 0.0 && den > 0.0) {
        return std::sqrt(num / den);
    }
    return (x1 + y1) / (x2 + y2);
}

namespace tomo_detail {

inline double corrected_difference(const TomoDataset1Q &data, Basis basis) {
    auto [x, y] = basis_labels(basis);
    double eta = efficiency_ratio(data, basis);
    double c1 = data.c(x, 1), c2 = data.c(x, 2) * eta;
    if (c1 + c2 <= 0.0) {
        throw DegenerateDataError(x, "no counts on setting " + x);
    }
    return (c1 - c2) / (c1 + c2);
}

}  // namespace tomo_detail

/// s1 from D/A, s2 from R/L, s3 from H/V, each with its own efficiency
/// correction. Not clamped: finite statistics can leave the Bloch ball.
inline StokesVector stokes_from_counts(const TomoDataset1Q &data) {
    data.validate();
    StokesVector s;
    s.s0 = 1.0;
    s.s1 = tomo_detail::corrected_difference(data, Basis::DA);
    s.s2 = tomo_detail::corrected_difference(data, Basis::RL);
    s.s3 = tomo_detail::corrected_difference(data, Basis::HV);
    return s;
}

/// Hermitian, unit trace, possibly not positive.
inline CMatrix linear_estimate_1q(const TomoDataset1Q &data) {
    StokesVector s = stokes_from_counts(data);
    return stokes_matrix(s.s1, s.s2, s.s3);
}

/// Likelihood terms: one group per setting, APD2 weighted by e2/e1 = 1/eta.
inline std::vector<Measurement> measurements_1q(const TomoDataset1Q &data) {
    data.validate();
    std::map<std::string, double> eta;
    for (Basis b : {Basis::HV, Basis::DA, Basis::RL}) {
        auto [x, y] = basis_labels(b);
        double e = efficiency_ratio(data, b);
        eta[x] = e;
        eta[y] = e;
    }
    std::vector<Measurement> out;
    int group = 0;
    for (const char *label : kProbeLabels) {
        out.push_back({probe_state(label).amplitudes(), 1.0, data.c(label, 1), group});
        out.push_back({probe_state(orthogonal_label(label)).amplitudes(), 1.0 / eta[label], data.c(label, 2), group});
        ++group;
    }
    return out;
}

struct StateEstimate {
    CMatrix linear;
    DensityMatrix rho = maximally_mixed(2);
    double log_likelihood = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
    std::vector<double> log_likelihood_trace;
};

/// Physical state closest in likelihood to the data, started from rho_linear.
inline StateEstimate mle_project(const CMatrix &rho_linear, const std::vector<Measurement> &measurements,
                                 const MleOptions &options = {}) {
    MleResult r = mle_estimate(rho_linear, measurements, options);
    StateEstimate out;
    out.linear = rho_linear;
    out.rho = DensityMatrix::from_hermitian(r.rho);
    out.log_likelihood = r.log_likelihood;
    out.iterations = r.iterations;
    out.gradient_norm = r.gradient_norm;
    out.log_likelihood_trace = std::move(r.log_likelihood_trace);
    return out;
}

inline StateEstimate mle_project(const CMatrix &rho_linear, const TomoDataset1Q &data,
                                 const MleOptions &options = {}) {
    return mle_project(rho_linear, measurements_1q(data), options);
}

inline StateEstimate reconstruct_1q(const TomoDataset1Q &data, const MleOptions &options = {}) {
    return mle_project(linear_estimate_1q(data), data, options);
}

/// Stokes vector and efficiency ratios for reporting.
struct Tomo1QSummary {
    StokesVector stokes;
    double eta_hv = 1.0, eta_da = 1.0, eta_rl = 1.0;
};

inline Tomo1QSummary summarize_1q(const TomoDataset1Q &data) {
    return {stokes_from_counts(data), efficiency_ratio(data, Basis::HV), efficiency_ratio(data, Basis::DA),
            efficiency_ratio(data, Basis::RL)};
}

// ---------------------------------------------------------------------------
// Two qubits

struct TomoDataset2Q {
    /// (setting A, setting B) -> coincidences
    std::map<SettingPair, double> counts;
};

enum class SettingScheme { full36, minimal16 };

inline std::vector<SettingPair> tomography_settings(SettingScheme scheme) {
    std::vector<std::string> labels =
        scheme == SettingScheme::full36 ? std::vector<std::string>{"H", "V", "D", "A", "R", "L"}
                                        : std::vector<std::string>{"H", "V", "D", "R"};
    std::vector<SettingPair> out;
    for (const auto &a : labels)
        for (const auto &b : labels) out.emplace_back(a, b);
    return out;
}

namespace tomo_detail {

/// Pauli-product basis Gamma_k = sigma_i (x) sigma_j, k = 4 i + j.
inline const std::array<CMatrix, 16> &two_qubit_paulis() {
    static const std::array<CMatrix, 16> basis = [] {
        std::array<CMatrix, 16> b;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) b[4 * i + j] = kron(pauli(i), pauli(j));
        return b;
    }();
    return basis;
}

}  // namespace tomo_detail

/// Linear inversion: least squares for the unnormalized Pauli coefficients
/// of N rho from n_s = N tr(rho Pi_s), then divide by the trace.
/// Rank-deficient setting sets raise a ConfigError naming missing settings.
inline CMatrix linear_estimate_2q(const TomoDataset2Q &data) {
    const auto &paulis = tomo_detail::two_qubit_paulis();
    const int rows = static_cast<int>(data.counts.size());
    Eigen::MatrixXd design(rows, 16);
    Eigen::VectorXd n(rows);
    int r = 0;
    for (const auto &[setting, count] : data.counts) {
        if (count < 0.0) throw InputError("negative coincidence count for " + pair_label(setting.first, setting.second));
        CMatrix proj = tensor(projector_state(setting.first), projector_state(setting.second)).projector();
        for (int k = 0; k < 16; ++k) design(r, k) = (paulis[k] * proj).trace().real() / 4.0;
        n(r) = count;
        ++r;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    if (rows < 16 || cod.rank() < 16) {
        std::string missing;
        for (const auto &s : tomography_settings(SettingScheme::full36)) {
            if (!data.counts.count(s)) missing += (missing.empty() ? "" : " ") + pair_label(s.first, s.second);
        }
        throw ConfigError("tomography.settings", "two-qubit settings are not informationally complete; missing: " +
                                                     (missing.empty() ? std::string("(none of the standard set)") : missing));
    }
    Eigen::VectorXd coeff = cod.solve(n);
    if (!(coeff(0) > 0.0)) {
        throw DegenerateDataError("all", "two-qubit data has no counts");
    }
    CMatrix rho = CMatrix::Zero(4, 4);
    for (int k = 0; k < 16; ++k) rho += (coeff(k) / coeff(0)) * paulis[k] / 4.0;
    return hermitian_part(rho);
}

inline std::vector<Measurement> measurements_2q(const TomoDataset2Q &data) {
    std::vector<Measurement> out;
    for (const auto &[setting, count] : data.counts) {
        out.push_back({tensor(projector_state(setting.first), projector_state(setting.second)).amplitudes(), 1.0,
                       count, 0});
    }
    return out;
}

inline StateEstimate mle_project(const CMatrix &rho_linear, const TomoDataset2Q &data,
                                 const MleOptions &options = {}) {
    return mle_project(rho_linear, measurements_2q(data), options);
}

/// Linear tomography, followed by likelihood maximization when `use_mle`.
/// Without MLE, `rho` holds the eigenvalue-clamped linear estimate.
inline StateEstimate tomo_2q(const TomoDataset2Q &data, bool use_mle = true, const MleOptions &options = {}) {
    CMatrix linear = linear_estimate_2q(data);
    if (use_mle) {
        return mle_project(linear, data, options);
    }
    StateEstimate out;
    out.linear = linear;
    out.rho = DensityMatrix::from_hermitian(clamp_psd(linear));
    return out;
}

// ---------------------------------------------------------------------------
// Process tomography

struct ProcessDataset {
    /// input probe label -> tomography data of the output state
    std::map<std::string, TomoDataset1Q> outputs;

    void validate() const {
        for (const char *label : kProbeLabels) {
            if (!outputs.count(label)) {
                throw InputError(std::string("process dataset lacks probe ") + label);
            }
        }
    }
};

struct ProcessEstimate {
    CMatrix chi_linear;
    ChiMatrix chi = chi_identity();
    bool projected = false;
    std::map<std::string, DensityMatrix> output_states;
};

namespace tomo_detail {

/// beta[(i,j),(m,n)] = tr(sigma_i A_m sigma_j A_n^dagger) / 2, the linear map
/// from chi to the Pauli transfer matrix.
inline const Eigen::MatrixXcd &chi_to_ptm() {
    static const Eigen::MatrixXcd beta = [] {
        const auto &p = pauli_basis();
        Eigen::MatrixXcd b(16, 16);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int m = 0; m < 4; ++m)
                    for (int n = 0; n < 4; ++n)
                        b(4 * i + j, 4 * m + n) = (p[i] * p[m] * p[j] * p[n].adjoint()).trace() / 2.0;
        return b;
    }();
    return beta;
}

}  // namespace tomo_detail

/// Chi from the six probe output states. The channel's action on the Pauli
/// operators follows from the probe pairs; chi then solves a 16x16 linear
/// system. Negative eigenvalues from finite statistics are clamped and the
/// trace renormalized.
inline ProcessEstimate process_tomo_from_states(const std::map<std::string, DensityMatrix> &outputs) {
    for (const char *label : kProbeLabels) {
        if (!outputs.count(label)) throw InputError(std::string("process tomography lacks probe ") + label);
        if (outputs.at(label).dim() != 2) throw InputError("process tomography needs single-qubit outputs");
    }
    auto rho = [&](const char *l) -> const CMatrix & { return outputs.at(l).matrix(); };
    std::array<CMatrix, 4> image;
    image[0] = (rho("H") + rho("V") + rho("D") + rho("A") + rho("R") + rho("L")) / 3.0;
    image[1] = rho("D") - rho("A");
    image[2] = rho("R") - rho("L");
    image[3] = rho("H") - rho("V");
    const auto &p = pauli_basis();
    Eigen::VectorXcd ptm(16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ptm(4 * i + j) = (p[i] * image[j]).trace() / 2.0;
    Eigen::VectorXcd chi_vec = tomo_detail::chi_to_ptm().fullPivLu().solve(ptm);
    CMatrix chi(4, 4);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) chi(m, n) = chi_vec(4 * m + n);
    ProcessEstimate out;
    out.chi_linear = hermitian_part(chi);
    out.projected = min_eigenvalue(out.chi_linear) < -1e-12;
    out.chi = ChiMatrix::from_hermitian(clamp_psd(out.chi_linear));
    out.output_states = outputs;
    return out;
}

inline ProcessEstimate process_tomo(const ProcessDataset &data, const MleOptions &options = {}) {
    data.validate();
    std::map<std::string, DensityMatrix> states;
    for (const char *label : kProbeLabels) {
        states.emplace(label, reconstruct_1q(data.outputs.at(label), options).rho);
    }
    return process_tomo_from_states(states);
}

// ---------------------------------------------------------------------------
// From count logs

/// Singles records of one run -> single-qubit dataset (records summed).
inline TomoDataset1Q dataset_1q_from_records(const std::vector<CountRecord> &records, const std::string &run_id) {
    TomoDataset1Q data;
    for (const auto &r : records) {
        if (r.run_id != run_id || r.projector_label.find('|') != std::string::npos) continue;
        if (r.detector_id != 1 && r.detector_id != 2) {
            throw InputError("singles record with detector id " + std::to_string(r.detector_id));
        }
        data.counts[r.projector_label][r.detector_id - 1] += static_cast<double>(r.gated_counts);
    }
    data.validate();
    return data;
}

/// Coincidence records of one run -> two-qubit dataset.
inline TomoDataset2Q dataset_2q_from_records(const std::vector<CountRecord> &records, const std::string &run_id) {
    TomoDataset2Q data;
    for (const auto &r : records) {
        if (r.run_id != run_id || r.detector_id != 0) continue;
        data.counts[split_pair_label(r.projector_label)] += static_cast<double>(r.gated_counts);
    }
    return data;
}

}  // namespace seaq
