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

// JSON form of density and chi matrices:
//   {"dim": d, "re": [row-major real parts], "im": [row-major imaginary parts]}

#pragma once

#include <json.hpp>

#include "seaq/quantum.hpp"

namespace seaq {

inline nlohmann::json matrix_to_json(const CMatrix &m) {
    nlohmann::json j;
    j["dim"] = m.rows();
    std::vector<double> re, im;
    re.reserve(m.size());
    im.reserve(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline CMatrix matrix_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im")) {
        throw ValidationError("matrix JSON needs dim, re and im");
    }
    int dim = j.at("dim").get<int>();
    auto re = j.at("re").get<std::vector<double>>();
    auto im = j.at("im").get<std::vector<double>>();
    if (dim <= 0 || re.size() != static_cast<std::size_t>(dim * dim) || im.size() != re.size()) {
        throw ValidationError("matrix JSON entry count does not match dim");
    }
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m(r, c) = cplx(re[r * dim + c], im[r * dim + c]);
        }
    }
    return m;
}

inline nlohmann::json to_json(const DensityMatrix &rho) {
    return matrix_to_json(rho.matrix());
}

inline nlohmann::json to_json(const ChiMatrix &chi) {
    return matrix_to_json(chi.matrix());
}

inline DensityMatrix density_matrix_from_json(const nlohmann::json &j) {
    return DensityMatrix(matrix_from_json(j));
}

/// Reads a chi matrix and additionally requires it to be positive semidefinite.
inline ChiMatrix chi_matrix_from_json(const nlohmann::json &j) {
    CMatrix m = matrix_from_json(j);
    ChiMatrix chi(m);
    if (min_eigenvalue(m) < -tol::psd) {
        throw ValidationError("chi matrix has a negative eigenvalue");
    }
    return chi;
}

}  // namespace seaq
