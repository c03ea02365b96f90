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

// Optical model of a water-filled glass tube: refractive index of the
// medium, interface (Fresnel) losses, Beer-Lambert volume attenuation, the
// reference-beam attenuation estimator, polarization disturbance and slow
// beam wandering.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "seaq/error.hpp"
#include "seaq/quantum.hpp"
#include "seaq/random.hpp"

namespace seaq {

enum class MediumKind { air, distilled_water, seawater };

inline const char *to_string(MediumKind kind) {
    switch (kind) {
        case MediumKind::air:
            return "air";
        case MediumKind::distilled_water:
            return "distilled_water";
        case MediumKind::seawater:
            return "seawater";
    }
    return "?";
}

inline MediumKind medium_from_string(const std::string &s) {
    if (s == "air") return MediumKind::air;
    if (s == "distilled_water") return MediumKind::distilled_water;
    if (s == "seawater") return MediumKind::seawater;
    throw InputError("unknown medium '" + s + "'");
}

struct MediumParams {
    MediumKind kind = MediumKind::air;
    double temperature_c = 20.0;
    double salinity_permille = 0.0;
    double wavelength_nm = 405.0;

    void validate() const {
        if (!(wavelength_nm > 0.0)) {
            throw ValidationError("wavelength must be positive");
        }
        if (salinity_permille < 0.0) {
            throw ValidationError("salinity must be non-negative");
        }
        if (kind != MediumKind::seawater && salinity_permille != 0.0) {
            throw ValidationError(std::string("salinity must be 0 for ") + to_string(kind));
        }
    }
};

/// Coupling efficiency into the receiving fiber, drifting slowly:
/// mean * (1 + depth * sin(2 pi t / period + phase)) + N(0, noise_sigma).
struct WanderingParams {
    double mean_coupling = 1.0;
    double modulation_depth = 0.0;
    double period_s = 60.0;
    double phase_rad = 0.0;
    double noise_sigma = 0.0;

    void validate() const {
        if (!(mean_coupling > 0.0 && mean_coupling <= 1.0)) {
            throw ValidationError("wandering mean_coupling must be in (0, 1]");
        }
        if (modulation_depth < 0.0 || modulation_depth >= 1.0) {
            throw ValidationError("wandering modulation_depth must be in [0, 1)");
        }
        if (!(period_s > 0.0)) {
            throw ValidationError("wandering period must be positive");
        }
        if (noise_sigma < 0.0) {
            throw ValidationError("wandering noise_sigma must be non-negative");
        }
        if (mean_coupling * (1.0 + modulation_depth) > 1.0 + 1e-12) {
            throw ValidationError("wandering peak coupling exceeds 1");
        }
    }
};

struct ChannelSpec {
    MediumParams medium;
    double length_m = 3.3;
    double attenuation_per_m = 0.0;
    double window_index = 1.5302;  // BK7 at 405 nm
    double rotation_angle_rad = 0.0;
    Eigen::Vector3d rotation_axis{0.0, 0.0, 1.0};
    double depolarization_p = 0.0;
    WanderingParams wandering;

    void validate() const {
        medium.validate();
        wandering.validate();
        if (!(length_m > 0.0)) {
            throw ValidationError("channel length must be positive");
        }
        if (attenuation_per_m < 0.0) {
            throw ValidationError("attenuation coefficient must be non-negative");
        }
        if (window_index < 1.0) {
            throw ValidationError("window index must be >= 1");
        }
        if (depolarization_p < 0.0 || depolarization_p > 1.0) {
            throw ValidationError("depolarization must be in [0, 1]");
        }
        if (rotation_axis.norm() == 0.0) {
            throw ValidationError("rotation axis must be non-zero");
        }
    }

    bool filled() const {
        return medium.kind != MediumKind::air;
    }
};

// ---------------------------------------------------------------------------
// Refractive index

struct RefractiveIndex {
    double value = 1.0;
    bool in_fit_range = true;
};

/// Empirical index of (sea)water as a function of temperature (deg C),
/// salinity (permille) and wavelength (nm). Valid fit range 350-700 nm.
inline RefractiveIndex refractive_index(const MediumParams &m) {
    m.validate();
    if (m.kind == MediumKind::air) {
        return {1.0, true};
    }
    constexpr double a0 = 1.31405, a1 = 1.779e-4, a2 = -1.05e-6, a3 = 1.6e-8, a4 = -2.02e-6;
    constexpr double a5 = 15.868, a6 = 0.01155, a7 = -0.00423, a8 = -4382.0, a9 = 1.1455e6;
    const double t = m.temperature_c, s = m.salinity_permille, l = m.wavelength_nm;
    double n = a0 + (a1 + a2 * t + a3 * t * t) * s + a4 * t * t + (a5 + a6 * s + a7 * t) / l + a8 / (l * l) +
               a9 / (l * l * l);
    return {n, l >= 350.0 && l <= 700.0};
}

// ---------------------------------------------------------------------------
// Interfaces

struct FresnelTransmission {
    double value = 0.0;
    bool total_internal_reflection = false;
};

/// Power transmission through one planar interface from index n1 to n2.
inline FresnelTransmission fresnel_T(double n1, double n2, double incidence_rad = 0.0) {
    if (n1 < 1.0 || n2 < 1.0) {
        throw InputError("refractive indices must be >= 1");
    }
    double sin_t = n1 * std::sin(incidence_rad) / n2;
    if (sin_t > 1.0) {
        return {0.0, true};
    }
    double cos_i = std::cos(incidence_rad);
    double cos_t = std::sqrt(1.0 - sin_t * sin_t);
    double t = 2.0 * n1 * cos_i / (n1 * cos_i + n2 * cos_t);
    return {(n2 * cos_t) / (n1 * cos_i) * t * t, false};
}

/// Product of the four window interfaces at normal incidence:
/// air|glass, glass|inner, inner|glass, glass|air. Volume loss excluded.
inline double tube_transmission(const ChannelSpec &spec, bool filled) {
    double inner = filled ? refractive_index(spec.medium).value : 1.0;
    double outer = fresnel_T(1.0, spec.window_index).value;
    double inside = fresnel_T(spec.window_index, inner).value;
    return outer * inside * fresnel_T(inner, spec.window_index).value * fresnel_T(spec.window_index, 1.0).value;
}

/// T(full) / T(empty), the interface correction in the attenuation estimator.
inline double fresnel_correction(const ChannelSpec &spec) {
    return tube_transmission(spec, true) / tube_transmission(spec, false);
}

// ---------------------------------------------------------------------------
// Attenuation

struct PowerReadings {
    double a1 = 0.0;  // reference beam, empty tube
    double a2 = 0.0;  // signal beam, empty tube
    double b1 = 0.0;  // reference beam, full tube
    double b2 = 0.0;  // signal beam, full tube
};

/// Beer-Lambert coefficient (natural log, 1/m) from reference-normalized
/// power readings: alpha = -ln(b2 / ((a2 b1 / a1) * T_full / T_empty)) / L.
inline double estimate_attenuation(const PowerReadings &p, double length_m, double fresnel_ratio) {
    for (double v : {p.a1, p.a2, p.b1, p.b2}) {
        if (!(v > 0.0)) {
            throw InputError("power readings must be positive");
        }
    }
    if (!(length_m > 0.0) || !(fresnel_ratio > 0.0)) {
        throw InputError("length and Fresnel ratio must be positive");
    }
    double expected_lossless = p.a2 * p.b1 / p.a1 * fresnel_ratio;
    return std::log(p.b2 / expected_lossless) / -length_m;
}

inline double estimate_attenuation(const PowerReadings &p, const ChannelSpec &spec) {
    return estimate_attenuation(p, spec.length_m, fresnel_correction(spec));
}

/// Parses "a1,a2,b1,b2" rows. A non-numeric first line is treated as a header.
inline std::vector<PowerReadings> read_power_csv(std::istream &in) {
    std::vector<PowerReadings> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> values;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
            } catch (const std::exception &) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;
            throw InputError("power CSV line " + std::to_string(line_no) + " is not numeric");
        }
        if (values.size() != 4) {
            throw InputError("power CSV line " + std::to_string(line_no) + " needs 4 columns");
        }
        rows.push_back({values[0], values[1], values[2], values[3]});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Transmission and polarization

inline double coupling_at(const WanderingParams &w, double t_s, std::uint64_t noise_seed = 0) {
    double c = w.mean_coupling *
               (1.0 + w.modulation_depth * std::sin(2.0 * std::numbers::pi * t_s / w.period_s + w.phase_rad));
    if (w.noise_sigma > 0.0) {
        c += w.noise_sigma * keyed_normal(noise_seed, std::bit_cast<std::uint64_t>(t_s));
    }
    return std::clamp(c, 0.0, 1.0);
}

inline double volume_transmission(const ChannelSpec &spec) {
    return std::exp(-spec.attenuation_per_m * spec.length_m);
}

/// Per-photon transmission: exp(-alpha L) * interface transmission * coupling.
inline double survival_probability(const ChannelSpec &spec, double coupling) {
    return volume_transmission(spec) * tube_transmission(spec, spec.filled()) * std::clamp(coupling, 0.0, 1.0);
}

inline double survival_probability(const ChannelSpec &spec) {
    return survival_probability(spec, spec.wandering.mean_coupling);
}

/// Depolarization p applied after a rotation by rotation_angle about
/// rotation_axis on the Bloch sphere.
inline ChiMatrix polarization_map(const ChannelSpec &spec) {
    if (spec.depolarization_p < 0.0 || spec.depolarization_p > 1.0) {
        throw InputError("depolarization must be in [0, 1]");
    }
    ChiMatrix rotation = chi_from_unitary(rotation_unitary(spec.rotation_angle_rad, spec.rotation_axis));
    double p = spec.depolarization_p;
    CMatrix m = (1.0 - p) * rotation.matrix() + (p / 4.0) * CMatrix::Identity(4, 4);
    return ChiMatrix::from_hermitian(m);
}

// ---------------------------------------------------------------------------
// Link budget

inline double attenuation_db(double alpha_per_m, double length_m) {
    return 10.0 * alpha_per_m * length_m * std::numbers::log10e;
}

/// Distance at which Beer-Lambert loss exhausts the budget.
inline double achievable_distance(double alpha_per_m, double loss_budget_db) {
    if (!(alpha_per_m > 0.0)) {
        throw InputError("attenuation coefficient must be positive");
    }
    if (!(loss_budget_db > 0.0)) {
        throw InputError("loss budget must be positive");
    }
    return loss_budget_db / (10.0 * alpha_per_m * std::numbers::log10e);
}

}  // namespace seaq
