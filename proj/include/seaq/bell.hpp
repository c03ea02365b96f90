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

// CHSH analysis with linear polarization analyzers.
//
// Sign convention: S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|. With the
// default angles a = 0, a' = pi/4, b = pi/8, b' = 3 pi/8 the singlet reaches
// 2 sqrt(2).

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "seaq/count_csv.hpp"
#include "seaq/countsim.hpp"
#include "seaq/parallel.hpp"
#include "seaq/quantum.hpp"

namespace seaq {

struct ChshSettings {
    double a = 0.0;
    double a_prime = std::numbers::pi / 4.0;
    double b = std::numbers::pi / 8.0;
    double b_prime = 3.0 * std::numbers::pi / 8.0;

    void validate() const {
        if (a == a_prime || b == b_prime) {
            throw InputError("CHSH settings need two distinct angles per side");
        }
    }

    /// (alpha, beta) for the four correlation terms, in S order.
    std::array<std::pair<double, double>, 4> pairs() const {
        return {{{a, b}, {a, b_prime}, {a_prime, b}, {a_prime, b_prime}}};
    }
};

inline constexpr std::array<double, 4> kChshSigns{1.0, -1.0, 1.0, 1.0};

struct ChshResult {
    std::array<double, 4> E{};
    std::array<double, 4> sigma_E{};
    double S = 0.0;
    double sigma_S = 0.0;
    double n_sigma_violation = 0.0;
};

/// E = (N++ - N+- - N-+ + N--) / N with first-order Poisson errors.
inline Estimate correlation_E(double n_pp, double n_pm, double n_mp, double n_mm) {
    double total = n_pp + n_pm + n_mp + n_mm;
    if (!(total > 0.0)) {
        throw DegenerateDataError("E", "correlation with zero total counts");
    }
    double e = (n_pp - n_pm - n_mp + n_mm) / total;
    // dE/dN_k = (s_k - E) / N
    double var = (n_pp * (1 - e) * (1 - e) + (n_pm + n_mp) * (1 + e) * (1 + e) + n_mm * (1 - e) * (1 - e)) /
                 (total * total);
    return {e, std::sqrt(var)};
}

/// (|S| - 2) / sigma_S.
inline double n_sigma(double s, double sigma) {
    if (sigma > 0.0) return (std::abs(s) - 2.0) / sigma;
    return std::abs(s) > 2.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline ChshResult chsh_S(const std::array<Estimate, 4> &terms) {
    ChshResult r;
    double s = 0.0, var = 0.0;
    for (int k = 0; k < 4; ++k) {
        r.E[k] = terms[k].value;
        r.sigma_E[k] = terms[k].sigma;
        s += kChshSigns[k] * terms[k].value;
        var += terms[k].sigma * terms[k].sigma;
    }
    r.S = std::abs(s);
    r.sigma_S = std::sqrt(var);
    r.n_sigma_violation = n_sigma(r.S, r.sigma_S);
    return r;
}

/// Born-rule correlation of linear analyzers at (alpha, beta).
inline double exact_correlation(const DensityMatrix &rho, double alpha, double beta) {
    double e = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            PureState pa = linear_polarization(alpha + i * std::numbers::pi / 2.0);
            PureState pb = linear_polarization(beta + j * std::numbers::pi / 2.0);
            e += (i == j ? 1.0 : -1.0) * measure_prob(rho, tensor(pa, pb));
        }
    }
    return e;
}

inline double exact_chsh(const DensityMatrix &rho, const ChshSettings &settings) {
    double s = 0.0;
    auto pairs = settings.pairs();
    for (int k = 0; k < 4; ++k) s += kChshSigns[k] * exact_correlation(rho, pairs[k].first, pairs[k].second);
    return std::abs(s);
}

inline std::string angle_label(double angle_rad) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "lin%.10g", angle_rad * 180.0 / std::numbers::pi);
    return buf;
}

/// The 16 analyzer settings (4 terms x 4 port combinations), in the order
/// term-major, then (+,+), (+,-), (-,+), (-,-).
inline std::vector<SettingPair> chsh_setting_pairs(const ChshSettings &settings) {
    std::vector<SettingPair> out;
    for (auto [alpha, beta] : settings.pairs()) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out.emplace_back(angle_label(alpha + i * std::numbers::pi / 2.0),
                                 angle_label(beta + j * std::numbers::pi / 2.0));
    }
    return out;
}

/// Reduces the 16 tallies to S. With `subtract_accidentals`, the expected
/// accidental rate singles_a * singles_b * window / duration is removed from
/// each coincidence count first (floored at zero).
inline ChshResult chsh_from_table(const CorrelationTable &table, const ChshSettings &settings,
                                  bool subtract_accidentals = false, double window_s = 0.0) {
    auto keys = chsh_setting_pairs(settings);
    std::array<Estimate, 4> terms;
    for (int k = 0; k < 4; ++k) {
        std::array<double, 4> n{};
        for (int q = 0; q < 4; ++q) {
            const auto &key = keys[4 * k + q];
            const PairCounts &pc = table.at(key.first, key.second);
            double c = pc.coincidences;
            if (subtract_accidentals && table.duration_s > 0.0) {
                c = std::max(0.0, c - pc.singles_a * pc.singles_b * window_s / table.duration_s);
            }
            n[q] = c;
        }
        terms[k] = correlation_E(n[0], n[1], n[2], n[3]);
    }
    return chsh_S(terms);
}

struct ChshRun {
    ChshResult result;
    CorrelationTable table;
    std::vector<CountRecord> records;
};

/// Simulates the 16 setting pairs (cell i gets sub-seed (seed, "chsh", i))
/// and reduces them. Deterministic for a fixed seed at any thread count.
inline ChshRun run_chsh(const SourceSpec &source, const ChannelSpec &channel_b, const ChshSettings &settings,
                        const DetectorSpec &det_a, const DetectorSpec &det_b, const GateSpec &gate, double duration_s,
                        std::uint64_t seed, bool subtract_accidentals = false, unsigned threads = 1,
                        const std::string &run_id = "chsh") {
    settings.validate();
    auto keys = chsh_setting_pairs(settings);
    std::vector<PairCounts> cells(keys.size());
    std::vector<Acquisition> acqs(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        acqs[i].start_s = static_cast<double>(i) * duration_s;
        acqs[i].duration_s = duration_s;
        acqs[i].seed = sub_seed(seed, run_id, i);
        acqs[i].coupling_seed = sub_seed(seed, "coupling", 0);
    }
    parallel_for(keys.size(), threads, [&](std::size_t i) {
        cells[i] = simulate_pairs(source, channel_b, projector_state(keys[i].first), projector_state(keys[i].second),
                                  det_a, det_b, gate, acqs[i]);
    });
    ChshRun run;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto recs = pair_records(run_id, keys[i].first, keys[i].second, cells[i], acqs[i]);
        run.records.insert(run.records.end(), recs.begin(), recs.end());
    }
    // Analysis goes through the same record path as data read from disk.
    run.table = correlation_table_from_records(run.records, run_id);
    run.result = chsh_from_table(run.table, settings, subtract_accidentals, gate.window_s);
    return run;
}

}  // namespace seaq
