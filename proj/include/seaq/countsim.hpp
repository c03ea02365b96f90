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

// Monte Carlo photon counting: weak coherent pulses or SPDC pairs through a
// channel, projective analyzers, threshold detectors with dark/background
// counts, and gating against the laser sync or the partner photon.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "seaq/channel.hpp"
#include "seaq/quantum.hpp"
#include "seaq/random.hpp"

namespace seaq {

enum class SourceKind { weak_coherent, spdc_pair };

struct SourceSpec {
    SourceKind kind = SourceKind::weak_coherent;
    double mean_photon_mu = 0.5;
    double rep_rate_hz = 50e6;
    double pulse_width_s = 2e-9;
    double pair_rate_hz = 0.0;
    DensityMatrix state = DensityMatrix(probe_state("H"));

    void validate() const {
        if (kind == SourceKind::weak_coherent) {
            if (!(mean_photon_mu > 0.0 && mean_photon_mu <= 1.0)) {
                throw ValidationError("mean photon number must be in (0, 1]");
            }
            if (!(rep_rate_hz > 0.0)) {
                throw ValidationError("repetition rate must be positive");
            }
            if (state.dim() != 2) {
                throw ValidationError("weak coherent source emits a single-qubit state");
            }
        } else {
            if (!(pair_rate_hz > 0.0)) {
                throw ValidationError("pair rate must be positive");
            }
            if (state.dim() != 4) {
                throw ValidationError("pair source emits a two-qubit state");
            }
        }
    }
};

/// Threshold detector. Dark and background counts are uncorrelated with the
/// laser and are suppressed by gating; `ungateable_rate_cps` survives the gate
/// (e.g. light that arrives in step with the pulses).
struct DetectorSpec {
    double efficiency = 1.0;
    double dark_rate_cps = 0.0;
    double background_rate_cps = 0.0;
    double ungateable_rate_cps = 0.0;

    void validate() const {
        if (efficiency < 0.0 || efficiency > 1.0) {
            throw ValidationError("detector efficiency must be in [0, 1]");
        }
        if (dark_rate_cps < 0.0 || background_rate_cps < 0.0 || ungateable_rate_cps < 0.0) {
            throw ValidationError("detector noise rates must be non-negative");
        }
    }

    double ungated_noise_cps() const {
        return dark_rate_cps + background_rate_cps + ungateable_rate_cps;
    }
};

struct GateSpec {
    double window_s = 3.5e-9;
    double sync_rate_hz = 50e6;

    void validate() const {
        if (!(window_s > 0.0) || !(sync_rate_hz > 0.0)) {
            throw ValidationError("gate window and sync rate must be positive");
        }
        if (window_s * sync_rate_hz > 1.0) {
            throw ValidationError("gate duty cycle exceeds 1");
        }
    }

    double duty_cycle() const {
        return window_s * sync_rate_hz;
    }
};

inline double gated_noise_cps(const DetectorSpec &det, const GateSpec &gate) {
    return (det.dark_rate_cps + det.background_rate_cps) * gate.duty_cycle() + det.ungateable_rate_cps;
}

/// Timing and seeding of one acquisition. The acquisition is split into
/// slices of `slice_s` (0 means one slice); the wandering coupling is sampled
/// at each slice midpoint from `coupling_seed`, which is shared by every
/// detector observing the same beam.
struct Acquisition {
    double start_s = 0.0;
    double duration_s = 1.0;
    double slice_s = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t coupling_seed = 0;

    std::size_t slice_count() const {
        if (slice_s <= 0.0 || slice_s >= duration_s) return 1;
        return static_cast<std::size_t>(std::ceil(duration_s / slice_s - 1e-9));
    }

    std::pair<double, double> slice(std::size_t k) const {
        if (slice_count() == 1) return {start_s, duration_s};
        double begin = k * slice_s;
        double end = std::min(duration_s, begin + slice_s);
        return {start_s + begin, end - begin};
    }
};

struct CountRecord {
    std::string run_id;
    double timestamp_s = 0.0;
    std::string projector_label;
    int detector_id = 1;
    std::uint64_t gated_counts = 0;
    double duration_s = 0.0;
    std::uint64_t seed = 0;
};

/// Expected gated singles counts for a weak-coherent acquisition.
inline double expected_singles(const SourceSpec &source, const ChannelSpec &channel, const PureState &projector,
                               const DetectorSpec &det, const GateSpec &gate, const Acquisition &acq) {
    DensityMatrix received = apply_process(polarization_map(channel), source.state);
    double p = measure_prob(received, projector);
    double noise = gated_noise_cps(det, gate);
    double mean = 0.0;
    for (std::size_t k = 0; k < acq.slice_count(); ++k) {
        auto [t0, dt] = acq.slice(k);
        double eta = survival_probability(channel, coupling_at(channel.wandering, t0 + dt / 2.0, acq.coupling_seed)) *
                     det.efficiency;
        mean += dt * source.rep_rate_hz * (1.0 - std::exp(-source.mean_photon_mu * eta * p)) + dt * noise;
    }
    return mean;
}

/// Poisson-sampled gated counts of one detector, one entry per slice.
inline std::vector<std::uint64_t> simulate_singles_series(const SourceSpec &source, const ChannelSpec &channel,
                                                          const PureState &projector, const DetectorSpec &det,
                                                          const GateSpec &gate, const Acquisition &acq) {
    if (source.kind != SourceKind::weak_coherent) {
        throw InputError("simulate_singles needs a weak coherent source");
    }
    if (projector.dim() != 2) {
        throw InputError("singles projector must be a single-qubit state");
    }
    source.validate();
    channel.validate();
    det.validate();
    gate.validate();
    DensityMatrix received = apply_process(polarization_map(channel), source.state);
    double p = measure_prob(received, projector);
    double noise = gated_noise_cps(det, gate);
    std::vector<std::uint64_t> counts(acq.slice_count());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        auto [t0, dt] = acq.slice(k);
        double eta = survival_probability(channel, coupling_at(channel.wandering, t0 + dt / 2.0, acq.coupling_seed)) *
                     det.efficiency;
        double mean = dt * source.rep_rate_hz * (1.0 - std::exp(-source.mean_photon_mu * eta * p)) + dt * noise;
        Rng rng = make_rng(sub_seed(acq.seed, "slice", k));
        counts[k] = poisson_sample(rng, mean);
    }
    return counts;
}

/// Poisson-sampled gated counts of one detector behind `projector`.
inline CountRecord simulate_singles(const SourceSpec &source, const ChannelSpec &channel, const PureState &projector,
                                    const DetectorSpec &det, const GateSpec &gate, const Acquisition &acq) {
    CountRecord rec;
    rec.timestamp_s = acq.start_s;
    rec.duration_s = acq.duration_s;
    rec.seed = acq.seed;
    for (std::uint64_t c : simulate_singles_series(source, channel, projector, det, gate, acq)) rec.gated_counts += c;
    return rec;
}

struct PairCounts {
    double coincidences = 0.0;
    double singles_a = 0.0;
    double singles_b = 0.0;
    /// Expected accidental coincidences (model value, not sampled).
    double accidentals = 0.0;
};

namespace detail {

struct PairRates {
    double joint;     // P(a, b) on the received state
    double marginal_a;
    double marginal_b;
};

inline PairRates pair_probabilities(const DensityMatrix &received, const PureState &proj_a, const PureState &proj_b) {
    PairRates r;
    r.joint = measure_prob(received, tensor(proj_a, proj_b));
    r.marginal_a = measure_prob(partial_trace(received, 0), proj_a);
    r.marginal_b = measure_prob(partial_trace(received, 1), proj_b);
    return r;
}

template <typename F>
void for_each_pair_slice(const SourceSpec &source, const ChannelSpec &channel_b, const DensityMatrix &received,
                         const PureState &proj_a, const PureState &proj_b, const DetectorSpec &det_a,
                         const DetectorSpec &det_b, const GateSpec &gate, const Acquisition &acq, F &&fn) {
    PairRates pr = pair_probabilities(received, proj_a, proj_b);
    double eta_a = det_a.efficiency;
    for (std::size_t k = 0; k < acq.slice_count(); ++k) {
        auto [t0, dt] = acq.slice(k);
        double eta_b =
            survival_probability(channel_b, coupling_at(channel_b.wandering, t0 + dt / 2.0, acq.coupling_seed)) *
            det_b.efficiency;
        double rate_a = source.pair_rate_hz * eta_a * pr.marginal_a + det_a.ungated_noise_cps();
        double rate_b = source.pair_rate_hz * eta_b * pr.marginal_b + det_b.ungated_noise_cps();
        double accidental = dt * rate_a * rate_b * gate.window_s;
        double true_coinc = dt * source.pair_rate_hz * eta_a * eta_b * pr.joint;
        fn(k, PairCounts{true_coinc + accidental, dt * rate_a, dt * rate_b, accidental});
    }
}

}  // namespace detail

inline PairCounts expected_pairs(const SourceSpec &source, const ChannelSpec &channel_b, const PureState &proj_a,
                                      const PureState &proj_b, const DetectorSpec &det_a, const DetectorSpec &det_b,
                                      const GateSpec &gate, const Acquisition &acq) {
    DensityMatrix received = apply_process_on_b(polarization_map(channel_b), source.state);
    PairCounts total;
    detail::for_each_pair_slice(source, channel_b, received, proj_a, proj_b, det_a, det_b, gate, acq,
                                [&](std::size_t, const PairCounts &e) {
                                    total.coincidences += e.coincidences;
                                    total.singles_a += e.singles_a;
                                    total.singles_b += e.singles_b;
                                    total.accidentals += e.accidentals;
                                });
    return total;
}

/// Photon A is analyzed locally (detector efficiency only); photon B crosses
/// `channel_b`. Coincidences include accidentals singles_a * singles_b * window.
inline PairCounts simulate_pairs(const SourceSpec &source, const ChannelSpec &channel_b, const PureState &proj_a,
                                 const PureState &proj_b, const DetectorSpec &det_a, const DetectorSpec &det_b,
                                 const GateSpec &gate, const Acquisition &acq) {
    if (source.kind != SourceKind::spdc_pair) {
        throw InputError("simulate_pairs needs a pair source");
    }
    if (proj_a.dim() != 2 || proj_b.dim() != 2) {
        throw InputError("pair analyzers must be single-qubit states");
    }
    source.validate();
    channel_b.validate();
    det_a.validate();
    det_b.validate();
    gate.validate();
    DensityMatrix received = apply_process_on_b(polarization_map(channel_b), source.state);
    PairCounts out;
    detail::for_each_pair_slice(source, channel_b, received, proj_a, proj_b, det_a, det_b, gate, acq,
                                [&](std::size_t k, const PairCounts &e) {
                                    Rng rng = make_rng(sub_seed(acq.seed, "pair-slice", k));
                                    out.coincidences += static_cast<double>(poisson_sample(rng, e.coincidences));
                                    out.singles_a += static_cast<double>(poisson_sample(rng, e.singles_a));
                                    out.singles_b += static_cast<double>(poisson_sample(rng, e.singles_b));
                                    out.accidentals += e.accidentals;
                                });
    return out;
}

// ---------------------------------------------------------------------------
// Correlation tables

using SettingPair = std::pair<std::string, std::string>;

struct CorrelationTable {
    std::map<SettingPair, PairCounts> entries;
    double duration_s = 0.0;

    bool contains(const std::string &a, const std::string &b) const {
        return entries.count({a, b}) != 0;
    }
    const PairCounts &at(const std::string &a, const std::string &b) const {
        auto it = entries.find({a, b});
        if (it == entries.end()) {
            throw InputError("correlation table has no entry for " + a + "|" + b);
        }
        return it->second;
    }
};

enum class Basis { HV, DA, RL };

inline const char *to_string(Basis b) {
    switch (b) {
        case Basis::HV:
            return "HV";
        case Basis::DA:
            return "DA";
        case Basis::RL:
            return "RL";
    }
    return "?";
}

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
};

/// Fringe visibility (C_max - C_min)/(C_max + C_min) in one basis. Parallel
/// settings (xx, yy) and crossed settings (xy, yx) present in the table are
/// pooled; whichever pool is larger is C_max. sigma uses sqrt(C) per pool.
inline Estimate visibility(const CorrelationTable &table, Basis basis) {
    std::string x, y;
    switch (basis) {
        case Basis::HV:
            x = "H", y = "V";
            break;
        case Basis::DA:
            x = "D", y = "A";
            break;
        case Basis::RL:
            x = "R", y = "L";
            break;
    }
    double parallel = 0.0, crossed = 0.0;
    bool has_parallel = false, has_crossed = false;
    auto add = [&](const std::string &a, const std::string &b, double &pool, bool &flag) {
        if (table.contains(a, b)) {
            pool += table.at(a, b).coincidences;
            flag = true;
        }
    };
    add(x, x, parallel, has_parallel);
    add(y, y, parallel, has_parallel);
    add(x, y, crossed, has_crossed);
    add(y, x, crossed, has_crossed);
    if (!has_parallel || !has_crossed) {
        throw InputError(std::string("correlation table lacks the settings for basis ") + to_string(basis));
    }
    double cmax = std::max(parallel, crossed), cmin = std::min(parallel, crossed);
    double total = cmax + cmin;
    if (!(total > 0.0)) {
        throw DegenerateDataError(to_string(basis), "visibility with zero total counts");
    }
    Estimate e;
    e.value = (cmax - cmin) / total;
    e.sigma = std::sqrt(4.0 * cmax * cmin / (total * total * total));
    return e;
}

}  // namespace seaq
