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

// Experiment orchestration: config -> simulate -> reconstruct -> report.
//
// Every run kind draws all randomness from sub-seeds of the master seed keyed
// by (stream, cell index), and every merge is done in cell order, so a run's
// artifacts are identical for any thread count. Count logs are written to
// CSV text first and the analysis reads them back from that text.

#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seaq/bell.hpp"
#include "seaq/channel.hpp"
#include "seaq/config.hpp"
#include "seaq/count_csv.hpp"
#include "seaq/countsim.hpp"
#include "seaq/matrix_json.hpp"
#include "seaq/parallel.hpp"
#include "seaq/tomography.hpp"

namespace seaq {

enum class ExperimentKind { loss_measurement, state_transfer, process_tomo, entanglement, chsh, link_budget };

inline const char *to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::loss_measurement:
            return "loss_measurement";
        case ExperimentKind::state_transfer:
            return "state_transfer";
        case ExperimentKind::process_tomo:
            return "process_tomo";
        case ExperimentKind::entanglement:
            return "entanglement";
        case ExperimentKind::chsh:
            return "chsh";
        case ExperimentKind::link_budget:
            return "link_budget";
    }
    return "?";
}

inline ExperimentKind experiment_kind_from_string(const std::string &s) {
    for (auto k : {ExperimentKind::loss_measurement, ExperimentKind::state_transfer, ExperimentKind::process_tomo,
                   ExperimentKind::entanglement, ExperimentKind::chsh, ExperimentKind::link_budget}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("kind", "unknown experiment kind '" + s + "'");
}

/// Power-meter simulation for the attenuation measurement.
struct LossSettings {
    int trials = 500;
    double power_noise = 0.01;   // relative sigma of each reading
    double source_drift = 0.05;  // relative sigma of the laser power between trials
    double power_w = 1e-3;
    double split_ratio = 0.5;  // fraction sent to the reference arm
};

struct BudgetSettings {
    double alpha_per_m = 0.018;
    double loss_db = 70.0;
};

/// Optional pass/fail thresholds; a violated one makes the CLI exit with 3.
struct CheckSettings {
    std::optional<double> min_state_fidelity;
    std::optional<double> min_process_fidelity;
    std::optional<double> max_loss_deviation;
    std::optional<double> min_chsh_sigma;
    std::optional<double> max_visibility_sigmas;
    std::optional<double> min_state_overlap;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::state_transfer;
    std::string name;
    std::string label;
    std::uint64_t seed = 0;
    double duration_s = 1.0;
    double slice_s = 0.0;

    ChannelSpec channel;
    ChannelSpec reference;
    bool with_reference = true;
    SourceSpec source;
    DetectorSpec detector1, detector2;
    GateSpec gate;

    LossSettings loss;
    bool use_mle = true;
    SettingScheme scheme = SettingScheme::full36;
    double scan_step_deg = 15.0;
    ChshSettings chsh;
    bool subtract_accidentals = false;
    BudgetSettings budget;
    CheckSettings check;

    /// The parsed file, with the seed as actually used.
    Config source_config;

    std::string digest() const {
        return source_config.digest();
    }

    static ExperimentConfig from_config(Config cfg, std::optional<std::uint64_t> seed_override = std::nullopt);

    static ExperimentConfig load(const std::filesystem::path &path,
                                 std::optional<std::uint64_t> seed_override = std::nullopt) {
        return from_config(Config::load(path), seed_override);
    }
};

namespace experiment_detail {

inline ChannelSpec read_channel(const Config &cfg, const std::string &p, const ChannelSpec &base) {
    ChannelSpec c = base;
    if (cfg.has(p + "medium")) {
        try {
            c.medium.kind = medium_from_string(cfg.get_string(p + "medium"));
        } catch (const Error &e) {
            throw ConfigError(p + "medium", e.what());
        }
    }
    c.medium.temperature_c = cfg.get_double(p + "temperature_c", c.medium.temperature_c);
    c.medium.salinity_permille = cfg.get_double(p + "salinity_permille", c.medium.salinity_permille);
    c.medium.wavelength_nm = cfg.get_double(p + "wavelength_nm", c.medium.wavelength_nm);
    c.length_m = cfg.get_double(p + "length_m", c.length_m);
    c.attenuation_per_m = cfg.get_double(p + "attenuation_per_m", c.attenuation_per_m);
    c.window_index = cfg.get_double(p + "window_index", c.window_index);
    c.rotation_angle_rad = cfg.get_double(p + "rotation_deg", c.rotation_angle_rad * 180.0 / std::numbers::pi) *
                           std::numbers::pi / 180.0;
    if (cfg.has(p + "rotation_axis")) {
        auto axis = cfg.get_doubles(p + "rotation_axis");
        if (axis.size() != 3) throw ConfigError(p + "rotation_axis", "expected three numbers");
        c.rotation_axis = {axis[0], axis[1], axis[2]};
    }
    c.depolarization_p = cfg.get_double(p + "depolarization_p", c.depolarization_p);
    auto &w = c.wandering;
    w.mean_coupling = cfg.get_double(p + "wandering.mean_coupling", w.mean_coupling);
    w.modulation_depth = cfg.get_double(p + "wandering.modulation_depth", w.modulation_depth);
    w.period_s = cfg.get_double(p + "wandering.period_s", w.period_s);
    w.phase_rad = cfg.get_double(p + "wandering.phase_rad", w.phase_rad);
    w.noise_sigma = cfg.get_double(p + "wandering.noise_sigma", w.noise_sigma);
    try {
        c.validate();
    } catch (const Error &e) {
        throw ConfigError(p.substr(0, p.size() - 1), e.what());
    }
    return c;
}

inline DetectorSpec read_detector(const Config &cfg, const std::string &p) {
    DetectorSpec d;
    d.efficiency = cfg.get_double(p + "efficiency", d.efficiency);
    d.dark_rate_cps = cfg.get_double(p + "dark_rate_cps", d.dark_rate_cps);
    d.background_rate_cps = cfg.get_double(p + "background_rate_cps", d.background_rate_cps);
    d.ungateable_rate_cps = cfg.get_double(p + "ungateable_rate_cps", d.ungateable_rate_cps);
    try {
        d.validate();
    } catch (const Error &e) {
        throw ConfigError(p.substr(0, p.size() - 1), e.what());
    }
    return d;
}

inline std::optional<double> read_optional(const Config &cfg, const std::string &key) {
    if (!cfg.has(key)) return std::nullopt;
    return cfg.get_double(key);
}

inline void require(const Config &cfg, ExperimentKind kind, std::initializer_list<const char *> keys) {
    for (const char *k : keys) {
        if (!cfg.has(k)) throw ConfigError(k, std::string("required for ") + to_string(kind));
    }
}

/// Runs `fn`, relabeling library failures with the pipeline stage.
template <typename F>
auto stage(const char *name, F &&fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError &) {
        throw;
    } catch (const PipelineError &) {
        throw;
    } catch (const std::exception &e) {
        throw PipelineError(name, e.what());
    }
}

}  // namespace experiment_detail

inline ExperimentConfig ExperimentConfig::from_config(Config cfg, std::optional<std::uint64_t> seed_override) {
    using namespace experiment_detail;
    if (seed_override) cfg.set("seed", std::to_string(*seed_override));
    ExperimentConfig ec;
    cfg.get_int("schema_version");
    if (!cfg.has("kind")) throw ConfigError("kind", "missing");
    ec.kind = experiment_kind_from_string(cfg.get_string("kind"));
    ec.name = cfg.get_string("name", to_string(ec.kind));
    if (ec.name.find_first_of(",|/\\ ") != std::string::npos) throw ConfigError("name", "must be a plain word");
    ec.label = cfg.get_string("label", ec.name);
    if (!cfg.has("seed")) throw ConfigError("seed", "missing");
    ec.seed = cfg.get_u64("seed");
    ec.duration_s = cfg.get_double("duration_s", ec.duration_s);
    ec.slice_s = cfg.get_double("slice_s", ec.slice_s);
    if (!(ec.duration_s > 0.0)) throw ConfigError("duration_s", "must be positive");
    if (ec.slice_s < 0.0) throw ConfigError("slice_s", "must be non-negative");

    switch (ec.kind) {
        case ExperimentKind::loss_measurement:
            require(cfg, ec.kind, {"channel.attenuation_per_m"});
            break;
        case ExperimentKind::state_transfer:
        case ExperimentKind::process_tomo:
            require(cfg, ec.kind, {"channel.attenuation_per_m", "source.mean_photon_mu"});
            break;
        case ExperimentKind::entanglement:
        case ExperimentKind::chsh:
            require(cfg, ec.kind, {"source.pair_rate_hz"});
            break;
        case ExperimentKind::link_budget:
            require(cfg, ec.kind, {"budget.alpha_per_m", "budget.loss_db"});
            break;
    }

    ec.channel = read_channel(cfg, "channel.", ChannelSpec{});
    ChannelSpec ref_base;
    ref_base.length_m = ec.channel.length_m;
    ref_base.window_index = ec.channel.window_index;
    ref_base.medium.wavelength_nm = ec.channel.medium.wavelength_nm;
    ec.reference = read_channel(cfg, "reference.", ref_base);
    ec.with_reference = cfg.get_bool("reference.enabled", true);

    std::string source_kind = cfg.get_string(
        "source.kind", (ec.kind == ExperimentKind::entanglement || ec.kind == ExperimentKind::chsh) ? "spdc_pair"
                                                                                                     : "weak_coherent");
    if (source_kind == "weak_coherent") {
        ec.source.kind = SourceKind::weak_coherent;
    } else if (source_kind == "spdc_pair") {
        ec.source.kind = SourceKind::spdc_pair;
    } else {
        throw ConfigError("source.kind", "expected weak_coherent or spdc_pair");
    }
    ec.source.mean_photon_mu = cfg.get_double("source.mean_photon_mu", ec.source.mean_photon_mu);
    ec.source.rep_rate_hz = cfg.get_double("source.rep_rate_hz", ec.source.rep_rate_hz);
    ec.source.pulse_width_s = cfg.get_double("source.pulse_width_s", ec.source.pulse_width_s);
    ec.source.pair_rate_hz = cfg.get_double("source.pair_rate_hz", ec.source.pair_rate_hz);
    double vis = cfg.get_double("source.visibility", 1.0);
    if (ec.source.kind == SourceKind::spdc_pair) {
        if (!(vis >= 0.0 && vis <= 1.0)) throw ConfigError("source.visibility", "must be in [0, 1]");
        ec.source.state = werner(vis);
    }
    if ((ec.kind == ExperimentKind::entanglement || ec.kind == ExperimentKind::chsh) &&
        ec.source.kind != SourceKind::spdc_pair) {
        throw ConfigError("source.kind", "pair experiments need an spdc_pair source");
    }
    if ((ec.kind == ExperimentKind::state_transfer || ec.kind == ExperimentKind::process_tomo) &&
        ec.source.kind != SourceKind::weak_coherent) {
        throw ConfigError("source.kind", "single-photon experiments need a weak_coherent source");
    }
    try {
        ec.source.validate();
    } catch (const Error &e) {
        throw ConfigError("source", e.what());
    }

    ec.detector1 = read_detector(cfg, "detector1.");
    ec.detector2 = read_detector(cfg, "detector2.");
    ec.gate.window_s = cfg.get_double("gate.window_s", ec.gate.window_s);
    ec.gate.sync_rate_hz = cfg.get_double("gate.sync_rate_hz", ec.source.rep_rate_hz);
    try {
        ec.gate.validate();
    } catch (const Error &e) {
        throw ConfigError("gate", e.what());
    }

    ec.loss.trials = cfg.get_int("loss.trials", ec.loss.trials);
    ec.loss.power_noise = cfg.get_double("loss.power_noise", ec.loss.power_noise);
    ec.loss.source_drift = cfg.get_double("loss.source_drift", ec.loss.source_drift);
    ec.loss.power_w = cfg.get_double("loss.power_w", ec.loss.power_w);
    ec.loss.split_ratio = cfg.get_double("loss.split_ratio", ec.loss.split_ratio);
    if (ec.loss.trials < 1) throw ConfigError("loss.trials", "must be at least 1");
    if (ec.loss.power_noise < 0.0 || ec.loss.power_noise > 0.2) throw ConfigError("loss.power_noise", "must be in [0, 0.2]");
    if (ec.loss.source_drift < 0.0 || ec.loss.source_drift > 0.2) {
        throw ConfigError("loss.source_drift", "must be in [0, 0.2]");
    }
    if (!(ec.loss.power_w > 0.0)) throw ConfigError("loss.power_w", "must be positive");
    if (!(ec.loss.split_ratio > 0.0 && ec.loss.split_ratio < 1.0)) {
        throw ConfigError("loss.split_ratio", "must be in (0, 1)");
    }

    ec.use_mle = cfg.get_bool("tomography.mle", ec.use_mle);
    std::string scheme = cfg.get_string("tomography.scheme", "full36");
    if (scheme == "full36") {
        ec.scheme = SettingScheme::full36;
    } else if (scheme == "minimal16") {
        ec.scheme = SettingScheme::minimal16;
    } else {
        throw ConfigError("tomography.scheme", "expected full36 or minimal16");
    }
    ec.scan_step_deg = cfg.get_double("scan.step_deg", ec.scan_step_deg);
    if (!(ec.scan_step_deg > 0.0) || std::abs(std::remainder(45.0, ec.scan_step_deg)) > 1e-9) {
        throw ConfigError("scan.step_deg", "must divide 45 degrees");
    }

    const double deg = std::numbers::pi / 180.0;
    ec.chsh.a = cfg.get_double("chsh.a_deg", 0.0) * deg;
    ec.chsh.a_prime = cfg.get_double("chsh.a_prime_deg", 45.0) * deg;
    ec.chsh.b = cfg.get_double("chsh.b_deg", 22.5) * deg;
    ec.chsh.b_prime = cfg.get_double("chsh.b_prime_deg", 67.5) * deg;
    try {
        ec.chsh.validate();
    } catch (const Error &e) {
        throw ConfigError("chsh", e.what());
    }
    ec.subtract_accidentals = cfg.get_bool("chsh.subtract_accidentals", false);

    ec.budget.alpha_per_m = cfg.get_double("budget.alpha_per_m", ec.budget.alpha_per_m);
    ec.budget.loss_db = cfg.get_double("budget.loss_db", ec.budget.loss_db);
    if (!(ec.budget.alpha_per_m > 0.0)) throw ConfigError("budget.alpha_per_m", "must be positive");
    if (!(ec.budget.loss_db > 0.0)) throw ConfigError("budget.loss_db", "must be positive");

    ec.check.min_state_fidelity = read_optional(cfg, "check.min_state_fidelity");
    ec.check.min_process_fidelity = read_optional(cfg, "check.min_process_fidelity");
    ec.check.max_loss_deviation = read_optional(cfg, "check.max_loss_deviation");
    ec.check.min_chsh_sigma = read_optional(cfg, "check.min_chsh_sigma");
    ec.check.max_visibility_sigmas = read_optional(cfg, "check.max_visibility_sigmas");
    ec.check.min_state_overlap = read_optional(cfg, "check.min_state_overlap");

    cfg.reject_unused();
    ec.source_config = std::move(cfg);
    return ec;
}

// ---------------------------------------------------------------------------
// Report

struct LossReport {
    Estimate alpha;           // mean over trials, standard error
    double trial_sd = 0.0;    // spread of single-trial estimates
    int trials = 0;
    double fresnel_ratio = 1.0;
    double configured = 0.0;  // the coefficient the readings were simulated with
};

struct ProbeReport {
    std::string probe;
    double fidelity = 0.0;
    StokesVector stokes;
    double eta_hv = 1.0, eta_da = 1.0, eta_rl = 1.0;
    int mle_iterations = 0;
};

struct ConditionReport {
    std::string condition;  // "reference" or "channel"
    Estimate visibility_hv, visibility_da;
    double singlet_fidelity = 0.0;
};

struct ChshReport {
    std::string condition;
    ChshResult result;
    CorrelationTable table;
};

struct BudgetReport {
    double alpha_per_m = 0.0;
    double loss_db = 0.0;
    double distance_m = 0.0;
};

struct RunReport {
    std::string kind;
    std::string name;
    std::string label;
    std::string config_digest;
    std::uint64_t seed = 0;

    std::optional<LossReport> loss;
    std::vector<ProbeReport> probes;
    std::optional<Estimate> mean_state_fidelity;
    std::optional<double> process_fidelity;
    bool chi_projected = false;
    std::vector<ConditionReport> conditions;
    std::optional<double> state_overlap;  // fidelity between reference and channel states
    std::vector<ChshReport> chsh;
    std::optional<BudgetReport> budget;
    std::vector<std::string> check_failures;

    /// Not part of the report file; written to meta.json.
    double wall_clock_s = 0.0;

    const ConditionReport *condition(const std::string &name) const {
        for (const auto &c : conditions)
            if (c.condition == name) return &c;
        return nullptr;
    }
    const ChshReport *chsh_for(const std::string &name) const {
        for (const auto &c : chsh)
            if (c.condition == name) return &c;
        return nullptr;
    }

    nlohmann::json to_json() const;
};

inline nlohmann::json estimate_json(const Estimate &e) {
    return {{"value", e.value}, {"sigma", e.sigma}};
}

inline nlohmann::json RunReport::to_json() const {
    using nlohmann::json;
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["kind"] = kind;
    j["name"] = name;
    j["label"] = label;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    if (loss) {
        j["attenuation"] = {{"alpha_per_m", estimate_json(loss->alpha)},
                            {"trial_sd", loss->trial_sd},
                            {"trials", loss->trials},
                            {"fresnel_ratio", loss->fresnel_ratio},
                            {"configured_alpha_per_m", loss->configured}};
    }
    if (!probes.empty()) {
        json arr = json::array();
        for (const auto &p : probes) {
            arr.push_back({{"probe", p.probe},
                           {"fidelity", p.fidelity},
                           {"stokes", {p.stokes.s1, p.stokes.s2, p.stokes.s3}},
                           {"eta", {{"HV", p.eta_hv}, {"DA", p.eta_da}, {"RL", p.eta_rl}}},
                           {"mle_iterations", p.mle_iterations}});
        }
        j["probes"] = arr;
    }
    if (mean_state_fidelity) j["state_fidelity"] = estimate_json(*mean_state_fidelity);
    if (process_fidelity) {
        // No closed-form error for the chi fidelity; sigma stays null.
        j["process_fidelity"] = {{"value", *process_fidelity}, {"sigma", nullptr}, {"chi_projected", chi_projected}};
    }
    if (!conditions.empty()) {
        json arr = json::array();
        for (const auto &c : conditions) {
            arr.push_back({{"condition", c.condition},
                           {"visibility_hv", estimate_json(c.visibility_hv)},
                           {"visibility_da", estimate_json(c.visibility_da)},
                           {"singlet_fidelity", c.singlet_fidelity}});
        }
        j["visibilities"] = arr;
    }
    if (state_overlap) j["state_overlap"] = *state_overlap;
    if (!chsh.empty()) {
        json arr = json::array();
        for (const auto &c : chsh) {
            json tallies = json::array();
            for (const auto &[key, pc] : c.table.entries) {
                tallies.push_back({{"a", key.first},
                                   {"b", key.second},
                                   {"coincidences", pc.coincidences},
                                   {"singles_a", pc.singles_a},
                                   {"singles_b", pc.singles_b}});
            }
            json e = json::array();
            for (int k = 0; k < 4; ++k) e.push_back({{"value", c.result.E[k]}, {"sigma", c.result.sigma_E[k]}});
            arr.push_back({{"condition", c.condition},
                           {"S", {{"value", c.result.S}, {"sigma", c.result.sigma_S}}},
                           {"n_sigma", c.result.n_sigma_violation},
                           {"E", e},
                           {"tallies", tallies}});
        }
        j["chsh"] = arr;
    }
    if (budget) {
        j["link_budget"] = {
            {"alpha_per_m", budget->alpha_per_m}, {"loss_db", budget->loss_db}, {"distance_m", budget->distance_m}};
    }
    j["checks"] = {{"passed", check_failures.empty()}, {"failures", check_failures}};
    return j;
}

/// Flat "key,value" rendering of the report JSON (leaves only).
inline std::string report_csv(const nlohmann::json &j) {
    std::string out = "key,value\n";
    auto walk = [&](auto &&self, const nlohmann::json &node, const std::string &path) -> void {
        if (node.is_object()) {
            for (auto it = node.begin(); it != node.end(); ++it)
                self(self, it.value(), path.empty() ? it.key() : path + "." + it.key());
        } else if (node.is_array()) {
            for (std::size_t i = 0; i < node.size(); ++i) self(self, node[i], path + "." + std::to_string(i));
        } else if (node.is_string()) {
            out += path + "," + node.get<std::string>() + "\n";
        } else {
            out += path + "," + node.dump() + "\n";
        }
    };
    walk(walk, j, "");
    return out;
}

// ---------------------------------------------------------------------------
// Running

struct RunOptions {
    unsigned threads = 1;
};

/// Everything a run produces, in memory. write_run puts it on disk.
struct RunOutput {
    RunReport report;
    std::string config_text;  // canonical config
    std::string counts_csv;   // empty when the kind records no counts
    std::string powers_csv;   // attenuation readings, when measured
    std::map<std::string, nlohmann::json> matrices;  // file stem -> matrix JSON
};

namespace experiment_detail {

inline void run_loss(const ExperimentConfig &ec, RunOutput &out) {
    const auto &ls = ec.loss;
    const ChannelSpec &ch = ec.channel;
    double t_empty = tube_transmission(ch, false);
    double t_full = tube_transmission(ch, ch.filled());
    double volume = volume_transmission(ch);
    std::ostringstream csv;
    csv << "a1,a2,b1,b2\n";
    for (int i = 0; i < ls.trials; ++i) {
        std::uint64_t s = sub_seed(ec.seed, "loss", static_cast<std::uint64_t>(i));
        auto noise = [&](int k) { return 1.0 + ls.power_noise * keyed_normal(s, static_cast<std::uint64_t>(k)); };
        double pa = ls.power_w * (1.0 + ls.source_drift * keyed_normal(s, 100));
        double pb = ls.power_w * (1.0 + ls.source_drift * keyed_normal(s, 101));
        double r = ls.split_ratio;
        PowerReadings p;
        p.a1 = pa * r * noise(0);
        p.a2 = pa * (1.0 - r) * t_empty * noise(1);
        p.b1 = pb * r * noise(2);
        p.b2 = pb * (1.0 - r) * t_full * volume * noise(3);
        csv << format_double(p.a1) << ',' << format_double(p.a2) << ',' << format_double(p.b1) << ','
            << format_double(p.b2) << '\n';
    }
    out.powers_csv = csv.str();

    std::istringstream in(out.powers_csv);
    auto rows = read_power_csv(in);
    double ratio = ch.filled() ? fresnel_correction(ch) : 1.0;
    double sum = 0.0, sum2 = 0.0;
    for (const auto &p : rows) {
        double a = estimate_attenuation(p, ch.length_m, ratio);
        sum += a;
        sum2 += a * a;
    }
    double n = static_cast<double>(rows.size());
    double mean = sum / n;
    double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
    LossReport lr;
    lr.alpha = {mean, std::sqrt(var / n)};
    lr.trial_sd = std::sqrt(var);
    lr.trials = static_cast<int>(rows.size());
    lr.fresnel_ratio = ratio;
    lr.configured = ch.attenuation_per_m;
    out.report.loss = lr;
}

struct SinglesCell {
    std::string run_id;
    std::string probe;
    std::string setting;
    int detector = 1;
    Acquisition acq;
};

inline void run_state_transfer(const ExperimentConfig &ec, const RunOptions &opts, RunOutput &out) {
    std::vector<SinglesCell> cells;
    std::uint64_t coupling_seed = sub_seed(ec.seed, "coupling", 0);
    for (const char *probe : kProbeLabels) {
        for (const char *setting : kProbeLabels) {
            std::size_t slot = cells.size() / 2;
            for (int det = 1; det <= 2; ++det) {
                SinglesCell c;
                c.run_id = std::string("probe_") + probe;
                c.probe = probe;
                c.setting = setting;
                c.detector = det;
                c.acq.start_s = static_cast<double>(slot) * ec.duration_s;
                c.acq.duration_s = ec.duration_s;
                c.acq.slice_s = ec.slice_s;
                c.acq.seed = sub_seed(ec.seed, "singles", cells.size());
                c.acq.coupling_seed = coupling_seed;
                cells.push_back(c);
            }
        }
    }
    std::vector<CountRecord> records(cells.size());
    stage("simulate", [&] {
        parallel_for(cells.size(), opts.threads, [&](std::size_t i) {
            const auto &c = cells[i];
            SourceSpec src = ec.source;
            src.state = DensityMatrix(probe_state(c.probe));
            const DetectorSpec &det = c.detector == 1 ? ec.detector1 : ec.detector2;
            std::string port = c.detector == 1 ? c.setting : orthogonal_label(c.setting);
            CountRecord r = simulate_singles(src, ec.channel, projector_state(port), det, ec.gate, c.acq);
            r.run_id = c.run_id;
            r.projector_label = c.setting;
            r.detector_id = c.detector;
            records[i] = std::move(r);
        });
        out.counts_csv = count_csv_string(records);
    });

    auto parsed = stage("read_counts", [&] { return parse_count_csv(out.counts_csv); });
    std::vector<ProbeReport> probes(kProbeLabels.size());
    std::vector<std::optional<StateEstimate>> estimates(kProbeLabels.size());
    stage("reconstruct", [&] {
        parallel_for(kProbeLabels.size(), opts.threads, [&](std::size_t i) {
            std::string probe = kProbeLabels[i];
            TomoDataset1Q data = dataset_1q_from_records(parsed, "probe_" + probe);
            StateEstimate est;
            if (ec.use_mle) {
                est = reconstruct_1q(data);
            } else {
                est.linear = linear_estimate_1q(data);
                est.rho = DensityMatrix::from_hermitian(clamp_psd(est.linear));
            }
            Tomo1QSummary summary = summarize_1q(data);
            ProbeReport pr;
            pr.probe = probe;
            pr.fidelity = state_fidelity(est.rho, DensityMatrix(probe_state(probe)));
            pr.stokes = summary.stokes;
            pr.eta_hv = summary.eta_hv;
            pr.eta_da = summary.eta_da;
            pr.eta_rl = summary.eta_rl;
            pr.mle_iterations = est.iterations;
            probes[i] = pr;
            estimates[i] = std::move(est);
        });
    });

    double sum = 0.0, sum2 = 0.0;
    for (const auto &p : probes) {
        sum += p.fidelity;
        sum2 += p.fidelity * p.fidelity;
    }
    double n = static_cast<double>(probes.size());
    double mean = sum / n;
    double sd = std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1)));
    out.report.probes = probes;
    out.report.mean_state_fidelity = Estimate{mean, sd / std::sqrt(n)};

    std::map<std::string, DensityMatrix> outputs;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        outputs.emplace(probes[i].probe, estimates[i]->rho);
        out.matrices["rho_" + probes[i].probe] = to_json(estimates[i]->rho);
        out.matrices["rho_linear_" + probes[i].probe] = matrix_to_json(estimates[i]->linear);
    }
    stage("process", [&] {
        ProcessEstimate pe = process_tomo_from_states(outputs);
        out.report.process_fidelity = process_fidelity(pe.chi, chi_identity());
        out.report.chi_projected = pe.projected;
        out.matrices["chi"] = to_json(pe.chi);
        out.matrices["chi_linear"] = matrix_to_json(pe.chi_linear);
    });
}

/// Analyzer label for a linear angle in degrees; the four basis angles use
/// their letter so visibilities can be read straight off the scan.
inline std::string scan_label(double deg) {
    double r = std::fmod(deg, 180.0);
    if (std::abs(r) < 1e-9 && deg < 90.0) return "H";
    if (std::abs(deg - 45.0) < 1e-9) return "D";
    if (std::abs(deg - 90.0) < 1e-9) return "V";
    if (std::abs(deg - 135.0) < 1e-9) return "A";
    return angle_label(deg * std::numbers::pi / 180.0);
}

/// Inverse of scan_label, in degrees.
inline double scan_angle_deg(const std::string &label) {
    if (label == "H") return 0.0;
    if (label == "D") return 45.0;
    if (label == "V") return 90.0;
    if (label == "A") return 135.0;
    if (label.rfind("lin", 0) == 0) return std::stod(label.substr(3));
    throw InputError("not a linear analyzer label: " + label);
}

inline const std::array<const char *, 4> kScanSettingsA{"H", "V", "D", "A"};

inline std::vector<std::string> scan_angles(double step_deg) {
    std::vector<std::string> out;
    int n = static_cast<int>(std::lround(180.0 / step_deg));
    for (int k = 0; k <= n; ++k) out.push_back(scan_label(k * step_deg));
    return out;
}

struct PairCell {
    std::string run_id;
    std::string a, b;
    const ChannelSpec *channel = nullptr;
    Acquisition acq;
};

inline void run_entanglement(const ExperimentConfig &ec, const RunOptions &opts, RunOutput &out) {
    std::vector<std::pair<std::string, const ChannelSpec *>> conds;
    if (ec.with_reference) conds.emplace_back("reference", &ec.reference);
    conds.emplace_back("channel", &ec.channel);

    std::vector<PairCell> cells;
    auto add_cells = [&](const std::string &run_id, const ChannelSpec *ch, const std::vector<SettingPair> &pairs,
                         std::uint64_t coupling_seed) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            PairCell c;
            c.run_id = run_id;
            c.a = pairs[i].first;
            c.b = pairs[i].second;
            c.channel = ch;
            c.acq.start_s = static_cast<double>(i) * ec.duration_s;
            c.acq.duration_s = ec.duration_s;
            c.acq.slice_s = ec.slice_s;
            c.acq.seed = sub_seed(ec.seed, run_id, i);
            c.acq.coupling_seed = coupling_seed;
            cells.push_back(c);
        }
    };
    std::vector<SettingPair> scan;
    for (const char *a : kScanSettingsA)
        for (const auto &b : scan_angles(ec.scan_step_deg)) scan.emplace_back(a, b);
    for (const auto &[name, ch] : conds) {
        std::uint64_t coupling = sub_seed(ec.seed, "coupling_" + name, 0);
        add_cells("tomo_" + name, ch, tomography_settings(ec.scheme), coupling);
        add_cells("scan_" + name, ch, scan, coupling);
    }

    std::vector<PairCounts> counts(cells.size());
    stage("simulate", [&] {
        parallel_for(cells.size(), opts.threads, [&](std::size_t i) {
            const auto &c = cells[i];
            counts[i] = simulate_pairs(ec.source, *c.channel, projector_state(c.a), projector_state(c.b), ec.detector1,
                                       ec.detector2, ec.gate, c.acq);
        });
        std::vector<CountRecord> records;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            auto recs = pair_records(cells[i].run_id, cells[i].a, cells[i].b, counts[i], cells[i].acq);
            records.insert(records.end(), recs.begin(), recs.end());
        }
        out.counts_csv = count_csv_string(records);
    });

    auto parsed = stage("read_counts", [&] { return parse_count_csv(out.counts_csv); });
    std::vector<std::optional<StateEstimate>> states(conds.size());
    stage("reconstruct", [&] {
        parallel_for(conds.size(), opts.threads, [&](std::size_t i) {
            TomoDataset2Q data = dataset_2q_from_records(parsed, "tomo_" + conds[i].first);
            states[i] = tomo_2q(data, ec.use_mle);
        });
    });
    stage("visibility", [&] {
        for (std::size_t i = 0; i < conds.size(); ++i) {
            const std::string &name = conds[i].first;
            CorrelationTable table = correlation_table_from_records(parsed, "scan_" + name);
            ConditionReport cr;
            cr.condition = name;
            cr.visibility_hv = visibility(table, Basis::HV);
            cr.visibility_da = visibility(table, Basis::DA);
            cr.singlet_fidelity = state_fidelity(states[i]->rho, singlet());
            out.report.conditions.push_back(cr);
            out.matrices["rho_" + name] = to_json(states[i]->rho);
            out.matrices["rho_linear_" + name] = matrix_to_json(states[i]->linear);
        }
        if (conds.size() == 2) out.report.state_overlap = state_fidelity(states[0]->rho, states[1]->rho);
    });
}

inline void run_chsh_kind(const ExperimentConfig &ec, const RunOptions &opts, RunOutput &out) {
    std::vector<std::pair<std::string, const ChannelSpec *>> conds;
    if (ec.with_reference) conds.emplace_back("reference", &ec.reference);
    conds.emplace_back("channel", &ec.channel);
    std::vector<CountRecord> all;
    stage("chsh", [&] {
        for (const auto &[name, ch] : conds) {
            ChshRun run = run_chsh(ec.source, *ch, ec.chsh, ec.detector1, ec.detector2, ec.gate, ec.duration_s,
                                   ec.seed, ec.subtract_accidentals, opts.threads, "chsh_" + name);
            all.insert(all.end(), run.records.begin(), run.records.end());
            out.report.chsh.push_back({name, run.result, run.table});
        }
        out.counts_csv = count_csv_string(all);
    });
}

inline void evaluate_checks(const ExperimentConfig &ec, RunReport &r) {
    const auto &c = ec.check;
    auto fail = [&](const std::string &what) { r.check_failures.push_back(what); };
    if (c.min_state_fidelity) {
        for (const auto &p : r.probes)
            if (p.fidelity < *c.min_state_fidelity) fail("state fidelity of probe " + p.probe);
    }
    if (c.min_process_fidelity && r.process_fidelity && *r.process_fidelity < *c.min_process_fidelity) {
        fail("process fidelity");
    }
    if (c.max_loss_deviation && r.loss &&
        std::abs(r.loss->alpha.value - r.loss->configured) > *c.max_loss_deviation) {
        fail("attenuation estimate");
    }
    if (c.min_chsh_sigma) {
        for (const auto &ch : r.chsh)
            if (ch.result.n_sigma_violation < *c.min_chsh_sigma) fail("CHSH significance (" + ch.condition + ")");
    }
    if (c.max_visibility_sigmas) {
        const ConditionReport *ref = r.condition("reference");
        const ConditionReport *chn = r.condition("channel");
        if (ref && chn) {
            auto compatible = [&](const Estimate &a, const Estimate &b) {
                double s = std::hypot(a.sigma, b.sigma);
                return std::abs(a.value - b.value) <= *c.max_visibility_sigmas * s;
            };
            if (!compatible(ref->visibility_hv, chn->visibility_hv)) fail("H/V visibility change");
            if (!compatible(ref->visibility_da, chn->visibility_da)) fail("D/A visibility change");
        }
    }
    if (c.min_state_overlap && r.state_overlap && *r.state_overlap < *c.min_state_overlap) {
        fail("state overlap between conditions");
    }
}

}  // namespace experiment_detail

inline RunOutput run_experiment(const ExperimentConfig &ec, const RunOptions &opts = {}) {
    using namespace experiment_detail;
    auto start = std::chrono::steady_clock::now();
    RunOutput out;
    out.config_text = ec.source_config.canonical();
    RunReport &r = out.report;
    r.kind = to_string(ec.kind);
    r.name = ec.name;
    r.label = ec.label;
    r.config_digest = ec.digest();
    r.seed = ec.seed;
    switch (ec.kind) {
        case ExperimentKind::loss_measurement:
            stage("loss", [&] { run_loss(ec, out); });
            break;
        case ExperimentKind::state_transfer:
        case ExperimentKind::process_tomo:
            stage("loss", [&] { run_loss(ec, out); });
            run_state_transfer(ec, opts, out);
            break;
        case ExperimentKind::entanglement:
            run_entanglement(ec, opts, out);
            break;
        case ExperimentKind::chsh:
            run_chsh_kind(ec, opts, out);
            break;
        case ExperimentKind::link_budget:
            stage("budget", [&] {
                r.budget = BudgetReport{ec.budget.alpha_per_m, ec.budget.loss_db,
                                        achievable_distance(ec.budget.alpha_per_m, ec.budget.loss_db)};
            });
            break;
    }
    evaluate_checks(ec, r);
    r.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

enum class OutputFormat { csv, json };

inline OutputFormat output_format_from_string(const std::string &s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("format", "expected csv or json");
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PipelineError("write", "cannot open " + path.string());
    f << text;
    if (!f) throw PipelineError("write", "cannot write " + path.string());
}

inline std::string read_text(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PipelineError("read", "missing artifact " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Writes config.cfg, counts.csv, powers.csv, states/*.json, report.json
/// (plus report.csv for the csv format) and meta.json. Only meta.json
/// differs between repeated runs.
inline void write_run(const RunOutput &out, const std::filesystem::path &dir, OutputFormat format,
                      const RunOptions &opts = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PipelineError("write", "cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / "config.cfg", out.config_text);
    if (!out.counts_csv.empty()) write_text(dir / "counts.csv", out.counts_csv);
    if (!out.powers_csv.empty()) write_text(dir / "powers.csv", out.powers_csv);
    if (!out.matrices.empty()) {
        fs::create_directories(dir / "states", ec);
        if (ec) throw PipelineError("write", "cannot create " + (dir / "states").string());
        for (const auto &[stem, j] : out.matrices) write_text(dir / "states" / (stem + ".json"), j.dump(2) + "\n");
    }
    nlohmann::json report = out.report.to_json();
    write_text(dir / "report.json", report.dump(2) + "\n");
    if (format == OutputFormat::csv) write_text(dir / "report.csv", report_csv(report));

    char stamp[32];
    std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    nlohmann::json meta = {{"wall_clock_s", out.report.wall_clock_s},
                           {"finished_utc", stamp},
                           {"threads", opts.threads},
                           {"seed", out.report.seed},
                           {"config_digest", out.report.config_digest}};
    write_text(dir / "meta.json", meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Sample table

inline const std::array<const char *, 8> kTable1Presets{"sample_I", "sample_II", "sample_III", "sample_IV",
                                                         "sample_V", "sample_VI", "distilled", "air"};

struct Table1Row {
    std::string name;
    std::string label;
    Estimate loss;
    Estimate state_fidelity;
    double process_fidelity = 0.0;
};

/// Runs the eight sample-table presets from `preset_dir`. With a seed override,
/// preset k runs with sub_seed(seed, name, 0). When `out_dir` is set each
/// run is written to out_dir/<name>.
inline std::vector<Table1Row> table1(const std::filesystem::path &preset_dir, std::optional<std::uint64_t> seed,
                                     const RunOptions &opts = {}, const std::filesystem::path &out_dir = {},
                                     OutputFormat format = OutputFormat::json) {
    std::vector<Table1Row> rows;
    for (const char *name : kTable1Presets) {
        std::optional<std::uint64_t> s;
        if (seed) s = sub_seed(*seed, name, 0);
        ExperimentConfig ec = ExperimentConfig::load(preset_dir / (std::string(name) + ".cfg"), s);
        if (ec.kind != ExperimentKind::state_transfer && ec.kind != ExperimentKind::process_tomo) {
            throw ConfigError("kind", std::string(name) + " is not a state_transfer preset");
        }
        RunOutput out = run_experiment(ec, opts);
        if (!out_dir.empty()) write_run(out, out_dir / name, format, opts);
        Table1Row row;
        row.name = name;
        row.label = ec.label;
        row.loss = out.report.loss->alpha;
        row.state_fidelity = *out.report.mean_state_fidelity;
        row.process_fidelity = *out.report.process_fidelity;
        rows.push_back(row);
    }
    return rows;
}

/// "0.3081(4)": value rounded to `digits` decimals, sigma in units of the last digit.
inline std::string format_uncertain(double value, double sigma, int digits) {
    char buf[64];
    double unit = std::pow(10.0, -digits);
    long long s = std::llround(sigma / unit);
    if (std::abs(value) < unit / 2.0) value = 0.0;
    std::snprintf(buf, sizeof(buf), "%.*f(%lld)", digits, value, s);
    return buf;
}

inline std::string table1_text(const std::vector<Table1Row> &rows) {
    std::vector<std::vector<std::string>> grid(4);
    grid[0].push_back("Sample");
    grid[1].push_back("Loss (1/m)");
    grid[2].push_back("State fidelity");
    grid[3].push_back("Process fidelity");
    char buf[64];
    for (const auto &r : rows) {
        grid[0].push_back(r.label);
        grid[1].push_back(format_uncertain(r.loss.value, r.loss.sigma, 4));
        grid[2].push_back(format_uncertain(r.state_fidelity.value, r.state_fidelity.sigma, 4));
        std::snprintf(buf, sizeof(buf), "%.4f", r.process_fidelity);
        grid[3].push_back(buf);
    }
    std::vector<std::size_t> width(grid[0].size(), 0);
    for (const auto &line : grid)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    std::string out;
    for (const auto &line : grid) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            std::string cell = line[c];
            if (c == 0) {
                out += cell + std::string(width[c] - cell.size(), ' ');
            } else {
                out += "  " + std::string(width[c] - cell.size(), ' ') + cell;
            }
        }
        out += "\n";
    }
    return out;
}

inline std::string table1_csv(const std::vector<Table1Row> &rows) {
    std::string out = "sample,label,loss_per_m,loss_sigma,state_fidelity,state_fidelity_sigma,process_fidelity\n";
    for (const auto &r : rows) {
        out += r.name + "," + r.label + "," + format_double(r.loss.value) + "," + format_double(r.loss.sigma) + "," +
               format_double(r.state_fidelity.value) + "," + format_double(r.state_fidelity.sigma) + "," +
               format_double(r.process_fidelity) + "\n";
    }
    return out;
}

inline nlohmann::json table1_json(const std::vector<Table1Row> &rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : rows) {
        arr.push_back({{"sample", r.name},
                       {"label", r.label},
                       {"loss_per_m", estimate_json(r.loss)},
                       {"state_fidelity", estimate_json(r.state_fidelity)},
                       {"process_fidelity", r.process_fidelity}});
    }
    return {{"rows", arr}};
}

// ---------------------------------------------------------------------------
// Plot data

enum class Figure { fig2b, fig2c, fig3, fig4 };

inline Figure figure_from_string(const std::string &s) {
    if (s == "fig2b") return Figure::fig2b;
    if (s == "fig2c") return Figure::fig2c;
    if (s == "fig3") return Figure::fig3;
    if (s == "fig4") return Figure::fig4;
    throw ConfigError("figure", "expected fig2b, fig2c, fig3 or fig4");
}

namespace experiment_detail {

inline nlohmann::json load_json(const std::filesystem::path &path) {
    std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const std::exception &e) {
        throw PipelineError("plot", path.string() + ": " + e.what());
    }
}

inline CMatrix load_matrix(const std::filesystem::path &path) {
    try {
        return matrix_from_json(load_json(path));
    } catch (const PipelineError &) {
        throw;
    } catch (const std::exception &e) {
        throw PipelineError("plot", path.string() + ": " + e.what());
    }
}

}  // namespace experiment_detail

/// Long-format plot table from run artifacts. fig2b reads a table1 output
/// directory; fig2c a state_transfer run; fig3 and fig4 an entanglement run.
inline std::string emit_plotdata(Figure figure, const std::filesystem::path &dir, OutputFormat format) {
    using namespace experiment_detail;
    using nlohmann::json;
    json rows = json::array();
    std::string csv;
    switch (figure) {
        case Figure::fig2b: {
            json table = load_json(dir / "table1.json");
            csv = "channel,probe,fidelity\n";
            for (const auto &row : table.at("rows")) {
                std::string name = row.at("sample").get<std::string>();
                std::string label = row.at("label").get<std::string>();
                json report = load_json(dir / name / "report.json");
                if (!report.contains("probes")) throw PipelineError("plot", name + " report has no probe fidelities");
                for (const auto &p : report["probes"]) {
                    double f = p.at("fidelity").get<double>();
                    std::string probe = p.at("probe").get<std::string>();
                    csv += label + "," + probe + "," + format_double(f) + "\n";
                    rows.push_back({{"channel", label}, {"probe", probe}, {"fidelity", f}});
                }
            }
            break;
        }
        case Figure::fig2c: {
            csv = "probe,row,col,re,im\n";
            for (const char *probe : kProbeLabels) {
                CMatrix m = load_matrix(dir / "states" / (std::string("rho_") + probe + ".json"));
                for (int r = 0; r < m.rows(); ++r) {
                    for (int c = 0; c < m.cols(); ++c) {
                        csv += std::string(probe) + "," + std::to_string(r) + "," + std::to_string(c) + "," +
                               format_double(m(r, c).real()) + "," + format_double(m(r, c).imag()) + "\n";
                        rows.push_back({{"probe", probe},
                                        {"row", r},
                                        {"col", c},
                                        {"re", m(r, c).real()},
                                        {"im", m(r, c).imag()}});
                    }
                }
            }
            break;
        }
        case Figure::fig3: {
            auto records = parse_count_csv(read_text(dir / "counts.csv"));
            csv = "condition,setting_A,angle_B_deg,coincidences,poisson_sigma\n";
            bool any = false;
            for (const auto &r : records) {
                if (r.detector_id != 0 || r.run_id.rfind("scan_", 0) != 0) continue;
                any = true;
                std::string condition = r.run_id.substr(5);
                auto [a, b] = split_pair_label(r.projector_label);
                double angle = scan_angle_deg(b);
                double n = static_cast<double>(r.gated_counts);
                csv += condition + "," + a + "," + format_double(angle) + "," + std::to_string(r.gated_counts) + "," +
                       format_double(std::sqrt(n)) + "\n";
                rows.push_back({{"condition", condition},
                                {"setting_A", a},
                                {"angle_B_deg", angle},
                                {"coincidences", r.gated_counts},
                                {"poisson_sigma", std::sqrt(n)}});
            }
            if (!any) throw PipelineError("plot", "counts.csv has no correlation scan");
            break;
        }
        case Figure::fig4: {
            csv = "condition,part,row,col,value\n";
            bool any = false;
            for (const char *condition : {"reference", "channel"}) {
                auto path = dir / "states" / (std::string("rho_linear_") + condition + ".json");
                if (!std::filesystem::exists(path)) continue;
                any = true;
                CMatrix m = load_matrix(path);
                for (const char *part : {"re", "im"}) {
                    for (int r = 0; r < m.rows(); ++r) {
                        for (int c = 0; c < m.cols(); ++c) {
                            double v = part[0] == 'r' ? m(r, c).real() : m(r, c).imag();
                            csv += std::string(condition) + "," + part + "," + std::to_string(r) + "," +
                                   std::to_string(c) + "," + format_double(v) + "\n";
                            rows.push_back(
                                {{"condition", condition}, {"part", part}, {"row", r}, {"col", c}, {"value", v}});
                        }
                    }
                }
            }
            if (!any) throw PipelineError("plot", "missing artifact states/rho_linear_*.json in " + dir.string());
            break;
        }
    }
    if (format == OutputFormat::csv) return csv;
    return json{{"rows", rows}}.dump(2) + "\n";
}

}  // namespace seaq
