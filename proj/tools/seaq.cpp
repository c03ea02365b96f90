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

// seaq command line: run, table1, plot, budget.
//
// Exit codes: 0 success, 1 config or usage error, 2 pipeline error,
// 3 a configured acceptance threshold was not met.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seaq/experiment.hpp"

#ifndef SEAQ_PRESET_DIR
#define SEAQ_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace seaq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPipeline = 2;
constexpr int kExitThreshold = 3;

struct Common {
    std::string config;
    std::string preset;
    std::string preset_dir = SEAQ_PRESET_DIR;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";
    unsigned threads = 1;
};

fs::path config_path(const Common &c) {
    if (!c.config.empty() && !c.preset.empty()) throw ConfigError("config", "give --config or --preset, not both");
    if (!c.preset.empty()) return fs::path(c.preset_dir) / (c.preset + ".cfg");
    if (c.config.empty()) throw ConfigError("config", "--config or --preset is required");
    return c.config;
}

void print_summary(const RunReport &r) {
    std::printf("%s %s seed=%llu digest=%s\n", r.kind.c_str(), r.name.c_str(),
                static_cast<unsigned long long>(r.seed), r.config_digest.c_str());
    if (r.loss) {
        std::printf("  attenuation %.4f +- %.4f 1/m (configured %.4f, %d trials)\n", r.loss->alpha.value,
                    r.loss->alpha.sigma, r.loss->configured, r.loss->trials);
    }
    for (const auto &p : r.probes) std::printf("  probe %s fidelity %.5f\n", p.probe.c_str(), p.fidelity);
    if (r.mean_state_fidelity) {
        std::printf("  mean state fidelity %.5f +- %.5f\n", r.mean_state_fidelity->value,
                    r.mean_state_fidelity->sigma);
    }
    if (r.process_fidelity) std::printf("  process fidelity %.5f\n", *r.process_fidelity);
    for (const auto &c : r.conditions) {
        std::printf("  %-9s V_HV %.4f +- %.4f  V_DA %.4f +- %.4f  F(singlet) %.4f\n", c.condition.c_str(),
                    c.visibility_hv.value, c.visibility_hv.sigma, c.visibility_da.value, c.visibility_da.sigma,
                    c.singlet_fidelity);
    }
    if (r.state_overlap) std::printf("  fidelity between conditions %.5f\n", *r.state_overlap);
    for (const auto &c : r.chsh) {
        std::printf("  %-9s S = %.4f +- %.4f (%.1f sigma)\n", c.condition.c_str(), c.result.S, c.result.sigma_S,
                    c.result.n_sigma_violation);
    }
    if (r.budget) {
        std::printf("  %.1f m at %.4g 1/m within %.4g dB\n", r.budget->distance_m, r.budget->alpha_per_m,
                    r.budget->loss_db);
    }
    for (const auto &f : r.check_failures) std::printf("  CHECK FAILED: %s\n", f.c_str());
}

int cmd_run(const Common &c) {
    ExperimentConfig ec = ExperimentConfig::load(config_path(c), c.seed);
    OutputFormat format = output_format_from_string(c.format);
    RunOptions opts{c.threads};
    RunOutput out = run_experiment(ec, opts);
    if (!c.out.empty()) {
        write_run(out, c.out, format, opts);
        print_summary(out.report);
    } else if (format == OutputFormat::json) {
        std::cout << out.report.to_json().dump(2) << "\n";
    } else {
        std::cout << report_csv(out.report.to_json());
    }
    return out.report.check_failures.empty() ? kExitOk : kExitThreshold;
}

int cmd_table1(const Common &c, bool check) {
    OutputFormat format = output_format_from_string(c.format);
    RunOptions opts{c.threads};
    auto rows = table1(c.preset_dir, c.seed, opts, c.out, format);
    std::string text = table1_text(rows);
    std::cout << text;
    if (!c.out.empty()) {
        write_text(fs::path(c.out) / "table1.txt", text);
        write_text(fs::path(c.out) / "table1.json", table1_json(rows).dump(2) + "\n");
        if (format == OutputFormat::csv) write_text(fs::path(c.out) / "table1.csv", table1_csv(rows));
    } else if (format == OutputFormat::csv) {
        std::cout << "\n" << table1_csv(rows);
    } else {
        std::cout << "\n" << table1_json(rows).dump(2) << "\n";
    }
    if (!check) return kExitOk;
    bool ok = true;
    double loss_sum = 0.0;
    int samples = 0;
    for (const auto &r : rows) {
        if (r.state_fidelity.value <= 0.98 || r.process_fidelity <= 0.98) {
            std::printf("CHECK FAILED: fidelity of %s\n", r.label.c_str());
            ok = false;
        }
        if (r.name.rfind("sample_", 0) == 0) {
            loss_sum += r.loss.value;
            ++samples;
        }
    }
    double mean_loss = loss_sum / samples;
    if (std::abs(mean_loss - 0.354) > 0.01) {
        std::printf("CHECK FAILED: mean sample loss %.4f 1/m\n", mean_loss);
        ok = false;
    }
    return ok ? kExitOk : kExitThreshold;
}

int cmd_plot(const Common &c, const std::string &figure_name, const std::string &run_dir) {
    Figure figure = figure_from_string(figure_name);
    OutputFormat format = output_format_from_string(c.format);
    RunOptions opts{c.threads};
    fs::path dir = run_dir;
    if (dir.empty()) {
        dir = c.out.empty() ? fs::path("seaq_out") : fs::path(c.out);
        if (figure == Figure::fig2b) {
            auto rows = table1(c.preset_dir, c.seed, opts, dir, OutputFormat::json);
            write_text(dir / "table1.json", table1_json(rows).dump(2) + "\n");
        } else {
            ExperimentConfig ec = ExperimentConfig::load(config_path(c), c.seed);
            write_run(run_experiment(ec, opts), dir, OutputFormat::json, opts);
        }
    }
    std::string data = emit_plotdata(figure, dir, format);
    fs::path target = dir / (figure_name + (format == OutputFormat::csv ? ".csv" : ".json"));
    write_text(target, data);
    std::cout << target.string() << "\n";
    return kExitOk;
}

int cmd_budget(const Common &c, std::optional<double> alpha, std::optional<double> loss_db) {
    BudgetSettings b;
    if (!c.config.empty() || !c.preset.empty()) {
        ExperimentConfig ec = ExperimentConfig::load(config_path(c), c.seed);
        b = ec.budget;
    }
    if (alpha) b.alpha_per_m = *alpha;
    if (loss_db) b.loss_db = *loss_db;
    double distance = 0.0;
    try {
        distance = achievable_distance(b.alpha_per_m, b.loss_db);
    } catch (const InputError &e) {
        throw ConfigError("budget", e.what());
    }
    if (output_format_from_string(c.format) == OutputFormat::csv) {
        std::cout << "alpha_per_m,loss_db,distance_m\n"
                  << format_double(b.alpha_per_m) << "," << format_double(b.loss_db) << ","
                  << format_double(distance) << "\n";
    } else {
        nlohmann::json j = {{"alpha_per_m", b.alpha_per_m}, {"loss_db", b.loss_db}, {"distance_m", distance}};
        std::cout << j.dump(2) << "\n";
    }
    return kExitOk;
}

void add_common(CLI::App *cmd, Common &c, bool with_config) {
    if (with_config) {
        cmd->add_option("--config", c.config, "experiment config file");
        cmd->add_option("--preset", c.preset, "name of a file in the preset directory");
    }
    cmd->add_option("--preset-dir", c.preset_dir, "preset directory")->capture_default_str();
    cmd->add_option("--seed", c.seed, "master seed, overrides the config");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"seaq: polarization qubits through seawater"};
    app.require_subcommand(1);
    Common common;

    auto *run = app.add_subcommand("run", "run one experiment config");
    add_common(run, common, true);

    bool check = false;
    auto *t1 = app.add_subcommand("table1", "run the eight sample presets and tabulate them");
    add_common(t1, common, false);
    t1->add_flag("--check", check, "exit 3 unless every fidelity exceeds 0.98 and the mean loss is 0.354(10)");

    std::string figure, run_dir;
    auto *plot = app.add_subcommand("plot", "emit plot data from run artifacts");
    add_common(plot, common, true);
    plot->add_option("--figure", figure, "fig2b, fig2c, fig3 or fig4")->required();
    plot->add_option("--run", run_dir, "existing run directory (table1 directory for fig2b)");

    std::optional<double> alpha, loss_db;
    auto *budget = app.add_subcommand("budget", "distance reachable within a loss budget");
    add_common(budget, common, true);
    budget->add_option("--alpha", alpha, "attenuation coefficient (1/m)");
    budget->add_option("--loss-db", loss_db, "loss budget (dB)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(common);
        if (*t1) return cmd_table1(common, check);
        if (*plot) return cmd_plot(common, figure, run_dir);
        if (*budget) return cmd_budget(common, alpha, loss_db);
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "seaq: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "seaq: %s\n", e.what());
        return kExitPipeline;
    }
    return kExitOk;
}
