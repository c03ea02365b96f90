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

#include "seaq/bell.hpp"
#include "support.hpp"

namespace seaq {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(CorrelationE, SpecExamples) {
    Estimate perfect = correlation_E(100, 0, 0, 100);
    EXPECT_EQ(perfect.value, 1.0);
    EXPECT_EQ(perfect.sigma, 0.0);
    Estimate flat = correlation_E(50, 50, 50, 50);
    EXPECT_EQ(flat.value, 0.0);
    EXPECT_NEAR(flat.sigma, 1.0 / std::sqrt(200.0), 1e-15);
    EXPECT_THROW(correlation_E(0, 0, 0, 0), DegenerateDataError);
}

TEST(CorrelationE, SigmaMatchesNumericalPropagation) {
    std::array<double, 4> n{812, 95, 120, 760};
    Estimate e = correlation_E(n[0], n[1], n[2], n[3]);
    double var = 0.0;
    for (int k = 0; k < 4; ++k) {
        auto m = n;
        double h = 1e-3;
        m[k] += h;
        double up = correlation_E(m[0], m[1], m[2], m[3]).value;
        m[k] -= 2 * h;
        double dn = correlation_E(m[0], m[1], m[2], m[3]).value;
        double d = (up - dn) / (2 * h);
        var += d * d * n[k];
    }
    EXPECT_NEAR(e.sigma, std::sqrt(var), 1e-9);
}

TEST(ExactCorrelation, SingletFollowsCosine) {
    std::mt19937_64 rng(201);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int i = 0; i < 200; ++i) {
        double a = angle(rng), b = angle(rng);
        EXPECT_NEAR(exact_correlation(singlet(), a, b), -std::cos(2.0 * (a - b)), 1e-12);
    }
}

TEST(Chsh, SingletCanonicalReachesTsirelson) {
    EXPECT_NEAR(exact_chsh(singlet(), ChshSettings{}), 2.0 * std::sqrt(2.0), 1e-9);
}

TEST(Chsh, WernerScalesWithVisibility) {
    for (double v : {0.5, 0.8, 0.953, 1.0}) {
        EXPECT_NEAR(exact_chsh(werner(v), ChshSettings{}), 2.0 * std::sqrt(2.0) * v, 1e-12);
    }
}

TEST(Chsh, ProductStatesObeyClassicalBound) {
    std::mt19937_64 rng(203);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int i = 0; i < 2000; ++i) {
        DensityMatrix rho = tensor(testing::random_state(rng, 2), testing::random_state(rng, 2));
        ChshSettings s{angle(rng), angle(rng), angle(rng), angle(rng)};
        EXPECT_LE(exact_chsh(rho, s), 2.0 + 1e-9);
    }
}

TEST(Chsh, TsirelsonBoundOnRandomStates) {
    std::mt19937_64 rng(207);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int i = 0; i < 2000; ++i) {
        DensityMatrix rho = testing::random_state(rng, 4);
        ChshSettings s{angle(rng), angle(rng), angle(rng), angle(rng)};
        EXPECT_LE(exact_chsh(rho, s), 2.0 * std::sqrt(2.0) + 1e-9);
    }
}

TEST(Chsh, ExchangingAnalyzersWithRelabeledSettings) {
    std::mt19937_64 rng(209);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int i = 0; i < 200; ++i) {
        DensityMatrix rho = testing::random_state(rng, 4);
        ChshSettings s{angle(rng), angle(rng), angle(rng), angle(rng)};
        DensityMatrix swapped(swap_qubits(rho.matrix()));
        ChshSettings t{s.b_prime, s.b, s.a_prime, s.a};
        EXPECT_NEAR(exact_chsh(swapped, t), exact_chsh(rho, s), 1e-12);
    }
}

TEST(Chsh, SignificanceArithmetic) {
    EXPECT_NEAR(n_sigma(2.6695, 0.0203), 32.98, 0.005);
    EXPECT_EQ(std::lround(n_sigma(2.6695, 0.0203)), 33);
    EXPECT_NEAR(n_sigma(2.6936, 0.0074), 93.73, 0.005);
    EXPECT_EQ(n_sigma(1.9, 0.0), 0.0);
    EXPECT_TRUE(std::isinf(n_sigma(2.1, 0.0)));
    ChshResult r = chsh_S({Estimate{0.7, 0.01}, Estimate{-0.7, 0.01}, Estimate{0.7, 0.01}, Estimate{0.7, 0.01}});
    EXPECT_NEAR(r.S, 2.8, 1e-12);
    EXPECT_NEAR(r.sigma_S, 0.02, 1e-12);
    EXPECT_NEAR(r.n_sigma_violation, 40.0, 1e-9);
}

TEST(Chsh, SettingsValidation) {
    ChshSettings s;
    s.a_prime = s.a;
    EXPECT_THROW(s.validate(), InputError);
    EXPECT_EQ(chsh_setting_pairs(ChshSettings{}).size(), 16u);
    EXPECT_EQ(angle_label(kPi / 8.0), "lin22.5");
}

struct Rig {
    SourceSpec source;
    ChannelSpec channel;
    DetectorSpec det;
    GateSpec gate;
    Rig() {
        source.kind = SourceKind::spdc_pair;
        source.pair_rate_hz = 4e5;
        source.state = singlet();
        gate.window_s = 1e-12;
    }
};

TEST(RunChsh, NoiselessSingletWithinThreeSigma) {
    Rig rig;
    ChshRun run = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 1.0, 11);
    EXPECT_LT(std::abs(run.result.S - 2.0 * std::sqrt(2.0)), 3.0 * run.result.sigma_S);
    EXPECT_GT(run.result.n_sigma_violation, 50.0);
    EXPECT_EQ(run.records.size(), 48u);
}

TEST(RunChsh, WernerSourceMatchesAnalyticS) {
    Rig rig;
    rig.source.state = werner(0.9);
    ChshRun run = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 2.0, 13);
    EXPECT_LT(std::abs(run.result.S - 2.0 * std::sqrt(2.0) * 0.9), 3.0 * run.result.sigma_S);
}

TEST(RunChsh, SigmaShrinksWithDuration) {
    Rig rig;
    double prev = std::numeric_limits<double>::infinity();
    for (double d : {0.1, 0.4, 1.6}) {
        double s = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, d, 17).result.sigma_S;
        EXPECT_LT(s, prev);
        prev = s;
    }
}

TEST(RunChsh, AccidentalSubtraction) {
    Rig rig;
    rig.gate.window_s = 3.5e-9;
    rig.det.dark_rate_cps = 2e5;
    ChshRun raw = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 1.0, 19);
    ChshRun sub = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 1.0, 19, true);
    EXPECT_EQ(count_csv_string(raw.records), count_csv_string(sub.records));
    EXPECT_GT(sub.result.S, raw.result.S);
}

TEST(RunChsh, DeterministicAcrossThreadCounts) {
    Rig rig;
    rig.channel.wandering.mean_coupling = 0.7;
    rig.channel.wandering.noise_sigma = 0.05;
    std::string ref;
    for (unsigned threads : {1u, 2u, 4u, 7u}) {
        ChshRun run = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 0.5, 23, false,
                               threads);
        std::string csv = count_csv_string(run.records);
        if (ref.empty()) ref = csv;
        EXPECT_EQ(csv, ref) << threads;
    }
    ChshRun other = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 0.5, 24);
    EXPECT_NE(count_csv_string(other.records), ref);
}

TEST(ChshFromTable, ReadsCsvRoundTrip) {
    Rig rig;
    ChshRun run = run_chsh(rig.source, rig.channel, ChshSettings{}, rig.det, rig.det, rig.gate, 0.2, 29);
    auto records = parse_count_csv(count_csv_string(run.records));
    ChshResult again = chsh_from_table(correlation_table_from_records(records, "chsh"), ChshSettings{});
    EXPECT_EQ(again.S, run.result.S);
    EXPECT_EQ(again.sigma_S, run.result.sigma_S);
    CorrelationTable partial = correlation_table_from_records(records, "chsh");
    partial.entries.erase(partial.entries.begin());
    EXPECT_THROW(chsh_from_table(partial, ChshSettings{}), InputError);
}

}  // namespace
}  // namespace seaq
