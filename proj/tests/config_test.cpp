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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "seaq/config.hpp"
#include "seaq/experiment.hpp"

namespace seaq {
namespace {

std::string field_of(const std::string &text) {
    try {
        ExperimentConfig::from_config(Config::parse(text));
    } catch (const ConfigError &e) {
        return e.field;
    }
    return "<no error>";
}

const char *kMinimalTransfer = R"(schema_version = 1
kind = state_transfer
seed = 5
channel.attenuation_per_m = 0.3
source.mean_photon_mu = 0.5
)";

TEST(Config, KeysSectionsAndComments) {
    Config c = Config::parse(R"(
# leading comment
schema_version = 1
top = hello   # trailing comment
[channel]
length_m = 3.3
wandering.period_s = 60
[]
after = 2
)");
    EXPECT_EQ(c.get_string("top"), "hello");
    EXPECT_DOUBLE_EQ(c.get_double("channel.length_m"), 3.3);
    EXPECT_DOUBLE_EQ(c.get_double("channel.wandering.period_s"), 60.0);
    EXPECT_EQ(c.get_int("after"), 2);
    EXPECT_FALSE(c.has("length_m"));
}

TEST(Config, TypedGetters) {
    Config c = Config::parse("schema_version = 1\nx = 1e-3\nflag = yes\nn = 42\naxis = 0 0.5 -1\nword = abc\n");
    EXPECT_DOUBLE_EQ(c.get_double("x"), 1e-3);
    EXPECT_TRUE(c.get_bool("flag"));
    EXPECT_EQ(c.get_u64("n"), 42u);
    EXPECT_EQ(c.get_doubles("axis"), (std::vector<double>{0.0, 0.5, -1.0}));
    EXPECT_DOUBLE_EQ(c.get_double("missing", 7.0), 7.0);
    try {
        c.get_double("word");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field, "word");
    }
    EXPECT_THROW(c.get_bool("word"), ConfigError);
    EXPECT_THROW(c.get_u64("axis"), ConfigError);
    EXPECT_THROW(c.get_string("nope"), ConfigError);
}

TEST(Config, SchemaVersionRequired) {
    try {
        Config::parse("kind = chsh\n");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field, "schema_version");
    }
    EXPECT_THROW(Config::parse("schema_version = 2\n"), ConfigError);
}

TEST(Config, SyntaxErrors) {
    EXPECT_THROW(Config::parse("schema_version = 1\njust words\n"), ConfigError);
    EXPECT_THROW(Config::parse("schema_version = 1\n[open\n"), ConfigError);
    EXPECT_THROW(Config::parse("schema_version = 1\nbad key = 1\n"), ConfigError);
    EXPECT_THROW(Config::parse("schema_version = 1\na..b = 1\n"), ConfigError);
    try {
        Config::parse("schema_version = 1\n[s]\nk = 1\n[]\ns.k = 2\n");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field, "s.k");
    }
}

TEST(Config, SectionsAndDottedKeysAreEquivalent) {
    Config a = Config::parse("schema_version = 1\n[channel]\nlength_m = 2\nmedium = air\n");
    Config b = Config::parse("channel.medium = air\nschema_version = 1\nchannel.length_m = 2\n");
    EXPECT_EQ(a.canonical(), b.canonical());
    EXPECT_EQ(a.digest(), b.digest());
}

// Random configs: the canonical text is a fixed point of parse, and the
// digest does not depend on line order or layout.
TEST(Config, CanonicalFormProperty) {
    std::mt19937_64 rng(11);
    const std::vector<std::string> words{"alpha", "beta", "gamma", "delta", "eps", "zeta"};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::pair<std::string, std::string>> entries{{"schema_version", "1"}};
        int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            std::string key = words[rng() % words.size()];
            int depth = static_cast<int>(rng() % 3);
            for (int d = 0; d < depth; ++d) key += "." + words[rng() % words.size()] + std::to_string(rng() % 3);
            bool clash = std::any_of(entries.begin(), entries.end(), [&](const auto &e) { return e.first == key; });
            if (clash) continue;
            std::string value = rng() % 2 ? std::to_string(static_cast<double>(rng() % 100000) / 997.0)
                                          : words[rng() % words.size()] + " " + words[rng() % words.size()];
            entries.emplace_back(key, value);
        }
        std::shuffle(entries.begin(), entries.end(), rng);
        std::string text;
        for (const auto &[k, v] : entries) {
            text += std::string(rng() % 3, ' ') + k + std::string(rng() % 2, ' ') + "=" + " " + v;
            text += rng() % 2 ? "  # note\n" : "\n";
            if (rng() % 4 == 0) text += "\n# spacer\n";
        }
        Config c = Config::parse(text);
        Config again = Config::parse(c.canonical());
        ASSERT_EQ(again.canonical(), c.canonical()) << text;
        ASSERT_EQ(again.digest(), c.digest());
        for (const auto &[k, v] : entries) ASSERT_EQ(c.get_string(k), v);
    }
}

TEST(Config, DigestChangesWithAnyValue) {
    Config a = Config::parse("schema_version = 1\nx = 1\n");
    Config b = Config::parse("schema_version = 1\nx = 1.0\n");
    EXPECT_NE(a.digest(), b.digest());
    EXPECT_EQ(a.digest().size(), 16u);
}

TEST(ExperimentConfigTest, MinimalStateTransfer) {
    ExperimentConfig ec = ExperimentConfig::from_config(Config::parse(kMinimalTransfer));
    EXPECT_EQ(ec.kind, ExperimentKind::state_transfer);
    EXPECT_EQ(ec.seed, 5u);
    EXPECT_DOUBLE_EQ(ec.channel.attenuation_per_m, 0.3);
    EXPECT_EQ(ec.source.kind, SourceKind::weak_coherent);
    EXPECT_DOUBLE_EQ(ec.gate.sync_rate_hz, ec.source.rep_rate_hz);
}

TEST(ExperimentConfigTest, MissingFieldsNameTheirPath) {
    EXPECT_EQ(field_of("schema_version = 1\nseed = 1\n"), "kind");
    EXPECT_EQ(field_of("schema_version = 1\nkind = chsh\n"), "seed");
    EXPECT_EQ(field_of("schema_version = 1\nkind = state_transfer\nseed = 1\nsource.mean_photon_mu = 0.5\n"),
              "channel.attenuation_per_m");
    EXPECT_EQ(field_of("schema_version = 1\nkind = link_budget\nseed = 1\nbudget.alpha_per_m = 0.02\n"),
              "budget.loss_db");
    EXPECT_EQ(field_of("schema_version = 1\nkind = entanglement\nseed = 1\n"), "source.pair_rate_hz");
}

TEST(ExperimentConfigTest, BadValuesNameTheirPath) {
    std::string base = kMinimalTransfer;
    EXPECT_EQ(field_of(base + "channel.depolarization_p = 1.5\n"), "channel");
    EXPECT_EQ(field_of(base + "channel.medium = mud\n"), "channel.medium");
    EXPECT_EQ(field_of(base + "channel.rotation_axis = 1 0\n"), "channel.rotation_axis");
    EXPECT_EQ(field_of(base + "detector2.efficiency = 1.2\n"), "detector2");
    EXPECT_EQ(field_of(base + "duration_s = 0\n"), "duration_s");
    EXPECT_EQ(field_of(base + "scan.step_deg = 20\n"), "scan.step_deg");
    EXPECT_EQ(field_of(base + "tomography.scheme = twelve\n"), "tomography.scheme");
    EXPECT_EQ(field_of(base + "source.kind = spdc_pair\nsource.pair_rate_hz = 1e6\n"), "source.kind");
    EXPECT_EQ(field_of(base + "loss.trials = 0\n"), "loss.trials");
    EXPECT_EQ(field_of(base + "chsh.b_prime_deg = 22.5\n"), "chsh");
    EXPECT_EQ(field_of("schema_version = 1\nkind = teleport\nseed = 1\n"), "kind");
}

TEST(ExperimentConfigTest, UnknownKeysAreRejected) {
    EXPECT_EQ(field_of(std::string(kMinimalTransfer) + "channel.atenuation_per_m = 0.3\n"),
              "channel.atenuation_per_m");
}

TEST(ExperimentConfigTest, SeedOverrideIsPartOfTheStoredConfig) {
    ExperimentConfig a = ExperimentConfig::from_config(Config::parse(kMinimalTransfer), 99);
    EXPECT_EQ(a.seed, 99u);
    Config stored = Config::parse(a.source_config.canonical());
    EXPECT_EQ(stored.get_u64("seed"), 99u);
    EXPECT_EQ(stored.digest(), a.digest());
    ExperimentConfig b = ExperimentConfig::from_config(Config::parse(kMinimalTransfer));
    EXPECT_NE(a.digest(), b.digest());
}

TEST(ExperimentConfigTest, EveryPresetLoads) {
    for (const char *name : {"sample_I", "sample_II", "sample_III", "sample_IV", "sample_V", "sample_VI",
                             "distilled", "air", "entanglement_VI", "chsh_VI", "link_budget", "loss_VI"}) {
        SCOPED_TRACE(name);
        ExperimentConfig ec = ExperimentConfig::load(std::string(SEAQ_PRESET_DIR) + "/" + name + ".cfg");
        EXPECT_EQ(ec.name, name);
    }
}

TEST(ExperimentConfigTest, TablePresetsCarryTheirLossCoefficients) {
    const std::vector<std::pair<const char *, double>> expected{
        {"sample_I", 0.308}, {"sample_II", 0.362}, {"sample_III", 0.346}, {"sample_IV", 0.430},
        {"sample_V", 0.358}, {"sample_VI", 0.312}, {"distilled", 0.081},  {"air", 0.0}};
    double sum = 0.0;
    for (const auto &[name, alpha] : expected) {
        ExperimentConfig ec = ExperimentConfig::load(std::string(SEAQ_PRESET_DIR) + "/" + name + ".cfg");
        EXPECT_DOUBLE_EQ(ec.channel.attenuation_per_m, alpha) << name;
        if (std::string(name).rfind("sample_", 0) == 0) sum += alpha;
    }
    EXPECT_NEAR(sum / 6.0, 0.354, 0.007);
}

}  // namespace
}  // namespace seaq
