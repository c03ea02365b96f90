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

// Experiment config files.
//
// Plain text, one `key = value` per line, `#` starts a comment. Keys are
// dotted paths; a `[section]` line prefixes the keys that follow it, so
//
//     [channel]
//     length_m = 3.3
//
// and `channel.length_m = 3.3` are the same entry. Every file must carry
// `schema_version`. The canonical form (sorted, one dotted key per line) is
// what gets stored next to run outputs and what the digest is taken over.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "seaq/error.hpp"
#include "seaq/random.hpp"

namespace seaq {

inline constexpr int kConfigSchemaVersion = 1;

class Config {
   public:
    static Config parse(std::string_view text, const std::string &source = "<config>") {
        Config cfg;
        std::string section;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string line(text.substr(pos, end - pos));
            pos = end + 1;
            ++line_no;
            auto where = source + ":" + std::to_string(line_no);
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError(where, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!section.empty() && !valid_key(section)) throw ConfigError(where, "bad section name");
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (!valid_key(key)) throw ConfigError(where, "bad key '" + key + "'");
            if (!section.empty()) key = section + "." + key;
            if (cfg.entries_.count(key)) throw ConfigError(key, "duplicate key at " + where);
            cfg.entries_[key] = {value, false};
        }
        if (!cfg.has("schema_version")) throw ConfigError("schema_version", "missing");
        int version = cfg.get_int("schema_version");
        if (version != kConfigSchemaVersion) {
            throw ConfigError("schema_version", "unsupported version " + std::to_string(version));
        }
        return cfg;
    }

    static Config load(const std::filesystem::path &path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("", "cannot open config " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path.string());
    }

    bool has(const std::string &key) const {
        return entries_.count(key) != 0;
    }

    void set(const std::string &key, const std::string &value) {
        if (!valid_key(key)) throw ConfigError(key, "bad key");
        entries_[key] = {value, false};
    }

    std::string get_string(const std::string &key) const {
        return raw(key);
    }
    std::string get_string(const std::string &key, const std::string &fallback) const {
        return has(key) ? raw(key) : fallback;
    }

    double get_double(const std::string &key) const {
        const std::string &text = raw(key);
        double v = 0.0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            throw ConfigError(key, "expected a number, got '" + text + "'");
        }
        return v;
    }
    double get_double(const std::string &key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::uint64_t get_u64(const std::string &key) const {
        const std::string &text = raw(key);
        std::uint64_t v = 0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            throw ConfigError(key, "expected an unsigned integer, got '" + text + "'");
        }
        return v;
    }
    std::uint64_t get_u64(const std::string &key, std::uint64_t fallback) const {
        return has(key) ? get_u64(key) : fallback;
    }

    int get_int(const std::string &key) const {
        const std::string &text = raw(key);
        int v = 0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            throw ConfigError(key, "expected an integer, got '" + text + "'");
        }
        return v;
    }
    int get_int(const std::string &key, int fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool(const std::string &key) const {
        const std::string &text = raw(key);
        if (text == "true" || text == "yes" || text == "1") return true;
        if (text == "false" || text == "no" || text == "0") return false;
        throw ConfigError(key, "expected true or false, got '" + text + "'");
    }
    bool get_bool(const std::string &key, bool fallback) const {
        return has(key) ? get_bool(key) : fallback;
    }

    /// Whitespace-separated numbers.
    std::vector<double> get_doubles(const std::string &key) const {
        std::istringstream in(raw(key));
        std::vector<double> out;
        std::string word;
        while (in >> word) {
            double v = 0.0;
            auto res = std::from_chars(word.data(), word.data() + word.size(), v);
            if (res.ec != std::errc() || res.ptr != word.data() + word.size()) {
                throw ConfigError(key, "expected numbers, got '" + word + "'");
            }
            out.push_back(v);
        }
        return out;
    }

    /// Keys never read by a getter; a typo in a config shows up here.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto &[k, e] : entries_)
            if (!e.used) out.push_back(k);
        return out;
    }

    void reject_unused() const {
        auto unused = unused_keys();
        if (!unused.empty()) throw ConfigError(unused.front(), "unknown key");
    }

    std::string canonical() const {
        std::string out;
        for (const auto &[k, e] : entries_) out += k + " = " + e.value + "\n";
        return out;
    }

    std::string digest() const {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
        return buf;
    }

    std::map<std::string, std::string> entries() const {
        std::map<std::string, std::string> out;
        for (const auto &[k, e] : entries_) out[k] = e.value;
        return out;
    }

   private:
    struct Entry {
        std::string value;
        mutable bool used = false;
    };

    const std::string &raw(const std::string &key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(key, "missing");
        it->second.used = true;
        return it->second.value;
    }

    static std::string trim(const std::string &s) {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static bool valid_key(const std::string &k) {
        if (k.empty() || k.front() == '.' || k.back() == '.') return false;
        for (char c : k) {
            bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                      c == '.';
            if (!ok) return false;
        }
        return k.find("..") == std::string::npos;
    }

    std::map<std::string, Entry> entries_;
};

}  // namespace seaq
