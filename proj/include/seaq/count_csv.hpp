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

// Count log CSV, the only data path between simulation and analysis:
//
//   run_id,timestamp_s,projector_label,detector_id,gated_counts,duration_s,seed
//
// Singles records carry the analyzer setting as projector_label and the
// detector (1 = APD1 on the setting's port, 2 = APD2 on the orthogonal port).
// Pair records use "A|B" labels with detector_id 0 for coincidences, 1 for
// singles of arm A and 2 for singles of arm B.

#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "seaq/countsim.hpp"
#include "seaq/error.hpp"

namespace seaq {

inline constexpr const char *kCountCsvHeader = "run_id,timestamp_s,projector_label,detector_id,gated_counts,duration_s,seed";

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_count_csv(std::ostream &out, const std::vector<CountRecord> &records) {
    out << kCountCsvHeader << '\n';
    for (const auto &r : records) {
        if (r.run_id.find(',') != std::string::npos || r.projector_label.find(',') != std::string::npos) {
            throw InputError("run_id and projector_label must not contain commas");
        }
        out << r.run_id << ',' << format_double(r.timestamp_s) << ',' << r.projector_label << ',' << r.detector_id
            << ',' << r.gated_counts << ',' << format_double(r.duration_s) << ',' << r.seed << '\n';
    }
}

inline std::string count_csv_string(const std::vector<CountRecord> &records) {
    std::ostringstream out;
    write_count_csv(out, records);
    return out.str();
}

inline std::vector<CountRecord> read_count_csv(std::istream &in) {
    std::vector<CountRecord> records;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &what) {
        throw InputError("count CSV line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("run_id", 0) == 0) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) fail("expected 7 columns");
        CountRecord r;
        try {
            r.run_id = cells[0];
            r.timestamp_s = std::stod(cells[1]);
            r.projector_label = cells[2];
            r.detector_id = std::stoi(cells[3]);
            r.gated_counts = std::stoull(cells[4]);
            r.duration_s = std::stod(cells[5]);
            r.seed = std::stoull(cells[6]);
        } catch (const std::exception &) {
            fail("malformed value");
        }
        if (cells[4].find('-') != std::string::npos) fail("negative count");
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<CountRecord> parse_count_csv(const std::string &text) {
    std::istringstream in(text);
    return read_count_csv(in);
}

inline std::string pair_label(const std::string &a, const std::string &b) {
    return a + "|" + b;
}

inline SettingPair split_pair_label(const std::string &label) {
    auto bar = label.find('|');
    if (bar == std::string::npos) {
        throw InputError("pair label '" + label + "' lacks '|'");
    }
    return {label.substr(0, bar), label.substr(bar + 1)};
}

/// Three records (coincidences, singles A, singles B) for one setting pair.
inline std::vector<CountRecord> pair_records(const std::string &run_id, const std::string &a, const std::string &b,
                                             const PairCounts &counts, const Acquisition &acq) {
    std::vector<CountRecord> out;
    const double values[3] = {counts.coincidences, counts.singles_a, counts.singles_b};
    for (int id = 0; id < 3; ++id) {
        CountRecord r;
        r.run_id = run_id;
        r.timestamp_s = acq.start_s;
        r.projector_label = pair_label(a, b);
        r.detector_id = id;
        r.gated_counts = static_cast<std::uint64_t>(values[id]);
        r.duration_s = acq.duration_s;
        r.seed = acq.seed;
        out.push_back(std::move(r));
    }
    return out;
}

/// Rebuilds a correlation table from pair records of one run (all runs when
/// run_id is empty). Records of the same setting are summed.
inline CorrelationTable correlation_table_from_records(const std::vector<CountRecord> &records,
                                                       const std::string &run_id = "") {
    CorrelationTable table;
    std::map<SettingPair, double> durations;
    for (const auto &r : records) {
        if (!run_id.empty() && r.run_id != run_id) continue;
        if (r.projector_label.find('|') == std::string::npos) continue;
        SettingPair key = split_pair_label(r.projector_label);
        PairCounts &pc = table.entries[key];
        double c = static_cast<double>(r.gated_counts);
        switch (r.detector_id) {
            case 0:
                pc.coincidences += c;
                durations[key] += r.duration_s;
                break;
            case 1:
                pc.singles_a += c;
                break;
            case 2:
                pc.singles_b += c;
                break;
            default:
                throw InputError("pair record with detector id " + std::to_string(r.detector_id));
        }
    }
    for (const auto &[key, d] : durations) table.duration_s = std::max(table.duration_s, d);
    return table;
}

}  // namespace seaq
