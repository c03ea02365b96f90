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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace seaq {

enum class ErrorKind {
    input,
    validation,
    degenerate_data,
    configuration,
    convergence,
    pipeline,
};

inline const char *to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::input:
            return "input error";
        case ErrorKind::validation:
            return "validation error";
        case ErrorKind::degenerate_data:
            return "degenerate data";
        case ErrorKind::configuration:
            return "configuration error";
        case ErrorKind::convergence:
            return "convergence failure";
        case ErrorKind::pipeline:
            return "pipeline error";
    }
    return "error";
}

/// Base of every exception thrown by the library. The kind lets callers
/// (the CLI in particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

struct InputError : Error {
    explicit InputError(const std::string &m) : Error(ErrorKind::input, m) {
    }
};

struct ValidationError : Error {
    explicit ValidationError(const std::string &m) : Error(ErrorKind::validation, m) {
    }
};

/// Count data that makes an estimator undefined (e.g. a zero denominator).
/// `label` names the offending projector setting.
struct DegenerateDataError : Error {
    DegenerateDataError(std::string label_, const std::string &m)
        : Error(ErrorKind::degenerate_data, m + " [" + label_ + "]"), label(std::move(label_)) {
    }
    std::string label;
};

/// `field` is a dotted config path when the error comes from a config file.
struct ConfigError : Error {
    ConfigError(std::string field_, const std::string &m)
        : Error(ErrorKind::configuration, field_.empty() ? m : field_ + ": " + m), field(std::move(field_)) {
    }
    std::string field;
};

/// Thrown by the likelihood optimizer when it runs out of iterations.
/// Carries the best parameters found so the caller can still inspect them.
struct ConvergenceError : Error {
    ConvergenceError(const std::string &m, std::vector<double> best, double grad_norm_)
        : Error(ErrorKind::convergence, m), best_parameters(std::move(best)), gradient_norm(grad_norm_) {
    }
    std::vector<double> best_parameters;
    double gradient_norm;
};

/// Wraps a failure inside an experiment pipeline with the stage it happened in.
struct PipelineError : Error {
    PipelineError(std::string stage_, const std::string &m)
        : Error(ErrorKind::pipeline, stage_ + ": " + m), stage(std::move(stage_)) {
    }
    std::string stage;
};

}  // namespace seaq
