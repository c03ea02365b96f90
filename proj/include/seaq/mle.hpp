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

// Maximum-likelihood density matrix estimation.
//
// The state is parameterized as rho = T^dagger T / tr(T^dagger T) with T lower
// triangular and a real diagonal (d^2 real parameters). Measurements are
// grouped; within a group the total intensity is unknown and profiled out, so
// the objective is the Poisson log-likelihood
//
//     LL = sum_g [ sum_{i in g} n_i log a_i  -  N_g log sum_{i in g} a_i ],
//     a_i = w_i <psi_i| T^dagger T |psi_i>,
//
// which is invariant under rescaling of T. It is maximized by BFGS with an
// Armijo backtracking line search, so every accepted step increases LL.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "seaq/error.hpp"
#include "seaq/quantum.hpp"

namespace seaq {

struct Measurement {
    CVector projector;  // unit vector
    double weight = 1.0;
    double count = 0.0;
    int group = 0;
};

struct MleOptions {
    double gradient_tolerance = 1e-8;
    int max_iterations = 10000;
    /// Eigenvalue floor applied to the starting point so it can be factored.
    double initial_floor = 1e-10;
};

struct MleResult {
    CMatrix rho;
    double log_likelihood = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    /// Log-likelihood after every accepted step (first entry: starting point).
    std::vector<double> log_likelihood_trace;
};

namespace mle_detail {

inline int parameter_count(int dim) {
    return dim * dim;
}

/// Layout: diagonal reals first, then (re, im) of each strictly lower entry, row-major.
inline CMatrix unpack(const RVector &x, int dim) {
    CMatrix t = CMatrix::Zero(dim, dim);
    int k = 0;
    for (int i = 0; i < dim; ++i) t(i, i) = x(k++);
    for (int i = 1; i < dim; ++i) {
        for (int j = 0; j < i; ++j) {
            t(i, j) = cplx(x(k), x(k + 1));
            k += 2;
        }
    }
    return t;
}

inline RVector pack(const CMatrix &t) {
    int dim = static_cast<int>(t.rows());
    RVector x(parameter_count(dim));
    int k = 0;
    for (int i = 0; i < dim; ++i) x(k++) = t(i, i).real();
    for (int i = 1; i < dim; ++i) {
        for (int j = 0; j < i; ++j) {
            x(k++) = t(i, j).real();
            x(k++) = t(i, j).imag();
        }
    }
    return x;
}

/// Lower triangular T with T^dagger T = rho for positive definite rho.
inline CMatrix factor(const CMatrix &rho) {
    const int d = static_cast<int>(rho.rows());
    // Reverse the index order, take the ordinary Cholesky factor L L^dagger,
    // and reverse back: rho = (J L J)(J L J)^dagger with J L^dagger J lower.
    CMatrix reversed(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) reversed(i, j) = rho(d - 1 - i, d - 1 - j);
    Eigen::LLT<CMatrix> llt(reversed);
    CMatrix l = llt.matrixL();
    CMatrix lt = l.adjoint();
    CMatrix t(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = lt(d - 1 - i, d - 1 - j);
    // Make the diagonal real and non-negative by rephasing rows.
    for (int i = 0; i < d; ++i) {
        double mag = std::abs(t(i, i));
        if (mag > 0.0) t.row(i) *= std::conj(t(i, i)) / mag;
    }
    return t;
}

struct Objective {
    const std::vector<Measurement> *measurements;
    int dim;
    int groups;
    std::vector<double> group_totals;

    Objective(const std::vector<Measurement> &m, int d) : measurements(&m), dim(d), groups(0) {
        for (const auto &meas : m) groups = std::max(groups, meas.group + 1);
        group_totals.assign(groups, 0.0);
        for (const auto &meas : m) group_totals[meas.group] += meas.count;
    }

    /// Log-likelihood; fills `grad` (d LL / d x) when non-null.
    double evaluate(const RVector &x, RVector *grad) const {
        CMatrix t = unpack(x, dim);
        CMatrix g = t.adjoint() * t;
        std::vector<double> a(measurements->size());
        std::vector<double> group_sum(groups, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto &m = (*measurements)[i];
            a[i] = m.weight * m.projector.dot(g * m.projector).real();
            group_sum[m.group] += a[i];
        }
        double ll = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto &m = (*measurements)[i];
            if (m.count > 0.0) {
                if (!(a[i] > 0.0)) return -std::numeric_limits<double>::infinity();
                ll += m.count * std::log(a[i]);
            }
        }
        for (int k = 0; k < groups; ++k) {
            if (group_totals[k] > 0.0) {
                if (!(group_sum[k] > 0.0)) return -std::numeric_limits<double>::infinity();
                ll -= group_totals[k] * std::log(group_sum[k]);
            }
        }
        if (grad) {
            // dLL/dT (packed as d/dRe + i d/dIm) = 2 T R with
            // R = sum_i (n_i / a_i - N_g / A_g) w_i |psi_i><psi_i|.
            CMatrix r = CMatrix::Zero(dim, dim);
            for (std::size_t i = 0; i < a.size(); ++i) {
                const auto &m = (*measurements)[i];
                double coeff = -(group_totals[m.group] > 0.0 ? group_totals[m.group] / group_sum[m.group] : 0.0);
                if (m.count > 0.0) coeff += m.count / a[i];
                r += (coeff * m.weight) * (m.projector * m.projector.adjoint());
            }
            CMatrix dt = 2.0 * t * r;
            grad->resize(x.size());
            int k = 0;
            for (int i = 0; i < dim; ++i) (*grad)(k++) = dt(i, i).real();
            for (int i = 1; i < dim; ++i) {
                for (int j = 0; j < i; ++j) {
                    (*grad)(k++) = dt(i, j).real();
                    (*grad)(k++) = dt(i, j).imag();
                }
            }
        }
        return ll;
    }
};

}  // namespace mle_detail

/// Total count, used to scale the objective so tolerances are per-event.
inline double total_count(const std::vector<Measurement> &measurements) {
    double n = 0.0;
    for (const auto &m : measurements) n += m.count;
    return n;
}

/// Maximizes the grouped Poisson likelihood starting from the eigenvalue-
/// clamped `rho_linear`. Throws ConvergenceError when the gradient norm
/// (of LL divided by the total count) is still above tolerance after
/// max_iterations.
inline MleResult mle_estimate(const CMatrix &rho_linear, const std::vector<Measurement> &measurements,
                              const MleOptions &options = {}) {
    const int dim = static_cast<int>(rho_linear.rows());
    if (rho_linear.cols() != dim || (dim != 2 && dim != 4)) {
        throw InputError("MLE input must be a 2x2 or 4x4 matrix");
    }
    if (hermiticity_error(rho_linear) > 1e-8) {
        throw InputError("MLE input must be Hermitian");
    }
    for (const auto &m : measurements) {
        if (m.projector.size() != dim) throw InputError("measurement projector has the wrong dimension");
        if (m.count < 0.0 || m.weight <= 0.0) throw InputError("measurement counts must be >= 0 and weights > 0");
    }
    double scale = total_count(measurements);
    if (!(scale > 0.0)) {
        throw DegenerateDataError("all", "MLE needs at least one count");
    }

    // Starting point: clamp, floor the spectrum, renormalize, factor.
    CMatrix start = psd_function(rho_linear, [&](double v) { return std::max(v, options.initial_floor); });
    start /= trace_real(start);
    start = hermitian_part(start);

    mle_detail::Objective objective(measurements, dim);
    auto f = [&](const RVector &x, RVector *g) {
        double v = objective.evaluate(x, g) / scale;
        if (g) *g /= scale;
        return v;
    };

    const int n = mle_detail::parameter_count(dim);
    RVector x = mle_detail::pack(mle_detail::factor(start));
    RVector grad(n);
    double value = f(x, &grad);
    if (!std::isfinite(value)) {
        // Data contradicts the starting point (e.g. counts on a projector the
        // clamped estimate gives zero probability); restart from I/d mixed in.
        start = 0.9 * start + 0.1 * CMatrix::Identity(dim, dim) / static_cast<double>(dim);
        x = mle_detail::pack(mle_detail::factor(start));
        value = f(x, &grad);
    }

    MleResult result;
    result.log_likelihood_trace.push_back(value * scale);
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
    int iter = 0;
    int flat_steps = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (grad.norm() < options.gradient_tolerance) break;
        RVector direction = inv_hessian * grad;
        double slope = direction.dot(grad);
        if (!(slope > 0.0)) {
            inv_hessian.setIdentity();
            direction = grad;
            slope = grad.squaredNorm();
        }
        double step = 1.0;
        RVector x_new, grad_new(n);
        double value_new = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = x + step * direction;
            value_new = f(x_new, &grad_new);
            if (std::isfinite(value_new) && value_new >= value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (inv_hessian.isIdentity()) break;  // no ascent direction left at this precision
            inv_hessian.setIdentity();
            continue;
        }
        // Steps that no longer move LL beyond round-off mean the optimum is
        // resolved to working precision even if the gradient is not.
        if (value_new - value <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(value)) {
            if (++flat_steps >= 5) {
                x = x_new;
                grad = grad_new;
                value = value_new;
                result.log_likelihood_trace.push_back(value * scale);
                ++iter;
                break;
            }
        } else {
            flat_steps = 0;
        }
        RVector s = x_new - x;
        RVector y = grad - grad_new;  // change in the gradient of -LL
        double sy = s.dot(y);
        if (sy > 1e-18) {
            Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
            double rho = 1.0 / sy;
            inv_hessian = (id - rho * s * y.transpose()) * inv_hessian * (id - rho * y * s.transpose()) +
                          rho * s * s.transpose();
        }
        x = x_new;
        grad = grad_new;
        value = value_new;
        // Keep T at unit Frobenius norm; the objective is scale invariant.
        double norm = x.norm();
        if (norm > 4.0 || norm < 0.25) {
            x /= norm;
            inv_hessian *= norm * norm;
            value = f(x, &grad);
        }
        result.log_likelihood_trace.push_back(value * scale);
    }

    CMatrix t = mle_detail::unpack(x, dim);
    CMatrix rho = t.adjoint() * t;
    rho = hermitian_part(rho / trace_real(rho));
    result.rho = rho;
    result.log_likelihood = value * scale;
    result.gradient_norm = grad.norm();
    result.iterations = iter;
    if (result.gradient_norm >= options.gradient_tolerance && iter >= options.max_iterations) {
        std::vector<double> best(x.data(), x.data() + x.size());
        throw ConvergenceError("MLE did not converge in " + std::to_string(iter) + " iterations", std::move(best),
                               result.gradient_norm);
    }
    return result;
}

}  // namespace seaq
