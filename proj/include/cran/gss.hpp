// Copyright 2026 The hybrid-fronthaul C-RAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Golden-section search over alpha_0 with the alternating optimizer as the
// inner evaluation.

#include "aco.hpp"
#include "channel.hpp"
#include "rates.hpp"
#include "transforms.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

namespace cran {

inline constexpr double kGoldenRatio = 1.6180339887498948482;

struct GssTrace {
    double alpha_star = 0.0;
    int iterations = 0;
    std::vector<double> interval_lengths;           // after each iteration
    std::vector<std::pair<double, double>> probes;  // (alpha, T), in evaluation order
    bool converged = false;
};

/// Maximizes a (presumed unimodal) function on [lo, hi]. Probes are cached so
/// each iteration costs one new evaluation after the first. Ties keep the
/// left part of the interval.
template <class F>
GssTrace golden_section_search(F &&f, double lo, double hi, double epsilon, int max_iterations = 200) {
    GssTrace tr;
    const double rho = 1.0 - 1.0 / kGoldenRatio;
    auto eval = [&](double a) {
        for (const auto &[x, v] : tr.probes)
            if (std::abs(x - a) <= 1e-12) return v;
        const double v = f(a);
        tr.probes.emplace_back(a, v);
        return v;
    };
    while (std::abs(hi - lo) > epsilon && tr.iterations < max_iterations) {
        const double d = hi - lo;
        const double a1 = lo + rho * d;
        const double a2 = hi - rho * d;
        const double t1 = eval(a1);
        const double t2 = eval(a2);
        if (t1 >= t2)
            hi = a2;
        else
            lo = a1;
        ++tr.iterations;
        tr.interval_lengths.push_back(hi - lo);
    }
    tr.converged = std::abs(hi - lo) <= epsilon;
    tr.alpha_star = 0.5 * (lo + hi);
    return tr;
}

struct SolveResult {
    TimeAllocation alpha_star;
    CMatrix D_star;
    std::vector<double> r_star;
    std::vector<double> user_rates;
    double T = 0.0;                       // weighted sum rate, bits/sec
    int gss_iterations = 0;
    std::vector<double> probe_alphas;
    std::vector<double> probe_T;
    std::vector<int> aco_iterations;      // per probe, then the final re-run
    bool gss_converged = false;
    std::vector<bool> aco_converged;      // aligned with aco_iterations
    double wall_time_s = 0.0;
};

/// Packages an ACO solution at alpha_0 as a full result.
inline SolveResult finish_solution(double alpha0, const AcoResult &aco, const UnifiedProblem &up,
                                   const TransformedConstraints &tc) {
    SolveResult out;
    out.D_star = aco.D;
    out.r_star = aco.r;
    out.alpha_star = recover_alpha(aco.r, tc.C_fso, tc.C_rf, alpha0);
    out.user_rates = user_rates(alpha0, aco.D, up);
    out.T = weighted_sum_rate(alpha0, aco.D, up);
    return out;
}

inline SolveResult gss_outer(const UnifiedProblem &up, const TransformedConstraints &tc, const SolverOptions &opts) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<int> iters;
    std::vector<bool> conv;
    auto probe = [&](double a) {
        const AcoResult r = aco_inner(a, up, tc, opts);
        iters.push_back(r.iterations);
        conv.push_back(r.converged);
        return r.T;
    };
    const GssTrace tr = golden_section_search(probe, 0.0, 1.0, opts.gss_epsilon);
    const AcoResult fin = aco_inner(tr.alpha_star, up, tc, opts);
    iters.push_back(fin.iterations);
    conv.push_back(fin.converged);

    SolveResult out = finish_solution(tr.alpha_star, fin, up, tc);
    out.gss_iterations = tr.iterations;
    out.gss_converged = tr.converged;
    for (const auto &[a, v] : tr.probes) {
        out.probe_alphas.push_back(a);
        out.probe_T.push_back(v);
    }
    out.aco_iterations = std::move(iters);
    out.aco_converged = std::move(conv);
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Solves one fading block for one scheme pair and weight vector.
inline SolveResult solve_block(const SystemConfig &cfg, const ChannelRealization &ch, SchemePair pair,
                               const Weights &mu, const SolverOptions &opts) {
    const CapacityVector cap = capacities(ch, cfg);
    const UnifiedProblem up = build_unified(cfg, ch.H, cap, pair, mu);
    const TransformedConstraints tc = lemma1_transform(cap.C_fso, cap.C_rf);
    return gss_outer(up, tc, opts);
}

} // namespace cran
