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

// Alternating optimization at a fixed access-time fraction alpha_0: refresh the
// auxiliary matrices in closed form, then re-solve the convex subproblem in
// (D, r), until the objective stalls.

#include "linalg.hpp"
#include "rates.hpp"
#include "scheme.hpp"
#include "subproblem.hpp"
#include "sysmodel.hpp"
#include "transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cran {

struct SolverOptions {
    double gss_epsilon = 0.01;
    double aco_epsilon_bps = 0.01e6;
    int n_max = 50;
    double d0_scale = 1.0;       // D^0 = d0_scale * sigma^2 * I
    AcoVariant variant = AcoVariant::MACO;
    SubproblemOptions sub;
};

inline SolverOptions solver_options(const SystemConfig &cfg, AcoVariant variant = AcoVariant::MACO) {
    SolverOptions o;
    o.gss_epsilon = cfg.gss_epsilon;
    o.aco_epsilon_bps = cfg.aco_epsilon_bps;
    o.n_max = cfg.n_max;
    o.d0_scale = cfg.d0_scale;
    o.variant = variant;
    o.sub.variant = variant;
    o.sub.t0 = cfg.barrier_t0;
    o.sub.mu = cfg.barrier_mu;
    o.sub.tol = cfg.subproblem_tol;
    return o;
}

/// Strictly feasible starting point (D^0, r^0) for a given alpha_0.
struct StartingPoint {
    CMatrix D;
    std::vector<double> r;
    bool strictly_feasible = false;
};

namespace detail {

/// Rates for a fixed D: cover every quantizer requirement, then add half of
/// the tightest fronthaul margin. False when that margin is not positive.
inline bool fill_starting_rates(double alpha0, const UnifiedProblem &up, const TransformedConstraints &tc,
                                StartingPoint &sp) {
    const auto nsub = up.subsets.size();
    std::vector<double> req(nsub);
    for (std::size_t s = 0; s < nsub; ++s) req[s] = quantizer_requirement(s, sp.D, alpha0, up);

    // per-RU requirement from singletons, then cover larger subsets evenly
    sp.r.assign(static_cast<std::size_t>(up.M), 0.0);
    for (std::size_t s = 0; s < nsub; ++s)
        if (up.subsets[s].size() == 1) sp.r[up.subsets[s][0]] = std::max(sp.r[up.subsets[s][0]], req[s]);
    for (std::size_t s = 0; s < nsub; ++s) {
        double lhs = 0.0;
        for (int m : up.subsets[s]) lhs += sp.r[m];
        if (lhs < req[s]) {
            const double add = (req[s] - lhs) / static_cast<double>(up.subsets[s].size());
            for (int m : up.subsets[s]) sp.r[m] += add;
        }
    }

    double eps = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tc.rows.size(); ++i) {
        double inv = 0.0;
        for (int m : tc.rows[i].rus) inv += 1.0 / tc.C_rf[m];
        eps = std::min(eps, tc.normalized_slack(i, sp.r, alpha0) / inv);
    }
    for (int m : tc.fso_only) eps = std::min(eps, tc.C_fso[m] - sp.r[m]);
    if (!std::isfinite(eps)) eps = up.W_rf;
    sp.strictly_feasible = eps > 1e-9 * up.W_rf;
    if (sp.strictly_feasible)
        for (auto &v : sp.r) v += 0.5 * eps;
    return sp.strictly_feasible;
}

} // namespace detail

/// D^0 = d0 I with rates slightly above the quantizer requirements, splitting
/// half of the tightest fronthaul margin. When d0 leaves no margin the
/// distortion is inflated to just above the smallest multiple of I that does.
inline StartingPoint initial_point(double alpha0, const UnifiedProblem &up, const TransformedConstraints &tc,
                                   double d0_scale) {
    auto attempt = [&](double d0, StartingPoint &sp) {
        sp.D = (d0 * up.sigma2) * CMatrix::Identity(up.MN, up.MN);
        return detail::fill_starting_rates(alpha0, up, tc, sp);
    };

    StartingPoint sp;
    double d0 = d0_scale;
    if (attempt(d0, sp)) return sp;
    double lo = d0;
    for (;;) {
        lo = d0;
        d0 *= 4.0;
        if (attempt(d0, sp)) break;
        if (d0 > 1e12) return sp;
    }
    // the inflated start sits far above the constraint boundary; ACO only
    // walks D down slowly from there, so tighten it first
    double hi = d0;
    for (int i = 0; i < 40 && hi / lo > 1.0 + 1e-3; ++i) {
        const double mid = std::sqrt(lo * hi);
        StartingPoint probe;
        if (attempt(mid, probe))
            hi = mid;
        else
            lo = mid;
    }
    attempt(hi * (1.0 + 1e-3), sp);
    return sp;
}

struct AcoResult {
    CMatrix D;
    std::vector<double> r;
    double T = 0.0;                  // weighted sum rate at D, bits/sec
    int iterations = 0;
    bool converged = false;          // stopped on the epsilon test, not n_max
    std::vector<double> history;     // subproblem objective T^i per iteration
    std::vector<double> wsr_history; // weighted sum rate at D^i per iteration
};

/// ACO / M-ACO inner loop at fixed alpha_0.
inline AcoResult aco_inner(double alpha0, const UnifiedProblem &up, const TransformedConstraints &tc,
                           const SolverOptions &opts) {
    AcoResult res;
    StartingPoint sp = initial_point(alpha0, up, tc, opts.d0_scale);
    res.D = sp.D;
    res.r = sp.r;
    if (alpha0 <= 0.0) {
        res.r.assign(static_cast<std::size_t>(up.M), 0.0);
        res.converged = true;
        return res;
    }
    if (!sp.strictly_feasible) {
        // no interior point: transmission is effectively impossible at this alpha_0
        res.T = weighted_sum_rate(alpha0, res.D, up);
        return res;
    }
    SubproblemOptions sub = opts.sub;
    sub.variant = opts.variant;
    double prev = 0.0;
    for (int i = 1;; ++i) {
        const auto B = closed_form_B(res.D, up);
        std::vector<CMatrix> A;
        if (opts.variant == AcoVariant::MACO) A = closed_form_A(res.D, up);
        const auto sr = solve_inner_subproblem(alpha0, B, opts.variant == AcoVariant::MACO ? &A : nullptr, up, tc,
                                               res.D, res.r, sub);
        res.D = up.project_pattern(sr.D);
        res.r = sr.r;
        res.history.push_back(sr.T);
        res.wsr_history.push_back(weighted_sum_rate(alpha0, res.D, up));
        res.iterations = i;
        if (std::abs(sr.T - prev) <= opts.aco_epsilon_bps) {
            res.converged = true;
            break;
        }
        if (i >= opts.n_max) break;
        prev = sr.T;
    }
    res.T = res.wsr_history.back();
    return res;
}

} // namespace cran
