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

#include <cran/gss.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cran;

TEST(GoldenSection, SyntheticUnimodal) {
    int calls = 0;
    const auto tr = golden_section_search(
        [&](double a) {
            ++calls;
            return -(a - 0.3) * (a - 0.3);
        },
        0.0, 1.0, 0.01);
    EXPECT_NEAR(tr.alpha_star, 0.3, 0.01);
    EXPECT_TRUE(tr.converged);
    // one new evaluation per iteration after the first
    EXPECT_EQ(calls, tr.iterations + 1);
}

TEST(GoldenSection, ContractionAndIterationBound) {
    const auto tr = golden_section_search([](double a) { return std::sin(3.0 * a); }, 0.0, 1.0, 0.01);
    for (std::size_t n = 0; n < tr.interval_lengths.size(); ++n)
        EXPECT_NEAR(tr.interval_lengths[n], std::pow(1.0 / kGoldenRatio, static_cast<double>(n + 1)), 1e-9);
    const int bound = static_cast<int>(std::ceil(std::log(1.0 / 0.01) / std::log(kGoldenRatio))) + 1;
    EXPECT_EQ(bound, 11);
    EXPECT_LE(tr.iterations, bound);
}

TEST(GoldenSection, TieShrinksFromTheRight) {
    const auto tr = golden_section_search([](double) { return 1.0; }, 0.0, 1.0, 0.01);
    EXPECT_LT(tr.alpha_star, 0.01);
}

TEST(GoldenSection, BoundaryOptimum) {
    const auto tr = golden_section_search([](double a) { return a; }, 0.0, 1.0, 0.01);
    EXPECT_GT(tr.alpha_star, 0.99);
    EXPECT_LE(tr.alpha_star, 1.0);
}

TEST(GssOuter, ScalarMatchesProfileMaximum) {
    SystemConfig c;
    c.kappa_db_per_m = 80e-3;
    c.K = c.M = c.N = c.L = 1;
    const auto ch = draw_realization(c, 1, 0);
    const auto res = solve_block(c, ch, {Quantizer::AVQ, Detector::MMSE}, Weights::uniform(1), solver_options(c));
    EXPECT_TRUE(res.gss_converged);
    EXPECT_LE(res.gss_iterations, 11);
    EXPECT_EQ(res.aco_iterations.size(), res.probe_alphas.size() + 1);
    double best = 0.0;
    for (double v : res.probe_T) best = std::max(best, v);
    EXPECT_GE(res.T, best * (1.0 - 0.02));
    EXPECT_NEAR(res.alpha_star.total(), 1.0, 1e-9);
}

TEST(GssOuter, SolutionConsistent) {
    SystemConfig c;
    c.kappa_db_per_m = 80e-3;
    for (auto pair : kAllSchemePairs) {
        const auto ch = draw_realization(c, 2, 1);
        const auto res = solve_block(c, ch, pair, Weights({0.4, 0.6}), solver_options(c));
        const CapacityVector cap = capacities(ch, c);
        const auto up = build_unified(c, ch.H, cap, pair, Weights({0.4, 0.6}));
        EXPECT_TRUE(feasibility(res.alpha_star, res.D_star, res.r_star, up).empty());
        EXPECT_DOUBLE_EQ(res.T, weighted_sum_rate(res.alpha_star.alpha0, res.D_star, up));
        EXPECT_DOUBLE_EQ(res.T, 0.4 * res.user_rates[0] + 0.6 * res.user_rates[1]);
        EXPECT_GT(res.wall_time_s, 0.0);
    }
}
