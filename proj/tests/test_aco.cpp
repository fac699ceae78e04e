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

#include <cran/aco.hpp>
#include <cran/oracles.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace cran;
using cran::testing::rel_err;

namespace {

struct Instance {
    UnifiedProblem up;
    TransformedConstraints tc;
};

Instance instance(const SystemConfig &cfg, SchemePair pair, std::uint64_t seed, std::uint64_t block, const Weights &w) {
    const ChannelRealization ch = draw_realization(cfg, seed, block);
    const CapacityVector cap = capacities(ch, cfg);
    return {build_unified(cfg, ch.H, cap, pair, w), lemma1_transform(cap.C_fso, cap.C_rf)};
}

SystemConfig harsh() {
    SystemConfig c;
    c.kappa_db_per_m = 80e-3;
    return c;
}

} // namespace

TEST(InitialPoint, StrictlyFeasible) {
    for (auto pair : kAllSchemePairs)
        for (std::uint64_t b = 0; b < 10; ++b) {
            const auto in = instance(harsh(), pair, 1, b, Weights::uniform(2));
            for (double a : {0.05, 0.5, 0.95}) {
                const auto sp = initial_point(a, in.up, in.tc, 1.0);
                ASSERT_TRUE(sp.strictly_feasible);
                EXPECT_TRUE(in.tc.satisfied(sp.r, a));
                for (std::size_t s = 0; s < in.up.subsets.size(); ++s) {
                    double lhs = 0.0;
                    for (int m : in.up.subsets[s]) lhs += sp.r[m];
                    EXPECT_GT(lhs, quantizer_requirement(s, sp.D, a, in.up));
                }
            }
        }
}

TEST(AcoInner, MonotoneAcrossSchemes) {
    int instances = 0;
    for (auto pair : kAllSchemePairs)
        for (std::uint64_t b = 0; b < 9; ++b) {
            const auto in = instance(harsh(), pair, 2, b, Weights({0.3, 0.7}));
            const double a = 0.15 + 0.08 * static_cast<double>(b);
            SolverOptions o = solver_options(harsh());
            o.n_max = 15;
            const auto r = aco_inner(a, in.up, in.tc, o);
            for (std::size_t i = 1; i < r.wsr_history.size(); ++i)
                EXPECT_GE(r.wsr_history[i], r.wsr_history[i - 1] * (1.0 - 1e-7)) << "iteration " << i;
            EXPECT_EQ(r.T, r.wsr_history.back());
            ++instances;
        }
    EXPECT_GE(instances, 50);
}

TEST(AcoInner, SurrogateTightAfterBUpdate) {
    const auto in = instance(harsh(), {Quantizer::DSC, Detector::SIC}, 3, 0, Weights({0.4, 0.6}));
    SolverOptions o = solver_options(harsh());
    o.n_max = 5;
    const auto r = aco_inner(0.5, in.up, in.tc, o);
    const auto B = closed_form_B(r.D, in.up);
    EXPECT_LE(rel_err(surrogate_objective(0.5, r.D, B, in.up), weighted_sum_rate(0.5, r.D, in.up)), 1e-8);
}

TEST(AcoInner, SingleIterationIsOneAlternation) {
    for (auto variant : {AcoVariant::ACO, AcoVariant::MACO}) {
        const auto in = instance(harsh(), {Quantizer::RVQ, Detector::MMSE}, 4, 1, Weights::uniform(2));
        SolverOptions o = solver_options(harsh(), variant);
        o.n_max = 1;
        const auto r = aco_inner(0.4, in.up, in.tc, o);
        EXPECT_EQ(r.iterations, 1);

        const auto sp = initial_point(0.4, in.up, in.tc, o.d0_scale);
        const auto B = closed_form_B(sp.D, in.up);
        const auto A = closed_form_A(sp.D, in.up);
        SubproblemOptions so = o.sub;
        so.variant = variant;
        const auto one = solve_inner_subproblem(0.4, B, &A, in.up, in.tc, sp.D, sp.r, so);
        EXPECT_LE((r.D - in.up.project_pattern(one.D)).norm(), 1e-12 * one.D.norm());
        EXPECT_EQ(r.history.front(), one.T);
    }
}

TEST(AcoInner, ZeroAccessTime) {
    const auto in = instance(harsh(), {Quantizer::AVQ, Detector::SIC}, 1, 0, Weights::uniform(2));
    const auto r = aco_inner(0.0, in.up, in.tc, solver_options(harsh()));
    EXPECT_EQ(r.T, 0.0);
    EXPECT_EQ(r.r, (std::vector<double>{0.0, 0.0}));
}

TEST(AcoInner, FullAccessTimeIsFsoOnlyBaseline) {
    SystemConfig c = harsh();
    c.K = c.M = c.N = c.L = 1;
    for (std::uint64_t b = 0; b < 10; ++b) {
        const ChannelRealization ch = draw_realization(c, 5, b);
        const auto sp = oracle::scalar_problem(c, ch);
        const CapacityVector cap = capacities(ch, c);
        const auto up = build_unified(c, ch.H, cap, {Quantizer::AVQ, Detector::MMSE}, Weights::uniform(1));
        const SolverOptions o = solver_options(c);
        const auto r = aco_inner(1.0, up, lemma1_transform(cap.C_fso, cap.C_rf), o);
        // within the inner-loop stopping tolerance of the closed-form baseline
        EXPECT_LE(std::abs(r.T - sp.profile(1.0)), o.aco_epsilon_bps);
        EXPECT_LE(rel_err(r.T, sp.profile(1.0)), 1e-3);
        EXPECT_LE(r.r[0], cap.C_fso[0] * (1.0 + 1e-9));
    }
    for (auto pair : kAllSchemePairs) {
        const auto in = instance(harsh(), pair, 5, 0, Weights::uniform(2));
        const auto r = aco_inner(1.0, in.up, in.tc, solver_options(harsh()));
        const auto alloc = recover_alpha(r.r, in.tc.C_fso, in.tc.C_rf, 1.0);
        EXPECT_EQ(alloc.alpha, (std::vector<double>{0.0, 0.0}));
        EXPECT_TRUE(feasibility(alloc, r.D, r.r, in.up).empty());
    }
}

TEST(AcoInner, VariantsAgree) {
    for (auto pair : kAllSchemePairs) {
        const auto in = instance(harsh(), pair, 6, 2, Weights::uniform(2));
        const auto a = aco_inner(0.5, in.up, in.tc, solver_options(harsh(), AcoVariant::ACO));
        const auto m = aco_inner(0.5, in.up, in.tc, solver_options(harsh(), AcoVariant::MACO));
        EXPECT_LE(rel_err(a.T, m.T), 0.02) << to_string(pair.quantizer) << "/" << to_string(pair.detector);
    }
}

TEST(AcoInner, ResultFeasible) {
    for (auto pair : kAllSchemePairs)
        for (std::uint64_t b = 0; b < 3; ++b) {
            const auto in = instance(harsh(), pair, 8, b, Weights({0.7, 0.3}));
            const auto r = aco_inner(0.6, in.up, in.tc, solver_options(harsh()));
            const auto alloc = recover_alpha(r.r, in.tc.C_fso, in.tc.C_rf, 0.6);
            EXPECT_TRUE(feasibility(alloc, r.D, r.r, in.up).empty());
            EXPECT_NEAR(alloc.total(), 1.0, 1e-9);
        }
}
