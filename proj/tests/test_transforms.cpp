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

#include <cran/transforms.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace cran;
using cran::testing::make_problem;
using cran::testing::random_distortion;
using cran::testing::random_hpd;
using cran::testing::rel_err;

TEST(Lemma1, SingleRu) {
    const auto tc = lemma1_transform({3e6}, {5e7});
    ASSERT_EQ(tc.rows.size(), 1u);
    const auto [lhs, rhs] = tc.product_form(0, {1e7}, 0.4);
    EXPECT_DOUBLE_EQ(lhs, 1e7);
    EXPECT_DOUBLE_EQ(rhs, 0.6 * 5e7 + 3e6);
}

TEST(Lemma1, FullSetOfTwo) {
    const double f1 = 2e6, f2 = 7e6, c1 = 3e7, c2 = 9e7, r1 = 1.1e7, r2 = 4e7, a0 = 0.35;
    const auto tc = lemma1_transform({f1, f2}, {c1, c2});
    ASSERT_EQ(tc.rows.size(), 3u);
    ASSERT_EQ(tc.rows[2].rus, (std::vector<int>{0, 1}));
    const auto [lhs, rhs] = tc.product_form(2, {r1, r2}, a0);
    EXPECT_LE(rel_err(lhs, r1 * c2 + r2 * c1), 1e-15);
    EXPECT_LE(rel_err(rhs, (1 - a0) * c1 * c2 + c2 * f1 + c1 * f2), 1e-15);
    for (const auto &row : tc.rows) {
        EXPECT_GT(row.G, 0.0);
        for (double g : row.G_m) EXPECT_GT(g, 0.0);
    }
}

TEST(Lemma1, NormalizedSlackMatchesProductForm) {
    const auto tc = lemma1_transform({2e6, 7e6, 1e5}, {3e7, 9e7, 4e7});
    const std::vector<double> r{1e7, 2e7, 5e6};
    for (std::size_t i = 0; i < tc.rows.size(); ++i) {
        const auto [lhs, rhs] = tc.product_form(i, r, 0.3);
        EXPECT_LE(rel_err(tc.normalized_slack(i, r, 0.3) * tc.rows[i].G, rhs - lhs), 1e-12);
    }
}

TEST(Lemma1, ZeroRfCapacityDropsRu) {
    const auto tc = lemma1_transform({2e6, 7e6}, {0.0, 9e7});
    EXPECT_EQ(tc.fso_only, (std::vector<int>{0}));
    ASSERT_EQ(tc.rows.size(), 1u);
    EXPECT_EQ(tc.rows[0].rus, (std::vector<int>{1}));
    EXPECT_TRUE(tc.satisfied({2e6, 1e7}, 0.5));
    EXPECT_FALSE(tc.satisfied({2.1e6, 1e7}, 0.5));
}

TEST(Lemma1, EquivalenceWithTimeExistence) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int M = 1; M <= 3; ++M)
        for (int t = 0; t < 10000; ++t) {
            std::vector<double> f(M), c(M), r(M);
            for (int m = 0; m < M; ++m) {
                f[m] = std::pow(10.0, 5.0 + 4.0 * u(rng));
                c[m] = std::pow(10.0, 7.0 + 2.0 * u(rng));
            }
            const double a0 = u(rng);
            for (int m = 0; m < M; ++m) r[m] = f[m] * 1.5 * u(rng) + 2.0 * (1.0 - a0) * c[m] * u(rng) / M;
            double need = 0.0;
            for (int m = 0; m < M; ++m) need += std::max(0.0, (r[m] - f[m]) / c[m]);
            if (std::abs(need - (1.0 - a0)) < 1e-12) continue;
            EXPECT_EQ(lemma1_transform(f, c).satisfied(r, a0), need <= 1.0 - a0);
        }
}

TEST(Lemma2, IdentityCase) {
    const CMatrix i = CMatrix::Identity(4, 4);
    EXPECT_NEAR(lemma2_value(i, i), 0.0, 1e-15);
}

TEST(Lemma2, OptimumAndInequality) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 1000; ++t) {
        const CMatrix x = random_hpd(rng, 4);
        const CMatrix xi = inverse_hpd(x);
        const double best = logdet_hpd(xi) / kLn2;
        EXPECT_NEAR(lemma2_value(x, xi), best, 1e-9);
        EXPECT_LE(lemma2_value(x, random_hpd(rng, 4)), best + 1e-9);
    }
}

TEST(ClosedFormB, NoiseOnly) {
    SystemConfig c;
    c.K = 1;
    const auto up = make_problem(c, {Quantizer::AVQ, Detector::MMSE}, 1, 0, Weights::uniform(1));
    const auto b = closed_form_B(CMatrix::Zero(up.MN, up.MN), up);
    EXPECT_TRUE(b[0].isApprox(CMatrix::Identity(up.MN, up.MN) / up.sigma2, 1e-12));
}

TEST(ClosedFormB, InverseAndTightness) {
    std::mt19937_64 rng(23);
    SystemConfig c;
    for (auto pair : kAllSchemePairs) {
        const auto up = make_problem(c, pair, 3, 1, Weights({0.3, 0.7}));
        const CMatrix d = random_distortion(rng, up);
        const auto b = closed_form_B(d, up);
        for (int k = 0; k < up.K; ++k) {
            const CMatrix prod = b[k] * (up.W[k] + d);
            EXPECT_LE((prod - CMatrix::Identity(up.MN, up.MN)).norm(), 1e-9);
            // scale-free surrogate value reproduces -log2|W_k + D|
            EXPECT_NEAR(lemma2_value(up.W[k] + d, b[k]), -logdet_hpd(up.W[k] + d) / kLn2,
                        1e-9 * std::abs(logdet_hpd(up.W[k] + d)));
        }
        EXPECT_LE(rel_err(surrogate_objective(0.6, d, b, up), weighted_sum_rate(0.6, d, up)), 1e-8);
    }
}

TEST(ClosedFormA, ZeroCovariance) {
    SystemConfig c;
    auto up = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    for (auto &cs : up.C) cs.setZero();
    const auto a = closed_form_A(CMatrix::Zero(up.MN, up.MN), up);
    for (const auto &as : a) EXPECT_TRUE(as.isApprox(CMatrix::Identity(as.rows(), as.cols()) / up.sigma2, 1e-12));
}

TEST(ClosedFormA, TightAtOptimumUpperBoundElsewhere) {
    std::mt19937_64 rng(24);
    SystemConfig c;
    for (auto q : {Quantizer::AVQ, Quantizer::RVQ, Quantizer::DSC}) {
        const auto up = make_problem(c, {q, Detector::SIC}, 3, 2, Weights::uniform(2));
        for (int t = 0; t < 30; ++t) {
            const CMatrix d = random_distortion(rng, up, std::pow(10.0, -2.0 + 0.15 * t));
            const auto a = closed_form_A(d, up);
            for (std::size_t s = 0; s < up.subsets.size(); ++s) {
                const double truth = quantizer_requirement(s, d, 1.0, up) / up.f_s;
                EXPECT_LE(rel_err(rate_upper_bound(s, a[s], d, up), truth), 1e-9);
                const auto n = static_cast<int>(a[s].rows());
                const CMatrix other = random_hpd(rng, n, std::sqrt(a[s].norm() / n));
                EXPECT_GE(rate_upper_bound(s, other, d, up), truth - 1e-9 * std::abs(truth));
            }
        }
    }
}

TEST(RecoverAlpha, FsoCoversEverything) {
    const auto a = recover_alpha({1e6, 2e6}, {3e6, 3e6}, {1e7, 1e7}, 0.4);
    EXPECT_EQ(a.alpha, (std::vector<double>{0.0, 0.0}));
    EXPECT_DOUBLE_EQ(a.idle, 0.6);
    EXPECT_NEAR(a.total(), 1.0, 1e-15);
}

TEST(RecoverAlpha, LinearInversion) {
    const auto a = recover_alpha({3e6 + 0.5e7}, {3e6}, {1e7}, 0.3);
    EXPECT_NEAR(a.alpha[0], 0.5, 1e-15);
    EXPECT_NEAR(a.idle, 0.2, 1e-15);
}

TEST(RecoverAlpha, OverCommittedThrows) {
    EXPECT_THROW(recover_alpha({3e6 + 0.8e7}, {3e6}, {1e7}, 0.3), InfeasibleAllocation);
}
