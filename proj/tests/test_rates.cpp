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

#include <cran/rates.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace cran;
using cran::testing::make_problem;
using cran::testing::random_distortion;
using cran::testing::rel_err;

TEST(SelectionMatrix, Submatrix) {
    Eigen::MatrixXd d(3, 3);
    d << 11, 12, 13, 21, 22, 23, 31, 32, 33;
    const auto a = selection_matrix({0, 1}, 3);
    const auto b = selection_matrix({0, 2}, 3);
    Eigen::MatrixXd expect(2, 2);
    expect << 11, 13, 21, 23;
    EXPECT_EQ(Eigen::MatrixXd(a * d * b.transpose()), expect);
}

TEST(SelectionMatrix, FullAndSingle) {
    EXPECT_EQ(selection_matrix({0, 1, 2, 3}, 4), Eigen::MatrixXd::Identity(4, 4));
    Eigen::MatrixXd e(1, 2);
    e << 0, 1;
    EXPECT_EQ(selection_matrix({1}, 2), e);
    EXPECT_THROW(selection_matrix({2}, 2), std::out_of_range);
}

TEST(Weights, Invariants) {
    EXPECT_THROW(Weights({0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(Weights({-0.1, 1.1}), std::invalid_argument);
    EXPECT_NO_THROW(Weights::uniform(3));
    EXPECT_NO_THROW(Weights::pair(0.0));
}

TEST(BuildUnified, SingleUserDetectorsCoincide) {
    SystemConfig c;
    c.K = 1;
    const auto a = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(1));
    const auto b = make_problem(c, {Quantizer::RVQ, Detector::SIC}, 1, 0, Weights::uniform(1));
    EXPECT_TRUE(a.V[0].isApprox(b.V[0], 1e-14));
    EXPECT_TRUE(a.W[0].isApprox(b.W[0], 1e-14));
    const CMatrix noise = a.sigma2 * CMatrix::Identity(a.MN, a.MN);
    EXPECT_TRUE(a.W[0].isApprox(noise, 1e-14));
    EXPECT_TRUE(a.V[0].isApprox(noise + a.power[0] * a.H.col(0) * a.H.col(0).adjoint(), 1e-14));
}

TEST(BuildUnified, FirstDecodedSicUserMatchesMmse) {
    SystemConfig c;
    c.K = 3;
    const Weights w({0.5, 0.2, 0.3});
    const auto a = make_problem(c, {Quantizer::DSC, Detector::MMSE}, 1, 2, w);
    const auto b = make_problem(c, {Quantizer::DSC, Detector::SIC}, 1, 2, w);
    ASSERT_EQ(b.decode_order, (std::vector<int>{1, 2, 0}));
    EXPECT_TRUE(a.V[1].isApprox(b.V[1], 1e-14));
    EXPECT_TRUE(a.W[1].isApprox(b.W[1], 1e-14));
}

TEST(BuildUnified, SubsetsAndStructure) {
    SystemConfig c;
    const auto avq = make_problem(c, {Quantizer::AVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    const auto rvq = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    const auto dsc = make_problem(c, {Quantizer::DSC, Detector::MMSE}, 1, 0, Weights::uniform(2));
    EXPECT_EQ(avq.subsets, (std::vector<std::vector<int>>{{0}, {1}}));
    EXPECT_EQ(dsc.subsets, (std::vector<std::vector<int>>{{0}, {1}, {0, 1}}));
    c.M = 4;
    c.N = 1;
    EXPECT_EQ(make_problem(c, {Quantizer::DSC, Detector::SIC}, 1, 0, Weights::uniform(2)).subsets.size(), 15u);
    for (const auto &up : {avq, rvq, dsc}) {
        for (int k = 0; k < up.K; ++k) EXPECT_GE(min_eigenvalue(up.V[k] - up.W[k]), -1e-12 * up.V[k].norm());
        for (const auto &cs : up.C) {
            EXPECT_TRUE(cs.isApprox(cs.adjoint(), 1e-15));
            EXPECT_GE(min_eigenvalue(cs), -1e-12 * cs.norm());
        }
    }
    for (const auto &cs : avq.C) EXPECT_TRUE(CMatrix(cs.diagonal().asDiagonal()) == cs);
    EXPECT_FALSE(rvq.C[0].isDiagonal());
}

TEST(SicOrder, TiesByIndex) {
    EXPECT_EQ(sic_order({0.5, 0.5}), (std::vector<int>{0, 1}));
    EXPECT_EQ(sic_order({0.6, 0.4}), (std::vector<int>{1, 0}));
}

TEST(UserRate, ScalarPointToPoint) {
    SystemConfig c;
    c.K = c.M = c.N = c.L = 1;
    for (auto det : {Detector::MMSE, Detector::SIC}) {
        const auto up = make_problem(c, {Quantizer::AVQ, det}, 1, 0, Weights::uniform(1));
        const double expect = 0.7 * c.W_rf_hz * std::log2(1.0 + up.power[0] * std::norm(up.H(0, 0)) / up.sigma2);
        EXPECT_NEAR(user_rate(0.7, CMatrix::Zero(1, 1), 0, up) / expect, 1.0, 1e-12);
    }
}

TEST(UserRate, ZeroAccessTime) {
    SystemConfig c;
    std::mt19937_64 rng(2);
    const auto up = make_problem(c, {Quantizer::RVQ, Detector::SIC}, 1, 0, Weights::uniform(2));
    const CMatrix d = random_distortion(rng, up);
    for (int k = 0; k < up.K; ++k) EXPECT_EQ(user_rate(0.0, d, k, up), 0.0);
}

TEST(UserRate, SicTelescoping) {
    std::mt19937_64 rng(3);
    SystemConfig c;
    c.K = 3;
    for (int t = 0; t < 100; ++t) {
        const auto up = make_problem(c, {Quantizer::DSC, Detector::SIC}, 5, static_cast<std::uint64_t>(t),
                                     Weights({0.2, 0.5, 0.3}));
        const CMatrix d = random_distortion(rng, up, std::pow(10.0, -2.0 + 4.0 * (t % 10) / 9.0));
        const double alpha0 = 0.3 + 0.005 * t;
        double sum = 0.0;
        for (double r : user_rates(alpha0, d, up)) sum += r;
        CMatrix all = d + up.sigma2 * CMatrix::Identity(up.MN, up.MN);
        for (int k = 0; k < up.K; ++k) all += up.power[k] * up.H.col(k) * up.H.col(k).adjoint();
        const double expect = alpha0 * up.W_rf *
                              (logdet_hpd(all) - logdet_hpd(d + up.sigma2 * CMatrix::Identity(up.MN, up.MN))) / kLn2;
        EXPECT_LE(rel_err(sum, expect), 1e-9);
    }
}

TEST(UserRate, SicSumIndependentOfOrder) {
    SystemConfig c;
    std::mt19937_64 rng(4);
    const auto a = make_problem(c, {Quantizer::RVQ, Detector::SIC}, 1, 3, Weights({0.3, 0.7}));
    const auto b = make_problem(c, {Quantizer::RVQ, Detector::SIC}, 1, 3, Weights({0.7, 0.3}));
    ASSERT_NE(a.decode_order, b.decode_order);
    const CMatrix d = random_distortion(rng, a);
    auto total = [&](const UnifiedProblem &up) {
        double s = 0.0;
        for (double r : user_rates(0.5, d, up)) s += r;
        return s;
    };
    EXPECT_LE(rel_err(total(a), total(b)), 1e-9);
}

TEST(UserRate, SicDominatesMmse) {
    std::mt19937_64 rng(5);
    SystemConfig c;
    c.K = 3;
    const Weights w({0.2, 0.5, 0.3});
    for (int t = 0; t < 20; ++t) {
        const auto m = make_problem(c, {Quantizer::DSC, Detector::MMSE}, 9, static_cast<std::uint64_t>(t), w);
        const auto s = make_problem(c, {Quantizer::DSC, Detector::SIC}, 9, static_cast<std::uint64_t>(t), w);
        const CMatrix d = random_distortion(rng, m);
        const auto rm = user_rates(0.6, d, m), rs = user_rates(0.6, d, s);
        for (int k = 0; k < 3; ++k) EXPECT_GE(rs[k], rm[k] * (1.0 - 1e-12));
        const int first = s.decode_order[0];
        EXPECT_LE(rel_err(rs[first], rm[first]), 1e-10);
    }
}

TEST(UserRate, LinearInAccessTime) {
    std::mt19937_64 rng(6);
    SystemConfig c;
    const auto up = make_problem(c, {Quantizer::AVQ, Detector::SIC}, 1, 1, Weights::uniform(2));
    const CMatrix d = random_distortion(rng, up);
    for (int k = 0; k < up.K; ++k)
        EXPECT_LE(rel_err(user_rate(0.8, d, k, up), 4.0 * user_rate(0.2, d, k, up)), 1e-12);
}

TEST(MmseFilter, MatchedFilterBound) {
    SystemConfig c;
    c.K = 1;
    const auto up = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(1));
    const double expect = up.power[0] * up.H.col(0).squaredNorm() / up.sigma2;
    const CMatrix zero = CMatrix::Zero(up.MN, up.MN);
    EXPECT_LE(rel_err(mmse_filter(zero, up, 0, FilterVariant::Direct).sinr, expect), 1e-10);
    EXPECT_LE(rel_err(mmse_filter(zero, up, 0, FilterVariant::Woodbury).sinr, expect), 1e-10);
}

TEST(MmseFilter, SinrFormMatchesDeterminantForm) {
    std::mt19937_64 rng(7);
    SystemConfig c;
    c.K = 3;
    for (auto q : {Quantizer::AVQ, Quantizer::RVQ, Quantizer::DSC})
        for (int t = 0; t < 100; ++t) {
            const auto up = make_problem(c, {q, Detector::MMSE}, 2, static_cast<std::uint64_t>(t), Weights::uniform(3));
            const CMatrix d = random_distortion(rng, up, std::pow(10.0, -3.0 + 6.0 * (t % 7) / 6.0));
            for (int k = 0; k < up.K; ++k) {
                const double g1 = mmse_filter(d, up, k, FilterVariant::Direct).sinr;
                const double g2 = mmse_filter(d, up, k, FilterVariant::Woodbury).sinr;
                EXPECT_LE(rel_err(g1, g2), 1e-8);
                const double via_sinr = 0.4 * up.W_rf * std::log2(1.0 + g1);
                EXPECT_LE(rel_err(via_sinr, user_rate(0.4, d, k, up)), 1e-8);
            }
        }
}

TEST(QuantizerRequirement, ScalarAntennaForm) {
    SystemConfig c;
    c.K = 2;
    c.M = 1;
    c.N = 1;
    const auto up = make_problem(c, {Quantizer::AVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    const double d = 0.3 * up.sigma2;
    double hsh = 0.0;
    for (int k = 0; k < 2; ++k) hsh += up.power[k] * std::norm(up.H(0, k));
    const double expect = 0.5 * up.f_s * std::log2((hsh + d + up.sigma2) / d);
    EXPECT_LE(rel_err(quantizer_requirement(0, CMatrix::Constant(1, 1, d), 0.5, up), expect), 1e-12);
}

TEST(QuantizerRequirement, DscSingletonEqualsRvq) {
    std::mt19937_64 rng(8);
    SystemConfig c;
    const auto rvq = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 4, Weights::uniform(2));
    const auto dsc = make_problem(c, {Quantizer::DSC, Detector::MMSE}, 1, 4, Weights::uniform(2));
    const CMatrix d = random_distortion(rng, dsc);
    for (std::size_t s = 0; s < 2; ++s)
        EXPECT_LE(rel_err(quantizer_requirement(s, d, 0.7, dsc), quantizer_requirement(s, d, 0.7, rvq)), 1e-12);
}

TEST(QuantizerRequirement, VanishesForLargeDistortion) {
    SystemConfig c;
    const auto up = make_problem(c, {Quantizer::AVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {1.0, 1e3, 1e6, 1e9, 1e12}) {
        const double v = quantizer_requirement(0, s * up.sigma2 * CMatrix::Identity(up.MN, up.MN), 1.0, up);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-3 * up.f_s);
}

TEST(QuantizerRequirement, NonincreasingInDistortion) {
    std::mt19937_64 rng(9);
    SystemConfig c;
    for (auto q : {Quantizer::AVQ, Quantizer::RVQ, Quantizer::DSC}) {
        const auto up = make_problem(c, {q, Detector::SIC}, 1, 6, Weights::uniform(2));
        for (int t = 0; t < 50; ++t) {
            const CMatrix d = random_distortion(rng, up);
            const CMatrix dd = d + random_distortion(rng, up, 0.1);
            for (std::size_t s = 0; s < up.subsets.size(); ++s)
                EXPECT_LE(quantizer_requirement(s, dd, 0.5, up), quantizer_requirement(s, d, 0.5, up) * (1 + 1e-12));
        }
    }
}

TEST(Feasibility, DegenerateAllocation) {
    SystemConfig c;
    const auto up = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    TimeAllocation a;
    a.alpha0 = 0.0;
    a.alpha = {0.5, 0.5};
    EXPECT_TRUE(feasibility(a, CMatrix::Zero(up.MN, up.MN), {0.0, 0.0}, up).empty());
}

TEST(Feasibility, TightChannelBoundIsFeasible) {
    SystemConfig c;
    const auto up = make_problem(c, {Quantizer::AVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    TimeAllocation a;
    a.alpha0 = 0.4;
    a.alpha = {0.3, 0.3};
    const CMatrix d = 1e6 * up.sigma2 * CMatrix::Identity(up.MN, up.MN);
    std::vector<double> r{up.C_fso[0] + 0.3 * up.C_rf[0], up.C_fso[1] + 0.3 * up.C_rf[1]};
    EXPECT_TRUE(feasibility(a, d, r, up).empty());
}

TEST(Feasibility, NamesViolations) {
    std::mt19937_64 rng(10);
    SystemConfig c;
    const auto up = make_problem(c, {Quantizer::DSC, Detector::SIC}, 1, 0, Weights::uniform(2));
    const CMatrix d = random_distortion(rng, up);
    TimeAllocation a;
    a.alpha0 = 0.5;
    a.alpha = {0.25, 0.25};
    std::vector<double> req;
    for (std::size_t s = 0; s < up.subsets.size(); ++s) req.push_back(quantizer_requirement(s, d, 0.5, up));
    // singletons exactly covered; top up both to cover the pair as well
    const double extra = std::max(0.0, req[2] - req[0] - req[1]);
    std::vector<double> r{req[0] + extra, req[1] + extra};
    auto bad = feasibility(a, d, r, up);
    EXPECT_TRUE(bad.empty());
    r[0] *= 0.9;
    bad = feasibility(a, d, r, up);
    ASSERT_FALSE(bad.empty());
    EXPECT_EQ(bad.front(), "C1{1}");
    // hand check of every name
    for (const auto &name : bad) {
        if (name == "C1{1}") EXPECT_LT(r[0], req[0]);
        else if (name == "C1{1,2}") EXPECT_LT(r[0] + r[1], req[2]);
        else ADD_FAILURE() << name;
    }
    r = {up.C_fso[0] + 0.3 * up.C_rf[0] + 1.0 + req[0], req[1]};
    bad = feasibility(a, d, r, up);
    EXPECT_NE(std::find(bad.begin(), bad.end(), "C2{1}"), bad.end());
}

TEST(WeightedSumRate, Weights) {
    std::mt19937_64 rng(11);
    SystemConfig c;
    const CMatrix d = random_distortion(rng, make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(2)));
    const auto u = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights::uniform(2));
    const auto r = user_rates(0.5, d, u);
    EXPECT_LE(rel_err(weighted_sum_rate(0.5, d, u), 0.5 * (r[0] + r[1])), 1e-14);
    const auto e = make_problem(c, {Quantizer::RVQ, Detector::MMSE}, 1, 0, Weights({0.0, 1.0}));
    EXPECT_LE(rel_err(weighted_sum_rate(0.5, d, e), r[1]), 1e-14);
}
