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

// Unified problem data shared by every (quantizer, detector) pair, and the
// rate, quantizer-requirement and feasibility evaluations built on it.

#include "channel.hpp"
#include "linalg.hpp"
#include "scheme.hpp"
#include "sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cran {

/// Per-user priorities; nonnegative and summing to one.
class Weights {
public:
    explicit Weights(std::vector<double> mu) : mu_(std::move(mu)) {
        if (mu_.empty()) throw std::invalid_argument("weights: empty");
        double s = 0.0;
        for (double w : mu_) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights: negative entry");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("weights: must sum to 1");
    }

    static Weights uniform(int k) {
        return Weights(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
    }

    /// Two-user weights (w, 1 - w), renormalized exactly.
    static Weights pair(double w1) {
        return Weights({w1, 1.0 - w1});
    }

    double operator[](std::size_t k) const { return mu_[k]; }
    std::size_t size() const { return mu_.size(); }
    const std::vector<double> &values() const { return mu_; }

private:
    std::vector<double> mu_;
};

/// Fractions alpha_0 (access) and alpha_1..alpha_M (RF fronthaul per RU).
/// `idle` is RF time left unallocated.
struct TimeAllocation {
    double alpha0 = 0.0;
    std::vector<double> alpha;
    double idle = 0.0;

    double total() const {
        return alpha0 + std::accumulate(alpha.begin(), alpha.end(), 0.0) + idle;
    }
};

enum class DistortionPattern { Diagonal, BlockDiagonal, Dense };

inline DistortionPattern pattern_for(Quantizer q) {
    switch (q) {
    case Quantizer::AVQ: return DistortionPattern::Diagonal;
    case Quantizer::RVQ: return DistortionPattern::BlockDiagonal;
    case Quantizer::DSC: return DistortionPattern::Dense;
    }
    return DistortionPattern::Dense;
}

/// 0/1 matrix of size |idx| x n with a single one per row at column idx[i]
/// (0-based indices).
inline Eigen::MatrixXd selection_matrix(const std::vector<int> &idx, int n) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(idx.size()), n);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= n) throw std::out_of_range("selection_matrix: index out of range");
        s(static_cast<Eigen::Index>(i), idx[i]) = 1.0;
    }
    return s;
}

/// Antenna indices of all RUs in `rus` (0-based).
inline std::vector<int> antenna_indices(const std::vector<int> &rus, int n_per_ru) {
    std::vector<int> out;
    for (int m : rus)
        for (int n = 0; n < n_per_ru; ++n) out.push_back(m * n_per_ru + n);
    return out;
}

/// Constant data of the unified weighted-sum-rate problem for one fading
/// block and one scheme pair.
struct UnifiedProblem {
    SchemePair pair;
    int K = 0, M = 0, N = 0, MN = 0;

    double sigma2 = 0.0;
    double W_rf = 0.0;
    double f_s = 0.0;

    std::vector<double> power;            // per-user transmit power, W
    std::vector<double> mu;               // weights, original user order
    std::vector<int> decode_order;        // users by ascending weight (ties: index)
    CMatrix H;                            // MN x K
    std::vector<CMatrix> V, W;            // per user (original index)

    std::vector<std::vector<int>> subsets;        // RU index sets of the source-coding constraints
    std::vector<std::vector<int>> subset_antennas;
    std::vector<CMatrix> C;                       // one per subset
    std::vector<std::vector<int>> pattern_sets;   // antenna index sets defining the zero pattern

    std::vector<double> C_fso, C_rf;

    DistortionPattern pattern() const { return pattern_for(pair.quantizer); }

    /// Zeroes every entry outside the pattern and symmetrizes.
    CMatrix project_pattern(const CMatrix &d) const {
        CMatrix out = CMatrix::Zero(MN, MN);
        for (const auto &t : pattern_sets)
            for (int i : t)
                for (int j : t) out(i, j) = d(i, j);
        return hermitize(out);
    }
};

/// Users sorted by ascending weight, ties broken by ascending index.
inline std::vector<int> sic_order(const std::vector<double> &mu) {
    std::vector<int> order(mu.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mu[a] < mu[b]; });
    return order;
}

/// All nonempty subsets of {0..m-1}, by increasing bitmask.
inline std::vector<std::vector<int>> nonempty_subsets(int m) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) s.push_back(i);
        out.push_back(std::move(s));
    }
    return out;
}

inline UnifiedProblem build_unified(const SystemConfig &cfg, const CMatrix &H, const CapacityVector &cap,
                                    SchemePair pair, const Weights &mu) {
    require_valid(cfg, pair.quantizer);
    if (H.rows() != cfg.M * cfg.N || H.cols() != cfg.K)
        throw std::invalid_argument("build_unified: access matrix has wrong shape");
    if (static_cast<int>(mu.size()) != cfg.K) throw std::invalid_argument("build_unified: weight count != K");
    if (static_cast<int>(cap.C_fso.size()) != cfg.M || static_cast<int>(cap.C_rf.size()) != cfg.M)
        throw std::invalid_argument("build_unified: capacity count != M");

    UnifiedProblem up;
    up.pair = pair;
    up.K = cfg.K;
    up.M = cfg.M;
    up.N = cfg.N;
    up.MN = cfg.M * cfg.N;
    up.sigma2 = noise_powers(cfg).sigma2;
    up.W_rf = cfg.W_rf_hz;
    up.f_s = cfg.f_s_hz;
    up.power.assign(static_cast<std::size_t>(cfg.K), dbm_to_watt(cfg.P_k_dbm));
    up.mu = mu.values();
    up.decode_order = sic_order(up.mu);
    up.H = H;
    up.C_fso = cap.C_fso;
    up.C_rf = cap.C_rf;

    const CMatrix noise = up.sigma2 * CMatrix::Identity(up.MN, up.MN);
    std::vector<CMatrix> outer(static_cast<std::size_t>(up.K));
    CMatrix total = noise;
    for (int k = 0; k < up.K; ++k) {
        outer[k] = up.power[k] * H.col(k) * H.col(k).adjoint();
        total += outer[k];
    }
    up.V.assign(static_cast<std::size_t>(up.K), CMatrix());
    up.W.assign(static_cast<std::size_t>(up.K), CMatrix());
    if (pair.detector == Detector::MMSE) {
        for (int k = 0; k < up.K; ++k) {
            up.V[k] = hermitize(total);
            up.W[k] = hermitize(total - outer[k]);
        }
    } else {
        // Position p in the decoding order sees users p..K-1 (V) and p+1..K-1 (W).
        CMatrix tail = noise;
        for (int p = up.K - 1; p >= 0; --p) {
            const int k = up.decode_order[p];
            up.W[k] = hermitize(tail);
            tail += outer[k];
            up.V[k] = hermitize(tail);
        }
    }

    if (pair.quantizer == Quantizer::DSC) {
        up.subsets = nonempty_subsets(up.M);
    } else {
        for (int m = 0; m < up.M; ++m) up.subsets.push_back({m});
    }
    const CMatrix cov = H * Eigen::MatrixXd(Eigen::VectorXd::Map(up.power.data(), up.K).asDiagonal())
                            .cast<cplx>() * H.adjoint();
    for (const auto &s : up.subsets) {
        const auto idx = antenna_indices(s, up.N);
        up.subset_antennas.push_back(idx);
        CMatrix c = hermitize(principal_submatrix(cov, idx));
        if (pair.quantizer == Quantizer::AVQ) c = CMatrix(c.diagonal().asDiagonal());
        up.C.push_back(std::move(c));
    }

    switch (pair.quantizer) {
    case Quantizer::AVQ:
        for (int i = 0; i < up.MN; ++i) up.pattern_sets.push_back({i});
        break;
    case Quantizer::RVQ:
        for (int m = 0; m < up.M; ++m) up.pattern_sets.push_back(antenna_indices({m}, up.N));
        break;
    case Quantizer::DSC: {
        std::vector<int> all(static_cast<std::size_t>(up.MN));
        std::iota(all.begin(), all.end(), 0);
        up.pattern_sets.push_back(std::move(all));
        break;
    }
    }
    return up;
}

// ---------- rates ----------

/// Rate of user k (original index), bits/sec.
inline double user_rate(double alpha0, const CMatrix &D, int k, const UnifiedProblem &up) {
    if (alpha0 == 0.0) return 0.0;
    const double num = logdet_hpd(up.V[k] + D);
    const double den = logdet_hpd(up.W[k] + D);
    return std::max(0.0, alpha0 * up.W_rf * (num - den) / kLn2);
}

inline std::vector<double> user_rates(double alpha0, const CMatrix &D, const UnifiedProblem &up) {
    std::vector<double> r(static_cast<std::size_t>(up.K));
    for (int k = 0; k < up.K; ++k) r[k] = user_rate(alpha0, D, k, up);
    return r;
}

inline double weighted_sum_rate(double alpha0, const CMatrix &D, const UnifiedProblem &up) {
    double acc = 0.0;
    for (int k = 0; k < up.K; ++k)
        if (up.mu[k] != 0.0) acc += up.mu[k] * user_rate(alpha0, D, k, up);
    return acc;
}

enum class FilterVariant { Direct, Woodbury };

struct FilterResult {
    CVector filter;
    double sinr = 0.0;
};

/// Linear MMSE receive filter for user k and its output SINR.
///
/// Direct: the SINR-maximizing filter (interference-plus-noise)^-1 h_k.
/// Woodbury: the MSE filter P_k (H Sigma H^H + Dbar)^-1 h_k evaluated through
/// the matrix inversion lemma, where Dbar = D + sigma^2 I is inverted block by
/// block along the distortion pattern. Both yield the same SINR.
inline FilterResult mmse_filter(const CMatrix &D, const UnifiedProblem &up, int k, FilterVariant variant) {
    const CVector hk = up.H.col(k);
    FilterResult out;
    if (variant == FilterVariant::Direct) {
        CMatrix r = D + up.sigma2 * CMatrix::Identity(up.MN, up.MN);
        for (int j = 0; j < up.K; ++j)
            if (j != k) r += up.power[j] * up.H.col(j) * up.H.col(j).adjoint();
        Eigen::LLT<CMatrix> llt(hermitize(r));
        if (llt.info() != Eigen::Success) throw NotPositiveDefinite("mmse_filter: interference matrix");
        out.filter = llt.solve(hk);
        out.sinr = up.power[k] * (hk.adjoint() * out.filter)(0, 0).real();
        return out;
    }

    CMatrix dbar_inv = CMatrix::Zero(up.MN, up.MN);
    const CMatrix dbar = D + up.sigma2 * CMatrix::Identity(up.MN, up.MN);
    for (const auto &t : up.pattern_sets) {
        const CMatrix blk = principal_submatrix(dbar, t);
        scatter_submatrix(dbar_inv, t, inverse_hpd(blk));
    }
    CMatrix sigma_inv = CMatrix::Zero(up.K, up.K);
    for (int j = 0; j < up.K; ++j) sigma_inv(j, j) = 1.0 / up.power[j];
    const CMatrix dh = dbar_inv * up.H;
    const CMatrix inner = hermitize(sigma_inv + up.H.adjoint() * dh);
    Eigen::LLT<CMatrix> llt(inner);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("mmse_filter: Woodbury core");
    const CVector dhk = dbar_inv * hk;
    const CVector rinv_h = dhk - dh * llt.solve(up.H.adjoint() * dhk);
    out.filter = up.power[k] * rinv_h;
    const double delta = (hk.adjoint() * out.filter)(0, 0).real();
    out.sinr = delta / (1.0 - delta);
    return out;
}

// ---------- quantizer requirements and feasibility ----------

/// Eigenvalue floor applied to distortion submatrices, relative to sigma^2.
inline constexpr double kDistortionFloor = 1e-12;

/// Right-hand side of the source-coding constraint for subset index s, bits/sec.
inline double quantizer_requirement(std::size_t s, const CMatrix &D, double alpha0, const UnifiedProblem &up) {
    if (alpha0 == 0.0) return 0.0;
    const auto &idx = up.subset_antennas.at(s);
    const CMatrix ds = hermitize(principal_submatrix(D, idx));
    const auto n = static_cast<Eigen::Index>(idx.size());
    const double num = logdet_hpd(up.C[s] + ds + up.sigma2 * CMatrix::Identity(n, n));
    const double den = logdet_floored(ds, kDistortionFloor * up.sigma2);
    const double v = alpha0 * up.f_s * (num - den) / kLn2;
    if (!std::isfinite(v)) throw NotPositiveDefinite("quantizer_requirement: singular distortion block");
    return std::max(0.0, v);
}

inline std::string subset_label(const std::vector<int> &s) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
    os << '}';
    return os.str();
}

/// Names of violated source-coding (C1) and channel-coding (C2) constraints,
/// each checked with 1e-6 relative slack. Empty means feasible.
inline std::vector<std::string> feasibility(const TimeAllocation &alpha, const CMatrix &D,
                                            const std::vector<double> &r, const UnifiedProblem &up) {
    constexpr double rel = 1e-6;
    const double abs_tol = 1e-9 * up.W_rf;
    std::vector<std::string> bad;
    if (static_cast<int>(r.size()) != up.M || static_cast<int>(alpha.alpha.size()) != up.M)
        throw std::invalid_argument("feasibility: size mismatch");
    for (std::size_t s = 0; s < up.subsets.size(); ++s) {
        double lhs = 0.0;
        for (int m : up.subsets[s]) lhs += r[m];
        const double req = quantizer_requirement(s, D, alpha.alpha0, up);
        if (lhs < req * (1.0 - rel) - abs_tol) bad.push_back("C1" + subset_label(up.subsets[s]));
    }
    for (int m = 0; m < up.M; ++m) {
        const double cap = up.C_fso[m] + alpha.alpha[m] * up.C_rf[m];
        if (r[m] > cap * (1.0 + rel) + abs_tol) bad.push_back("C2{" + std::to_string(m + 1) + "}");
    }
    return bad;
}

} // namespace cran
