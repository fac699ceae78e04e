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

// Block-fading realizations for the access (Rayleigh), RF fronthaul (Rician)
// and FSO (Gamma-Gamma) links, and the per-block fronthaul capacities.

#include "linalg.hpp"
#include "sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace cran {

struct ChannelRealization {
    CMatrix H;                  // MN x K, rows (m-1)N .. mN-1 belong to RU m
    std::vector<CMatrix> F;     // per RU, L x N
    std::vector<double> g;      // per RU FSO gain

    /// Channel vector of user k across all RU antennas.
    CVector user_channel(int k) const { return H.col(k); }
};

struct CapacityVector {
    std::vector<double> C_fso;
    std::vector<double> C_rf;
};

/// Two-slope free-space/path-loss average power gain.
inline double rf_average_gain(double lambda_m, double g_tx_dbi, double g_rx_dbi, double d_ref_m,
                              double d_m, double nu) {
    const double a = lambda_m * std::sqrt(db_to_linear(g_tx_dbi) * db_to_linear(g_rx_dbi)) /
                     (4.0 * std::numbers::pi * d_ref_m);
    return a * a * std::pow(d_ref_m / d_m, nu);
}

inline double access_average_gain(const SystemConfig &c) {
    return rf_average_gain(c.lambda_rf_m, c.G_mu_tx_dbi, c.G_ru_rx_dbi, c.d_ref_m, c.d_ac_m, c.nu);
}

inline double fronthaul_average_gain(const SystemConfig &c) {
    return rf_average_gain(c.lambda_rf_m, c.G_ru_tx_dbi, c.G_cu_rx_dbi, c.d_ref_m, c.d_fr_m, c.nu);
}

/// Geometric beam capture times weather attenuation.
inline double fso_average_gain(const SystemConfig &c) {
    const double capture = std::erf(std::sqrt(std::numbers::pi) * c.r_aperture_m /
                                    (std::numbers::sqrt2 * c.phi_divergence_rad * c.d_fr_m));
    return c.R_responsivity * capture * capture * std::pow(10.0, -c.kappa_db_per_m * c.d_fr_m / 10.0);
}

/// Unit-variance circularly symmetric complex Gaussian.
inline cplx draw_cn(Rng &rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

/// Unit mean-square Rician coefficient with K-factor `k_factor` (linear).
/// The direct path carries a uniform random phase.
inline cplx draw_rician(Rng &rng, double k_factor) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double los = std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos = std::sqrt(1.0 / (k_factor + 1.0));
    const double psi = u(rng);
    return los * std::polar(1.0, psi) + nlos * draw_cn(rng);
}

/// Unit-mean Gamma-Gamma variate: product of unit-mean Gamma(Theta) and Gamma(Phi).
inline double draw_gamma_gamma(Rng &rng, double theta, double phi) {
    std::gamma_distribution<double> x(theta, 1.0 / theta);
    std::gamma_distribution<double> y(phi, 1.0 / phi);
    const double a = x(rng);
    const double b = y(rng);
    return a * b;
}

/// Access channel of one RU (N x K), Rayleigh.
inline CMatrix draw_access_ru(const SystemConfig &c, Rng &rng) {
    const double amp = std::sqrt(access_average_gain(c));
    CMatrix h(c.N, c.K);
    for (int k = 0; k < c.K; ++k)
        for (int n = 0; n < c.N; ++n) h(n, k) = amp * draw_cn(rng);
    return h;
}

/// Stacked access matrix (MN x K) drawn from a single stream.
inline CMatrix draw_access(const SystemConfig &c, Rng &rng) {
    CMatrix h(c.M * c.N, c.K);
    for (int m = 0; m < c.M; ++m) h.middleRows(m * c.N, c.N) = draw_access_ru(c, rng);
    return h;
}

inline CMatrix draw_fronthaul_rf_ru(const SystemConfig &c, Rng &rng) {
    const double amp = std::sqrt(fronthaul_average_gain(c));
    const double kf = db_to_linear(c.Omega_db);
    CMatrix f(c.L, c.N);
    for (int n = 0; n < c.N; ++n)
        for (int l = 0; l < c.L; ++l) f(l, n) = amp * draw_rician(rng, kf);
    return f;
}

inline std::vector<CMatrix> draw_fronthaul_rf(const SystemConfig &c, Rng &rng) {
    std::vector<CMatrix> out;
    out.reserve(c.M);
    for (int m = 0; m < c.M; ++m) out.push_back(draw_fronthaul_rf_ru(c, rng));
    return out;
}

inline double draw_fso_ru(const SystemConfig &c, Rng &rng) {
    return fso_average_gain(c) * draw_gamma_gamma(rng, c.Theta, c.Phi);
}

inline std::vector<double> draw_fso(const SystemConfig &c, Rng &rng) {
    std::vector<double> out;
    out.reserve(c.M);
    for (int m = 0; m < c.M; ++m) out.push_back(draw_fso_ru(c, rng));
    return out;
}

/// Draws one fading block. Each (link type, RU) pair uses its own stream
/// keyed by (seed, block), so results do not depend on evaluation order.
inline ChannelRealization draw_realization(const SystemConfig &c, std::uint64_t seed,
                                           std::uint64_t block) {
    ChannelRealization ch;
    ch.H.resize(c.M * c.N, c.K);
    ch.F.reserve(c.M);
    ch.g.reserve(c.M);
    for (int m = 0; m < c.M; ++m) {
        const auto ru = static_cast<std::uint64_t>(m);
        Rng ra = make_stream(seed, {block, LinkType::Access, ru});
        ch.H.middleRows(m * c.N, c.N) = draw_access_ru(c, ra);
        Rng rf = make_stream(seed, {block, LinkType::FronthaulRf, ru});
        ch.F.push_back(draw_fronthaul_rf_ru(c, rf));
        Rng rg = make_stream(seed, {block, LinkType::Fso, ru});
        ch.g.push_back(draw_fso_ru(c, rg));
    }
    return ch;
}

// ---------- capacities ----------

/// Achievable IM/DD rate of one FSO link, bits/sec.
inline double fso_capacity(double g, const SystemConfig &c) {
    const double p = dbm_to_watt(c.Pfso_m_dbm);
    const double snr = std::numbers::e * p * p * g * g / (2.0 * std::numbers::pi * c.delta2_a2);
    return 0.5 * c.W_fso_hz * std::log2(1.0 + snr);
}

struct WaterfillResult {
    double water_level = 0.0;        // mu
    double bits_per_hz = 0.0;        // sum_j [log2(mu chi_j^2 / varrho^2)]^+
    std::vector<double> powers;      // per mode, same order as the input gains
};

/// Exact active-set waterfilling over modes with squared singular values
/// `chi2`, noise `noise` and total power `power`.
inline WaterfillResult waterfill(const std::vector<double> &chi2, double noise, double power) {
    WaterfillResult out;
    out.powers.assign(chi2.size(), 0.0);
    std::vector<std::pair<double, std::size_t>> levels;
    for (std::size_t j = 0; j < chi2.size(); ++j)
        if (chi2[j] > 0.0) levels.emplace_back(noise / chi2[j], j);
    if (levels.empty() || !(power > 0.0)) return out;
    std::sort(levels.begin(), levels.end());

    double acc = 0.0;
    std::size_t active = 0;
    double mu = 0.0;
    for (std::size_t k = 1; k <= levels.size(); ++k) {
        acc += levels[k - 1].first;
        const double cand = (power + acc) / static_cast<double>(k);
        if (k == levels.size() || cand <= levels[k].first) {
            mu = cand;
            active = k;
            break;
        }
    }
    out.water_level = mu;
    for (std::size_t k = 0; k < active; ++k) {
        const auto [a, j] = levels[k];
        out.powers[j] = std::max(mu - a, 0.0);
        out.bits_per_hz += std::max(std::log2(mu / a), 0.0);
    }
    return out;
}

inline std::vector<double> squared_singular_values(const CMatrix &f) {
    Eigen::JacobiSVD<CMatrix> svd(f);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()(i);
        out.push_back(s * s);
    }
    return out;
}

/// Waterfilling capacity of one RF fronthaul link, bits/sec.
inline double rf_fronthaul_capacity(const CMatrix &f, const SystemConfig &c) {
    const auto np = noise_powers(c);
    const auto wf = waterfill(squared_singular_values(f), np.varrho2, dbm_to_watt(c.Pbar_m_dbm));
    return c.W_rf_hz * wf.bits_per_hz;
}

inline CapacityVector capacities(const ChannelRealization &ch, const SystemConfig &c) {
    CapacityVector cap;
    for (std::size_t m = 0; m < ch.g.size(); ++m) {
        cap.C_fso.push_back(fso_capacity(ch.g[m], c));
        cap.C_rf.push_back(rf_fronthaul_capacity(ch.F[m], c));
    }
    return cap;
}

} // namespace cran
