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

// Reference implementations for verification. Everything numerical here is
// written against std::complex directly (small explicit determinants, LU with
// partial pivoting, bisection); the optimizer's Eigen-based kernels are only
// ever the object under test.

#include "channel.hpp"
#include "rates.hpp"
#include "scheme.hpp"
#include "sysmodel.hpp"
#include "transforms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cran::oracle {

using cd = std::complex<double>;

/// Row-major dense complex square matrix.
struct SmallMatrix {
    int n = 0;
    std::vector<cd> a;

    SmallMatrix() = default;
    explicit SmallMatrix(int size) : n(size), a(static_cast<std::size_t>(size * size)) {}
    static SmallMatrix identity(int size, double s = 1.0) {
        SmallMatrix m(size);
        for (int i = 0; i < size; ++i) m(i, i) = s;
        return m;
    }
    cd &operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    cd operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

inline SmallMatrix operator+(SmallMatrix x, const SmallMatrix &y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
    return x;
}

inline SmallMatrix operator*(const SmallMatrix &x, const SmallMatrix &y) {
    SmallMatrix z(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k)
            for (int j = 0; j < x.n; ++j) z(i, j) += x(i, k) * y(k, j);
    return z;
}

/// Determinant: cofactor formulas up to 3x3, LU with partial pivoting above.
inline cd det(const SmallMatrix &m) {
    switch (m.n) {
    case 0:
        return 1.0;
    case 1:
        return m(0, 0);
    case 2:
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
        break;
    }
    SmallMatrix u = m;
    cd d = 1.0;
    for (int c = 0; c < u.n; ++c) {
        int piv = c;
        for (int r = c + 1; r < u.n; ++r)
            if (std::abs(u(r, c)) > std::abs(u(piv, c))) piv = r;
        if (u(piv, c) == cd(0.0)) return 0.0;
        if (piv != c) {
            for (int j = 0; j < u.n; ++j) std::swap(u(c, j), u(piv, j));
            d = -d;
        }
        d *= u(c, c);
        for (int r = c + 1; r < u.n; ++r) {
            const cd f = u(r, c) / u(c, c);
            for (int j = c; j < u.n; ++j) u(r, j) -= f * u(c, j);
        }
    }
    return d;
}

/// Gauss-Jordan inverse with partial pivoting.
inline SmallMatrix inverse(const SmallMatrix &m) {
    const int n = m.n;
    SmallMatrix a = m, inv = SmallMatrix::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (a(piv, c) == cd(0.0)) throw std::domain_error("oracle::inverse: singular matrix");
        for (int j = 0; j < n; ++j) {
            std::swap(a(c, j), a(piv, j));
            std::swap(inv(c, j), inv(piv, j));
        }
        const cd p = a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) /= p;
            inv(c, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const cd f = a(r, c);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

inline double log2_det_real(const SmallMatrix &m) {
    const cd d = det(m);
    return std::log2(d.real());
}

// ---------- scalar problem, K = M = N = L = 1 ----------

struct ScalarOracleResult {
    double alpha0_star = 0.0;
    double d_star = 0.0;            // W
    double R_star = 0.0;            // bits/sec
    std::vector<double> alpha_grid, d_grid, R_grid;
    double max_root_residual = 0.0; // max |F(alpha0, d*)| / (f_s + C_rf + C_fso)
    double max_second_difference = 0.0;
    bool concave = false;
};

struct ScalarProblem {
    double P = 0.0, h2 = 0.0, sigma2 = 0.0, W = 0.0, fs = 0.0, C_rf = 0.0, C_fso = 0.0;

    /// F(alpha0, d) with d = e^u, stable for distortions below double range.
    double F_log(double alpha0, double u) const {
        const double a = P * h2 + sigma2;
        const double la = std::log(a);
        const double l2 = u < la ? (la + std::log1p(std::exp(u - la)) - u) / std::log(2.0)
                                 : std::log1p(a * std::exp(-u)) / std::log(2.0);
        return alpha0 * fs * l2 - (1.0 - alpha0) * C_rf - C_fso;
    }
    double F(double alpha0, double d) const { return F_log(alpha0, std::log(d)); }
    double R(double alpha0, double d) const { return alpha0 * W * std::log2((P * h2 + d + sigma2) / (d + sigma2)); }

    /// log of the unique root of the strictly decreasing F(alpha0, .), by bisection.
    double log_root(double alpha0) const {
        double lo = std::log(sigma2) - 10.0, hi = std::log(sigma2) + 10.0;
        for (double step = 10.0; F_log(alpha0, lo) <= 0.0 && step < 1e12; step *= 2.0) lo -= step;
        for (double step = 10.0; F_log(alpha0, hi) > 0.0 && step < 1e12; step *= 2.0) hi += step;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (F_log(alpha0, mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    double root(double alpha0) const { return alpha0 <= 0.0 ? 0.0 : std::exp(log_root(alpha0)); }
    double profile(double alpha0) const { return alpha0 <= 0.0 ? 0.0 : R(alpha0, root(alpha0)); }
};

inline ScalarProblem scalar_problem(const SystemConfig &cfg, const ChannelRealization &ch) {
    if (cfg.K != 1 || cfg.M != 1 || cfg.N != 1 || cfg.L != 1)
        throw std::invalid_argument("scalar_oracle: requires K = M = N = L = 1");
    ScalarProblem sp;
    sp.P = dbm_to_watt(cfg.P_k_dbm);
    sp.h2 = std::norm(ch.H(0, 0));
    sp.sigma2 = noise_powers(cfg).sigma2;
    sp.W = cfg.W_rf_hz;
    sp.fs = cfg.f_s_hz;
    const CapacityVector cap = capacities(ch, cfg);
    sp.C_rf = cap.C_rf[0];
    sp.C_fso = cap.C_fso[0];
    return sp;
}

inline ScalarOracleResult scalar_oracle(const SystemConfig &cfg, const ChannelRealization &ch, int grid_points = 2001) {
    const ScalarProblem sp = scalar_problem(cfg, ch);
    ScalarOracleResult out;
    const double fscale = sp.fs + sp.C_rf + sp.C_fso;
    std::size_t best = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double a = static_cast<double>(i) / (grid_points - 1);
        const double d = sp.root(a);
        const double r = a > 0.0 ? sp.R(a, d) : 0.0;
        if (a > 0.0)
            out.max_root_residual =
                std::max(out.max_root_residual, std::abs(sp.F_log(a, sp.log_root(a))) / fscale);
        out.alpha_grid.push_back(a);
        out.d_grid.push_back(d);
        out.R_grid.push_back(r);
        if (r > out.R_grid[best]) best = static_cast<std::size_t>(i);
    }
    double rmax = 0.0;
    for (double r : out.R_grid) rmax = std::max(rmax, std::abs(r));
    out.max_second_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < out.R_grid.size(); ++i)
        out.max_second_difference =
            std::max(out.max_second_difference, out.R_grid[i - 1] - 2.0 * out.R_grid[i] + out.R_grid[i + 1]);
    out.concave = out.max_second_difference <= 1e-9 * std::max(rmax, 1.0);

    // ternary refinement inside the neighbouring cells
    double lo = out.alpha_grid[best > 0 ? best - 1 : 0];
    double hi = out.alpha_grid[std::min(best + 1, out.alpha_grid.size() - 1)];
    for (int i = 0; i < 100; ++i) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (sp.profile(m1) < sp.profile(m2))
            lo = m1;
        else
            hi = m2;
    }
    const double a = 0.5 * (lo + hi);
    out.alpha0_star = a;
    out.d_star = sp.root(a);
    out.R_star = sp.profile(a);
    if (out.R_grid[best] > out.R_star) {
        out.alpha0_star = out.alpha_grid[best];
        out.d_star = out.d_grid[best];
        out.R_star = out.R_grid[best];
    }
    return out;
}

// ---------- exhaustive search for tiny diagonal-distortion problems ----------

struct BruteForceGrids {
    std::vector<double> alpha0;                 // access-time fractions to scan
    std::vector<std::vector<double>> d_axes;    // per gridded distortion entry (all but the last), units of sigma^2
    int refine_rounds = 24;                     // local zoom passes around the best point
    int refine_points = 5;                      // points per axis in each zoom pass

    /// 61 log-spaced points on [1e-4, 1e4] per axis and a 101-point alpha0 grid.
    static BruteForceGrids standard(int n_antennas) {
        const int n_axes = std::max(n_antennas - 1, 0);
        BruteForceGrids g;
        for (int i = 0; i <= 100; ++i) g.alpha0.push_back(i / 100.0);
        std::vector<double> axis;
        for (int i = 0; i < 61; ++i) axis.push_back(std::pow(10.0, -4.0 + 8.0 * i / 60.0));
        g.d_axes.assign(static_cast<std::size_t>(n_axes), axis);
        return g;
    }
};

struct BruteForceResult {
    double alpha0 = 0.0;
    std::vector<double> d;         // diagonal distortion, W
    std::vector<double> r;         // minimal quantizer rates, bits/sec
    double T = 0.0;                // weighted sum rate, bits/sec
    double grid_slack = 0.0;       // largest drop to a neighbouring point at the final resolution, bits/sec
                                   // plus a 1e-9 relative floor
    long evaluations = 0;
};

/// Problem data rebuilt from the raw channel, powers and weights.
class TinyProblem {
public:
    explicit TinyProblem(const UnifiedProblem &up) : up_(up) {
        if (up.pair.quantizer == Quantizer::DSC) throw std::invalid_argument("brute_force_small: DSC not supported");
        if (up.pair.quantizer == Quantizer::RVQ && up.N != 1)
            throw std::invalid_argument("brute_force_small: RVQ needs N = 1 for a diagonal distortion");
        if (up.MN > 3) throw std::invalid_argument("brute_force_small: MN must be at most 3");
        const int n = up.MN;
        std::vector<SmallMatrix> outer;
        SmallMatrix total = SmallMatrix::identity(n, up.sigma2);
        for (int k = 0; k < up.K; ++k) {
            SmallMatrix o(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) o(i, j) = up.power[k] * up.H(i, k) * std::conj(up.H(j, k));
            outer.push_back(o);
            total = total + o;
        }
        // decoding order: ascending weight, ties by index
        std::vector<int> order(static_cast<std::size_t>(up.K));
        for (int k = 0; k < up.K; ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return up.mu[a] < up.mu[b]; });
        V_.assign(static_cast<std::size_t>(up.K), SmallMatrix());
        W_.assign(static_cast<std::size_t>(up.K), SmallMatrix());
        if (up.pair.detector == Detector::MMSE) {
            for (int k = 0; k < up.K; ++k) {
                V_[k] = total;
                W_[k] = total;
                for (std::size_t e = 0; e < W_[k].a.size(); ++e) W_[k].a[e] -= outer[k].a[e];
            }
        } else {
            SmallMatrix tail = SmallMatrix::identity(n, up.sigma2);
            for (int p = up.K - 1; p >= 0; --p) {
                const int k = order[p];
                W_[k] = tail;
                tail = tail + outer[k];
                V_[k] = tail;
            }
        }
        // received power per antenna (the diagonal AVQ / N = 1 RVQ covariance)
        for (int i = 0; i < n; ++i) diag_cov_.push_back(total(i, i).real() - up.sigma2);
    }

    int antennas() const { return up_.MN; }

    double wsr(double alpha0, const std::vector<double> &d) const {
        if (alpha0 <= 0.0) return 0.0;
        double acc = 0.0;
        for (int k = 0; k < up_.K; ++k) {
            SmallMatrix v = V_[k], w = W_[k];
            for (int i = 0; i < up_.MN; ++i) {
                v(i, i) += d[i];
                w(i, i) += d[i];
            }
            const double rk = std::max(0.0, log2_det_real(v) - log2_det_real(w));
            acc += up_.mu[k] * rk;
        }
        return alpha0 * up_.W_rf * acc;
    }

    /// Minimal per-RU rates meeting the per-RU quantizer requirement.
    std::vector<double> min_rates(double alpha0, const std::vector<double> &d) const {
        std::vector<double> r(static_cast<std::size_t>(up_.M), 0.0);
        for (int m = 0; m < up_.M; ++m) {
            double bits = 0.0;
            for (int n = 0; n < up_.N; ++n) {
                const int i = m * up_.N + n;
                bits += std::log2((diag_cov_[i] + d[i] + up_.sigma2) / d[i]);
            }
            r[m] = alpha0 * up_.f_s * bits;
        }
        return r;
    }

    /// Fronthaul check through the time split itself: the RF time each RU
    /// needs beyond its FSO link must fit into 1 - alpha0.
    bool fronthaul_ok(double alpha0, const std::vector<double> &r) const {
        double need = 0.0;
        for (int m = 0; m < up_.M; ++m) {
            const double excess = r[m] - up_.C_fso[m];
            if (excess <= 0.0) continue;
            if (!(up_.C_rf[m] > 0.0)) return false;
            need += excess / up_.C_rf[m];
        }
        return need <= 1.0 - alpha0;
    }

    /// Weighted sum rate if feasible, -inf otherwise.
    double score(double alpha0, const std::vector<double> &d) const {
        if (!fronthaul_ok(alpha0, min_rates(alpha0, d))) return -std::numeric_limits<double>::infinity();
        return wsr(alpha0, d);
    }

private:
    const UnifiedProblem &up_;
    std::vector<SmallMatrix> V_, W_;
    std::vector<double> diag_cov_;
};

/// Exhaustive search over alpha0 and the diagonal distortion entries. The
/// weighted sum rate is nonincreasing in every entry, so for fixed alpha0 and
/// leading entries the last entry is set to its smallest feasible value by
/// bisection; only the remaining coordinates are gridded.
inline BruteForceResult brute_force_small(const UnifiedProblem &up, const BruteForceGrids &grids) {
    const TinyProblem tp(up);
    const int n = tp.antennas();
    const int free = n - 1;
    if (static_cast<int>(grids.d_axes.size()) < free)
        throw std::invalid_argument("brute_force_small: missing distortion axes");
    BruteForceResult best;
    best.T = -std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(n));

    // value at (alpha0, leading entries); d receives the completed vector
    auto evaluate = [&](double a, std::vector<double> &dd) {
        ++best.evaluations;
        double lo = std::log(1e-12 * up.sigma2), hi = std::log(1e12 * up.sigma2);
        auto feasible = [&](double u) {
            dd[n - 1] = std::exp(u);
            return tp.fronthaul_ok(a, tp.min_rates(a, dd));
        };
        if (!feasible(hi)) return -std::numeric_limits<double>::infinity();
        if (!feasible(lo)) {
            for (int i = 0; i < 100; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (feasible(mid))
                    hi = mid;
                else
                    lo = mid;
            }
        } else {
            hi = lo;
        }
        dd[n - 1] = std::exp(hi);
        return tp.wsr(a, dd);
    };

    // exhaustive pass; axes are in units of sigma^2
    std::vector<std::size_t> idx(static_cast<std::size_t>(free), 0);
    std::vector<std::size_t> best_idx(static_cast<std::size_t>(free), 0);
    std::size_t best_a = 0;
    auto bump = [&]() {
        for (int i = free - 1; i >= 0; --i) {
            if (++idx[i] < grids.d_axes[i].size()) return true;
            idx[i] = 0;
        }
        return false;
    };
    for (std::size_t ai = 0; ai < grids.alpha0.size(); ++ai) {
        std::fill(idx.begin(), idx.end(), 0);
        do {
            for (int i = 0; i < free; ++i) d[i] = grids.d_axes[i][idx[i]] * up.sigma2;
            const double v = evaluate(grids.alpha0[ai], d);
            if (v > best.T) {
                best.T = v;
                best.alpha0 = grids.alpha0[ai];
                best.d = d;
                best_idx = idx;
                best_a = ai;
            }
        } while (bump());
    }
    if (!std::isfinite(best.T)) throw std::runtime_error("brute_force_small: no feasible grid point");

    // local zoom passes re-centred on the incumbent, window halved each pass;
    // coordinates are alpha0 and log(d / sigma^2)
    auto span = [](const std::vector<double> &axis, std::size_t i, bool log_scale) {
        auto tr = [&](double v) { return log_scale ? std::log(v) : v; };
        const double lo = i > 0 ? tr(axis[i - 1]) : tr(axis[i]);
        const double hi = i + 1 < axis.size() ? tr(axis[i + 1]) : tr(axis[i]);
        return std::max(hi - lo, 1e-12);
    };
    double a_half = span(grids.alpha0, best_a, false);
    std::vector<double> d_half(static_cast<std::size_t>(free));
    for (int i = 0; i < free; ++i) d_half[i] = span(grids.d_axes[i], best_idx[i], true);
    const int q = std::max(grids.refine_points, 3);
    for (int round = 0; round < grids.refine_rounds; ++round) {
        std::vector<int> k(static_cast<std::size_t>(free + 1), 0);
        const double a0c = best.alpha0;
        std::vector<double> ldc(static_cast<std::size_t>(free));
        for (int i = 0; i < free; ++i) ldc[i] = std::log(best.d[i] / up.sigma2);
        for (;;) {
            const double a = std::clamp(a0c + a_half * (2.0 * k[0] / (q - 1) - 1.0), 0.0, 1.0);
            for (int i = 0; i < free; ++i)
                d[i] = std::exp(ldc[i] + d_half[i] * (2.0 * k[i + 1] / (q - 1) - 1.0)) * up.sigma2;
            const double v = evaluate(a, d);
            if (v > best.T) {
                best.T = v;
                best.alpha0 = a;
                best.d = d;
            }
            int pos = free;
            while (pos >= 0 && ++k[pos] == q) k[pos--] = 0;
            if (pos < 0) break;
        }
        a_half *= 0.5;
        for (auto &h : d_half) h *= 0.5;
    }

    // slack: largest drop to a neighbouring point at the final resolution
    auto drop = [&](double a, std::vector<double> dd) {
        const double v = evaluate(std::clamp(a, 0.0, 1.0), dd);
        return std::isfinite(v) ? best.T - v : 0.0;
    };
    double slack = std::max({0.0, drop(best.alpha0 - a_half, best.d), drop(best.alpha0 + a_half, best.d)});
    for (int i = 0; i < free; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            std::vector<double> dd = best.d;
            dd[i] *= std::exp(sgn * d_half[i]);
            slack = std::max(slack, drop(best.alpha0, dd));
        }
    }
    best.grid_slack = slack + 1e-9 * std::abs(best.T);
    best.r = tp.min_rates(best.alpha0, best.d);
    return best;
}

// ---------- virtual MAC bound (D = 0, unlimited fronthaul) ----------

struct VmacRegion {
    std::vector<double> single;   // per-user single-user capacity, bits/sec
    double sum = 0.0;             // sum capacity, bits/sec
    /// Componentwise domination by some point of the region (relative slack `rel`).
    bool contains(const std::vector<double> &rates, double rel = 1e-6) const {
        double s = 0.0;
        for (std::size_t k = 0; k < rates.size(); ++k) {
            if (rates[k] > single[k] * (1.0 + rel) + 1e-9) return false;
            s += rates[k];
        }
        return s <= sum * (1.0 + rel) + 1e-9;
    }
};

/// Two-user (or single-user) MAC region with the whole RF slot for access.
inline VmacRegion vmac_region(const UnifiedProblem &up) {
    if (up.K > 2) throw std::invalid_argument("vmac_region: at most two users");
    const int n = up.MN;
    VmacRegion reg;
    SmallMatrix all = SmallMatrix::identity(n);
    for (int k = 0; k < up.K; ++k) {
        SmallMatrix one = SmallMatrix::identity(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cd v = up.power[k] / up.sigma2 * up.H(i, k) * std::conj(up.H(j, k));
                one(i, j) += v;
                all(i, j) += v;
            }
        reg.single.push_back(up.W_rf * log2_det_real(one));
    }
    reg.sum = up.W_rf * log2_det_real(all);
    return reg;
}

/// Corner points of the region's dominant face.
inline std::vector<std::vector<double>> vmac_corners(const VmacRegion &reg) {
    if (reg.single.size() == 1) return {{reg.single[0]}};
    return {{reg.single[0], reg.sum - reg.single[0]}, {reg.sum - reg.single[1], reg.single[1]}};
}

// ---------- randomized lemma sweeps ----------

enum class Fault { None, Lemma1SignFlip };

struct CheckResult {
    std::string name;
    long trials = 0;
    long failures = 0;
    double tolerance = 0.0;
    double max_error = 0.0;
    bool passed() const { return failures == 0; }
};

/// Transformed-constraint membership vs. the alpha-existence test:
/// alpha_m = [(r_m - C_fso_m)/C_rf_m]^+ must fit into 1 - alpha0.
inline CheckResult check_lemma1(std::mt19937_64 &rng, long trials, int M, Fault fault = Fault::None) {
    CheckResult res;
    res.name = "lemma1-equivalence-M" + std::to_string(M);
    res.trials = trials;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (long t = 0; t < trials; ++t) {
        std::vector<double> cfso(M), crf(M), r(M);
        for (int m = 0; m < M; ++m) {
            cfso[m] = std::pow(10.0, 5.0 + 4.0 * u01(rng));
            crf[m] = std::pow(10.0, 7.0 + 2.0 * u01(rng));
        }
        const double alpha0 = u01(rng);
        for (int m = 0; m < M; ++m) {
            // straddle the boundary: a random share of the RF time, scaled
            const double share = (1.0 - alpha0) * u01(rng) * 2.0 / M;
            r[m] = std::max(0.0, cfso[m] * (0.5 + u01(rng)) + (u01(rng) < 0.8 ? share * crf[m] : 0.0));
        }
        TransformedConstraints tc = lemma1_transform(cfso, crf);
        if (fault == Fault::Lemma1SignFlip)
            for (auto &row : tc.rows) row.fso_offset = -row.fso_offset;
        bool transformed = true;
        for (const auto &row : tc.rows) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < row.rus.size(); ++j) lhs += r[row.rus[j]] * row.G_m[j];
            if (lhs > (1.0 - alpha0) * row.G + row.fso_offset) transformed = false;
        }
        double need = 0.0;
        for (int m = 0; m < M; ++m) need += std::max(0.0, (r[m] - cfso[m]) / crf[m]);
        const bool exists = need <= 1.0 - alpha0;
        if (transformed != exists) {
            // ties at the boundary are rounding, not mismatches
            if (std::abs(need - (1.0 - alpha0)) > 1e-12) ++res.failures;
        }
    }
    return res;
}

inline SmallMatrix random_pd(std::mt19937_64 &rng, int J) {
    std::normal_distribution<double> g(0.0, 1.0);
    SmallMatrix a(J);
    for (auto &v : a.a) v = cd(g(rng), g(rng));
    SmallMatrix out(J);
    for (int i = 0; i < J; ++i)
        for (int j = 0; j < J; ++j) {
            cd s = 0.0;
            for (int k = 0; k < J; ++k) s += a(i, k) * std::conj(a(j, k));
            out(i, j) = s;
        }
    for (int i = 0; i < J; ++i) out(i, i) += 0.1;
    return out;
}

inline CMatrix to_eigen(const SmallMatrix &m) {
    CMatrix out(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out(i, j) = m(i, j);
    return out;
}

/// lemma2_value(X, Y) <= log2|X^-1| for random Y, with equality at Y = X^-1.
inline std::pair<CheckResult, CheckResult> check_lemma2(std::mt19937_64 &rng, long trials, int J) {
    CheckResult ineq, eq;
    ineq.name = "lemma2-inequality-J" + std::to_string(J);
    eq.name = "lemma2-equality-J" + std::to_string(J);
    ineq.tolerance = eq.tolerance = 1e-9;
    ineq.trials = eq.trials = trials;
    for (long t = 0; t < trials; ++t) {
        const SmallMatrix x = random_pd(rng, J);
        const SmallMatrix y = random_pd(rng, J);
        const SmallMatrix xinv = inverse(x);
        const double bound = log2_det_real(xinv);
        const double v = lemma2_value(to_eigen(x), to_eigen(y));
        const double excess = v - bound;
        ineq.max_error = std::max(ineq.max_error, excess);
        if (excess > ineq.tolerance) ++ineq.failures;
        const double at_opt = lemma2_value(to_eigen(x), to_eigen(xinv));
        const double err = std::abs(at_opt - bound);
        eq.max_error = std::max(eq.max_error, err);
        if (err > eq.tolerance) ++eq.failures;
    }
    return {ineq, eq};
}

struct LemmaReport {
    std::vector<CheckResult> checks;
    bool passed() const {
        for (const auto &c : checks)
            if (!c.passed()) return false;
        return true;
    }
};

inline LemmaReport lemma_checkers(std::mt19937_64 &rng, long lemma1_trials = 10000, long lemma2_trials = 1000,
                                  Fault fault = Fault::None) {
    LemmaReport rep;
    for (int M = 1; M <= 3; ++M) rep.checks.push_back(check_lemma1(rng, lemma1_trials, M, fault));
    auto [ineq, eq] = check_lemma2(rng, lemma2_trials, 4);
    rep.checks.push_back(ineq);
    rep.checks.push_back(eq);
    return rep;
}

} // namespace cran::oracle
