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

// Constraint and objective transforms used by the alternating optimizer:
// the subset form of the fronthaul capacity constraint, the log-det
// variational identity, and the closed-form auxiliary matrices.

#include "linalg.hpp"
#include "rates.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cran {

/// Capacity constraint rewritten over subsets of RUs so that only alpha_0
/// remains as a time variable:
///   sum_{m in S} r_m G_m(S) <= (1 - alpha_0) G(S) + sum_{m in S} G_m(S) C_fso_m.
///
/// RUs whose RF fronthaul capacity is zero are excluded from the products and
/// constrained directly by r_m <= C_fso_m.
struct TransformedConstraints {
    struct Row {
        std::vector<int> rus;        // S, over RUs with C_rf > 0
        std::vector<double> G_m;     // aligned with rus
        double G = 0.0;
        double fso_offset = 0.0;     // sum_m G_m(S) C_fso_m
    };

    std::vector<Row> rows;
    std::vector<int> fso_only;       // RUs with C_rf == 0
    std::vector<double> C_fso, C_rf;

    /// Slack of row i divided by G(S), in bits/sec; >= 0 means satisfied.
    double normalized_slack(std::size_t i, const std::vector<double> &r, double alpha0) const {
        const auto &row = rows[i];
        double s = (1.0 - alpha0);
        for (std::size_t j = 0; j < row.rus.size(); ++j) {
            const int m = row.rus[j];
            s += (C_fso[m] - r[m]) / C_rf[m];
        }
        return s;
    }

    /// Row evaluated in the product form, lhs <= rhs.
    std::pair<double, double> product_form(std::size_t i, const std::vector<double> &r, double alpha0) const {
        const auto &row = rows[i];
        double lhs = 0.0;
        for (std::size_t j = 0; j < row.rus.size(); ++j) lhs += r[row.rus[j]] * row.G_m[j];
        return {lhs, (1.0 - alpha0) * row.G + row.fso_offset};
    }

    /// True when every transformed row (relative slack `rel`) and every
    /// FSO-only bound holds.
    bool satisfied(const std::vector<double> &r, double alpha0, double rel = 0.0) const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto [lhs, rhs] = product_form(i, r, alpha0);
            if (lhs > rhs + rel * std::abs(rhs)) return false;
        }
        for (int m : fso_only)
            if (r[m] > C_fso[m] * (1.0 + rel)) return false;
        return true;
    }
};

inline TransformedConstraints lemma1_transform(const std::vector<double> &C_fso, const std::vector<double> &C_rf) {
    if (C_fso.size() != C_rf.size()) throw std::invalid_argument("lemma1_transform: size mismatch");
    TransformedConstraints tc;
    tc.C_fso = C_fso;
    tc.C_rf = C_rf;
    std::vector<int> active;
    for (int m = 0; m < static_cast<int>(C_rf.size()); ++m) {
        if (C_rf[m] > 0.0)
            active.push_back(m);
        else
            tc.fso_only.push_back(m);
    }
    const int na = static_cast<int>(active.size());
    for (unsigned mask = 1; mask < (1u << na); ++mask) {
        TransformedConstraints::Row row;
        double prod = 1.0;
        for (int i = 0; i < na; ++i)
            if (mask & (1u << i)) {
                row.rus.push_back(active[i]);
                prod *= C_rf[active[i]];
            }
        row.G = prod;
        for (int m : row.rus) {
            const double gm = prod / C_rf[m];
            row.G_m.push_back(gm);
            row.fso_offset += gm * C_fso[m];
        }
        tc.rows.push_back(std::move(row));
    }
    return tc;
}

/// log2|Y| - Tr(Y X)/ln2 + J/ln2. Maximized over Y >= 0 at Y = X^-1 where it
/// equals log2|X^-1|.
inline double lemma2_value(const CMatrix &X, const CMatrix &Y) {
    const double ld = logdet_hpd(hermitize(Y));
    const double tr = (Y * X).trace().real();
    return (ld - tr + static_cast<double>(X.rows())) / kLn2;
}

/// B_k = (W_k + D)^-1 for every user.
inline std::vector<CMatrix> closed_form_B(const CMatrix &D, const UnifiedProblem &up) {
    std::vector<CMatrix> b;
    b.reserve(up.W.size());
    for (const auto &w : up.W) b.push_back(inverse_hpd(hermitize(w + D)));
    return b;
}

/// A(S) = (C(S) + D_S + sigma^2 I)^-1 for every source-coding subset.
inline std::vector<CMatrix> closed_form_A(const CMatrix &D, const UnifiedProblem &up) {
    std::vector<CMatrix> a;
    a.reserve(up.subsets.size());
    for (std::size_t s = 0; s < up.subsets.size(); ++s) {
        const auto &idx = up.subset_antennas[s];
        const auto n = static_cast<Eigen::Index>(idx.size());
        a.push_back(inverse_hpd(hermitize(up.C[s] + principal_submatrix(D, idx) +
                                          up.sigma2 * CMatrix::Identity(n, n))));
    }
    return a;
}

/// Linearized upper bound on log2(|C(S) + D_S + sigma^2 I| / |D_S|) for a
/// fixed A(S); tight at A(S) = (C(S) + D_S + sigma^2 I)^-1.
inline double rate_upper_bound(std::size_t s, const CMatrix &A, const CMatrix &D, const UnifiedProblem &up) {
    const auto &idx = up.subset_antennas.at(s);
    const auto n = static_cast<Eigen::Index>(idx.size());
    const CMatrix ds = hermitize(principal_submatrix(D, idx));
    const CMatrix x = up.C[s] + ds + up.sigma2 * CMatrix::Identity(n, n);
    const double v = -logdet_hpd(hermitize(A)) + (A * x).trace().real() - static_cast<double>(n) -
                     logdet_floored(ds, kDistortionFloor * up.sigma2);
    return v / kLn2;
}

/// Surrogate objective with fixed B_k, bits/sec:
///   alpha0 W_rf sum_k mu_k [log2|V_k + D| + log2|B_k| - Tr(B_k (W_k + D))/ln2 + MN/ln2].
/// Equals the weighted sum rate when B_k = (W_k + D)^-1.
inline double surrogate_objective(double alpha0, const CMatrix &D, const std::vector<CMatrix> &B,
                                  const UnifiedProblem &up) {
    double acc = 0.0;
    for (int k = 0; k < up.K; ++k) {
        if (up.mu[k] == 0.0) continue;
        const double v = logdet_hpd(hermitize(up.V[k] + D)) / kLn2;
        acc += up.mu[k] * (v + lemma2_value(up.W[k] + D, B[k]));
    }
    return alpha0 * up.W_rf * acc;
}

class InfeasibleAllocation : public std::runtime_error {
public:
    explicit InfeasibleAllocation(const std::string &what) : std::runtime_error(what) {}
};

/// Per-RU fronthaul time from the quantizer rates: alpha_m = [(r_m - C_fso_m)/C_rf_m]^+.
/// Leftover RF time is reported as idle.
inline TimeAllocation recover_alpha(const std::vector<double> &r, const std::vector<double> &C_fso,
                                    const std::vector<double> &C_rf, double alpha0) {
    TimeAllocation out;
    out.alpha0 = alpha0;
    double used = 0.0;
    for (std::size_t m = 0; m < r.size(); ++m) {
        double a = 0.0;
        if (r[m] > C_fso[m]) {
            if (!(C_rf[m] > 0.0)) {
                if (r[m] > C_fso[m] * (1.0 + 1e-6))
                    throw InfeasibleAllocation("recover_alpha: rate exceeds FSO capacity on RU without RF fronthaul");
            } else {
                a = (r[m] - C_fso[m]) / C_rf[m];
            }
        }
        out.alpha.push_back(a);
        used += a;
    }
    const double budget = 1.0 - alpha0;
    const double residual = budget - used;
    if (residual < -1e-6) throw InfeasibleAllocation("recover_alpha: fronthaul time exceeds 1 - alpha0");
    if (residual < 0.0 && used > 0.0) {
        for (auto &a : out.alpha) a *= budget / used;
        out.idle = 0.0;
    } else {
        out.idle = std::max(residual, 0.0);
    }
    return out;
}

} // namespace cran
