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

// Inner convex subproblem of the alternating optimizer: for fixed alpha_0 and
// fixed auxiliary matrices, maximize the surrogate weighted sum rate over the
// distortion matrix and the quantizer rates.
//
// D is parameterized by a Cholesky-like factor L restricted to the distortion
// pattern (diagonal, RU-block lower triangular, or dense lower triangular), so
// D = L L^H is Hermitian PSD with the required zero pattern by construction.
// Source-coding and fronthaul constraints enter through a logarithmic barrier
// and each barrier stage is solved by damped Newton steps with backtracking.
//
// All internal quantities are normalized: matrices by sigma^2, rates by W_rf.

#include "linalg.hpp"
#include "rates.hpp"
#include "scheme.hpp"
#include "transforms.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cran {

struct SubproblemOptions {
    AcoVariant variant = AcoVariant::MACO;
    double t0 = 1.0;                 // initial barrier weight
    double mu = 10.0;                // geometric barrier factor
    double tol = 1e-7;               // duality-gap proxy target, units of W_rf
    double decrement_tol = 1e-8;     // per-stage Newton decrement
    int max_stage_iterations = 100;
};

class SubproblemError : public std::runtime_error {
public:
    explicit SubproblemError(const std::string &what) : std::runtime_error(what) {}
};

/// Barrier objective t * T + sum_i log(slack_i) over x = [factor entries, r / W_rf].
class BarrierProblem {
public:
    enum class Kind { DiagReal, OffRe, OffIm };
    struct Param {
        int row, col;
        Kind kind;
    };

    /// `A` is required for the surrogate (M-ACO) variant and ignored otherwise.
    BarrierProblem(const UnifiedProblem &up, const TransformedConstraints &tc, double alpha0,
                   const std::vector<CMatrix> &B, const std::vector<CMatrix> *A, AcoVariant variant)
        : up_(up), tc_(tc), alpha0_(alpha0), variant_(variant) {
        const double s2 = up.sigma2;
        mn_ = up.MN;
        for (const auto &t : up.pattern_sets)
            for (std::size_t a = 0; a < t.size(); ++a)
                for (std::size_t b = 0; b <= a; ++b) {
                    if (a == b) {
                        params_.push_back({t[a], t[b], Kind::DiagReal});
                    } else {
                        params_.push_back({t[a], t[b], Kind::OffRe});
                        params_.push_back({t[a], t[b], Kind::OffIm});
                    }
                }
        n_factor_ = static_cast<int>(params_.size());

        for (int k = 0; k < up.K; ++k) {
            Vs_.push_back(up.V[k] / s2);
            const CMatrix bs = B[k] * s2;
            Bs_.push_back(bs);
            const CMatrix ws = up.W[k] / s2;
            const double c = (logdet_hpd(hermitize(bs)) - (bs * ws).trace().real() + mn_) / kLn2;
            obj_const_.push_back(c);
        }
        for (std::size_t s = 0; s < up.subsets.size(); ++s) {
            const auto n = static_cast<Eigen::Index>(up.subset_antennas[s].size());
            const CMatrix cs = up.C[s] / s2 + CMatrix::Identity(n, n);
            Cs_.push_back(cs);
            if (variant_ == AcoVariant::MACO) {
                if (A == nullptr) throw std::invalid_argument("BarrierProblem: surrogate variant needs A(S)");
                const CMatrix as = (*A)[s] * s2;
                As_.push_back(as);
                a_const_.push_back(-logdet_hpd(hermitize(as)) + (as * cs).trace().real() - static_cast<double>(n));
            }
        }
        fs_ = up.f_s / up.W_rf;
        for (int m = 0; m < up.M; ++m) {
            cfso_.push_back(up.C_fso[m] / up.W_rf);
            crf_.push_back(up.C_rf[m] / up.W_rf);
        }
    }

    int dimension() const { return n_factor_ + up_.M; }
    int factor_dimension() const { return n_factor_; }
    int constraint_count() const {
        return static_cast<int>(up_.subsets.size() + tc_.rows.size() + tc_.fso_only.size());
    }
    const std::vector<Param> &params() const { return params_; }

    /// Packs a physical (D, r) into x. D must be PD on every pattern block.
    RVector pack(const CMatrix &D, const std::vector<double> &r) const {
        RVector x(dimension());
        CMatrix L = CMatrix::Zero(mn_, mn_);
        for (const auto &t : up_.pattern_sets) {
            const CMatrix blk = hermitize(principal_submatrix(D, t)) / up_.sigma2;
            Eigen::LLT<CMatrix> llt(blk);
            if (llt.info() != Eigen::Success) throw SubproblemError("pack: distortion block not positive definite");
            const CMatrix lb = llt.matrixL();
            for (std::size_t a = 0; a < t.size(); ++a)
                for (std::size_t b = 0; b <= a; ++b) L(t[a], t[b]) = lb(a, b);
        }
        for (int i = 0; i < n_factor_; ++i) {
            const auto &p = params_[i];
            const cplx v = L(p.row, p.col);
            x(i) = p.kind == Kind::OffIm ? v.imag() : v.real();
        }
        for (int m = 0; m < up_.M; ++m) x(n_factor_ + m) = r[m] / up_.W_rf;
        return x;
    }

    CMatrix factor(const RVector &x) const {
        CMatrix L = CMatrix::Zero(mn_, mn_);
        for (int i = 0; i < n_factor_; ++i) {
            const auto &p = params_[i];
            if (p.kind == Kind::OffIm)
                L(p.row, p.col) += cplx(0.0, x(i));
            else
                L(p.row, p.col) += x(i);
        }
        return L;
    }

    /// Normalized distortion D / sigma^2.
    CMatrix scaled_distortion(const RVector &x) const {
        const CMatrix L = factor(x);
        return hermitize(L * L.adjoint());
    }

    CMatrix distortion(const RVector &x) const { return scaled_distortion(x) * up_.sigma2; }

    std::vector<double> rates(const RVector &x) const {
        std::vector<double> r(static_cast<std::size_t>(up_.M));
        for (int m = 0; m < up_.M; ++m) r[m] = x(n_factor_ + m) * up_.W_rf;
        return r;
    }

    /// Surrogate objective divided by W_rf; -inf if not evaluable.
    double surrogate(const RVector &x) const {
        const CMatrix d = scaled_distortion(x);
        double acc = 0.0;
        for (int k = 0; k < up_.K; ++k) {
            if (up_.mu[k] == 0.0) continue;
            double ld;
            if (!try_logdet_hpd(hermitize(Vs_[k] + d), ld)) return -std::numeric_limits<double>::infinity();
            acc += up_.mu[k] * (ld / kLn2 + obj_const_[k] - (Bs_[k] * d).trace().real() / kLn2);
        }
        return alpha0_ * acc;
    }

    /// Smallest constraint slack (normalized units); <= 0 means infeasible.
    double min_slack(const RVector &x) const {
        std::vector<double> s;
        if (!slacks(x, s, nullptr, nullptr)) return -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (double v : s) lo = std::min(lo, v);
        return lo;
    }

    /// t * surrogate + sum log slack. Returns -inf outside the domain. When
    /// `grad` / `hess` are non-null they receive the gradient and Hessian with
    /// respect to x.
    double value(const RVector &x, double t, RVector *grad, Eigen::MatrixXd *hess = nullptr) const {
        constexpr double kNegInf = -std::numeric_limits<double>::infinity();
        if (hess && !grad) throw std::invalid_argument("BarrierProblem::value: Hessian requires gradient");
        const int n = dimension();
        const CMatrix L = factor(x);
        const CMatrix d = hermitize(L * L.adjoint());

        if (hess) hess->setZero(n, n);
        // Adds c * d^2 log|X| = -c Tr(P dD_i P dD_j) over the factor block,
        // with P = X^-1 embedded in MN x MN. Each dD_i is the rank-two
        // e (delta_r l_c^H) + conj(e) (l_c delta_r^H) with l_c column c of L,
        // so every entry reduces to scalars from P, P L and L^H P L.
        auto add_logdet_curvature = [&](const CMatrix &p, double c) {
            const CMatrix pl = p * L;
            const CMatrix lpl = L.adjoint() * pl;
            for (int i = 0; i < n_factor_; ++i) {
                const auto &a = params_[i];
                const cplx ea = unit(a.kind);
                for (int j = 0; j <= i; ++j) {
                    const auto &b = params_[j];
                    const cplx eb = unit(b.kind);
                    const cplx l_i_d_j = eb * std::conj(pl(b.row, a.col));   // l_i^H P (e_j delta_j)
                    const cplx l_j_d_i = ea * std::conj(pl(a.row, b.col));
                    const cplx d_i_l_j = std::conj(ea) * pl(a.row, b.col);   // (e_i delta_i)^H P l_j
                    const cplx d_j_l_i = std::conj(eb) * pl(b.row, a.col);
                    const cplx d_i_d_j = std::conj(ea) * eb * p(a.row, b.row);
                    const cplx d_j_d_i = std::conj(eb) * ea * p(b.row, a.row);
                    const cplx tr = l_i_d_j * l_j_d_i + lpl(a.col, b.col) * d_j_d_i + d_i_d_j * lpl(b.col, a.col) +
                                    d_i_l_j * d_j_l_i;
                    const double v = -c * tr.real();
                    (*hess)(i, j) += v;
                    if (i != j) (*hess)(j, i) += v;
                }
            }
        };
        auto factor_gradient = [&](const CMatrix &g, RVector &out) {
            const CMatrix gl = hermitize(g) * L;
            for (int i = 0; i < n_factor_; ++i) {
                const auto &p = params_[i];
                const cplx v = gl(p.row, p.col);
                out(i) = 2.0 * (p.kind == Kind::OffIm ? v.imag() : v.real());
            }
        };

        CMatrix gd = CMatrix::Zero(mn_, mn_);
        RVector gr = RVector::Zero(up_.M);

        double obj = 0.0;
        for (int k = 0; k < up_.K; ++k) {
            if (up_.mu[k] == 0.0) continue;
            const CMatrix vk = hermitize(Vs_[k] + d);
            Eigen::LLT<CMatrix> llt(vk);
            if (llt.info() != Eigen::Success) return kNegInf;
            double ld = 0.0;
            for (Eigen::Index i = 0; i < mn_; ++i) ld += std::log(llt.matrixLLT()(i, i).real());
            ld *= 2.0;
            obj += up_.mu[k] * (ld / kLn2 + obj_const_[k] - (Bs_[k] * d).trace().real() / kLn2);
            if (grad) {
                const CMatrix inv = llt.solve(CMatrix::Identity(mn_, mn_));
                const double c = t * alpha0_ * up_.mu[k] / kLn2;
                gd += c * (inv - Bs_[k]);
                if (hess) add_logdet_curvature(inv, c);
            }
        }
        double phi = t * alpha0_ * obj;

        std::vector<double> s;
        std::vector<CMatrix> ds_grad;
        std::vector<RVector> dr_grad;
        std::vector<std::vector<std::pair<CMatrix, double>>> curv;
        if (!slacks(x, s, grad ? &ds_grad : nullptr, grad ? &dr_grad : nullptr, &d, hess ? &curv : nullptr))
            return kNegInf;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!(s[i] > 0.0)) return kNegInf;
            phi += std::log(s[i]);
        }
        if (!std::isfinite(phi)) return kNegInf;

        if (grad) {
            const std::size_t n_src = up_.subsets.size();
            RVector ds(n);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double w = 1.0 / s[i];
                CMatrix gfull;
                if (i < n_src) {
                    gfull = CMatrix::Zero(mn_, mn_);
                    scatter_submatrix(gfull, up_.subset_antennas[i], ds_grad[i]);
                    gd += w * gfull;
                }
                gr += w * dr_grad[i];
                if (hess) {
                    ds.setZero();
                    if (i < n_src) {
                        RVector fg(n_factor_);
                        factor_gradient(gfull, fg);
                        ds.head(n_factor_) = fg;
                        for (const auto &[xinv, c] : curv[i]) {
                            CMatrix pe = CMatrix::Zero(mn_, mn_);
                            scatter_submatrix(pe, up_.subset_antennas[i], xinv);
                            add_logdet_curvature(pe, w * c);
                        }
                    }
                    ds.tail(up_.M) = dr_grad[i];
                    *hess -= (w * w) * (ds * ds.transpose());
                }
            }
            grad->resize(n);
            RVector fg(n_factor_);
            factor_gradient(gd, fg);
            grad->head(n_factor_) = fg;
            grad->tail(up_.M) = gr;

            if (hess) {
                // second-order term of D = L L^H: Tr(G (E_i E_j^H + E_j E_i^H))
                const CMatrix g = hermitize(gd);
                for (int i = 0; i < n_factor_; ++i)
                    for (int j = 0; j < n_factor_; ++j) {
                        const auto &pi = params_[i];
                        const auto &pj = params_[j];
                        if (pi.col != pj.col) continue;
                        const cplx v = unit(pi.kind) * std::conj(unit(pj.kind)) * g(pj.row, pi.row);
                        (*hess)(i, j) += 2.0 * v.real();
                    }
                *hess = 0.5 * (*hess + hess->transpose()).eval();
            }
        }
        return phi;
    }

private:
    static cplx unit(Kind k) { return k == Kind::OffIm ? cplx(0.0, 1.0) : cplx(1.0, 0.0); }

    /// Constraint slacks in the order [source coding per subset, transformed
    /// capacity rows, FSO-only bounds], with optional gradients. Source-coding
    /// gradients are returned as |S|N x |S|N blocks.
    bool slacks(const RVector &x, std::vector<double> &s, std::vector<CMatrix> *dgrad,
                std::vector<RVector> *rgrad, const CMatrix *dptr = nullptr,
                std::vector<std::vector<std::pair<CMatrix, double>>> *curv = nullptr) const {
        CMatrix dlocal;
        if (dptr == nullptr) {
            dlocal = scaled_distortion(x);
            dptr = &dlocal;
        }
        const CMatrix &d = *dptr;
        s.clear();
        const double scale = alpha0_ * fs_;
        for (std::size_t si = 0; si < up_.subsets.size(); ++si) {
            const auto &idx = up_.subset_antennas[si];
            const auto n = static_cast<Eigen::Index>(idx.size());
            const CMatrix dsub = hermitize(principal_submatrix(d, idx));
            Eigen::LLT<CMatrix> lld(dsub);
            if (lld.info() != Eigen::Success) return false;
            double ldd = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double p = lld.matrixLLT()(i, i).real();
                if (!(p > 0.0)) return false;
                ldd += std::log(p);
            }
            ldd *= 2.0;
            double rate;
            CMatrix g;
            // slack = ... + sum c log|X|, recorded as (X^-1, c)
            std::vector<std::pair<CMatrix, double>> terms;
            if (variant_ == AcoVariant::MACO) {
                rate = (a_const_[si] + (As_[si] * dsub).trace().real() - ldd) / kLn2;
                if (dgrad) {
                    const CMatrix dinv = lld.solve(CMatrix::Identity(n, n));
                    g = (As_[si] - dinv) / kLn2;
                    if (curv) terms.emplace_back(dinv, scale / kLn2);
                }
            } else {
                Eigen::LLT<CMatrix> llx(hermitize(Cs_[si] + dsub));
                if (llx.info() != Eigen::Success) return false;
                double ldx = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) ldx += std::log(llx.matrixLLT()(i, i).real());
                ldx *= 2.0;
                rate = (ldx - ldd) / kLn2;
                if (dgrad) {
                    const CMatrix xinv = llx.solve(CMatrix::Identity(n, n));
                    const CMatrix dinv = lld.solve(CMatrix::Identity(n, n));
                    g = (xinv - dinv) / kLn2;
                    if (curv) {
                        terms.emplace_back(dinv, scale / kLn2);
                        terms.emplace_back(xinv, -scale / kLn2);
                    }
                }
            }
            if (curv) curv->push_back(std::move(terms));
            double lhs = 0.0;
            for (int m : up_.subsets[si]) lhs += x(n_factor_ + m);
            s.push_back(lhs - scale * rate);
            if (dgrad) {
                dgrad->push_back(-scale * g);
                RVector gr = RVector::Zero(up_.M);
                for (int m : up_.subsets[si]) gr(m) = 1.0;
                rgrad->push_back(gr);
            }
        }
        for (const auto &row : tc_.rows) {
            double v = 1.0 - alpha0_;
            RVector gr = RVector::Zero(up_.M);
            for (int m : row.rus) {
                v += (cfso_[m] - x(n_factor_ + m)) / crf_[m];
                gr(m) = -1.0 / crf_[m];
            }
            s.push_back(v);
            if (rgrad) {
                dgrad->push_back(CMatrix());
                rgrad->push_back(gr);
            }
        }
        for (int m : tc_.fso_only) {
            s.push_back(cfso_[m] - x(n_factor_ + m));
            if (rgrad) {
                RVector gr = RVector::Zero(up_.M);
                gr(m) = -1.0;
                dgrad->push_back(CMatrix());
                rgrad->push_back(gr);
            }
        }
        return true;
    }

    const UnifiedProblem &up_;
    const TransformedConstraints &tc_;
    double alpha0_;
    AcoVariant variant_;
    int mn_ = 0;
    int n_factor_ = 0;
    std::vector<Param> params_;
    std::vector<CMatrix> Vs_, Bs_, Cs_, As_;
    std::vector<double> obj_const_, a_const_;
    double fs_ = 0.0;
    std::vector<double> cfso_, crf_;
};

struct SubproblemResult {
    CMatrix D;
    std::vector<double> r;
    double T = 0.0;                // surrogate objective, bits/sec
    int barrier_stages = 0;
    int newton_iterations = 0;
    double final_t = 0.0;          // barrier weight of the last stage
    bool kept_incoming = false;    // solver did not improve on the warm start
};

namespace detail {

/// Damped Newton ascent on problem.value(., t) from a strictly feasible x.
/// The factor parameterization makes the objective nonconcave in x, so the
/// negated Hessian is shifted until positive definite.
inline int maximize_stage(const BarrierProblem &bp, double t, RVector &x, const SubproblemOptions &opts) {
    const int n = bp.dimension();
    RVector g;
    double f = bp.value(x, t, nullptr);
    if (!std::isfinite(f)) throw SubproblemError("barrier stage started outside the domain");
    int it = 0;
    for (; it < opts.max_stage_iterations; ++it) {
        Eigen::MatrixXd hess;
        bp.value(x, t, &g, &hess);
        const Eigen::MatrixXd neg_h = -hess;
        double shift = 0.0;
        const double base = std::max(1e-12, 1e-10 * neg_h.diagonal().cwiseAbs().maxCoeff());
        RVector p;
        for (int k = 0; k < 60 && p.size() == 0; ++k) {
            Eigen::LLT<Eigen::MatrixXd> llt(neg_h + shift * Eigen::MatrixXd::Identity(n, n));
            if (llt.info() == Eigen::Success) {
                RVector cand = llt.solve(g);
                if (cand.allFinite()) p = std::move(cand);
            }
            shift = shift == 0.0 ? base : shift * 10.0;
        }
        if (p.size() == 0) break;
        const double decrement = g.dot(p);
        if (!(decrement > 0.0)) break;
        if (0.5 * decrement <= opts.decrement_tol) break;

        // backtrack into the domain, then on sufficient increase; once the
        // decrement is small the full step is taken if it stays feasible
        double step = 1.0;
        RVector xn;
        double fn = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            xn = x + step * p;
            fn = bp.value(xn, t, nullptr);
            if (std::isfinite(fn)) {
                if (fn >= f + 0.25 * step * decrement) {
                    accepted = true;
                    break;
                }
                if (decrement < 1e-3 && fn >= f - 1e-13 * std::abs(f)) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;
        x = xn;
        f = fn;
    }
    return it;
}

} // namespace detail

/// Solves the inner problem from the strictly feasible warm start (D_in, r_in).
/// The returned surrogate value never falls below the warm start's.
inline SubproblemResult solve_inner_subproblem(double alpha0, const std::vector<CMatrix> &B,
                                               const std::vector<CMatrix> *A, const UnifiedProblem &up,
                                               const TransformedConstraints &tc, const CMatrix &D_in,
                                               const std::vector<double> &r_in, const SubproblemOptions &opts) {
    SubproblemResult res;
    if (alpha0 <= 0.0) {
        res.D = D_in;
        res.r.assign(static_cast<std::size_t>(up.M), 0.0);
        res.T = 0.0;
        res.kept_incoming = true;
        return res;
    }
    BarrierProblem bp(up, tc, alpha0, B, A, opts.variant);
    RVector x = bp.pack(D_in, r_in);
    if (!(bp.min_slack(x) > 0.0)) throw SubproblemError("warm start is not strictly feasible");
    const RVector x_in = x;
    const double t_in = bp.surrogate(x_in);

    const double m = bp.constraint_count();
    double t = opts.t0;
    for (;;) {
        res.newton_iterations += detail::maximize_stage(bp, t, x, opts);
        ++res.barrier_stages;
        if (m / t < opts.tol) break;
        t *= opts.mu;
    }
    res.final_t = t;
    double t_out = bp.surrogate(x);
    if (!std::isfinite(t_out)) throw SubproblemError("non-finite surrogate objective at barrier solution");
    if (t_out < t_in) {
        x = x_in;
        t_out = t_in;
        res.kept_incoming = true;
    }
    res.D = bp.distortion(x);
    res.r = bp.rates(x);
    res.T = t_out * up.W_rf;
    return res;
}

} // namespace cran
