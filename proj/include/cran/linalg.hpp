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

// Dense complex linear algebra helpers shared by the rate and optimizer code.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cran {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kLn2 = std::numbers::ln2;

/// Raised when a matrix that must be Hermitian positive definite is not.
class NotPositiveDefinite : public std::runtime_error {
public:
    explicit NotPositiveDefinite(const std::string &what) : std::runtime_error(what) {}
};

/// (A + A^H) / 2.
inline CMatrix hermitize(const CMatrix &a) {
    return (a + a.adjoint()) * 0.5;
}

/// Natural-log determinant of a Hermitian positive definite matrix via Cholesky.
inline double logdet_hpd(const CMatrix &a) {
    if (a.rows() == 0) return 0.0;
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Cholesky failed in logdet");
    const auto &l = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        const double d = l(i, i).real();
        if (!(d > 0.0) || !std::isfinite(d))
            throw NotPositiveDefinite("non-positive Cholesky pivot in logdet");
        acc += std::log(d);
    }
    return 2.0 * acc;
}

/// Same as logdet_hpd but reports failure instead of throwing.
inline bool try_logdet_hpd(const CMatrix &a, double &out) {
    if (a.rows() == 0) {
        out = 0.0;
        return true;
    }
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success) return false;
    const auto &l = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        const double d = l(i, i).real();
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        acc += std::log(d);
    }
    out = 2.0 * acc;
    return true;
}

/// Inverse of a Hermitian positive definite matrix, symmetrized.
inline CMatrix inverse_hpd(const CMatrix &a) {
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Cholesky failed in inverse");
    return hermitize(llt.solve(CMatrix::Identity(a.rows(), a.cols())));
}

/// log-determinant with eigenvalues floored at `floor`. Used for distortion
/// submatrices whose exact zeros would otherwise give -inf.
inline double logdet_floored(const CMatrix &a, double floor) {
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        acc += std::log(std::max(es.eigenvalues()(i), floor));
    return acc;
}

inline double min_eigenvalue(const CMatrix &a) {
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Principal submatrix on the (0-based, sorted) index set `idx`.
inline CMatrix principal_submatrix(const CMatrix &a, const std::vector<int> &idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    CMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = a(idx[i], idx[j]);
    return out;
}

/// Writes `block` back into `a` on the index set `idx`.
inline void scatter_submatrix(CMatrix &a, const std::vector<int> &idx, const CMatrix &block) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(idx[i], idx[j]) += block(i, j);
}

} // namespace cran
