// SPDX-License-Identifier: Apache-2.0
//
// nwss-mimo  Capacity analysis for spatially non-stationary massive MIMO channels
// Copyright (C) 2026 The nwss-mimo authors
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

#include "nwss/correlation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nwss {

namespace {

constexpr double kPsdTolerance = 1e-10;

void check_hermitian(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("correlation matrix must be square");
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > 1e-12 * scale)
        throw std::invalid_argument("correlation matrix must be Hermitian");
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    check_hermitian(entries_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    Eigen::VectorXd vals = es.eigenvalues();
    if (vals.minCoeff() < -kPsdTolerance)
        throw std::invalid_argument("correlation matrix is not positive semidefinite (min eigenvalue " +
                                    std::to_string(vals.minCoeff()) + ")");
    vals = vals.cwiseMax(0.0);
    sqrt_ = es.eigenvectors() * vals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    sqrt_ = ((sqrt_ + sqrt_.adjoint()) / 2.0).eval();
    eigenvalues_ = vals.reverse();
}

double CorrelationMatrix::log2_det() const {
    double d = 0.0;
    for (int i = 0; i < eigenvalues_.size(); ++i) {
        if (eigenvalues_[i] <= 0.0) return -std::numeric_limits<double>::infinity();
        d += std::log2(eigenvalues_[i]);
    }
    return d;
}

Eigen::MatrixXcd toeplitz_entries(int dim, cxd a) {
    if (dim < 1) throw std::invalid_argument("toeplitz_corr: dim must be >= 1");
    if (std::abs(a) > 1.0 + 1e-15)
        throw std::invalid_argument("toeplitz_corr: |a| must be <= 1");
    Eigen::MatrixXcd m(dim, dim);
    std::vector<cxd> pow(dim);
    pow[0] = 1.0;
    for (int p = 1; p < dim; ++p) pow[p] = pow[p - 1] * a;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j)
            m(i, j) = j >= i ? pow[j - i] : std::conj(pow[i - j]);
    }
    return m;
}

CorrelationMatrix toeplitz_corr(int dim, cxd a) {
    return CorrelationMatrix(toeplitz_entries(dim, a));
}

double toeplitz_det(int dim, cxd a) {
    if (dim < 1) throw std::invalid_argument("toeplitz_det: dim must be >= 1");
    const double mod2 = std::norm(a);
    if (mod2 > 1.0 + 1e-15) throw std::invalid_argument("toeplitz_det: |a| must be <= 1");
    return std::pow(1.0 - mod2, dim - 1);
}

CorrelationMatrix geometric_corr(const GeometricSpec& spec) {
    const std::size_t paths = spec.attenuations.size();
    if (paths == 0) throw std::invalid_argument("geometric_corr: needs at least one path");
    if (spec.doas_rad.size() != paths)
        throw std::invalid_argument("geometric_corr: attenuations and doas must have equal length");
    if (spec.num_elements < 1) throw std::invalid_argument("geometric_corr: num_elements must be >= 1");
    if (!(spec.spacing_over_wavelength > 0.0))
        throw std::invalid_argument("geometric_corr: antenna spacing must be positive");

    double total = 0.0;
    for (double alpha : spec.attenuations) {
        if (alpha < 0.0) throw std::invalid_argument("geometric_corr: attenuations must be nonnegative");
        total += alpha;
    }
    if (!(total > 0.0)) throw std::invalid_argument("geometric_corr: attenuations must sum to a positive value");

    const int n = spec.num_elements;
    const double delta = 2.0 * M_PI * spec.spacing_over_wavelength;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd steer(n);
    for (std::size_t p = 0; p < paths; ++p) {
        const double phase = -delta * std::cos(spec.doas_rad[p]);
        for (int i = 0; i < n; ++i) steer[i] = std::polar(1.0, phase * i);
        m.noalias() += spec.attenuations[p] * steer * steer.adjoint();
    }
    m /= total;  // unit diagonal: each rank-one term has unit diagonal
    m = ((m + m.adjoint()) / 2.0).eval();
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return CorrelationMatrix(std::move(m));
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
    check_hermitian(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    Eigen::VectorXd vals = es.eigenvalues();
    if (vals.size() > 0 && vals.minCoeff() < -kPsdTolerance)
        throw std::invalid_argument("hermitian_sqrt: matrix is not positive semidefinite (min eigenvalue " +
                                    std::to_string(vals.minCoeff()) + ")");
    vals = vals.cwiseMax(0.0);
    Eigen::MatrixXcd r = es.eigenvectors() * vals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    return (r + r.adjoint()) / 2.0;
}

}  // namespace nwss
