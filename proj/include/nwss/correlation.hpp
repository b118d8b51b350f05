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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "nwss/types.hpp"

namespace nwss {

/// Geometric (steering-vector) correlation of a uniform linear array:
/// a sum of rank-one outer products over propagation paths.
struct GeometricSpec {
    std::vector<double> attenuations;       // alpha_p >= 0, not all zero
    std::vector<double> doas_rad;           // beta_p, one per path
    double spacing_over_wavelength = 0.5;   // d / lambda, > 0
    int num_elements = 1;
};

/// Hermitian positive semidefinite correlation matrix with an eagerly
/// computed Hermitian square root. Immutable after construction and safe
/// to share across threads.
class CorrelationMatrix {
  public:
    CorrelationMatrix() = default;

    /// Validates Hermitian symmetry and positive semidefiniteness
    /// (smallest eigenvalue >= -1e-10) and caches the PSD square root.
    explicit CorrelationMatrix(Eigen::MatrixXcd entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    const Eigen::MatrixXcd& sqrt() const { return sqrt_; }
    /// Eigenvalues in descending order, clamped at zero.
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

    /// log2 of the determinant; -inf when singular.
    double log2_det() const;

  private:
    Eigen::MatrixXcd entries_;
    Eigen::MatrixXcd sqrt_;
    Eigen::VectorXd eigenvalues_;
};

/// d x d complex Toeplitz correlation with entry (i, j) = a^(j-i) for
/// j >= i and the conjugate power below the diagonal. Unit diagonal.
/// Rejects |a| > 1.
CorrelationMatrix toeplitz_corr(int dim, cxd a);

/// Dense entries of the Toeplitz correlation without PSD validation.
Eigen::MatrixXcd toeplitz_entries(int dim, cxd a);

/// Determinant of the Toeplitz correlation in closed form:
/// (1 - |a|^2)^(dim - 1).
double toeplitz_det(int dim, cxd a);

/// Correlation from the geometric channel model, normalized to unit
/// diagonal. Rejects an empty path set and negative attenuations.
CorrelationMatrix geometric_corr(const GeometricSpec& spec);

/// Unique Hermitian PSD square root via eigendecomposition. Eigenvalues
/// in [-1e-10, 0) are clamped to zero; anything below -1e-10 is rejected
/// as not PSD.
Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m);

}  // namespace nwss
