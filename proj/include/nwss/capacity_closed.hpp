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
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nwss/channel.hpp"
#include "nwss/types.hpp"

namespace nwss {

/// Strictly increasing 0-based index tuple selecting rows/columns of a
/// principal minor.
struct IndexTuple {
    std::vector<int> indices;

    IndexTuple() = default;
    IndexTuple(std::initializer_list<int> idx) : indices(idx) {}
    explicit IndexTuple(std::vector<int> idx) : indices(std::move(idx)) {}

    int size() const { return static_cast<int>(indices.size()); }

    /// Throws unless 0 <= indices[0] < ... < indices[k-1] < universe.
    void validate(int universe) const;
};

/// Block sizes of the structural sparsity pattern pairing rows of the
/// stacked Gaussian factor with cluster columns: row blocks are
/// (r_p,1, ..., r_p,g, M) and column blocks (s_p,1, ..., s_p,g, s_w) in
/// the general case; degenerate scenarios drop the absent side.
struct BlockStructure {
    std::vector<int> row_blocks;
    std::vector<int> col_blocks;

    int row_universe() const;
    int col_universe() const;
    void validate() const;  // equal counts, positive sizes
};

/// Weight of a (row tuple, column tuple) pair: with m_v rows and n_v
/// columns selected from block v, returns prod_v m_v! when m_v = n_v for
/// every block and 0 otherwise.
long long n_count(const IndexTuple& rows, const IndexTuple& cols, const BlockStructure& blocks);

/// Brute-force definition of the same weight: counts the permutations p
/// of the column tuple for which every (row_n, p_n) lands inside a
/// diagonal block. Requires k <= 8 (factorial enumeration guard). Kept
/// independent of n_count so the two can be checked against each other.
long long n_count_oracle(const IndexTuple& rows, const IndexTuple& cols,
                         const BlockStructure& blocks);

/// The stacked receiver-side correlation: B^H B for B = [W_p^(1/2), W_w^(1/2)]
/// with W_p = D_p R_p (block diagonal) and W_w = (rho_w / s_w) R_w, giving
///   [[W_p,            W_p^(1/2) W_w^(1/2)],
///    [W_w^(1/2) W_p^(1/2),            W_w]]  (2M x 2M).
/// When s_w = 0 or g = 0 only the surviving block is returned (M x M).
struct RrMatrix {
    Eigen::MatrixXcd mat;
    BlockStructure blocks;
};

RrMatrix build_Rr(const ScenarioConfig& cfg, const CorrelationBundle& bundle);

inline constexpr std::uint64_t kDefaultBudget = 100'000'000ULL;

/// Raised before any enumeration starts when the principal-minor term
/// count sum_k C(S,k) C(U,k) would exceed the budget.
class BudgetExceededError : public std::runtime_error {
  public:
    BudgetExceededError(int k, double required, std::uint64_t budget);
    int order() const { return k_; }

  private:
    int k_;
};

/// Exact determinant-expectation bound on the ergodic sum capacity:
/// log2 of
///   sum_k mu^k k! C(K,k) sum_i det(R_s minor) sum_j det(R_r minor) N(j, i).
/// Tuple pairs are enumerated grouped by per-block selection counts, so
/// pairs with N = 0 are skipped before any determinant work.
CapacityResult closed_form_bound(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                                 std::uint64_t budget = kDefaultBudget);

/// The all-PV special case (s_w = 0, rho_w = 0): the row sum runs over
/// the M rows of W_p only. Agrees with closed_form_bound on the same
/// scenario.
CapacityResult closed_form_bound_all_pv(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                                        std::uint64_t budget = kDefaultBudget);

/// Dominant-order (k = n) term of the bound for M = S = K = n:
///   n log2 mu + log2 n! + log2 det R_s
///     + log2( sum_j det(R_r minor) N(j, all columns) ).
/// Other shapes are rejected rather than extrapolated.
CapacityResult high_snr_bound(const ScenarioConfig& cfg, const CorrelationBundle& bundle);

/// Value of the high-SNR bound at the maximizing energy split
/// rho_p = s_p / S, evaluated through the gain-stripped stacked
/// correlation and the admissible tuple set (exactly s_p,0 rows per PV
/// block and s_w rows from the WV block). Requires the symmetric regime:
/// M = S = K, equal groups, equal gains, rho_p + rho_w = 1.
CapacityResult c_max(const ScenarioConfig& cfg, const CorrelationBundle& bundle);

/// All-PV high-SNR bound for M = S = K = n with g = n/c equal groups of
/// c clusters/antennas, rho_p = 1, Toeplitz correlations, expressed
/// through the Toeplitz determinant identity. mu_tilde = n mu is the
/// total SNR held fixed as the system grows.
CapacityResult all_pv_high_snr(int n, int c, double mu_tilde, cxd a_s, cxd a_p);

/// Large-system limit of the per-antenna rate increase of the all-PV
/// high-SNR bound:
///   log2(mu_tilde / (e c)) + (1/c) log2 c!
///     + log2((1 - |a_s|^2)(1 - |a_p|^2)^(1 - 1/c)).
CapacityResult asymptotic_rate(int c, double mu_tilde, cxd a_s, cxd a_p);

namespace detail {

/// Real part of the determinant of the principal minor of m on idx.
double minor_det(const Eigen::MatrixXcd& m, const std::vector<int>& idx);

/// Sum of principal minors of m over every tuple selecting comp[v]
/// indices from block v.
double minor_sum(const Eigen::MatrixXcd& m, const std::vector<int>& blocks,
                 const std::vector<int>& comp);

/// Calls fn(comp) for every composition of k over the given per-block caps.
void for_each_composition(int k, const std::vector<int>& caps,
                          const std::function<void(const std::vector<int>&)>& fn);

}  // namespace detail

}  // namespace nwss
