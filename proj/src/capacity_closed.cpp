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

#include "nwss/capacity_closed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "nwss/numeric.hpp"

namespace nwss {

namespace {

int block_index(int idx, const std::vector<int>& blocks) {
    int off = 0;
    for (std::size_t v = 0; v < blocks.size(); ++v) {
        off += blocks[v];
        if (idx < off) return static_cast<int>(v);
    }
    return -1;
}

// Lexicographic successor of a k-combination of [lo, hi); false on wrap.
bool next_combination(std::vector<int>& c, int lo, int hi) {
    const int k = static_cast<int>(c.size());
    if (k == 0) return false;
    int i = k - 1;
    while (i >= 0 && c[i] == hi - k + i) --i;
    if (i < 0) {
        for (int j = 0; j < k; ++j) c[j] = lo + j;
        return false;
    }
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

double clamp_nonneg(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

void IndexTuple::validate(int universe) const {
    for (std::size_t n = 0; n < indices.size(); ++n) {
        if (indices[n] < 0 || indices[n] >= universe)
            throw std::invalid_argument("IndexTuple: index out of range");
        if (n > 0 && indices[n] <= indices[n - 1])
            throw std::invalid_argument("IndexTuple: indices must be strictly increasing");
    }
}

int BlockStructure::row_universe() const {
    return std::accumulate(row_blocks.begin(), row_blocks.end(), 0);
}

int BlockStructure::col_universe() const {
    return std::accumulate(col_blocks.begin(), col_blocks.end(), 0);
}

void BlockStructure::validate() const {
    if (row_blocks.size() != col_blocks.size())
        throw std::invalid_argument("BlockStructure: row/col block counts must match");
    if (row_blocks.empty()) throw std::invalid_argument("BlockStructure: needs at least one block");
    for (int b : row_blocks)
        if (b < 0) throw std::invalid_argument("BlockStructure: negative row block");
    for (int b : col_blocks)
        if (b < 0) throw std::invalid_argument("BlockStructure: negative col block");
}

long long n_count(const IndexTuple& rows, const IndexTuple& cols, const BlockStructure& blocks) {
    blocks.validate();
    rows.validate(blocks.row_universe());
    cols.validate(blocks.col_universe());
    if (rows.size() != cols.size())
        throw std::invalid_argument("n_count: row and column tuples must have equal length");
    const std::size_t nb = blocks.row_blocks.size();
    std::vector<int> m(nb, 0), n(nb, 0);
    for (int idx : rows.indices) ++m[block_index(idx, blocks.row_blocks)];
    for (int idx : cols.indices) ++n[block_index(idx, blocks.col_blocks)];
    long long prod = 1;
    for (std::size_t v = 0; v < nb; ++v) {
        if (m[v] != n[v]) return 0;
        for (int i = 2; i <= m[v]; ++i) prod *= i;
    }
    return prod;
}

long long n_count_oracle(const IndexTuple& rows, const IndexTuple& cols,
                         const BlockStructure& blocks) {
    blocks.validate();
    rows.validate(blocks.row_universe());
    cols.validate(blocks.col_universe());
    if (rows.size() != cols.size())
        throw std::invalid_argument("n_count_oracle: row and column tuples must have equal length");
    const int k = rows.size();
    if (k > 8) throw std::invalid_argument("n_count_oracle: k must be <= 8");
    std::vector<int> row_block(k);
    for (int n = 0; n < k; ++n) row_block[n] = block_index(rows.indices[n], blocks.row_blocks);
    std::vector<int> perm = cols.indices;  // sorted ascending already
    long long count = 0;
    do {
        bool ok = true;
        for (int n = 0; n < k && ok; ++n)
            ok = row_block[n] == block_index(perm[n], blocks.col_blocks);
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

RrMatrix build_Rr(const ScenarioConfig& cfg, const CorrelationBundle& bundle) {
    cfg.validate();
    RrMatrix out;
    if (cfg.g == 0) {
        out.mat = (cfg.rho_w / cfg.s_w) * bundle.R_w.entries();
        out.blocks.row_blocks = {cfg.M};
        out.blocks.col_blocks = {cfg.s_w};
        return out;
    }
    Eigen::MatrixXcd Wp = Eigen::MatrixXcd::Zero(cfg.M, cfg.M);
    int off = 0;
    for (int i = 0; i < cfg.g; ++i) {
        const int r = cfg.r_per_group[i];
        Wp.block(off, off, r, r) =
            (cfg.rho_p_per_group[i] / cfg.s_p_per_group[i]) * bundle.R_p[i].entries();
        off += r;
    }
    if (cfg.s_w == 0) {
        out.mat = std::move(Wp);
        out.blocks.row_blocks = cfg.r_per_group;
        out.blocks.col_blocks = cfg.s_p_per_group;
        return out;
    }
    Eigen::MatrixXcd B(cfg.M, 2 * cfg.M);
    off = 0;
    B.setZero();
    for (int i = 0; i < cfg.g; ++i) {
        const int r = cfg.r_per_group[i];
        B.block(off, off, r, r) =
            std::sqrt(cfg.rho_p_per_group[i] / cfg.s_p_per_group[i]) * bundle.R_p[i].sqrt();
        off += r;
    }
    B.block(0, cfg.M, cfg.M, cfg.M) = std::sqrt(cfg.rho_w / cfg.s_w) * bundle.R_w.sqrt();
    out.mat = B.adjoint() * B;
    out.blocks.row_blocks = cfg.r_per_group;
    out.blocks.row_blocks.push_back(cfg.M);
    out.blocks.col_blocks = cfg.s_p_per_group;
    out.blocks.col_blocks.push_back(cfg.s_w);
    return out;
}

namespace {
std::string count_to_string(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
}  // namespace

BudgetExceededError::BudgetExceededError(int k, double required, std::uint64_t budget)
    : std::runtime_error("closed-form enumeration would need " + count_to_string(required) +
                         " principal-minor terms by order k=" + std::to_string(k) +
                         ", exceeding the budget of " + std::to_string(budget)),
      k_(k) {}

namespace detail {

double minor_det(const Eigen::MatrixXcd& m, const std::vector<int>& idx) {
    const int k = static_cast<int>(idx.size());
    if (k == 0) return 1.0;
    if (k == 1) return m(idx[0], idx[0]).real();
    if (k == 2) {
        const cxd a = m(idx[0], idx[0]), b = m(idx[0], idx[1]);
        const cxd c = m(idx[1], idx[0]), d = m(idx[1], idx[1]);
        return (a * d - b * c).real();
    }
    Eigen::MatrixXcd sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(sub).determinant().real();
}

void for_each_composition(int k, const std::vector<int>& caps,
                          const std::function<void(const std::vector<int>&)>& fn) {
    const int nb = static_cast<int>(caps.size());
    std::vector<int> comp(nb, 0);
    std::function<void(int, int)> rec = [&](int v, int remaining) {
        if (v == nb - 1) {
            if (remaining <= caps[v]) {
                comp[v] = remaining;
                fn(comp);
            }
            return;
        }
        const int top = std::min(caps[v], remaining);
        for (int c = 0; c <= top; ++c) {
            comp[v] = c;
            rec(v + 1, remaining - c);
        }
    };
    if (nb == 0) {
        if (k == 0) fn(comp);
        return;
    }
    rec(0, k);
}

double minor_sum(const Eigen::MatrixXcd& m, const std::vector<int>& blocks,
                 const std::vector<int>& comp) {
    const int nb = static_cast<int>(blocks.size());
    std::vector<int> offsets(nb);
    int off = 0, k = 0;
    for (int v = 0; v < nb; ++v) {
        offsets[v] = off;
        off += blocks[v];
        if (comp[v] > blocks[v]) return 0.0;  // no admissible tuple
        k += comp[v];
    }
    std::vector<std::vector<int>> sel(nb);
    for (int v = 0; v < nb; ++v) {
        sel[v].resize(comp[v]);
        for (int i = 0; i < comp[v]; ++i) sel[v][i] = offsets[v] + i;
    }
    std::vector<int> idx;
    idx.reserve(k);
    double total = 0.0;
    for (;;) {
        idx.clear();
        for (int v = 0; v < nb; ++v) idx.insert(idx.end(), sel[v].begin(), sel[v].end());
        total += minor_det(m, idx);
        int v = 0;
        while (v < nb && !next_combination(sel[v], offsets[v], offsets[v] + blocks[v])) ++v;
        if (v == nb) break;
    }
    return total;
}

}  // namespace detail

namespace {

// log2 of sum_k mu^k k! C(K,k) sum_comp prod_v comp_v!
//   * (sum of R_s principal minors with column composition comp)
//   * (sum of R_r principal minors with row composition comp).
double log2_expected_det(const Eigen::MatrixXcd& Rs, const Eigen::MatrixXcd& Rr,
                         const BlockStructure& blocks, int K, int kmax, double mu,
                         std::uint64_t budget) {
    blocks.validate();
    const int S = static_cast<int>(Rs.rows());
    const int U = static_cast<int>(Rr.rows());
    if (blocks.col_universe() != S || blocks.row_universe() != U)
        throw std::invalid_argument("block structure does not match matrix dimensions");

    // term-count precheck: no enumeration starts if over budget
    double cumulative = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        cumulative += binomial(S, k) * binomial(U, k);
        if (cumulative > static_cast<double>(budget))
            throw BudgetExceededError(k, cumulative, budget);
    }

    const std::size_t nb = blocks.row_blocks.size();
    std::vector<int> caps(nb);
    for (std::size_t v = 0; v < nb; ++v)
        caps[v] = std::min(blocks.row_blocks[v], blocks.col_blocks[v]);

    ScaledAccumulator acc;
    for (int k = 0; k <= kmax; ++k) {
        const double log2_w0 = k * std::log2(mu > 0.0 ? mu : 1.0) + log2_factorial(k) +
                               std::log2(binomial(K, k));
        const double w0 = std::pow(mu, k) * factorial(k) * binomial(K, k);
        if (w0 == 0.0 && k > 0) continue;  // mu = 0: only k = 0 survives
        detail::for_each_composition(k, caps, [&](const std::vector<int>& comp) {
            const double si = detail::minor_sum(Rs, blocks.col_blocks, comp);
            if (si == 0.0) return;
            const double sj = detail::minor_sum(Rr, blocks.row_blocks, comp);
            if (sj == 0.0) return;
            double nfac = 1.0;
            for (std::size_t v = 0; v < nb; ++v) nfac *= factorial(comp[v]);
            const double term = w0 * nfac * si * sj;
            if (std::isfinite(term)) {
                acc.add(term);
            } else if (si > 0.0 && sj > 0.0) {
                // overflow guard: assemble the term in the log2 domain
                const double l2 = log2_w0 + std::log2(nfac) + std::log2(si) + std::log2(sj);
                const double e = std::floor(l2);
                acc.add_pow2(std::exp2(l2 - e), static_cast<std::int64_t>(e));
            }
        });
    }
    return acc.log2();
}

void require_all_groups_equal(const ScenarioConfig& cfg, const char* who) {
    for (int i = 1; i < cfg.g; ++i) {
        if (cfg.r_per_group[i] != cfg.r_per_group[0] ||
            cfg.s_p_per_group[i] != cfg.s_p_per_group[0] ||
            cfg.rho_p_per_group[i] != cfg.rho_p_per_group[0])
            throw std::invalid_argument(std::string(who) + ": requires equal PV groups");
    }
}

}  // namespace

CapacityResult closed_form_bound(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                                 std::uint64_t budget) {
    cfg.validate();
    const RrMatrix rr = build_Rr(cfg, bundle);
    const int kmax = std::min({cfg.M, cfg.K, cfg.S});
    CapacityResult r;
    r.method = Method::closed_form;
    r.value = log2_expected_det(bundle.R_s.entries(), rr.mat, rr.blocks, cfg.K, kmax, cfg.snr_mu,
                                budget);
    return r;
}

CapacityResult closed_form_bound_all_pv(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                                        std::uint64_t budget) {
    cfg.validate();
    if (!cfg.all_pv() || cfg.rho_w != 0.0)
        throw std::invalid_argument("closed_form_bound_all_pv: requires s_w = 0 and rho_w = 0");
    Eigen::MatrixXcd Wp = Eigen::MatrixXcd::Zero(cfg.M, cfg.M);
    int off = 0;
    for (int i = 0; i < cfg.g; ++i) {
        const int blk = cfg.r_per_group[i];
        Wp.block(off, off, blk, blk) =
            (cfg.rho_p_per_group[i] / cfg.s_p_per_group[i]) * bundle.R_p[i].entries();
        off += blk;
    }
    BlockStructure blocks{cfg.r_per_group, cfg.s_p_per_group};
    const int kmax = std::min({cfg.M, cfg.K, cfg.S});
    CapacityResult r;
    r.method = Method::closed_form;
    r.value = log2_expected_det(bundle.R_s.entries(), Wp, blocks, cfg.K, kmax, cfg.snr_mu, budget);
    return r;
}

CapacityResult high_snr_bound(const ScenarioConfig& cfg, const CorrelationBundle& bundle) {
    cfg.validate();
    if (cfg.M != cfg.S || cfg.M != cfg.K)
        throw std::invalid_argument("high_snr_bound: requires M = S = K");
    if (!(cfg.snr_mu > 0.0)) throw std::invalid_argument("high_snr_bound: requires mu > 0");
    const int n = cfg.M;
    const RrMatrix rr = build_Rr(cfg, bundle);
    // the full column tuple fixes the admissible row composition
    const std::vector<int>& comp = rr.blocks.col_blocks;
    double nfac = 1.0;
    for (int c : comp) nfac *= factorial(c);
    const double sum = clamp_nonneg(detail::minor_sum(rr.mat, rr.blocks.row_blocks, comp));
    CapacityResult r;
    r.method = Method::high_snr;
    r.value = n * std::log2(cfg.snr_mu) + log2_factorial(n) + bundle.R_s.log2_det() +
              std::log2(sum * nfac);
    return r;
}

CapacityResult c_max(const ScenarioConfig& cfg, const CorrelationBundle& bundle) {
    cfg.validate();
    if (cfg.M != cfg.S || cfg.M != cfg.K)
        throw std::invalid_argument("c_max: requires M = S = K");
    if (!(cfg.snr_mu > 0.0)) throw std::invalid_argument("c_max: requires mu > 0");
    require_all_groups_equal(cfg, "c_max");
    const double rho_p = cfg.g > 0 ? cfg.rho_p_per_group[0] : 0.0;
    if (std::abs(rho_p + cfg.rho_w - 1.0) > 1e-9)
        throw std::invalid_argument("c_max: requires rho_p + rho_w = 1");
    for (const auto& rp : bundle.R_p) {
        if (rp.eigenvalues().minCoeff() <= 0.0)
            throw std::invalid_argument("c_max: requires invertible R_p blocks");
    }

    const int n = cfg.M;
    const int s_p0 = cfg.g > 0 ? cfg.s_p_per_group[0] : 0;
    const int s_p = cfg.s_p_total();

    // gain-stripped stacked correlation
    Eigen::MatrixXcd tilde;
    BlockStructure blocks;
    if (cfg.g == 0) {
        tilde = bundle.R_w.entries();
        blocks.row_blocks = {cfg.M};
        blocks.col_blocks = {cfg.s_w};
    } else if (cfg.s_w == 0) {
        tilde = Eigen::MatrixXcd::Zero(cfg.M, cfg.M);
        int off = 0;
        for (int i = 0; i < cfg.g; ++i) {
            const int blk = cfg.r_per_group[i];
            tilde.block(off, off, blk, blk) = bundle.R_p[i].entries();
            off += blk;
        }
        blocks.row_blocks = cfg.r_per_group;
        blocks.col_blocks = cfg.s_p_per_group;
    } else {
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(cfg.M, 2 * cfg.M);
        int off = 0;
        for (int i = 0; i < cfg.g; ++i) {
            const int blk = cfg.r_per_group[i];
            B.block(off, off, blk, blk) = bundle.R_p[i].sqrt();
            off += blk;
        }
        B.block(0, cfg.M, cfg.M, cfg.M) = bundle.R_w.sqrt();
        tilde = B.adjoint() * B;
        blocks.row_blocks = cfg.r_per_group;
        blocks.row_blocks.push_back(cfg.M);
        blocks.col_blocks = cfg.s_p_per_group;
        blocks.col_blocks.push_back(cfg.s_w);
    }
    const double sum = clamp_nonneg(detail::minor_sum(tilde, blocks.row_blocks, blocks.col_blocks));

    double value = n * std::log2(cfg.snr_mu) + log2_factorial(n) + bundle.R_s.log2_det() +
                   cfg.g * log2_factorial(s_p0) + log2_factorial(cfg.s_w) + std::log2(sum);
    if (s_p > 0) value += s_p * std::log2(static_cast<double>(cfg.g) / n);
    if (cfg.s_w > 0) value += cfg.s_w * std::log2(1.0 / n);
    CapacityResult r;
    r.method = Method::high_snr;
    r.value = value;
    return r;
}

CapacityResult all_pv_high_snr(int n, int c, double mu_tilde, cxd a_s, cxd a_p) {
    if (n < 1 || c < 1) throw std::invalid_argument("all_pv_high_snr: n and c must be >= 1");
    if (n % c != 0) throw std::invalid_argument("all_pv_high_snr: c must divide n");
    if (!(mu_tilde > 0.0)) throw std::invalid_argument("all_pv_high_snr: mu_tilde must be positive");
    if (std::abs(a_s) > 1.0 || std::abs(a_p) > 1.0)
        throw std::invalid_argument("all_pv_high_snr: |a| must be <= 1");
    const int g = n / c;
    // both determinants via det(Omega_d(a)) = (1 - |a|^2)^(d-1)
    const double value = n * (std::log2(mu_tilde) - std::log2(static_cast<double>(n))) +
                         log2_factorial(n) + (n - 1) * std::log2(1.0 - std::norm(a_s)) +
                         g * (-c * std::log2(static_cast<double>(c)) +
                              (c - 1) * std::log2(1.0 - std::norm(a_p)) + log2_factorial(c));
    CapacityResult r;
    r.method = Method::high_snr;
    r.value = value;
    return r;
}

CapacityResult asymptotic_rate(int c, double mu_tilde, cxd a_s, cxd a_p) {
    if (c < 1) throw std::invalid_argument("asymptotic_rate: c must be >= 1");
    if (!(mu_tilde > 0.0)) throw std::invalid_argument("asymptotic_rate: mu_tilde must be positive");
    if (std::abs(a_s) >= 1.0 || std::abs(a_p) >= 1.0)
        throw std::invalid_argument("asymptotic_rate: |a| must be < 1");
    const double h = (1.0 - std::norm(a_s)) * std::pow(1.0 - std::norm(a_p), 1.0 - 1.0 / c);
    CapacityResult r;
    r.method = Method::asymptotic;
    r.value = std::log2(mu_tilde / (M_E * c)) + log2_factorial(c) / c + std::log2(h);
    return r;
}

}  // namespace nwss
