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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nwss/capacity_closed.hpp"
#include "nwss/capacity_mc.hpp"
#include "nwss/numeric.hpp"

using namespace nwss;
using Catch::Approx;

namespace {

ScenarioConfig mixed_cfg(double mu = 10.0) {
    ScenarioConfig c;
    c.M = c.K = c.S = 4;
    c.g = 2;
    c.s_p_per_group = {1, 1};
    c.r_per_group = {2, 2};
    c.s_w = 2;
    c.rho_p_per_group = {0.5, 0.5};
    c.rho_w = 0.5;
    c.a_p = c.a_w = 0.85;
    c.a_s = 0.6;
    c.snr_mu = mu;
    return c;
}

ScenarioConfig symmetric_cfg(int n, int g, int s_w, double rho_p, double mu) {
    ScenarioConfig c;
    c.M = c.K = c.S = n;
    c.g = g;
    if (g > 0) {
        c.r_per_group.assign(g, n / g);
        c.s_p_per_group.assign(g, (n - s_w) / g);
        c.rho_p_per_group.assign(g, rho_p);
    }
    c.s_w = s_w;
    c.rho_w = s_w > 0 ? 1.0 - rho_p : 0.0;
    c.a_p = c.a_w = 0.85;
    c.a_s = 0.6;
    c.snr_mu = mu;
    return c;
}

// mixed structure of the spec examples: one PV group of 2 antennas / 2
// clusters plus one WV cluster over the 2-antenna array
BlockStructure example_blocks() { return BlockStructure{{2, 2}, {2, 1}}; }

}  // namespace

TEST_CASE("index tuples must be strictly increasing and in range", "[capacity_closed]") {
    CHECK_NOTHROW(IndexTuple({0, 2, 3}).validate(4));
    CHECK_THROWS_AS(IndexTuple({0, 0}).validate(4), std::invalid_argument);
    CHECK_THROWS_AS(IndexTuple({2, 1}).validate(4), std::invalid_argument);
    CHECK_THROWS_AS(IndexTuple({0, 4}).validate(4), std::invalid_argument);
}

TEST_CASE("N function on the single-block (all-WV) structure is k!", "[capacity_closed]") {
    const BlockStructure wv{{4}, {5}};
    CHECK(n_count(IndexTuple{}, IndexTuple{}, wv) == 1);
    CHECK(n_count(IndexTuple{1}, IndexTuple{3}, wv) == 1);
    CHECK(n_count(IndexTuple{0, 2}, IndexTuple{1, 4}, wv) == 2);
    CHECK(n_count(IndexTuple{0, 1, 3}, IndexTuple{0, 2, 4}, wv) == 6);
}

TEST_CASE("N function zeroes mismatched block counts", "[capacity_closed]") {
    const auto b = example_blocks();
    // rows split across both blocks, columns all in the PV block
    CHECK(n_count(IndexTuple{0, 2}, IndexTuple{0, 1}, b) == 0);
    // both rows and columns inside the PV block
    CHECK(n_count(IndexTuple{0, 1}, IndexTuple{0, 1}, b) == 2);
    // one row and one column per block
    CHECK(n_count(IndexTuple{1, 3}, IndexTuple{1, 2}, b) == 1);
}

TEST_CASE("permutation oracle agrees on the worked examples", "[capacity_closed]") {
    const auto b = example_blocks();
    const BlockStructure wv{{4}, {5}};
    CHECK(n_count_oracle(IndexTuple{}, IndexTuple{}, b) == 1);
    CHECK(n_count_oracle(IndexTuple{0, 2}, IndexTuple{0, 1}, b) ==
          n_count(IndexTuple{0, 2}, IndexTuple{0, 1}, b));
    CHECK(n_count_oracle(IndexTuple{0, 1}, IndexTuple{0, 1}, b) == 2);
    CHECK(n_count_oracle(IndexTuple{0, 1, 3}, IndexTuple{0, 2, 4}, wv) == 6);
    CHECK_THROWS_AS(
        n_count_oracle(IndexTuple{0, 1, 2, 3, 4, 5, 6, 7, 8},
                       IndexTuple{0, 1, 2, 3, 4, 5, 6, 7, 8}, BlockStructure{{9}, {9}}),
        std::invalid_argument);
}

TEST_CASE("N function equals the oracle on a small exhaustive grid", "[capacity_closed]") {
    // a reduced sweep; the full 2M <= 8, S <= 6 sweep runs in the
    // acceptance suite
    auto tuples = [](int universe, int k) {
        std::vector<std::vector<int>> out;
        std::vector<int> t(k);
        std::function<void(int, int)> rec = [&](int pos, int start) {
            if (pos == k) {
                out.push_back(t);
                return;
            }
            for (int v = start; v < universe; ++v) {
                t[pos] = v;
                rec(pos + 1, v + 1);
            }
        };
        rec(0, 0);
        return out;
    };
    const std::vector<BlockStructure> structures = {
        {{3}, {4}}, {{1, 2}, {2, 2}}, {{2, 1, 3}, {1, 2, 1}}, {{1, 1, 1}, {1, 1, 2}}};
    for (const auto& b : structures) {
        for (int k = 0; k <= 3; ++k) {
            for (const auto& j : tuples(b.row_universe(), k)) {
                for (const auto& i : tuples(b.col_universe(), k)) {
                    INFO("k=" << k);
                    REQUIRE(n_count(IndexTuple(j), IndexTuple(i), b) ==
                            n_count_oracle(IndexTuple(j), IndexTuple(i), b));
                }
            }
        }
    }
}

TEST_CASE("stacked correlation reduces to its surviving block", "[capacity_closed]") {
    // all PV: block-diagonal W_p over M rows
    ScenarioConfig pv = symmetric_cfg(4, 2, 0, 1.0, 10.0);
    const auto bp = build_bundle(pv);
    const auto rr_pv = build_Rr(pv, bp);
    CHECK(rr_pv.mat.rows() == 4);
    CHECK(rr_pv.blocks.row_blocks == std::vector<int>{2, 2});
    CHECK(rr_pv.mat.block(0, 2, 2, 2).norm() == 0.0);
    CHECK((rr_pv.mat.block(0, 0, 2, 2) - 0.5 * bp.R_p[0].entries()).norm() < 1e-14);

    // all WV: W_w = (rho_w / s_w) R_w over M rows
    ScenarioConfig wv = symmetric_cfg(4, 0, 4, 0.0, 10.0);
    const auto bw = build_bundle(wv);
    const auto rr_wv = build_Rr(wv, bw);
    CHECK(rr_wv.mat.rows() == 4);
    CHECK((rr_wv.mat - 0.25 * bw.R_w.entries()).norm() < 1e-14);
}

TEST_CASE("stacked correlation of the identity scenario", "[capacity_closed]") {
    ScenarioConfig c;
    c.M = 2;
    c.K = 2;
    c.S = 2;
    c.g = 1;
    c.s_p_per_group = {1};
    c.r_per_group = {2};
    c.s_w = 1;
    c.rho_p_per_group = {0.5};
    c.rho_w = 0.5;
    c.a_p = c.a_w = c.a_s = 0.0;
    c.snr_mu = 1.0;
    const auto rr = build_Rr(c, build_bundle(c));
    REQUIRE(rr.mat.rows() == 4);
    const Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK((rr.mat.block(0, 0, 2, 2) - half).norm() < 1e-14);
    CHECK((rr.mat.block(0, 2, 2, 2) - half).norm() < 1e-14);
    CHECK((rr.mat.block(2, 0, 2, 2) - half).norm() < 1e-14);
    CHECK((rr.mat.block(2, 2, 2, 2) - half).norm() < 1e-14);
    CHECK(Eigen::FullPivLU<Eigen::MatrixXcd>(rr.mat).rank() == 2);
}

TEST_CASE("closed form on the scalar i.i.d. scenario is log2(1 + mu)", "[capacity_closed]") {
    ScenarioConfig c;
    c.M = c.K = c.S = 1;
    c.g = 0;
    c.s_w = 1;
    c.rho_w = 1.0;
    c.a_p = c.a_w = c.a_s = 0.0;
    c.snr_mu = 10.0;
    const auto r = closed_form_bound(c, build_bundle(c));
    CHECK(r.value == Approx(std::log2(11.0)).epsilon(1e-12));
    CHECK(r.method == Method::closed_form);
    CHECK_FALSE(r.std_error.has_value());
}

TEST_CASE("closed form reproduces the explicit identity-correlation sum", "[capacity_closed]") {
    for (int n : {2, 3, 4}) {
        for (double mu : {1.0, 10.0}) {
            ScenarioConfig c;
            c.M = c.K = n;
            c.S = c.s_w = n;
            c.g = 0;
            c.rho_w = n;  // W_w = I_M
            c.a_p = c.a_w = c.a_s = 0.0;
            c.snr_mu = mu;
            double expect = 0.0;
            for (int k = 0; k <= n; ++k) {
                const double f = factorial(k);
                expect += std::pow(mu, k) * f * f * binomial(n, k) * binomial(n, k) * binomial(n, k);
            }
            const auto r = closed_form_bound(c, build_bundle(c));
            CHECK(r.value == Approx(std::log2(expect)).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed form matches the Monte Carlo Jensen estimate", "[capacity_closed]") {
    const auto cfg = mixed_cfg(10.0);
    const auto bundle = build_bundle(cfg);
    const double cf = closed_form_bound(cfg, bundle).value;
    const auto mj = mc_jensen(cfg, bundle, 200000, 8675309, 0);
    CHECK(std::abs(cf - mj.value) <= 3.0 * *mj.std_error);
}

TEST_CASE("closed form never drops below the Monte Carlo capacity", "[capacity_closed]") {
    const auto cfg = mixed_cfg(10.0);
    const auto bundle = build_bundle(cfg);
    const double cf = closed_form_bound(cfg, bundle).value;
    const auto cap = mc_capacity(cfg, bundle, 50000, 1123, 0);
    CHECK(cap.value - 3.0 * *cap.std_error <= cf);
}

TEST_CASE("all-PV closed form agrees with the general enumerator", "[capacity_closed]") {
    const auto cfg = symmetric_cfg(4, 2, 0, 1.0, 10.0);
    const auto bundle = build_bundle(cfg);
    const double general = closed_form_bound(cfg, bundle).value;
    const double special = closed_form_bound_all_pv(cfg, bundle).value;
    CHECK(special == Approx(general).epsilon(1e-12));

    // rejects non-all-PV scenarios
    CHECK_THROWS_AS(closed_form_bound_all_pv(mixed_cfg(), build_bundle(mixed_cfg())),
                    std::invalid_argument);
}

TEST_CASE("fully split all-PV scenario agrees with the general enumerator", "[capacity_closed]") {
    // three independent single-antenna blocks with identity correlations
    ScenarioConfig c;
    c.M = c.K = c.S = 3;
    c.g = 3;
    c.s_p_per_group = {1, 1, 1};
    c.r_per_group = {1, 1, 1};
    c.s_w = 0;
    c.rho_p_per_group = {1.0, 1.0, 1.0};
    c.rho_w = 0.0;
    c.a_p = c.a_w = 0.0;
    c.a_s = 0.6;
    c.snr_mu = 10.0;
    const auto bundle = build_bundle(c);
    const double special = closed_form_bound_all_pv(c, bundle).value;
    const double general = closed_form_bound(c, bundle).value;
    CHECK(special == Approx(general).epsilon(1e-12));
}

TEST_CASE("all-PV with one group equals the all-WV formula on matched gains",
          "[capacity_closed]") {
    ScenarioConfig pv;
    pv.M = pv.K = 3;
    pv.S = 3;
    pv.g = 1;
    pv.s_p_per_group = {3};
    pv.r_per_group = {3};
    pv.s_w = 0;
    pv.rho_p_per_group = {1.0};
    pv.rho_w = 0.0;
    pv.a_p = 0.7;
    pv.a_w = 0.0;
    pv.a_s = 0.6;
    pv.snr_mu = 10.0;

    ScenarioConfig wv = pv;
    wv.g = 0;
    wv.s_p_per_group.clear();
    wv.r_per_group.clear();
    wv.rho_p_per_group.clear();
    wv.s_w = 3;
    wv.rho_w = 1.0;
    wv.a_w = 0.7;

    const double a = closed_form_bound_all_pv(pv, build_bundle(pv)).value;
    const double b = closed_form_bound(wv, build_bundle(wv)).value;
    CHECK(a == Approx(b).epsilon(1e-12));
}

TEST_CASE("zero SNR collapses the bound to zero bits", "[capacity_closed]") {
    ScenarioConfig c = symmetric_cfg(3, 1, 0, 1.0, 0.0);
    c.s_p_per_group = {3};
    CHECK(closed_form_bound_all_pv(c, build_bundle(c)).value == 0.0);
}

TEST_CASE("budget rejection happens before any enumeration", "[capacity_closed]") {
    const auto cfg = mixed_cfg();
    const auto bundle = build_bundle(cfg);
    try {
        closed_form_bound(cfg, bundle, 10);
        FAIL("expected BudgetExceededError");
    } catch (const BudgetExceededError& e) {
        CHECK(e.order() >= 1);
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("high-SNR bound on the identity all-WV scenario", "[capacity_closed]") {
    for (int n : {2, 3, 4}) {
        ScenarioConfig c;
        c.M = c.K = n;
        c.S = c.s_w = n;
        c.g = 0;
        c.rho_w = n;  // W_w = I
        c.a_p = c.a_w = c.a_s = 0.0;
        c.snr_mu = 100.0;
        const auto r = high_snr_bound(c, build_bundle(c));
        const double expect = n * std::log2(100.0) + 2.0 * log2_factorial(n);
        CHECK(r.value == Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("high-SNR bound gains n log2(10) bits per 10 dB", "[capacity_closed]") {
    const auto lo = symmetric_cfg(4, 2, 2, 0.5, 1e4);
    const auto hi = symmetric_cfg(4, 2, 2, 0.5, 1e5);
    const double vlo = high_snr_bound(lo, build_bundle(lo)).value;
    const double vhi = high_snr_bound(hi, build_bundle(hi)).value;
    CHECK(vhi - vlo == Approx(4.0 * std::log2(10.0)).epsilon(1e-12));
}

TEST_CASE("high-SNR bound approaches the closed form at huge SNR", "[capacity_closed]") {
    const auto cfg = mixed_cfg(1e6);
    const auto bundle = build_bundle(cfg);
    const double hs = high_snr_bound(cfg, bundle).value;
    const double cf = closed_form_bound(cfg, bundle).value;
    CHECK(std::abs(hs - cf) < 0.1);
    // stated regime only: M = S = K
    ScenarioConfig rect = mixed_cfg(10.0);
    rect.K = 3;
    CHECK_THROWS_AS(high_snr_bound(rect, build_bundle(rect)), std::invalid_argument);
}

TEST_CASE("c_max equals the high-SNR bound at the maximizing split", "[capacity_closed]") {
    const int n = 6, g = 2, s_w = 2;
    const double mu = 1e4;
    const double rho_star = static_cast<double>(n - s_w) / n;
    const auto at_max = symmetric_cfg(n, g, s_w, rho_star, mu);
    const auto any_rho = symmetric_cfg(n, g, s_w, 0.25, mu);
    const double direct = high_snr_bound(at_max, build_bundle(at_max)).value;
    const double via_cmax = c_max(any_rho, build_bundle(any_rho)).value;
    CHECK(via_cmax == Approx(direct).epsilon(1e-9));
}

TEST_CASE("grid search over the energy split peaks at s_p/S", "[capacity_closed]") {
    // n = 4, g = 2, s_p = 2, s_w = 2: maximizer 0.5 sits on the grid
    std::vector<double> vals;
    for (int i = 0; i <= 20; ++i) {
        const auto cfg = symmetric_cfg(4, 2, 2, 0.05 * i, 1e4);
        vals.push_back(high_snr_bound(cfg, build_bundle(cfg)).value);
    }
    const int argmax = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    CHECK(argmax == 10);
    for (int i = 1; i <= argmax; ++i) CHECK(vals[i] >= vals[i - 1]);
    for (int i = argmax + 1; i <= 20; ++i) CHECK(vals[i] <= vals[i - 1]);
}

TEST_CASE("c_max stays finite with a single WV cluster", "[capacity_closed]") {
    // smallest WV remainder: n = 4, g = 1, s_p = 3, s_w = 1
    const auto cfg = symmetric_cfg(4, 1, 1, 0.75, 1e4);
    const double v = c_max(cfg, build_bundle(cfg)).value;
    CHECK(std::isfinite(v));
}

TEST_CASE("c_max enforces the symmetric regime", "[capacity_closed]") {
    auto uneven = symmetric_cfg(6, 2, 2, 0.5, 1e4);
    uneven.rho_p_per_group = {0.4, 0.6};
    CHECK_THROWS_AS(c_max(uneven, build_bundle(uneven)), std::invalid_argument);
    auto unnormalized = symmetric_cfg(6, 2, 2, 0.5, 1e4);
    unnormalized.rho_w = 0.3;
    CHECK_THROWS_AS(c_max(unnormalized, build_bundle(unnormalized)), std::invalid_argument);
}

TEST_CASE("growth-law value with unit groups drops the group terms", "[capacity_closed]") {
    const int n = 7;
    const double mu = 500.0;
    const double v = all_pv_high_snr(n, 1, mu, 0.6, 0.85).value;
    const double expect = n * std::log2(mu / n) + log2_factorial(n) +
                          (n - 1) * std::log2(1.0 - 0.36);
    CHECK(v == Approx(expect).epsilon(1e-12));
}

TEST_CASE("growth law agrees with the high-SNR bound on the matching scenario",
          "[capacity_closed]") {
    const int n = 5, c = 5;
    const double mu_tilde = std::pow(10.0, 3.5);
    const double direct = all_pv_high_snr(n, c, mu_tilde, 0.6, 0.85).value;
    ScenarioConfig cfg;
    cfg.M = cfg.K = cfg.S = n;
    cfg.g = 1;
    cfg.s_p_per_group = {n};
    cfg.r_per_group = {n};
    cfg.s_w = 0;
    cfg.rho_p_per_group = {1.0};
    cfg.rho_w = 0.0;
    cfg.a_p = 0.85;
    cfg.a_w = 0.85;
    cfg.a_s = 0.6;
    cfg.snr_mu = mu_tilde / n;
    const double via_bound = high_snr_bound(cfg, build_bundle(cfg)).value;
    CHECK(direct == Approx(via_bound).epsilon(1e-9));
    CHECK_THROWS_AS(all_pv_high_snr(10, 3, 100.0, 0.6, 0.85), std::invalid_argument);
}

TEST_CASE("finite difference of the growth law approaches the asymptotic rate",
          "[capacity_closed]") {
    const double mu_tilde = std::pow(10.0, 3.5);
    const double v0 = all_pv_high_snr(100, 5, mu_tilde, 0.6, 0.85).value;
    const double v1 = all_pv_high_snr(105, 5, mu_tilde, 0.6, 0.85).value;
    const double fd = (v1 - v0) / 5.0;
    const double ar = asymptotic_rate(5, mu_tilde, 0.6, 0.85).value;
    CHECK(std::abs(fd - ar) < 0.05);
}

TEST_CASE("asymptotic rate reproduces the reported operating point", "[capacity_closed]") {
    const auto r = asymptotic_rate(5, std::pow(10.0, 3.5), 0.6, 0.85);
    CHECK(r.value == Approx(7.1).margin(0.05));
    CHECK(r.method == Method::asymptotic);
}

TEST_CASE("asymptotic rate limits and monotonicity", "[capacity_closed]") {
    const double mu_tilde = 200.0;
    CHECK(asymptotic_rate(1, mu_tilde, 0.0, 0.0).value ==
          Approx(std::log2(mu_tilde / M_E)).epsilon(1e-12));
    double prev = 1e300;
    for (int c = 1; c <= 10; ++c) {
        const double v = asymptotic_rate(c, std::pow(10.0, 3.5), 0.6, 0.85).value;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("all-PV high-SNR bound increases with the group count", "[capacity_closed]") {
    double prev = -1e300;
    for (int g : {1, 2, 3, 6}) {
        const auto cfg = symmetric_cfg(6, g, 0, 1.0, 1e4);
        const double v = high_snr_bound(cfg, build_bundle(cfg)).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("complete-PV maximum beats complete-WV and the gap grows", "[capacity_closed]") {
    const double mu = std::pow(10.0, 3.5);
    for (int n : {4, 6}) {
        const auto wv = symmetric_cfg(n, 0, n, 0.0, mu);
        const double base = c_max(wv, build_bundle(wv)).value;
        double gap_lo = 0.0, gap_hi = 0.0;
        for (int g : {2, n}) {
            const auto pv = symmetric_cfg(n, g, 0, 1.0, mu);
            const double gap = c_max(pv, build_bundle(pv)).value - base;
            CHECK(gap > 0.0);
            if (g == 2) gap_lo = gap;
            if (g == n) gap_hi = gap;
        }
        CHECK(gap_hi > gap_lo);
    }
}
