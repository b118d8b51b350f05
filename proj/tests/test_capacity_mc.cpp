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
#include <functional>

#include "nwss/capacity_mc.hpp"
#include "nwss/rng.hpp"

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

ScenarioConfig scalar_cfg(double mu) {
    ScenarioConfig c;
    c.M = c.K = c.S = 1;
    c.g = 1;
    c.s_p_per_group = {1};
    c.r_per_group = {1};
    c.s_w = 0;
    c.rho_p_per_group = {1.0};
    c.rho_w = 0.0;
    c.a_p = c.a_w = c.a_s = 0.0;
    c.snr_mu = mu;
    return c;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 48);
}

// E[log2(1 + mu |h1 h2|^2)] for independent CN(0,1) scalars: |h1 h2|^2 is a
// product of two unit exponentials with density 2 K0(2 sqrt(z)); substitute
// z = t^2 to integrate log2(1 + mu t^2) * 4 t K0(2t) over t > 0.
double scalar_capacity_quadrature(double mu) {
    auto f = [mu](double t) {
        if (t <= 0.0) return 0.0;
        return std::log2(1.0 + mu * t * t) * 4.0 * t * std::cyl_bessel_k(0.0, 2.0 * t);
    };
    return integrate(f, 0.0, 45.0, 1e-11);
}

ChannelDrawFn iid_rayleigh(int M, int K, std::uint64_t seed) {
    return [M, K, seed](std::int64_t trial, Eigen::MatrixXcd& G) {
        TrialRng rng(seed, trial);
        G.resize(M, K);
        for (int j = 0; j < K; ++j)
            for (int i = 0; i < M; ++i) G(i, j) = rng.complex_normal();
    };
}

}  // namespace

TEST_CASE("capacity vanishes at zero SNR", "[capacity_mc]") {
    const auto cfg = mixed_cfg(1e-12);
    const auto bundle = build_bundle(cfg);
    CHECK(mc_capacity(cfg, bundle, 2000, 7, 0).value < 1e-9);
    CHECK(mc_jensen(cfg, bundle, 2000, 7, 0).value < 1e-9);
}

TEST_CASE("scalar capacity matches the product-density quadrature", "[capacity_mc]") {
    const double oracle = scalar_capacity_quadrature(10.0);
    // frozen value of the independent quadrature oracle
    CHECK(oracle == Approx(2.4579622233).margin(1e-6));
    const auto cfg = scalar_cfg(10.0);
    const auto bundle = build_bundle(cfg);
    const auto mc = mc_capacity(cfg, bundle, 100000, 31337, 0);
    REQUIRE(mc.std_error.has_value());
    CHECK(std::abs(mc.value - oracle) <= 3.0 * *mc.std_error);
}

TEST_CASE("Jensen ordering holds on mixed scenarios", "[capacity_mc]") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto cfg = mixed_cfg(10.0);
        const auto bundle = build_bundle(cfg);
        const auto cap = mc_capacity(cfg, bundle, 20000, seed, 0);
        const auto jen = mc_jensen(cfg, bundle, 20000, seed, 0);
        const double combined = std::hypot(*cap.std_error, *jen.std_error);
        CHECK(cap.value <= jen.value + 3.0 * combined);
    }
}

TEST_CASE("a deterministic channel makes the Jensen estimate exact", "[capacity_mc]") {
    Eigen::MatrixXcd fixed(2, 2);
    fixed << cxd(1.0, 0.5), cxd(0.2, -0.1), cxd(-0.3, 0.4), cxd(0.9, 0.0);
    const double mu = 3.0;
    auto draw = [&fixed](std::int64_t, Eigen::MatrixXcd& G) { G = fixed; };
    const auto r = mc_jensen_custom(draw, 2, 2, mu, 50, 0);
    const Eigen::MatrixXcd F =
        Eigen::MatrixXcd::Identity(2, 2) + mu * fixed * fixed.adjoint();
    const double expect = std::log2(F.determinant().real());
    CHECK(r.value == Approx(expect).epsilon(1e-12));
    CHECK(*r.std_error == Approx(0.0).margin(1e-9));
}

TEST_CASE("single-user MMSE achieves capacity on the same draws", "[capacity_mc]") {
    ScenarioConfig c = mixed_cfg(10.0);
    c.K = 1;
    const auto bundle = build_bundle(c);
    const auto cap = mc_capacity(c, bundle, 5000, 99, 0);
    const auto mmse = mmse_sum_rate(c, bundle, 5000, 99, 0);
    CHECK(mmse.value == Approx(cap.value).epsilon(1e-12));
}

TEST_CASE("orthogonal columns eliminate interference", "[capacity_mc]") {
    const double mu = 5.0;
    Eigen::MatrixXcd fixed = Eigen::MatrixXcd::Zero(4, 2);
    fixed(0, 0) = 2.0;
    fixed(2, 1) = cxd(0.0, 1.5);
    auto draw = [&fixed](std::int64_t, Eigen::MatrixXcd& G) { G = fixed; };
    const auto r = mmse_sum_rate_custom(draw, 4, 2, mu, 10, 0);
    const double expect = std::log2(1.0 + mu * 4.0) + std::log2(1.0 + mu * 2.25);
    CHECK(r.value == Approx(expect).epsilon(1e-12));
}

TEST_CASE("MMSE stays below capacity", "[capacity_mc]") {
    const auto cfg = mixed_cfg(10.0);
    const auto bundle = build_bundle(cfg);
    const auto cap = mc_capacity(cfg, bundle, 20000, 5, 0);
    const auto mmse = mmse_sum_rate(cfg, bundle, 20000, 5, 0);
    const double combined = std::hypot(*cap.std_error, *mmse.std_error);
    CHECK(mmse.value <= cap.value + 3.0 * combined);
}

TEST_CASE("the MMSE gap grows with spatial correlation", "[capacity_mc]") {
    // i.i.d. Rayleigh vs a complete-WV scenario at the same size
    const int M = 64, K = 20;
    const double mu = 10.0;
    const int trials = 300;
    const auto cap_iid = mc_capacity_custom(iid_rayleigh(M, K, 10), M, K, mu, trials, 0);
    const auto rate_iid = mmse_sum_rate_custom(iid_rayleigh(M, K, 10), M, K, mu, trials, 0);

    ScenarioConfig wv;
    wv.M = M;
    wv.K = K;
    wv.S = wv.s_w = M;
    wv.g = 0;
    wv.rho_w = 1.0;
    wv.a_w = 0.85;
    wv.a_s = 0.6;
    wv.snr_mu = mu;
    const auto bundle = build_bundle(wv);
    const auto cap_wv = mc_capacity(wv, bundle, trials, 10, 0);
    const auto rate_wv = mmse_sum_rate(wv, bundle, trials, 10, 0);

    const double gap_iid = cap_iid.value - rate_iid.value;
    const double gap_wv = cap_wv.value - rate_wv.value;
    CHECK(gap_iid < gap_wv);
}

TEST_CASE("capacity is nondecreasing in SNR with common random numbers", "[capacity_mc]") {
    const auto bundle = build_bundle(mixed_cfg());
    double prev = -1.0;
    for (double mu : {0.1, 1.0, 10.0, 100.0}) {
        const auto cfg = mixed_cfg(mu);
        const auto r = mc_capacity(cfg, bundle, 4000, 321, 0);
        CHECK(r.value >= prev - 3.0 * *r.std_error);
        prev = r.value;
    }
}

TEST_CASE("estimates are reproducible across thread counts", "[capacity_mc]") {
    const auto cfg = mixed_cfg();
    const auto bundle = build_bundle(cfg);
    const auto r1 = mc_capacity(cfg, bundle, 10000, 2718, 1);
    const auto r4 = mc_capacity(cfg, bundle, 10000, 2718, 4);
    CHECK(r1.value == r4.value);
    CHECK(*r1.std_error == *r4.std_error);
    const auto j1 = mc_jensen(cfg, bundle, 10000, 2718, 1);
    const auto j3 = mc_jensen(cfg, bundle, 10000, 2718, 3);
    CHECK(j1.value == j3.value);
    const auto m1 = mmse_sum_rate(cfg, bundle, 10000, 2718, 1);
    const auto m2 = mmse_sum_rate(cfg, bundle, 10000, 2718, 2);
    CHECK(m1.value == m2.value);
}

TEST_CASE("result metadata follows the method", "[capacity_mc]") {
    const auto cfg = mixed_cfg();
    const auto bundle = build_bundle(cfg);
    const auto r = mc_capacity(cfg, bundle, 100, 1, 0);
    CHECK(r.method == Method::mc_capacity);
    CHECK(r.trials == 100);
    CHECK(r.std_error.has_value());
    CHECK(r.value >= 0.0);
    CHECK_THROWS_AS(mc_capacity(cfg, bundle, 0, 1, 0), std::invalid_argument);
}
