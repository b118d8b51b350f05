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

#include "nwss/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>

#include "nwss/capacity_mc.hpp"
#include "nwss/numeric.hpp"
#include "nwss/rng.hpp"

namespace nwss {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v, int prec = 6) {
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

bool bits_equal(double a, double b) {
    std::uint64_t ua = 0, ub = 0;
    std::memcpy(&ua, &a, sizeof a);
    std::memcpy(&ub, &b, sizeof b);
    return ua == ub;
}

// The mixed PV/WV reference scenario: M = S = K = 4, two single-cluster
// PV groups over 2-antenna sub-arrays, two WV clusters, even energy split.
ScenarioConfig reference_n4(double mu = 10.0) {
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

ScenarioConfig symmetric_cfg(int n, int g, int s_w, double rho_p, double mu, double a_p,
                             double a_w, double a_s) {
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
    c.a_p = a_p;
    c.a_w = a_w;
    c.a_s = a_s;
    c.snr_mu = mu;
    return c;
}

struct Runner {
    VerifyReport& report;
    unsigned threads;
    const VerifyHooks& hooks;

    void run(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        const auto t0 = Clock::now();
        try {
            r.passed = body(r.detail);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.wall_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() - t0)
                .count();
        report.results.push_back(std::move(r));
    }
};

long long checked_n_count(const VerifyHooks& hooks, const IndexTuple& rows, const IndexTuple& cols,
                          const BlockStructure& blocks) {
    if (hooks.n_count_impl) return hooks.n_count_impl(rows, cols, blocks);
    return n_count(rows, cols, blocks);
}

void for_each_tuple(int universe, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> t(k);
    for (int i = 0; i < k; ++i) t[i] = i;
    if (k == 0) {
        fn(t);
        return;
    }
    if (k > universe) return;
    for (;;) {
        fn(t);
        int i = k - 1;
        while (i >= 0 && t[i] == universe - k + i) --i;
        if (i < 0) break;
        ++t[i];
        for (int j = i + 1; j < k; ++j) t[j] = t[j - 1] + 1;
    }
}

void for_each_block_structure(const std::function<void(const BlockStructure&)>& fn) {
    // every structure with row universe 2M <= 8 (general) or M <= 4
    // (all-PV / all-WV truncations) and column universe S <= 6
    auto compositions = [](int total, int parts) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur(parts);
        std::function<void(int, int)> rec = [&](int v, int remaining) {
            if (v == parts - 1) {
                if (remaining >= 1) {
                    cur[v] = remaining;
                    out.push_back(cur);
                }
                return;
            }
            for (int c = 1; c <= remaining - (parts - 1 - v); ++c) {
                cur[v] = c;
                rec(v + 1, remaining - c);
            }
        };
        if (parts > 0 && total >= parts) rec(0, total);
        return out;
    };
    for (int M = 1; M <= 4; ++M) {
        for (int S = 1; S <= 6; ++S) {
            // all-WV: one block pair (M | S)
            fn(BlockStructure{{M}, {S}});
            for (int g = 1; g <= M; ++g) {
                for (const auto& r : compositions(M, g)) {
                    // all-PV: S split over the g groups
                    for (const auto& sp : compositions(S, g)) fn(BlockStructure{r, sp});
                    // mixed: WV block of M rows and s_w >= 1 columns
                    for (int s_w = 1; s_w <= S - g; ++s_w) {
                        for (const auto& sp : compositions(S - s_w, g)) {
                            BlockStructure b{r, sp};
                            b.row_blocks.push_back(M);
                            b.col_blocks.push_back(s_w);
                            fn(b);
                        }
                    }
                }
            }
        }
    }
}

// log2 of the explicit finite-S sum the enumerator must reproduce on an
// identity-correlation all-WV scenario with W_w = I:
//   sum_k mu^k (k!)^2 C(K,k) C(S,k) C(M,k).
double log2_identity_all_wv_sum(int M, int K, int S, double mu) {
    double total = 0.0;
    for (int k = 0; k <= std::min({M, K, S}); ++k) {
        const double f = factorial(k);
        total += std::pow(mu, k) * f * f * binomial(K, k) * binomial(S, k) * binomial(M, k);
    }
    return std::log2(total);
}

ScenarioConfig random_desk_config(std::uint64_t seed, int index) {
    TrialRng rng(seed, index);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    ScenarioConfig c;
    c.M = pick(2, 5);
    c.K = pick(2, 5);
    c.S = pick(2, 5);
    const double a_choices[] = {0.3, 0.6, 0.85};
    c.a_p = c.a_w = a_choices[pick(0, 2)];
    c.a_s = a_choices[pick(0, 2)];
    const double mu_choices[] = {1.0, 10.0, 31.622776601683793};
    c.snr_mu = mu_choices[pick(0, 2)];
    const int kind = pick(0, 2);
    if (kind == 0) {  // all WV
        c.g = 0;
        c.s_w = c.S;
        c.rho_w = 1.0;
    } else if (kind == 1 || c.S < 2) {  // mixed, single PV group
        c.g = 1;
        const int sp = pick(1, c.S - 1);
        c.s_p_per_group = {sp};
        c.r_per_group = {c.M};
        c.s_w = c.S - sp;
        const double rho_p = 0.25 * pick(1, 3);
        c.rho_p_per_group = {rho_p};
        c.rho_w = 1.0 - rho_p;
    } else {  // all PV, two groups when possible
        const int g = (c.M >= 2 && c.S >= 2) ? 2 : 1;
        c.g = g;
        c.s_p_per_group.assign(g, 0);
        c.r_per_group.assign(g, 0);
        if (g == 2) {
            const int r1 = pick(1, c.M - 1);
            c.r_per_group = {r1, c.M - r1};
            const int s1 = pick(1, c.S - 1);
            c.s_p_per_group = {s1, c.S - s1};
        } else {
            c.r_per_group = {c.M};
            c.s_p_per_group = {c.S};
        }
        c.s_w = 0;
        c.rho_p_per_group.assign(g, 1.0);
        c.rho_w = 0.0;
    }
    c.validate();
    return c;
}

}  // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.passed; });
}

VerifyReport run_verify(VerifyLevel level, unsigned threads, const VerifyHooks& hooks) {
    VerifyReport report;
    report.level = level;
    Runner run{report, threads, hooks};
    const bool full = level == VerifyLevel::full;

    run.run(1, "asymptotic rate at c=5, 35 dB total SNR", [&](std::string& d) {
        const double v = asymptotic_rate(5, std::pow(10.0, 3.5), 0.6, 0.85).value;
        d = "value=" + fmt(v) + " expected=7.1+-0.05";
        return std::abs(v - 7.1) <= 0.05;
    });

    run.run(2, "Toeplitz determinant identity, dim <= 12", [&](std::string& d) {
        double worst = 0.0;
        for (double a : {0.6, 0.85}) {
            for (int dim = 1; dim <= 12; ++dim) {
                const double lu =
                    Eigen::PartialPivLU<Eigen::MatrixXcd>(toeplitz_entries(dim, a)).determinant().real();
                const double rel = std::abs(toeplitz_det(dim, a) - lu) / std::abs(lu);
                worst = std::max(worst, rel);
            }
        }
        d = "max relative error=" + fmt(worst) + " tolerance=1e-10";
        return worst <= 1e-10;
    });

    run.run(3, "N-function equals permutation oracle (2M<=8, S<=6, k<=4)", [&](std::string& d) {
        long long checked = 0, mismatches = 0;
        std::string first;
        for_each_block_structure([&](const BlockStructure& b) {
            const int U = b.row_universe(), S = b.col_universe();
            for (int k = 0; k <= std::min({4, U, S}); ++k) {
                for_each_tuple(U, k, [&](const std::vector<int>& j) {
                    IndexTuple rows(j);
                    for_each_tuple(S, k, [&](const std::vector<int>& i) {
                        IndexTuple cols(i);
                        const long long fast = checked_n_count(hooks, rows, cols, b);
                        const long long slow = n_count_oracle(rows, cols, b);
                        ++checked;
                        if (fast != slow) {
                            ++mismatches;
                            if (first.empty())
                                first = " first mismatch: fast=" + std::to_string(fast) +
                                        " oracle=" + std::to_string(slow);
                        }
                    });
                });
            }
        });
        d = "pairs checked=" + std::to_string(checked) +
            " mismatches=" + std::to_string(mismatches) + first;
        return mismatches == 0;
    });

    if (full) {
        run.run(4, "closed form equals Monte Carlo Jensen bound (n=4, 1e6 trials)",
                [&](std::string& d) {
                    const auto cfg = reference_n4();
                    const auto bundle = build_bundle(cfg);
                    const double cf = closed_form_bound(cfg, bundle).value;
                    const auto mj = mc_jensen(cfg, bundle, 1000000, 20260810, run.threads);
                    const double sig = std::abs(cf - mj.value) / *mj.std_error;
                    d = "closed=" + fmt(cf) + " mc=" + fmt(mj.value) + " |diff|/se=" + fmt(sig) +
                        " limit=3";
                    return sig <= 3.0;
                });

        run.run(5, "Jensen ordering on 10 randomized desk scenarios", [&](std::string& d) {
            int ok = 0;
            double worst = -1e300;
            for (int i = 0; i < 10; ++i) {
                const auto cfg = random_desk_config(777, i);
                const auto bundle = build_bundle(cfg);
                const double cf = closed_form_bound(cfg, bundle).value;
                const auto mc = mc_capacity(cfg, bundle, 100000, 4321 + i, run.threads);
                const double slack = mc.value - 3.0 * *mc.std_error - cf;
                worst = std::max(worst, slack);
                if (slack <= 0.0) ++ok;
            }
            d = "scenarios passing=" + std::to_string(ok) + "/10 worst excess=" + fmt(worst);
            return ok == 10;
        });
    }

    run.run(6, "identity-correlation all-WV sum matches explicit formula", [&](std::string& d) {
        double worst = 0.0;
        for (int n : {2, 3, 4}) {
            for (double mu : {1.0, 10.0}) {
                ScenarioConfig c;
                c.M = c.K = n;
                c.S = c.s_w = n;
                c.g = 0;
                c.rho_w = n;  // W_w = I_M
                c.a_p = c.a_w = c.a_s = 0.0;
                c.snr_mu = mu;
                const auto bundle = build_bundle(c);
                const double cf = closed_form_bound(c, bundle).value;
                const double ref = log2_identity_all_wv_sum(n, n, n, mu);
                worst = std::max(worst, std::abs(cf - ref) / std::abs(ref));
            }
        }
        d = "max relative error=" + fmt(worst) + " tolerance=1e-10";
        return worst <= 1e-10;
    });

    run.run(7, "high-SNR bound unimodal in rho_p with argmax near s_p/S", [&](std::string& d) {
        std::vector<double> vals;
        for (int i = 0; i <= 20; ++i) {
            const double rho = 0.05 * i;
            const auto cfg = symmetric_cfg(6, 2, 2, rho, 1e4, 0.85, 0.85, 0.6);
            vals.push_back(high_snr_bound(cfg, build_bundle(cfg)).value);
        }
        const int argmax =
            static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
        bool shape = true;
        for (int i = 1; i <= argmax; ++i) shape = shape && vals[i] >= vals[i - 1];
        for (int i = argmax + 1; i <= 20; ++i) shape = shape && vals[i] <= vals[i - 1];
        d = "argmax=" + fmt(0.05 * argmax, 3) + " expected=0.65 (nearest to 2/3), unimodal=" +
            (shape ? "yes" : "no");
        return argmax == 13 && shape;
    });

    run.run(8, "complete-PV beats complete-WV maximum, gap grows with g", [&](std::string& d) {
        const double mu = std::pow(10.0, 3.5);
        const auto wv = symmetric_cfg(6, 0, 6, 0.0, mu, 0.85, 0.85, 0.6);
        const double base = c_max(wv, build_bundle(wv)).value;
        std::vector<double> gaps;
        for (int g : {2, 3, 6}) {
            const auto pv = symmetric_cfg(6, g, 0, 1.0, mu, 0.85, 0.85, 0.6);
            gaps.push_back(c_max(pv, build_bundle(pv)).value - base);
        }
        d = "gaps g={2,3,6}: " + fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " + fmt(gaps[2]);
        return gaps[0] > 0 && gaps[1] > 0 && gaps[2] > 0 && gaps[2] > gaps[0];
    });

    run.run(9, "all-PV high-SNR bound increasing in the group count", [&](std::string& d) {
        std::vector<double> vals;
        for (int g : {1, 2, 3, 6}) {
            const auto cfg = symmetric_cfg(6, g, 0, 1.0, 1e4, 0.85, 0.85, 0.6);
            vals.push_back(high_snr_bound(cfg, build_bundle(cfg)).value);
        }
        bool increasing = true;
        for (std::size_t i = 1; i < vals.size(); ++i) increasing = increasing && vals[i] > vals[i - 1];
        d = "values g={1,2,3,6}: " + fmt(vals[0]) + ", " + fmt(vals[1]) + ", " + fmt(vals[2]) +
            ", " + fmt(vals[3]);
        return increasing;
    });

    if (full) {
        run.run(10, "analytical receiver correlation matches 1e5-trial mean", [&](std::string& d) {
            std::vector<ScenarioConfig> cfgs;
            cfgs.push_back(reference_n4());
            {
                ScenarioConfig c = symmetric_cfg(4, 0, 4, 0.0, 10.0, 0.85, 0.85, 0.6);
                cfgs.push_back(c);
            }
            {
                ScenarioConfig c;
                c.M = 6;
                c.K = 3;
                c.S = 6;
                c.g = 3;
                c.s_p_per_group = {2, 2, 2};
                c.r_per_group = {2, 2, 2};
                c.s_w = 0;
                c.rho_p_per_group = {1.0, 1.0, 1.0};
                c.rho_w = 0.0;
                c.a_p = c.a_w = 0.85;
                c.a_s = 0.6;
                c.snr_mu = 10.0;
                cfgs.push_back(c);
            }
            double worst_rel = 0.0;
            bool diag_exact = true;
            for (std::size_t i = 0; i < cfgs.size(); ++i) {
                const auto& cfg = cfgs[i];
                const auto bundle = build_bundle(cfg);
                const Eigen::MatrixXcd analytic = receiver_correlation(cfg, bundle);
                for (int m = 0; m < cfg.M; ++m)
                    diag_exact = diag_exact && analytic(m, m) == cxd(cfg.K, 0.0);
                const Eigen::MatrixXcd mc =
                    mc_mean_outer(cfg, bundle, 100000, 998877 + i, run.threads);
                worst_rel = std::max(worst_rel, (mc - analytic).norm() / analytic.norm());
            }
            d = "max relative Frobenius error=" + fmt(worst_rel) + " tolerance=0.02, diag==K " +
                (diag_exact ? "exact" : "NOT exact");
            return worst_rel <= 0.02 && diag_exact;
        });
    }

    run.run(11, "finite difference of the growth law matches the asymptotic rate",
            [&](std::string& d) {
                const double mu = std::pow(10.0, 3.5);
                const double v0 = all_pv_high_snr(100, 5, mu, 0.6, 0.85).value;
                const double v1 = all_pv_high_snr(105, 5, mu, 0.6, 0.85).value;
                const double fd = (v1 - v0) / 5.0;
                const double ar = asymptotic_rate(5, mu, 0.6, 0.85).value;
                d = "finite difference=" + fmt(fd) + " asymptotic=" + fmt(ar) +
                    " |diff|=" + fmt(std::abs(fd - ar)) + " limit=0.05";
                return std::abs(fd - ar) <= 0.05;
            });

    run.run(12, "high-SNR term dominates the closed form at mu=1e6", [&](std::string& d) {
        const auto cfg = reference_n4(1e6);
        const auto bundle = build_bundle(cfg);
        const double hs = high_snr_bound(cfg, bundle).value;
        const double cf = closed_form_bound(cfg, bundle).value;
        d = "high_snr=" + fmt(hs) + " closed=" + fmt(cf) + " |diff|=" + fmt(std::abs(hs - cf)) +
            " limit=0.1";
        return std::abs(hs - cf) <= 0.1;
    });

    run.run(13, "dominant eigenvalue spread flattens in the all-PV scenario", [&](std::string& d) {
        ScenarioConfig pv;
        pv.M = pv.K = pv.S = 8;
        pv.g = 2;
        pv.s_p_per_group = {3, 3};
        pv.r_per_group = {4, 4};
        pv.s_w = 2;
        pv.a_p = pv.a_w = 0.85;
        pv.a_s = 0.6;
        pv.snr_mu = 10.0;
        ScenarioConfig wv = pv;
        pv.rho_p_per_group = {1.0, 1.0};
        pv.rho_w = 0.0;
        wv.rho_p_per_group = {0.0, 0.0};
        wv.rho_w = 1.0;
        const auto ev_pv = eigen_spread(pv, build_bundle(pv));
        const auto ev_wv = eigen_spread(wv, build_bundle(wv));
        const double r_pv = ev_pv[0] / ev_pv[3];
        const double r_wv = ev_wv[0] / ev_wv[3];
        d = "lambda1/lambda4: rho_p=1 gives " + fmt(r_pv) + ", rho_p=0 gives " + fmt(r_wv);
        return r_pv < r_wv;
    });

    run.run(14, "bit-identical results under 1, 2 and 8 threads", [&](std::string& d) {
        const auto cfg = reference_n4();
        const auto bundle = build_bundle(cfg);
        const std::int64_t trials = full ? 50000 : 4000;
        const std::uint64_t seed = 1357;
        const auto cap1 = mc_capacity(cfg, bundle, trials, seed, 1);
        const auto jen1 = mc_jensen(cfg, bundle, trials, seed, 1);
        const auto mmse1 = mmse_sum_rate(cfg, bundle, trials, seed, 1);
        bool ok = true;
        for (unsigned th : {2u, 8u}) {
            ok = ok && bits_equal(mc_capacity(cfg, bundle, trials, seed, th).value, cap1.value);
            ok = ok && bits_equal(mc_jensen(cfg, bundle, trials, seed, th).value, jen1.value);
            ok = ok && bits_equal(mmse_sum_rate(cfg, bundle, trials, seed, th).value, mmse1.value);
        }
        // and a straight rerun at one thread
        ok = ok && bits_equal(mc_capacity(cfg, bundle, trials, seed, 1).value, cap1.value);
        d = std::string("trials=") + std::to_string(trials) +
            (ok ? ": all reruns bit-identical" : ": MISMATCH across thread counts");
        return ok;
    });

    return report;
}

void print_report(const VerifyReport& report, std::ostream& os) {
    for (const auto& r : report.results) {
        os << (r.passed ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << "  " << r.name << ": "
           << r.detail << "  (" << fmt(r.wall_ms, 4) << " ms)\n";
    }
    const auto failed = static_cast<int>(report.results.size()) -
                        static_cast<int>(std::count_if(report.results.begin(), report.results.end(),
                                                       [](const CriterionResult& r) { return r.passed; }));
    os << (report.level == VerifyLevel::full ? "level=full" : "level=fast") << ": "
       << report.results.size() - failed << "/" << report.results.size() << " criteria passed\n";
}

}  // namespace nwss
