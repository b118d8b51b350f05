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

#include "nwss/capacity_mc.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace nwss {

namespace {

constexpr std::int64_t kChunk = 1024;
constexpr double kLn2 = 0.6931471805599453094172321;

unsigned resolve_threads(unsigned threads, std::int64_t trials) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    if (chunks < static_cast<std::int64_t>(threads)) threads = static_cast<unsigned>(chunks);
    return std::max(1u, threads);
}

// Runs body(chunk_index, first, last) over fixed chunk boundaries. Chunk
// boundaries do not depend on the thread count, so any reduction that is
// per-trial slotted or per-chunk slotted stays deterministic.
void run_chunked(std::int64_t trials, unsigned threads,
                 const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& body) {
    if (trials <= 0) return;
    threads = resolve_threads(threads, trials);
    const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    if (threads == 1) {
        for (std::int64_t c = 0; c < chunks; ++c)
            body(c, c * kChunk, std::min(trials, (c + 1) * kChunk));
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::int64_t c = next.fetch_add(1);
                    if (c >= chunks) break;
                    body(c, c * kChunk, std::min(trials, (c + 1) * kChunk));
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// ln det(I + mu G G^H) through the smaller Gram matrix side.
double ln_det_capacity(const Eigen::MatrixXcd& G, double mu, Eigen::MatrixXcd& F) {
    const Eigen::Index M = G.rows(), K = G.cols();
    const Eigen::Index n = std::min(M, K);
    if (K <= M) {
        F.noalias() = mu * (G.adjoint() * G);
    } else {
        F.noalias() = mu * (G * G.adjoint());
    }
    F += Eigen::MatrixXcd::Identity(n, n);
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXcd>> llt(F);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("mc capacity: Cholesky failed (non-finite channel draw?)");
    double ln_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ln_det += std::log(F(i, i).real());
    return 2.0 * ln_det;
}

ChannelDrawFn model_draw_fn(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                            std::uint64_t seed) {
    auto sampler = std::make_shared<ChannelSampler>(cfg, bundle, seed);
    return [sampler](std::int64_t trial, Eigen::MatrixXcd& G) {
        thread_local ChannelSampler::Scratch ws;
        sampler->draw(trial, ws, G);
    };
}

std::vector<double> per_trial_ln_dets(const ChannelDrawFn& draw, int M, int K, double mu,
                                      std::int64_t trials, unsigned threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<double> vals(static_cast<std::size_t>(trials));
    run_chunked(trials, threads, [&](std::int64_t, std::int64_t first, std::int64_t last) {
        Eigen::MatrixXcd G(M, K), F;
        for (std::int64_t t = first; t < last; ++t) {
            draw(t, G);
            vals[static_cast<std::size_t>(t)] = ln_det_capacity(G, mu, F);
        }
    });
    return vals;
}

CapacityResult capacity_from_ln_dets(const std::vector<double>& vals) {
    const auto n = static_cast<double>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v / kLn2;
    mean /= n;
    double ss = 0.0;
    for (double v : vals) {
        const double d = v / kLn2 - mean;
        ss += d * d;
    }
    const double sd = vals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    CapacityResult r;
    r.value = mean;
    r.method = Method::mc_capacity;
    r.trials = static_cast<std::int64_t>(vals.size());
    r.std_error = sd / std::sqrt(n);
    return r;
}

CapacityResult jensen_from_ln_dets(const std::vector<double>& vals) {
    const auto n = static_cast<double>(vals.size());
    double m = vals[0];
    for (double v : vals) m = std::max(m, v);
    // log-sum-exp of the determinants and of their squares, single pass
    // in trial order
    double s1 = 0.0, s2 = 0.0;
    for (double v : vals) {
        s1 += std::exp(v - m);
        s2 += std::exp(2.0 * (v - m));
    }
    const double ln_mean = m + std::log(s1 / n);
    // Var(mean det) / (E det)^2 = (E[d^2]/E[d]^2 - 1) / n
    const double ratio = s2 * n / (s1 * s1);  // exp(ln E[d^2] - 2 ln E[d])
    const double rel_var = std::max(0.0, ratio - 1.0) / n;
    CapacityResult r;
    r.value = ln_mean / kLn2;
    r.method = Method::mc_jensen;
    r.trials = static_cast<std::int64_t>(vals.size());
    r.std_error = std::sqrt(rel_var) / kLn2;
    return r;
}

}  // namespace

CapacityResult mc_capacity_custom(const ChannelDrawFn& draw, int M, int K, double mu,
                                  std::int64_t trials, unsigned threads) {
    return capacity_from_ln_dets(per_trial_ln_dets(draw, M, K, mu, trials, threads));
}

CapacityResult mc_jensen_custom(const ChannelDrawFn& draw, int M, int K, double mu,
                                std::int64_t trials, unsigned threads) {
    return jensen_from_ln_dets(per_trial_ln_dets(draw, M, K, mu, trials, threads));
}

CapacityResult mmse_sum_rate_custom(const ChannelDrawFn& draw, int M, int K, double mu,
                                    std::int64_t trials, unsigned threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<double> vals(static_cast<std::size_t>(trials));
    run_chunked(trials, threads, [&](std::int64_t, std::int64_t first, std::int64_t last) {
        Eigen::MatrixXcd G(M, K), Gram(K, K), F(K, K), X(K, K);
        for (std::int64_t t = first; t < last; ++t) {
            draw(t, G);
            Gram.noalias() = G.adjoint() * G;
            F = Eigen::MatrixXcd::Identity(K, K) + mu * Gram;
            Eigen::LLT<Eigen::MatrixXcd> llt(F);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("mmse_sum_rate: linear solve failed");
            // q_k = g_k^H (I_M + mu G G^H)^-1 g_k = [(I_K + mu G^H G)^-1 G^H G]_kk,
            // SINR_k = mu q_k / (1 - mu q_k)
            X = llt.solve(Gram);
            double rate = 0.0;
            for (int k = 0; k < K; ++k) {
                const double q = X(k, k).real();
                rate -= std::log2(std::max(1.0 - mu * q, 1e-300));
            }
            vals[static_cast<std::size_t>(t)] = rate;
        }
    });
    const auto n = static_cast<double>(trials);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    CapacityResult r;
    r.value = mean;
    r.method = Method::mmse_rate;
    r.trials = trials;
    r.std_error = (trials > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0) / std::sqrt(n);
    return r;
}

CapacityResult mc_capacity(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                           std::int64_t trials, std::uint64_t seed, unsigned threads) {
    return mc_capacity_custom(model_draw_fn(cfg, bundle, seed), cfg.M, cfg.K, cfg.snr_mu, trials,
                              threads);
}

CapacityResult mc_jensen(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                         std::int64_t trials, std::uint64_t seed, unsigned threads) {
    return mc_jensen_custom(model_draw_fn(cfg, bundle, seed), cfg.M, cfg.K, cfg.snr_mu, trials,
                            threads);
}

CapacityResult mmse_sum_rate(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                             std::int64_t trials, std::uint64_t seed, unsigned threads) {
    return mmse_sum_rate_custom(model_draw_fn(cfg, bundle, seed), cfg.M, cfg.K, cfg.snr_mu, trials,
                                threads);
}

Eigen::MatrixXcd mc_mean_outer(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                               std::int64_t trials, std::uint64_t seed, unsigned threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const auto draw = model_draw_fn(cfg, bundle, seed);
    const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Eigen::MatrixXcd> partial(static_cast<std::size_t>(chunks));
    run_chunked(trials, threads, [&](std::int64_t c, std::int64_t first, std::int64_t last) {
        Eigen::MatrixXcd G(cfg.M, cfg.K);
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(cfg.M, cfg.M);
        for (std::int64_t t = first; t < last; ++t) {
            draw(t, G);
            acc.noalias() += G * G.adjoint();
        }
        partial[static_cast<std::size_t>(c)] = std::move(acc);
    });
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(cfg.M, cfg.M);
    for (const auto& p : partial) total += p;  // chunk order: deterministic
    return total / static_cast<double>(trials);
}

}  // namespace nwss
