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

#include "nwss/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace nwss {

namespace {

// Column-major fill keeps the draw order part of the reproducibility
// contract.
void fill_gaussian(TrialRng& rng, Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = rng.complex_normal();
}

}  // namespace

CorrelationBundle build_bundle(const ScenarioConfig& cfg) {
    cfg.validate();
    CorrelationBundle b;
    b.R_s = toeplitz_corr(cfg.S, cfg.a_s);
    b.R_p.reserve(cfg.g);
    for (int i = 0; i < cfg.g; ++i) b.R_p.push_back(toeplitz_corr(cfg.r_per_group[i], cfg.a_p));
    b.R_w = toeplitz_corr(cfg.M, cfg.a_w);
    return b;
}

ChannelSampler::ChannelSampler(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                               std::uint64_t seed)
    : cfg_(cfg), seed_(seed) {
    cfg.validate();
    if (static_cast<int>(bundle.R_p.size()) != cfg.g || bundle.R_s.dim() != cfg.S ||
        bundle.R_w.dim() != cfg.M)
        throw std::invalid_argument("ChannelSampler: bundle does not match scenario");
    scaled_p_sqrt_.reserve(cfg.g);
    for (int i = 0; i < cfg.g; ++i) {
        if (bundle.R_p[i].dim() != cfg.r_per_group[i])
            throw std::invalid_argument("ChannelSampler: R_p block size mismatch");
        const double gain = std::sqrt(cfg.rho_p_per_group[i] / cfg.s_p_per_group[i]);
        scaled_p_sqrt_.push_back(gain * bundle.R_p[i].sqrt());
    }
    if (cfg.s_w > 0)
        scaled_w_sqrt_ = std::sqrt(cfg.rho_w / cfg.s_w) * bundle.R_w.sqrt();
    s_sqrt_ = bundle.R_s.sqrt();
}

void ChannelSampler::draw(std::int64_t trial, Scratch& ws, Eigen::MatrixXcd& G) const {
    TrialRng rng(seed_, trial);
    ws.A.resize(cfg_.M, cfg_.S);
    ws.A.setZero();
    int row = 0, col = 0;
    for (int i = 0; i < cfg_.g; ++i) {
        const int r = cfg_.r_per_group[i];
        const int s = cfg_.s_p_per_group[i];
        ws.Hb.resize(r, s);
        fill_gaussian(rng, ws.Hb);
        ws.A.block(row, col, r, s).noalias() = scaled_p_sqrt_[i] * ws.Hb;
        row += r;
        col += s;
    }
    if (cfg_.s_w > 0) {
        ws.Hb.resize(cfg_.M, cfg_.s_w);
        fill_gaussian(rng, ws.Hb);
        ws.A.block(0, col, cfg_.M, cfg_.s_w).noalias() = scaled_w_sqrt_ * ws.Hb;
    }
    ws.H.resize(cfg_.S, cfg_.K);
    fill_gaussian(rng, ws.H);
    ws.SH.noalias() = s_sqrt_ * ws.H;
    G.noalias() = ws.A * ws.SH;
}

ChannelRealization draw_channel(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                                std::uint64_t seed, std::int64_t trial) {
    ChannelSampler sampler(cfg, bundle, seed);
    ChannelSampler::Scratch ws;
    ChannelRealization out;
    out.seed = seed;
    out.trial = trial;
    out.G.resize(cfg.M, cfg.K);
    sampler.draw(trial, ws, out.G);
    if (!out.G.allFinite()) throw std::runtime_error("draw_channel: non-finite entries");
    return out;
}

Eigen::MatrixXcd receiver_correlation(const ScenarioConfig& cfg, const CorrelationBundle& bundle) {
    cfg.validate();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(cfg.M, cfg.M);
    int off = 0;
    for (int i = 0; i < cfg.g; ++i) {
        const int blk = cfg.r_per_group[i];
        r.block(off, off, blk, blk) = cfg.rho_p_per_group[i] * bundle.R_p[i].entries();
        off += blk;
    }
    if (cfg.rho_w > 0.0) r += cfg.rho_w * bundle.R_w.entries();
    return static_cast<double>(cfg.K) * r;
}

Eigen::VectorXd eigen_spread(const ScenarioConfig& cfg, const CorrelationBundle& bundle) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(receiver_correlation(cfg, bundle),
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen_spread: eigensolve failed");
    return es.eigenvalues().reverse();
}

}  // namespace nwss
