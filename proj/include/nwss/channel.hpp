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
#include <vector>

#include "nwss/correlation.hpp"
#include "nwss/rng.hpp"
#include "nwss/scenario.hpp"

namespace nwss {

/// The correlation matrices of a scenario with their square roots cached:
/// R_s (S x S, cluster side), one R_p block per PV group, R_w (M x M).
/// All are unit-diagonal Toeplitz matrices built from the scenario's
/// correlation coefficients. Immutable after construction.
struct CorrelationBundle {
    CorrelationMatrix R_s;
    std::vector<CorrelationMatrix> R_p;  // size g
    CorrelationMatrix R_w;
};

CorrelationBundle build_bundle(const ScenarioConfig& cfg);

/// One M x K draw of the channel matrix together with the substream key
/// that produced it.
struct ChannelRealization {
    Eigen::MatrixXcd G;
    std::uint64_t seed = 0;
    std::int64_t trial = 0;
};

/// Draws channel realizations
///   G = [bdiag{sqrt(rho_i/s_i) R_p,i^(1/2) H_p,i},
///        sqrt(rho_w/s_w) R_w^(1/2) H_w] R_s^(1/2) H,
/// with every Gaussian factor filled in a pinned order so a trial is a
/// pure function of (seed, trial index). Safe to call concurrently with
/// distinct scratch objects.
class ChannelSampler {
  public:
    struct Scratch {
        Eigen::MatrixXcd A;   // M x S mixing matrix
        Eigen::MatrixXcd Hb;  // per-group Gaussian block
        Eigen::MatrixXcd H;   // S x K cluster-to-user block
        Eigen::MatrixXcd SH;  // R_s^(1/2) H
    };

    ChannelSampler(const ScenarioConfig& cfg, const CorrelationBundle& bundle, std::uint64_t seed);

    void draw(std::int64_t trial, Scratch& scratch, Eigen::MatrixXcd& G) const;

    const ScenarioConfig& config() const { return cfg_; }
    std::uint64_t seed() const { return seed_; }

  private:
    ScenarioConfig cfg_;
    std::uint64_t seed_;
    std::vector<Eigen::MatrixXcd> scaled_p_sqrt_;  // sqrt(rho_i/s_i) R_p,i^(1/2)
    Eigen::MatrixXcd scaled_w_sqrt_;               // sqrt(rho_w/s_w) R_w^(1/2)
    Eigen::MatrixXcd s_sqrt_;                      // R_s^(1/2)
};

/// Convenience single-draw form of the sampler.
ChannelRealization draw_channel(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                                std::uint64_t seed, std::int64_t trial = 0);

/// Analytical receiver correlation E[G G^H] under the unit-diagonal
/// convention: K (bdiag{rho_p,i R_p,i} + rho_w R_w). Hermitian PSD; for
/// energy-normalized scenarios every diagonal entry equals K exactly.
Eigen::MatrixXcd receiver_correlation(const ScenarioConfig& cfg, const CorrelationBundle& bundle);

/// Eigenvalues of the receiver correlation, sorted descending.
Eigen::VectorXd eigen_spread(const ScenarioConfig& cfg, const CorrelationBundle& bundle);

}  // namespace nwss
