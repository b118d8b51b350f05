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

#include "nwss/channel.hpp"
#include "nwss/types.hpp"

namespace nwss {

// Monte Carlo estimators over independent channel draws. Trials run in
// parallel over fixed-size chunks; every per-trial value lands in a slot
// keyed by its trial index and reductions happen serially in index order,
// so results are bit-identical for any thread count. threads = 0 picks
// the hardware concurrency.

/// Ergodic sum capacity: sample mean of log2 det(I + mu G G^H), with the
/// log-determinant taken through a Cholesky factorization.
CapacityResult mc_capacity(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                           std::int64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Determinant-expectation bound: log2 of the sample mean of
/// det(I + mu G G^H). Per-trial determinants live in the log domain and
/// are combined by log-sum-exp, so the mean never overflows; the standard
/// error comes from the delta method.
CapacityResult mc_jensen(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                         std::int64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Achievable sum rate of the linear MMSE receiver with per-user power
/// P/K: sample mean of sum_k log2(1 + SINR_k).
CapacityResult mmse_sum_rate(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                             std::int64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Monte Carlo estimate of E[G G^H] (used to cross-check the analytical
/// receiver correlation).
Eigen::MatrixXcd mc_mean_outer(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                               std::int64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Channel source for the *_custom estimators: fills G (M x K) for a
/// trial index. Must be safe to call concurrently for distinct trials.
using ChannelDrawFn = std::function<void(std::int64_t trial, Eigen::MatrixXcd& G)>;

CapacityResult mc_capacity_custom(const ChannelDrawFn& draw, int M, int K, double mu,
                                  std::int64_t trials, unsigned threads = 0);
CapacityResult mc_jensen_custom(const ChannelDrawFn& draw, int M, int K, double mu,
                                std::int64_t trials, unsigned threads = 0);
CapacityResult mmse_sum_rate_custom(const ChannelDrawFn& draw, int M, int K, double mu,
                                    std::int64_t trials, unsigned threads = 0);

}  // namespace nwss
