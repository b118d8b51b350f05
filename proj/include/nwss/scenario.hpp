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

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwss/types.hpp"

namespace nwss {

/// Complete parameterization of the channel model: array/user/cluster
/// dimensions, the grouping of partially visible (PV) clusters into
/// sub-array visibility regions, the propagation gains of the PV groups
/// and of the wholly visible (WV) clusters, the three correlation
/// coefficients, and the per-user SNR mu = P / (K sigma^2).
///
/// Degenerate shapes are represented by absent blocks: an all-WV scenario
/// has g = 0 and empty group vectors; an all-PV scenario has s_w = 0
/// (which forces rho_w = 0).
struct ScenarioConfig {
    int M = 1;                // BS antennas
    int K = 1;                // single-antenna users
    int S = 1;                // total receiver-side clusters
    int g = 0;                // PV cluster groups
    std::vector<int> s_p_per_group;      // clusters per PV group, size g
    std::vector<int> r_per_group;        // antennas per PV sub-array, size g
    int s_w = 0;              // WV clusters
    std::vector<double> rho_p_per_group; // PV propagation gains, size g
    double rho_w = 0.0;       // WV propagation gain
    cxd a_p = 0.85;           // PV sub-array correlation coefficient
    cxd a_w = 0.85;           // WV correlation coefficient
    cxd a_s = 0.6;            // cluster-side correlation coefficient
    double snr_mu = 1.0;      // mu = P / (K sigma^2)

    int s_p_total() const;
    bool all_pv() const { return s_w == 0; }
    bool all_wv() const { return g == 0; }

    /// True when every PV group satisfies rho_p,i + rho_w = 1, so the
    /// received energy at each BS antenna equals K.
    bool energy_normalized() const;

    /// Throws std::invalid_argument on any violated invariant:
    /// sum(s_p) + s_w = S, sum(r) = M, s_w = 0 only with rho_w = 0,
    /// nonnegative gains, |a| <= 1, and consistent vector lengths.
    void validate() const;

    /// Strict JSON codec: exactly the snake_case field names of this
    /// struct; unknown keys are an error. Correlation coefficients are
    /// a number (real) or a two-element [re, im] array.
    static ScenarioConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

}  // namespace nwss
