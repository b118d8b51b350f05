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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nwss/capacity_closed.hpp"
#include "nwss/scenario.hpp"
#include "nwss/types.hpp"

namespace nwss {

/// Which scenario knob a sweep varies.
enum class SweepParam {
    rho_p,      // PV gain; rho_w = 1 - value keeps the energy normalized
    s_p,        // total PV clusters (0 = all WV); gains follow value / S
    g,          // PV group count; equal groups, must divide M and s_p
    snr_db,     // mu = 10^(value/10)
    n_joint,    // M = S = K = value, group size M/g preserved, mu ~ 1/K
    m_fixed_k,  // M = S = value with K fixed, group size preserved, mu ~ 1/M
};

std::string to_string(SweepParam p);
SweepParam sweep_param_from_string(const std::string& s);

/// Evaluation methods a sweep may request; mirrors Method plus the
/// eigenvalue-spread condition number.
enum class SweepMethod {
    mc_capacity,
    mc_jensen,
    mmse_rate,
    closed_form,
    high_snr,
    eigen_spread,
};

std::string to_string(SweepMethod m);
SweepMethod sweep_method_from_string(const std::string& s);

struct SweepSpec {
    ScenarioConfig base;
    SweepParam param = SweepParam::snr_db;
    std::vector<double> grid;
    std::vector<SweepMethod> methods;
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 0;
    bool record_timing = true;  // false writes 0 ms for byte-stable output
};

/// One output row: long format, one method per grid point per row.
struct ResultRow {
    std::string sweep_param;
    double value = 0.0;
    std::string method;
    double value_bits = 0.0;                 // NaN when errored
    std::optional<double> std_error;         // Monte Carlo methods only
    std::optional<std::int64_t> trials;      // Monte Carlo methods only
    double wall_time_ms = 0.0;
    std::string error;                       // empty on success
};

/// The scenario at one grid point. Throws std::invalid_argument when the
/// value is not applicable (run_sweep records that in the error column).
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param, double value);

/// Evaluates every requested method at every grid point with common
/// random numbers across the grid, writes the CSV (when out_path is
/// nonempty), and returns the rows in grid order.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, const std::string& out_path);

/// CSV codec for result rows. Numbers carry 17 significant digits so a
/// parsed-back row reproduces the written values bit-exactly.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv_string(const std::string& text);
std::vector<ResultRow> read_csv(const std::string& path);

/// Writes "index,eigenvalue" rows of the receiver-correlation spectrum,
/// sorted descending (index starts at 1).
void emit_eigen(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                const std::string& out_path);

/// A scenario file: the ScenarioConfig document plus an optional "sweep"
/// block ({param, grid, methods, trials, seed, budget}).
struct ScenarioFile {
    ScenarioConfig scenario;
    std::optional<SweepSpec> sweep;  // base filled with scenario
};

ScenarioFile load_scenario_file(const std::string& path);

}  // namespace nwss
