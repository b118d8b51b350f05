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

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "nwss/capacity_closed.hpp"

namespace nwss {

/// fast: analytical identities and exhaustive combinatorial checks only
/// (seconds). full: adds the large-trial Monte Carlo cross-checks
/// (minutes).
enum class VerifyLevel { fast, full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // measured vs expected
    double wall_ms = 0.0;
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::fast;
    std::vector<CriterionResult> results;
    bool all_passed() const;
};

/// Test seams for the suite's own sensitivity checks; the defaults are the
/// production implementations.
struct VerifyHooks {
    std::function<long long(const IndexTuple&, const IndexTuple&, const BlockStructure&)>
        n_count_impl;
};

/// Runs the verification suite and reports one result per criterion.
/// Failures are report entries, never exceptions.
VerifyReport run_verify(VerifyLevel level, unsigned threads = 0, const VerifyHooks& hooks = {});

/// One "[PASS]/[FAIL] id name: detail" line per criterion plus a summary.
void print_report(const VerifyReport& report, std::ostream& os);

}  // namespace nwss
