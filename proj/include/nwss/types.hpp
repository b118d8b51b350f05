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
#include <cstdint>
#include <optional>
#include <string>

namespace nwss {

using cxd = std::complex<double>;

/// How a capacity (or rate) value was obtained.
enum class Method {
    mc_capacity,  // sample mean of log2 det(I + mu G G^H)
    mc_jensen,    // log2 of the sample mean of det(I + mu G G^H)
    mmse_rate,    // sum rate of the linear MMSE receiver
    closed_form,  // exact evaluation of the determinant-expectation expansion
    high_snr,     // dominant-order term of the closed form for M = S = K
    asymptotic,   // large-system per-antenna rate limit
};

std::string to_string(Method m);
Method method_from_string(const std::string& s);

inline bool is_monte_carlo(Method m) {
    return m == Method::mc_capacity || m == Method::mc_jensen || m == Method::mmse_rate;
}

/// A capacity/bound value in bits/s/Hz with its provenance. Monte Carlo
/// methods carry the trial count and a standard error; analytical methods
/// carry neither. Values are nonnegative for the exact-capacity methods;
/// the high-SNR and asymptotic expressions may be negative (they diverge
/// to -inf at degenerate gain splits).
struct CapacityResult {
    double value = 0.0;
    Method method = Method::closed_form;
    std::optional<std::int64_t> trials;
    std::optional<double> std_error;
};

}  // namespace nwss
