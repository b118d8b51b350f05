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

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace nwss {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;  // exact up to n = 22 in double
}

inline double log2_factorial(int n) {
    if (n <= 1) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

/// Accumulator for sums of nonnegative terms whose magnitude can exceed the
/// double range. The running sum is kept as mantissa * 2^exponent with the
/// mantissa renormalized into [2^-512, 2^512], so the result stays accurate
/// to double precision while the exponent is unbounded.
class ScaledAccumulator {
  public:
    void add(double x) {
        if (x == 0.0) return;
        if (!std::isfinite(x)) throw std::invalid_argument("ScaledAccumulator: non-finite term");
        int e = 0;
        double m = std::frexp(x, &e);
        add_pow2(m, e);
    }

    /// Adds mantissa * 2^exp2.
    void add_pow2(double mantissa, std::int64_t exp2) {
        if (mantissa == 0.0) return;
        if (empty_) {
            mant_ = mantissa;
            exp_ = exp2;
            empty_ = false;
        } else if (exp2 >= exp_) {
            // bring the stored sum to the new exponent
            std::int64_t d = exp2 - exp_;
            mant_ = (d > 1100 ? 0.0 : std::ldexp(mant_, static_cast<int>(-d))) + mantissa;
            exp_ = exp2;
        } else {
            std::int64_t d = exp_ - exp2;
            mant_ += (d > 1100 ? 0.0 : std::ldexp(mantissa, static_cast<int>(-d)));
        }
        normalize();
    }

    bool empty() const { return empty_; }

    /// log2 of the accumulated sum; -inf for an empty (zero) sum.
    double log2() const {
        if (empty_ || mant_ <= 0.0) return -std::numeric_limits<double>::infinity();
        return std::log2(mant_) + static_cast<double>(exp_);
    }

    /// The sum as a plain double; +/-inf if out of range.
    double value() const {
        if (empty_) return 0.0;
        if (exp_ > 1200) return mant_ > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
        if (exp_ < -1200) return 0.0;
        return std::ldexp(mant_, static_cast<int>(exp_));
    }

  private:
    void normalize() {
        if (mant_ == 0.0) { empty_ = true; exp_ = 0; return; }
        int e = 0;
        mant_ = std::frexp(mant_, &e);
        exp_ += e;
        // keep the mantissa away from denormals: frexp puts it in [0.5, 1)
    }

    double mant_ = 0.0;
    std::int64_t exp_ = 0;
    bool empty_ = true;
};

}  // namespace nwss
