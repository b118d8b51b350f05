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
#include <complex>
#include <cstdint>

namespace nwss {

// Reproducibility contract: every Monte Carlo trial draws from its own
// substream keyed by (master seed, trial index). Results are therefore
// bit-identical no matter how trials are scheduled across threads. The
// substreams are xoshiro256++ states expanded from a splitmix64 mix of
// the key; none of this depends on implementation-defined library
// distributions.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Per-trial random stream: xoshiro256++ seeded from (seed, trial).
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::int64_t trial) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1));
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in (0, 1].
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Circularly symmetric complex Gaussian, zero mean, E|h|^2 = 1
    /// (real and imaginary parts each N(0, 1/2)): exponential modulus
    /// squared, uniform phase.
    std::complex<double> complex_normal() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double phi = 6.283185307179586476925287 * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace nwss
