// Copyright 2026 The stochlre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace stochlre {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Maps a 128-bit counter and 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// The stream is fully determined by (seed, stream_id); the block counter is
/// the only mutable state. Trajectory `k` of an ensemble uses stream id `k`, so
/// results do not depend on how trajectories are scheduled across workers.
///
/// Satisfies UniformRandomBitGenerator, so it can drive <random> distributions.
class RngStream {
   public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }
    bool bernoulli(double p) {
        return uniform() < p;
    }
    /// Single fair bit.
    bool coin() {
        return ((*this)() >> 63) != 0;
    }

    std::uint64_t seed() const {
        return seed_;
    }
    std::uint64_t stream_id() const {
        return stream_id_;
    }
    /// Number of 64-bit words drawn so far.
    std::uint64_t draws() const {
        return 2 * block_ - static_cast<std::uint64_t>(have_);
    }

   private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int have_ = 0;
};

}  // namespace stochlre
