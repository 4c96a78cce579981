// Copyright 2026 The supou Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace supou {

/// Philox-4x32-10 block function. Maps a 128-bit counter and a 64-bit key
/// to 128 pseudo-random bits; every output block is a pure function of
/// (counter, key), which is what makes streams splittable and replayable.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kBump0 = 0x9E3779B9u;
    static constexpr std::uint32_t kBump1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kBump0;
                key[1] += kBump1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// A splittable random stream addressed by (seed, stream, substream).
/// Draw n of substream k of stream j is a pure function of (seed, j, k, n),
/// so independent workers can generate disjoint parts of an ensemble and
/// obtain bit-identical results regardless of scheduling.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0)
        : seed_(seed), stream_(stream), substream_(substream) {}

    /// A fresh stream for sub-task `k`, starting at draw 0.
    RandomStream substream(std::uint32_t k) const { return RandomStream(seed_, stream_, k); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint32_t substream_id() const { return substream_; }

    std::uint64_t next_u64()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter_),
            static_cast<std::uint32_t>(counter_ >> 32),
            substream_,
            static_cast<std::uint32_t>(stream_) };
        const std::array<std::uint32_t, 2> key = {
            static_cast<std::uint32_t>(seed_ ^ (stream_ >> 32)),
            static_cast<std::uint32_t>(seed_ >> 32) };
        ++counter_;
        const auto out = Philox4x32::block(ctr, key);
        spare_ = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        have_spare_ = true;
        return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    }

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential() { return -std::log(uniform()); }

    /// Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair()
    {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 6.283185307179586476925286766559 * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    double normal() { return normal_pair().first; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint32_t substream_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

/// Exact Poisson variate; product method applied in chunks so the
/// acceptance threshold never underflows for large means.
inline std::uint64_t sample_poisson(RandomStream& rng, double mean)
{
    std::uint64_t total = 0;
    while (mean > 0.0) {
        const double lambda = std::min(mean, 500.0);
        mean -= lambda;
        const double limit = std::exp(-lambda);
        double prod = rng.uniform();
        while (prod >= limit) {
            ++total;
            prod *= rng.uniform();
        }
    }
    return total;
}

}  // namespace supou
