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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "supou/rng.hpp"
#include "support/oracles.hpp"

using namespace supou;

TEST_CASE("philox4x32-10 known-answer vectors")
{
    // Published reference vectors for the counter/key block function.
    auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(r == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    r = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
    CHECK(r == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(r == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of (seed, stream, substream)")
{
    RandomStream a(42, 7, 3);
    RandomStream b(42, 7, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // Replaying a substream is unaffected by draws made elsewhere.
    RandomStream root(42, 7);
    RandomStream s3 = root.substream(3);
    const auto first = s3.next_u64();
    root.next_u64();
    root.substream(5).next_u64();
    CHECK(root.substream(3).next_u64() == first);

    CHECK(RandomStream(42, 7, 3).next_u64() != RandomStream(42, 7, 4).next_u64());
    CHECK(RandomStream(42, 7, 3).next_u64() != RandomStream(42, 8, 3).next_u64());
    CHECK(RandomStream(42, 7, 3).next_u64() != RandomStream(43, 7, 3).next_u64());
}

TEST_CASE("uniform stays strictly inside (0, 1) and is unbiased")
{
    RandomStream rng(1, 0);
    double lo = 1.0, hi = 0.0;
    std::vector<double> xs(200000);
    for (auto& x : xs) {
        x = rng.uniform();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    const auto mv = oracle::mean_var(xs.begin(), xs.end());
    CHECK(std::abs(mv.mean - 0.5) < 4.0 * mv.se_mean);
    CHECK(mv.var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal pair moments")
{
    RandomStream rng(2, 0);
    std::vector<double> xs;
    xs.reserve(200000);
    for (int i = 0; i < 100000; ++i) {
        const auto [z1, z2] = rng.normal_pair();
        xs.push_back(z1);
        xs.push_back(z2);
    }
    const auto mv = oracle::mean_var(xs.begin(), xs.end());
    CHECK(std::abs(mv.mean) < 4.0 * mv.se_mean);
    CHECK(mv.var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson sampler matches its mean across the chunking threshold")
{
    for (const double lambda : {3.0, 1500.0}) {
        RandomStream rng(3, 0);
        std::vector<double> xs(20000);
        for (auto& x : xs) x = static_cast<double>(sample_poisson(rng, lambda));
        const auto mv = oracle::mean_var(xs.begin(), xs.end());
        CHECK(std::abs(mv.mean - lambda) < 4.0 * mv.se_mean);
        CHECK(mv.var == doctest::Approx(lambda).epsilon(0.05));
    }
    RandomStream rng(3, 1);
    CHECK(sample_poisson(rng, 0.0) == 0);
}
