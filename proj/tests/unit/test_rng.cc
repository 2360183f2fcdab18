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
#include <cmath>
#include <set>

#include "doctest.h"
#include "stochlre/rng.h"

using namespace stochlre;

TEST_SUITE("rng") {
    TEST_CASE("philox4x32-10 known-answer vectors") {
        auto a = philox4x32({0, 0, 0, 0}, {0, 0});
        CHECK(a == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        auto b = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
        CHECK(b == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        auto c = philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
        CHECK(c == std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams are reproducible and distinct") {
        RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
        std::set<std::uint64_t> firsts;
        for (int k = 0; k < 100; ++k) {
            auto x = a();
            CHECK(x == b());
            firsts.insert(x);
        }
        CHECK(firsts.size() == 100);
        RngStream a2(42, 7);
        CHECK(a2() != c());
        RngStream a3(42, 7);
        CHECK(a3() != d());
    }

    TEST_CASE("uniform lies in [0,1) with the right moments") {
        RngStream r(1, 0);
        const int n = 200000;
        double sum = 0, sum2 = 0;
        for (int k = 0; k < n; ++k) {
            double u = r.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
            sum2 += u * u;
        }
        double mean = sum / n;
        double var = sum2 / n - mean * mean;
        CHECK(std::abs(mean - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
        CHECK(std::abs(var - 1.0 / 12) < 1e-3);
    }

    TEST_CASE("bernoulli and coin frequencies") {
        RngStream r(5, 3);
        const int n = 100000;
        int hits = 0, heads = 0;
        for (int k = 0; k < n; ++k) {
            hits += r.bernoulli(0.3);
            heads += r.coin();
        }
        CHECK(std::abs(hits - 0.3 * n) < 4 * std::sqrt(n * 0.21));
        CHECK(std::abs(heads - 0.5 * n) < 4 * std::sqrt(n * 0.25));
        CHECK_FALSE(RngStream(1, 1).bernoulli(0.0));
        CHECK(RngStream(1, 1).bernoulli(1.0));
    }

    TEST_CASE("draw counter") {
        RngStream r(9, 9);
        CHECK(r.draws() == 0);
        r();
        r();
        r();
        CHECK(r.draws() == 3);
    }
}
