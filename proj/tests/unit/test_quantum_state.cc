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
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "stochlre/quantum_state.h"

using namespace stochlre;

TEST_SUITE("quantum_state") {
    TEST_CASE("backends agree on Clifford circuits") {
        std::mt19937 gen(31);
        std::uniform_real_distribution<double> uni;
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 6;
            QuantumState s(Backend::Stabilizer, n), d(Backend::Dense, n);
            for (int step = 0; step < 30; ++step) {
                std::size_t a = gen() % n, b = (a + 1) % n;
                switch (gen() % 4) {
                    case 0:
                        s.zz(a, b);
                        d.zz(a, b);
                        break;
                    case 1:
                        s.xx(a, b);
                        d.xx(a, b);
                        break;
                    case 2:
                        s.x(a);
                        d.x(a);
                        break;
                    default: {
                        double u = uni(gen);
                        auto rs = s.measure_x(a, u);
                        auto rd = d.measure_x(a, u);
                        REQUIRE(rs.value == rd.value);
                        REQUIRE(rs.deterministic == rd.deterministic);
                    }
                }
            }
            std::vector<std::size_t> half{0, 1, 2};
            CHECK(s.entropy(half) == doctest::Approx(d.entropy(half)).epsilon(1e-9));
            for (const char *p : {"ZIZIII", "IXIXIX", "YYIIII", "XXXXXX"}) {
                auto ps = PauliString::parse(p);
                CHECK(s.expectation(ps) == doctest::Approx(d.expectation(ps)).epsilon(1e-9));
                CHECK(s.stabilized_by(ps) == d.stabilized_by(ps));
            }
            CHECK(oracle::overlap(oracle::stabilizer_vector(s.tableau()), oracle::from_state(d.dense())) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    TEST_CASE("non-Clifford operations need the dense backend") {
        QuantumState s(Backend::Stabilizer, 4);
        CHECK_THROWS(s.zz(0, 1, 0.5));
        CHECK_THROWS(s.evolve(HamiltonianSpec::ising_ring(4, 0.5), 0.1));
        CHECK_THROWS(s.dense());
        QuantumState d(Backend::Dense, 4);
        CHECK_NOTHROW(d.zz(0, 1, 0.5));
        CHECK_THROWS(d.tableau());
        CHECK(d.backend() == Backend::Dense);
        CHECK(parse_backend(to_string(Backend::Dense)) == Backend::Dense);
        CHECK(parse_backend(to_string(Backend::Stabilizer)) == Backend::Stabilizer);
    }

    TEST_CASE("all-minus start") {
        for (auto b : {Backend::Stabilizer, Backend::Dense}) {
            QuantumState s(b, 3);
            CHECK(s.expectation(PauliString::parse("XII")) == doctest::Approx(-1.0));
            CHECK(s.expectation(PauliString::parse("ZIZ")) == doctest::Approx(0.0));
            std::vector<std::size_t> a{0}, bb{2}, c{1};
            CHECK(s.mutual_information_2(a, bb) == doctest::Approx(0.0));
            CHECK(s.mutual_information_3(a, bb, c) == doctest::Approx(0.0));
        }
    }
}
