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
#include "doctest.h"
#include "oracles.h"
#include "stochlre/pauli.h"

using namespace stochlre;

TEST_SUITE("pauli") {
    TEST_CASE("parse and print") {
        auto p = PauliString::parse("-XIZY");
        CHECK(p.num_qubits() == 4);
        CHECK(p.sign() == -1);
        CHECK(p.at(0) == Pauli::X);
        CHECK(p.at(1) == Pauli::I);
        CHECK(p.at(2) == Pauli::Z);
        CHECK(p.at(3) == Pauli::Y);
        CHECK(p.str() == "-XIZY");
        CHECK(PauliString::parse("XZ").str() == "+XZ");
        CHECK(p.weight() == 3);
        CHECK(p.support() == std::vector<std::size_t>{0, 2, 3});
        CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
        CHECK_THROWS_AS(PauliString::parse(""), std::invalid_argument);
        CHECK_THROWS_AS(PauliString::parse("-II"), std::invalid_argument);
    }

    TEST_CASE("commutation agrees with matrices") {
        const char *ops[] = {"XIZ", "ZZI", "YXI", "IYY", "XXX", "ZIZ", "YZX"};
        for (auto a : ops) {
            for (auto b : ops) {
                auto pa = PauliString::parse(a);
                auto pb = PauliString::parse(b);
                oracle::Mat ma = oracle::pauli(pa), mb = oracle::pauli(pb);
                bool commute = (ma * mb - mb * ma).norm() < 1e-12;
                CHECK(pa.commutes_with(pb) == commute);
            }
        }
    }

    TEST_CASE("wide strings span several words") {
        PauliString p(130);
        p.set(0, Pauli::X);
        p.set(64, Pauli::Z);
        p.set(129, Pauli::Y);
        CHECK(p.weight() == 3);
        CHECK(p.support() == std::vector<std::size_t>{0, 64, 129});
        PauliString q(130);
        q.set(64, Pauli::X);
        CHECK_FALSE(p.commutes_with(q));
        q.set(129, Pauli::X);
        CHECK(p.commutes_with(q));
        CHECK_THROWS_AS(p.set(130, Pauli::X), std::out_of_range);
    }

    TEST_CASE("identity keeps sign +1") {
        auto p = PauliString::parse("-X");
        p.set(0, Pauli::I);
        CHECK(p.sign() == 1);
        CHECK(p.is_identity());
    }
}
