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
#include "stochlre/validation.h"

using namespace stochlre;

namespace {

void require_pass(const ValidationReport &r) {
    for (const auto &c : r.cases) {
        INFO(r.suite << ": " << c.name << " " << c.detail);
        CHECK(c.pass);
    }
    CHECK(r.pass());
}

}  // namespace

TEST_SUITE("validation") {
    TEST_CASE("Markov state classification") {
        auto t = Tableau::product_state(3, ProductBasis::AllMinusX);
        CHECK(classify_markov_state(t) == 1);
        t.apply_zz_rotation(0, 1);
        t.apply_zz_rotation(1, 2);
        t.measure_x(1, 0.2);
        CHECK(classify_markov_state(t) == 5);
        auto z = Tableau::product_state(3, ProductBasis::AllZeroZ);
        CHECK(classify_markov_state(z) == 0);
    }

    TEST_CASE("suites pass at reduced size") {
        require_pass(validate_tableau_vs_dense(20, 1));
        require_pass(validate_markov_vs_mc(20000, 20, 2026));
        require_pass(validate_monotonicity(20, {0.7, 1.3}, 5));
        require_pass(validate_analytics_closed_forms());
        CHECK(validation_suites().size() == 4);
        CHECK_THROWS(run_validation_suite("nope", 1));
    }
}
