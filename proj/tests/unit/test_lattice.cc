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
#include <algorithm>
#include <set>

#include "doctest.h"
#include "stochlre/lattice.h"

using namespace stochlre;

namespace {

void check_edges_unique(const Lattice &lat) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : lat.edges()) {
        REQUIRE(a != b);
        REQUIRE(a < lat.num_sites());
        REQUIRE(b < lat.num_sites());
        CHECK(seen.insert({std::min(a, b), std::max(a, b)}).second);
        // Every edge joins a measured and an unmeasured site.
        CHECK(lat.is_measured(a) != lat.is_measured(b));
    }
}

std::vector<std::size_t> degrees(const Lattice &lat) {
    std::vector<std::size_t> d(lat.num_sites(), 0);
    for (auto [a, b] : lat.edges()) {
        ++d[a];
        ++d[b];
    }
    return d;
}

}  // namespace

TEST_SUITE("lattice") {
    TEST_CASE("chain") {
        auto lat = Lattice::chain(8);
        CHECK(lat.num_sites() == 8);
        CHECK(lat.edges().size() == 8);
        CHECK(lat.measured_sites() == std::vector<std::size_t>{0, 2, 4, 6});
        CHECK(lat.unmeasured_sites() == std::vector<std::size_t>{1, 3, 5, 7});
        check_edges_unique(lat);
        for (auto d : degrees(lat)) {
            CHECK(d == 2);
        }
        auto q = lat.quarters();
        CHECK(q[0] == std::vector<std::size_t>{0, 1});
        CHECK(q[3] == std::vector<std::size_t>{6, 7});
        CHECK(lat.half() == std::vector<std::size_t>{0, 1, 2, 3});
        CHECK_THROWS(Lattice::chain(7));
        CHECK_THROWS(Lattice::chain(0));
    }

    TEST_CASE("Lieb") {
        for (std::size_t L : {2, 4, 6}) {
            auto lat = Lattice::lieb(L);
            CHECK(lat.num_sites() == 3 * L * L);
            CHECK(lat.edges().size() == 4 * L * L);
            CHECK(lat.measured_sites().size() == L * L);
            check_edges_unique(lat);
            auto d = degrees(lat);
            for (std::size_t s = 0; s < lat.num_sites(); ++s) {
                CHECK(d[s] == (lat.is_measured(s) ? 4u : 2u));
                auto [X, Y] = lat.coordinates(s);
                CHECK(lat.lieb_site(X, Y) == s);
                CHECK(lat.is_measured(s) == (X % 2 == 0 && Y % 2 == 0));
            }
        }
        auto lat = Lattice::lieb(4);
        CHECK_THROWS(lat.lieb_site(1, 1));
        CHECK(lat.lieb_site(-2, 0) == lat.lieb_site(6, 0));
    }

    TEST_CASE("square") {
        auto lat = Lattice::square(6);
        CHECK(lat.num_sites() == 36);
        CHECK(lat.edges().size() == 72);
        CHECK(lat.measured_sites().size() == 18);
        check_edges_unique(lat);
        for (auto d : degrees(lat)) {
            CHECK(d == 4);
        }
        for (std::size_t s = 0; s < lat.num_sites(); ++s) {
            auto [x, y] = lat.coordinates(s);
            CHECK(lat.square_site(x, y) == s);
            CHECK(lat.is_measured(s) == ((x + y) % 2 == 0));
        }
        CHECK_THROWS(Lattice::square(5));
    }

    TEST_CASE("quarters partition the sites") {
        for (auto kind : {LatticeKind::Chain, LatticeKind::Lieb, LatticeKind::Square}) {
            auto lat = Lattice::make(kind, kind == LatticeKind::Chain ? 16 : 8);
            auto q = lat.quarters();
            std::vector<std::size_t> all;
            for (const auto &part : q) {
                CHECK(part.size() == lat.num_sites() / 4);
                all.insert(all.end(), part.begin(), part.end());
            }
            std::sort(all.begin(), all.end());
            for (std::size_t s = 0; s < all.size(); ++s) {
                CHECK(all[s] == s);
            }
            CHECK(lat.half().size() == lat.num_sites() / 2);
        }
    }

    TEST_CASE("names") {
        for (auto kind : {LatticeKind::Chain, LatticeKind::Lieb, LatticeKind::Square}) {
            CHECK(parse_lattice_kind(to_string(kind)) == kind);
        }
        CHECK_THROWS(parse_lattice_kind("hexagonal"));
    }
}
