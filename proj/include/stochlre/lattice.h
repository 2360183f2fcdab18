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
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace stochlre {

enum class LatticeKind { Chain, Lieb, Square };

std::string to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(const std::string &text);

using Edge = std::pair<std::size_t, std::size_t>;

/// Periodic lattice geometry.
///
/// Chain: ring of L sites (L even); measured sites are the even ones.
/// Lieb: 2L x 2L grid of coordinates (X, Y) with the (odd, odd) positions
/// removed; red vertices sit at (even, even), blue edge sites have exactly one
/// odd coordinate. Site index is (cx * L + cy) * 3 + k with unit cell
/// (cx, cy) = (X / 2, Y / 2) and k = 0 red, 1 for odd X, 2 for odd Y.
/// Square: L x L sites (L even), index x * L + y; red where x + y is even.
///
/// Indices grow with the first coordinate, so strips of constant width along
/// that axis are contiguous index ranges.
class Lattice {
   public:
    static Lattice chain(std::size_t L);
    static Lattice lieb(std::size_t L);
    static Lattice square(std::size_t L);
    static Lattice make(LatticeKind kind, std::size_t L);

    LatticeKind kind() const {
        return kind_;
    }
    std::size_t size() const {
        return L_;
    }
    std::size_t num_sites() const {
        return num_sites_;
    }
    /// All ZZ-coupled pairs; each appears once.
    const std::vector<Edge> &edges() const {
        return edges_;
    }
    /// Sites that receive X measurements (even chain sites, red 2D sites).
    const std::vector<std::size_t> &measured_sites() const {
        return measured_;
    }
    /// Complement of measured_sites().
    const std::vector<std::size_t> &unmeasured_sites() const {
        return unmeasured_;
    }
    bool is_measured(std::size_t site) const {
        return is_measured_[site] != 0;
    }

    /// Lieb only: site at grid coordinate (X, Y), wrapped; throws on (odd, odd).
    std::size_t lieb_site(long X, long Y) const;
    /// Square only: site at (x, y), wrapped.
    std::size_t square_site(long x, long y) const;
    /// Coordinates of a 2D site (grid coordinates for Lieb).
    std::pair<long, long> coordinates(std::size_t site) const;

    /// Sites whose first coordinate (unit-cell column for Lieb) lies in
    /// [begin, end). For the chain this is the site range itself.
    std::vector<std::size_t> strip(std::size_t begin, std::size_t end) const;
    /// Four equal contiguous regions (chain quarters, 2D strips of width L/4).
    std::array<std::vector<std::size_t>, 4> quarters() const;
    /// First half of the system (sites or columns).
    std::vector<std::size_t> half() const;

   private:
    Lattice() = default;
    void finish();

    LatticeKind kind_ = LatticeKind::Chain;
    std::size_t L_ = 0;
    std::size_t num_sites_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> measured_;
    std::vector<std::size_t> unmeasured_;
    std::vector<char> is_measured_;
};

}  // namespace stochlre
