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
#include "stochlre/lattice.h"

#include <stdexcept>

namespace stochlre {

namespace {

long wrap(long v, long n) {
    long r = v % n;
    return r < 0 ? r + n : r;
}

}  // namespace

std::string to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::Chain:
            return "chain";
        case LatticeKind::Lieb:
            return "lieb";
        case LatticeKind::Square:
            return "square";
    }
    return "unknown";
}

LatticeKind parse_lattice_kind(const std::string &text) {
    if (text == "chain") {
        return LatticeKind::Chain;
    }
    if (text == "lieb") {
        return LatticeKind::Lieb;
    }
    if (text == "square") {
        return LatticeKind::Square;
    }
    throw std::invalid_argument("unknown lattice '" + text + "' (expected chain, lieb or square)");
}

Lattice Lattice::chain(std::size_t L) {
    if (L < 4 || L % 2 != 0) {
        throw std::invalid_argument("chain length must be even and at least 4");
    }
    Lattice lat;
    lat.kind_ = LatticeKind::Chain;
    lat.L_ = L;
    lat.num_sites_ = L;
    for (std::size_t i = 0; i < L; ++i) {
        lat.edges_.emplace_back(i, (i + 1) % L);
    }
    lat.is_measured_.assign(L, 0);
    for (std::size_t i = 0; i < L; i += 2) {
        lat.is_measured_[i] = 1;
    }
    lat.finish();
    return lat;
}

Lattice Lattice::lieb(std::size_t L) {
    if (L < 2) {
        throw std::invalid_argument("Lieb lattice needs L >= 2");
    }
    Lattice lat;
    lat.kind_ = LatticeKind::Lieb;
    lat.L_ = L;
    lat.num_sites_ = 3 * L * L;
    lat.is_measured_.assign(lat.num_sites_, 0);
    long n = static_cast<long>(L);
    for (long cx = 0; cx < n; ++cx) {
        for (long cy = 0; cy < n; ++cy) {
            std::size_t red = lat.lieb_site(2 * cx, 2 * cy);
            lat.is_measured_[red] = 1;
            // Each red vertex owns the edges to its +X and +Y blue neighbours
            // and the blue sites own the edges back to the next red vertex.
            std::size_t bx = lat.lieb_site(2 * cx + 1, 2 * cy);
            std::size_t by = lat.lieb_site(2 * cx, 2 * cy + 1);
            lat.edges_.emplace_back(red, bx);
            lat.edges_.emplace_back(bx, lat.lieb_site(2 * cx + 2, 2 * cy));
            lat.edges_.emplace_back(red, by);
            lat.edges_.emplace_back(by, lat.lieb_site(2 * cx, 2 * cy + 2));
        }
    }
    lat.finish();
    return lat;
}

Lattice Lattice::square(std::size_t L) {
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("square lattice needs even L >= 2");
    }
    Lattice lat;
    lat.kind_ = LatticeKind::Square;
    lat.L_ = L;
    lat.num_sites_ = L * L;
    lat.is_measured_.assign(lat.num_sites_, 0);
    long n = static_cast<long>(L);
    for (long x = 0; x < n; ++x) {
        for (long y = 0; y < n; ++y) {
            std::size_t s = lat.square_site(x, y);
            lat.is_measured_[s] = (x + y) % 2 == 0 ? 1 : 0;
            lat.edges_.emplace_back(s, lat.square_site(x + 1, y));
            lat.edges_.emplace_back(s, lat.square_site(x, y + 1));
        }
    }
    lat.finish();
    return lat;
}

Lattice Lattice::make(LatticeKind kind, std::size_t L) {
    switch (kind) {
        case LatticeKind::Chain:
            return chain(L);
        case LatticeKind::Lieb:
            return lieb(L);
        case LatticeKind::Square:
            return square(L);
    }
    throw std::invalid_argument("unknown lattice kind");
}

void Lattice::finish() {
    for (std::size_t s = 0; s < num_sites_; ++s) {
        (is_measured_[s] ? measured_ : unmeasured_).push_back(s);
    }
}

std::size_t Lattice::lieb_site(long X, long Y) const {
    if (kind_ != LatticeKind::Lieb) {
        throw std::logic_error("lieb_site on a non-Lieb lattice");
    }
    long n = static_cast<long>(L_);
    X = wrap(X, 2 * n);
    Y = wrap(Y, 2 * n);
    bool ox = X & 1, oy = Y & 1;
    if (ox && oy) {
        throw std::invalid_argument("no Lieb site at an (odd, odd) coordinate");
    }
    std::size_t k = ox ? 1 : (oy ? 2 : 0);
    return (static_cast<std::size_t>(X / 2) * L_ + static_cast<std::size_t>(Y / 2)) * 3 + k;
}

std::size_t Lattice::square_site(long x, long y) const {
    if (kind_ != LatticeKind::Square) {
        throw std::logic_error("square_site on a non-square lattice");
    }
    long n = static_cast<long>(L_);
    return static_cast<std::size_t>(wrap(x, n)) * L_ + static_cast<std::size_t>(wrap(y, n));
}

std::pair<long, long> Lattice::coordinates(std::size_t site) const {
    if (site >= num_sites_) {
        throw std::out_of_range("site out of range");
    }
    switch (kind_) {
        case LatticeKind::Chain:
            return {static_cast<long>(site), 0};
        case LatticeKind::Square:
            return {static_cast<long>(site / L_), static_cast<long>(site % L_)};
        case LatticeKind::Lieb: {
            std::size_t cell = site / 3, k = site % 3;
            long X = 2 * static_cast<long>(cell / L_) + (k == 1 ? 1 : 0);
            long Y = 2 * static_cast<long>(cell % L_) + (k == 2 ? 1 : 0);
            return {X, Y};
        }
    }
    return {0, 0};
}

std::vector<std::size_t> Lattice::strip(std::size_t begin, std::size_t end) const {
    if (begin > end || end > L_) {
        throw std::invalid_argument("strip bounds out of range");
    }
    std::size_t per = kind_ == LatticeKind::Chain ? 1 : (kind_ == LatticeKind::Lieb ? 3 * L_ : L_);
    std::vector<std::size_t> out;
    for (std::size_t s = begin * per; s < end * per; ++s) {
        out.push_back(s);
    }
    return out;
}

std::array<std::vector<std::size_t>, 4> Lattice::quarters() const {
    if (L_ % 4 != 0) {
        throw std::invalid_argument("quarters need L divisible by 4");
    }
    std::size_t q = L_ / 4;
    return {strip(0, q), strip(q, 2 * q), strip(2 * q, 3 * q), strip(3 * q, 4 * q)};
}

std::vector<std::size_t> Lattice::half() const {
    return strip(0, L_ / 2);
}

}  // namespace stochlre
