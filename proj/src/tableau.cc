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
#include "stochlre/tableau.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace stochlre {

namespace {

/// Sum of the i-exponents produced by multiplying P1 * P2 site-wise, mod 4.
inline int product_phase(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2) {
    std::uint64_t X1 = x1 & ~z1, Y1 = x1 & z1, Z1 = ~x1 & z1;
    std::uint64_t X2 = x2 & ~z2, Y2 = x2 & z2, Z2 = ~x2 & z2;
    std::uint64_t plus = (X1 & Y2) | (Y1 & Z2) | (Z1 & X2);
    std::uint64_t minus = (X1 & Z2) | (Y1 & X2) | (Z1 & Y2);
    return std::popcount(plus) - std::popcount(minus);
}

/// Copies `len` bits starting at bit `src_off` of `src` to bit `dst_off` of `dst`.
/// `dst` must be zero in the target range.
void copy_bits(const std::uint64_t *src, std::size_t src_off, std::uint64_t *dst, std::size_t dst_off, std::size_t len) {
    while (len > 0) {
        std::size_t sw = src_off >> 6, sb = src_off & 63;
        std::size_t dw = dst_off >> 6, db = dst_off & 63;
        std::size_t chunk = std::min({len, 64 - sb, 64 - db});
        std::uint64_t bits = src[sw] >> sb;
        if (chunk < 64) {
            bits &= (std::uint64_t{1} << chunk) - 1;
        }
        dst[dw] |= bits << db;
        src_off += chunk;
        dst_off += chunk;
        len -= chunk;
    }
}

inline void local_h(unsigned &x, unsigned &z, unsigned &sg) {
    sg ^= x & z;
    std::swap(x, z);
}

inline void local_s(unsigned &x, unsigned &z, unsigned &sg) {
    sg ^= x & z;
    z ^= x;
}

inline void local_cx(unsigned &xc, unsigned &zc, unsigned &xt, unsigned &zt, unsigned &sg) {
    sg ^= xc & zt & (xt ^ zc ^ 1);
    xt ^= xc;
    zc ^= zt;
}

}  // namespace

Tableau::Tableau(std::size_t n)
    : n_(n), words_(words_for_bits(n)), xs_(2 * n * words_for_bits(n), 0), zs_(2 * n * words_for_bits(n), 0),
      signs_(2 * n, 0) {
}

Tableau Tableau::product_state(std::size_t num_qubits, ProductBasis basis) {
    if (num_qubits == 0) {
        throw std::invalid_argument("product_state: need at least one qubit");
    }
    Tableau t(num_qubits);
    std::size_t n = num_qubits, W = t.words_;
    for (std::size_t q = 0; q < n; ++q) {
        std::uint64_t bit = std::uint64_t{1} << (q & 63);
        std::size_t w = q >> 6;
        // Destabilizers Z_q / stabilizers X_q for the X basis, swapped for Z.
        if (basis == ProductBasis::AllZeroZ) {
            t.xs_[q * W + w] |= bit;
            t.zs_[(n + q) * W + w] |= bit;
        } else {
            t.zs_[q * W + w] |= bit;
            t.xs_[(n + q) * W + w] |= bit;
            t.signs_[n + q] = basis == ProductBasis::AllMinusX ? 1 : 0;
        }
    }
    return t;
}

void Tableau::check_site(std::size_t q) const {
    if (q >= n_) {
        throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                                " qubits");
    }
}

void Tableau::check_pauli(const PauliString &p) const {
    if (p.num_qubits() != n_) {
        throw std::invalid_argument("Pauli string size does not match the tableau");
    }
    if (p.is_identity()) {
        throw std::invalid_argument("the identity string is not a valid observable here");
    }
}

void Tableau::h(std::size_t q) {
    check_site(q);
    std::size_t w = q >> 6;
    std::uint64_t bit = std::uint64_t{1} << (q & 63);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t &xw = xs_[r * words_ + w];
        std::uint64_t &zw = zs_[r * words_ + w];
        if (xw & zw & bit) {
            signs_[r] ^= 1;
        }
        std::uint64_t diff = (xw ^ zw) & bit;
        xw ^= diff;
        zw ^= diff;
    }
}

void Tableau::s(std::size_t q) {
    check_site(q);
    std::size_t w = q >> 6;
    std::uint64_t bit = std::uint64_t{1} << (q & 63);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t xw = xs_[r * words_ + w];
        std::uint64_t &zw = zs_[r * words_ + w];
        if (xw & zw & bit) {
            signs_[r] ^= 1;
        }
        zw ^= xw & bit;
    }
}

void Tableau::cx(std::size_t control, std::size_t target) {
    check_site(control);
    check_site(target);
    if (control == target) {
        throw std::invalid_argument("CX control and target coincide");
    }
    std::size_t wc = control >> 6, wt = target >> 6;
    unsigned bc = control & 63, bt = target & 63;
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t *xr = &xs_[r * words_];
        std::uint64_t *zr = &zs_[r * words_];
        unsigned xc = (xr[wc] >> bc) & 1, zc = (zr[wc] >> bc) & 1;
        unsigned xt = (xr[wt] >> bt) & 1, zt = (zr[wt] >> bt) & 1;
        signs_[r] ^= static_cast<std::uint8_t>(xc & zt & (xt ^ zc ^ 1));
        xr[wt] ^= static_cast<std::uint64_t>(xc) << bt;
        zr[wc] ^= static_cast<std::uint64_t>(zt) << bc;
    }
}

void Tableau::x(std::size_t q) {
    check_site(q);
    std::size_t w = q >> 6;
    unsigned b = q & 63;
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        signs_[r] ^= static_cast<std::uint8_t>((zs_[r * words_ + w] >> b) & 1);
    }
}

void Tableau::z(std::size_t q) {
    check_site(q);
    std::size_t w = q >> 6;
    unsigned b = q & 63;
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        signs_[r] ^= static_cast<std::uint8_t>((xs_[r * words_ + w] >> b) & 1);
    }
}

void Tableau::apply_gate(Gate gate, std::span<const std::size_t> sites) {
    switch (gate) {
        case Gate::H:
        case Gate::S:
            if (sites.size() != 1) {
                throw std::invalid_argument("single-qubit gate needs exactly one site");
            }
            gate == Gate::H ? h(sites[0]) : s(sites[0]);
            return;
        case Gate::CX:
            if (sites.size() != 2) {
                throw std::invalid_argument("CX needs exactly two sites");
            }
            cx(sites[0], sites[1]);
            return;
    }
}

template <typename F>
void Tableau::apply_two_qubit(std::size_t a, std::size_t b, F &&f) {
    check_site(a);
    check_site(b);
    if (a == b) {
        throw std::invalid_argument("two-qubit rotation on coincident sites");
    }
    std::size_t wa = a >> 6, wb = b >> 6;
    unsigned ba = a & 63, bb = b & 63;
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t *xr = &xs_[r * words_];
        std::uint64_t *zr = &zs_[r * words_];
        unsigned xa = (xr[wa] >> ba) & 1, za = (zr[wa] >> ba) & 1;
        unsigned xb = (xr[wb] >> bb) & 1, zb = (zr[wb] >> bb) & 1;
        if ((xa | za | xb | zb) == 0) {
            continue;
        }
        unsigned sg = signs_[r];
        f(xa, za, xb, zb, sg);
        signs_[r] = static_cast<std::uint8_t>(sg);
        xr[wa] = (xr[wa] & ~(std::uint64_t{1} << ba)) | (static_cast<std::uint64_t>(xa) << ba);
        zr[wa] = (zr[wa] & ~(std::uint64_t{1} << ba)) | (static_cast<std::uint64_t>(za) << ba);
        xr[wb] = (xr[wb] & ~(std::uint64_t{1} << bb)) | (static_cast<std::uint64_t>(xb) << bb);
        zr[wb] = (zr[wb] & ~(std::uint64_t{1} << bb)) | (static_cast<std::uint64_t>(zb) << bb);
    }
}

void Tableau::apply_zz_rotation(std::size_t a, std::size_t b) {
    // S_b, S_a, H_a, CX(b -> a), H_a, fused into one pass over the rows.
    apply_two_qubit(a, b, [](unsigned &xa, unsigned &za, unsigned &xb, unsigned &zb, unsigned &sg) {
        local_s(xb, zb, sg);
        local_s(xa, za, sg);
        local_h(xa, za, sg);
        local_cx(xb, zb, xa, za, sg);
        local_h(xa, za, sg);
    });
}

void Tableau::apply_xx_rotation(std::size_t a, std::size_t b) {
    // H_a, S_a, CX(a -> b), H_b, S_b, H_b, H_a.
    apply_two_qubit(a, b, [](unsigned &xa, unsigned &za, unsigned &xb, unsigned &zb, unsigned &sg) {
        local_h(xa, za, sg);
        local_s(xa, za, sg);
        local_cx(xa, za, xb, zb, sg);
        local_h(xb, zb, sg);
        local_s(xb, zb, sg);
        local_h(xb, zb, sg);
        local_h(xa, za, sg);
    });
}

Tableau::SparseMask Tableau::sparse_mask(const PauliString &p) {
    SparseMask m;
    auto xw = p.x_words();
    auto zw = p.z_words();
    for (std::size_t k = 0; k < xw.size(); ++k) {
        if (xw[k] | zw[k]) {
            m.word.push_back(k);
            m.px.push_back(xw[k]);
            m.pz.push_back(zw[k]);
        }
    }
    return m;
}

bool Tableau::anticommutes(std::size_t row, const SparseMask &m) const {
    const std::uint64_t *xr = &xs_[row * words_];
    const std::uint64_t *zr = &zs_[row * words_];
    int parity = 0;
    for (std::size_t k = 0; k < m.word.size(); ++k) {
        std::size_t w = m.word[k];
        parity ^= std::popcount((xr[w] & m.pz[k]) ^ (zr[w] & m.px[k]));
    }
    return (parity & 1) != 0;
}

void Tableau::multiply_into(std::span<std::uint64_t> x,
                            std::span<std::uint64_t> z,
                            std::uint8_t &sign,
                            std::size_t src_row) const {
    const std::uint64_t *xr = &xs_[src_row * words_];
    const std::uint64_t *zr = &zs_[src_row * words_];
    int phase = 2 * signs_[src_row] + 2 * sign;
    for (std::size_t k = 0; k < words_; ++k) {
        phase += product_phase(xr[k], zr[k], x[k], z[k]);
        x[k] ^= xr[k];
        z[k] ^= zr[k];
    }
    phase &= 3;
    if (phase & 1) {
        throw std::logic_error("tableau row product with imaginary phase (non-commuting rows)");
    }
    sign = static_cast<std::uint8_t>(phase >> 1);
}

void Tableau::rowsum(std::size_t dst_row, std::size_t src_row) {
    multiply_into({&xs_[dst_row * words_], words_}, {&zs_[dst_row * words_], words_}, signs_[dst_row], src_row);
}

MeasureOutcome Tableau::measure_pauli(const PauliString &p, double u) {
    check_pauli(p);
    SparseMask m = sparse_mask(p);
    std::size_t pivot = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (anticommutes(r, m)) {
            pivot = r;
            break;
        }
    }
    if (pivot == 2 * n_) {
        return {expectation(p), true};
    }
    int value = u < 0.5 ? +1 : -1;
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        if (r != pivot && r != pivot - n_ && anticommutes(r, m)) {
            rowsum(r, pivot);
        }
    }
    std::size_t d = pivot - n_;
    std::copy_n(&xs_[pivot * words_], words_, &xs_[d * words_]);
    std::copy_n(&zs_[pivot * words_], words_, &zs_[d * words_]);
    signs_[d] = signs_[pivot];
    std::copy(p.x_words().begin(), p.x_words().end(), &xs_[pivot * words_]);
    std::copy(p.z_words().begin(), p.z_words().end(), &zs_[pivot * words_]);
    signs_[pivot] = (p.sign() * value) < 0 ? 1 : 0;
    return {value, false};
}

MeasureOutcome Tableau::measure_x(std::size_t q, double u) {
    check_site(q);
    return measure_pauli(PauliString::from_sites(n_, {{q, Pauli::X}}), u);
}

int Tableau::expectation(const PauliString &p) const {
    check_pauli(p);
    SparseMask m = sparse_mask(p);
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (anticommutes(r, m)) {
            return 0;
        }
    }
    // p is (up to sign) the product of the stabilizers whose destabilizers
    // anticommute with it.
    std::vector<std::uint64_t> x(words_, 0), z(words_, 0);
    std::uint8_t sign = 0;
    for (std::size_t r = 0; r < n_; ++r) {
        if (anticommutes(r, m)) {
            multiply_into(x, z, sign, r + n_);
        }
    }
    int stored = sign ? -1 : +1;
    return stored * p.sign();
}

bool Tableau::contains_unsigned(const PauliString &p) const {
    check_pauli(p);
    SparseMask m = sparse_mask(p);
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (anticommutes(r, m)) {
            return false;
        }
    }
    return true;
}

std::size_t Tableau::entropy_bits(std::span<const std::size_t> region) const {
    std::vector<char> in(n_, 0);
    for (auto q : region) {
        check_site(q);
        if (in[q]) {
            throw std::invalid_argument("region lists a site twice");
        }
        in[q] = 1;
    }
    std::size_t size = region.size();
    if (size == 0 || size == n_) {
        return 0;
    }
    // S_A = S_complement for pure states; reduce the smaller side.
    bool use_complement = 2 * size > n_;
    char want = use_complement ? 0 : 1;
    std::size_t k = use_complement ? n_ - size : size;
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t q = 0; q < n_;) {
        if (in[q] != want) {
            ++q;
            continue;
        }
        std::size_t start = q;
        while (q < n_ && in[q] == want) {
            ++q;
        }
        runs.emplace_back(start, q - start);
    }
    std::size_t cols = 2 * k;
    std::size_t stride = words_for_bits(cols);
    std::vector<std::uint64_t> scratch(n_ * stride, 0);
    for (std::size_t r = 0; r < n_; ++r) {
        const std::uint64_t *xr = &xs_[(n_ + r) * words_];
        const std::uint64_t *zr = &zs_[(n_ + r) * words_];
        std::uint64_t *dst = &scratch[r * stride];
        std::size_t off = 0;
        for (auto [start, len] : runs) {
            copy_bits(xr, start, dst, off, len);
            copy_bits(zr, start, dst, k + off, len);
            off += len;
        }
    }
    std::size_t rank = gf2_rank_inplace(scratch, n_, stride, cols);
    return rank - k;
}

double Tableau::entanglement_entropy(std::span<const std::size_t> region) const {
    return static_cast<double>(entropy_bits(region)) * std::numbers::ln2;
}

namespace {

void require_disjoint(std::size_t n, std::initializer_list<std::span<const std::size_t>> regions) {
    std::vector<char> seen(n, 0);
    for (auto region : regions) {
        for (auto q : region) {
            if (q >= n) {
                throw std::out_of_range("region site out of range");
            }
            if (seen[q]) {
                throw std::invalid_argument("regions overlap at site " + std::to_string(q));
            }
            seen[q] = 1;
        }
    }
}

std::vector<std::size_t> join(std::initializer_list<std::span<const std::size_t>> regions) {
    std::vector<std::size_t> out;
    for (auto region : regions) {
        out.insert(out.end(), region.begin(), region.end());
    }
    return out;
}

}  // namespace

double Tableau::mutual_information_2(std::span<const std::size_t> a, std::span<const std::size_t> b) const {
    require_disjoint(n_, {a, b});
    auto ab = join({a, b});
    long bits = static_cast<long>(entropy_bits(a)) + static_cast<long>(entropy_bits(b)) -
                static_cast<long>(entropy_bits(ab));
    return static_cast<double>(bits) * std::numbers::ln2;
}

double Tableau::mutual_information_3(std::span<const std::size_t> a,
                                     std::span<const std::size_t> b,
                                     std::span<const std::size_t> c) const {
    require_disjoint(n_, {a, b, c});
    auto S = [this](const std::vector<std::size_t> &r) { return static_cast<long>(entropy_bits(r)); };
    long bits = S(join({a})) + S(join({b})) + S(join({c})) - S(join({a, b})) - S(join({b, c})) - S(join({a, c})) +
                S(join({a, b, c}));
    return static_cast<double>(bits) * std::numbers::ln2;
}

PauliString Tableau::stabilizer(std::size_t i) const {
    check_site(i);
    PauliString p(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        int code = static_cast<int>((xs_[(n_ + i) * words_ + (q >> 6)] >> (q & 63)) & 1) |
                   (static_cast<int>((zs_[(n_ + i) * words_ + (q >> 6)] >> (q & 63)) & 1) << 1);
        p.set(q, static_cast<Pauli>(code));
    }
    p.set_sign(signs_[n_ + i] ? -1 : +1);
    return p;
}

PauliString Tableau::destabilizer(std::size_t i) const {
    check_site(i);
    PauliString p(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        int code = static_cast<int>((xs_[i * words_ + (q >> 6)] >> (q & 63)) & 1) |
                   (static_cast<int>((zs_[i * words_ + (q >> 6)] >> (q & 63)) & 1) << 1);
        p.set(q, static_cast<Pauli>(code));
    }
    if (!p.is_identity()) {
        p.set_sign(signs_[i] ? -1 : +1);
    }
    return p;
}

std::vector<PauliString> Tableau::stabilizers() const {
    std::vector<PauliString> out;
    out.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out.push_back(stabilizer(i));
    }
    return out;
}

void Tableau::multiply_stabilizers(std::size_t i, std::size_t j) {
    check_site(i);
    check_site(j);
    if (i == j) {
        throw std::invalid_argument("multiply_stabilizers needs distinct rows");
    }
    rowsum(n_ + i, n_ + j);
    // Destabilizer rows may anticommute with each other, so combine them
    // without the phase bookkeeping; destabilizer signs carry no meaning.
    for (std::size_t k = 0; k < words_; ++k) {
        xs_[j * words_ + k] ^= xs_[i * words_ + k];
        zs_[j * words_ + k] ^= zs_[i * words_ + k];
    }
}

BitMatrix Tableau::canonical_unsigned_stabilizers() const {
    BitMatrix m(n_, 2 * n_);
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t q = 0; q < n_; ++q) {
            m.set(r, q, (xs_[(n_ + r) * words_ + (q >> 6)] >> (q & 63)) & 1);
            m.set(r, n_ + q, (zs_[(n_ + r) * words_ + (q >> 6)] >> (q & 63)) & 1);
        }
    }
    m.rref();
    return m;
}

bool Tableau::check_invariants() const {
    auto anti = [this](std::size_t r1, std::size_t r2) {
        int parity = 0;
        for (std::size_t k = 0; k < words_; ++k) {
            parity ^= std::popcount((xs_[r1 * words_ + k] & zs_[r2 * words_ + k]) ^
                                    (zs_[r1 * words_ + k] & xs_[r2 * words_ + k]));
        }
        return (parity & 1) != 0;
    };
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (anti(n_ + i, n_ + j)) {
                return false;
            }
            if (i != j && anti(i, j)) {
                return false;
            }
            if (anti(i, n_ + j) != (i == j)) {
                return false;
            }
        }
    }
    return canonical_unsigned_stabilizers().rank() == n_;
}

}  // namespace stochlre
