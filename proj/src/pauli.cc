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

#include "stochlre/pauli.h"

#include <bit>
#include <stdexcept>

namespace stochlre {

PauliString::PauliString(std::size_t num_qubits)
    : n_(num_qubits), xs_(words_for_bits(num_qubits), 0), zs_(words_for_bits(num_qubits), 0) {
}

PauliString PauliString::parse(std::string_view text) {
    int sign = +1;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        sign = text.front() == '-' ? -1 : +1;
        text.remove_prefix(1);
    }
    if (text.empty()) {
        throw std::invalid_argument("empty Pauli string");
    }
    PauliString p(text.size());
    for (std::size_t q = 0; q < text.size(); ++q) {
        switch (text[q]) {
            case 'I':
            case '_':
                break;
            case 'X':
                p.set(q, Pauli::X);
                break;
            case 'Y':
                p.set(q, Pauli::Y);
                break;
            case 'Z':
                p.set(q, Pauli::Z);
                break;
            default:
                throw std::invalid_argument("bad Pauli character '" + std::string(1, text[q]) + "'");
        }
    }
    p.set_sign(sign);
    return p;
}

PauliString PauliString::from_sites(std::size_t num_qubits,
                                    std::initializer_list<std::pair<std::size_t, Pauli>> sites,
                                    int sign) {
    PauliString p(num_qubits);
    for (auto [q, op] : sites) {
        p.set(q, op);
    }
    p.set_sign(sign);
    return p;
}

PauliString PauliString::from_sites(std::size_t num_qubits, std::span<const std::size_t> sites, Pauli op, int sign) {
    PauliString p(num_qubits);
    for (auto q : sites) {
        p.set(q, op);
    }
    p.set_sign(sign);
    return p;
}

Pauli PauliString::at(std::size_t q) const {
    if (q >= n_) {
        throw std::out_of_range("Pauli site out of range");
    }
    return static_cast<Pauli>(static_cast<int>(x(q)) | (static_cast<int>(z(q)) << 1));
}

void PauliString::set(std::size_t q, Pauli p) {
    if (q >= n_) {
        throw std::out_of_range("Pauli site out of range");
    }
    std::uint64_t bit = std::uint64_t{1} << (q & 63);
    auto code = static_cast<int>(p);
    if (code & 1) {
        xs_[q >> 6] |= bit;
    } else {
        xs_[q >> 6] &= ~bit;
    }
    if (code & 2) {
        zs_[q >> 6] |= bit;
    } else {
        zs_[q >> 6] &= ~bit;
    }
    if (is_identity()) {
        negative_ = false;
    }
}

void PauliString::set_sign(int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("Pauli sign must be +1 or -1");
    }
    if (sign == -1 && is_identity()) {
        throw std::invalid_argument("the identity string cannot carry sign -1");
    }
    negative_ = sign == -1;
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        w += static_cast<std::size_t>(std::popcount(xs_[k] | zs_[k]));
    }
    return w;
}

bool PauliString::is_identity() const {
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        if (xs_[k] | zs_[k]) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> PauliString::support() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        std::uint64_t w = xs_[k] | zs_[k];
        while (w) {
            out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

bool PauliString::commutes_with(const PauliString &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("Pauli strings act on different qubit counts");
    }
    unsigned parity = 0;
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        parity ^= static_cast<unsigned>(std::popcount((xs_[k] & other.zs_[k]) ^ (zs_[k] & other.xs_[k])));
    }
    return (parity & 1) == 0;
}

std::string PauliString::str() const {
    std::string out(1, negative_ ? '-' : '+');
    for (std::size_t q = 0; q < n_; ++q) {
        out.push_back("IXZY"[static_cast<int>(at(q))]);
    }
    return out;
}

}  // namespace stochlre
