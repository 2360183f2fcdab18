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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stochlre {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 3, Z = 2 };

inline std::size_t words_for_bits(std::size_t bits) {
    return (bits + 63) / 64;
}

/// Signed Pauli operator on n qubits.
///
/// Each site carries an (x, z) bit pair with (1, 1) meaning Y, matching the
/// tableau row convention. Externally visible signs are restricted to +1/-1.
/// The identity string always has sign +1.
class PauliString {
   public:
    explicit PauliString(std::size_t num_qubits);

    /// Parses "+XIZ", "-YY" or "XZ" (leading sign optional). Site 0 is the
    /// leftmost character.
    static PauliString parse(std::string_view text);
    static PauliString from_sites(std::size_t num_qubits,
                                  std::initializer_list<std::pair<std::size_t, Pauli>> sites,
                                  int sign = +1);
    static PauliString from_sites(std::size_t num_qubits, std::span<const std::size_t> sites, Pauli p, int sign = +1);

    std::size_t num_qubits() const {
        return n_;
    }
    Pauli at(std::size_t q) const;
    void set(std::size_t q, Pauli p);
    bool x(std::size_t q) const {
        return (xs_[q >> 6] >> (q & 63)) & 1;
    }
    bool z(std::size_t q) const {
        return (zs_[q >> 6] >> (q & 63)) & 1;
    }

    int sign() const {
        return negative_ ? -1 : +1;
    }
    /// Throws std::invalid_argument when asked to negate the identity.
    void set_sign(int sign);

    std::size_t weight() const;
    bool is_identity() const;
    std::vector<std::size_t> support() const;
    bool commutes_with(const PauliString &other) const;

    std::span<const std::uint64_t> x_words() const {
        return xs_;
    }
    std::span<const std::uint64_t> z_words() const {
        return zs_;
    }

    std::string str() const;

    bool operator==(const PauliString &other) const = default;

   private:
    std::size_t n_;
    std::vector<std::uint64_t> xs_;
    std::vector<std::uint64_t> zs_;
    bool negative_ = false;
};

}  // namespace stochlre
