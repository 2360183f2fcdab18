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
#include <span>
#include <vector>

#include "stochlre/bit_matrix.h"
#include "stochlre/pauli.h"

namespace stochlre {

enum class ProductBasis { AllMinusX, AllPlusX, AllZeroZ };
enum class Gate { H, S, CX };

struct MeasureOutcome {
    int value;  // +1 or -1
    bool deterministic;
};

/// Stabilizer state in the Aaronson-Gottesman layout.
///
/// Rows [0, n) are destabilizers, rows [n, 2n) stabilizers. Each row is a
/// bit-packed Pauli string plus a sign bit. Destabilizer i anticommutes with
/// stabilizer i and commutes with every other row of the opposite kind.
class Tableau {
   public:
    static Tableau product_state(std::size_t num_qubits, ProductBasis basis);

    std::size_t num_qubits() const {
        return n_;
    }

    void apply_gate(Gate gate, std::span<const std::size_t> sites);
    void h(std::size_t q);
    void s(std::size_t q);
    void cx(std::size_t control, std::size_t target);
    /// Pauli X and Z gates (sign flips only).
    void x(std::size_t q);
    void z(std::size_t q);

    /// exp(-i pi/4 Z_a Z_b) up to global phase, as H_a CX_{ba} H_a S_a S_b.
    void apply_zz_rotation(std::size_t a, std::size_t b);
    /// exp(-i pi/4 X_a X_b) up to global phase, as H_a H_b S_b H_b CX_{ab} S_a H_a.
    void apply_xx_rotation(std::size_t a, std::size_t b);

    /// Projective measurement of `p`. `u` is a uniform draw in [0, 1); a random
    /// outcome is +1 iff u < 1/2. Deterministic outcomes ignore `u`.
    MeasureOutcome measure_pauli(const PauliString &p, double u);
    MeasureOutcome measure_x(std::size_t q, double u);

    /// +1 or -1 if +p or -p is in the stabilizer group, 0 otherwise.
    int expectation(const PauliString &p) const;
    /// True iff p or -p is in the stabilizer group (no sign computation).
    bool contains_unsigned(const PauliString &p) const;

    /// Von Neumann entropy (natural log) of `region`: (rank - |A|) log 2.
    double entanglement_entropy(std::span<const std::size_t> region) const;
    /// Entropy in units of log 2 (an integer).
    std::size_t entropy_bits(std::span<const std::size_t> region) const;
    double mutual_information_2(std::span<const std::size_t> a, std::span<const std::size_t> b) const;
    double mutual_information_3(std::span<const std::size_t> a,
                                std::span<const std::size_t> b,
                                std::span<const std::size_t> c) const;

    PauliString stabilizer(std::size_t i) const;
    PauliString destabilizer(std::size_t i) const;
    std::vector<PauliString> stabilizers() const;

    /// stabilizer i <- stabilizer i * stabilizer j (destabilizer j is updated to
    /// keep the symplectic pairing). Does not change the state.
    void multiply_stabilizers(std::size_t i, std::size_t j);

    /// n x 2n matrix of unsigned stabilizer rows (x bits, then z bits) in
    /// reduced row-echelon form. Equal for two tableaus iff their stabilizer
    /// groups agree up to signs.
    BitMatrix canonical_unsigned_stabilizers() const;

    /// Commutation, independence and symplectic pairing checks.
    bool check_invariants() const;

   private:
    explicit Tableau(std::size_t n);

    struct SparseMask {
        std::vector<std::size_t> word;
        std::vector<std::uint64_t> px;
        std::vector<std::uint64_t> pz;
    };
    static SparseMask sparse_mask(const PauliString &p);
    bool anticommutes(std::size_t row, const SparseMask &m) const;
    void check_site(std::size_t q) const;
    template <typename F>
    void apply_two_qubit(std::size_t a, std::size_t b, F &&f);
    void check_pauli(const PauliString &p) const;

    /// Sign (0 or 1) of row_src * (x, z, sign) written back into (x, z, sign).
    void multiply_into(std::span<std::uint64_t> x,
                       std::span<std::uint64_t> z,
                       std::uint8_t &sign,
                       std::size_t src_row) const;
    void rowsum(std::size_t dst_row, std::size_t src_row);

    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> xs_;
    std::vector<std::uint64_t> zs_;
    std::vector<std::uint8_t> signs_;
};

}  // namespace stochlre
