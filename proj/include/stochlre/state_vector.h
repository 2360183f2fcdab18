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

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stochlre/pauli.h"
#include "stochlre/tableau.h"

namespace stochlre {

using cplx = std::complex<double>;

/// Real linear combination of Pauli strings.
struct HamiltonianSpec {
    std::vector<std::pair<double, PauliString>> terms;

    /// sum_i Z_i Z_{i+1} on a ring plus gamma_x * sum_i X_i.
    static HamiltonianSpec ising_ring(std::size_t n, double gamma_x);
};

/// Dense 2^n amplitude vector. Site q is bit q of the basis index.
class StateVector {
   public:
    static constexpr std::size_t kMaxQubits = 20;

    /// |0...0>.
    explicit StateVector(std::size_t num_qubits);
    static StateVector product_state(std::size_t num_qubits, ProductBasis basis);
    static StateVector from_amplitudes(std::vector<cplx> amps);

    std::size_t num_qubits() const {
        return n_;
    }
    std::span<const cplx> amplitudes() const {
        return amps_;
    }
    double norm() const;

    void h(std::size_t q);
    void s(std::size_t q);
    void cx(std::size_t control, std::size_t target);
    void x(std::size_t q);
    void z(std::size_t q);

    /// exp(-i (pi/4) theta Z_a Z_b), applied as a diagonal phase.
    void apply_zz_phase(std::size_t a, std::size_t b, double theta);
    void evolve_zz_layer(std::span<const std::pair<std::size_t, std::size_t>> pairs, double theta);
    /// exp(-i (pi/4) theta X_a X_b).
    void apply_xx_rotation(std::size_t a, std::size_t b, double theta);
    /// exp(-i phi P).
    void apply_pauli_rotation(const PauliString &p, double phi);

    /// s <- exp(-i dt H) s by adaptive Lanczos steps, accurate to 1e-8 in the
    /// 2-norm. Throws std::runtime_error if the step control fails.
    void evolve_hamiltonian(const HamiltonianSpec &h, double dt);

    /// Born-rule measurement of p: outcome +1 iff u < P(+1). Probabilities within
    /// 1e-12 of 0 or 1 are snapped, so eigenstates give deterministic outcomes.
    MeasureOutcome measure_pauli(const PauliString &p, double u);
    MeasureOutcome measure_x(std::size_t q, double u);

    /// <psi|P|psi> (real for Hermitian P).
    double expectation(const PauliString &p) const;
    /// Von Neumann entropy (natural log) of the reduced state on `region`.
    double entropy(std::span<const std::size_t> region) const;
    double mutual_information_2(std::span<const std::size_t> a, std::span<const std::size_t> b) const;
    double mutual_information_3(std::span<const std::size_t> a,
                                std::span<const std::size_t> b,
                                std::span<const std::size_t> c) const;

    /// out = P * in.
    void apply_pauli_to(const PauliString &p, std::span<const cplx> in, std::span<cplx> out) const;
    /// out = H * in.
    void apply_hamiltonian_to(const HamiltonianSpec &h, std::span<const cplx> in, std::span<cplx> out) const;

   private:
    void check_site(std::size_t q) const;
    void check_pauli(const PauliString &p) const;
    void normalize();

    std::size_t n_;
    std::vector<cplx> amps_;
};

}  // namespace stochlre
