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
#include <span>
#include <string>
#include <variant>

#include "stochlre/pauli.h"
#include "stochlre/state_vector.h"
#include "stochlre/tableau.h"

namespace stochlre {

enum class Backend { Stabilizer, Dense };

std::string to_string(Backend backend);
Backend parse_backend(const std::string &text);

/// A trajectory state on either backend. Operations with no Clifford
/// counterpart (theta != 1, Hamiltonian layers) throw on the stabilizer side.
class QuantumState {
   public:
    /// All-minus product state.
    QuantumState(Backend backend, std::size_t num_qubits);
    explicit QuantumState(Tableau t) : state_(std::move(t)) {
    }
    explicit QuantumState(StateVector s) : state_(std::move(s)) {
    }

    Backend backend() const {
        return std::holds_alternative<Tableau>(state_) ? Backend::Stabilizer : Backend::Dense;
    }
    std::size_t num_qubits() const;

    const Tableau &tableau() const;
    Tableau &tableau();
    const StateVector &dense() const;
    StateVector &dense();

    /// exp(-i (pi/4) theta Z_a Z_b).
    void zz(std::size_t a, std::size_t b, double theta = 1.0);
    /// exp(-i (pi/4) X_a X_b).
    void xx(std::size_t a, std::size_t b);
    void x(std::size_t q);
    /// exp(-i dt H); dense only.
    void evolve(const HamiltonianSpec &h, double dt);

    MeasureOutcome measure_x(std::size_t q, double u);
    MeasureOutcome measure_pauli(const PauliString &p, double u);

    /// <P>; exactly +-1 or 0 on the stabilizer backend.
    double expectation(const PauliString &p) const;
    /// |<P>| = 1 (to 1e-9 on the dense backend).
    bool stabilized_by(const PauliString &p) const;
    double entropy(std::span<const std::size_t> region) const;
    double mutual_information_2(std::span<const std::size_t> a, std::span<const std::size_t> b) const;
    double mutual_information_3(std::span<const std::size_t> a,
                                std::span<const std::size_t> b,
                                std::span<const std::size_t> c) const;

   private:
    std::variant<Tableau, StateVector> state_;
};

}  // namespace stochlre
