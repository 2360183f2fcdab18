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
#include "stochlre/quantum_state.h"

#include <cmath>
#include <stdexcept>

namespace stochlre {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kUnitTol = 1e-9;

}  // namespace

std::string to_string(Backend backend) {
    return backend == Backend::Stabilizer ? "stabilizer" : "dense";
}

Backend parse_backend(const std::string &text) {
    if (text == "stabilizer") {
        return Backend::Stabilizer;
    }
    if (text == "dense") {
        return Backend::Dense;
    }
    throw std::invalid_argument("unknown backend '" + text + "' (expected stabilizer or dense)");
}

QuantumState::QuantumState(Backend backend, std::size_t num_qubits)
    : state_(backend == Backend::Stabilizer
                 ? std::variant<Tableau, StateVector>(Tableau::product_state(num_qubits, ProductBasis::AllMinusX))
                 : std::variant<Tableau, StateVector>(
                       StateVector::product_state(num_qubits, ProductBasis::AllMinusX))) {
}

std::size_t QuantumState::num_qubits() const {
    return std::visit([](const auto &s) { return s.num_qubits(); }, state_);
}

const Tableau &QuantumState::tableau() const {
    if (auto *t = std::get_if<Tableau>(&state_)) {
        return *t;
    }
    throw std::logic_error("state is not on the stabilizer backend");
}

Tableau &QuantumState::tableau() {
    if (auto *t = std::get_if<Tableau>(&state_)) {
        return *t;
    }
    throw std::logic_error("state is not on the stabilizer backend");
}

const StateVector &QuantumState::dense() const {
    if (auto *s = std::get_if<StateVector>(&state_)) {
        return *s;
    }
    throw std::logic_error("state is not on the dense backend");
}

StateVector &QuantumState::dense() {
    if (auto *s = std::get_if<StateVector>(&state_)) {
        return *s;
    }
    throw std::logic_error("state is not on the dense backend");
}

void QuantumState::zz(std::size_t a, std::size_t b, double theta) {
    std::visit(overloaded{[&](Tableau &t) {
                              if (theta != 1.0) {
                                  throw std::invalid_argument("stabilizer backend only supports theta = 1");
                              }
                              t.apply_zz_rotation(a, b);
                          },
                          [&](StateVector &s) { s.apply_zz_phase(a, b, theta); }},
               state_);
}

void QuantumState::xx(std::size_t a, std::size_t b) {
    std::visit(overloaded{[&](Tableau &t) { t.apply_xx_rotation(a, b); },
                          [&](StateVector &s) { s.apply_xx_rotation(a, b, 1.0); }},
               state_);
}

void QuantumState::x(std::size_t q) {
    std::visit([&](auto &s) { s.x(q); }, state_);
}

void QuantumState::evolve(const HamiltonianSpec &h, double dt) {
    std::visit(overloaded{[&](Tableau &) {
                              throw std::invalid_argument("Hamiltonian evolution needs the dense backend");
                          },
                          [&](StateVector &s) { s.evolve_hamiltonian(h, dt); }},
               state_);
}

MeasureOutcome QuantumState::measure_x(std::size_t q, double u) {
    return std::visit([&](auto &s) { return s.measure_x(q, u); }, state_);
}

MeasureOutcome QuantumState::measure_pauli(const PauliString &p, double u) {
    return std::visit([&](auto &s) { return s.measure_pauli(p, u); }, state_);
}

double QuantumState::expectation(const PauliString &p) const {
    return std::visit(overloaded{[&](const Tableau &t) { return static_cast<double>(t.expectation(p)); },
                                 [&](const StateVector &s) { return s.expectation(p); }},
                      state_);
}

bool QuantumState::stabilized_by(const PauliString &p) const {
    return std::visit(overloaded{[&](const Tableau &t) { return t.contains_unsigned(p); },
                                 [&](const StateVector &s) { return std::abs(s.expectation(p)) > 1.0 - kUnitTol; }},
                      state_);
}

double QuantumState::entropy(std::span<const std::size_t> region) const {
    return std::visit(overloaded{[&](const Tableau &t) { return t.entanglement_entropy(region); },
                                 [&](const StateVector &s) { return s.entropy(region); }},
                      state_);
}

double QuantumState::mutual_information_2(std::span<const std::size_t> a, std::span<const std::size_t> b) const {
    return std::visit([&](const auto &s) { return s.mutual_information_2(a, b); }, state_);
}

double QuantumState::mutual_information_3(std::span<const std::size_t> a,
                                          std::span<const std::size_t> b,
                                          std::span<const std::size_t> c) const {
    return std::visit([&](const auto &s) { return s.mutual_information_3(a, b, c); }, state_);
}

}  // namespace stochlre
