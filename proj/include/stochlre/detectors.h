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
#include <string>
#include <vector>

#include "stochlre/lattice.h"
#include "stochlre/pauli.h"
#include "stochlre/quantum_state.h"
#include "stochlre/tableau.h"

namespace stochlre {

enum class TargetKind { CatX, CatY, ToricCode, XuMoore };

std::string to_string(TargetKind kind);
TargetKind parse_target_kind(const std::string &text);
/// CatX for the chain, ToricCode for Lieb, XuMoore for square.
TargetKind default_target(LatticeKind kind);

/// Named stabilizer sets that define a target state.
///
/// CatX: locals Z_i Z_{i+2} (odd i), global prod_{i odd} X_i.
/// CatY: locals Y_i Y_{i+2} (odd i), same global.
/// ToricCode: locals A_v (first num_vertex entries) then B_p; globals are the
/// X line operators along blue rows and columns.
/// XuMoore: locals A_diamond on red sites; globals are X products along the
/// blue diagonals in both orientations.
struct TargetSpec {
    TargetKind kind = TargetKind::CatX;
    std::size_t num_qubits = 0;
    std::vector<PauliString> locals;
    std::vector<PauliString> globals;
    std::size_t num_vertex = 0;

    static TargetSpec make(TargetKind kind, const Lattice &lattice);
};

bool detect_local(const QuantumState &state, const TargetSpec &spec);
bool detect_global(const QuantumState &state, const TargetSpec &spec);
bool detect_target(const QuantumState &state, const TargetSpec &spec);
bool detect_local(const Tableau &t, const TargetSpec &spec);
bool detect_global(const Tableau &t, const TargetSpec &spec);
bool detect_target(const Tableau &t, const TargetSpec &spec);

/// Mean of |<P>| over the given strings.
double mean_abs_expectation(const QuantumState &state, const std::vector<PauliString> &strings);

struct ToricSector {
    std::vector<int> vertex_signs;
    std::vector<int> plaquette_signs;
};

/// Signs of every A_v and B_p. Throws std::logic_error if the toric code
/// locals are not all present.
ToricSector toric_sector(const Tableau &t, const TargetSpec &spec);

/// Y-Y pairs used for the Y-basis cat observable: Y_i Y_{i+2} on odd chain
/// sites; in 2D, the two opposite blue neighbours of each red site.
std::vector<PauliString> yy_pairs(const Lattice &lattice);

}  // namespace stochlre
