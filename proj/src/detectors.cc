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
#include "stochlre/detectors.h"

#include <cmath>
#include <stdexcept>

namespace stochlre {

std::string to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::CatX:
            return "cat-x";
        case TargetKind::CatY:
            return "cat-y";
        case TargetKind::ToricCode:
            return "toric-code";
        case TargetKind::XuMoore:
            return "xu-moore";
    }
    return "unknown";
}

TargetKind parse_target_kind(const std::string &text) {
    for (auto k : {TargetKind::CatX, TargetKind::CatY, TargetKind::ToricCode, TargetKind::XuMoore}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw std::invalid_argument("unknown target '" + text + "'");
}

TargetKind default_target(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::Chain:
            return TargetKind::CatX;
        case LatticeKind::Lieb:
            return TargetKind::ToricCode;
        case LatticeKind::Square:
            return TargetKind::XuMoore;
    }
    return TargetKind::CatX;
}

namespace {

PauliString odd_parity(std::size_t L) {
    std::vector<std::size_t> odd;
    for (std::size_t i = 1; i < L; i += 2) {
        odd.push_back(i);
    }
    return PauliString::from_sites(L, odd, Pauli::X);
}

void require(bool ok, const char *what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

TargetSpec TargetSpec::make(TargetKind kind, const Lattice &lat) {
    TargetSpec spec;
    spec.kind = kind;
    std::size_t n = lat.num_sites();
    spec.num_qubits = n;
    switch (kind) {
        case TargetKind::CatX:
        case TargetKind::CatY: {
            require(lat.kind() == LatticeKind::Chain, "cat targets need a chain lattice");
            Pauli op = kind == TargetKind::CatX ? Pauli::Z : Pauli::Y;
            for (std::size_t i = 1; i < n; i += 2) {
                spec.locals.push_back(PauliString::from_sites(n, {{i, op}, {(i + 2) % n, op}}));
            }
            spec.globals.push_back(odd_parity(n));
            break;
        }
        case TargetKind::ToricCode: {
            require(lat.kind() == LatticeKind::Lieb, "toric code target needs a Lieb lattice");
            long m = static_cast<long>(lat.size());
            for (long X = 0; X < 2 * m; X += 2) {
                for (long Y = 0; Y < 2 * m; Y += 2) {
                    spec.locals.push_back(PauliString::from_sites(n,
                                                                  {{lat.lieb_site(X - 1, Y), Pauli::Z},
                                                                   {lat.lieb_site(X + 1, Y), Pauli::Z},
                                                                   {lat.lieb_site(X, Y - 1), Pauli::Z},
                                                                   {lat.lieb_site(X, Y + 1), Pauli::Z}}));
                }
            }
            spec.num_vertex = spec.locals.size();
            for (long X = 1; X < 2 * m; X += 2) {
                for (long Y = 1; Y < 2 * m; Y += 2) {
                    spec.locals.push_back(PauliString::from_sites(n,
                                                                  {{lat.lieb_site(X - 1, Y), Pauli::X},
                                                                   {lat.lieb_site(X + 1, Y), Pauli::X},
                                                                   {lat.lieb_site(X, Y - 1), Pauli::X},
                                                                   {lat.lieb_site(X, Y + 1), Pauli::X}}));
                }
            }
            for (long Y = 0; Y < 2 * m; Y += 2) {
                std::vector<std::size_t> row;
                for (long X = 1; X < 2 * m; X += 2) {
                    row.push_back(lat.lieb_site(X, Y));
                }
                spec.globals.push_back(PauliString::from_sites(n, row, Pauli::X));
            }
            for (long X = 0; X < 2 * m; X += 2) {
                std::vector<std::size_t> col;
                for (long Y = 1; Y < 2 * m; Y += 2) {
                    col.push_back(lat.lieb_site(X, Y));
                }
                spec.globals.push_back(PauliString::from_sites(n, col, Pauli::X));
            }
            break;
        }
        case TargetKind::XuMoore: {
            require(lat.kind() == LatticeKind::Square, "Xu-Moore target needs a square lattice");
            long m = static_cast<long>(lat.size());
            for (long x = 0; x < m; ++x) {
                for (long y = 0; y < m; ++y) {
                    if ((x + y) % 2 != 0) {
                        continue;
                    }
                    spec.locals.push_back(PauliString::from_sites(n,
                                                                  {{lat.square_site(x - 1, y), Pauli::Z},
                                                                   {lat.square_site(x + 1, y), Pauli::Z},
                                                                   {lat.square_site(x, y - 1), Pauli::Z},
                                                                   {lat.square_site(x, y + 1), Pauli::Z}}));
                }
            }
            for (long c = 1; c < m; c += 2) {
                std::vector<std::size_t> diag, anti;
                for (long i = 0; i < m; ++i) {
                    diag.push_back(lat.square_site(i, i + c));
                    anti.push_back(lat.square_site(i, c - i));
                }
                spec.globals.push_back(PauliString::from_sites(n, diag, Pauli::X));
                spec.globals.push_back(PauliString::from_sites(n, anti, Pauli::X));
            }
            break;
        }
    }
    return spec;
}

namespace {

template <typename State, typename Pred>
bool all_present(const State &s, const std::vector<PauliString> &strings, Pred present) {
    for (const auto &p : strings) {
        if (!present(s, p)) {
            return false;
        }
    }
    return true;
}

void check_size(std::size_t n, const TargetSpec &spec) {
    if (n != spec.num_qubits) {
        throw std::invalid_argument("target spec does not match the state size");
    }
}

bool qs_present(const QuantumState &s, const PauliString &p) {
    return s.stabilized_by(p);
}

bool tab_present(const Tableau &t, const PauliString &p) {
    return t.contains_unsigned(p);
}

}  // namespace

bool detect_local(const QuantumState &state, const TargetSpec &spec) {
    check_size(state.num_qubits(), spec);
    return all_present(state, spec.locals, qs_present);
}

bool detect_global(const QuantumState &state, const TargetSpec &spec) {
    check_size(state.num_qubits(), spec);
    return all_present(state, spec.globals, qs_present);
}

bool detect_target(const QuantumState &state, const TargetSpec &spec) {
    return detect_local(state, spec) && detect_global(state, spec);
}

bool detect_local(const Tableau &t, const TargetSpec &spec) {
    check_size(t.num_qubits(), spec);
    return all_present(t, spec.locals, tab_present);
}

bool detect_global(const Tableau &t, const TargetSpec &spec) {
    check_size(t.num_qubits(), spec);
    return all_present(t, spec.globals, tab_present);
}

bool detect_target(const Tableau &t, const TargetSpec &spec) {
    return detect_local(t, spec) && detect_global(t, spec);
}

double mean_abs_expectation(const QuantumState &state, const std::vector<PauliString> &strings) {
    if (strings.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    bool clifford = state.backend() == Backend::Stabilizer;
    for (const auto &p : strings) {
        acc += clifford ? (state.tableau().contains_unsigned(p) ? 1.0 : 0.0) : std::abs(state.expectation(p));
    }
    return acc / static_cast<double>(strings.size());
}

ToricSector toric_sector(const Tableau &t, const TargetSpec &spec) {
    if (spec.kind != TargetKind::ToricCode) {
        throw std::invalid_argument("toric_sector needs a toric code target");
    }
    check_size(t.num_qubits(), spec);
    ToricSector out;
    for (std::size_t k = 0; k < spec.locals.size(); ++k) {
        int e = t.expectation(spec.locals[k]);
        if (e == 0) {
            throw std::logic_error("toric code stabilizers are not all present yet");
        }
        (k < spec.num_vertex ? out.vertex_signs : out.plaquette_signs).push_back(e);
    }
    return out;
}

std::vector<PauliString> yy_pairs(const Lattice &lat) {
    std::size_t n = lat.num_sites();
    std::vector<PauliString> out;
    switch (lat.kind()) {
        case LatticeKind::Chain:
            for (std::size_t i = 1; i < n; i += 2) {
                out.push_back(PauliString::from_sites(n, {{i, Pauli::Y}, {(i + 2) % n, Pauli::Y}}));
            }
            break;
        case LatticeKind::Lieb:
        case LatticeKind::Square:
            for (auto r : lat.measured_sites()) {
                auto [X, Y] = lat.coordinates(r);
                auto site = [&](long a, long b) {
                    return lat.kind() == LatticeKind::Lieb ? lat.lieb_site(a, b) : lat.square_site(a, b);
                };
                out.push_back(PauliString::from_sites(n, {{site(X - 1, Y), Pauli::Y}, {site(X + 1, Y), Pauli::Y}}));
                out.push_back(PauliString::from_sites(n, {{site(X, Y - 1), Pauli::Y}, {site(X, Y + 1), Pauli::Y}}));
            }
            break;
    }
    return out;
}

}  // namespace stochlre
