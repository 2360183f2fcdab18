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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stochlre/detectors.h"
#include "stochlre/lattice.h"
#include "stochlre/quantum_state.h"
#include "stochlre/rng.h"

namespace stochlre {

enum class GateSet { ZZ, ZZplusXX };
/// Which brick-work sublayer of the non-commuting chain circuit goes first.
enum class BrickOrder { EvenFirst, OddFirst };

std::string to_string(GateSet g);
GateSet parse_gate_set(const std::string &text);
std::string to_string(BrickOrder b);
BrickOrder parse_brick_order(const std::string &text);

struct ProtocolParams {
    double p_u = 1.0;
    double p_m = 1.0;
    double theta = 1.0;
    double gamma_x = 0.0;
    GateSet gate_set = GateSet::ZZ;
    bool decoder = false;
    /// Fidelity target phi; when set, unitaries stop after halting_layer().
    std::optional<double> halting_phi;
    std::uint64_t t_max = 1'000'000;
    std::uint64_t seed = 0;
    Backend backend = Backend::Stabilizer;
    BrickOrder brick_order = BrickOrder::EvenFirst;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate(const Lattice &lattice) const;
    /// Last layer with unitaries under halting (0 when halting is off).
    std::uint64_t halt_layer(const Lattice &lattice) const;
};

/// Per-site outcome of one measurement sublayer: +1, -1, or 0 if unmeasured.
using Outcomes = std::vector<int>;

/// Commuting ZZ layer on any lattice: every edge with probability p_u (or one
/// Hamiltonian step when gamma_x != 0), then X on measured sites with p_m.
Outcomes step_commuting(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                        bool unitaries = true);
Outcomes step_chain(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                    RngStream &rng, bool unitaries = true);
Outcomes step_lieb(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                   RngStream &rng, bool unitaries = true);
Outcomes step_square(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                     RngStream &rng, bool unitaries = true);
/// Brick-work exp(-i pi/4 XX) exp(-i pi/4 ZZ) on the ring.
Outcomes step_chain_noncommuting(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                                 bool unitaries = true);
/// Four sublayers of XX*ZZ gates around every red Lieb site.
Outcomes step_lieb_noncommuting(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                                bool unitaries = true);
/// Picks the step for the lattice kind and gate set.
Outcomes step_layer(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                    RngStream &rng, bool unitaries = true);

/// Decoder block after a measurement sublayer. Every even site whose outcome
/// is -1 (or, if unmeasured, a fair coin says so) gets ZZ on both bonds with
/// probability p_u each, then an X measurement with probability p_m.
/// `outcomes` is updated with the decoder's measurements.
void decoder_step(QuantumState &state, const Lattice &lat, const ProtocolParams &params, Outcomes &outcomes,
                  RngStream &rng);

/// X flips on odd sites that make every Z_i Z_{i+2} sign +1, given the last
/// outcome on each even site of an exact-protocol run. Throws if an even site
/// has no recorded outcome.
void ghz_sign_fix(Tableau &t, const Lattice &lat, const Outcomes &last_outcomes);
void ghz_sign_fix(QuantumState &state, const Lattice &lat, const Outcomes &last_outcomes);

struct ObservableSet {
    bool entropy = false;   // half-system entropy
    bool locals = false;    // mean |<local>| of the target
    bool globals = false;   // mean |<global>| of the target
    bool i2 = false;        // chain only: two antipodal odd sites
    bool i3 = false;        // quarters / strips
    bool yy = false;        // mean |<YY>| pairs

    bool any() const {
        return entropy || locals || globals || i2 || i3 || yy;
    }
};

struct RecordOptions {
    std::optional<TargetKind> target;  // default_target(lattice) if unset
    bool detect = true;
    /// Stop once the target fires. Ignored when fixed_layers > 0.
    bool stop_at_target = true;
    /// Run exactly this many layers (0: run until stopping or t_max).
    std::uint64_t fixed_layers = 0;
    /// Sample the series every `series_stride` layers, starting at layer 0.
    std::uint64_t series_stride = 0;
    ObservableSet series;
    /// Time-average `steady` observables over layers >= steady_start.
    std::uint64_t steady_start = std::numeric_limits<std::uint64_t>::max();
    ObservableSet steady;
    bool keep_outcomes = false;
};

inline constexpr double kNotSampled = std::numeric_limits<double>::quiet_NaN();

struct Sample {
    std::uint64_t layer = 0;
    double entropy = kNotSampled;
    double locals = kNotSampled;
    double globals = kNotSampled;
    double i2 = kNotSampled;
    double i3 = kNotSampled;
    double yy = kNotSampled;
};

struct TrajectoryRecord {
    std::uint64_t trajectory_id = 0;
    std::optional<std::uint64_t> tau_zz;
    std::optional<std::uint64_t> tau_z2;
    std::optional<std::uint64_t> tau;
    /// t_max reached before the target fired.
    bool censored = false;
    /// Halting froze the state without the target.
    bool halting_failure = false;
    std::uint64_t layers_run = 0;
    std::uint64_t halt_layer = 0;
    std::vector<Sample> series;
    /// Time averages over the steady window (NaN where not requested).
    Sample steady;
    std::uint64_t steady_layers = 0;
    bool final_local = false;
    bool final_global = false;
    /// Last recorded outcome per site (0 if never measured).
    Outcomes last_outcomes;
    /// Outcomes per layer, decoder measurements included (keep_outcomes).
    std::vector<Outcomes> outcome_history;
};

/// Samples the requested observables on `state`.
Sample sample_observables(const QuantumState &state, const Lattice &lat, const TargetSpec &spec,
                          const ObservableSet &which, std::uint64_t layer);

/// Sites used for the two-site mutual information on the chain.
std::pair<std::size_t, std::size_t> antipodal_pair(const Lattice &lat);

/// One trajectory from the all-minus state with RngStream(params.seed, id).
TrajectoryRecord run_trajectory(const Lattice &lat, const ProtocolParams &params, const RecordOptions &options,
                                std::uint64_t trajectory_id);

}  // namespace stochlre
