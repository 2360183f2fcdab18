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
#include "stochlre/protocols.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stochlre/analytics.h"

namespace stochlre {

std::string to_string(GateSet g) {
    return g == GateSet::ZZ ? "zz" : "zz+xx";
}

GateSet parse_gate_set(const std::string &text) {
    if (text == "zz") {
        return GateSet::ZZ;
    }
    if (text == "zz+xx" || text == "zzxx") {
        return GateSet::ZZplusXX;
    }
    throw std::invalid_argument("unknown gate set '" + text + "' (expected zz or zz+xx)");
}

std::string to_string(BrickOrder b) {
    return b == BrickOrder::EvenFirst ? "even-first" : "odd-first";
}

BrickOrder parse_brick_order(const std::string &text) {
    if (text == "even-first") {
        return BrickOrder::EvenFirst;
    }
    if (text == "odd-first") {
        return BrickOrder::OddFirst;
    }
    throw std::invalid_argument("unknown brick order '" + text + "'");
}

namespace {

void fail(const std::string &what) {
    throw std::invalid_argument(what);
}

bool in_unit_interval(double p) {
    return p >= 0.0 && p <= 1.0;
}

}  // namespace

void ProtocolParams::validate(const Lattice &lat) const {
    if (!in_unit_interval(p_u)) {
        fail("p_u must lie in [0, 1]");
    }
    if (!in_unit_interval(p_m)) {
        fail("p_m must lie in [0, 1]");
    }
    if (!std::isfinite(theta) || !std::isfinite(gamma_x)) {
        fail("theta and gamma_x must be finite");
    }
    bool non_clifford = theta != 1.0 || gamma_x != 0.0;
    if (non_clifford && backend != Backend::Dense) {
        fail("theta != 1 or gamma_x != 0 needs the dense backend");
    }
    if (backend == Backend::Dense && lat.num_sites() > StateVector::kMaxQubits) {
        fail("dense backend is limited to " + std::to_string(StateVector::kMaxQubits) + " qubits");
    }
    if (gamma_x != 0.0 && lat.kind() != LatticeKind::Chain) {
        fail("transverse field is only defined on the chain");
    }
    if (gate_set == GateSet::ZZplusXX) {
        if (non_clifford) {
            fail("the zz+xx gate set runs at theta = 1 without transverse field");
        }
        if (lat.kind() == LatticeKind::Square) {
            fail("zz+xx is defined for the chain and the Lieb lattice");
        }
    }
    if (decoder && (lat.kind() != LatticeKind::Chain || gate_set != GateSet::ZZ || gamma_x != 0.0)) {
        fail("the decoder needs the chain with zz gates and no transverse field");
    }
    if (halting_phi) {
        if (!(*halting_phi > 0.0 && *halting_phi < 1.0)) {
            fail("halting fidelity must lie strictly between 0 and 1");
        }
        if (lat.kind() != LatticeKind::Chain || gate_set != GateSet::ZZ) {
            fail("halting is defined for the zz chain protocol");
        }
        if (p_u == 0.0 || p_m == 0.0) {
            fail("halting needs p_u > 0 and p_m > 0");
        }
    }
    if (t_max == 0) {
        fail("t_max must be positive");
    }
}

std::uint64_t ProtocolParams::halt_layer(const Lattice &lat) const {
    if (!halting_phi) {
        return 0;
    }
    return halting_layer(*halting_phi, p_u, p_m, lat.size());
}

namespace {

void measurement_sublayer(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                          Outcomes &out) {
    for (auto q : lat.measured_sites()) {
        if (rng.bernoulli(params.p_m)) {
            out[q] = state.measure_x(q, rng.uniform()).value;
        }
    }
}

void require_kind(const Lattice &lat, LatticeKind kind, const char *who) {
    if (lat.kind() != kind) {
        throw std::invalid_argument(std::string(who) + ": wrong lattice kind " + to_string(lat.kind()));
    }
}

void noncommuting_gate(QuantumState &state, std::size_t a, std::size_t b) {
    state.zz(a, b);
    state.xx(a, b);
}

}  // namespace

Outcomes step_commuting(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                        bool unitaries) {
    Outcomes out(lat.num_sites(), 0);
    if (unitaries) {
        if (params.gamma_x != 0.0) {
            if (rng.bernoulli(params.p_u)) {
                auto h = HamiltonianSpec::ising_ring(lat.num_sites(), params.gamma_x);
                state.evolve(h, std::numbers::pi / 4 * params.theta);
            }
        } else {
            for (auto [a, b] : lat.edges()) {
                if (rng.bernoulli(params.p_u)) {
                    state.zz(a, b, params.theta);
                }
            }
        }
    }
    measurement_sublayer(state, lat, params, rng, out);
    return out;
}

Outcomes step_chain(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                    RngStream &rng, bool unitaries) {
    require_kind(lat, LatticeKind::Chain, "step_chain");
    if (layer == 0) {
        throw std::invalid_argument("layer indices start at 1");
    }
    return step_commuting(state, lat, params, rng, unitaries);
}

Outcomes step_lieb(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                   RngStream &rng, bool unitaries) {
    require_kind(lat, LatticeKind::Lieb, "step_lieb");
    if (layer == 0) {
        throw std::invalid_argument("layer indices start at 1");
    }
    return step_commuting(state, lat, params, rng, unitaries);
}

Outcomes step_square(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                     RngStream &rng, bool unitaries) {
    require_kind(lat, LatticeKind::Square, "step_square");
    if (layer == 0) {
        throw std::invalid_argument("layer indices start at 1");
    }
    return step_commuting(state, lat, params, rng, unitaries);
}

Outcomes step_chain_noncommuting(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                                 bool unitaries) {
    require_kind(lat, LatticeKind::Chain, "step_chain_noncommuting");
    std::size_t n = lat.num_sites();
    Outcomes out(n, 0);
    if (unitaries) {
        std::size_t first = params.brick_order == BrickOrder::EvenFirst ? 0 : 1;
        for (std::size_t offset : {first, 1 - first}) {
            for (std::size_t a = offset; a < n; a += 2) {
                if (rng.bernoulli(params.p_u)) {
                    noncommuting_gate(state, a, (a + 1) % n);
                }
            }
        }
    }
    measurement_sublayer(state, lat, params, rng, out);
    return out;
}

Outcomes step_lieb_noncommuting(QuantumState &state, const Lattice &lat, const ProtocolParams &params, RngStream &rng,
                                bool unitaries) {
    require_kind(lat, LatticeKind::Lieb, "step_lieb_noncommuting");
    Outcomes out(lat.num_sites(), 0);
    if (unitaries) {
        static constexpr long kDirs[4][2] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};
        for (const auto &d : kDirs) {
            for (auto red : lat.measured_sites()) {
                if (rng.bernoulli(params.p_u)) {
                    auto [X, Y] = lat.coordinates(red);
                    noncommuting_gate(state, red, lat.lieb_site(X + d[0], Y + d[1]));
                }
            }
        }
    }
    measurement_sublayer(state, lat, params, rng, out);
    return out;
}

Outcomes step_layer(QuantumState &state, const Lattice &lat, const ProtocolParams &params, std::uint64_t layer,
                    RngStream &rng, bool unitaries) {
    if (params.gate_set == GateSet::ZZplusXX) {
        switch (lat.kind()) {
            case LatticeKind::Chain:
                return step_chain_noncommuting(state, lat, params, rng, unitaries);
            case LatticeKind::Lieb:
                return step_lieb_noncommuting(state, lat, params, rng, unitaries);
            case LatticeKind::Square:
                break;
        }
        throw std::invalid_argument("zz+xx is not defined on the square lattice");
    }
    switch (lat.kind()) {
        case LatticeKind::Chain:
            return step_chain(state, lat, params, layer, rng, unitaries);
        case LatticeKind::Lieb:
            return step_lieb(state, lat, params, layer, rng, unitaries);
        case LatticeKind::Square:
            return step_square(state, lat, params, layer, rng, unitaries);
    }
    throw std::logic_error("unreachable lattice kind");
}

void decoder_step(QuantumState &state, const Lattice &lat, const ProtocolParams &params, Outcomes &outcomes,
                  RngStream &rng) {
    require_kind(lat, LatticeKind::Chain, "decoder_step");
    std::size_t n = lat.num_sites();
    if (outcomes.size() != n) {
        throw std::invalid_argument("decoder_step: outcome vector has the wrong length");
    }
    for (std::size_t i = 0; i < n; i += 2) {
        bool flagged = outcomes[i] == -1 || (outcomes[i] == 0 && rng.coin());
        if (!flagged) {
            continue;
        }
        if (rng.bernoulli(params.p_u)) {
            state.zz((i + n - 1) % n, i, params.theta);
        }
        if (rng.bernoulli(params.p_u)) {
            state.zz(i, (i + 1) % n, params.theta);
        }
        if (rng.bernoulli(params.p_m)) {
            outcomes[i] = state.measure_x(i, rng.uniform()).value;
        }
    }
}

void ghz_sign_fix(Tableau &t, const Lattice &lat, const Outcomes &last) {
    require_kind(lat, LatticeKind::Chain, "ghz_sign_fix");
    std::size_t n = lat.num_sites();
    if (last.size() != n || t.num_qubits() != n) {
        throw std::invalid_argument("ghz_sign_fix: size mismatch");
    }
    for (std::size_t j = 0; j < n; j += 2) {
        if (last[j] != 1 && last[j] != -1) {
            throw std::invalid_argument("ghz_sign_fix: no outcome recorded on site " + std::to_string(j));
        }
    }
    // Z_i Z_{i+2} carries the sign of the last outcome on site i+1.
    bool flip = false;
    for (std::size_t i = 1; i < n; i += 2) {
        if (flip) {
            t.x(i);
        }
        if (i + 1 < n) {
            flip ^= last[i + 1] == -1;
        }
    }
}

void ghz_sign_fix(QuantumState &state, const Lattice &lat, const Outcomes &last) {
    if (state.backend() == Backend::Stabilizer) {
        ghz_sign_fix(state.tableau(), lat, last);
        return;
    }
    std::size_t n = lat.num_sites();
    for (std::size_t j = 0; j < n; j += 2) {
        if (j >= last.size() || (last[j] != 1 && last[j] != -1)) {
            throw std::invalid_argument("ghz_sign_fix: no outcome recorded on site " + std::to_string(j));
        }
    }
    bool flip = false;
    for (std::size_t i = 1; i < n; i += 2) {
        if (flip) {
            state.x(i);
        }
        if (i + 1 < n) {
            flip ^= last[i + 1] == -1;
        }
    }
}

std::pair<std::size_t, std::size_t> antipodal_pair(const Lattice &lat) {
    require_kind(lat, LatticeKind::Chain, "antipodal_pair");
    std::size_t j = 1 + lat.num_sites() / 2;
    if (j % 2 == 0) {
        --j;
    }
    return {1, j % lat.num_sites()};
}

Sample sample_observables(const QuantumState &state, const Lattice &lat, const TargetSpec &spec,
                          const ObservableSet &which, std::uint64_t layer) {
    Sample s;
    s.layer = layer;
    if (which.entropy) {
        s.entropy = state.entropy(lat.half());
    }
    if (which.locals) {
        s.locals = mean_abs_expectation(state, spec.locals);
    }
    if (which.globals) {
        s.globals = mean_abs_expectation(state, spec.globals);
    }
    if (which.i2) {
        auto [a, b] = antipodal_pair(lat);
        std::size_t ra[1] = {a}, rb[1] = {b};
        s.i2 = state.mutual_information_2(ra, rb);
    }
    if (which.i3) {
        auto q = lat.quarters();
        s.i3 = state.mutual_information_3(q[0], q[1], q[2]);
    }
    if (which.yy) {
        s.yy = mean_abs_expectation(state, yy_pairs(lat));
    }
    return s;
}

namespace {

void accumulate(Sample &sum, const Sample &x) {
    auto add = [](double &acc, double v) {
        if (!std::isnan(v)) {
            acc = std::isnan(acc) ? v : acc + v;
        }
    };
    add(sum.entropy, x.entropy);
    add(sum.locals, x.locals);
    add(sum.globals, x.globals);
    add(sum.i2, x.i2);
    add(sum.i3, x.i3);
    add(sum.yy, x.yy);
}

void divide(Sample &s, double n) {
    for (double *v : {&s.entropy, &s.locals, &s.globals, &s.i2, &s.i3, &s.yy}) {
        *v /= n;
    }
}

}  // namespace

TrajectoryRecord run_trajectory(const Lattice &lat, const ProtocolParams &params, const RecordOptions &options,
                                std::uint64_t trajectory_id) {
    params.validate(lat);
    TargetSpec spec = TargetSpec::make(options.target.value_or(default_target(lat.kind())), lat);
    RngStream rng(params.seed, trajectory_id);
    QuantumState state(params.backend, lat.num_sites());

    TrajectoryRecord rec;
    rec.trajectory_id = trajectory_id;
    rec.halt_layer = params.halt_layer(lat);
    rec.last_outcomes.assign(lat.num_sites(), 0);

    const bool fixed = options.fixed_layers > 0;
    const std::uint64_t limit = fixed ? options.fixed_layers : params.t_max;
    const bool sampling = options.series_stride > 0 && options.series.any();
    if (sampling) {
        rec.series.push_back(sample_observables(state, lat, spec, options.series, 0));
    }
    rec.steady.layer = options.steady_start;

    // Under halting: measured sites not yet measured since the unitaries stopped.
    std::vector<char> pending(lat.num_sites(), 0);
    std::size_t pending_count = 0;
    if (params.halting_phi) {
        for (auto q : lat.measured_sites()) {
            pending[q] = 1;
        }
        pending_count = lat.measured_sites().size();
    }

    for (std::uint64_t t = 1; t <= limit; ++t) {
        const bool unitaries = !params.halting_phi || t <= rec.halt_layer;
        Outcomes out = step_layer(state, lat, params, t, rng, unitaries);
        if (params.decoder && unitaries) {
            decoder_step(state, lat, params, out, rng);
        }
        for (std::size_t q = 0; q < out.size(); ++q) {
            if (out[q] != 0) {
                rec.last_outcomes[q] = out[q];
                if (!unitaries && pending[q]) {
                    pending[q] = 0;
                    --pending_count;
                }
            }
        }
        if (options.keep_outcomes) {
            rec.outcome_history.push_back(out);
        }
        rec.layers_run = t;

        if (options.detect) {
            bool local = detect_local(state, spec);
            bool global = detect_global(state, spec);
            if (local && !rec.tau_zz) {
                rec.tau_zz = t;
            }
            if (global && !rec.tau_z2) {
                rec.tau_z2 = t;
            }
            if (local && global && !rec.tau) {
                rec.tau = t;
            }
            rec.final_local = local;
            rec.final_global = global;
        }
        if (sampling && t % options.series_stride == 0) {
            rec.series.push_back(sample_observables(state, lat, spec, options.series, t));
        }
        if (t >= options.steady_start && options.steady.any()) {
            accumulate(rec.steady, sample_observables(state, lat, spec, options.steady, t));
            ++rec.steady_layers;
        }

        if (!fixed) {
            if (options.stop_at_target && rec.tau) {
                break;
            }
            if (params.halting_phi && !unitaries && pending_count == 0 && !rec.tau) {
                // Every measured site has been re-measured without unitaries:
                // the state can no longer change.
                rec.halting_failure = true;
                break;
            }
        }
    }
    if (!fixed && options.detect && !rec.tau && !rec.halting_failure) {
        rec.censored = true;
    }
    if (rec.steady_layers > 0) {
        divide(rec.steady, static_cast<double>(rec.steady_layers));
    }
    return rec;
}

}  // namespace stochlre
