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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stochlre/tableau.h"

namespace stochlre {

struct ValidationCase {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::string suite;
    std::vector<ValidationCase> cases;

    bool pass() const;
    std::size_t failures() const;
};

/// Stabilizer and dense backends driven by the same random stream on chains
/// of n <= 8 sites: outcome histories must agree exactly and entropies, I2
/// and I3 to `tolerance` at every layer.
ValidationReport validate_tableau_vs_dense(std::size_t trajectories, std::uint64_t seed, double tolerance = 1e-8);

/// Markov state 1..6 of a 3-qubit tableau (unsigned stabilizer group), or 0
/// if it is none of the six.
int classify_markov_state(const Tableau &t);

/// Occupancy of the six states after t = 0..t_max steps of the 3-qubit
/// circuit, estimated from `runs` trajectories. Entry [t][k] is the fraction
/// in state k + 1; unclassified states are counted in `unclassified`.
struct MarkovOccupancy {
    std::vector<std::array<double, 6>> fraction;
    std::size_t unclassified = 0;
    std::size_t runs = 0;
};
MarkovOccupancy simulate_markov_occupancy(double p_u, double p_m, std::size_t t_max, std::size_t runs,
                                          std::uint64_t seed);

/// A^t e_1 against the 3-qubit simulation, every state and t <= t_max, at
/// `sigmas` binomial standard deviations; plus column sums of A for random
/// parameters.
ValidationReport validate_markov_vs_mc(std::size_t runs, std::size_t t_max, std::uint64_t seed, double sigmas = 3.0);

/// Branch-enumerated E|<Z_1 Z_3>| after one noisy 3-qubit step is at least
/// its value before, for random states and the given theta values.
ValidationReport validate_monotonicity(std::size_t states, const std::vector<double> &thetas, std::uint64_t seed,
                                       double slack = 1e-12);

/// Internal consistency of the analytic predictions: PMF normalization, the
/// large-t tail, closed forms where they hold, asymptotes, p_X, Table I.
ValidationReport validate_analytics_closed_forms();

/// Dispatch by suite name: tableau-vs-dense, markov-vs-mc, monotonicity,
/// analytics-closed-forms.
ValidationReport run_validation_suite(const std::string &suite, std::uint64_t seed, std::size_t size_hint = 0);
std::vector<std::string> validation_suites();

}  // namespace stochlre
