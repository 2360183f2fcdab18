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

namespace stochlre {

/// log(2/L) / log(1 - p).
double tau_naive(std::size_t L, double p);

/// CDF of the second-largest of n i.i.d. geometric draws with base CDF
/// F(t) = 1 - (1-p)^{t+1}, t = 0, 1, ...
double second_largest_cdf(std::int64_t t, std::size_t n, double p);
/// Same statistic for a general base CDF value F.
double second_largest_cdf_from(double F, std::size_t n);

/// Order statistic for the chain: n = L/2 draws.
double order_statistic_cdf(std::int64_t t, std::size_t L, double p);
double order_statistic_pmf(std::int64_t t, std::size_t L, double p);

/// sum_{t>=0} (1 - CDF(t)) for the second-largest of n geometric(p) draws,
/// summed until the remaining tail is below 1e-14 relative.
double second_largest_mean(std::size_t n, double p);

/// Mean layers to the cat state at p_m = 1 (draw probability p_u^2).
double mean_time_pm1(std::size_t L, double p_u);
/// Mean layers at p_u = 1; only odd layers fix stabilizers, hence 2 E[T] + 1.
double mean_time_pu1(std::size_t L, double p_m);
/// Lieb lattice at p_u = 1: the second largest of L^2 draws, 2 E[T] + 1.
double mean_time_lieb(std::size_t L, double p_m);
/// Large-L form (log(2/L) - gamma + 1) / log(1 - p) + 1/2.
double log_mean_time(std::size_t L, double p);

/// Layers after which a fraction phi of runs has every local stabilizer:
/// (1/2) log(8 (1 - phi) / (L (L - 2))) / log(1 - p) - 1.
double tau_fidelity(double phi, double p, std::size_t L);
/// ceil(2 tau_fidelity(phi, p_u^2 p_m, L) + 4).
std::uint64_t halting_layer(double phi, double p_u, double p_m, std::size_t L);

/// Six-state transition matrix of a three-site cluster; a[i][j] is the
/// probability of the move j -> i (0-based states).
struct MarkovChain {
    double p_u = 0;
    double p_m = 0;
    std::array<std::array<double, 6>, 6> a{};

    std::array<double, 6> apply(const std::array<double, 6> &v) const;
    /// A^t e_1.
    std::array<double, 6> occupancy(std::uint64_t t) const;
};

MarkovChain markov_chain(double p_u, double p_m);
/// Probability that a cluster sits in state 5 or 6 after t layers.
double cdf_zz(std::uint64_t t, double p_u, double p_m);
/// Spectral radius of the transient block (states 1-4).
double transient_spectral_radius(double p_u, double p_m);

double p_x(double p_u, double p_m);
/// p_X^{-L/2}.
double tau_z2(std::size_t L, double p_u, double p_m);

/// Mean of the second largest of L/2 cluster completion times whose CDF is
/// cdf_zz (layers are 1-based).
double mean_tau_zz(std::size_t L, double p_u, double p_m);
/// mean_tau_zz + tau_z2 - 1: local stabilizers first, then a geometric wait
/// for the global parity.
double combined_mean_time(std::size_t L, double p_u, double p_m);

/// Coefficient of log(L/2) in the mean time without a decoder:
/// -1 / log(lambda) with lambda the transient spectral radius.
double log_coefficient(double p_u, double p_m);
/// -1 / log(1 - p_u^2 p_m).
double log_coefficient_naive(double p_u, double p_m);

/// One row of the three-qubit one-step circuit table.
struct LocalCircuitRow {
    int index;
    double probability;
    bool left_unitary;
    bool right_unitary;
    bool measured;
    std::string x2_image;
    std::string y2z3_image;
    bool deterministic;
};

std::vector<LocalCircuitRow> local_circuit_table(double p_u, double p_m);
/// Probability of a Z_{i-1} Z_{i+1} stabilizer after a perfect decoder:
/// rows 1, 4 and half of row 8.
double decoder_success_probability(double p_u, double p_m);

enum class CoinDeduction { Closure, SinglePass };

struct CoinTossResult {
    double mean_tau;
    double stderr_tau;
    std::size_t runs;
};

/// Square-lattice coin model: L^2/2 coins (one per A_diamond), each tails
/// turns heads with probability p_m per round; tails implied by heads are
/// turned as well. tau = 2 rounds - 1.
CoinTossResult coin_toss_square(std::size_t L,
                                double p_m,
                                std::uint64_t seed,
                                std::size_t runs,
                                CoinDeduction mode = CoinDeduction::Closure);
/// Rounds for one run (exposed for tests).
std::uint64_t coin_toss_rounds(std::size_t L, double p_m, std::uint64_t seed, std::uint64_t run_id,
                               CoinDeduction mode = CoinDeduction::Closure);

}  // namespace stochlre
