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
#include "stochlre/analytics.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stochlre/rng.h"

namespace stochlre {

namespace {

constexpr std::int64_t kMaxTerms = 100'000'000;

void require_probability(double p, const char *name, bool allow_zero, bool allow_one) {
    if (!(p >= 0.0 && p <= 1.0) || (!allow_zero && p == 0.0) || (!allow_one && p == 1.0)) {
        throw std::invalid_argument(std::string(name) + " = " + std::to_string(p) + " is outside its domain");
    }
}

void require_even_chain(std::size_t L) {
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("chain length must be even and positive");
    }
}

/// 1 - G for the second largest of n draws, given the base survival r = 1 - F:
/// the probability that at least two draws survive. Small r uses the binomial
/// tail directly, which keeps full relative precision far out in t.
double second_largest_survival(double r, std::size_t n) {
    if (n == 1 || r <= 0.0) {
        return 0.0;
    }
    if (r >= 1.0) {
        return 1.0;
    }
    double nd = static_cast<double>(n);
    if (nd * r < 0.1) {
        // sum_{k>=2} C(n,k) r^k (1-r)^{n-k}
        double term = 0.5 * nd * (nd - 1) * r * r * std::exp((nd - 2) * std::log1p(-r));
        double sum = 0.0;
        for (std::size_t k = 2; k <= n && term > 0.0; ++k) {
            sum += term;
            if (term < 1e-18 * sum) {
                break;
            }
            term *= (nd - static_cast<double>(k)) / static_cast<double>(k + 1) * r / (1 - r);
        }
        return sum;
    }
    double nm1 = nd - 1;
    return -std::expm1(nm1 * std::log1p(-r) + std::log1p(nm1 * r));
}

/// sum_{t>=0} (1 - G(F(t))) for a base survival 1 - F(t) supplied step by step.
template <typename NextR>
double tail_sum(std::size_t n, NextR next_r) {
    double sum = 0.0;
    for (std::int64_t t = 0; t < kMaxTerms; ++t) {
        double term = second_largest_survival(next_r(), n);
        sum += term;
        if (term < 1e-17 || (t > 16 && term < 1e-16 * sum)) {
            return sum;
        }
    }
    throw std::runtime_error("order-statistic sum did not converge");
}

/// (1-p)^{t+1}, exact at p = 1.
double geometric_survival(std::int64_t t, double p) {
    if (p == 1.0) {
        return 0.0;
    }
    return std::exp(static_cast<double>(t + 1) * std::log1p(-p));
}

}  // namespace

double tau_naive(std::size_t L, double p) {
    require_even_chain(L);
    require_probability(p, "p", false, false);
    return std::log(2.0 / static_cast<double>(L)) / std::log1p(-p);
}

double second_largest_cdf_from(double F, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("need at least one draw");
    }
    if (n == 1) {
        return 1.0;
    }
    double nm1 = static_cast<double>(n - 1);
    return std::pow(F, nm1) * (1.0 + nm1 * (1.0 - F));
}

double second_largest_cdf(std::int64_t t, std::size_t n, double p) {
    require_probability(p, "p", false, true);
    if (t < 0) {
        return 0.0;
    }
    if (n == 0) {
        throw std::invalid_argument("need at least one draw");
    }
    return 1.0 - second_largest_survival(geometric_survival(t, p), n);
}

double order_statistic_cdf(std::int64_t t, std::size_t L, double p) {
    require_even_chain(L);
    return second_largest_cdf(t, L / 2, p);
}

double order_statistic_pmf(std::int64_t t, std::size_t L, double p) {
    require_even_chain(L);
    require_probability(p, "p", false, true);
    if (t < 0) {
        return 0.0;
    }
    // Difference of survivals, not of CDFs, so the far tail stays accurate.
    double before = t == 0 ? 1.0 : second_largest_survival(geometric_survival(t - 1, p), L / 2);
    return before - second_largest_survival(geometric_survival(t, p), L / 2);
}

double second_largest_mean(std::size_t n, double p) {
    require_probability(p, "p", false, true);
    if (p == 1.0 || n == 1) {
        return 0.0;
    }
    std::int64_t t = 0;
    return tail_sum(n, [&] { return geometric_survival(t++, p); });
}

double mean_time_pm1(std::size_t L, double p_u) {
    require_even_chain(L);
    require_probability(p_u, "p_u", false, true);
    return second_largest_mean(L / 2, p_u * p_u) + 1.0;
}

double mean_time_pu1(std::size_t L, double p_m) {
    require_even_chain(L);
    require_probability(p_m, "p_m", false, true);
    return 2.0 * second_largest_mean(L / 2, p_m) + 1.0;
}

double mean_time_lieb(std::size_t L, double p_m) {
    if (L < 1) {
        throw std::invalid_argument("Lieb size must be positive");
    }
    require_probability(p_m, "p_m", false, true);
    return 2.0 * second_largest_mean(L * L, p_m) + 1.0;
}

double log_mean_time(std::size_t L, double p) {
    require_even_chain(L);
    require_probability(p, "p", false, false);
    return (std::log(2.0 / static_cast<double>(L)) - std::numbers::egamma + 1.0) / std::log1p(-p) + 0.5;
}

double tau_fidelity(double phi, double p, std::size_t L) {
    if (!(phi > 0.0 && phi < 1.0)) {
        throw std::invalid_argument("fidelity must lie strictly between 0 and 1");
    }
    require_probability(p, "p", false, true);
    if (L < 4) {
        throw std::invalid_argument("tau_fidelity needs L >= 4");
    }
    double Ld = static_cast<double>(L);
    return 0.5 * std::log(8.0 * (1.0 - phi) / (Ld * (Ld - 2.0))) / std::log1p(-p) - 1.0;
}

std::uint64_t halting_layer(double phi, double p_u, double p_m, std::size_t L) {
    double t = std::ceil(2.0 * tau_fidelity(phi, p_u * p_u * p_m, L) + 4.0);
    return static_cast<std::uint64_t>(std::max(1.0, t));
}

std::array<double, 6> MarkovChain::apply(const std::array<double, 6> &v) const {
    std::array<double, 6> out{};
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            out[i] += a[i][j] * v[j];
        }
    }
    return out;
}

std::array<double, 6> MarkovChain::occupancy(std::uint64_t t) const {
    std::array<double, 6> v{1, 0, 0, 0, 0, 0};
    for (std::uint64_t k = 0; k < t; ++k) {
        v = apply(v);
    }
    return v;
}

MarkovChain markov_chain(double p_u, double p_m) {
    require_probability(p_u, "p_u", true, true);
    require_probability(p_m, "p_m", true, true);
    double pu = p_u, pm = p_m, qu = 1 - p_u, qm = 1 - p_m;
    MarkovChain m;
    m.p_u = p_u;
    m.p_m = p_m;
    double mix = pm * pu * pu + pm * qu * qu + pu * qu;
    m.a = {{
        {2 * pm * pu * qu + qu * qu, mix, mix, 2 * pm * qu * pu + pu * pu, 0, 0},
        {qm * qu * pu, qm * qu * qu, qm * pu * pu, qm * qu * pu, 0, 0},
        {qm * qu * pu, qm * pu * pu, qm * qu * qu, qm * qu * pu, 0, 0},
        {qm * pu * pu, qm * qu * pu, qm * qu * pu, qm * qu * qu, 0, 0},
        {pm * pu * pu, pm * qu * pu, pm * qu * pu, pm * qu * qu, 2 * pm * pu * qu + pu * pu + qu * qu,
         pm * pu * pu + pm * qu * qu + 2 * pu * qu},
        {0, 0, 0, 0, 2 * qm * qu * pu, qm * pu * pu + qm * qu * qu},
    }};
    return m;
}

double cdf_zz(std::uint64_t t, double p_u, double p_m) {
    auto v = markov_chain(p_u, p_m).occupancy(t);
    return v[4] + v[5];
}

double transient_spectral_radius(double p_u, double p_m) {
    auto m = markov_chain(p_u, p_m);
    Eigen::Matrix4d T;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            T(i, j) = m.a[i][j];
        }
    }
    Eigen::EigenSolver<Eigen::Matrix4d> es(T, false);
    double r = 0.0;
    for (int i = 0; i < 4; ++i) {
        r = std::max(r, std::abs(es.eigenvalues()(i)));
    }
    return r;
}

double p_x(double p_u, double p_m) {
    require_probability(p_u, "p_u", true, true);
    require_probability(p_m, "p_m", true, true);
    double g = p_u * (1 - p_u);
    double den = p_m + 4 * (1 - p_m) * g;
    if (den == 0.0) {
        throw std::domain_error("p_X is undefined when p_m = 0 and p_u is 0 or 1");
    }
    return (p_m + 2 * (1 - p_m) * g) / den;
}

double tau_z2(std::size_t L, double p_u, double p_m) {
    require_even_chain(L);
    return std::pow(p_x(p_u, p_m), -0.5 * static_cast<double>(L));
}

double mean_tau_zz(std::size_t L, double p_u, double p_m) {
    require_even_chain(L);
    auto m = markov_chain(p_u, p_m);
    if (p_u == 0.0) {
        throw std::invalid_argument("no local stabilizer ever forms at p_u = 0");
    }
    std::array<double, 6> v{1, 0, 0, 0, 0, 0};
    // P(T > t) for t = 0, 1, ... uses F_ZZ(t); T >= 1 because F_ZZ(0) = 0.
    bool first = true;
    return tail_sum(L / 2, [&] {
        if (!first) {
            v = m.apply(v);
        }
        first = false;
        return v[0] + v[1] + v[2] + v[3];
    });
}

double combined_mean_time(std::size_t L, double p_u, double p_m) {
    return mean_tau_zz(L, p_u, p_m) + tau_z2(L, p_u, p_m) - 1.0;
}

double log_coefficient(double p_u, double p_m) {
    double r = transient_spectral_radius(p_u, p_m);
    if (!(r > 0.0 && r < 1.0)) {
        throw std::domain_error("transient block has no decay rate here");
    }
    return -1.0 / std::log(r);
}

double log_coefficient_naive(double p_u, double p_m) {
    double p = p_u * p_u * p_m;
    require_probability(p, "p_u^2 p_m", false, false);
    return -1.0 / std::log1p(-p);
}

std::vector<LocalCircuitRow> local_circuit_table(double p_u, double p_m) {
    require_probability(p_u, "p_u", true, true);
    require_probability(p_m, "p_m", true, true);
    double pu = p_u, pm = p_m, qu = 1 - p_u, qm = 1 - p_m;
    return {
        {1, pu * pu * pm, true, true, true, "X_2", "X_2", false},
        {2, pu * qu * pm, true, false, true, "X_2", "X_2", false},
        {3, pu * qu * pm, false, true, true, "X_2", "X_2", false},
        {4, qu * qu * pm, false, false, true, "X_2", "X_2", true},
        {5, pu * pu * qm, true, true, false, "X_2", "Y_2 Z_3", false},
        {6, pu * qu * qm, true, false, false, "Y_2 Z_3", "X_2", false},
        {7, pu * qu * qm, false, true, false, "Y_2 Z_3", "X_2", false},
        {8, qu * qu * qm, false, false, false, "X_2", "Y_2 Z_3", false},
    };
}

double decoder_success_probability(double p_u, double p_m) {
    auto rows = local_circuit_table(p_u, p_m);
    return rows[0].probability + rows[3].probability + 0.5 * rows[7].probability;
}

namespace {

/// Z-type A_diamond vectors over the blue sites of an L x L torus, one per
/// red site, plus the linear relations used by the single-pass rule.
struct CoinGeometry {
    std::size_t coins = 0;
    std::size_t words = 0;
    std::vector<std::vector<std::uint64_t>> vectors;
    std::vector<std::vector<std::size_t>> relations;
};

CoinGeometry coin_geometry(std::size_t L) {
    CoinGeometry g;
    long n = static_cast<long>(L);
    auto wrap = [n](long v) { return ((v % n) + n) % n; };
    auto blue_index = [&](long x, long y) {
        x = wrap(x);
        y = wrap(y);
        return static_cast<std::size_t>((x * n + y) / 2);
    };
    auto red_index = [&](long x, long y) { return blue_index(x, y); };
    std::size_t blues = L * L / 2;
    g.coins = L * L / 2;
    g.words = (blues + 63) / 64;
    g.vectors.assign(g.coins, std::vector<std::uint64_t>(g.words, 0));
    for (long x = 0; x < n; ++x) {
        for (long y = 0; y < n; ++y) {
            if ((x + y) % 2 != 0) {
                continue;
            }
            auto &v = g.vectors[red_index(x, y)];
            for (auto [dx, dy] : {std::pair{-1, 0}, std::pair{1, 0}, std::pair{0, -1}, std::pair{0, 1}}) {
                std::size_t b = blue_index(x + dx, y + dy);
                v[b >> 6] ^= std::uint64_t{1} << (b & 63);
            }
        }
    }
    // Diagonal relations in both orientations.
    for (long c = 0; c < n; c += 2) {
        std::vector<std::size_t> diag, anti;
        for (long i = 0; i < n; ++i) {
            diag.push_back(red_index(i, i + c));
            anti.push_back(red_index(i, c - i));
        }
        g.relations.push_back(diag);
        g.relations.push_back(anti);
    }
    // Remaining relations: a kernel basis of the coin -> blue map, found by
    // elimination on [vectors | identity].
    std::size_t cols = blues + g.coins;
    std::size_t stride = (cols + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(g.coins, std::vector<std::uint64_t>(stride, 0));
    for (std::size_t r = 0; r < g.coins; ++r) {
        for (std::size_t b = 0; b < blues; ++b) {
            if ((g.vectors[r][b >> 6] >> (b & 63)) & 1) {
                rows[r][b >> 6] |= std::uint64_t{1} << (b & 63);
            }
        }
        std::size_t c = blues + r;
        rows[r][c >> 6] |= std::uint64_t{1} << (c & 63);
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < blues && rank < g.coins; ++c) {
        std::size_t piv = rank;
        while (piv < g.coins && !((rows[piv][c >> 6] >> (c & 63)) & 1)) {
            ++piv;
        }
        if (piv == g.coins) {
            continue;
        }
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = 0; r < g.coins; ++r) {
            if (r != rank && ((rows[r][c >> 6] >> (c & 63)) & 1)) {
                for (std::size_t k = 0; k < stride; ++k) {
                    rows[r][k] ^= rows[rank][k];
                }
            }
        }
        ++rank;
    }
    for (std::size_t r = rank; r < g.coins; ++r) {
        std::vector<std::size_t> rel;
        for (std::size_t k = 0; k < g.coins; ++k) {
            std::size_t c = blues + k;
            if ((rows[r][c >> 6] >> (c & 63)) & 1) {
                rel.push_back(k);
            }
        }
        g.relations.push_back(rel);
    }
    return g;
}

/// Reduces v against an XOR basis kept as (pivot bit, vector) pairs.
bool reduces_to_zero(std::vector<std::uint64_t> v,
                     const std::vector<std::pair<std::size_t, std::vector<std::uint64_t>>> &basis) {
    for (const auto &[pivot, b] : basis) {
        if ((v[pivot >> 6] >> (pivot & 63)) & 1) {
            for (std::size_t k = 0; k < v.size(); ++k) {
                v[k] ^= b[k];
            }
        }
    }
    return std::all_of(v.begin(), v.end(), [](std::uint64_t w) { return w == 0; });
}

void insert_basis(std::vector<std::uint64_t> v, std::vector<std::pair<std::size_t, std::vector<std::uint64_t>>> &basis) {
    for (const auto &[pivot, b] : basis) {
        if ((v[pivot >> 6] >> (pivot & 63)) & 1) {
            for (std::size_t k = 0; k < v.size(); ++k) {
                v[k] ^= b[k];
            }
        }
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k]) {
            std::size_t pivot = k * 64 + static_cast<std::size_t>(__builtin_ctzll(v[k]));
            // Keep the basis fully reduced so a single sweep suffices.
            for (auto &[p, b] : basis) {
                if ((b[pivot >> 6] >> (pivot & 63)) & 1) {
                    for (std::size_t j = 0; j < b.size(); ++j) {
                        b[j] ^= v[j];
                    }
                }
            }
            basis.emplace_back(pivot, std::move(v));
            return;
        }
    }
}

std::uint64_t run_coins(const CoinGeometry &g, double p_m, RngStream &rng, CoinDeduction mode) {
    std::vector<char> heads(g.coins, 0);
    std::size_t count = 0;
    std::vector<std::pair<std::size_t, std::vector<std::uint64_t>>> basis;
    for (std::uint64_t round = 1;; ++round) {
        std::vector<std::size_t> fresh;
        for (std::size_t c = 0; c < g.coins; ++c) {
            if (!heads[c] && rng.bernoulli(p_m)) {
                fresh.push_back(c);
            }
        }
        for (auto c : fresh) {
            heads[c] = 1;
            ++count;
            if (mode == CoinDeduction::Closure) {
                insert_basis(g.vectors[c], basis);
            }
        }
        if (mode == CoinDeduction::Closure) {
            for (std::size_t c = 0; c < g.coins; ++c) {
                if (!heads[c] && reduces_to_zero(g.vectors[c], basis)) {
                    heads[c] = 1;
                    ++count;
                }
            }
        } else {
            std::vector<char> before = heads;
            for (const auto &rel : g.relations) {
                std::size_t missing = 0, which = 0;
                for (auto c : rel) {
                    if (!before[c]) {
                        ++missing;
                        which = c;
                    }
                }
                if (missing == 1 && !heads[which]) {
                    heads[which] = 1;
                    ++count;
                }
            }
        }
        if (count == g.coins) {
            return round;
        }
        if (round > 100'000'000) {
            throw std::runtime_error("coin toss did not terminate");
        }
    }
}

}  // namespace

std::uint64_t coin_toss_rounds(std::size_t L, double p_m, std::uint64_t seed, std::uint64_t run_id,
                               CoinDeduction mode) {
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("coin toss needs even L >= 2");
    }
    require_probability(p_m, "p_m", false, true);
    auto g = coin_geometry(L);
    RngStream rng(seed, run_id);
    return run_coins(g, p_m, rng, mode);
}

CoinTossResult coin_toss_square(std::size_t L, double p_m, std::uint64_t seed, std::size_t runs, CoinDeduction mode) {
    if (L < 2 || L % 2 != 0) {
        throw std::invalid_argument("coin toss needs even L >= 2");
    }
    require_probability(p_m, "p_m", false, true);
    if (runs < 2) {
        throw std::invalid_argument("coin toss needs at least two runs");
    }
    auto g = coin_geometry(L);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        RngStream rng(seed, r);
        double tau = 2.0 * static_cast<double>(run_coins(g, p_m, rng, mode)) - 1.0;
        sum += tau;
        sum2 += tau * tau;
    }
    double n = static_cast<double>(runs);
    double mean = sum / n;
    double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
    return {mean, std::sqrt(var / n), runs};
}

}  // namespace stochlre
