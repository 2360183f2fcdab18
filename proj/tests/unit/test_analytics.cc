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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stochlre/analytics.h"

using namespace stochlre;

namespace {

// Independent long-double evaluation of E[second largest of n geometric(p)
// draws] from the CDF F^n + n F^{n-1} (1 - F).
long double second_largest_mean_oracle(std::size_t n, long double p) {
    long double sum = 0;
    for (long t = 0; t < 200000; ++t) {
        long double F = 1 - std::pow(1 - p, static_cast<long double>(t + 1));
        long double cdf = std::pow(F, n) + n * std::pow(F, n - 1) * (1 - F);
        sum += 1 - cdf;
        if (1 - cdf < 1e-19L) {
            break;
        }
    }
    return sum;
}

}  // namespace

TEST_SUITE("analytics") {
    TEST_CASE("naive estimate") {
        CHECK(tau_naive(2, 0.3) == 0.0);
        CHECK(tau_naive(64, 0.36) == doctest::Approx(std::log(1.0 / 32) / std::log(0.64)));
        CHECK(tau_naive(128, 0.36) > tau_naive(64, 0.36));
        CHECK(tau_naive(64, 0.5) < tau_naive(64, 0.36));
        CHECK_THROWS(tau_naive(64, 0.0));
        CHECK_THROWS(tau_naive(7, 0.5));
    }

    TEST_CASE("order-statistic distribution") {
        for (std::size_t L : {4, 16, 100}) {
            for (double p : {0.05, 0.16, 0.6}) {
                double total = 0;
                for (std::int64_t t = 0; t < 5000; ++t) {
                    total += order_statistic_pmf(t, L, p);
                }
                CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
            }
        }
        // Large-t tail: pmf / (1-p)^{2t} -> (1/8)(L-2) L (2-p) p.
        const std::size_t L = 64;
        const double p = 0.16;
        auto t = static_cast<std::int64_t>(std::ceil(std::log(1e-12 / L) / std::log(1 - p)));
        double ratio = order_statistic_pmf(t, L, p) / std::pow(1 - p, 2.0 * static_cast<double>(t));
        CHECK(ratio == doctest::Approx(0.125 * (L - 2) * L * (2 - p) * p).epsilon(1e-6));
    }

    TEST_CASE("order-statistic pmf against explicit draws") {
        const std::size_t L = 100;
        const double p = 0.16;
        const int runs = 100000;
        std::mt19937_64 gen(12345);
        std::geometric_distribution<int> geo(p);
        std::vector<int> counts(400, 0);
        std::vector<int> draws(L / 2);
        for (int r = 0; r < runs; ++r) {
            for (auto &d : draws) {
                d = geo(gen);
            }
            std::nth_element(draws.begin(), draws.end() - 2, draws.end());
            ++counts[std::min(399, *(draws.end() - 2))];
        }
        int checked = 0;
        for (std::int64_t t = 0; t < 400; ++t) {
            double q = order_statistic_pmf(t, L, p);
            if (q * runs < 20) {
                continue;
            }
            double sigma = std::sqrt(runs * q * (1 - q));
            CHECK(std::abs(counts[static_cast<std::size_t>(t)] - runs * q) < 3 * sigma);
            ++checked;
        }
        CHECK(checked > 15);
    }

    TEST_CASE("mean times") {
        CHECK(mean_time_pm1(64, 1.0) == 1.0);
        CHECK(mean_time_pu1(64, 1.0) == 1.0);
        CHECK(mean_time_lieb(6, 1.0) == 1.0);
        for (std::size_t L : {8, 64, 512}) {
            for (double pu : {0.4, 0.6, 0.8}) {
                double want = static_cast<double>(second_largest_mean_oracle(L / 2, pu * pu)) + 1;
                CHECK(mean_time_pm1(L, pu) == doctest::Approx(want).epsilon(1e-10));
            }
            for (double pm : {0.4, 0.8}) {
                double want = 2 * static_cast<double>(second_largest_mean_oracle(L / 2, pm)) + 1;
                CHECK(mean_time_pu1(L, pm) == doctest::Approx(want).epsilon(1e-10));
            }
        }
        double lieb = 2 * static_cast<double>(second_largest_mean_oracle(36, 0.6)) + 1;
        CHECK(mean_time_lieb(6, 0.6) == doctest::Approx(lieb).epsilon(1e-10));
    }

    TEST_CASE("large-L asymptote") {
        const double p = 0.36;
        double prev = 1e9;
        for (int k = 10; k <= 14; ++k) {
            std::size_t L = std::size_t{1} << k;
            double gap = std::abs(mean_time_pm1(L, 0.6) - log_mean_time(L, p));
            CHECK(gap < 1e-2);
            CHECK(gap <= prev + 1e-12);
            prev = gap;
        }
        // Lieb form 2[log(1/L^2) - gamma + 1]/log(1 - p_m) approached for large L.
        const double gamma = std::numbers::egamma;
        double a64 = 2 * (std::log(1.0 / (64.0 * 64)) - gamma + 1) / std::log(1 - 0.5);
        CHECK(std::abs(mean_time_lieb(64, 0.5) - a64) < 1.5);
    }

    TEST_CASE("fidelity time and halting layer") {
        CHECK(tau_fidelity(0.999, 0.36, 64) > tau_fidelity(0.99, 0.36, 64));
        double want = 0.5 * std::log(8 * 0.01 / (64.0 * 62)) / std::log(1 - 0.36) - 1;
        CHECK(tau_fidelity(0.99, 0.36, 64) == doctest::Approx(want));
        double p = 0.8 * 0.8 * 0.8;
        auto h = halting_layer(0.99, 0.8, 0.8, 64);
        CHECK(h == static_cast<std::uint64_t>(std::ceil(2 * tau_fidelity(0.99, p, 64) + 4)));
        CHECK_THROWS(tau_fidelity(1.0, 0.3, 64));
    }

    TEST_CASE("six-state chain") {
        std::mt19937 gen(99);
        std::uniform_real_distribution<double> uni;
        for (int k = 0; k < 100; ++k) {
            auto mc = markov_chain(uni(gen), uni(gen));
            for (int j = 0; j < 6; ++j) {
                double col = 0;
                for (int i = 0; i < 6; ++i) {
                    CHECK(mc.a[i][j] >= 0.0);
                    col += mc.a[i][j];
                }
                CHECK(std::abs(col - 1) < 1e-12);
            }
        }
        CHECK(cdf_zz(0, 0.6, 0.8) == 0.0);
        CHECK(cdf_zz(1, 0.6, 0.8) == doctest::Approx(0.8 * 0.36));
        double prev = 0;
        for (std::uint64_t t = 0; t < 400; ++t) {
            double c = cdf_zz(t, 0.5, 0.5);
            CHECK(c >= prev - 1e-15);
            prev = c;
        }
        CHECK(prev > 1 - 1e-12);
        // Decay rate of the transient mass against the eigenvalue routine.
        double rate = (1 - cdf_zz(121, 0.5, 0.5)) / (1 - cdf_zz(120, 0.5, 0.5));
        CHECK(transient_spectral_radius(0.5, 0.5) == doctest::Approx(rate).epsilon(1e-8));
        CHECK(transient_spectral_radius(0.5, 0.5) == doctest::Approx(0.875));
        CHECK(log_coefficient(0.5, 0.5) == doctest::Approx(-1 / std::log(0.875)));
        CHECK(log_coefficient_naive(0.5, 0.5) == doctest::Approx(-1 / std::log(1 - 0.125)));
    }

    TEST_CASE("global parity") {
        CHECK(p_x(0.7, 1.0) == 1.0);
        CHECK(tau_z2(16, 0.7, 1.0) == 1.0);
        CHECK(p_x(0.5, 0.5) == doctest::Approx(0.75));
        CHECK(tau_z2(8, 0.5, 0.5) == doctest::Approx(std::pow(0.75, -4)));
        // p_m = 1 and p_u = 1 limits of the Markov route.
        for (std::size_t L : {8, 32}) {
            CHECK(mean_tau_zz(L, 0.6, 1.0) == doctest::Approx(mean_time_pm1(L, 0.6)).epsilon(1e-9));
            CHECK(combined_mean_time(L, 0.6, 1.0) == doctest::Approx(mean_time_pm1(L, 0.6)).epsilon(1e-9));
            CHECK(mean_tau_zz(L, 1.0, 0.6) == doctest::Approx(mean_time_pu1(L, 0.6)).epsilon(1e-9));
        }
        CHECK(combined_mean_time(16, 0.6, 0.6) > mean_tau_zz(16, 0.6, 0.6));
    }

    TEST_CASE("three-qubit circuit table") {
        for (auto [pu, pm] : {std::pair{0.3, 0.6}, std::pair{0.9, 0.1}, std::pair{1.0, 1.0}}) {
            auto rows = local_circuit_table(pu, pm);
            REQUIRE(rows.size() == 8);
            double total = 0;
            int deterministic = 0;
            for (const auto &r : rows) {
                total += r.probability;
                deterministic += r.deterministic;
            }
            CHECK(total == doctest::Approx(1.0));
            CHECK(deterministic == 1);
            CHECK(rows[3].deterministic);
            double want = pu * pu * pm + (1 - pu) * (1 - pu) * pm + 0.5 * (1 - pu) * (1 - pu) * (1 - pm);
            CHECK(decoder_success_probability(pu, pm) == doctest::Approx(want));
        }
        auto exact = local_circuit_table(1.0, 1.0);
        CHECK(exact[0].probability == 1.0);
        for (std::size_t k = 1; k < 8; ++k) {
            CHECK(exact[k].probability == 0.0);
        }
    }

    TEST_CASE("square-lattice coins") {
        CHECK(coin_toss_square(4, 1.0, 1, 100).mean_tau == 1.0);
        CHECK(coin_toss_square(6, 1.0, 1, 100).stderr_tau == 0.0);
        auto near = coin_toss_square(6, 0.97, 3, 4000);
        CHECK(near.mean_tau < 1.5);
        auto low = coin_toss_square(4, 0.6, 3, 4000);
        auto high = coin_toss_square(4, 0.8, 3, 4000);
        CHECK(low.mean_tau > high.mean_tau + 3 * (low.stderr_tau + high.stderr_tau));
        CHECK(high.mean_tau > near.mean_tau);
        // Deduction can only help.
        auto single = coin_toss_square(6, 0.6, 3, 4000, CoinDeduction::SinglePass);
        auto closure = coin_toss_square(6, 0.6, 3, 4000, CoinDeduction::Closure);
        CHECK(closure.mean_tau <= single.mean_tau + 1e-12);
        CHECK(coin_toss_rounds(4, 0.6, 3, 17) == coin_toss_rounds(4, 0.6, 3, 17));
    }
}
