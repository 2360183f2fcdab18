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
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "stochlre/ensemble.h"

using namespace stochlre;

namespace {

ProtocolParams params(double pu, double pm, std::uint64_t seed) {
    ProtocolParams p;
    p.p_u = pu;
    p.p_m = pm;
    p.seed = seed;
    return p;
}

}  // namespace

TEST_SUITE("ensemble") {
    TEST_CASE("mean and standard error") {
        std::vector<double> xs{1, 2, 3, 4};
        auto m = mean_stat(xs);
        CHECK(m.mean == 2.5);
        CHECK(m.count == 4);
        CHECK(m.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
        std::vector<double> one{7};
        CHECK(mean_stat(one).std_err == 0.0);
        std::vector<double> with_nan{1, std::nan(""), 3};
        CHECK(mean_stat(with_nan).mean == 2.0);
        CHECK(mean_stat(with_nan).count == 2);
        std::vector<double> series(100);
        for (std::size_t k = 0; k < series.size(); ++k) {
            series[k] = static_cast<double>(k % 2);
        }
        auto b = batch_mean_stat(series, 10);
        CHECK(b.mean == 0.5);
        CHECK(b.std_err == doctest::Approx(0.0));
    }

    TEST_CASE("worker count does not change results") {
        auto lat = Lattice::chain(24);
        auto p = params(0.7, 0.7, 77);
        RecordOptions o;
        o.series_stride = 2;
        o.series.entropy = true;
        o.fixed_layers = 20;
        auto one = run_trajectories(lat, p, o, 24, 1);
        auto three = run_trajectories(lat, p, o, 24, 3);
        REQUIRE(one.size() == three.size());
        for (std::size_t k = 0; k < one.size(); ++k) {
            CHECK(one[k].trajectory_id == k);
            CHECK(one[k].tau == three[k].tau);
            CHECK(one[k].series.size() == three[k].series.size());
            for (std::size_t s = 0; s < one[k].series.size(); ++s) {
                CHECK(one[k].series[s].entropy == three[k].series[s].entropy);
            }
        }
        EnsembleConfig c1{p, RecordOptions{}, 50, 1}, c4{p, RecordOptions{}, 50, 4};
        auto a = run_ensemble(lat, c1);
        auto b = run_ensemble(lat, c4);
        CHECK(a.tau.mean == b.tau.mean);
        CHECK(a.tau.std_err == b.tau.std_err);
        CHECK(a.tau_histogram == b.tau_histogram);
    }

    TEST_CASE("exact protocol statistics") {
        EnsembleConfig c{params(1, 1, 1), RecordOptions{}, 20, 2};
        auto st = run_ensemble(Lattice::chain(32), c);
        CHECK(st.tau.mean == 1.0);
        CHECK(st.tau.std_err == 0.0);
        CHECK(st.censored == 0);
        CHECK(st.tau_histogram.size() == 1);
        c.trajectories = 1;
        CHECK_THROWS(run_ensemble(Lattice::chain(32), c));
    }

    TEST_CASE("censoring") {
        auto p = params(0.5, 0.5, 3);
        p.t_max = 3;
        EnsembleConfig c{p, RecordOptions{}, 40, 1};
        auto st = run_ensemble(Lattice::chain(64), c);
        CHECK(st.censored == 40);
        CHECK(st.all_censored);
        CHECK(st.tau.count == 0);
        CHECK(st.tau_lower_bound == doctest::Approx(3.0));
    }

    TEST_CASE("parallel_for rethrows") {
        std::atomic<int> ran{0};
        CHECK_THROWS_AS(parallel_for(50, 4,
                                     [&](std::size_t k) {
                                         ++ran;
                                         if (k == 17) {
                                             throw std::runtime_error("boom");
                                         }
                                     }),
                        std::runtime_error);
        std::atomic<int> count{0};
        parallel_for(100, 3, [&](std::size_t) { ++count; });
        CHECK(count == 100);
    }

    TEST_CASE("mean-time fit recovers planted parameters") {
        const double a = 1.5, b = 2.2, c = 0.8;
        std::vector<double> Ls{8, 12, 16, 20, 24, 32, 48, 64};
        std::vector<double> tau;
        for (double L : Ls) {
            tau.push_back(a + b * std::log(L / 2) + std::pow(c, -L / 2));
        }
        auto fit = fit_mean_time(Ls, tau);
        CHECK(fit.converged);
        CHECK(fit.a == doctest::Approx(a).epsilon(0.01));
        CHECK(fit.b == doctest::Approx(b).epsilon(0.01));
        CHECK(fit.c == doctest::Approx(c).epsilon(0.01));
        CHECK(fit.predict(40) == doctest::Approx(a + b * std::log(20) + std::pow(c, -20)).epsilon(1e-6));

        // With noise the errors should cover the truth.
        std::mt19937 gen(5);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> noisy, err;
        for (double t : tau) {
            double s = 0.02 * t;
            noisy.push_back(t + s * noise(gen));
            err.push_back(s);
        }
        auto nf = fit_mean_time(Ls, noisy, err);
        CHECK(std::abs(nf.b - b) < 4 * nf.sigma_b());
        CHECK(std::abs(nf.c - c) < 4 * nf.sigma_c());
        std::vector<double> few{8, 16, 32};
        CHECK_THROWS(fit_mean_time(few, std::vector<double>{1, 2, 3}));
    }

    TEST_CASE("straight-line fit") {
        std::vector<double> x{1, 2, 3, 4, 5}, y{3, 5, 7, 9, 11};
        auto f = fit_line(x, y);
        CHECK(f.slope == doctest::Approx(2.0));
        CHECK(f.intercept == doctest::Approx(1.0));
        CHECK(f.r2 == doctest::Approx(1.0));
    }

    TEST_CASE("data collapse recovers a planted transition") {
        const double pc = 0.42, nu = 1.3;
        std::mt19937 gen(8);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<CollapsePoint> pts;
        for (double L : {16.0, 32.0, 64.0, 128.0}) {
            for (double p = 0.1; p < 0.75; p += 0.04) {
                double x = (p - pc) * std::pow(L, 1 / nu);
                double y = std::tanh(0.5 * x) + 0.2 * std::sin(0.3 * x);
                double s = 0.01;
                pts.push_back({L, p, y + s * noise(gen), s});
            }
        }
        CollapseOptions opt;
        opt.bootstrap = 40;
        opt.seed = 3;
        auto fit = data_collapse(pts, opt);
        CHECK_FALSE(fit.degenerate);
        CHECK(fit.p_c == doctest::Approx(pc).epsilon(0.02));
        CHECK(fit.nu == doctest::Approx(nu).epsilon(0.1));
        CHECK(fit.p_c_interval.first <= fit.p_c_interval.second);
        CHECK(fit.p_c_interval.first - 0.01 <= pc);
        CHECK(fit.p_c_interval.second + 0.01 >= pc);
        CHECK(fit.nu_interval.first - 0.1 <= nu);
        CHECK(fit.nu_interval.second + 0.1 >= nu);
        CHECK(collapse_cost(pts, pc, nu) < collapse_cost(pts, pc + 0.1, nu));
    }

    TEST_CASE("flat data is flagged") {
        std::vector<CollapsePoint> pts;
        for (double L : {16.0, 32.0, 64.0}) {
            for (double p = 0.1; p < 0.9; p += 0.1) {
                pts.push_back({L, p, 1.0, 0.01});
            }
        }
        CollapseOptions opt;
        opt.bootstrap = 5;
        CHECK(data_collapse(pts, opt).degenerate);
    }
}
