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
// Acceptance runs. Each criterion prints one PASS/FAIL line; the exit code
// is the number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochlre/analytics.h"
#include "stochlre/ensemble.h"
#include "stochlre/validation.h"

using namespace stochlre;

namespace {

const double kLog2 = std::log(2.0);

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [fail] " << what << ';';
        }
    }
    void note(const std::string &what) {
        detail << ' ' << what << ';';
    }
};

std::string fmt(const char *f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::size_t g_workers = 1;

ProtocolParams params(double p_u, double p_m, std::uint64_t seed) {
    ProtocolParams p;
    p.p_u = p_u;
    p.p_m = p_m;
    p.seed = seed;
    return p;
}

EnsembleStats ensemble(const Lattice &lat, const ProtocolParams &p, const RecordOptions &o, std::size_t n) {
    EnsembleConfig cfg;
    cfg.params = p;
    cfg.options = o;
    cfg.trajectories = n;
    cfg.workers = g_workers;
    return run_ensemble(lat, cfg);
}

RecordOptions series(ObservableSet which, std::uint64_t layers) {
    RecordOptions o;
    o.detect = false;
    o.fixed_layers = layers;
    o.series_stride = 1;
    o.series = which;
    return o;
}

RecordOptions steady(ObservableSet which, std::size_t L, std::uint64_t window = 32) {
    RecordOptions o;
    o.detect = false;
    std::uint64_t eq = 4 * L;
    o.fixed_layers = eq + window;
    o.steady_start = eq + 1;
    o.steady = which;
    return o;
}

/// Mean-tau comparison: |sim - prediction| <= 3 sigma.
void within_3sigma(Verdict &v, const std::string &label, const MeanStat &sim, double prediction,
                   double extra_var = 0.0) {
    double sigma = std::sqrt(sim.std_err * sim.std_err + extra_var);
    double z = (sim.mean - prediction) / sigma;
    v.require(std::abs(z) <= 3.0, label + fmt(" sim %.4f pred %.4f z %.2f", sim.mean, prediction, z));
}

// 1. exact protocol
void criterion_1(Verdict &v) {
    for (std::size_t L : {8, 64, 512}) {
        auto lat = Lattice::chain(L);
        ObservableSet which;
        which.entropy = true;
        RecordOptions o = series(which, 1);
        o.detect = true;
        auto recs = run_trajectories(lat, params(1, 1, 1), o, 100, g_workers);
        std::size_t ok = 0;
        for (const auto &r : recs) {
            bool good = r.tau == 1u && r.final_local && r.final_global && r.series.size() == 2 &&
                        r.series[1].entropy == kLog2;
            ok += good ? 1 : 0;
        }
        v.require(ok == recs.size(), "L=" + std::to_string(L) + ": " + std::to_string(ok) + "/100 exact");
    }
}

// 2. p_m = 1 sweep
void criterion_2(Verdict &v) {
    std::size_t worst = 0;
    for (double p_u : {0.4, 0.6, 0.8}) {
        for (std::size_t L : {8, 16, 32, 64, 128, 256}) {
            auto s = ensemble(Lattice::chain(L), params(p_u, 1, 2), RecordOptions{}, 1000);
            v.require(s.censored == 0, "censored runs");
            within_3sigma(v, fmt("L=%.0f p_u=%.1f", L, p_u), s.tau, mean_time_pm1(L, p_u));
            ++worst;
        }
    }
    v.note(std::to_string(worst) + " points");
}

// 3. p_u = 1 sweep
void criterion_3(Verdict &v) {
    for (double p_m : {0.4, 0.6, 0.8}) {
        for (std::size_t L : {8, 16, 32, 64, 128, 256}) {
            auto s = ensemble(Lattice::chain(L), params(1, p_m, 3), RecordOptions{}, 1000);
            within_3sigma(v, fmt("L=%.0f p_m=%.1f", L, p_m), s.tau, mean_time_pu1(L, p_m));
            bool all_odd = std::all_of(s.tau_histogram.begin(), s.tau_histogram.end(),
                                       [](const auto &h) { return h.first % 2 == 1; });
            v.require(all_odd, fmt("L=%.0f p_m=%.1f: even tau observed", L, p_m));
        }
    }
}

// 4. exponential regime
void criterion_4(Verdict &v) {
    for (double p_u : {0.6, 0.8}) {
        for (double p_m : {0.6, 0.8}) {
            std::vector<double> Ls, taus, errs;
            for (std::size_t L : {8, 12, 16, 20}) {
                auto s = ensemble(Lattice::chain(L), params(p_u, p_m, 4), RecordOptions{}, 2000);
                v.require(s.censored == 0, "censored runs");
                within_3sigma(v, fmt("L=%.0f p_u=%.1f p_m=%.1f", L, p_u, p_m), s.tau,
                              combined_mean_time(L, p_u, p_m));
                Ls.push_back(static_cast<double>(L));
                taus.push_back(s.tau.mean);
                errs.push_back(s.tau.std_err);
            }
            auto fit = fit_mean_time(Ls, taus, errs);
            v.require(fit.c < 1.0, fmt("p_u=%.1f p_m=%.1f: fitted c=%.3f, no growing exponential term", p_u, p_m,
                                       fit.c));
            v.note(fmt("p_u=%.1f p_m=%.1f c=%.3f", p_u, p_m, fit.c));
        }
    }
}

// 5. entropy and local order over time
void criterion_5(Verdict &v) {
    ObservableSet which;
    which.entropy = true;
    which.locals = true;
    auto s = ensemble(Lattice::chain(512), params(0.5, 0.5, 5), series(which, 60), 1000);
    double peak = 0, locals = 0, late = 0;
    std::size_t late_n = 0;
    for (const auto &row : s.series) {
        peak = std::max(peak, row.entropy.mean);
        locals = std::max(locals, row.locals.mean);
        if (row.layer > 50) {
            late += row.entropy.mean;
            ++late_n;
        }
    }
    late /= static_cast<double>(late_n);
    v.require(peak >= 1.2 && peak <= 1.45, fmt("peak S %.4f", peak));
    v.require(late >= 0.6 && late <= 0.75, fmt("plateau S %.4f", late));
    v.require(locals > 0.99, fmt("max |<ZZ>| %.4f", locals));
    v.note(fmt("peak %.4f plateau %.4f |ZZ| %.4f", peak, late, locals));

    ObservableSet ent;
    ent.entropy = true;
    auto recs = run_trajectories(Lattice::chain(512), params(1, 0, 5), series(ent, 12), 4, g_workers);
    bool alternates = true;
    for (const auto &r : recs) {
        for (const auto &smp : r.series) {
            double expect = smp.layer % 2 == 1 ? 2 * kLog2 : 0.0;
            alternates = alternates && smp.entropy == expect;
        }
    }
    v.require(alternates, "p_m=0 oscillation is not {0, 2 log 2}");
}

// 6. decoder
void criterion_6(Verdict &v) {
    for (double p_u : {0.3, 0.5, 0.7, 0.9}) {
        std::vector<double> Ls, taus, errs;
        for (std::size_t L = 8; L <= 24; L += 2) {
            auto p = params(p_u, 0.8, 6);
            p.decoder = true;
            auto s = ensemble(Lattice::chain(L), p, RecordOptions{}, 1000);
            v.require(s.censored == 0, "censored runs");
            Ls.push_back(static_cast<double>(L));
            taus.push_back(s.tau.mean);
            errs.push_back(s.tau.std_err);
        }
        auto fit = fit_mean_time(Ls, taus, errs);
        double b0 = log_coefficient(p_u, 0.8);
        v.require(fit.b + 3 * fit.sigma_b() < b0,
                  fmt("p_u=%.1f: b %.3f +- %.3f vs %.3f", p_u, fit.b, fit.sigma_b(), b0));
        v.note(fmt("p_u=%.1f b=%.3f+-%.3f (no decoder %.3f)", p_u, fit.b, fit.sigma_b(), b0));
    }
}

// 7. halting
void criterion_7(Verdict &v) {
    const std::size_t n = 1000;
    for (double p : {0.6, 0.8}) {
        std::vector<double> logL, taus;
        for (std::size_t L : {8, 16, 32, 64, 128}) {
            auto pr = params(p, p, 7);
            pr.halting_phi = 0.99;
            auto s = ensemble(Lattice::chain(L), pr, RecordOptions{}, n);
            double f = static_cast<double>(s.halting_failures) / n;
            double bar = 0.01 + 3 * std::sqrt(0.01 * 0.99 / n);
            v.require(f <= bar, fmt("p=%.1f L=%.0f failure fraction %.4f", p, L, f));
            logL.push_back(std::log(static_cast<double>(L)));
            taus.push_back(s.tau.mean);
            v.note(fmt("p=%.1f L=%.0f tau %.3f halt %.0f", p, L, s.tau.mean,
                       static_cast<double>(halting_layer(0.99, p, p, L))));
        }
        auto line = fit_line(logL, taus);
        v.require(line.r2 > 0.99, fmt("p=%.1f: R2 %.4f", p, line.r2));
        v.note(fmt("p=%.1f R2=%.4f b=%.3f", p, line.r2, line.slope));
    }
}

// 8. one-dimensional transition
void criterion_8(Verdict &v) {
    auto run = [](std::size_t L, double p_m, ObservableSet which) {
        auto p = params(0.8, p_m, 8);
        p.gate_set = GateSet::ZZplusXX;
        return ensemble(Lattice::chain(L), p, steady(which, L), 500);
    };
    ObservableSet ent;
    ent.entropy = true;
    std::map<std::pair<std::size_t, double>, double> S;
    for (std::size_t L : {64, 128}) {
        for (double p_m : {0.1, 0.9}) {
            S[{L, p_m}] = run(L, p_m, ent).steady_entropy.mean;
        }
    }
    double low = S[{128, 0.1}] / S[{64, 0.1}], high = S[{128, 0.9}] / S[{64, 0.9}];
    v.require(low > 1.5, fmt("S(128)/S(64) at p_m=0.1 is %.3f (not extensive)", low));
    v.require(high < 1.1, fmt("S(128)/S(64) at p_m=0.9 is %.3f (not saturating)", high));

    // I3 grows like -L deep in the volume law, so the collapse uses a window
    // around the crossing near p_m = 0.23.
    ObservableSet i3;
    i3.i3 = true;
    std::vector<CollapsePoint> pts;
    for (std::size_t L : {16, 32, 64, 128}) {
        for (int k = 0; k <= 8; ++k) {
            double p_m = 0.15 + 0.025 * k;
            auto s = run(L, p_m, i3);
            pts.push_back({static_cast<double>(L), p_m, s.steady_i3.mean, s.steady_i3.std_err});
        }
    }
    CollapseOptions opts;
    opts.seed = 8;
    auto fit = data_collapse(pts, opts);
    v.require(!fit.degenerate, "collapse degenerate");
    v.require(fit.nu >= 1.0 && fit.nu <= 1.6, fmt("nu %.3f", fit.nu));
    v.note(fmt("S ratio %.3f -> %.3f; p_c %.3f nu %.3f", low, high, fit.p_c, fit.nu));
    v.note(fmt("nu 68%% interval [%.3f, %.3f]", fit.nu_interval.first, fit.nu_interval.second));
}

// 9. proximity to the Y cat
void criterion_9(Verdict &v) {
    ObservableSet which;
    which.i3 = true;
    which.yy = true;
    auto run = [&](double p_m) {
        auto p = params(0.9, p_m, 9);
        p.gate_set = GateSet::ZZplusXX;
        return ensemble(Lattice::chain(96), p, steady(which, 96), 200);
    };
    auto area = run(0.9);
    auto vol = run(0.1);
    double rel = std::abs(area.steady_i3.mean - kLog2) / kLog2;
    v.require(rel <= 0.10, fmt("area-law I3 %.4f (%.1f%% from log 2)", area.steady_i3.mean, 100 * rel));
    v.require(area.steady_yy.mean > 0.05, fmt("area-law |YY| %.4f", area.steady_yy.mean));
    v.require(vol.steady_yy.mean < 0.05, fmt("volume-law |YY| %.4f", vol.steady_yy.mean));
    v.note(fmt("I3 %.4f |YY| area %.4f volume %.4f", area.steady_i3.mean, area.steady_yy.mean, vol.steady_yy.mean));
}

/// Mean of `field` over the last `last` series samples.
double late(const EnsembleStats &s, MeanStat SeriesStat::*field, std::size_t last) {
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t k = s.series.size() - std::min(last, s.series.size()); k < s.series.size(); ++k) {
        sum += (s.series[k].*field).mean;
        ++n;
    }
    return sum / static_cast<double>(n);
}

// 10. imperfect rotation angle
void criterion_10(Verdict &v) {
    ObservableSet which;
    which.locals = true;
    which.globals = true;
    which.i2 = true;
    for (double p_m : {1.0, 0.8}) {
        for (double theta : {1.0, 1.5, 2.0}) {
            for (double p_u : {0.6, 1.0}) {
                auto p = params(p_u, p_m, 10);
                p.theta = theta;
                p.backend = Backend::Dense;
                auto s = ensemble(Lattice::chain(16), p, series(which, 60), 50);
                double zz = late(s, &SeriesStat::locals, 1);
                double px = late(s, &SeriesStat::globals, 1);
                double i2 = late(s, &SeriesStat::i2, 1) / kLog2;
                std::string tag = fmt("p_m=%.1f theta=%.1f p_u=%.1f", p_m, theta, p_u);
                v.note(tag + fmt(": |ZZ| %.4f |X| %.4f I2 %.4f", zz, px, i2));
                if (p_m == 1.0) {
                    v.require(zz > 0.99 && px > 0.99 && i2 > 0.99, tag + " not a cat at late time");
                } else if (theta != 1.0) {
                    v.require(zz > 0.99, tag + " |ZZ| below 0.99");
                    v.require(px < 0.5, tag + " |prod X| not below 0.5");
                }
            }
        }
    }
}

// 11. transverse field
void criterion_11(Verdict &v) {
    ObservableSet which;
    which.globals = true;
    double result[2];
    int k = 0;
    for (double gamma : {0.0, 0.5}) {
        auto p = params(1.0, 0.8, 11);
        p.gamma_x = gamma;
        p.backend = Backend::Dense;
        auto s = ensemble(Lattice::chain(14), p, series(which, 60), 50);
        result[k++] = late(s, &SeriesStat::globals, 10);
    }
    v.require(result[0] > 0.99, fmt("Gamma=0: late |prod X| %.4f", result[0]));
    v.require(result[1] < 0.9, fmt("Gamma=0.5: late |prod X| %.4f", result[1]));
    v.note(fmt("|prod X| Gamma=0 %.4f, Gamma=0.5 %.4f", result[0], result[1]));
}

// 12. Lieb lattice
void criterion_12(Verdict &v) {
    for (double p_m : {0.4, 0.6, 0.8}) {
        for (std::size_t L : {4, 6, 8}) {
            auto s = ensemble(Lattice::lieb(L), params(1, p_m, 12), RecordOptions{}, 500);
            within_3sigma(v, fmt("L=%.0f p_m=%.1f", L, p_m), s.tau, mean_time_lieb(L, p_m));
        }
    }
    for (std::size_t L : {4, 6, 8}) {
        auto recs = run_trajectories(Lattice::lieb(L), params(1, 1, 12), RecordOptions{}, 20, g_workers);
        bool ok = std::all_of(recs.begin(), recs.end(),
                              [](const auto &r) { return r.tau == 1u && r.final_local && r.final_global; });
        v.require(ok, fmt("L=%.0f exact protocol not toric code at tau = 1", L));
    }
}

// 13. square lattice
void criterion_13(Verdict &v) {
    for (std::size_t L : {4, 6, 8}) {
        std::vector<double> means;
        for (double p_m : {0.6, 0.8, 0.95}) {
            auto s = ensemble(Lattice::square(L), params(1, p_m, 13), RecordOptions{}, 500);
            auto coin = coin_toss_square(L, p_m, 13, 20000);
            within_3sigma(v, fmt("L=%.0f p_m=%.2f", L, p_m), s.tau, coin.mean_tau, coin.stderr_tau * coin.stderr_tau);
            means.push_back(s.tau.mean);
        }
        bool pinned = means[0] > means[1] && means[1] > means[2] && means[2] - 1 < 0.5 * (means[0] - 1);
        v.require(pinned, fmt("L=%.0f: tau %.3f %.3f %.3f not pinning toward 1", L, means[0], means[1], means[2]));
    }
}

// 14. two-dimensional transition
void criterion_14(Verdict &v) {
    ObservableSet which;
    which.i3 = true;
    for (std::size_t L : {4, 8, 12}) {
        std::vector<double> i3;
        for (int k = 1; k <= 9; ++k) {
            auto p = params(0.9, 0.1 * k, 14);
            p.gate_set = GateSet::ZZplusXX;
            auto s = ensemble(Lattice::lieb(L), p, steady(which, L), 100);
            i3.push_back(s.steady_i3.mean);
        }
        std::ostringstream row;
        for (double x : i3) {
            row << fmt(" %.3f", x);
        }
        v.note(fmt("L=%.0f I3:", L) + row.str());
        v.require(i3.front() < 0 && i3.back() > 0, fmt("L=%.0f: I3 does not change sign", L));
        if (L == 12) {
            double rel = std::abs(i3.back() - kLog2) / kLog2;
            v.require(rel <= 0.15, fmt("area-law I3 %.4f (%.1f%% from log 2)", i3.back(), 100 * rel));
        }
    }
}

void report_suite(Verdict &v, const ValidationReport &r) {
    for (const auto &c : r.cases) {
        if (!c.pass) {
            v.require(false, c.name + " " + c.detail);
        }
    }
    v.note(std::to_string(r.cases.size()) + " cases");
}

// 15. backend equivalence
void criterion_15(Verdict &v) {
    report_suite(v, validate_tableau_vs_dense(200, 15, 1e-8));
}

// 16. three-qubit monotonicity
void criterion_16(Verdict &v) {
    report_suite(v, validate_monotonicity(100, {0.3, 0.7, 1.0, 1.6}, 16, 1e-12));
}

// 17. Markov chain
void criterion_17(Verdict &v) {
    report_suite(v, validate_markov_vs_mc(100000, 20, 2026));
}

struct Criterion {
    const char *title;
    std::function<void(Verdict &)> run;
};

const std::vector<Criterion> &criteria() {
    static const std::vector<Criterion> all = {
        {"exact protocol", criterion_1},
        {"p_m = 1 mean time", criterion_2},
        {"p_u = 1 mean time", criterion_3},
        {"exponential regime", criterion_4},
        {"entropy time series", criterion_5},
        {"decoder", criterion_6},
        {"halting", criterion_7},
        {"1D transition", criterion_8},
        {"Y-cat proximity", criterion_9},
        {"timing imperfections", criterion_10},
        {"transverse field", criterion_11},
        {"Lieb toric code", criterion_12},
        {"square Xu-Moore", criterion_13},
        {"2D transition", criterion_14},
        {"backend equivalence", criterion_15},
        {"3-qubit monotonicity", criterion_16},
        {"Markov chain", criterion_17},
    };
    return all;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"stochlre acceptance runs"};
    std::vector<int> which;
    app.add_option("-c,--criterion", which, "criteria to run (default: all)")->check(CLI::Range(1, 17));
    app.add_option("-w,--workers", g_workers, "worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    if (which.empty()) {
        for (int k = 1; k <= 17; ++k) {
            which.push_back(k);
        }
    }
    int failed = 0;
    for (int k : which) {
        const auto &c = criteria()[static_cast<std::size_t>(k - 1)];
        Verdict v;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception &e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s: %s (%.1fs)%s\n", k, v.pass ? "PASS" : "FAIL", c.title, secs,
                    v.detail.str().c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
