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
#include "stochlre/validation.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "stochlre/analytics.h"
#include "stochlre/lattice.h"
#include "stochlre/protocols.h"
#include "stochlre/rng.h"
#include "stochlre/state_vector.h"

namespace stochlre {

bool ValidationReport::pass() const {
    return failures() == 0;
}

std::size_t ValidationReport::failures() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto &c) { return !c.pass; }));
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

struct BackendSetting {
    std::string name;
    std::size_t n;
    ProtocolParams params;
    bool i3;
};

std::vector<BackendSetting> backend_settings(std::uint64_t seed) {
    auto make = [seed](double pu, double pm, GateSet g, bool decoder) {
        ProtocolParams p;
        p.p_u = pu;
        p.p_m = pm;
        p.gate_set = g;
        p.decoder = decoder;
        p.seed = seed;
        return p;
    };
    return {
        {"n=4 zz p_u=0.7 p_m=0.5", 4, make(0.7, 0.5, GateSet::ZZ, false), true},
        {"n=6 zz p_u=0.5 p_m=0.5", 6, make(0.5, 0.5, GateSet::ZZ, false), false},
        {"n=6 zz decoder p_u=0.6 p_m=0.7", 6, make(0.6, 0.7, GateSet::ZZ, true), false},
        {"n=8 zz p_u=0.6 p_m=0.6", 8, make(0.6, 0.6, GateSet::ZZ, false), true},
        {"n=8 zz+xx p_u=0.8 p_m=0.3", 8, make(0.8, 0.3, GateSet::ZZplusXX, false), true},
    };
}

}  // namespace

ValidationReport validate_tableau_vs_dense(std::size_t trajectories, std::uint64_t seed, double tolerance) {
    ValidationReport report{"tableau-vs-dense", {}};
    auto settings = backend_settings(seed);
    std::vector<std::size_t> counts(settings.size(), 0);
    std::vector<std::string> first_error(settings.size());
    std::vector<double> worst(settings.size(), 0.0);
    for (std::size_t k = 0; k < trajectories; ++k) {
        std::size_t s = k % settings.size();
        const auto &set = settings[s];
        auto lat = Lattice::chain(set.n);
        RecordOptions opt;
        opt.fixed_layers = 12;
        opt.series_stride = 1;
        opt.series.entropy = true;
        opt.series.i2 = true;
        opt.series.i3 = set.i3;
        opt.keep_outcomes = true;
        opt.detect = false;
        ProtocolParams ps = set.params;
        ProtocolParams pd = set.params;
        pd.backend = Backend::Dense;
        auto a = run_trajectory(lat, ps, opt, k);
        auto b = run_trajectory(lat, pd, opt, k);
        ++counts[s];
        if (!first_error[s].empty()) {
            continue;
        }
        if (a.outcome_history != b.outcome_history) {
            first_error[s] = "outcomes differ in trajectory " + std::to_string(k) + " (seed " + std::to_string(seed) + ")";
            continue;
        }
        for (std::size_t i = 0; i < a.series.size(); ++i) {
            const Sample &x = a.series[i], &y = b.series[i];
            for (auto [u, v] : {std::pair{x.entropy, y.entropy}, std::pair{x.i2, y.i2}, std::pair{x.i3, y.i3}}) {
                if (std::isnan(u) && std::isnan(v)) {
                    continue;
                }
                double d = std::abs(u - v);
                worst[s] = std::max(worst[s], d);
                if (!(d <= tolerance)) {
                    first_error[s] = "entropy mismatch " + fmt(d) + " at layer " + std::to_string(x.layer) +
                                     " of trajectory " + std::to_string(k) + " (seed " + std::to_string(seed) + ")";
                }
            }
        }
    }
    for (std::size_t s = 0; s < settings.size(); ++s) {
        ValidationCase c;
        c.name = settings[s].name;
        c.pass = first_error[s].empty();
        c.detail = c.pass ? std::to_string(counts[s]) + " trajectories, max entropy deviation " + fmt(worst[s])
                          : first_error[s];
        report.cases.push_back(c);
    }
    return report;
}

namespace {

BitMatrix canonical_of(const std::vector<std::string> &gens) {
    BitMatrix m(gens.size(), 6);
    for (std::size_t r = 0; r < gens.size(); ++r) {
        auto p = PauliString::parse(gens[r]);
        for (std::size_t q = 0; q < 3; ++q) {
            m.set(r, q, p.x(q));
            m.set(r, 3 + q, p.z(q));
        }
    }
    m.rref();
    return m;
}

bool same_matrix(const BitMatrix &a, const BitMatrix &b) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto ra = a.row(r), rb = b.row(r);
        if (!std::equal(ra.begin(), ra.end(), rb.begin())) {
            return false;
        }
    }
    return true;
}

const std::array<BitMatrix, 6> &markov_references() {
    static const std::array<BitMatrix, 6> refs = {
        canonical_of({"XII", "IXI", "IIX"}),
        canonical_of({"XII", "IZY", "IXX"}),
        canonical_of({"IIX", "YZI", "XXI"}),
        canonical_of({"YZI", "IZY", "ZXZ"}),
        canonical_of({"ZIZ", "IXI", "XXX"}),
        canonical_of({"ZIZ", "IYZ", "XXX"}),
    };
    return refs;
}

}  // namespace

int classify_markov_state(const Tableau &t) {
    if (t.num_qubits() != 3) {
        throw std::invalid_argument("Markov states are defined on three qubits");
    }
    BitMatrix c = t.canonical_unsigned_stabilizers();
    const auto &refs = markov_references();
    for (int k = 0; k < 6; ++k) {
        if (same_matrix(c, refs[k])) {
            return k + 1;
        }
    }
    return 0;
}

MarkovOccupancy simulate_markov_occupancy(double p_u, double p_m, std::size_t t_max, std::size_t runs,
                                          std::uint64_t seed) {
    MarkovOccupancy occ;
    occ.runs = runs;
    occ.fraction.assign(t_max + 1, std::array<double, 6>{});
    std::vector<std::array<std::size_t, 6>> counts(t_max + 1, std::array<std::size_t, 6>{});
    for (std::size_t r = 0; r < runs; ++r) {
        RngStream rng(seed, r);
        Tableau t = Tableau::product_state(3, ProductBasis::AllMinusX);
        for (std::size_t step = 0; step <= t_max; ++step) {
            if (step > 0) {
                if (rng.bernoulli(p_u)) {
                    t.apply_zz_rotation(0, 1);
                }
                if (rng.bernoulli(p_u)) {
                    t.apply_zz_rotation(1, 2);
                }
                if (rng.bernoulli(p_m)) {
                    t.measure_x(1, rng.uniform());
                }
            }
            int k = classify_markov_state(t);
            if (k == 0) {
                ++occ.unclassified;
            } else {
                ++counts[step][k - 1];
            }
        }
    }
    for (std::size_t step = 0; step <= t_max; ++step) {
        for (int k = 0; k < 6; ++k) {
            occ.fraction[step][k] = static_cast<double>(counts[step][k]) / static_cast<double>(runs);
        }
    }
    return occ;
}

ValidationReport validate_markov_vs_mc(std::size_t runs, std::size_t t_max, std::uint64_t seed, double sigmas) {
    ValidationReport report{"markov-vs-mc", {}};
    {
        RngStream rng(seed, 0xC01u);
        double worst = 0.0;
        bool support_ok = true;
        for (int i = 0; i < 100; ++i) {
            auto m = markov_chain(rng.uniform(), rng.uniform());
            for (int c = 0; c < 6; ++c) {
                double sum = 0.0;
                for (int r = 0; r < 6; ++r) {
                    sum += m.a[r][c];
                    if (m.a[r][c] < 0.0 || m.a[r][c] > 1.0) {
                        support_ok = false;
                    }
                    if (c >= 4 && r < 4 && m.a[r][c] != 0.0) {
                        support_ok = false;
                    }
                }
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        report.cases.push_back({"column sums (100 random parameter pairs)", worst <= 1e-12, "max |sum - 1| = " + fmt(worst)});
        report.cases.push_back({"entries in [0,1], stable block closed", support_ok, ""});
    }
    const double p_u = 0.5, p_m = 0.5;
    auto occ = simulate_markov_occupancy(p_u, p_m, t_max, runs, seed);
    report.cases.push_back({"every simulated state is one of the six", occ.unclassified == 0,
                            std::to_string(occ.unclassified) + " unclassified"});
    auto chain = markov_chain(p_u, p_m);
    std::array<double, 6> v{1, 0, 0, 0, 0, 0};
    double worst_z = 0.0;
    std::string where;
    bool ok = true;
    for (std::size_t t = 0; t <= t_max; ++t) {
        if (t > 0) {
            v = chain.apply(v);
        }
        for (int k = 0; k < 6; ++k) {
            double p = v[k], f = occ.fraction[t][k];
            double sd = std::sqrt(p * (1 - p) / static_cast<double>(runs));
            double dev = std::abs(f - p);
            bool cell_ok = sd > 0 ? dev <= sigmas * sd : dev <= 1e-12;
            double z = sd > 0 ? dev / sd : (dev <= 1e-12 ? 0.0 : INFINITY);
            if (z > worst_z) {
                worst_z = z;
                where = "t=" + std::to_string(t) + " state " + std::to_string(k + 1);
            }
            ok = ok && cell_ok;
        }
    }
    report.cases.push_back({"occupancy A^t e1 vs simulation (p_u = p_m = 0.5)", ok,
                            "worst deviation " + fmt(worst_z) + " sigma at " + where + ", runs " +
                                std::to_string(runs) + ", seed " + std::to_string(seed)});
    return report;
}

namespace {

using Amps = std::vector<std::complex<double>>;

/// sum_k |a_k|^2 (-1)^{b0 + b2}
double zz13(const Amps &a) {
    double e = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double s = ((k ^ (k >> 2)) & 1) ? -1.0 : 1.0;
        e += std::norm(a[k]) * s;
    }
    return e;
}

void zz_gate(Amps &a, std::size_t q1, std::size_t q2, double theta) {
    double phi = std::numbers::pi / 4 * theta;
    std::complex<double> same = std::polar(1.0, -phi), diff = std::polar(1.0, phi);
    for (std::size_t k = 0; k < a.size(); ++k) {
        bool parity = ((k >> q1) ^ (k >> q2)) & 1;
        a[k] *= parity ? diff : same;
    }
}

/// Projections (1 +- X_1)/2.
std::pair<Amps, Amps> project_x1(const Amps &a) {
    Amps plus(a.size()), minus(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        auto flipped = a[k ^ 2];
        plus[k] = 0.5 * (a[k] + flipped);
        minus[k] = 0.5 * (a[k] - flipped);
    }
    return {plus, minus};
}

}  // namespace

ValidationReport validate_monotonicity(std::size_t states, const std::vector<double> &thetas, std::uint64_t seed,
                                       double slack) {
    ValidationReport report{"monotonicity", {}};
    for (double theta : thetas) {
        double worst = INFINITY;
        std::string where;
        for (std::size_t s = 0; s < states; ++s) {
            RngStream rng(seed, s);
            std::normal_distribution<double> gauss(0.0, 1.0);
            Amps psi(8);
            double norm = 0.0;
            for (auto &c : psi) {
                c = {gauss(rng), gauss(rng)};
                norm += std::norm(c);
            }
            for (auto &c : psi) {
                c /= std::sqrt(norm);
            }
            double p_u = rng.uniform(), p_m = rng.uniform();
            double before = std::abs(zz13(psi));
            double expected = 0.0;
            for (int g = 0; g < 4; ++g) {
                Amps phi = psi;
                if (g & 1) {
                    zz_gate(phi, 0, 1, theta);
                }
                if (g & 2) {
                    zz_gate(phi, 1, 2, theta);
                }
                double w = ((g & 1) ? p_u : 1 - p_u) * ((g & 2) ? p_u : 1 - p_u);
                double unmeasured = std::abs(zz13(phi));
                auto [plus, minus] = project_x1(phi);
                // sum_s p_s |<Z1Z3>_s| with p_s folded into the unnormalized branches.
                double measured = std::abs(zz13(plus)) + std::abs(zz13(minus));
                worst = std::min(worst, measured - unmeasured);
                expected += w * ((1 - p_m) * unmeasured + p_m * measured);
            }
            double margin = expected - before;
            if (margin < worst) {
                worst = margin;
                where = "state " + std::to_string(s);
            }
        }
        report.cases.push_back({"theta=" + fmt(theta), worst >= -slack,
                                std::to_string(states) + " states, min margin " + fmt(worst) +
                                    (where.empty() ? "" : " at " + where) + ", seed " + std::to_string(seed)});
    }
    return report;
}

namespace {

/// B_x(a, 0) = sum_k x^{a+k} / (a+k).
double incomplete_beta_b0(double x, double a) {
    double sum = 0.0, term = 0.0;
    for (int k = 0; k < 100000; ++k) {
        term = std::pow(x, a + k) / (a + k);
        sum += term;
        if (term < 1e-18 * sum) {
            break;
        }
    }
    return sum;
}

double harmonic(std::size_t n) {
    double h = 0.0;
    for (std::size_t i = n; i >= 1; --i) {
        h += 1.0 / static_cast<double>(i);
    }
    return h;
}

double closed_pm1(std::size_t L, double p_u) {
    double p = p_u * p_u;
    double n = static_cast<double>(L / 2);
    return (1 - incomplete_beta_b0(p, 1 + n) - harmonic(L / 2)) / std::log1p(-p) - std::pow(p_u, L) / 2 + 0.5;
}

double closed_pu1(std::size_t N, double p_m) {
    return 2 * (1 - incomplete_beta_b0(p_m, 1 + static_cast<double>(N)) - harmonic(N)) / std::log1p(-p_m) -
           std::pow(p_m, static_cast<double>(N));
}

}  // namespace

ValidationReport validate_analytics_closed_forms() {
    ValidationReport report{"analytics-closed-forms", {}};
    auto add = [&](std::string name, bool pass, std::string detail) {
        report.cases.push_back({std::move(name), pass, std::move(detail)});
    };
    {
        double worst = 0.0;
        for (std::size_t L : {8, 64, 100, 256}) {
            for (double p : {0.04, 0.16, 0.36, 0.64}) {
                double sum = 0.0;
                for (std::int64_t t = 0; t < 20000; ++t) {
                    sum += order_statistic_pmf(t, L, p);
                }
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        add("order-statistic PMF sums to 1", worst <= 1e-10, "max deviation " + fmt(worst));
    }
    {
        double worst = 0.0;
        for (std::size_t L : {8, 100}) {
            for (double p : {0.16, 0.36}) {
                double Ld = static_cast<double>(L);
                std::int64_t t = static_cast<std::int64_t>(std::ceil(std::log(1e-12 / Ld) / std::log1p(-p)));
                double pred = Ld * (Ld - 2) / 8 * p * (2 - p) * std::pow(1 - p, 2.0 * static_cast<double>(t));
                worst = std::max(worst, std::abs(order_statistic_pmf(t, L, p) / pred - 1));
            }
        }
        add("PMF tail prefactor L(L-2)p(2-p)/8", worst <= 1e-6, "max relative deviation " + fmt(worst));
    }
    {
        double worst = 0.0;
        for (double p_u : {0.2, 0.3, 0.4}) {
            for (std::size_t L : {16, 32, 64, 128, 256}) {
                double s = mean_time_pm1(L, p_u);
                worst = std::max(worst, std::abs(s - closed_pm1(L, p_u)) / s);
            }
        }
        add("p_m = 1 mean time vs incomplete-beta form (p_u <= 0.4, L >= 16)", worst <= 1e-6,
            "max relative deviation " + fmt(worst));
    }
    {
        double worst = 0.0;
        for (double p_m : {0.04, 0.1}) {
            for (std::size_t L : {16, 64, 256}) {
                double s = mean_time_pu1(L, p_m);
                worst = std::max(worst, std::abs(s - closed_pu1(L / 2, p_m)) / s);
            }
            for (std::size_t L : {4, 8}) {
                double s = mean_time_lieb(L, p_m);
                worst = std::max(worst, std::abs(s - closed_pu1(L * L, p_m)) / s);
            }
        }
        add("p_u = 1 and Lieb mean times vs incomplete-beta form (p_m <= 0.1)", worst <= 1e-6,
            "max relative deviation " + fmt(worst));
    }
    {
        double prev = INFINITY;
        bool shrinking = true;
        double last = 0.0;
        for (int k = 10; k <= 14; ++k) {
            std::size_t L = std::size_t{1} << k;
            double d = std::abs(mean_time_pm1(L, 0.6) - log_mean_time(L, 0.36));
            shrinking = shrinking && d < prev;
            prev = d;
            last = d;
        }
        add("logarithmic asymptote approached for L = 2^10..2^14", shrinking && last < 1e-2,
            "deviation at L = 2^14: " + fmt(last));
    }
    add("p_X(0.5, 0.5) = 0.75", std::abs(p_x(0.5, 0.5) - 0.75) < 1e-15, fmt(p_x(0.5, 0.5)));
    add("p_X = 1 and tau_Z2 = 1 at p_m = 1", p_x(0.3, 1.0) == 1.0 && tau_z2(64, 0.3, 1.0) == 1.0, "");
    {
        auto rows = local_circuit_table(0.37, 0.61);
        double sum = 0.0;
        int deterministic = 0;
        for (const auto &r : rows) {
            sum += r.probability;
            deterministic += r.deterministic ? 1 : 0;
        }
        add("Table I probabilities sum to 1", std::abs(sum - 1) < 1e-15, fmt(sum));
        add("Table I: only row 4 is deterministic", deterministic == 1 && rows[3].deterministic, "");
        double boost = 0.37 * 0.37 * 0.61 + 0.63 * 0.63 * 0.61 + 0.5 * 0.63 * 0.63 * 0.39;
        add("decoder boost from rows 1, 4, 8", std::abs(decoder_success_probability(0.37, 0.61) - boost) < 1e-15, "");
    }
    {
        bool ok = cdf_zz(0, 0.6, 0.8) == 0.0 && std::abs(cdf_zz(1, 0.6, 0.8) - 0.288) < 1e-15;
        double prev = 0.0;
        for (std::uint64_t t = 0; t < 400; ++t) {
            double f = cdf_zz(t, 0.5, 0.5);
            ok = ok && f >= prev - 1e-15;
            prev = f;
        }
        ok = ok && prev > 1 - 1e-12;
        add("F_ZZ(0) = 0, F_ZZ(1) = p_m p_u^2, non-decreasing to 1", ok, "");
    }
    {
        double worst = 0.0;
        for (double p_u : {0.4, 0.6, 0.8}) {
            for (std::size_t L : {8, 64}) {
                worst = std::max(worst, std::abs(mean_tau_zz(L, p_u, 1.0) - mean_time_pm1(L, p_u)));
                worst = std::max(worst, std::abs(mean_tau_zz(L, 1.0, p_u) - mean_time_pu1(L, p_u)));
            }
        }
        add("Markov order statistic reduces to the p_m = 1 and p_u = 1 means", worst < 1e-9, "max deviation " + fmt(worst));
    }
    return report;
}

std::vector<std::string> validation_suites() {
    return {"tableau-vs-dense", "markov-vs-mc", "monotonicity", "analytics-closed-forms"};
}

ValidationReport run_validation_suite(const std::string &suite, std::uint64_t seed, std::size_t size_hint) {
    if (suite == "tableau-vs-dense") {
        return validate_tableau_vs_dense(size_hint ? size_hint : 200, seed);
    }
    if (suite == "markov-vs-mc") {
        return validate_markov_vs_mc(size_hint ? size_hint : 100000, 20, seed);
    }
    if (suite == "monotonicity") {
        return validate_monotonicity(size_hint ? size_hint : 100, {0.7, 1.3}, seed);
    }
    if (suite == "analytics-closed-forms") {
        return validate_analytics_closed_forms();
    }
    std::string known;
    for (const auto &s : validation_suites()) {
        known += (known.empty() ? "" : ", ") + s;
    }
    throw std::invalid_argument("unknown validation suite '" + suite + "' (available: " + known + ")");
}

}  // namespace stochlre
