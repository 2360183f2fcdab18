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
#include "stochlre/ensemble.h"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <atomic>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "stochlre/rng.h"

namespace stochlre {

MeanStat mean_stat(std::span<const double> xs) {
    MeanStat s;
    double sum = 0.0;
    for (double x : xs) {
        if (!std::isnan(x)) {
            sum += x;
            ++s.count;
        }
    }
    if (s.count == 0) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        s.std_err = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double x : xs) {
            if (!std::isnan(x)) {
                ss += (x - s.mean) * (x - s.mean);
            }
        }
        s.std_err = std::sqrt(ss / static_cast<double>(s.count - 1) / static_cast<double>(s.count));
    }
    return s;
}

MeanStat batch_mean_stat(std::span<const double> xs, std::size_t batches) {
    if (batches < 2 || xs.size() < 2 * batches) {
        return mean_stat(xs);
    }
    std::size_t per = xs.size() / batches;
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b) {
        means.push_back(mean_stat(xs.subspan(b * per, per)).mean);
    }
    MeanStat s = mean_stat(means);
    s.mean = mean_stat(xs).mean;
    s.count = xs.size();
    return s;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &job) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            job(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!stop.load(std::memory_order_relaxed)) {
                std::size_t k = next.fetch_add(1);
                if (k >= count) {
                    return;
                }
                try {
                    job(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    stop = true;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<TrajectoryRecord> run_trajectories(const Lattice &lat, const ProtocolParams &params,
                                               const RecordOptions &options, std::size_t count, std::size_t workers) {
    params.validate(lat);
    std::vector<TrajectoryRecord> records(count);
    parallel_for(count, workers, [&](std::size_t k) { records[k] = run_trajectory(lat, params, options, k); });
    return records;
}

namespace {

MeanStat steady_stat(std::span<const TrajectoryRecord> records, double Sample::*field) {
    std::vector<double> xs;
    xs.reserve(records.size());
    for (const auto &r : records) {
        xs.push_back(r.steady.*field);
    }
    return mean_stat(xs);
}

MeanStat time_stat(std::span<const TrajectoryRecord> records, std::optional<std::uint64_t> TrajectoryRecord::*field) {
    std::vector<double> xs;
    for (const auto &r : records) {
        if (r.*field) {
            xs.push_back(static_cast<double>(*(r.*field)));
        }
    }
    return mean_stat(xs);
}

}  // namespace

EnsembleStats aggregate(std::span<const TrajectoryRecord> records) {
    EnsembleStats st;
    st.samples = records.size();
    std::map<std::uint64_t, std::size_t> hist;
    double bound = 0.0;
    for (const auto &r : records) {
        st.censored += r.censored ? 1 : 0;
        st.halting_failures += r.halting_failure ? 1 : 0;
        if (r.tau) {
            ++hist[*r.tau];
        }
        bound += static_cast<double>(r.tau.value_or(r.layers_run));
    }
    st.tau = time_stat(records, &TrajectoryRecord::tau);
    st.tau_zz = time_stat(records, &TrajectoryRecord::tau_zz);
    st.tau_z2 = time_stat(records, &TrajectoryRecord::tau_z2);
    st.tau_lower_bound = records.empty() ? 0.0 : bound / static_cast<double>(records.size());
    st.all_censored = !records.empty() && st.censored == records.size();
    st.tau_histogram.assign(hist.begin(), hist.end());

    std::size_t longest = 0;
    for (const auto &r : records) {
        longest = std::max(longest, r.series.size());
    }
    for (std::size_t k = 0; k < longest; ++k) {
        SeriesStat s;
        std::vector<double> col[6];
        for (const auto &r : records) {
            if (k >= r.series.size()) {
                continue;
            }
            const Sample &x = r.series[k];
            if (s.layer == 0) {
                s.layer = x.layer;
            } else if (s.layer != x.layer) {
                throw std::logic_error("series layers differ between trajectories");
            }
            col[0].push_back(x.entropy);
            col[1].push_back(x.locals);
            col[2].push_back(x.globals);
            col[3].push_back(x.i2);
            col[4].push_back(x.i3);
            col[5].push_back(x.yy);
        }
        s.entropy = mean_stat(col[0]);
        s.locals = mean_stat(col[1]);
        s.globals = mean_stat(col[2]);
        s.i2 = mean_stat(col[3]);
        s.i3 = mean_stat(col[4]);
        s.yy = mean_stat(col[5]);
        st.series.push_back(s);
    }
    st.steady_entropy = steady_stat(records, &Sample::entropy);
    st.steady_locals = steady_stat(records, &Sample::locals);
    st.steady_globals = steady_stat(records, &Sample::globals);
    st.steady_i2 = steady_stat(records, &Sample::i2);
    st.steady_i3 = steady_stat(records, &Sample::i3);
    st.steady_yy = steady_stat(records, &Sample::yy);
    return st;
}

EnsembleStats run_ensemble(const Lattice &lat, const EnsembleConfig &config) {
    if (config.trajectories < 2) {
        throw std::invalid_argument("an ensemble needs at least two trajectories");
    }
    auto records = run_trajectories(lat, config.params, config.options, config.trajectories, config.workers);
    return aggregate(records);
}

double MeanTimeFit::sigma_a() const {
    return std::sqrt(covariance[0][0]);
}
double MeanTimeFit::sigma_b() const {
    return std::sqrt(covariance[1][1]);
}
double MeanTimeFit::sigma_c() const {
    return std::sqrt(covariance[2][2]);
}
double MeanTimeFit::predict(double L) const {
    return a + b * std::log(L / 2) + std::pow(c, -L / 2);
}

namespace {

struct LinearSolve {
    double a = 0.0, b = 0.0, chi2 = 0.0;
};

/// Weighted least squares of y on (1, x).
LinearSolve weighted_line(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    double det = sw * sxx - sx * sx;
    if (!(std::abs(det) > 0.0)) {
        throw std::invalid_argument("degenerate abscissae in line fit");
    }
    LinearSolve r;
    r.b = (sw * sxy - sx * sy) / det;
    r.a = (sy - r.b * sx) / sw;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = y[i] - r.a - r.b * x[i];
        r.chi2 += w[i] * d * d;
    }
    return r;
}

}  // namespace

MeanTimeFit fit_mean_time(std::span<const double> L, std::span<const double> tau, std::span<const double> err) {
    std::size_t n = L.size();
    if (tau.size() != n || (!err.empty() && err.size() != n)) {
        throw std::invalid_argument("fit_mean_time: length mismatch");
    }
    std::vector<double> sizes(L.begin(), L.end());
    std::sort(sizes.begin(), sizes.end());
    if (std::unique(sizes.begin(), sizes.end()) - sizes.begin() < 4) {
        throw std::invalid_argument("fit_mean_time needs at least four system sizes");
    }
    bool weighted = !err.empty() && std::all_of(err.begin(), err.end(), [](double e) { return e > 0.0; });
    std::vector<double> x(n), w(n, 1.0), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(L[i] / 2);
        h[i] = L[i] / 2;
        if (weighted) {
            w[i] = 1.0 / (err[i] * err[i]);
        }
    }
    auto profile = [&](double u) {
        // c = exp(u); y' = tau - c^{-L/2}
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = tau[i] - std::exp(-u * h[i]);
        }
        return weighted_line(x, y, w);
    };
    const double u_lo = std::log(0.3), u_hi = std::log(50.0);
    constexpr int kGrid = 400;
    int best = 0;
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kGrid; ++k) {
        double u = u_lo + (u_hi - u_lo) * k / kGrid;
        double c2 = profile(u).chi2;
        if (c2 < best_chi2) {
            best_chi2 = c2;
            best = k;
        }
    }
    double step = (u_hi - u_lo) / kGrid;
    double lo = u_lo + step * std::max(0, best - 1);
    double hi = u_lo + step * std::min(kGrid, best + 1);
    std::uintmax_t iters = 200;
    auto [u_best, chi2] =
        boost::math::tools::brent_find_minima([&](double u) { return profile(u).chi2; }, lo, hi, 52, iters);

    MeanTimeFit fit;
    auto lin = profile(u_best);
    fit.a = lin.a;
    fit.b = lin.b;
    fit.c = std::exp(u_best);
    fit.chi2 = chi2;
    fit.converged = iters < 200 && std::isfinite(chi2);
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals.push_back(tau[i] - fit.predict(L[i]));
    }
    Eigen::Matrix3d jtwj = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Vector3d j(1.0, x[i], -h[i] * std::pow(fit.c, -h[i] - 1.0));
        jtwj += w[i] * j * j.transpose();
    }
    // Scale by the reduced chi^2 when it exceeds 1 (always for unit weights).
    double dof = static_cast<double>(n) - 3.0;
    double scale = dof > 0 ? chi2 / dof : 1.0;
    if (weighted) {
        scale = std::max(1.0, scale);
    }
    Eigen::Matrix3d cov = jtwj.completeOrthogonalDecomposition().pseudoInverse() * scale;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            fit.covariance[r][c] = cov(r, c);
        }
    }
    return fit;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    std::size_t n = x.size();
    if (y.size() != n || n < 3) {
        throw std::invalid_argument("fit_line needs at least three matching points");
    }
    std::vector<double> w(n, 1.0);
    auto r = weighted_line(x, y, w);
    LinearFit fit;
    fit.intercept = r.a;
    fit.slope = r.b;
    double my = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        my += y[i];
        mx += x[i];
    }
    my /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    double sst = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sst += (y[i] - my) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    fit.r2 = sst > 0 ? 1.0 - r.chi2 / sst : 1.0;
    double s2 = r.chi2 / static_cast<double>(n - 2);
    fit.sigma_slope = std::sqrt(s2 / sxx);
    double sx2 = 0.0;
    for (double v : x) {
        sx2 += v * v;
    }
    fit.sigma_intercept = std::sqrt(s2 * sx2 / (static_cast<double>(n) * sxx));
    return fit;
}

namespace {

constexpr double kInfeasible = 1e30;

struct Group {
    std::vector<double> x, y, var;
};

}  // namespace

double collapse_cost(std::span<const CollapsePoint> points, double p_c, double nu) {
    if (!(nu > 0.0)) {
        return kInfeasible;
    }
    std::map<double, std::vector<std::pair<double, const CollapsePoint *>>> by_size;
    for (const auto &pt : points) {
        by_size[pt.L].emplace_back((pt.p - p_c) * std::pow(pt.L, 1.0 / nu), &pt);
    }
    std::vector<std::pair<double, Group>> groups;
    for (auto &[L, pts] : by_size) {
        std::sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
        Group g;
        for (auto &[x, pt] : pts) {
            g.x.push_back(x);
            g.y.push_back(pt->y);
            g.var.push_back(pt->std_err * pt->std_err);
        }
        groups.emplace_back(L, std::move(g));
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (const auto &[L, g] : groups) {
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            for (const auto &[L2, other] : groups) {
                if (L2 == L || other.x.size() < 2 || g.x[i] < other.x.front() || g.x[i] > other.x.back()) {
                    continue;
                }
                auto it = std::upper_bound(other.x.begin(), other.x.end(), g.x[i]);
                std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - other.x.begin()),
                                                      other.x.size() - 1);
                std::size_t j = k - 1;
                double span = other.x[k] - other.x[j];
                double f = span > 0 ? (g.x[i] - other.x[j]) / span : 0.0;
                double yi = other.y[j] + f * (other.y[k] - other.y[j]);
                double vi = (1 - f) * other.var[j] + f * other.var[k];
                double d = g.y[i] - yi;
                sum += d * d / std::max(g.var[i] + vi, 1e-12);
                ++pairs;
            }
        }
    }
    if (pairs < std::max<std::size_t>(2, points.size() / 2)) {
        return kInfeasible;
    }
    return sum / static_cast<double>(pairs);
}

namespace {

struct CollapseProblem {
    std::span<const CollapsePoint> points;
    const CollapseOptions *options;
};

double collapse_objective(const gsl_vector *v, void *params) {
    const auto *prob = static_cast<const CollapseProblem *>(params);
    double p_c = gsl_vector_get(v, 0);
    double nu = std::exp(gsl_vector_get(v, 1));
    const auto &o = *prob->options;
    if (p_c < o.p_c_min || p_c > o.p_c_max || nu < o.nu_min || nu > o.nu_max) {
        return kInfeasible;
    }
    return collapse_cost(prob->points, p_c, nu);
}

struct Minimum {
    double p_c, nu, cost;
};

Minimum nelder_mead(const CollapseProblem &prob, double p_c, double nu) {
    gsl_multimin_function f{&collapse_objective, 2, const_cast<CollapseProblem *>(&prob)};
    gsl_vector *x = gsl_vector_alloc(2);
    gsl_vector *step = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, p_c);
    gsl_vector_set(x, 1, std::log(nu));
    gsl_vector_set(step, 0, 0.05);
    gsl_vector_set(step, 1, 0.2);
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(s, &f, x, step);
    for (int it = 0; it < 1000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != 0) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7) == GSL_SUCCESS) {
            break;
        }
    }
    Minimum m{gsl_vector_get(s->x, 0), std::exp(gsl_vector_get(s->x, 1)), s->fval};
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return m;
}

double percentile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    double pos = q * static_cast<double>(xs.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace

CollapseFit data_collapse(std::span<const CollapsePoint> points, const CollapseOptions &options) {
    std::vector<double> sizes;
    for (const auto &pt : points) {
        sizes.push_back(pt.L);
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 3 || sizes.back() < 4 * sizes.front()) {
        throw std::invalid_argument("data_collapse needs >= 3 sizes spanning a factor >= 4");
    }
    if (options.grid < 2) {
        throw std::invalid_argument("data_collapse needs a start grid of at least 2 x 2");
    }
    CollapseProblem prob{points, &options};
    CollapseFit fit;
    Minimum best{0, 0, std::numeric_limits<double>::infinity()};
    double grid_min = std::numeric_limits<double>::infinity(), grid_max = 0.0;
    std::size_t g = options.grid;
    for (std::size_t i = 0; i < g; ++i) {
        // Starts strictly inside the box.
        double p_c = options.p_c_min + (options.p_c_max - options.p_c_min) * (i + 0.5) / static_cast<double>(g);
        for (std::size_t j = 0; j < g; ++j) {
            double lnu = std::log(options.nu_min) +
                         (std::log(options.nu_max) - std::log(options.nu_min)) * (j + 0.5) / static_cast<double>(g);
            double nu = std::exp(lnu);
            double c0 = collapse_cost(points, p_c, nu);
            if (c0 < kInfeasible) {
                grid_min = std::min(grid_min, c0);
                grid_max = std::max(grid_max, c0);
            }
            Minimum m = nelder_mead(prob, p_c, nu);
            if (m.cost < best.cost) {
                best = m;
            }
        }
    }
    fit.p_c = best.p_c;
    fit.nu = best.nu;
    fit.cost = best.cost;
    fit.degenerate = !(grid_max - grid_min > options.flat_tolerance * std::max(1.0, std::abs(grid_min))) ||
                     best.cost >= kInfeasible;

    std::vector<double> pcs, nus;
    std::vector<CollapsePoint> resampled(points.begin(), points.end());
    for (std::size_t b = 0; b < options.bootstrap; ++b) {
        RngStream rng(options.seed, b);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            resampled[i].y = points[i].y + points[i].std_err * gauss(rng);
        }
        CollapseProblem bp{resampled, &options};
        Minimum m = nelder_mead(bp, best.p_c, best.nu);
        if (m.cost < kInfeasible) {
            pcs.push_back(m.p_c);
            nus.push_back(m.nu);
        }
    }
    fit.bootstrap_samples = pcs.size();
    if (!pcs.empty()) {
        fit.p_c_interval = {percentile(pcs, 0.16), percentile(pcs, 0.84)};
        fit.nu_interval = {percentile(nus, 0.16), percentile(nus, 0.84)};
    } else {
        fit.p_c_interval = {fit.p_c, fit.p_c};
        fit.nu_interval = {fit.nu, fit.nu};
    }
    return fit;
}

}  // namespace stochlre
