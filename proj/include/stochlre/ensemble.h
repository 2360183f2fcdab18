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
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stochlre/lattice.h"
#include "stochlre/protocols.h"

namespace stochlre {

struct MeanStat {
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t count = 0;
};

/// Sample mean and stddev / sqrt(count). One sample gives std_err 0.
MeanStat mean_stat(std::span<const double> xs);
/// Mean with the error from `batches` contiguous batch means.
MeanStat batch_mean_stat(std::span<const double> xs, std::size_t batches);

struct SeriesStat {
    std::uint64_t layer = 0;
    MeanStat entropy, locals, globals, i2, i3, yy;
};

struct EnsembleConfig {
    ProtocolParams params;
    RecordOptions options;
    std::size_t trajectories = 100;
    std::size_t workers = 1;
};

struct EnsembleStats {
    std::size_t samples = 0;
    std::size_t censored = 0;
    std::size_t halting_failures = 0;
    /// Means over runs in which the time was recorded.
    MeanStat tau, tau_zz, tau_z2;
    /// Lower bound on the mean of tau counting censored runs at their last layer.
    double tau_lower_bound = 0.0;
    bool all_censored = false;
    /// (tau, count), ascending in tau.
    std::vector<std::pair<std::uint64_t, std::size_t>> tau_histogram;
    std::vector<SeriesStat> series;
    /// Per-trajectory steady-state time averages, combined over trajectories.
    MeanStat steady_entropy, steady_locals, steady_globals, steady_i2, steady_i3, steady_yy;
};

/// Runs trajectories 0..count-1 on `workers` threads. Record k always comes
/// from RngStream(seed, k), and records are returned in index order.
std::vector<TrajectoryRecord> run_trajectories(const Lattice &lat, const ProtocolParams &params,
                                               const RecordOptions &options, std::size_t count, std::size_t workers);

/// Calls `job(k)` for k in [0, count) on a pool of `workers` threads. The
/// first exception thrown by any job is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &job);

EnsembleStats aggregate(std::span<const TrajectoryRecord> records);
EnsembleStats run_ensemble(const Lattice &lat, const EnsembleConfig &config);

struct MeanTimeFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    /// Covariance of (a, b, c).
    std::array<std::array<double, 3>, 3> covariance{};
    double chi2 = 0.0;
    std::vector<double> residuals;
    bool converged = false;

    double sigma_a() const;
    double sigma_b() const;
    double sigma_c() const;
    double predict(double L) const;
};

/// Weighted least squares for tau = a + b log(L/2) + c^{-L/2}. `std_err`
/// entries of 0 (or an empty span) mean unit weights. Needs >= 4 sizes.
MeanTimeFit fit_mean_time(std::span<const double> L, std::span<const double> tau, std::span<const double> std_err = {});

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double sigma_intercept = 0.0;
    double sigma_slope = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct CollapsePoint {
    double L = 0.0;
    double p = 0.0;
    double y = 0.0;
    double std_err = 0.0;
};

struct CollapseFit {
    double p_c = 0.0;
    double nu = 0.0;
    double cost = 0.0;
    /// 16th and 84th percentiles over the bootstrap refits.
    std::pair<double, double> p_c_interval{0.0, 0.0};
    std::pair<double, double> nu_interval{0.0, 0.0};
    std::size_t bootstrap_samples = 0;
    /// Cost varies by less than the tolerance over the search grid.
    bool degenerate = false;
};

struct CollapseOptions {
    double p_c_min = 0.02;
    double p_c_max = 0.98;
    double nu_min = 0.3;
    double nu_max = 4.0;
    std::size_t grid = 6;
    std::size_t bootstrap = 100;
    std::uint64_t seed = 0;
    double flat_tolerance = 1e-6;
};

/// Cost of the collapse y vs (p - p_c) L^{1/nu}: squared deviation of each
/// point from the piecewise-linear curves of the other sizes, over combined
/// variance, averaged over all overlapping pairs.
double collapse_cost(std::span<const CollapsePoint> points, double p_c, double nu);

/// Nelder-Mead over (p_c, log nu) from a grid of starts, then a parametric
/// bootstrap (each y redrawn from N(y, std_err)) for the intervals.
CollapseFit data_collapse(std::span<const CollapsePoint> points, const CollapseOptions &options = {});

}  // namespace stochlre
