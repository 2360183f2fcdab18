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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stochlre/ensemble.h"
#include "stochlre/lattice.h"
#include "stochlre/protocols.h"

namespace stochlre {

/// Configuration problem, with the 1-based line it came from (0 if none).
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string &source, std::size_t line, const std::string &what);
    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

/// Raised when the estimated work exceeds the budget guard.
class BudgetExceeded : public std::runtime_error {
   public:
    BudgetExceeded(double estimate, double limit);
    double estimate() const {
        return estimate_;
    }
    double limit() const {
        return limit_;
    }

   private:
    double estimate_;
    double limit_;
};

/// Flat "section.key" -> value map read from an INI-style file:
///
///   # comment
///   [protocol]
///   p_u = 0.4, 0.6
///
/// Values keep their source line for diagnostics. Later assignments win.
class ConfigFile {
   public:
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };

    static ConfigFile parse(std::string_view text, const std::string &source = "<config>");
    static ConfigFile load(const std::string &path);

    /// Override (e.g. from a command-line flag); line 0 marks the origin.
    void set(const std::string &key, const std::string &value);
    const Entry *find(const std::string &key) const;
    const std::map<std::string, Entry> &entries() const {
        return entries_;
    }
    const std::string &source() const {
        return source_;
    }

   private:
    std::string source_ = "<config>";
    std::map<std::string, Entry> entries_;
};

enum class RecordMode { Tau, Steady, Series };
std::string to_string(RecordMode m);

struct ExperimentConfig {
    LatticeKind lattice = LatticeKind::Chain;
    std::vector<std::size_t> sizes{8};
    std::vector<double> p_u{1.0};
    std::vector<double> p_m{1.0};
    std::vector<double> theta{1.0};
    std::vector<double> gamma_x{0.0};
    GateSet gates = GateSet::ZZ;
    bool decoder = false;
    std::optional<double> halting_phi;
    Backend backend = Backend::Stabilizer;
    BrickOrder brick_order = BrickOrder::EvenFirst;
    std::optional<TargetKind> target;

    std::uint64_t seed = 0;
    std::size_t trajectories = 100;
    std::size_t workers = 1;
    std::uint64_t t_max = 1'000'000;
    double budget = 1e9;

    RecordMode mode = RecordMode::Tau;
    /// Series mode: layers per trajectory and sampling stride.
    std::uint64_t layers = 100;
    std::uint64_t stride = 1;
    /// Steady mode: discard ceil(equilibration * L) layers, then average `window`.
    double equilibration = 4.0;
    std::uint64_t window = 32;
    ObservableSet observables;

    std::string out = "stochlre_out";
    std::string format = "csv";

    /// Where each "section.key" was last set, for diagnostics.
    std::string source = "<config>";
    std::map<std::string, std::size_t> origin;

    /// Builds a config from file entries. Throws ConfigError naming the line.
    static ExperimentConfig from_file(const ConfigFile &file, bool require_seed = true);
    /// Applies entries on top of this config.
    void apply(const ConfigFile &file);
    void validate() const;

    /// Normalized "section.key = value" lines of every setting that affects
    /// results (not workers or output location).
    std::string canonical() const;
    /// FNV-1a 64 of canonical().
    std::uint64_t hash() const;
    std::string hash_hex() const;
};

struct GridPoint {
    std::size_t L = 0;
    double p_u = 0.0;
    double p_m = 0.0;
    double theta = 1.0;
    double gamma_x = 0.0;
};

std::vector<GridPoint> expand_grid(const ExperimentConfig &cfg);
ProtocolParams protocol_params(const ExperimentConfig &cfg, const GridPoint &pt);
RecordOptions record_options(const ExperimentConfig &cfg, const GridPoint &pt);

/// Expected layer-site operations. A dense layer counts n 2^n.
double estimate_cost(const ExperimentConfig &cfg);
double estimate_cost(const ExperimentConfig &cfg, const std::vector<GridPoint> &points);
/// Expected layers of one trajectory at `pt` (t_max where no estimate exists).
double estimate_layers(const ExperimentConfig &cfg, const GridPoint &pt);
/// Throws BudgetExceeded if estimate_cost exceeds cfg.budget.
void check_budget(const ExperimentConfig &cfg);
void check_budget(const ExperimentConfig &cfg, const std::vector<GridPoint> &points);

struct PointResult {
    GridPoint point;
    EnsembleStats stats;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total, const GridPoint &pt)>;
std::vector<PointResult> run_experiment(const ExperimentConfig &cfg, const ProgressFn &progress = {});
/// Same for an explicit list of points (e.g. a filtered grid).
std::vector<PointResult> run_points(const ExperimentConfig &cfg, const std::vector<GridPoint> &points,
                                    const ProgressFn &progress = {});

/// Small text table with CSV and JSON renderings.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    void write_csv(std::ostream &os) const;
    /// Array of objects; numeric-looking cells become JSON numbers.
    void write_json(std::ostream &os) const;
};

/// "a, b, c" or "start:stop:step" ranges; throws std::invalid_argument.
std::vector<double> parse_number_list(const std::string &text);

/// Shortest round-trip formatting ("" for NaN).
std::string format_number(double v);

/// One row per grid point.
Table results_table(const ExperimentConfig &cfg, const std::vector<PointResult> &results);
/// One row per (grid point, sampled layer).
Table series_table(const ExperimentConfig &cfg, const std::vector<PointResult> &results);

/// JSON manifest (config echo, version, seed, hash, wall time, censoring).
std::string manifest_json(const std::string &command, const ExperimentConfig &cfg,
                          const std::vector<PointResult> &results, double wall_seconds,
                          const std::vector<std::string> &outputs);

/// Analytic prediction tables. `kind` is one of predict_kinds(); `params`
/// maps names (L, p, p_u, p_m, phi, t, runs, seed, mode) to value lists.
Table predict_table(const std::string &kind, const std::map<std::string, std::vector<double>> &params);
std::vector<std::string> predict_kinds();

/// Figure presets: an experiment (or several) plus a tidy output table.
std::vector<std::string> figure_ids();
/// Preset configuration of a figure, before user overrides.
ExperimentConfig figure_config(const std::string &id);
/// Runs the figure with the given (already overridden) configuration.
Table run_figure(const std::string &id, const ExperimentConfig &cfg, const ProgressFn &progress = {});

}  // namespace stochlre
