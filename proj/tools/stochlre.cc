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
// Command-line front end: simulate | predict | validate | figure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochlre/experiment.h"
#include "stochlre/validation.h"

namespace {

using namespace stochlre;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBudget = 2;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::uint64_t> t_max;
    std::optional<std::size_t> trajectories;
    std::vector<std::string> sets;
    bool quiet = false;
};

void add_common(CLI::App *cmd, CommonFlags &f, bool with_config) {
    if (with_config) {
        cmd->add_option("--config", f.config, "Experiment config file");
        cmd->add_option("--set", f.sets, "Override a config entry, e.g. --set protocol.p_m=0.5");
        cmd->add_option("--t-max", f.t_max, "Maximum layers per trajectory");
        cmd->add_option("--workers", f.workers, "Worker threads");
    }
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--trajectories", f.trajectories, "Trajectories per point");
    cmd->add_option("--out", f.out, "Output path prefix");
    cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("-q,--quiet", f.quiet, "No progress on stderr");
}

/// Config file entries, then --set, then the dedicated flags.
ConfigFile layered_config(const CommonFlags &f) {
    ConfigFile file = f.config.empty() ? ConfigFile::parse("", "<flags>") : ConfigFile::load(f.config);
    for (const auto &s : f.sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set", 0, "expected key=value, got '" + s + "'");
        }
        file.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (f.seed) file.set("experiment.seed", std::to_string(*f.seed));
    if (f.workers) file.set("experiment.workers", std::to_string(*f.workers));
    if (f.t_max) file.set("experiment.t_max", std::to_string(*f.t_max));
    if (f.trajectories) file.set("experiment.trajectories", std::to_string(*f.trajectories));
    if (f.out) file.set("output.path", *f.out);
    if (f.format) file.set("output.format", *f.format);
    return file;
}

std::string strip_extension(std::string path) {
    for (const char *ext : {".csv", ".json"}) {
        std::string e = ext;
        if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0) {
            return path.substr(0, path.size() - e.size());
        }
    }
    return path;
}

void ensure_parent(const std::string &path) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent);
    }
}

std::string write_table(const Table &t, const std::string &prefix, const std::string &format) {
    std::string path = prefix + "." + format;
    ensure_parent(path);
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + path);
    }
    if (format == "json") {
        t.write_json(os);
    } else {
        t.write_csv(os);
    }
    return path;
}

void write_text(const std::string &path, const std::string &text) {
    ensure_parent(path);
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + path);
    }
    os << text;
}

ProgressFn progress_printer(bool quiet) {
    if (quiet) {
        return {};
    }
    return [](std::size_t done, std::size_t total, const GridPoint &pt) {
        std::fprintf(stderr, "[%zu/%zu] L=%zu p_u=%s p_m=%s theta=%s gamma_x=%s\n", done, total, pt.L,
                     format_number(pt.p_u).c_str(), format_number(pt.p_m).c_str(), format_number(pt.theta).c_str(),
                     format_number(pt.gamma_x).c_str());
    };
}

int cmd_simulate(const CommonFlags &f) {
    if (f.config.empty() && f.sets.empty()) {
        throw ConfigError("simulate", 0, "--config is required");
    }
    auto file = layered_config(f);
    auto cfg = ExperimentConfig::from_file(file, true);
    check_budget(cfg);
    auto start = std::chrono::steady_clock::now();
    auto results = run_experiment(cfg, progress_printer(f.quiet));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto prefix = strip_extension(cfg.out);
    std::vector<std::string> outputs{write_table(results_table(cfg, results), prefix, cfg.format)};
    if (cfg.mode == RecordMode::Series) {
        outputs.push_back(write_table(series_table(cfg, results), prefix + ".series", cfg.format));
    }
    std::string manifest = prefix + ".manifest.json";
    write_text(manifest, manifest_json("simulate", cfg, results, wall, outputs));
    for (const auto &o : outputs) {
        std::cout << o << "\n";
    }
    std::cout << manifest << "\n";
    return kExitOk;
}

int cmd_figure(const std::string &id, const CommonFlags &f) {
    auto cfg = figure_config(id);
    cfg.out = id;
    cfg.apply(layered_config(f));
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    auto table = run_figure(id, cfg, progress_printer(f.quiet));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto prefix = strip_extension(cfg.out);
    auto path = write_table(table, prefix, cfg.format);
    std::string manifest = prefix + ".manifest.json";
    write_text(manifest, manifest_json("figure " + id, cfg, {}, wall, {path}));
    std::cout << path << "\n" << manifest << "\n";
    return kExitOk;
}

int cmd_predict(const std::string &kind, const std::vector<std::string> &args, const CommonFlags &f) {
    std::map<std::string, std::vector<double>> params;
    for (const auto &a : args) {
        auto eq = a.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("expected name=value, got '" + a + "'");
        }
        params[a.substr(0, eq)] = parse_number_list(a.substr(eq + 1));
    }
    if (f.seed && !params.contains("seed")) {
        params["seed"] = {static_cast<double>(*f.seed)};
    }
    if (f.trajectories && !params.contains("runs")) {
        params["runs"] = {static_cast<double>(*f.trajectories)};
    }
    auto table = predict_table(kind, params);
    std::string format = f.format.value_or("csv");
    if (f.out) {
        std::cout << write_table(table, strip_extension(*f.out), format) << "\n";
    } else if (format == "json") {
        table.write_json(std::cout);
    } else {
        table.write_csv(std::cout);
    }
    return kExitOk;
}

int cmd_validate(const std::string &suite, const CommonFlags &f) {
    std::uint64_t seed = f.seed.value_or(2026);
    std::size_t size = f.trajectories.value_or(0);
    auto report = run_validation_suite(suite, seed, size);
    nlohmann::ordered_json verdict;
    verdict["suite"] = report.suite;
    verdict["seed"] = seed;
    verdict["pass"] = report.pass();
    verdict["failures"] = report.failures();
    for (const auto &c : report.cases) {
        verdict["cases"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    for (const auto &c : report.cases) {
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
    }
    std::string text = verdict.dump(2) + "\n";
    if (f.out) {
        std::string path = strip_extension(*f.out) + ".json";
        write_text(path, text);
        std::cout << path << "\n";
    } else {
        std::cout << text;
    }
    if (!report.pass()) {
        std::cerr << report.failures() << " case(s) failed in " << suite << " (seed " << seed << ")\n";
        return kExitConfig;
    }
    return kExitOk;
}

std::string joined(const std::vector<std::string> &xs) {
    std::string out;
    for (const auto &x : xs) {
        out += (out.empty() ? "" : ", ") + x;
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"stochlre: stochastic measurement-feedback protocols for long-range entangled states"};
    app.set_version_flag("--version", std::string(STOCHLRE_VERSION));
    app.require_subcommand(1);

    CommonFlags sim_flags, fig_flags, pred_flags, val_flags;
    auto *sim = app.add_subcommand("simulate", "Run the ensemble for every point of a config grid");
    add_common(sim, sim_flags, true);

    std::string kind;
    std::vector<std::string> pred_args;
    auto *pred = app.add_subcommand("predict", "Analytic predictions (" + joined(predict_kinds()) + ")");
    pred->add_option("kind", kind, "Prediction kind")->required();
    pred->add_option("params", pred_args, "name=value[,value...] or name=start:stop:step");
    add_common(pred, pred_flags, false);

    std::string suite;
    auto *val = app.add_subcommand("validate", "Cross-validation suites (" + joined(validation_suites()) + ")");
    val->add_option("suite", suite, "Suite name")->required();
    add_common(val, val_flags, false);

    std::string fig_id;
    auto *fig = app.add_subcommand("figure", "Figure data (" + joined(figure_ids()) + ")");
    fig->add_option("id", fig_id, "Figure id")->required();
    add_common(fig, fig_flags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(sim_flags);
        if (*pred) return cmd_predict(kind, pred_args, pred_flags);
        if (*val) return cmd_validate(suite, val_flags);
        if (*fig) return cmd_figure(fig_id, fig_flags);
    } catch (const BudgetExceeded &e) {
        std::cerr << "refusing to run: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
