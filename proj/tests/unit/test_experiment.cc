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
#include <sstream>

#include "doctest.h"
#include "stochlre/analytics.h"
#include "stochlre/experiment.h"

using namespace stochlre;

namespace {

std::size_t error_line(const std::string &text) {
    try {
        ExperimentConfig::from_file(ConfigFile::parse(text, "t.ini"));
    } catch (const ConfigError &e) {
        return e.line();
    }
    return 9999;
}

std::string csv(const Table &t) {
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

}  // namespace

TEST_SUITE("experiment") {
    TEST_CASE("config parsing") {
        auto file = ConfigFile::parse(R"(# grid
[experiment]
seed = 12
trajectories = 50   # inline comment
[lattice]
kind = lieb
sizes = 4, 6
[protocol]
p_u = 1
p_m = 0.2:0.4:0.1
[record]
mode = steady
observables = entropy, i3
)",
                                      "t.ini");
        auto cfg = ExperimentConfig::from_file(file);
        CHECK(cfg.seed == 12);
        CHECK(cfg.trajectories == 50);
        CHECK(cfg.lattice == LatticeKind::Lieb);
        CHECK(cfg.sizes == std::vector<std::size_t>{4, 6});
        CHECK(cfg.p_m == std::vector<double>{0.2, 0.3, 0.4});
        CHECK(cfg.mode == RecordMode::Steady);
        CHECK(cfg.observables.entropy);
        CHECK(cfg.observables.i3);
        CHECK_FALSE(cfg.observables.i2);
        CHECK(expand_grid(cfg).size() == 6);
        CHECK(file.find("lattice.kind")->line == 6);
    }

    TEST_CASE("diagnostics carry the line") {
        CHECK(error_line("[experiment]\nseed = 1\n[protocol]\np_u = abc\n") == 4);
        CHECK(error_line("[experiment]\nseed = 1\n\n[nosuch]\n") == 4);
        CHECK(error_line("[experiment]\nseed = 1\nflavour = 3\n") == 3);
        CHECK(error_line("[experiment]\nseed = 1\njunk line\n") == 3);
        CHECK(error_line("seed = 1\n") == 1);
        CHECK(error_line("[experiment]\nseed = 1\n[protocol]\np_m = 1.5\n") == 4);
        CHECK(error_line("[experiment]\nseed = 1\n[lattice]\nsizes = 7\n") == 4);
        CHECK(error_line("[experiment]\nseed = 1\n[protocol]\ntheta = 1.5\n") == 4);
        CHECK(error_line("[experiment]\ntrajectories = 10\n") == 0);
        CHECK(error_line("[experiment]\nseed = 1\ntrajectories = 1\n") == 3);
        CHECK_THROWS_AS(ConfigFile::load("/nonexistent/cfg.ini"), ConfigError);
    }

    TEST_CASE("overrides win over file values") {
        auto file = ConfigFile::parse("[experiment]\nseed = 1\ntrajectories = 10\n");
        file.set("experiment.trajectories", "20");
        auto cfg = ExperimentConfig::from_file(file);
        CHECK(cfg.trajectories == 20);
        CHECK_THROWS_AS(file.set("experiment.colour", "red"), ConfigError);
    }

    TEST_CASE("hash covers results-relevant settings only") {
        auto a = ExperimentConfig::from_file(ConfigFile::parse("[experiment]\nseed = 1\nworkers = 1\n"));
        auto b = ExperimentConfig::from_file(
            ConfigFile::parse("[experiment]\nseed = 1\nworkers = 4\n[output]\npath = elsewhere\n"));
        auto c = ExperimentConfig::from_file(ConfigFile::parse("[experiment]\nseed = 2\n"));
        CHECK(a.hash() == b.hash());
        CHECK(a.hash() != c.hash());
        CHECK(a.hash_hex().size() == 16);
        CHECK(a.canonical().find("experiment.seed = 1") != std::string::npos);
    }

    TEST_CASE("number lists") {
        CHECK(parse_number_list("0.1, 0.5") == std::vector<double>{0.1, 0.5});
        CHECK(parse_number_list("0.1:0.5:0.2") == std::vector<double>{0.1, 0.3, 0.5});
        CHECK(parse_number_list("1:3:1, 10") == std::vector<double>{1, 2, 3, 10});
        CHECK_THROWS(parse_number_list("1:0:1"));
        CHECK_THROWS(parse_number_list("x"));
        CHECK(format_number(0.1) == "0.1");
        CHECK(format_number(std::nan("")) == "");
        CHECK(format_number(1e9) == "1e+09");
    }

    TEST_CASE("budget guard") {
        ExperimentConfig cfg;
        cfg.seed = 1;
        cfg.sizes = {400};
        cfg.p_u = {0.5};
        cfg.p_m = {0.5};
        CHECK(estimate_cost(cfg) > cfg.budget);
        CHECK_THROWS_AS(check_budget(cfg), BudgetExceeded);
        cfg.sizes = {8};
        CHECK_NOTHROW(check_budget(cfg));
        GridPoint pt{8, 1.0, 1.0, 1.0, 0.0};
        CHECK(estimate_layers(cfg, pt) == 1.0);
        cfg.mode = RecordMode::Steady;
        cfg.equilibration = 4;
        cfg.window = 32;
        CHECK(estimate_layers(cfg, pt) == 64.0);
        cfg.backend = Backend::Dense;
        cfg.trajectories = 1;
        CHECK(estimate_cost(cfg) == doctest::Approx(64.0 * 8 * 256));
    }

    TEST_CASE("simulate writes one row per point") {
        ExperimentConfig cfg;
        cfg.seed = 4;
        cfg.sizes = {8, 16};
        cfg.p_u = {0.6};
        cfg.p_m = {1.0};
        cfg.trajectories = 1000;
        auto res = run_experiment(cfg);
        REQUIRE(res.size() == 2);
        for (const auto &r : res) {
            CHECK(std::abs(r.stats.tau.mean - mean_time_pm1(r.point.L, 0.6)) < 3 * r.stats.tau.std_err);
        }
        auto t = results_table(cfg, res);
        CHECK(t.rows.size() == 2);
        CHECK(t.columns[0] == "config_hash");
        CHECK(t.columns[1] == "seed");
        CHECK(t.rows[0][0] == cfg.hash_hex());
        CHECK(csv(t) == csv(results_table(cfg, run_experiment(cfg))));
        auto m = manifest_json("simulate", cfg, res, 1.5, {"x.csv"});
        CHECK(m.find("\"config_hash\": \"" + cfg.hash_hex() + "\"") != std::string::npos);
        CHECK(m.find("\"censored\"") != std::string::npos);
    }

    TEST_CASE("series output") {
        ExperimentConfig cfg;
        cfg.seed = 4;
        cfg.sizes = {16};
        cfg.p_u = {0.5};
        cfg.p_m = {0.5};
        cfg.trajectories = 10;
        cfg.mode = RecordMode::Series;
        cfg.layers = 6;
        cfg.stride = 2;
        cfg.observables.entropy = true;
        auto res = run_experiment(cfg);
        auto t = series_table(cfg, res);
        CHECK(t.rows.size() == 4);  // layers 0, 2, 4, 6
    }

    TEST_CASE("predict tables") {
        auto px = predict_table("pX", {{"p_u", {0.5}}, {"p_m", {0.5}}});
        CHECK(px.rows.at(0).at(2) == "0.75");
        auto mc = predict_table("markov-cdf", {{"t", {1}}, {"p_u", {0.6}}, {"p_m", {0.8}}});
        CHECK(std::stod(mc.rows.at(0).at(3)) == doctest::Approx(0.288));
        auto t1 = predict_table("table1", {{"p_u", {1}}, {"p_m", {1}}});
        REQUIRE(t1.rows.size() == 8);
        CHECK(t1.rows[0][3] == "1");
        for (std::size_t k = 1; k < 8; ++k) {
            CHECK(t1.rows[k][3] == "0");
        }
        auto naive = predict_table("naive", {{"L", {8, 16}}, {"p", {0.3, 0.5}}});
        CHECK(naive.rows.size() == 4);
        for (const auto &kind : predict_kinds()) {
            CHECK_FALSE(kind.empty());
        }
        CHECK_THROWS(predict_table("pX", {{"p_u", {2.0}}, {"p_m", {0.5}}}));
        CHECK_THROWS(predict_table("pX", {{"p_u", {0.5}}}));
        CHECK_THROWS(predict_table("pX", {{"p_u", {0.5}}, {"p_m", {0.5}}, {"bogus", {1}}}));
        CHECK_THROWS(predict_table("nope", {}));
    }

    TEST_CASE("figure presets") {
        for (const auto &id : figure_ids()) {
            auto cfg = figure_config(id);
            CHECK_NOTHROW(cfg.validate());
        }
        CHECK_THROWS(figure_config("fig99"));
        auto cfg = figure_config("fig4a");
        cfg.sizes = {8};
        cfg.trajectories = 20;
        auto t = run_figure("fig4a", cfg);
        CHECK(t.columns == std::vector<std::string>{"config_hash", "seed", "L", "p_u", "mean_tau", "stderr", "analytic"});
        CHECK(t.rows.size() == 3);
        auto f16 = figure_config("fig16b");
        f16.sizes = {4};
        f16.p_m = {0.5};
        f16.trajectories = 2;
        f16.equilibration = 1;
        f16.window = 2;
        auto t16 = run_figure("fig16b", f16);
        CHECK(t16.columns == std::vector<std::string>{"config_hash", "seed", "p_m", "L", "I3", "stderr"});
        auto f3 = figure_config("fig3");
        CHECK(f3.sizes == std::vector<std::size_t>{512});
        f3.sizes = {16};
        f3.trajectories = 2;
        f3.layers = 3;
        auto t3 = run_figure("fig3", f3);
        CHECK(t3.columns == std::vector<std::string>{"config_hash", "seed", "t", "S", "S_err", "zz", "zz_err"});
    }

    TEST_CASE("table rendering") {
        Table t;
        t.columns = {"config_hash", "name", "value"};
        t.add_row({"0123", "a,b", "1.5"});
        t.add_row({"0456", "plain", ""});
        CHECK(csv(t) == "config_hash,name,value\n0123,\"a,b\",1.5\n0456,plain,\n");
        std::ostringstream js;
        t.write_json(js);
        CHECK(js.str().find("\"config_hash\": \"0123\"") != std::string::npos);
        CHECK(js.str().find("\"value\": 1.5") != std::string::npos);
        CHECK(js.str().find("\"value\": null") != std::string::npos);
        CHECK_THROWS(t.add_row({"x"}));
    }
}
