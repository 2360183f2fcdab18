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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stochlre/analytics.h"
#include "stochlre/ensemble.h"
#include "stochlre/experiment.h"
#include "stochlre/tableau.h"
#include "stochlre/validation.h"

namespace py = pybind11;
using namespace stochlre;

namespace {

py::dict table_dict(const Table &t) {
    py::dict d;
    d["columns"] = t.columns;
    d["rows"] = t.rows;
    return d;
}

ExperimentConfig config_from(const std::string &text, const std::map<std::string, std::string> &overrides) {
    auto file = ConfigFile::parse(text, "<python>");
    for (const auto &[k, v] : overrides) {
        file.set(k, v);
    }
    auto cfg = ExperimentConfig::from_file(file);
    cfg.validate();
    return cfg;
}

py::dict simulate(const std::string &text, const std::map<std::string, std::string> &overrides) {
    auto cfg = config_from(text, overrides);
    check_budget(cfg);
    std::vector<PointResult> res;
    {
        py::gil_scoped_release release;
        res = run_experiment(cfg);
    }
    py::dict d;
    d["results"] = table_dict(results_table(cfg, res));
    if (cfg.mode == RecordMode::Series) {
        d["series"] = table_dict(series_table(cfg, res));
    }
    d["manifest"] = manifest_json("simulate", cfg, res, 0.0, {});
    return d;
}

py::dict report_dict(const ValidationReport &r) {
    py::dict d;
    d["suite"] = r.suite;
    d["pass"] = r.pass();
    py::list cases;
    for (const auto &c : r.cases) {
        py::dict cd;
        cd["name"] = c.name;
        cd["pass"] = c.pass;
        cd["detail"] = c.detail;
        cases.append(cd);
    }
    d["cases"] = cases;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Measurement-based preparation of long-range entangled states";
    m.attr("__version__") = STOCHLRE_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    py::enum_<ProductBasis>(m, "ProductBasis")
        .value("AllMinusX", ProductBasis::AllMinusX)
        .value("AllPlusX", ProductBasis::AllPlusX)
        .value("AllZeroZ", ProductBasis::AllZeroZ);

    py::class_<Tableau>(m, "Tableau")
        .def_static("product_state", &Tableau::product_state, py::arg("num_qubits"),
                    py::arg("basis") = ProductBasis::AllMinusX)
        .def_property_readonly("num_qubits", &Tableau::num_qubits)
        .def("h", &Tableau::h)
        .def("s", &Tableau::s)
        .def("cx", &Tableau::cx)
        .def("x", &Tableau::x)
        .def("z", &Tableau::z)
        .def("zz_rotation", &Tableau::apply_zz_rotation)
        .def("xx_rotation", &Tableau::apply_xx_rotation)
        .def(
            "measure",
            [](Tableau &t, const std::string &pauli, double u) {
                auto r = t.measure_pauli(PauliString::parse(pauli), u);
                return py::make_tuple(r.value, r.deterministic);
            },
            py::arg("pauli"), py::arg("u") = 0.0)
        .def("expectation", [](const Tableau &t, const std::string &p) { return t.expectation(PauliString::parse(p)); })
        .def("entropy",
             [](const Tableau &t, const std::vector<std::size_t> &region) { return t.entanglement_entropy(region); })
        .def("stabilizers", [](const Tableau &t) {
            std::vector<std::string> out;
            for (const auto &p : t.stabilizers()) {
                out.push_back(p.str());
            }
            return out;
        });

    m.def("mean_time_pm1", &mean_time_pm1, py::arg("L"), py::arg("p_u"));
    m.def("mean_time_pu1", &mean_time_pu1, py::arg("L"), py::arg("p_m"));
    m.def("mean_time_lieb", &mean_time_lieb, py::arg("L"), py::arg("p_m"));
    m.def("tau_naive", &tau_naive, py::arg("L"), py::arg("p"));
    m.def("log_mean_time", &log_mean_time, py::arg("L"), py::arg("p"));
    m.def("second_largest_mean", &second_largest_mean, py::arg("n"), py::arg("p"));
    m.def("tau_fidelity", &tau_fidelity, py::arg("phi"), py::arg("p"), py::arg("L"));
    m.def("halting_layer", &halting_layer, py::arg("phi"), py::arg("p_u"), py::arg("p_m"), py::arg("L"));
    m.def("cdf_zz", &cdf_zz, py::arg("t"), py::arg("p_u"), py::arg("p_m"));
    m.def("p_x", &p_x, py::arg("p_u"), py::arg("p_m"));
    m.def("tau_z2", &tau_z2, py::arg("L"), py::arg("p_u"), py::arg("p_m"));
    m.def("mean_tau_zz", &mean_tau_zz, py::arg("L"), py::arg("p_u"), py::arg("p_m"));
    m.def("combined_mean_time", &combined_mean_time, py::arg("L"), py::arg("p_u"), py::arg("p_m"));
    m.def("log_coefficient", &log_coefficient, py::arg("p_u"), py::arg("p_m"));
    m.def(
        "markov_matrix", [](double p_u, double p_m) { return markov_chain(p_u, p_m).a; }, py::arg("p_u"),
        py::arg("p_m"));
    m.def(
        "coin_toss_square",
        [](std::size_t L, double p_m, std::uint64_t seed, std::size_t runs) {
            auto r = coin_toss_square(L, p_m, seed, runs);
            return py::make_tuple(r.mean_tau, r.stderr_tau);
        },
        py::arg("L"), py::arg("p_m"), py::arg("seed"), py::arg("runs"));

    m.def(
        "run_trajectory",
        [](const std::string &lattice, std::size_t L, double p_u, double p_m, std::uint64_t seed, std::uint64_t id) {
            auto lat = Lattice::make(parse_lattice_kind(lattice), L);
            ProtocolParams p;
            p.p_u = p_u;
            p.p_m = p_m;
            p.seed = seed;
            p.validate(lat);
            auto r = run_trajectory(lat, p, RecordOptions{}, id);
            py::dict d;
            d["tau"] = r.tau ? py::cast(*r.tau) : py::none();
            d["tau_zz"] = r.tau_zz ? py::cast(*r.tau_zz) : py::none();
            d["tau_z2"] = r.tau_z2 ? py::cast(*r.tau_z2) : py::none();
            d["layers_run"] = r.layers_run;
            d["censored"] = r.censored;
            return d;
        },
        py::arg("lattice"), py::arg("L"), py::arg("p_u"), py::arg("p_m"), py::arg("seed"), py::arg("trajectory") = 0);

    m.def("simulate", &simulate, py::arg("config"), py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "config_hash",
        [](const std::string &text, const std::map<std::string, std::string> &overrides) {
            return config_from(text, overrides).hash_hex();
        },
        py::arg("config"), py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "predict", [](const std::string &kind, const std::map<std::string, std::vector<double>> &params) {
            return table_dict(predict_table(kind, params));
        },
        py::arg("kind"), py::arg("params"));
    m.def("predict_kinds", &predict_kinds);
    m.def("figure_ids", &figure_ids);
    m.def(
        "validate",
        [](const std::string &suite, std::uint64_t seed, std::size_t size_hint) {
            py::gil_scoped_release release;
            auto r = run_validation_suite(suite, seed, size_hint);
            py::gil_scoped_acquire acquire;
            return report_dict(r);
        },
        py::arg("suite"), py::arg("seed") = 2026, py::arg("size_hint") = 0);
    m.def("validation_suites", &validation_suites);
}
