# Copyright 2026 The stochlre Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import math

import pytest

import stochlre

CONFIG = """
[experiment]
seed = 5
trajectories = 200
[lattice]
kind = chain
sizes = 8, 16
[protocol]
p_u = 0.6
p_m = 1
"""


def test_analytics():
    assert stochlre.p_x(0.5, 0.5) == pytest.approx(0.75)
    assert stochlre.mean_time_pm1(8, 1.0) == pytest.approx(1.0)
    assert stochlre.mean_time_pu1(64, 1.0) == pytest.approx(1.0)
    a = stochlre.markov_matrix(0.6, 0.8)
    for j in range(6):
        assert sum(a[i][j] for i in range(6)) == pytest.approx(1.0, abs=1e-12)


def test_tableau():
    t = stochlre.Tableau.product_state(3)
    assert t.expectation("XII") == -1
    t.zz_rotation(0, 1)
    t.zz_rotation(1, 2)
    value, deterministic = t.measure("IXI", 0.1)
    assert not deterministic
    assert t.expectation("ZIZ") == value
    assert t.entropy([0]) == pytest.approx(math.log(2))


def test_trajectory_exact():
    r = stochlre.run_trajectory("chain", 64, 1.0, 1.0, seed=1)
    assert r["tau"] == 1
    assert not r["censored"]


def test_simulate_matches_prediction():
    out = stochlre.simulate(CONFIG)
    rows = out["results"]
    assert [r["L"] for r in rows] == [8.0, 16.0]
    for r in rows:
        assert r["config_hash"] == stochlre.config_hash(CONFIG)
        assert abs(r["mean_tau"] - stochlre.mean_time_pm1(int(r["L"]), 0.6)) < 4 * r["stderr"]
    again = stochlre.simulate(CONFIG, experiment__workers=2)
    assert again["results"] == rows
    assert '"config_hash"' in out["manifest"]


def test_config_errors():
    with pytest.raises(stochlre.ConfigError, match=":4:"):
        stochlre.simulate("[experiment]\nseed = 1\n[protocol]\np_u = 3\n")
    with pytest.raises(stochlre.BudgetExceeded):
        stochlre.simulate(CONFIG, lattice__sizes="4000", experiment__budget="1000")


def test_predict_and_validate():
    rows = stochlre.predict("markov-cdf", t=1, p_u=0.6, p_m=0.8)
    assert rows[0]["cdf_zz"] == pytest.approx(0.288)
    assert "fig4a" in stochlre.figure_ids()
    report = stochlre.validate("analytics-closed-forms")
    assert report["pass"], report


def test_manifest_schema():
    import json
    import pathlib

    jsonschema = pytest.importorskip("jsonschema")
    schema_path = pathlib.Path(__file__).resolve().parents[2] / "docs" / "manifest.schema.json"
    schema = json.loads(schema_path.read_text())
    manifest = json.loads(stochlre.simulate(CONFIG)["manifest"])
    jsonschema.validate(manifest, schema)
