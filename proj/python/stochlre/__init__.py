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
"""Python bindings for the stochlre simulator.

Tables come back as lists of dicts; numeric cells are converted to float
(empty cells to None) except for the config hash.
"""

from . import _core
from ._core import (  # noqa: F401
    BudgetExceeded,
    ConfigError,
    ProductBasis,
    Tableau,
    cdf_zz,
    coin_toss_square,
    combined_mean_time,
    figure_ids,
    halting_layer,
    log_coefficient,
    log_mean_time,
    markov_matrix,
    mean_tau_zz,
    mean_time_lieb,
    mean_time_pm1,
    mean_time_pu1,
    p_x,
    predict_kinds,
    run_trajectory,
    second_largest_mean,
    tau_fidelity,
    tau_naive,
    tau_z2,
    validation_suites,
)

__version__ = _core.__version__

_TEXT_COLUMNS = {"config_hash", "lattice", "gates", "decoder", "backend", "mode"}


def _cell(column, value):
    if column in _TEXT_COLUMNS:
        return value
    if value == "":
        return None
    try:
        return float(value)
    except ValueError:
        return value


def _records(table):
    cols = table["columns"]
    return [{c: _cell(c, v) for c, v in zip(cols, row)} for row in table["rows"]]


def simulate(config, **overrides):
    """Run an experiment from INI text. Keyword overrides use dotted keys
    with "__" in place of "." (experiment__seed=3)."""
    flat = {k.replace("__", "."): str(v) for k, v in overrides.items()}
    out = _core.simulate(config, flat)
    result = {"results": _records(out["results"]), "manifest": out["manifest"]}
    if "series" in out:
        result["series"] = _records(out["series"])
    return result


def config_hash(config, **overrides):
    flat = {k.replace("__", "."): str(v) for k, v in overrides.items()}
    return _core.config_hash(config, flat)


def predict(kind, **params):
    """Analytic prediction table; every parameter takes a number or a list."""
    grid = {k: list(v) if isinstance(v, (list, tuple)) else [float(v)] for k, v in params.items()}
    return _records(_core.predict(kind, grid))


def validate(suite, seed=2026, size_hint=0):
    return _core.validate(suite, seed, size_hint)
