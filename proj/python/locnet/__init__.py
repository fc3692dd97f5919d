# SPDX-License-Identifier: Apache-2.0
#
# locnet-bench: deep-learning indoor positioning benchmark for InF-DH scenarios
# Copyright (C) 2026 The locnet-bench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""LocNet indoor positioning benchmark.

Thin wrapper over the native core. Config arguments are plain dicts using the same keys as the
JSON config files of the command-line tool.
"""

import json as _json

from . import _locnet
from ._locnet import FormatError, NumericError, path_loss_db, path_loss_los_db, path_loss_nlos_db, percentile

__all__ = [
    "FormatError",
    "NumericError",
    "scenario",
    "trp_positions",
    "encoded_shape",
    "generate_dataset",
    "load_dataset",
    "model_param_count",
    "predict",
    "evaluate",
    "gradcheck",
    "percentile",
    "path_loss_db",
    "path_loss_los_db",
    "path_loss_nlos_db",
]

__version__ = "0.1.0"


def _dump(overrides):
    return _json.dumps(overrides) if overrides else ""


def scenario(overrides=None, desk=True):
    """Resolved scenario config as a dict (desk layout unless ``desk=False``)."""
    return _json.loads(_locnet.scenario_json(_dump(overrides), desk))


def trp_positions(overrides=None, desk=True):
    """TRP coordinates (x, y, z) in metres, row-major over the grid."""
    return _locnet.trp_positions(_dump(overrides), desk)


def encoded_shape(encoding, n_trp, taps):
    """(rows, taps, channels) of one encoded sample."""
    return _locnet.encoded_shape(encoding, n_trp, taps)


def generate_dataset(recipe=None, scenario=None, desk=True, threads=1):
    """Simulate a dataset in memory.

    Returns a dict with ``inputs`` (n, rows, taps, channels), ``labels`` and ``clean_labels`` (n, 2),
    ``n_trp_available`` and ``noise_sigma_m`` (n,), plus the encoding name and scenario digest.
    """
    out = _locnet.generate_dataset(_dump(scenario), desk, _dump(recipe), threads)
    out["scenario"] = _json.loads(out["scenario"])
    return out


def load_dataset(path):
    """Read a ``.lnet`` file into the same dict layout as :func:`generate_dataset`."""
    out = _locnet.load_dataset(str(path))
    out["scenario"] = _json.loads(out["scenario"])
    return out


def model_param_count(model=None):
    """Parameter count of a LocNet config (defaults when ``model`` is empty)."""
    return _locnet.model_param_count(_dump(model))


def predict(checkpoint, dataset):
    """Eval-mode predictions of a checkpoint on a dataset file, shape (n, 2)."""
    return _locnet.predict(str(checkpoint), str(dataset))


def evaluate(checkpoint, dataset, clean_labels=False):
    """p50 / p90 / mean horizontal error and the per-N' breakdown."""
    return _locnet.evaluate(str(checkpoint), str(dataset), clean_labels)


def gradcheck(seed=1, inject_fault=""):
    """Finite-difference check of every layer; one dict per check."""
    return _locnet.gradcheck(seed, inject_fault)
