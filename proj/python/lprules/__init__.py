# Copyright 2026 The lprules Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Weighted chain rules for knowledge graph completion."""

import json

from ._core import (
    KnowledgeGraph,
    ParseError,
    TrainConfig,
    clause_holds,
    coverage_column,
    neg_count,
    preset,
    preset_names,
    reachable_set,
    solve_lpr,
)
from . import _core

__all__ = [
    "KnowledgeGraph",
    "ParseError",
    "TrainConfig",
    "clause_holds",
    "coverage_column",
    "evaluate",
    "neg_count",
    "preset",
    "preset_names",
    "reachable_set",
    "solve_lpr",
    "train",
]


def train(data, config=None, ranking="random-break", eval_seed=0):
    """Trains on a dataset directory.

    Returns a dict with the rule file text ("rules"), the parsed sidecar
    ("sidecar") and the parsed test metrics ("metrics").
    """
    if config is None:
        config = TrainConfig()
    out = _core.train(str(data), config, ranking, eval_seed)
    return {
        "rules": out["rules"],
        "sidecar": json.loads(out["sidecar"]),
        "metrics": json.loads(out["metrics"]),
    }


def evaluate(data, model, split="test", ranking="random-break", seed=0):
    return json.loads(_core.evaluate(str(data), str(model), split, ranking, seed))
