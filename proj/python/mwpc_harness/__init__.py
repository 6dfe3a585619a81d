# Copyright 2026 The MWPC Harness Authors.
# SPDX-License-Identifier: Apache-2.0
#
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

"""Python access to the mwpc harness core."""

import json

from ._core import (
    ConfigError,
    DataError,
    canonical,
    e_ratios,
    extract,
    format_ratio,
    numbers_equal,
    rates,
    report_markdown,
)
from . import _core

__all__ = [
    "ConfigError",
    "DataError",
    "canonical",
    "e_ratios",
    "extract",
    "format_ratio",
    "numbers_equal",
    "rates",
    "render",
    "report_markdown",
    "score",
    "verify_table1",
]


def score(triplet, response, mode):
    """Scores one response for a triplet dict under a mode tag ("reasoning", "SP", ...)."""
    return json.loads(_core.score_json(json.dumps(triplet), response, mode))


def render(triplet, mode):
    """Renders the prompt for a triplet dict under a mode tag."""
    return json.loads(_core.render_json(json.dumps(triplet), mode))


def verify_table1(path, tolerance=0.002):
    """Checks a published-table fixture; returns {"all_pass", "checks", "matrix"}."""
    return json.loads(_core.verify_table1_json(str(path), tolerance))
