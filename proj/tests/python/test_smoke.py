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

import pathlib

import pytest

import mwpc_harness as mh

ROOT = pathlib.Path(__file__).resolve().parents[2]

FRANCINE = {
    "id": "mathdial-5000001",
    "question": "Francine drives 140km to work each day. If she does not go to work 3 days every week, "
    "find the total distance she drives to work for 4 weeks in kilometers.",
    "reference_solution": "She works 7 - 3 = 4 days a week, so 140 * 4 * 4 = 2240 km.",
    "reference_numeric": "2240",
    "brief_explanation": "Francine works 4 days per week.",
    "wrong_solution": "140 * 2 * 4 = 1120 km.",
    "source": "mathdial",
    "meta": {},
}


def test_extraction():
    assert mh.extract("so the total is 140 * 4 * 4 = 2240 km.") == "2240"
    assert mh.extract("step\n#### 72") == "72"
    assert mh.extract("no numbers here") is None
    assert mh.canonical("$1,050") == "1050"
    assert mh.canonical("3/4") == "0.75"
    assert mh.numbers_equal("0.5", "1/2")


def test_rates_and_ratios():
    r, c = mh.rates(2152, 306, 165, 238)
    assert mh.format_ratio(2152 + 306, 2861) == "0.859"
    assert abs(r - 2458 / 2861) < 1e-12
    assert abs(c - 2317 / 2861) < 1e-12
    e_r, e_c = mh.e_ratios(2152, 306, 165, 238)
    assert abs(e_r - 2152 / 2317) < 1e-12
    assert abs(e_c - 2152 / 2458) < 1e-12
    assert mh.e_ratios(0, 5, 0, 5)[0] is None


def test_score_and_render():
    assert mh.score(FRANCINE, "Final answer: 2240", "SP")["success"]
    wrong = mh.score(FRANCINE, "It is 1120.", "reasoning")
    assert wrong["reason"] == "mismatched"
    assert wrong["extracted"] == "1120"
    prompt = mh.render(FRANCINE, "DOP_NA")
    assert "2240" in prompt["text"]
    assert len(prompt["content_hash"]) == 64
    assert "2240" not in mh.render(FRANCINE, "SP")["text"]
    with pytest.raises(ValueError):
        mh.render(FRANCINE, "DOP_XX")


def test_verify_shipped_table():
    result = mh.verify_table1(ROOT / "data" / "table1.json")
    assert not result["all_pass"]
    assert {c["row"] for c in result["checks"] if not c["pass"]} == {"Baichuan-2-13b"}
    with pytest.raises(mh.DataError):
        mh.verify_table1(ROOT / "data" / "missing.json")
