# Copyright 2026 The hierlab Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import pathlib

import pytest

import hierlab

CORPUS = pathlib.Path(
    os.environ.get("HIERLAB_CORPUS_DIR",
                   pathlib.Path(__file__).resolve().parents[2] / "corpus"))


def corpus(name):
    return (CORPUS / name).read_text(encoding="utf-8")


def test_format_is_a_fixpoint():
    once = hierlab.format_module(corpus("fig1.hier"))
    assert hierlab.format_module(once) == once


def test_nested_ring_fields():
    dump = hierlab.elaborate(corpus("fig1.hier"))
    ring = next(d for d in dump["declarations"] if d["name"] == "ring")
    assert [f["name"] for f in ring["fields"]] == ["to_semiring", "neg"]
    inst = {i["name"]: i for i in dump["instances"]}
    assert inst["ring.to_add_comm_group"]["priority"] == 100
    assert inst["ring.to_semiring"]["kind"] == "preferred"


@pytest.mark.parametrize("encoding, eta, expected", [
    ("flat", False, True),
    ("nested", False, False),
    ("nested", True, True),
])
def test_diamond_defeq(encoding, eta, expected):
    verdicts = hierlab.defeq(corpus("module.hier"), encoding=encoding, eta_kernel=eta)
    assert verdicts["ring_acm_diamond"] is expected


def test_resolution_matrix():
    text = corpus("module.hier")
    off = hierlab.resolve(text)
    assert off["module_of_semiring"]["instance"] == "semiring.to_module R iS"
    assert off["neg_smul"]["status"] == "not-found"
    assert off["neg_smul"]["instance"] is None
    on = hierlab.resolve(text, eta_unifier=True)
    assert on["neg_smul"]["status"] == "found"


def test_flat_hack_diamonds_commute():
    report = hierlab.diamonds(corpus("fig1.hier"), encoding="flat-hack", eta_kernel=False)
    s = report["summary"]
    assert s["total"] > 0 and s["commuting"] == s["total"]


def test_spanning_search_fig1():
    r = hierlab.spanning_search(corpus("fig1.hier"), eta_kernel=False)
    assert r["summary"]["placements"] == 4
    assert r["summary"]["coherent"] == 3


def test_generator_is_deterministic():
    assert hierlab.generate_hierarchy(7) == hierlab.generate_hierarchy(7)
    hierlab.elaborate(hierlab.generate_hierarchy(7))


def test_errors_are_translated():
    with pytest.raises(hierlab.HierlabError, match="1:"):
        hierlab.elaborate("class c (α : Type) extends missing α")
    with pytest.raises(ValueError):
        hierlab.elaborate(corpus("fig1.hier"), encoding="sideways")
