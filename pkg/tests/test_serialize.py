import json
import random

import pytest

from helpers import random_module
from tatecoh.cohomology import Cocycle2, h2
from tatecoh.extensions import GroupExtensionData, star
from tatecoh.gmodules import trivial_module
from tatecoh.groups import BUILTIN_NAMES, builtin, from_table
from tatecoh.serialize import (FormatError, cocycle_from_json, cocycle_to_json, dump_json,
                               extension_from_json, extension_to_json, group_from_json,
                               group_to_json, module_extension_from_json,
                               module_extension_to_json, module_from_json, module_to_json)


def through_text(doc):
    return json.loads(dump_json(doc))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_group_round_trip(name):
    G = builtin(name)
    assert group_to_json(G) == f"builtin:{name}"
    assert group_from_json(group_to_json(G)) == G
    assert from_table(G.to_json()["mul"]) == G


def test_custom_group_round_trip(tmp_path):
    G = from_table([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    doc = {"order": 3, "mul": [[str(x) for x in r] for r in G.mul]}
    assert group_from_json(doc).mul == G.mul
    p = tmp_path / "g.json"
    p.write_text(json.dumps(doc))
    assert group_from_json(str(p)).mul == G.mul


def test_group_format_errors():
    with pytest.raises(FormatError):
        group_from_json({"order": 3, "mul": [[0, 1], [1, 0]]})
    with pytest.raises(FormatError):
        group_from_json({"mul": [[0, "x"], [1, 0]]})
    with pytest.raises(FormatError):
        group_from_json("builtin:C7")


@pytest.mark.parametrize("name", ["C1", "C2", "C4", "C2xC2", "Q8"])
def test_module_round_trip(name):
    G = builtin(name)
    rng = random.Random(name)
    for _ in range(4):
        M = random_module(G, rng)
        doc = through_text(module_to_json(M))
        assert all(isinstance(x, str) for r in doc["relations"] for x in r)
        back = module_from_json(doc)
        assert back.relations == M.relations and back.action == M.action


def test_module_format_errors():
    C2 = builtin("C2")
    good = module_to_json(trivial_module(C2, [2]))
    with pytest.raises(FormatError):
        module_from_json({k: v for k, v in good.items() if k != "action"})
    with pytest.raises(FormatError):
        module_from_json({**good, "action": good["action"][:1]})
    with pytest.raises(FormatError):
        module_from_json(good, builtin("C3"))


def test_cocycle_and_extension_round_trip():
    G = builtin("C2xC2")
    A = trivial_module(G, [2])
    for f in h2(G, A).representatives:
        doc = through_text(cocycle_to_json(f))
        assert set(doc["table"]) == {f"{s},{t}" for s in range(1, 4) for t in range(1, 4)}
        assert cocycle_from_json(doc).table == f.table
        eps = GroupExtensionData(G, A, f)
        back = extension_from_json(through_text(extension_to_json(eps)))
        assert back.cocycle.table == f.table
        e = star(eps)
        e2 = module_extension_from_json(through_text(module_extension_to_json(e)))
        assert e2.middle.action == e.middle.action


def test_cocycle_format_errors():
    C2 = builtin("C2")
    A = trivial_module(C2, [2])
    doc = cocycle_to_json(Cocycle2(C2, A, {(1, 1): (1,)}))
    with pytest.raises(FormatError):
        cocycle_from_json({**doc, "table": {"0,1": ["1"]}})
    with pytest.raises(FormatError):
        cocycle_from_json({**doc, "table": {"1;1": ["1"]}})
