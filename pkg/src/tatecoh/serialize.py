"""JSON encodings for groups, modules, cocycles and extension bundles.

Module integers are written as decimal strings; readers accept strings or
plain integers.  Groups equal to a builtin are written by reference
(``"builtin:C4"``).  Every reader re-validates what it builds.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cohomology import Cocycle2
from .exactla import IntMatrix
from .gmodules import GModule
from .groups import BUILTIN_NAMES, FiniteGroup, builtin, from_table

__all__ = [
    "FormatError",
    "group_to_json",
    "group_from_json",
    "module_to_json",
    "module_from_json",
    "cocycle_to_json",
    "cocycle_from_json",
    "extension_to_json",
    "extension_from_json",
    "module_extension_to_json",
    "module_extension_from_json",
    "load_json",
    "dump_json",
]


class FormatError(ValueError):
    pass


def _int(x) -> int:
    if isinstance(x, bool):
        raise FormatError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise FormatError(f"expected an integer or decimal string, got {x!r}")


def _matrix(rows, cols: int, what: str) -> IntMatrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise FormatError(f"{what} must be an array of arrays")
    for r in rows:
        if len(r) != cols:
            raise FormatError(f"{what}: row of length {len(r)}, expected {cols}")
    return IntMatrix.from_rows([[_int(x) for x in r] for r in rows], cols)


def _strings(M: IntMatrix) -> list[list[str]]:
    return [[str(x) for x in r] for r in M.entries]


# -- groups -------------------------------------------------------------------


def group_to_json(G: FiniteGroup) -> str | dict:
    for name in BUILTIN_NAMES:
        if builtin(name) == G:
            return f"builtin:{name}"
    return G.to_json()


def group_from_json(data: Any, base: Path | None = None) -> FiniteGroup:
    """A group from a builtin reference, a JSON object, or a path to one."""
    if isinstance(data, str):
        if data.startswith("builtin:") or data in BUILTIN_NAMES:
            try:
                return builtin(data)
            except KeyError as exc:
                raise FormatError(str(exc.args[0])) from None
        path = Path(data) if base is None else base / data
        return group_from_json(load_json(path), path.parent)
    if not isinstance(data, dict) or "mul" not in data:
        raise FormatError("group must be a builtin reference or an object with 'mul'")
    mul = data["mul"]
    if not isinstance(mul, list):
        raise FormatError("'mul' must be an array of arrays")
    n = len(mul)
    if "order" in data and _int(data["order"]) != n:
        raise FormatError(f"'order' is {data['order']} but the table has {n} rows")
    table = _matrix(mul, n, "mul")
    return from_table(table.tolist(), data.get("labels"), data.get("name"))


# -- modules ------------------------------------------------------------------


def module_to_json(M: GModule) -> dict:
    return {
        "group": group_to_json(M.group),
        "ambient_rank": str(M.ambient_rank),
        "relations": _strings(M.relations),
        "action": [_strings(A) for A in M.action],
    }


def module_from_json(data: Any, group: FiniteGroup | None = None) -> GModule:
    """Parse and validate a module; ``group`` overrides or supplies the group."""
    if not isinstance(data, dict):
        raise FormatError("module must be a JSON object")
    for key in ("ambient_rank", "relations", "action"):
        if key not in data:
            raise FormatError(f"module is missing '{key}'")
    G = group
    if "group" in data:
        parsed = group_from_json(data["group"])
        if G is not None and parsed != G:
            raise FormatError("module's group differs from the requested group")
        G = parsed
    if G is None:
        raise FormatError("module has no group")
    k = _int(data["ambient_rank"])
    if k < 0:
        raise FormatError("ambient_rank must be non-negative")
    rel = _matrix(data["relations"], k, "relations") if data["relations"] else IntMatrix.zeros(0, k)
    acts = data["action"]
    if not isinstance(acts, list) or len(acts) != G.order:
        raise FormatError(f"action must list {G.order} matrices (one per group element)")
    mats = []
    for g, a in enumerate(acts):
        if len(a) != k:
            raise FormatError(f"action[{g}] must have {k} rows")
        mats.append(_matrix(a, k, f"action[{g}]"))
    return GModule(G, k, rel, mats, name=data.get("name"))


# -- cocycles -----------------------------------------------------------------


def cocycle_to_json(f: Cocycle2) -> dict:
    return {
        "group": group_to_json(f.group),
        "coefficients": module_to_json(f.coefficients),
        "table": {f"{s},{t}": [str(x) for x in v] for (s, t), v in sorted(f.table.items())},
    }


def cocycle_from_json(data: Any, coefficients: GModule | None = None) -> Cocycle2:
    if not isinstance(data, dict) or "table" not in data:
        raise FormatError("cocycle must be an object with a 'table'")
    A = coefficients
    if A is None:
        if "coefficients" not in data:
            raise FormatError("cocycle has no coefficient module")
        A = module_from_json(data["coefficients"])
    G = A.group
    table = {}
    for key, vals in data["table"].items():
        try:
            s, t = (int(x) for x in key.split(","))
        except ValueError:
            raise FormatError(f"bad cocycle key {key!r}; expected 'i,j'") from None
        if not (0 < s < G.order and 0 < t < G.order):
            raise FormatError(f"cocycle key {key!r} must name two non-identity elements")
        table[s, t] = [_int(x) for x in vals]
    return Cocycle2(G, A, table)


# -- extension bundles ----------------------------------------------------------


def extension_to_json(eps) -> dict:
    return {"kernel": module_to_json(eps.kernel), "cocycle": cocycle_to_json(eps.cocycle)}


def extension_from_json(data: Any, group: FiniteGroup | None = None):
    from .extensions import GroupExtensionData
    if not isinstance(data, dict) or "kernel" not in data or "cocycle" not in data:
        raise FormatError("extension bundle needs 'kernel' and 'cocycle'")
    A = module_from_json(data["kernel"], group)
    f = cocycle_from_json(data["cocycle"], A)
    return GroupExtensionData(A.group, A, f)


def module_extension_to_json(e) -> dict:
    return {
        "kernel": module_to_json(e.kernel),
        "middle": module_to_json(e.middle),
        "inject": _strings(e.inject.matrix),
        "project": _strings(e.project.matrix),
    }


def module_extension_from_json(data: Any, group: FiniteGroup | None = None):
    """0 -> kernel -> middle -> I_G -> 0; maps are target×source matrices."""
    from .extensions import ModuleExtensionData
    from .gmodules import ModuleMap, augmentation_ideal
    for key in ("kernel", "middle", "inject", "project"):
        if not isinstance(data, dict) or key not in data:
            raise FormatError(f"module extension bundle is missing '{key}'")
    A = module_from_json(data["kernel"], group)
    M = module_from_json(data["middle"], A.group)
    IG = augmentation_ideal(A.group)
    inj = _map_matrix(data["inject"], M.ambient_rank, A.ambient_rank, "inject")
    proj = _map_matrix(data["project"], IG.ambient_rank, M.ambient_rank, "project")
    return ModuleExtensionData(A, M, ModuleMap(A, M, inj), ModuleMap(M, IG, proj))


def _map_matrix(rows, nrows: int, ncols: int, what: str) -> IntMatrix:
    if nrows == 0:
        if rows:
            raise FormatError(f"{what} must be empty")
        return IntMatrix.zeros(0, ncols)
    if not isinstance(rows, list) or len(rows) != nrows:
        raise FormatError(f"{what} must have {nrows} rows")
    return _matrix(rows, ncols, what)


# -- files --------------------------------------------------------------------


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
