"""JSON interchange for every domain type.

Parsers take a decoded document and a JSON path used in error messages.
Scalars (elements of M) are written as residue vectors; for a module with a
single factor a bare integer is accepted as well.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any, Optional

import numpy as np

from .cochains import Cochain
from .errors import CrossprodError, InvariantViolation, NotACocycle, ParseError
from .groups import FiniteGroup
from .modules import CoeffModule
from .pointed import MonoidalEquivalence, PointedCategory


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(path, f"cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"invalid JSON at line {exc.lineno} column {exc.colno}") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_atomic(path: str, doc: Any) -> None:
    """Write JSON so that the file only appears once fully written."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ------------------------------------------------------------------ helpers
def _field(doc: Any, key: str, path: str, *, optional: bool = False):
    if not isinstance(doc, dict):
        raise ParseError(path, "expected an object")
    if key not in doc:
        if optional:
            return None
        raise ParseError(f"{path}.{key}", "missing field")
    return doc[key]


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(path, "expected an integer")
    return x


def _int_list(x: Any, path: str) -> list[int]:
    if not isinstance(x, list):
        raise ParseError(path, "expected a list")
    return [_int(v, f"{path}[{i}]") for i, v in enumerate(x)]


def _index_array(x: Any, shape: tuple, bound: int, path: str) -> np.ndarray:
    arr = _dense(_nested(x, len(shape), path, lambda v, p: _int(v, p)), path)
    if arr.shape != shape:
        raise ParseError(path, f"expected shape {list(shape)}")
    bad = np.argwhere((arr < 0) | (arr >= bound))
    if bad.size:
        raise InvariantViolation(path + "".join(f"[{i}]" for i in bad[0]), f"index out of range 0..{bound - 1}")
    return arr


def _dense(rows, path: str) -> np.ndarray:
    try:
        return np.array(rows, dtype=np.int64)
    except ValueError:
        raise ParseError(path, "ragged table") from None


def _nested(x: Any, depth: int, path: str, leaf):
    if depth == 0:
        return leaf(x, path)
    if not isinstance(x, list):
        raise ParseError(path, "expected a list")
    return [_nested(v, depth - 1, f"{path}[{i}]", leaf) for i, v in enumerate(x)]


def _scalar(M: CoeffModule, x: Any, path: str) -> int:
    if M.rank == 1 and isinstance(x, int) and not isinstance(x, bool):
        return int(x) % M.factors[0]
    if not isinstance(x, list) or len(x) != M.rank:
        raise ParseError(path, f"expected a residue vector of length {M.rank}")
    return M.idx(_int_list(x, path))


def scalar_table(M: CoeffModule, x: Any, shape: tuple, path: str) -> np.ndarray:
    """Dense table of M-elements with the given shape."""
    arr = _dense(_nested(x, len(shape), path, lambda v, p: _scalar(M, v, p)), path)
    if arr.shape != shape:
        raise ParseError(path, f"expected shape {list(shape)}, got {list(arr.shape)}")
    return arr


def scalars_to_json(M: CoeffModule, table) -> list:
    return M.vectors[np.asarray(table, dtype=np.int64)].tolist()


def _check_normalized(arr: np.ndarray, path: str) -> None:
    from .cochains import first_unnormalized

    bad = first_unnormalized(arr)
    if bad is not None:
        raise InvariantViolation(path + "".join(f"[{i}]" for i in bad), "nonzero value at an identity argument", witness=list(bad))


# ------------------------------------------------------------------ basic types
def parse_group(doc: Any, path: str = "$") -> FiniteGroup:
    order = _int(_field(doc, "order", path), f"{path}.order")
    if order < 1:
        raise InvariantViolation(f"{path}.order", "order must be positive")
    mul = _index_array(_field(doc, "mul", path), (order, order), order, f"{path}.mul")
    try:
        return FiniteGroup(mul)
    except CrossprodError as exc:
        raise InvariantViolation(f"{path}.mul", str(exc), **exc.payload) from None


def parse_module(doc: Any, group: Optional[FiniteGroup] = None, path: str = "$") -> CoeffModule:
    factors = _int_list(_field(doc, "factors", path), f"{path}.factors")
    if any(m < 1 for m in factors):
        raise InvariantViolation(f"{path}.factors", "factors must be positive")
    action = _field(doc, "action", path, optional=True)
    try:
        if action is None:
            return CoeffModule(factors)
        if group is None:
            raise InvariantViolation(f"{path}.action", "an action needs an acting group")
        mats = _nested(action, 3, f"{path}.action", lambda v, p: _int(v, p))
        return CoeffModule(factors, group, mats)
    except InvariantViolation:
        raise
    except CrossprodError as exc:
        raise InvariantViolation(f"{path}.action", str(exc)) from None


def parse_cochain(doc: Any, group: FiniteGroup, module: CoeffModule, path: str = "$", degree: Optional[int] = None) -> Cochain:
    deg = _int(_field(doc, "degree", path), f"{path}.degree")
    if degree is not None and deg != degree:
        raise InvariantViolation(f"{path}.degree", f"expected degree {degree}")
    vals = scalar_table(module, _field(doc, "values", path), (group.order,) * deg, f"{path}.values")
    _check_normalized(vals, f"{path}.values")
    return Cochain(group, module, vals)


def parse_category(doc: Any, path: str = "$", *, checked: bool = True) -> PointedCategory:
    L = parse_group(_field(doc, "objects", path), f"{path}.objects")
    M = parse_module(_field(doc, "scalars", path), L, f"{path}.scalars")
    assoc = parse_cochain(_field(doc, "assoc", path), L, M, f"{path}.assoc", degree=3)
    try:
        return PointedCategory(L, M, assoc, checked)
    except NotACocycle as exc:
        raise InvariantViolation(f"{path}.assoc", "associator fails the pentagon", **exc.payload) from None


def parse_equivalence(doc: Any, C: PointedCategory, D: PointedCategory, path: str = "$") -> MonoidalEquivalence:
    L, M = C.objects, C.scalars
    pi0 = _index_array(_field(doc, "pi0", path), (L.order,), D.objects.order, f"{path}.pi0")
    mat = _nested(_field(doc, "pi1", path), 2, f"{path}.pi1", lambda v, p: _int(v, p))
    k = parse_cochain(_field(doc, "k", path), L, M, f"{path}.k", degree=2)
    try:
        return MonoidalEquivalence.from_matrix(C, D, pi0, mat, k)
    except CrossprodError as exc:
        raise InvariantViolation(path, str(exc)) from None


def equivalence_to_json(F: MonoidalEquivalence) -> dict:
    return F.to_json()


# ------------------------------------------------------------------ systems
def parse_system(doc: Any, path: str = "$"):
    from .outer_action import CrossedSystem

    G = parse_group(_field(doc, "group", path), f"{path}.group")
    C = parse_category(_field(doc, "base", path), f"{path}.base")
    L, M = C.objects, C.scalars
    n, l = G.order, L.order
    fdocs = _field(doc, "functors", path)
    if not isinstance(fdocs, list) or len(fdocs) != n:
        raise ParseError(f"{path}.functors", f"expected a list of {n} equivalences")
    functors = tuple(parse_equivalence(d, C, C, f"{path}.functors[{i}]") for i, d in enumerate(fdocs))
    carriers = _index_array(_field(doc, "carriers", path), (n, n), l, f"{path}.carriers")
    chi = scalar_table(M, _field(doc, "chi", path), (n, n, l), f"{path}.chi")
    omega = scalar_table(M, _field(doc, "omega", path), (n, n, n), f"{path}.omega")
    try:
        return CrossedSystem(G, C, functors, carriers, chi, omega)
    except CrossprodError as exc:
        raise InvariantViolation(path, str(exc)) from None


def parse_grading(doc: Any, category: PointedCategory, path: str = "$"):
    from .crossed_product import GradedPointedCategory

    G = parse_group(_field(doc, "group", path), f"{path}.group")
    deg = _index_array(_field(doc, "deg", path), (category.objects.order,), G.order, f"{path}.deg")
    try:
        return GradedPointedCategory(category, G, deg)
    except CrossprodError as exc:
        raise InvariantViolation(f"{path}.deg", str(exc)) from None


def grading_to_json(D) -> dict:
    return {"group": D.group.to_json(), "deg": D.deg.tolist()}


def parse_sections(doc: Any, n: int, bound: int, path: str = "$") -> np.ndarray:
    if isinstance(doc, dict):
        return _index_array(_field(doc, "sections", path), (n,), bound, f"{path}.sections")
    return _index_array(doc, (n,), bound, path)


# ------------------------------------------------------------------ 1-cells and 2-cells
def parse_one_cell(doc: Any, S, S2, path: str = "$"):
    from .crossed_product import OneCell

    n, l = S.group.order, S.L.order
    H = parse_equivalence(_field(doc, "H", path), S.base, S2.base, f"{path}.H")
    carriers = _index_array(_field(doc, "carriers", path), (n,), S2.L.order, f"{path}.carriers")
    theta = scalar_table(S.M, _field(doc, "theta", path), (n, l), f"{path}.theta")
    Pi = scalar_table(S.M, _field(doc, "Pi", path), (n, n), f"{path}.Pi")
    return OneCell(S, S2, H, carriers, theta, Pi)


def parse_two_cell(doc: Any, S, path: str = "$"):
    from .crossed_product import TwoCell

    m = parse_cochain(_field(doc, "m", path), S.L, S.M, f"{path}.m", degree=1)
    ms = scalar_table(S.M, _field(doc, "m_sigma", path), (S.group.order,), f"{path}.m_sigma")
    return TwoCell(m, ms)


def two_cell_to_json(c, M: CoeffModule) -> dict:
    return {"m": c.m.to_json(), "m_sigma": scalars_to_json(M, c.m_sigma)}


# ------------------------------------------------------------------ braidings
def parse_braiding(doc: Any, C: PointedCategory, path: str = "$"):
    from .braiding import PointedBraiding

    n = C.objects.order
    c = scalar_table(C.scalars, _field(doc, "c", path), (n, n), f"{path}.c")
    try:
        return PointedBraiding(C, c)
    except CrossprodError as exc:
        raise InvariantViolation(path, str(exc)) from None


def parse_action_braiding(doc: Any, S, path: str = "$"):
    from .braiding import ActionBraiding

    n, l, M = S.group.order, S.L.order, S.M
    theta = scalar_table(M, _field(doc, "theta", path), (n, l), f"{path}.theta")
    theta_bar = scalar_table(M, _field(doc, "theta_bar", path), (n, l), f"{path}.theta_bar")
    t = scalar_table(M, _field(doc, "t", path), (n, n), f"{path}.t")
    return ActionBraiding(theta, theta_bar, t)
