"""Normalized cochains G^n -> M and the bar-resolution differential.

Sign convention (additive notation, action on the leftmost argument)::

    (df)(g0, ..., gn) = g0 . f(g1, ..., gn)
                        + sum_{i=1..n} (-1)^i f(g0, ..., g_{i-1} g_i, ..., gn)
                        + (-1)^(n+1) f(g0, ..., g_{n-1})
"""

from __future__ import annotations

import itertools

import numpy as np

from .check import PASS, Check, fail
from .errors import InvariantViolation
from .groups import FiniteGroup
from .modules import CoeffModule


class Cochain:
    __slots__ = ("degree", "group", "module", "values")

    def __init__(self, group: FiniteGroup, module: CoeffModule, values, *, check: bool = True):
        arr = np.array(values, dtype=np.int64)
        self.group = group
        self.module = module
        self.degree = arr.ndim
        if arr.shape != (group.order,) * arr.ndim:
            raise InvariantViolation("values", f"table shape {arr.shape} is not |G|^n")
        if arr.size and (arr.min() < 0 or arr.max() >= module.size):
            raise InvariantViolation("values", "entry is not a module element")
        arr.setflags(write=False)
        self.values = arr
        if check:
            bad = first_unnormalized(arr)
            if bad is not None:
                raise InvariantViolation("values", f"not normalized at {bad}", witness=list(bad))

    @classmethod
    def zero(cls, group: FiniteGroup, module: CoeffModule, degree: int) -> "Cochain":
        return cls(group, module, np.zeros((group.order,) * degree, dtype=np.int64), check=False)

    @classmethod
    def from_function(cls, group, module, degree, fn) -> "Cochain":
        vals = np.zeros((group.order,) * degree, dtype=np.int64)
        for idx in itertools.product(range(group.order), repeat=degree):
            if 0 not in idx:
                vals[idx] = fn(*idx)
        return cls(group, module, vals)

    def __call__(self, *args: int) -> int:
        return int(self.values[args])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.module.factors == other.module.factors
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash(self.values.tobytes())

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.group, self.module, self.module.add[self.values, other.values], check=False)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.group, self.module, self.module.sub[self.values, other.values], check=False)

    def __neg__(self) -> "Cochain":
        return Cochain(self.group, self.module, self.module.neg[self.values], check=False)

    def is_zero(self) -> bool:
        return not self.values.any()

    def map_values(self, lookup) -> "Cochain":
        return Cochain(self.group, self.module, np.asarray(lookup)[self.values], check=False)

    def with_module(self, module: CoeffModule) -> "Cochain":
        return Cochain(self.group, module, self.values, check=False)

    def free_positions(self):
        return normalized_positions(self.group.order, self.degree)

    def __repr__(self) -> str:
        nz = {idx: self.module.vec(v) for idx, v in np.ndenumerate(self.values) if v}
        return f"Cochain(deg={self.degree}, nonzero={nz})"

    def to_json(self) -> dict:
        vals = self.module.vectors[self.values].tolist()
        return {"degree": self.degree, "values": vals}


def first_unnormalized(arr: np.ndarray):
    if arr.ndim == 0:
        return None
    mask = np.zeros(arr.shape, dtype=bool)
    for axis in range(arr.ndim):
        sl = [slice(None)] * arr.ndim
        sl[axis] = 0
        mask[tuple(sl)] = True
    bad = np.argwhere(mask & (arr != 0))
    return tuple(int(i) for i in bad[0]) if bad.size else None


def normalized_positions(order: int, degree: int) -> list[tuple[int, ...]]:
    """Index tuples with no identity entry, in lexicographic order."""
    return list(itertools.product(range(1, order), repeat=degree))


def differential(c: Cochain) -> Cochain:
    g, mod = c.group, c.module
    n = c.degree
    act = mod.action_table(g)
    idx = np.indices((g.order,) * (n + 1), dtype=np.int64)
    vals = c.values
    if n == 0:
        out = mod.sub[act[idx[0], vals[()]], vals[()]]
        return Cochain(g, mod, out, check=False)
    out = act[idx[0], vals[tuple(idx[1:])]]
    for i in range(1, n + 1):
        args = list(idx[: i - 1]) + [g.mul[idx[i - 1], idx[i]]] + list(idx[i + 1 :])
        term = vals[tuple(args)]
        out = mod.add[out, term] if i % 2 == 0 else mod.sub[out, term]
    last = vals[tuple(idx[:n])]
    out = mod.add[out, last] if (n + 1) % 2 == 0 else mod.sub[out, last]
    return Cochain(g, mod, out, check=False)


def is_cocycle(c: Cochain) -> Check:
    d = differential(c).values
    bad = np.argwhere(d != 0)
    if bad.size:
        return fail(bad[0], "cocycle")
    return PASS
