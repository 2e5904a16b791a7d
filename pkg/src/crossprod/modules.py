"""Finite abelian coefficient groups Z/m1 x ... x Z/mr, optionally with a group action.

Elements are encoded as integers by mixed radix with the first factor most
significant, so integer order agrees with lexicographic order on residue
vectors.
"""

from __future__ import annotations

import math
from functools import cached_property, reduce
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidModule
from .groups import FiniteGroup


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


class CoeffModule:
    def __init__(
        self,
        factors: Sequence[int],
        group: Optional[FiniteGroup] = None,
        action: Optional[Sequence] = None,
    ):
        factors = tuple(int(m) for m in factors)
        if any(m < 1 for m in factors):
            raise InvalidModule("invariant factors must be positive")
        self.factors = factors
        self.rank = len(factors)
        self.size = math.prod(factors)
        self.exponent = _lcm(factors)
        strides = []
        s = 1
        for m in reversed(factors):
            strides.append(s)
            s *= m
        self.strides = tuple(reversed(strides))
        self.group = group
        if action is None and group is not None:
            action = [np.eye(self.rank, dtype=np.int64)] * group.order
        self.matrices = None
        if action is not None:
            if group is None:
                raise InvalidModule("an action needs an acting group")
            if len(action) != group.order:
                raise InvalidModule("need one matrix per acting-group element")
            self.matrices = tuple(np.asarray(a, dtype=np.int64).reshape(self.rank, self.rank) for a in action)
            self.act = np.stack([self.matrix_lookup(a) for a in self.matrices])
            self._validate_action()
        else:
            self.act = None

    # ---- encoding -------------------------------------------------------
    def vec(self, x: int) -> tuple[int, ...]:
        return tuple((int(x) // s) % m for s, m in zip(self.strides, self.factors))

    def idx(self, v: Sequence[int]) -> int:
        if len(v) != self.rank:
            raise InvalidModule(f"residue vector {list(v)} has wrong length")
        return sum((int(a) % m) * s for a, m, s in zip(v, self.factors, self.strides))

    @cached_property
    def vectors(self) -> np.ndarray:
        return np.array([self.vec(x) for x in range(self.size)], dtype=np.int64).reshape(self.size, self.rank)

    @cached_property
    def add(self) -> np.ndarray:
        v = self.vectors
        s = (v[:, None, :] + v[None, :, :]) % np.array(self.factors, dtype=np.int64)
        return (s * np.array(self.strides, dtype=np.int64)).sum(axis=-1)

    @cached_property
    def neg(self) -> np.ndarray:
        v = (-self.vectors) % np.array(self.factors, dtype=np.int64)
        return (v * np.array(self.strides, dtype=np.int64)).sum(axis=-1)

    @cached_property
    def sub(self) -> np.ndarray:
        return self.add[:, self.neg]

    def plus(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = int(self.add[out, x])
        return out

    def minus(self, a: int, b: int) -> int:
        return int(self.sub[a, b])

    def times(self, k: int, x: int) -> int:
        return self.idx([k * a for a in self.vec(x)])

    def element_order(self, x: int) -> int:
        return _lcm(m // math.gcd(m, a) for a, m in zip(self.vec(x), self.factors))

    # ---- maps -------------------------------------------------------------
    def matrix_lookup(self, mat, target: "CoeffModule | None" = None) -> np.ndarray:
        """Lookup table of the homomorphism x -> mat @ x into ``target`` (default self)."""
        target = target or self
        mat = np.asarray(mat, dtype=np.int64).reshape(target.rank, self.rank)
        for k, mk in enumerate(target.factors):
            for l, ml in enumerate(self.factors):
                if (mat[k, l] * ml) % mk:
                    raise InvalidModule(f"matrix entry ({k},{l}) is not well defined on Z/{ml} -> Z/{mk}")
        img = (self.vectors @ mat.T) % np.array(target.factors, dtype=np.int64)
        return (img * np.array(target.strides, dtype=np.int64)).sum(axis=-1).astype(np.int64)

    def is_automorphism(self, mat) -> bool:
        try:
            f = self.matrix_lookup(mat)
        except InvalidModule:
            return False
        return len(set(f.tolist())) == self.size

    def identity_matrix(self) -> np.ndarray:
        return np.eye(self.rank, dtype=np.int64)

    def _validate_action(self) -> None:
        g = self.group
        ident = np.arange(self.size)
        if not np.array_equal(self.act[0], ident):
            raise InvalidModule("identity of the acting group must act trivially")
        for a in range(g.order):
            if len(set(self.act[a].tolist())) != self.size:
                raise InvalidModule(f"action of {a} is not invertible")
            if not np.array_equal(self.act[a][self.add], self.add[self.act[a][:, None], self.act[a][None, :]]):
                raise InvalidModule(f"action of {a} is not additive")
            for b in range(g.order):
                if not np.array_equal(self.act[int(g.mul[a, b])], self.act[a][self.act[b]]):
                    raise InvalidModule(f"action(ab) != action(a)action(b) at {(a, b)}")

    def action_table(self, group: FiniteGroup) -> np.ndarray:
        """Per-element lookup tables for ``group`` acting on self (identity when trivial)."""
        if self.act is None:
            cache = self.__dict__.setdefault("_trivial_tables", {})
            if group.order not in cache:
                table = np.tile(np.arange(self.size), (group.order, 1))
                table.setflags(write=False)
                cache[group.order] = table
            return cache[group.order]
        if self.group != group:
            raise InvalidModule("module is acted on by a different group")
        return self.act

    @property
    def is_trivial_action(self) -> bool:
        return self.act is None or bool((self.act == np.arange(self.size)).all())

    def trivial(self) -> "CoeffModule":
        return CoeffModule(self.factors)

    def with_action(self, group: FiniteGroup, matrices) -> "CoeffModule":
        return CoeffModule(self.factors, group, matrices)

    def pullback(self, group: FiniteGroup, f) -> "CoeffModule":
        """Module for ``group`` acting through the homomorphism ``f`` into the acting group."""
        if self.matrices is None:
            return CoeffModule(self.factors, group)
        return CoeffModule(self.factors, group, [self.matrices[int(f[g])] for g in range(group.order)])

    def same_abelian_group(self, other: "CoeffModule") -> bool:
        return self.factors == other.factors

    def __repr__(self) -> str:
        body = " x ".join(f"Z/{m}" for m in self.factors) or "0"
        return f"CoeffModule({body}{'' if self.is_trivial_action else ', twisted'})"

    def to_json(self) -> dict:
        out: dict = {"factors": list(self.factors)}
        if self.matrices is not None and not self.is_trivial_action:
            out["action"] = [m.tolist() for m in self.matrices]
        return out


def cyclic_module(m: int, group: FiniteGroup | None = None) -> CoeffModule:
    return CoeffModule([m], group)
