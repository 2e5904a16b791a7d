"""Finite groups given by full multiplication tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .errors import NoIdentity, NoInverse, NotAGroup, NotAssociative, NotAHomomorphism


class FiniteGroup:
    def __init__(self, mul, *, check: bool = True):
        table = np.asarray(mul, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise NotAGroup("multiplication table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise NotAGroup("table entries out of range")
        table.setflags(write=False)
        self.mul = table
        self.order = n
        if check:
            self._validate()
        inv = np.zeros(n, dtype=np.int64)
        for g in range(n):
            inv[g] = int(np.flatnonzero(table[g] == 0)[0])
        inv.setflags(write=False)
        self.inv = inv

    def _validate(self) -> None:
        t = self.mul
        n = self.order
        ident = np.arange(n)
        if not (np.array_equal(t[0], ident) and np.array_equal(t[:, 0], ident)):
            raise NoIdentity("index 0 is not a two-sided identity")
        for g in range(n):
            row = np.flatnonzero(t[g] == 0)
            if row.size == 0 or t[row[0], g] != 0:
                raise NoInverse(g)
        # (ab)c vs a(bc) over all triples, first violation in lexicographic order
        left = t[t[:, :, None], np.arange(n)[None, None, :]]
        right = t[np.arange(n)[:, None, None], t[None, :, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            raise NotAssociative(tuple(int(i) for i in bad[0]))

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FiniteGroup) and np.array_equal(self.mul, other.mul))

    def __hash__(self) -> int:
        return hash(self.mul.tobytes())

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def m(self, *elts: int) -> int:
        """Product of the given elements, left to right."""
        out = 0
        for g in elts:
            out = int(self.mul[out, g])
        return out

    def conj(self, g: int, x: int) -> int:
        return self.m(g, x, int(self.inv[g]))

    def power(self, g: int, k: int) -> int:
        out = 0
        base = g if k >= 0 else int(self.inv[g])
        for _ in range(abs(k)):
            out = int(self.mul[out, base])
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def center(self) -> tuple[int, ...]:
        return tuple(g for g in range(self.order) if np.array_equal(self.mul[g], self.mul[:, g]))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily (largest order first)."""
        gens: list[int] = []
        span = {0}
        for g in sorted(range(1, self.order), key=lambda x: (-self.element_order(x), x)):
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    def closure(self, elements) -> set[int]:
        span = {0}
        frontier = list(elements)
        while frontier:
            nxt = []
            for x in frontier:
                if x in span:
                    continue
                span.add(x)
                nxt.extend(int(self.mul[x, g]) for g in elements)
                nxt.extend(int(self.mul[s, x]) for s in list(span))
            frontier = nxt
        return span

    def to_json(self) -> dict:
        return {"order": self.order, "mul": self.mul.tolist()}


def validate_group(table) -> FiniteGroup:
    return FiniteGroup(table)


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, check=False)


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Element ``(x, y)`` has index ``x * |b| + y``."""
    nb = b.order
    n = a.order * nb
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        x1, y1 = divmod(i, nb)
        for j in range(n):
            x2, y2 = divmod(j, nb)
            table[i, j] = a.mul[x1, x2] * nb + b.mul[y1, y2]
    return FiniteGroup(table, check=False)


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, check=False)


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, f) -> bool:
    f = np.asarray(f)
    return bool(np.array_equal(f[src.mul], dst.mul[f[:, None], f[None, :]]))


def check_homomorphism(src: FiniteGroup, dst: FiniteGroup, f) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (src.order,) or f.min() < 0 or f.max() >= dst.order:
        raise NotAHomomorphism("map has wrong shape or out-of-range values")
    if not is_homomorphism(src, dst, f):
        raise NotAHomomorphism("map does not preserve multiplication")
    return f


def homomorphisms(src: FiniteGroup, dst: FiniteGroup, *, bijective: bool = False):
    """All homomorphisms src -> dst, generated by images of ``src.generators``."""
    gens = src.generators
    # express every element as a word in the generators
    words: dict[int, tuple[int, ...]] = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = int(src.mul[x, g])
                if y not in words:
                    words[y] = words[x] + (i,)
                    nxt.append(y)
        frontier = nxt
    out = []
    candidates = [
        [h for h in range(dst.order) if src.element_order(g) % dst.element_order(h) == 0]
        for g in gens
    ]
    for images in itertools.product(*candidates):
        f = np.zeros(src.order, dtype=np.int64)
        for x, w in words.items():
            f[x] = dst.m(*(images[i] for i in w))
        if not is_homomorphism(src, dst, f):
            continue
        if bijective and len(set(f.tolist())) != dst.order:
            continue
        out.append(f)
    out.sort(key=lambda a: tuple(a.tolist()))
    return out


def automorphisms(group: FiniteGroup):
    return homomorphisms(group, group, bijective=True)
