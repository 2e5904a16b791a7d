"""Bracketed tensor words in a pointed category and their canonical rebracketings.

A tree is either an object (int) or a pair ``(left, right)``.  Every diagram
in this package is evaluated by walking a tree through explicit steps; the
associativity constraints the diagrams leave implicit are supplied by
``rebracket``, which is the scalar of the unique canonical isomorphism
between two bracketings of the same word.  Only trivial actions of objects on
scalars are supported here.
"""

from __future__ import annotations

from .errors import InvalidSystem


def prod(C, t) -> int:
    if isinstance(t, tuple):
        return int(C.objects.mul[prod(C, t[0]), prod(C, t[1])])
    return int(t)


def leaves(t) -> tuple:
    if isinstance(t, tuple):
        return leaves(t[0]) + leaves(t[1])
    return (int(t),)


def _attach(C, left: int, t) -> int:
    """Scalar of left (t) -> (left t_1) ... t_k with t already left nested."""
    M = C.scalars
    total = 0
    while isinstance(t, tuple):
        rest, last = t
        # left (rest last) -> (left rest) last is alpha inverse
        total = M.sub[total, C.assoc.values[left, prod(C, rest), prod(C, last)]]
        t = rest
    return int(total)


def _left_nest(ls):
    t = ls[0]
    for x in ls[1:]:
        t = (t, x)
    return t


def to_left(C, t) -> int:
    """Scalar of the canonical map from t to the left-nested bracketing of its leaves."""
    if not isinstance(t, tuple):
        return 0
    cache = C.__dict__.setdefault("_to_left", {})
    if t in cache:
        return cache[t]
    M = C.scalars
    a, b = t
    total = M.add[to_left(C, a), to_left(C, b)]
    out = int(M.add[total, _attach(C, prod(C, a), _left_nest(leaves(b)))])
    cache[t] = out
    return out


def rebracket(C, src, dst) -> int:
    if leaves(src) != leaves(dst):
        raise ValueError(f"rebracketing changes the word: {src} vs {dst}")
    return int(C.scalars.sub[to_left(C, src), to_left(C, dst)])


def apply_functor(F, t):
    if isinstance(t, tuple):
        return (apply_functor(F, t[0]), apply_functor(F, t[1]))
    return int(F.pi0[t])


def psi_split(F, t) -> int:
    """Scalar of F(t) -> t with F applied leafwise, through inverse structure maps."""
    if not isinstance(t, tuple):
        return 0
    M = F.source.scalars
    C = F.source
    inner = M.add[psi_split(F, t[0]), psi_split(F, t[1])]
    return int(M.sub[inner, F.k.values[prod(C, t[0]), prod(C, t[1])]])


def psi_merge(F, t) -> int:
    """Scalar of t with F applied leafwise -> F(t)."""
    return int(F.source.scalars.neg[psi_split(F, t)])


class Walk:
    """Running composite of morphisms between bracketed words."""

    def __init__(self, C, tree):
        self.C = C
        self.tree = tree
        self.total = 0

    def to(self, tree) -> "Walk":
        self.total = int(self.C.scalars.add[self.total, rebracket(self.C, self.tree, tree)])
        self.tree = tree
        return self

    def step(self, scalar: int, tree) -> "Walk":
        """Apply a morphism with the given scalar whose codomain is ``tree``."""
        if prod(self.C, tree) != prod(self.C, self.tree):
            raise InvalidSystem(f"step changes the object: {self.tree} -> {tree}")
        self.total = int(self.C.scalars.add[self.total, scalar])
        self.tree = tree
        return self
