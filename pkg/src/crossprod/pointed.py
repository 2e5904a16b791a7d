"""Skeletal pointed tensor categories C(L, M, omega) and their 2-cells.

Objects are the elements of a finite group L, every Hom set between equal
objects is the scalar group M (identified through left tensoring), and the
associator

    alpha_{x,y,z}: (x y) z -> x (y z)

is the scalar ``assoc(x, y, z)``.  Composition adds scalars; the tensor
product of f in Aut(x) and g in Aut(y) is ``f + x.g``.  With this convention
the pentagon is exactly ``d(assoc) = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .check import PASS, Check, fail
from .cochains import Cochain, differential, first_unnormalized
from .cohomology import solve_coboundary
from .errors import (
    CarrierMismatch,
    DomainMismatch,
    InvariantViolation,
    NotACocycle,
    NotAHomomorphism,
    Pi0Mismatch,
    Pi1Mismatch,
    SizeLimitExceeded,
)
from .groups import FiniteGroup, is_homomorphism
from .linalg import AffineSystem
from .modules import CoeffModule


# ------------------------------------------------------------------ categories
@dataclass(frozen=True, eq=False)
class PointedCategory:
    objects: FiniteGroup
    scalars: CoeffModule
    assoc: Cochain
    checked: bool = True

    def __post_init__(self):
        if self.assoc.degree != 3 or self.assoc.group.order != self.objects.order:
            raise InvariantViolation("assoc", "associator must be a 3-cochain on the object group")
        if self.assoc.module.factors != self.scalars.factors:
            raise InvariantViolation("assoc", "associator values live in a different scalar group")
        if self.scalars.act is not None and self.scalars.group != self.objects:
            raise InvariantViolation("scalars", "scalar action is not by the object group")
        bad = first_unnormalized(self.assoc.values)
        if bad is not None:
            raise InvariantViolation("assoc", f"not normalized at {bad}", witness=list(bad))
        if self.checked:
            res = pentagon_check(self)
            if not res:
                raise NotACocycle("associator fails the pentagon", witness=list(res.witness))

    @classmethod
    def build(cls, objects: FiniteGroup, scalars: CoeffModule, assoc=None, *, checked: bool = True):
        """Category with the given associator table (zero when omitted)."""
        if assoc is None:
            values = np.zeros((objects.order,) * 3, dtype=np.int64)
        elif isinstance(assoc, Cochain):
            values = assoc.values
        else:
            values = np.asarray(assoc, dtype=np.int64)
        return cls(objects, scalars, Cochain(objects, scalars, values, check=False), checked)

    @property
    def L(self) -> FiniteGroup:
        return self.objects

    @property
    def M(self) -> CoeffModule:
        return self.scalars

    @property
    def trivial_action(self) -> bool:
        return self.scalars.is_trivial_action

    def a(self, x: int, y: int, z: int) -> int:
        return int(self.assoc.values[x, y, z])

    def act(self, x: int, m: int) -> int:
        if self.scalars.act is None:
            return int(m)
        return int(self.scalars.act[x, m])

    def same_as(self, other: "PointedCategory") -> bool:
        return (
            self.objects == other.objects
            and self.scalars.factors == other.scalars.factors
            and np.array_equal(self.assoc.values, other.assoc.values)
        )

    def to_json(self) -> dict:
        return {
            "objects": self.objects.to_json(),
            "scalars": self.scalars.to_json(),
            "assoc": self.assoc.to_json(),
        }


def pentagon_defect(C: PointedCategory) -> np.ndarray:
    """Table over (a, b, c, d) of the two pentagon paths ((ab)c)d -> a(b(cd)), subtracted."""
    L, M = C.objects, C.scalars
    A = C.assoc.values
    act = M.action_table(L)
    n = L.order
    a, b, c, d = np.indices((n,) * 4, dtype=np.int64)
    mul = L.mul
    top = M.add[A[mul[a, b], c, d], A[a, b, mul[c, d]]]
    bottom = M.add[M.add[A[a, b, c], A[a, mul[b, c], d]], act[a, A[b, c, d]]]
    return M.sub[top, bottom]


def pentagon_check(C: PointedCategory) -> Check:
    bad = np.argwhere(pentagon_defect(C) != 0)
    if bad.size:
        return fail(bad[0], "pentagon")
    return PASS


# ------------------------------------------------------------------ functors
@dataclass(frozen=True, eq=False)
class MonoidalEquivalence:
    """A monoidal autoequivalence in pointed form (pi0, pi1, k).

    ``pi0`` permutes objects, ``pi1`` is a lookup table for the induced
    automorphism of M, and ``k(x, y)`` is the scalar of psi: F(x)F(y) -> F(xy).
    """

    source: PointedCategory
    target: PointedCategory
    pi0: np.ndarray
    pi1: np.ndarray
    k: Cochain

    def __post_init__(self):
        pi0 = np.asarray(self.pi0, dtype=np.int64)
        pi1 = np.asarray(self.pi1, dtype=np.int64)
        if pi0.shape != (self.source.objects.order,):
            raise DomainMismatch("pi0 has the wrong length")
        if pi1.shape != (self.source.scalars.size,):
            raise DomainMismatch("pi1 has the wrong length")
        if self.source.scalars.factors != self.target.scalars.factors:
            raise DomainMismatch("source and target have different scalar groups")
        if self.k.degree != 2 or self.k.group.order != self.source.objects.order:
            raise DomainMismatch("k must be a 2-cochain on the source objects")
        bad = first_unnormalized(self.k.values)
        if bad is not None:
            raise InvariantViolation("k", f"not normalized at {bad}", witness=list(bad))
        pi0.setflags(write=False)
        pi1.setflags(write=False)
        object.__setattr__(self, "pi0", pi0)
        object.__setattr__(self, "pi1", pi1)

    @classmethod
    def _raw(cls, source, target, pi0, pi1, k) -> "MonoidalEquivalence":
        """Construct without validation, for internally derived data."""
        self = object.__new__(cls)
        for name, val in (("source", source), ("target", target), ("pi0", pi0), ("pi1", pi1), ("k", k)):
            object.__setattr__(self, name, val)
        return self

    @classmethod
    def identity(cls, C: PointedCategory) -> "MonoidalEquivalence":
        return cls(
            C,
            C,
            np.arange(C.objects.order),
            np.arange(C.scalars.size),
            Cochain.zero(C.objects, C.scalars, 2),
        )

    @classmethod
    def from_matrix(cls, source, target, pi0, matrix, k) -> "MonoidalEquivalence":
        lookup = source.scalars.matrix_lookup(matrix)
        if not isinstance(k, Cochain):
            k = Cochain(source.objects, source.scalars, k)
        return cls(source, target, pi0, lookup, k)

    def __call__(self, x: int) -> int:
        return int(self.pi0[x])

    def m(self, s: int) -> int:
        return int(self.pi1[s])

    def psi(self, x: int, y: int) -> int:
        return int(self.k.values[x, y])

    @property
    def is_identity(self) -> bool:
        return (
            np.array_equal(self.pi0, np.arange(len(self.pi0)))
            and np.array_equal(self.pi1, np.arange(len(self.pi1)))
            and self.k.is_zero()
        )

    def same_as(self, other: "MonoidalEquivalence") -> bool:
        return (
            np.array_equal(self.pi0, other.pi0)
            and np.array_equal(self.pi1, other.pi1)
            and np.array_equal(self.k.values, other.k.values)
        )

    def to_json(self) -> dict:
        M = self.source.scalars
        return {
            "pi0": self.pi0.tolist(),
            "pi1": _lookup_to_matrix(M, self.pi1),
            "k": self.k.to_json(),
        }


def _lookup_to_matrix(M: CoeffModule, lookup) -> list[list[int]]:
    """Matrix whose column l is the image of the l-th generator."""
    cols = []
    for l in range(M.rank):
        unit = M.idx([1 if c == l else 0 for c in range(M.rank)])
        cols.append(M.vec(int(lookup[unit])))
    return [[cols[l][r] for l in range(M.rank)] for r in range(M.rank)]


def _check_automorphisms(C: PointedCategory, D: PointedCategory, F: MonoidalEquivalence) -> None:
    if C.objects.order != D.objects.order:
        raise DomainMismatch("object groups have different orders")
    if not is_homomorphism(C.objects, D.objects, F.pi0) or len(set(F.pi0.tolist())) != D.objects.order:
        raise NotAHomomorphism("pi0 is not a group isomorphism")
    M = C.scalars
    if len(set(F.pi1.tolist())) != M.size or not np.array_equal(F.pi1[M.add], M.add[F.pi1[:, None], F.pi1[None, :]]):
        raise NotAHomomorphism("pi1 is not an automorphism of the scalars")
    # pi1(x.m) = pi0(x).pi1(m)
    left = F.pi1[C.scalars.action_table(C.objects)]
    right = D.scalars.action_table(D.objects)[F.pi0][:, F.pi1]
    if not np.array_equal(left, right):
        raise NotAHomomorphism("pi1 does not intertwine the actions on scalars")


def functor_defect(C: PointedCategory, D: PointedCategory, F: MonoidalEquivalence) -> np.ndarray:
    """Table of dk - (pi1 omega - omega' pi0^3); zero exactly for monoidal functors."""
    M = C.scalars
    act = D.scalars.action_table(D.objects)
    n = C.objects.order
    x, y, z = np.indices((n,) * 3, dtype=np.int64)
    K = F.k.values
    mul = C.objects.mul
    dk = M.add[M.sub[act[F.pi0[x], K[y, z]], K[mul[x, y], z]], M.sub[K[x, mul[y, z]], K[x, y]]]
    rhs = M.sub[F.pi1[C.assoc.values], D.assoc.values[F.pi0[x], F.pi0[y], F.pi0[z]]]
    return M.sub[dk, rhs]


def verify_equivalence(C: PointedCategory, D: PointedCategory, F: MonoidalEquivalence) -> Check:
    """Monoidal functor axiom at every triple."""
    if C.objects.order != F.source.objects.order or D.scalars.factors != F.target.scalars.factors:
        raise DomainMismatch("equivalence does not match the given categories")
    _check_automorphisms(C, D, F)
    bad = np.argwhere(functor_defect(C, D, F) != 0)
    if bad.size:
        return fail(bad[0], "monoidal-functor")
    return PASS


def compose_equivalences(F: MonoidalEquivalence, G: MonoidalEquivalence) -> MonoidalEquivalence:
    """The composite G after F, with psi = G(psi^F) followed by psi^G on images."""
    if F.target.objects.order != G.source.objects.order or F.target.scalars.factors != G.source.scalars.factors:
        raise DomainMismatch("target of the first functor is not the source of the second")
    M = F.source.scalars
    pi0 = G.pi0[F.pi0]
    pi1 = G.pi1[F.pi1]
    kv = M.add[G.pi1[F.k.values], G.k.values[F.pi0[:, None], F.pi0[None, :]]]
    return MonoidalEquivalence._raw(F.source, G.target, pi0, pi1, Cochain(F.source.objects, M, kv, check=False))


def _pulled_module(F: MonoidalEquivalence) -> CoeffModule:
    D = F.target
    if D.scalars.act is None:
        return D.scalars.trivial()
    return D.scalars.pullback(F.source.objects, F.pi0)


def nat_iso_exists(F: MonoidalEquivalence, G: MonoidalEquivalence) -> Optional[Cochain]:
    """A 1-cochain p with dp = k_F - k_G (monoidal natural iso F -> G), or None."""
    if not np.array_equal(F.pi0, G.pi0):
        raise Pi0Mismatch("functors differ on objects")
    if not np.array_equal(F.pi1, G.pi1):
        raise Pi1Mismatch("functors differ on scalars")
    module = _pulled_module(F)
    diff = Cochain(F.source.objects, module, module.sub[F.k.values, G.k.values], check=False)
    return solve_coboundary(diff)


def natural_iso_defect(F: MonoidalEquivalence, G: MonoidalEquivalence, p: Cochain) -> np.ndarray:
    """Table of k_F(x,y) + p(xy) - p(x) - F(x).p(y) - k_G(x,y)."""
    M = F.source.scalars
    D = F.target
    act = D.scalars.action_table(D.objects)
    n = F.source.objects.order
    x, y = np.indices((n, n), dtype=np.int64)
    P = p.values
    left = M.add[F.k.values, P[F.source.objects.mul]]
    right = M.add[M.add[P[x], act[F.pi0[x], P[y]]], G.k.values]
    return M.sub[left, right]


# ------------------------------------------------------------------ pseudonatural isos
@dataclass(frozen=True, eq=False)
class PseudonaturalIso:
    """Carrier u with components chi(v): F(v) u -> u G(v)."""

    source: MonoidalEquivalence
    target: MonoidalEquivalence
    carrier: int
    chi: np.ndarray

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=np.int64)
        if chi.shape != (self.source.source.objects.order,):
            raise DomainMismatch("one component per object is required")
        chi.setflags(write=False)
        object.__setattr__(self, "chi", chi)

    @property
    def category(self) -> PointedCategory:
        return self.source.target

    @classmethod
    def identity(cls, F: MonoidalEquivalence) -> "PseudonaturalIso":
        return cls(F, F, 0, np.zeros(F.source.objects.order, dtype=np.int64))

    def same_as(self, other: "PseudonaturalIso") -> bool:
        return self.carrier == other.carrier and np.array_equal(self.chi, other.chi)


def pseudonatural_defect(s: PseudonaturalIso) -> np.ndarray:
    """Coherence table over pairs (x, y): path through chi(xy) minus path through chi(x), chi(y)."""
    F, G, u = s.source, s.target, s.carrier
    D = F.target
    M = D.scalars
    L = D.objects
    A = D.assoc.values
    act = M.action_table(L)
    n = F.source.objects.order
    x, y = np.indices((n, n), dtype=np.int64)
    Fx, Fy, Gx, Gy = F.pi0[x], F.pi0[y], G.pi0[x], G.pi0[y]
    chi = s.chi
    # F(x)F(y)u -> F(xy)u -> u G(xy)
    left = M.add[F.k.values, chi[F.source.objects.mul]]
    # F(x)F(y)u -> F(x)(F(y)u) -> F(x)(uG(y)) -> (F(x)u)G(y) -> (uG(x))G(y) -> u(G(x)G(y)) -> uG(xy)
    right = A[Fx, Fy, u]
    right = M.add[right, act[Fx, chi[y]]]
    right = M.sub[right, A[Fx, u, Gy]]
    right = M.add[right, chi[x]]
    right = M.add[right, A[u, Gx, Gy]]
    right = M.add[right, act[u, G.k.values]]
    return M.sub[left, right]


def verify_pseudonatural(s: PseudonaturalIso) -> Check:
    """Object equations, unit normalization, scalar naturality, then the coherence square."""
    F, G, u = s.source, s.target, s.carrier
    D = F.target
    L = D.objects
    M = D.scalars
    for v in range(F.source.objects.order):
        if L.mul[F.pi0[v], u] != L.mul[u, G.pi0[v]]:
            return fail((v,), "pseudonatural-objects")
    if s.chi[0] != 0:
        return fail((0,), "pseudonatural-unit")
    act = M.action_table(L)
    for m in range(M.size):
        if F.pi1[m] != act[u, G.pi1[m]]:
            return fail((m,), "pseudonatural-scalars")
    bad = np.argwhere(pseudonatural_defect(s) != 0)
    if bad.size:
        return fail(bad[0], "pseudonatural")
    return PASS


def vertical_compose(s: PseudonaturalIso, t: PseudonaturalIso) -> PseudonaturalIso:
    """s: F -> G followed by t: G -> H, with carrier u u'."""
    D = s.category
    M = D.scalars
    A = D.assoc.values
    act = M.action_table(D.objects)
    u, w = s.carrier, t.carrier
    F, H = s.source, t.target
    Fv, Gv, Hv = s.source.pi0, s.target.pi0, t.target.pi0
    # F(v)(uu') -> (F(v)u)u' -> (uG(v))u' -> u(G(v)u') -> u(u'H(v)) -> (uu')H(v)
    comp = M.neg[A[Fv, u, w]]
    comp = M.add[comp, s.chi]
    comp = M.add[comp, A[u, Gv, w]]
    comp = M.add[comp, act[u, t.chi]]
    comp = M.sub[comp, A[u, w, Hv]]
    return PseudonaturalIso(F, H, int(D.objects.mul[u, w]), comp)


def tensor_pseudonatural(outer: PseudonaturalIso, inner: PseudonaturalIso) -> PseudonaturalIso:
    """Horizontal composite of inner: H -> H' and outer: K -> K', from K H to K' H'.

    The carrier is K(u) u' (u the inner, u' the outer carrier) and the
    component at v is the composite

        KH(v)(K(u)u') -> (KH(v)K(u))u' -> K(H(v)u)u' -> K(uH'(v))u'
            -> (K(u)KH'(v))u' -> K(u)(KH'(v)u') -> K(u)(u'K'H'(v)) -> (K(u)u')K'H'(v)
    """
    K, K2 = outer.source, outer.target
    H, H2 = inner.source, inner.target
    if K.source.objects != H.target.objects or K.source.scalars.factors != H.target.scalars.factors:
        raise DomainMismatch("inner functors do not land in the source of the outer ones")
    D = K.target
    M = D.scalars
    A = D.assoc.values
    act = M.action_table(D.objects)
    KH = compose_equivalences(H, K)
    K2H2 = compose_equivalences(H2, K2)
    u, u2 = inner.carrier, outer.carrier
    Ku = int(K.pi0[u])
    Hv, H2v = H.pi0, H2.pi0
    KHv, KH2v, K2H2v = K.pi0[Hv], K.pi0[H2v], K2.pi0[H2v]
    comp = M.neg[A[KHv, Ku, u2]]
    comp = M.add[comp, K.k.values[Hv, u]]
    comp = M.add[comp, K.pi1[inner.chi]]
    comp = M.sub[comp, K.k.values[u, H2v]]
    comp = M.add[comp, A[Ku, KH2v, u2]]
    comp = M.add[comp, act[Ku, outer.chi[H2v]]]
    comp = M.sub[comp, A[Ku, u2, K2H2v]]
    return PseudonaturalIso(KH, K2H2, int(D.objects.mul[Ku, u2]), comp)


# ------------------------------------------------------------------ modifications
@dataclass(frozen=True, eq=False)
class Modification:
    """A scalar Gamma: u -> u between two pseudonatural isos with carrier u."""

    source: PseudonaturalIso
    target: PseudonaturalIso
    value: int


def modification_defect(g: Modification) -> np.ndarray:
    """Per object: (Gamma x 1) after chi minus chi' after (1 x Gamma)."""
    s, t = g.source, g.target
    D = s.category
    M = D.scalars
    act = M.action_table(D.objects)
    Fv = s.source.pi0
    left = M.add[np.full_like(s.chi, g.value), s.chi]
    right = M.add[t.chi, act[Fv, g.value]]
    return M.sub[left, right]


def verify_modification(g: Modification) -> Check:
    if g.source.carrier != g.target.carrier:
        raise CarrierMismatch("modifications need parallel isos with equal carriers")
    bad = np.argwhere(modification_defect(g) != 0)
    if bad.size:
        return fail(bad[0], "modification")
    return PASS


# ------------------------------------------------------------------ center
@dataclass(frozen=True, eq=False)
class CenterInvertible:
    """Invertible object v with half-braiding scalars beta(x) of v x -> x v."""

    carrier: int
    half_braiding: tuple

    def key(self) -> tuple:
        return (self.carrier,) + tuple(self.half_braiding)


def half_braiding_defect(C: PointedCategory, v: int, beta) -> np.ndarray:
    """Hexagon table over (x, y) for c_{v,-} = beta."""
    L, M = C.objects, C.scalars
    A = C.assoc.values
    act = M.action_table(L)
    beta = np.asarray(beta, dtype=np.int64)
    n = L.order
    x, y = np.indices((n, n), dtype=np.int64)
    # (vx)y -> v(xy) -> (xy)v -> x(yv)
    left = M.add[M.add[A[v, x, y], beta[L.mul]], A[x, y, v]]
    # (vx)y -> (xv)y -> x(vy) -> x(yv)
    right = M.add[M.add[beta[x], A[x, v, y]], act[x, beta[y]]]
    return M.sub[left, right]


def is_center_invertible(C: PointedCategory, z: CenterInvertible) -> Check:
    L, M = C.objects, C.scalars
    v = z.carrier
    if v not in L.center:
        return fail((v,), "center-central")
    act = M.action_table(L)
    if not np.array_equal(act[v], np.arange(M.size)):
        return fail((v,), "center-natural")
    beta = np.asarray(z.half_braiding, dtype=np.int64)
    if beta[0] != 0:
        return fail((0,), "center-unit")
    bad = np.argwhere(half_braiding_defect(C, v, beta) != 0)
    if bad.size:
        return fail(bad[0], "center-hexagon")
    return PASS


def center_product(C: PointedCategory, z: CenterInvertible, w: CenterInvertible) -> CenterInvertible:
    """(v, b)(v', b'): c_{vv',x} through v(v'x) -> v(xv') -> (vx)v' -> (xv)v'."""
    L, M = C.objects, C.scalars
    A = C.assoc.values
    act = M.action_table(L)
    v, v2 = z.carrier, w.carrier
    b, b2 = np.asarray(z.half_braiding), np.asarray(w.half_braiding)
    x = np.arange(L.order)
    out = A[v, v2, x]
    out = M.add[out, act[v, b2]]
    out = M.sub[out, A[v, x, v2]]
    out = M.add[out, b]
    out = M.add[out, A[x, v, v2]]
    return CenterInvertible(int(L.mul[v, v2]), tuple(int(t) for t in out))


@dataclass(frozen=True, eq=False)
class CenterGroup:
    """The invertible objects of the center with their multiplication table."""

    elements: tuple
    group: FiniteGroup

    def index(self, z: CenterInvertible) -> int:
        return {e.key(): i for i, e in enumerate(self.elements)}[z.key()]

    @property
    def order(self) -> int:
        return self.group.order


def center_invertibles(C: PointedCategory, *, limit: int = 4096) -> CenterGroup:
    """All (v, beta), ordered lexicographically with (e, 0) first."""
    L, M = C.objects, C.scalars
    act = M.action_table(L)
    found: list[CenterInvertible] = []
    for v in L.center:
        if not np.array_equal(act[v], np.arange(M.size)):
            continue

        def residual(x, v=v):
            beta = np.concatenate([[0], x])
            return half_braiding_defect(C, v, beta).reshape(-1)

        system = AffineSystem(M, L.order - 1, residual)
        if system.solve() is None:
            continue
        if system.kernel_size() * (len(found) + 1) > limit:
            raise SizeLimitExceeded(f"more than {limit} center invertibles")
        for x in system.all_solutions():
            found.append(CenterInvertible(v, (0,) + tuple(int(t) for t in x)))
    found.sort(key=CenterInvertible.key)
    index = {z.key(): i for i, z in enumerate(found)}
    table = np.zeros((len(found), len(found)), dtype=np.int64)
    for i, z in enumerate(found):
        for j, w in enumerate(found):
            table[i, j] = index[center_product(C, z, w).key()]
    return CenterGroup(tuple(found), FiniteGroup(table))


def abelian_module(group: FiniteGroup) -> tuple[CoeffModule, np.ndarray]:
    """An isomorphic CoeffModule for an abelian group and the element map group -> module."""
    if not group.is_abelian:
        raise DomainMismatch("only abelian groups are coefficient groups")
    n = group.order
    if n == 1:
        return CoeffModule([]), np.zeros(1, dtype=np.int64)
    # invariant factors from the counts |{g : g^d = e}|
    def count(d):
        return sum(1 for g in range(n) if group.power(g, d) == 0)

    from .cohomology import factors_from_torsion

    factors = factors_from_torsion(lambda d: n if d is None else count(d))
    M = CoeffModule(factors)
    orders = [group.element_order(g) for g in range(n)]

    def search(chosen):
        i = len(chosen)
        if i == len(factors):
            images = {}
            for vec in itertools.product(*(range(m) for m in factors)):
                g = group.m(*(group.power(c, a) for c, a in zip(chosen, vec)))
                if g in images:
                    return None
                images[g] = M.idx(vec)
            return images
        for g in range(n):
            if orders[g] == factors[i]:
                out = search(chosen + [g])
                if out is not None:
                    return out
        return None

    images = search([])
    to_module = np.array([images[g] for g in range(n)], dtype=np.int64)
    return M, to_module
