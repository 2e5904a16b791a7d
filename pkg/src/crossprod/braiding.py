"""Braidings on pointed categories and on crossed products of central actions.

A braiding on C(L, M, omega) is a table c(x, y), the scalar of xy -> yx.
With alpha: (xy)z -> x(yz) of scalar omega the two hexagons read

    H1:  -omega(u,v,w) + c(uv,w) - omega(w,u,v) = u.c(v,w) - omega(u,w,v) + c(u,w)
    H2:   omega(u,v,w) + c(u,vw) + omega(v,w,u) = c(u,v) + omega(v,u,w) + v.c(u,w)

Naturality of c forces objects to act trivially on scalars.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .check import PASS, Check, fail
from .errors import (
    InvalidActionBraiding,
    MismatchedCategory,
    NonAbelianGroup,
    NonAbelianObjects,
    NotCentral,
    NotCoherent,
    SizeLimitExceeded,
)
from .linalg import AffineSystem
from .outer_action import CrossedSystem, _require_valid, check_coherence
from .pointed import PointedCategory

DEFAULT_SOLUTION_LIMIT = 1 << 16


# ------------------------------------------------------------------ pointed braidings
@dataclass(frozen=True, eq=False)
class PointedBraiding:
    host: PointedCategory
    c: np.ndarray

    def __post_init__(self):
        if not self.host.objects.is_abelian:
            raise NonAbelianObjects("braided pointed categories need an abelian object group")
        c = np.array(self.c, dtype=np.int64)
        n = self.host.objects.order
        if c.shape != (n, n):
            raise InvalidActionBraiding(f"braiding table has shape {c.shape}, expected {(n, n)}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def zero(cls, C: PointedCategory) -> "PointedBraiding":
        n = C.objects.order
        return cls(C, np.zeros((n, n), dtype=np.int64))

    def same_as(self, other: "PointedBraiding") -> bool:
        return self.host.same_as(other.host) and np.array_equal(self.c, other.c)

    def to_json(self) -> dict:
        return {"c": self.host.scalars.vectors[self.c].tolist()}


def hexagon_defects(C: PointedCategory, c) -> tuple[np.ndarray, np.ndarray]:
    """Tables over (u, v, w) of both hexagons, each as left side minus right side."""
    L, M = C.objects, C.scalars
    A = C.assoc.values
    c = np.asarray(c, dtype=np.int64)
    act = M.action_table(L)
    n = L.order
    u, v, w = np.indices((n,) * 3, dtype=np.int64)
    mul = L.mul
    left1 = M.sub[M.sub[c[mul[u, v], w], A[u, v, w]], A[w, u, v]]
    right1 = M.add[M.sub[act[u, c[v, w]], A[u, w, v]], c[u, w]]
    left2 = M.add[M.add[A[u, v, w], c[u, mul[v, w]]], A[v, w, u]]
    right2 = M.add[M.add[c[u, v], A[v, u, w]], act[v, c[u, w]]]
    return M.sub[left1, right1], M.sub[left2, right2]


def _first_failure(tables: dict) -> Check:
    """Lexicographically smallest failing index over several tables, tagged by table."""
    best = None
    for tag, table in tables.items():
        bad = np.argwhere(table != 0)
        if bad.size:
            w = tuple(int(i) for i in bad[0])
            if best is None or w < best[0]:
                best = (w, tag)
    return PASS if best is None else fail(best[0], best[1])


def _action_witness(C: PointedCategory) -> Optional[tuple]:
    act = C.scalars.action_table(C.objects)
    bad = np.argwhere(act != np.arange(C.scalars.size))
    return None if not bad.size else tuple(int(i) for i in bad[0])


def hexagon_check(b: PointedBraiding) -> Check:
    """Normalization, naturality (objects act trivially) and both hexagons at every triple."""
    C = b.host
    if not C.objects.is_abelian:
        raise NonAbelianObjects("braided pointed categories need an abelian object group")
    if b.c[0].any() or b.c[:, 0].any():
        bad = np.argwhere((b.c != 0) & ((np.arange(len(b.c))[:, None] == 0) | (np.arange(len(b.c))[None, :] == 0)))
        return fail(bad[0], "normalization")
    w = _action_witness(C)
    if w is not None:
        return fail(w, "naturality")
    h1, h2 = hexagon_defects(C, b.c)
    return _first_failure({"H1": h1, "H2": h2})


def _check_braidable(C: PointedCategory) -> None:
    if not C.objects.is_abelian:
        raise NonAbelianObjects("braided pointed categories need an abelian object group")


def _braiding_system(C: PointedCategory) -> AffineSystem:
    n = C.objects.order

    def table(x):
        c = np.zeros((n, n), dtype=np.int64)
        c[1:, 1:] = x.reshape(n - 1, n - 1)
        return c

    def residual(x):
        h1, h2 = hexagon_defects(C, table(x))
        return np.concatenate([h1.reshape(-1), h2.reshape(-1)])

    return AffineSystem(C.scalars, (n - 1) ** 2, residual), table


def solve_braidings(C: PointedCategory, *, limit: int = DEFAULT_SOLUTION_LIMIT, oracle: bool = False) -> list[PointedBraiding]:
    """All braidings, in lexicographic order of their tables.

    With ``oracle`` the result is compared against exhaustive enumeration.
    """
    _check_braidable(C)
    if _action_witness(C) is not None:
        out: list[PointedBraiding] = []
    else:
        system, table = _braiding_system(C)
        out = [PointedBraiding(C, table(x)) for x in system.all_solutions(limit)]
    if oracle:
        ref = enumerate_braidings(C, limit=limit)
        if [b.c.tolist() for b in ref] != [b.c.tolist() for b in out]:
            raise AssertionError("linear solver and enumeration disagree")
    return out


def enumerate_braidings(C: PointedCategory, *, limit: int = DEFAULT_SOLUTION_LIMIT) -> list[PointedBraiding]:
    """Exhaustive reference: every normalized table filtered by hexagon_check."""
    _check_braidable(C)
    n, size = C.objects.order, C.scalars.size
    count = size ** ((n - 1) ** 2)
    if count > limit:
        raise SizeLimitExceeded(f"{count} candidate braidings exceed {limit}")
    out = []
    for entries in itertools.product(range(size), repeat=(n - 1) ** 2):
        c = np.zeros((n, n), dtype=np.int64)
        c[1:, 1:] = np.array(entries, dtype=np.int64).reshape(n - 1, n - 1)
        b = PointedBraiding(C, c)
        if hexagon_check(b):
            out.append(b)
    return out


# ------------------------------------------------------------------ action braidings
@dataclass(frozen=True, eq=False)
class ActionBraiding:
    """theta[s, v], theta_bar[s, v] and t[s, t] for a central action."""

    theta: np.ndarray
    theta_bar: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        for name in ("theta", "theta_bar", "t"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def zero(cls, S: CrossedSystem) -> "ActionBraiding":
        n, l = S.group.order, S.L.order
        return cls(np.zeros((n, l), dtype=np.int64), np.zeros((n, l), dtype=np.int64), np.zeros((n, n), dtype=np.int64))

    def same_as(self, other: "ActionBraiding") -> bool:
        return (
            np.array_equal(self.theta, other.theta)
            and np.array_equal(self.theta_bar, other.theta_bar)
            and np.array_equal(self.t, other.t)
        )

    def to_json(self, M) -> dict:
        return {
            "theta": M.vectors[self.theta].tolist(),
            "theta_bar": M.vectors[self.theta_bar].tolist(),
            "t": M.vectors[self.t].tolist(),
        }


def _require_central(S: CrossedSystem) -> None:
    if not S.group.is_abelian:
        raise NonAbelianGroup("braided crossed products need an abelian group")
    _check_braidable(S.base)
    if not S.is_central():
        bad = next(s for s, F in enumerate(S.functors) if not F.is_identity)
        raise NotCentral("every functor of the action must be the identity", witness=[bad])
    _require_valid(S)
    res = check_coherence(S)
    if not res:
        raise NotCoherent("system fails the coherence diagram", witness=list(res.witness))


def _shape_check(S: CrossedSystem, ab: ActionBraiding) -> None:
    n, l = S.group.order, S.L.order
    want = {"theta": (n, l), "theta_bar": (n, l), "t": (n, n)}
    for name, shape in want.items():
        if getattr(ab, name).shape != shape:
            raise InvalidActionBraiding(f"{name} has shape {getattr(ab, name).shape}, expected {shape}")


def action_braiding_defects(S: CrossedSystem, base: PointedBraiding, ab: ActionBraiding) -> dict:
    """Defect tables of every condition that depends on the unknowns.

    Keys, in checking order: theta-character (s, v, w), theta-bar-character
    (s, v, w), B1 and B2 (s, t, z), B3 and B4 (s, t, r).
    """
    G, L, M = S.group, S.L, S.M
    n, l = G.order, L.order
    c, U, chi, W = base.c, S.carriers, S.chi, S.omega
    th, tb, t = ab.theta, ab.theta_bar, ab.t
    s_, v_, w_ = np.indices((n, l, l))
    char = M.sub[th[s_, L.mul[v_, w_]], M.add[th[s_, v_], th[s_, w_]]]
    char_bar = M.sub[tb[s_, L.mul[v_, w_]], M.add[tb[s_, v_], tb[s_, w_]]]
    a, b, z = np.indices((n, n, l))
    ab_ = G.mul[a, b]
    Uab = U[a, b]
    # B1: chi_{s,t}(z) + c(U_{s,t}, z) = tb^s(z) + tb^t(z) - tb^{st}(z)
    b1 = M.sub[M.add[chi[a, b, z], c[Uab, z]], M.sub[M.add[tb[a, z], tb[b, z]], tb[ab_, z]]]
    # B2: c(z, U_{s,t}) - chi_{s,t}(z) = th^s(z) + th^t(z) - th^{st}(z)
    b2 = M.sub[M.sub[c[z, Uab], chi[a, b, z]], M.sub[M.add[th[a, z], th[b, z]], th[ab_, z]]]
    a, b, r = np.indices((n, n, n))
    mul = G.mul
    # B3: w(s,t,r) + th^r(U_{s,t}) + t(st,r) + w(r,s,t) = t(t,r) + w(s,r,t) + t(s,r)
    left3 = M.add[M.add[W[a, b, r], th[r, U[a, b]]], M.add[t[mul[a, b], r], W[r, a, b]]]
    right3 = M.add[M.add[t[b, r], W[a, r, b]], t[a, r]]
    # B4: -w(s,t,r) + tb^s(U_{t,r}) + t(s,tr) - w(t,r,s) = t(s,t) - w(t,s,r) + t(s,r)
    left4 = M.sub[M.add[M.sub[tb[a, U[b, r]], W[a, b, r]], t[a, mul[b, r]]], W[b, r, a]]
    right4 = M.add[M.sub[t[a, b], W[b, a, r]], t[a, r]]
    return {
        "theta-character": char,
        "theta-bar-character": char_bar,
        "B1": b1,
        "B2": b2,
        "B3": M.sub[left3, right3],
        "B4": M.sub[left4, right4],
    }


def _static_conditions(S: CrossedSystem) -> Check:
    """Conditions on the system alone: symmetric carriers and chi_{s,t} = chi_{t,s}."""
    bad = np.argwhere(S.carriers != S.carriers.T)
    if bad.size:
        return fail(bad[0], "carriers")
    bad = np.argwhere(S.chi != S.chi.transpose(1, 0, 2))
    if bad.size:
        return fail(bad[0], "center")
    return PASS


def verify_action_braiding(S: CrossedSystem, base: PointedBraiding, ab: ActionBraiding) -> Check:
    """Every condition on (theta, theta_bar, t), checked family by family."""
    _require_central(S)
    _shape_check(S, ab)
    res = hexagon_check(base)
    if not res:
        return fail(res.witness, "base-" + res.tag)
    n = S.group.order
    if ab.theta[0].any() or ab.theta_bar[0].any():
        return fail((0,), "normalization")
    if ab.theta[:, 0].any() or ab.theta_bar[:, 0].any():
        bad = int(np.flatnonzero(ab.theta[:, 0] | ab.theta_bar[:, 0])[0])
        return fail((bad,), "normalization")
    if ab.t[0].any() or ab.t[:, 0].any():
        return fail((0,), "normalization")
    res = _static_conditions(S)
    if not res:
        return res
    for tag, table in action_braiding_defects(S, base, ab).items():
        bad = np.argwhere(table != 0)
        if bad.size:
            return fail(bad[0], tag)
    return PASS


def transfer_table(S: CrossedSystem, base: PointedBraiding, ab: ActionBraiding) -> np.ndarray:
    """c((v,s),(w,t)) = c(v,w) + theta^t(v) + theta_bar^s(w) + t(s,t) on product indices."""
    M = S.M
    l, n = S.L.order, S.group.order
    s, v = np.divmod(np.arange(n * l), l)
    X, Y = np.meshgrid(np.arange(n * l), np.arange(n * l), indexing="ij")
    out = M.add[M.add[base.c[v[X], v[Y]], ab.theta[s[Y], v[X]]], M.add[ab.theta_bar[s[X], v[Y]], ab.t[s[X], s[Y]]]]
    return out


def braiding_from_action(S: CrossedSystem, base: PointedBraiding, ab: ActionBraiding, built=None) -> PointedBraiding:
    from .crossed_product import build_unchecked

    res = verify_action_braiding(S, base, ab)
    if not res:
        raise InvalidActionBraiding(f"action braiding fails {res.tag}", tag=res.tag, witness=list(res.witness))
    built = built or build_unchecked(S)
    return PointedBraiding(built.category, transfer_table(S, base, ab))


def action_from_braiding(S: CrossedSystem, built, b: PointedBraiding) -> tuple[PointedBraiding, ActionBraiding]:
    """Read (c, theta, theta_bar, t) off a braiding of the built category at generators."""
    host = built.category if hasattr(built, "category") else built
    l, n = S.L.order, S.group.order
    if host.objects.order != l * n or not b.host.same_as(host):
        raise MismatchedCategory("braiding does not live on the product category")
    gens = np.arange(n) * l
    c = b.c
    base = PointedBraiding(S.base, c[:l, :l])
    theta = c[np.ix_(np.arange(l), gens)].T
    theta_bar = c[np.ix_(gens, np.arange(l))]
    t = c[np.ix_(gens, gens)]
    return base, ActionBraiding(theta, theta_bar, t)


def solve_action_braidings(S: CrossedSystem, base: PointedBraiding, *, limit: int = DEFAULT_SOLUTION_LIMIT) -> list[ActionBraiding]:
    """All action braidings over the given base braiding, in lexicographic order."""
    _require_central(S)
    if not hexagon_check(base):
        return []
    if not _static_conditions(S):
        return []
    n, l = S.group.order, S.L.order
    M = S.M
    nt = (n - 1) * (l - 1)

    def unpack(x):
        th = np.zeros((n, l), dtype=np.int64)
        tb = np.zeros((n, l), dtype=np.int64)
        t = np.zeros((n, n), dtype=np.int64)
        th[1:, 1:] = x[:nt].reshape(n - 1, l - 1)
        tb[1:, 1:] = x[nt : 2 * nt].reshape(n - 1, l - 1)
        t[1:, 1:] = x[2 * nt :].reshape(n - 1, n - 1)
        return ActionBraiding(th, tb, t)

    def residual(x):
        tables = action_braiding_defects(S, base, unpack(x))
        return np.concatenate([tab.reshape(-1) for tab in tables.values()])

    system = AffineSystem(M, 2 * nt + (n - 1) ** 2, residual)
    sols = [unpack(x) for x in system.all_solutions(limit)]
    return sorted(sols, key=lambda ab: (ab.theta.tolist(), ab.theta_bar.tolist(), ab.t.tolist()))
