"""The crossed product C x| G of a coherent crossed system, its inverse, and graded 1-/2-cells.

Objects of the product are pairs (v, s) stored at index ``s * |L| + v``, with

    (v, s)(w, t) = (v . s_*(w) . U_{s,t}, st).

The associator is read off a walk through bracketed words in C: the walk
starts at X(YZ), splits the structure map of s_*, applies omega and chi and
ends at (XY)Z, with every rebracketing in C made explicit.  The associator
(XY)Z -> X(YZ) is the negative of that walk.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .check import PASS, Check, fail
from .cochains import Cochain, differential
from .errors import (
    BadSections,
    CarrierMismatch,
    DomainMismatch,
    IncoherentOneCell,
    InvalidSystem,
    NotAHomomorphism,
    NotCoherent,
    NotGraded,
    NotSurjectiveGrading,
)
from .groups import FiniteGroup, check_homomorphism
from .linalg import AffineSystem
from .modules import CoeffModule
from .outer_action import CrossedSystem, _require_valid, check_coherence, validate_crossed_system
from .pointed import (
    MonoidalEquivalence,
    PointedCategory,
    PseudonaturalIso,
    _check_automorphisms,
    functor_defect,
    natural_iso_defect,
    pentagon_defect,
    verify_equivalence,
)
from .trees import Walk, prod, psi_split


# ------------------------------------------------------------------ graded categories
@dataclass(frozen=True, eq=False)
class GradedPointedCategory:
    """A pointed category together with a grading deg: objects -> group."""

    category: PointedCategory
    group: FiniteGroup
    deg: np.ndarray

    def __post_init__(self):
        deg = np.asarray(self.deg, dtype=np.int64)
        if deg.shape != (self.category.objects.order,):
            raise DomainMismatch("grading needs one degree per object")
        deg.setflags(write=False)
        object.__setattr__(self, "deg", deg)
        check_homomorphism(self.category.objects, self.group, deg)
        if len(set(deg.tolist())) != self.group.order:
            raise NotSurjectiveGrading("grading is not onto the group")

    @property
    def kernel(self) -> np.ndarray:
        return np.flatnonzero(self.deg == 0)

    def to_json(self) -> dict:
        return {"category": self.category.to_json(), "group": self.group.to_json(), "deg": self.deg.tolist()}


def product_index(S: CrossedSystem, v: int, s: int) -> int:
    return int(s) * S.L.order + int(v)


def product_group(S: CrossedSystem) -> FiniteGroup:
    """Object group L x G with (v,s)(w,t) = (v s_*(w) U_{s,t}, st)."""
    G, L = S.group, S.L
    l = L.order
    idx = np.arange(G.order * l)
    s, v = np.divmod(idx, l)
    pi0 = np.stack([F.pi0 for F in S.functors])
    S_, T_ = s[:, None], s[None, :]
    V_, W_ = v[:, None], v[None, :]
    x = L.mul[L.mul[V_, pi0[S_, W_]], S.carriers[S_, T_]]
    table = G.mul[S_, T_] * l + x
    return FiniteGroup(table, check=False)


def _scalar_module(S: CrossedSystem, T: FiniteGroup) -> CoeffModule:
    """M with (v, s) acting as pi1 of s_*."""
    M = S.M
    if all(np.array_equal(F.pi1, np.arange(M.size)) for F in S.functors):
        return M.trivial()
    gm = S.g_module()
    l = S.L.order
    return CoeffModule(M.factors, T, [gm.matrices[t // l] for t in range(T.order)])


def _assoc_walk(S: CrossedSystem, v, s, w, t, z, r) -> tuple[int, tuple]:
    """Walk from X(YZ) to (XY)Z for X = (v,s), Y = (w,t), Z = (z,r); returns (scalar, end tree)."""
    G, C = S.group, S.base
    U = S.carriers
    Fs, Ft = S.functors[s], S.functors[t]
    st, tr = G.m(s, t), G.m(t, r)
    tz = int(Ft.pi0[z])
    inner = ((w, tz), int(U[t, r]))
    walk = Walk(C, ((v, int(Fs.pi0[prod(C, inner)])), int(U[s, tr])))
    sw, stz, sU = int(Fs.pi0[w]), int(Fs.pi0[tz]), int(Fs.pi0[U[t, r]])
    walk.step(psi_split(Fs, inner), ((v, ((sw, stz), sU)), int(U[s, tr])))
    walk.to((((v, sw), stz), (sU, int(U[s, tr]))))
    walk.step(int(S.omega[s, t, r]), (((v, sw), stz), (int(U[s, t]), int(U[st, r]))))
    walk.to((((v, sw), (stz, int(U[s, t]))), int(U[st, r])))
    st_z = int(S.functors[st].pi0[z])
    walk.step(int(S.chi[s, t, z]), (((v, sw), (int(U[s, t]), st_z)), int(U[st, r])))
    end = ((((v, sw), int(U[s, t])), st_z), int(U[st, r]))
    walk.to(end)
    return walk.total, end


def product_associator(S: CrossedSystem, T: Optional[FiniteGroup] = None) -> np.ndarray:
    G, L, M = S.group, S.L, S.M
    l = L.order
    N = G.order * l
    A = np.zeros((N, N, N), dtype=np.int64)
    for x in range(1, N):
        s, v = divmod(x, l)
        for y in range(1, N):
            t, w = divmod(y, l)
            for z_ in range(1, N):
                r, z = divmod(z_, l)
                total, _ = _assoc_walk(S, v, s, w, t, z, r)
                A[x, y, z_] = M.neg[total]
    return A


def build_unchecked(S: CrossedSystem) -> GradedPointedCategory:
    """The product category without validity or coherence checks."""
    T = product_group(S)
    module = _scalar_module(S, T)
    A = product_associator(S, T)
    cat = PointedCategory.build(T, module, A, checked=False)
    deg = np.arange(T.order) // S.L.order
    return GradedPointedCategory(cat, S.group, deg)


def build_crossed_product(S: CrossedSystem, *, coherent: bool = True) -> GradedPointedCategory:
    """C x| G for a valid system; with ``coherent`` the system must pass diagram (1)."""
    _require_valid(S)
    if coherent:
        res = check_coherence(S)
        if not res:
            raise NotCoherent("system fails the coherence diagram", witness=list(res.witness))
    return build_unchecked(S)


# ------------------------------------------------------------------ pentagon families
PENTAGON_FAMILIES = (
    ("base", "the associator of C is a 3-cocycle", "vvvv"),
    ("monoidal-functor", "each s_* is a monoidal functor", "svvv"),
    ("pseudonatural", "each chi_{s,t} is pseudonatural", "ssvv"),
    ("modification", "each omega_{s,t,r} is a modification", "sssv"),
    ("coherence", "the coherence diagram commutes", "ssss"),
)


@dataclass(frozen=True)
class FamilyReport:
    name: str
    certifies: str
    check: Check

    def to_json(self) -> dict:
        return {"family": self.name, "certifies": self.certifies, **self.check.to_json()}


def pentagon_suite(S: CrossedSystem, built: Optional[GradedPointedCategory] = None) -> list[FamilyReport]:
    """Pentagons of the product on generators [v] and [s], one report per family.

    Witnesses are generator labels: group elements in the s slots and
    objects of L in the v slots.
    """
    built = built or build_unchecked(S)
    defect = pentagon_defect(built.category)
    l, n = S.L.order, S.group.order
    out = []
    for name, text, shape in PENTAGON_FAMILIES:
        axes = [np.arange(n) * l if c == "s" else np.arange(l) for c in shape]
        sub = defect[np.ix_(*axes)]
        bad = np.argwhere(sub != 0)
        out.append(FamilyReport(name, text, fail(bad[0], name) if bad.size else PASS))
    return out


def suite_passes(reports) -> bool:
    return all(r.check.ok for r in reports)


# ------------------------------------------------------------------ extraction
def _validate_sections(D: GradedPointedCategory, sections) -> np.ndarray:
    N = np.asarray(sections, dtype=np.int64)
    n, T = D.group.order, D.category.objects
    if N.shape != (n,):
        raise BadSections("need one section per group element")
    if N.min() < 0 or N.max() >= T.order:
        raise BadSections("section is not an object")
    if N[0] != 0:
        raise BadSections("section of the identity must be the unit object", witness=[0])
    for s in range(n):
        if D.deg[N[s]] != s:
            raise BadSections(f"section {int(N[s])} does not have degree {s}", witness=[s])
    return N


def canonical_sections(D: GradedPointedCategory) -> np.ndarray:
    """Smallest object of each degree."""
    return np.array([int(np.flatnonzero(D.deg == s)[0]) for s in range(D.group.order)], dtype=np.int64)


@dataclass(frozen=True)
class Extraction:
    system: CrossedSystem
    labels: np.ndarray  # product index -> object of D
    gauge: Cochain  # h with assoc(D) - dh the normal form


def _read_off(D: GradedPointedCategory, A: np.ndarray, N: np.ndarray):
    T = D.category.objects
    G = D.group
    ker = D.kernel
    pos = np.full(T.order, -1, dtype=np.int64)
    pos[ker] = np.arange(len(ker))
    l, n = len(ker), G.order
    L = FiniteGroup(pos[T.mul[np.ix_(ker, ker)]], check=False)
    act = D.category.scalars.action_table(T)
    if not np.array_equal(act[ker], np.tile(np.arange(D.category.scalars.size), (l, 1))):
        raise DomainMismatch("degree-e objects must act trivially on scalars")
    M = D.category.scalars.trivial()
    C = PointedCategory.build(L, M, A[np.ix_(ker, ker, ker)], checked=False)
    inv = T.inv
    functors = []
    for s in range(n):
        Ns = int(N[s])
        pi0 = pos[T.mul[T.mul[Ns, ker], inv[Ns]]]
        k = Cochain(L, M, A[Ns][np.ix_(ker, ker)], check=False)
        functors.append(MonoidalEquivalence._raw(C, C, pi0, np.array(act[Ns]), k))
    carriers = pos[T.mul[T.mul[N[:, None], N[None, :]], inv[N[G.mul]]]]
    chi = M.neg[A[N[:, None, None], N[None, :, None], ker[None, None, :]]]
    omega = M.neg[A[N[:, None, None], N[None, :, None], N[None, None, :]]]
    S = CrossedSystem(G, C, tuple(functors), carriers, chi, omega)
    s_, v_ = np.divmod(np.arange(n * l), l)
    labels = T.mul[ker[v_], N[s_]]
    return S, labels


def _relabel(A: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Table of A pulled back to product indices."""
    return A[np.ix_(labels, labels, labels)]


def extract_with_gauge(D: GradedPointedCategory, sections=None) -> Extraction:
    """Read off a crossed system, first moving the associator of D into normal form if needed."""
    N = canonical_sections(D) if sections is None else _validate_sections(D, sections)
    cat = D.category
    T, Mod = cat.objects, cat.scalars
    A = cat.assoc.values
    S, labels = _read_off(D, A, N)
    zero = Cochain.zero(T, Mod, 2)
    if np.array_equal(product_associator(S), _relabel(A, labels)):
        return Extraction(S, labels, zero)

    free = T.order - 1

    def twisted(x):
        h = np.zeros((T.order, T.order), dtype=np.int64)
        h[1:, 1:] = x.reshape(free, free)
        dh = differential(Cochain(T, Mod, h, check=False)).values
        return Mod.sub[A, dh], h

    def residual(x):
        A2, _ = twisted(x)
        S2, _ = _read_off(D, A2, N)
        return Mod.sub[_relabel(A2, labels), product_associator(S2)].reshape(-1)

    x = AffineSystem(Mod, free * free, residual).solve()
    if x is None:
        raise InvalidSystem("associator admits no normal form for these sections")
    A2, h = twisted(x)
    S, _ = _read_off(D, A2, N)
    return Extraction(S, labels, Cochain(T, Mod, h, check=False))


def extract_crossed_system(D: GradedPointedCategory, sections=None) -> CrossedSystem:
    """The crossed system presented by D and a choice of sections N_s of degree s."""
    return extract_with_gauge(D, sections).system


# ------------------------------------------------------------------ 1-cells
@dataclass(frozen=True, eq=False)
class OneCell:
    """(H, theta, Pi) from S to S2 in pointed form.

    ``carriers[s]`` is the object u_s of theta_s, ``theta[s, v]`` is the
    scalar of u_s s^(H v) -> H(s~ v) u_s and ``Pi[s, t]`` is the scalar of
    u_s s^(u_t) U'_{s,t} -> H(U_{s,t}) u_{st}.  Here s~ and s^ are the actions
    of the source and target systems.
    """

    source: CrossedSystem
    target: CrossedSystem
    H: MonoidalEquivalence
    carriers: np.ndarray
    theta: np.ndarray
    Pi: np.ndarray

    def __post_init__(self):
        n, l = self.source.group.order, self.source.L.order
        if self.target.group != self.source.group:
            raise DomainMismatch("1-cells need systems over the same group")
        if self.target.M.factors != self.source.M.factors:
            raise DomainMismatch("1-cells need equal scalar groups")
        shapes = {"carriers": (n,), "theta": (n, l), "Pi": (n, n)}
        for name, shape in shapes.items():
            arr = np.array(getattr(self, name), dtype=np.int64)
            if arr.shape != shape:
                raise DomainMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def identity(cls, S: CrossedSystem) -> "OneCell":
        n, l = S.group.order, S.L.order
        return cls(
            S,
            S,
            MonoidalEquivalence.identity(S.base),
            np.zeros(n, dtype=np.int64),
            np.zeros((n, l), dtype=np.int64),
            np.zeros((n, n), dtype=np.int64),
        )

    def theta_iso(self, s: int) -> PseudonaturalIso:
        """theta^s as a pseudonatural iso H s~ -> s^ H (components are inverted)."""
        from .pointed import compose_equivalences

        src = compose_equivalences(self.source.functors[s], self.H)
        tgt = compose_equivalences(self.H, self.target.functors[s])
        return PseudonaturalIso(src, tgt, int(self.carriers[s]), self.source.M.neg[self.theta[s]])

    def same_as(self, other: "OneCell") -> bool:
        return (
            self.H.same_as(other.H)
            and np.array_equal(self.carriers, other.carriers)
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.Pi, other.Pi)
        )

    def to_json(self) -> dict:
        M = self.source.M
        return {
            "H": self.H.to_json(),
            "carriers": self.carriers.tolist(),
            "theta": M.vectors[self.theta].tolist(),
            "Pi": M.vectors[self.Pi].tolist(),
        }


def _functor_k(T: OneCell) -> np.ndarray:
    """Structure 2-cochain of the graded functor, by the composite defining its psi."""
    S, S2 = T.source, T.target
    G, L = S.group, S.L
    D = S2.base
    M = S2.M
    H, u = T.H, T.carriers
    U, U2 = S.carriers, S2.carriers
    l = L.order
    N = G.order * l
    K = np.zeros((N, N), dtype=np.int64)
    for x in range(1, N):
        s, v = divmod(x, l)
        Fs2 = S2.functors[s]
        Fs = S.functors[s]
        us = int(u[s])
        Hv = int(H.pi0[v])
        for y in range(1, N):
            t, w = divmod(y, l)
            st = G.m(s, t)
            Hw, ut = int(H.pi0[w]), int(u[t])
            u2 = int(U2[s, t])
            inner = (Hw, ut)
            walk = Walk(D, ((((Hv, us), int(Fs2.pi0[prod(D, inner)]))), u2))
            sHw, sut = int(Fs2.pi0[Hw]), int(Fs2.pi0[ut])
            walk.step(psi_split(Fs2, inner), (((Hv, us), (sHw, sut)), u2))
            walk.to((((Hv, (us, sHw)), sut), u2))
            sw = int(Fs.pi0[w])
            Hsw = int(H.pi0[sw])
            walk.step(int(T.theta[s, w]), (((Hv, (Hsw, us)), sut), u2))
            walk.to(((Hv, Hsw), ((us, sut), u2)))
            vsw = int(L.mul[v, sw])
            Ust = int(U[s, t])
            scalar = M.add[H.k.values[v, sw], T.Pi[s, t]]
            walk.step(int(scalar), (int(H.pi0[vsw]), (int(H.pi0[Ust]), int(u[st]))))
            walk.to(((int(H.pi0[vsw]), int(H.pi0[Ust])), int(u[st])))
            walk.step(int(H.k.values[vsw, Ust]), (int(H.pi0[L.mul[vsw, Ust]]), int(u[st])))
            K[x, y] = walk.total
    return K


def _functor_objects(T: OneCell) -> np.ndarray:
    l, n = T.source.L.order, T.source.group.order
    s, v = np.divmod(np.arange(n * l), l)
    return s * l + T.target.L.mul[T.H.pi0[v], T.carriers[s]]


def graded_functor_unchecked(T: OneCell, source=None, target=None) -> MonoidalEquivalence:
    source = source or build_unchecked(T.source)
    target = target or build_unchecked(T.target)
    K = Cochain(source.category.objects, source.category.scalars, _functor_k(T), check=False)
    return MonoidalEquivalence._raw(source.category, target.category, _functor_objects(T), T.H.pi1, K)


def _object_checks(T: OneCell) -> Check:
    S, S2 = T.source, T.target
    G, L, L2 = S.group, S.L, S2.L
    H, u = T.H, T.carriers
    for s in range(G.order):
        for v in range(L.order):
            lhs = L2.mul[u[s], S2.functors[s].pi0[H.pi0[v]]]
            rhs = L2.mul[H.pi0[S.functors[s].pi0[v]], u[s]]
            if lhs != rhs:
                return fail((s, v), "theta-objects")
    for s in range(G.order):
        for t in range(G.order):
            lhs = L2.mul[L2.mul[u[s], S2.functors[s].pi0[u[t]]], S2.carriers[s, t]]
            rhs = L2.mul[H.pi0[S.carriers[s, t]], u[G.m(s, t)]]
            if lhs != rhs:
                return fail((s, t), "Pi-objects")
    return PASS


def one_cell_diagram(T: OneCell, s: int, t: int, r: int) -> tuple[int, int]:
    """The two composites of the large 1-cell diagram at (s, t, r), right path then left path.

    Both run from u_s s^(u_t t^(u_r) U'_{t,r}) U'_{s,tr} to H(U_{s,t} U_{st,r}) u_{str}.
    """
    S, S2 = T.source, T.target
    G = S.group
    D = S2.base
    M = S2.M
    H, u = T.H, T.carriers
    U, U2 = S.carriers, S2.carriers
    st, tr, str_ = G.m(s, t), G.m(t, r), G.m(s, t, r)
    Fs2 = S2.functors[s]

    # right: associator of the target product, Pi_{s,t}, Pi_{st,r}, psi^H
    total, end = _assoc_walk(S2, int(u[s]), s, int(u[t]), t, int(u[r]), r)
    right = Walk(D, end)
    right.total = total
    (((a, b), c), d), e = end
    HU_st = int(H.pi0[U[s, t]])
    right.step(int(T.Pi[s, t]), (((HU_st, int(u[st])), d), e))
    right.to((HU_st, ((int(u[st]), d), e)))
    HU_st_r = int(H.pi0[U[st, r]])
    right.step(int(T.Pi[st, r]), (HU_st, (HU_st_r, int(u[str_]))))
    right.to(((HU_st, HU_st_r), int(u[str_])))
    top = int(S.L.mul[U[s, t], U[st, r]])
    right.step(int(H.k.values[U[s, t], U[st, r]]), (int(H.pi0[top]), int(u[str_])))

    # left: s^(Pi_{t,r}), split psi^{s^}, theta^s, Pi_{s,tr}, psi^H, H(omega)
    inner_t = ((int(u[t]), int(S2.functors[t].pi0[u[r]])), int(U2[t, r]))
    start = ((int(u[s]), int(Fs2.pi0[prod(D, inner_t)])), int(U2[s, tr]))
    left = Walk(D, start)
    HU_tr = int(H.pi0[U[t, r]])
    inner = (HU_tr, int(u[tr]))
    left.step(int(Fs2.pi1[T.Pi[t, r]]), ((int(u[s]), int(Fs2.pi0[prod(D, inner)])), int(U2[s, tr])))
    sHU, sutr = int(Fs2.pi0[HU_tr]), int(Fs2.pi0[u[tr]])
    left.step(psi_split(Fs2, inner), ((int(u[s]), (sHU, sutr)), int(U2[s, tr])))
    left.to((((int(u[s]), sHU), sutr), int(U2[s, tr])))
    sU = int(S.functors[s].pi0[U[t, r]])
    HsU = int(H.pi0[sU])
    left.step(int(T.theta[s, U[t, r]]), (((HsU, int(u[s])), sutr), int(U2[s, tr])))
    left.to((HsU, ((int(u[s]), sutr), int(U2[s, tr]))))
    HU_s_tr = int(H.pi0[U[s, tr]])
    left.step(int(T.Pi[s, tr]), (HsU, (HU_s_tr, int(u[str_]))))
    left.to(((HsU, HU_s_tr), int(u[str_])))
    bottom = int(S.L.mul[sU, U[s, tr]])
    left.step(int(H.k.values[sU, U[s, tr]]), (int(H.pi0[bottom]), int(u[str_])))
    left.step(int(H.pi1[S.omega[s, t, r]]), (int(H.pi0[top]), int(u[str_])))
    return right.total, left.total


def check_one_cell_diagram(T: OneCell) -> Check:
    n = T.source.group.order
    for idx in np.ndindex(n, n, n):
        a, b = one_cell_diagram(T, *idx)
        if a != b:
            return fail(idx, "one-cell-diagram")
    return PASS


def verify_one_cell(T: OneCell, source=None, target=None) -> Check:
    """Normalization, object equations, then the monoidal axiom of the graded functor."""
    n, l = T.source.group.order, T.source.L.order
    if T.carriers[0] != 0 or T.theta[0].any() or T.theta[:, 0].any():
        return fail((0,), "normalization")
    if T.Pi[0].any() or T.Pi[:, 0].any():
        return fail((0,), "normalization")
    res = verify_equivalence(T.source.base, T.target.base, T.H)
    if not res:
        return fail(res.witness, "H")
    res = _object_checks(T)
    if not res:
        return res
    source = source or build_unchecked(T.source)
    target = target or build_unchecked(T.target)
    F = graded_functor_unchecked(T, source, target)
    _check_automorphisms(source.category, target.category, F)
    bad = np.argwhere(functor_defect(source.category, target.category, F) != 0)
    if bad.size:
        return fail(bad[0], "one-cell")
    return PASS


def one_cell_to_functor(T: OneCell, source=None, target=None) -> MonoidalEquivalence:
    """The graded monoidal functor build(S) -> build(S2) of a coherent 1-cell."""
    for S in (T.source, T.target):
        res = check_coherence(S)
        if not res:
            raise NotCoherent("system fails the coherence diagram", witness=list(res.witness))
    source = source or build_unchecked(T.source)
    target = target or build_unchecked(T.target)
    res = verify_one_cell(T, source, target)
    if not res:
        raise IncoherentOneCell(f"1-cell fails {res.tag}", tag=res.tag, witness=list(res.witness))
    return graded_functor_unchecked(T, source, target)


def _require_graded(F: MonoidalEquivalence, S: CrossedSystem, S2: CrossedSystem) -> None:
    l, l2 = S.L.order, S2.L.order
    if F.source.objects.order != S.group.order * l or F.target.objects.order != S2.group.order * l2:
        raise DomainMismatch("functor does not run between the product categories")
    degs = np.arange(len(F.pi0)) // l
    if not np.array_equal(F.pi0 // l2, degs):
        bad = int(np.flatnonzero(F.pi0 // l2 != degs)[0])
        raise NotGraded("functor does not preserve degrees", witness=[bad])


def _read_one_cell(F: MonoidalEquivalence, S: CrossedSystem, S2: CrossedSystem, K: np.ndarray) -> OneCell:
    l, n = S.L.order, S.group.order
    L, M = S.L, S.M
    pi0 = F.pi0[:l] % S2.L.order
    carriers = F.pi0[np.arange(n) * l] % S2.L.order
    kH = Cochain(L, M, K[:l, :l], check=False)
    H = MonoidalEquivalence._raw(S.base, S2.base, pi0, F.pi1, kH)
    theta = K[np.ix_(np.arange(n) * l, np.arange(l))]
    Pi = K[np.ix_(np.arange(n) * l, np.arange(n) * l)]
    return OneCell(S, S2, H, carriers, theta, Pi)


def normalize_graded_functor(F: MonoidalEquivalence, S: CrossedSystem, S2: CrossedSystem):
    """(F2, p): F2 equal to the functor of its own read-off 1-cell, p: F -> F2 monoidal."""
    _require_graded(F, S, S2)
    source, target = build_unchecked(S), build_unchecked(S2)
    Tg = F.source.objects
    mod = target.category.scalars
    Mod = mod if mod.act is None else mod.pullback(Tg, F.pi0)
    act = mod.action_table(target.category.objects)
    N = Tg.order

    def twist(x):
        p = np.zeros(N, dtype=np.int64)
        p[1:] = x
        # k_F2 = k_F - dp with dp(x,y) = F(x).p(y) - p(xy) + p(x)
        X, Y = np.indices((N, N))
        dp = Mod.add[Mod.sub[act[F.pi0[X], p[Y]], p[Tg.mul]], p[X]]
        return Mod.sub[F.k.values, dp], p

    def residual(x):
        K, _ = twist(x)
        T = _read_one_cell(F, S, S2, K)
        return Mod.sub[K, _functor_k(T)].reshape(-1)

    x = AffineSystem(Mod, N - 1, residual).solve()
    if x is None:
        raise NotGraded("functor is not isomorphic to a functor of a 1-cell")
    K, p = twist(x)
    F2 = MonoidalEquivalence._raw(F.source, F.target, F.pi0, F.pi1, Cochain(Tg, Mod, K, check=False))
    return F2, Cochain(Tg, Mod, p, check=False)


def functor_to_one_cell(F: MonoidalEquivalence, S: CrossedSystem, S2: CrossedSystem) -> OneCell:
    """Read (H, theta, Pi) off a graded functor between product categories.

    Functors not of the normal form produced by ``one_cell_to_functor`` are
    first replaced by an isomorphic one that is.
    """
    _require_graded(F, S, S2)
    T = _read_one_cell(F, S, S2, F.k.values)
    if np.array_equal(_functor_k(T), F.k.values):
        return T
    F2, _ = normalize_graded_functor(F, S, S2)
    return _read_one_cell(F2, S, S2, F2.k.values)


def random_one_cell(
    S: CrossedSystem,
    S2: CrossedSystem,
    H: MonoidalEquivalence,
    carriers,
    rng: random.Random,
    source=None,
    target=None,
) -> Optional[OneCell]:
    """A random valid 1-cell with prescribed object data; None if there is none.

    ``H`` supplies pi0 and pi1; its structure cochain is solved for along
    with theta and Pi.
    """
    n, l = S.group.order, S.L.order
    L, M = S.L, S.M
    source = source or build_unchecked(S)
    target = target or build_unchecked(S2)
    nk, nt, npi = (l - 1) ** 2, (n - 1) * (l - 1), (n - 1) ** 2

    def cell(x):
        kv = np.zeros((l, l), dtype=np.int64)
        kv[1:, 1:] = x[:nk].reshape(l - 1, l - 1)
        theta = np.zeros((n, l), dtype=np.int64)
        theta[1:, 1:] = x[nk : nk + nt].reshape(n - 1, l - 1)
        Pi = np.zeros((n, n), dtype=np.int64)
        Pi[1:, 1:] = x[nk + nt :].reshape(n - 1, n - 1)
        Hx = MonoidalEquivalence._raw(S.base, S2.base, H.pi0, H.pi1, Cochain(L, M, kv, check=False))
        return OneCell(S, S2, Hx, carriers, theta, Pi)

    probe = cell(np.zeros(nk + nt + npi, dtype=np.int64))
    if not _object_checks(probe):
        return None

    def residual(x):
        F = graded_functor_unchecked(cell(x), source, target)
        return functor_defect(source.category, target.category, F).reshape(-1)

    x = AffineSystem(M, nk + nt + npi, residual).random_solution(rng)
    return None if x is None else cell(x)


# ------------------------------------------------------------------ 2-cells
@dataclass(frozen=True, eq=False)
class TwoCell:
    """(m, m_s): m a natural iso H -> H~ of monoidal functors, m_s: theta_s -> theta~_s."""

    m: Cochain
    m_sigma: np.ndarray

    def __post_init__(self):
        arr = np.array(self.m_sigma, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "m_sigma", arr)


def verify_two_cell(c: TwoCell, T: OneCell, T2: OneCell) -> Check:
    """Normalization, monoidality of m, and the two squares at every (s, t) and (s, v)."""
    S, S2 = T.source, T.target
    G, L, M = S.group, S.L, S.M
    if not (np.array_equal(T.H.pi0, T2.H.pi0) and np.array_equal(T.H.pi1, T2.H.pi1)):
        return fail((), "objects")
    bad = np.flatnonzero(T.carriers != T2.carriers)
    if bad.size:
        return fail((bad[0],), "carriers")
    if c.m.values[0] != 0 or c.m_sigma[0] != 0:
        return fail((0,), "normalization")
    bad = np.argwhere(natural_iso_defect(T.H, T2.H, c.m) != 0)
    if bad.size:
        return fail(bad[0], "monoidal")
    ms, mv = c.m_sigma, c.m.values
    for s in range(G.order):
        pi1 = S2.functors[s].pi1
        for t in range(G.order):
            lhs = M.plus(int(T.Pi[s, t]), int(mv[S.carriers[s, t]]), int(ms[G.m(s, t)]))
            rhs = M.plus(int(ms[s]), int(pi1[ms[t]]), int(T2.Pi[s, t]))
            if lhs != rhs:
                return fail((s, t), "square-Pi")
    for s in range(G.order):
        pi1 = S2.functors[s].pi1
        for v in range(L.order):
            lhs = M.plus(int(T.theta[s, v]), int(mv[S.functors[s].pi0[v]]), int(ms[s]))
            rhs = M.plus(int(ms[s]), int(pi1[mv[v]]), int(T2.theta[s, v]))
            if lhs != rhs:
                return fail((s, v), "square-theta")
    return PASS


def two_cell_to_natural_iso(c: TwoCell, T: OneCell) -> Cochain:
    """p(v, s) = m(v) + m_s on the product objects."""
    S = T.source
    l, n = S.L.order, S.group.order
    s, v = np.divmod(np.arange(n * l), l)
    vals = S.M.add[c.m.values[v], c.m_sigma[s]]
    return Cochain(product_group(S), S.M, vals, check=False)


def transport_one_cell(T: OneCell, m: Cochain, m_sigma) -> OneCell:
    """The 1-cell T2 for which (m, m_sigma): T -> T2 is a 2-cell."""
    S, S2 = T.source, T.target
    G, L, M = S.group, S.L, S.M
    mv = m.values
    ms = np.asarray(m_sigma, dtype=np.int64)
    X, Y = np.indices((L.order, L.order))
    dm = M.add[M.sub[mv[Y], mv[L.mul]], mv[X]]
    H2 = MonoidalEquivalence._raw(S.base, S2.base, T.H.pi0, T.H.pi1, Cochain(L, M, M.sub[T.H.k.values, dm], check=False))
    n = G.order
    theta = np.zeros_like(T.theta)
    Pi = np.zeros_like(T.Pi)
    for s in range(n):
        pi1 = S2.functors[s].pi1
        sv = S.functors[s].pi0
        theta[s] = M.sub[M.add[T.theta[s], mv[sv]], pi1[mv]]
        for t in range(n):
            x = M.plus(int(T.Pi[s, t]), int(mv[S.carriers[s, t]]), int(ms[G.m(s, t)]))
            Pi[s, t] = M.sub[x, M.add[ms[s], pi1[ms[t]]]]
    return OneCell(S, S2, H2, T.carriers, theta, Pi)


def random_one_cell_pair(S: CrossedSystem, rng: random.Random) -> Optional[tuple[CrossedSystem, OneCell]]:
    """A target system S2 (omega shifted by a coboundary) and a random valid 1-cell S -> S2.

    Carriers are a random crossed homomorphism G -> L, so L must be abelian.
    """
    from .cohomology import random_cochain, random_cocycle
    from .outer_action import _l_module

    G, L, M = S.group, S.L, S.M
    lam = random_cochain(G, S.g_module(), 2, rng)
    S2 = S.with_omega(M.add[S.omega, differential(lam).values])
    Lmod, _, inv = _l_module(L, G, [F.pi0 for F in S.functors])
    u = inv[random_cocycle(G, Lmod, 1, rng).values]
    H = MonoidalEquivalence.identity(S.base)
    T = random_one_cell(S, S2, H, u, rng)
    return None if T is None else (S2, T)
