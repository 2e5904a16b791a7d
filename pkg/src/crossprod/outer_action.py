"""Crossed systems over a pointed category and their obstruction theory.

A crossed system over C = (L, M, omega_C) with group G stores

* ``functors[s]``: the monoidal autoequivalence s_* of C,
* ``carriers[s, t]``: the object U_{s,t},
* ``chi[s, t, v]``: the scalar of s_*t_*(v) U_{s,t} -> U_{s,t} (st)_*(v),
* ``omega[s, t, r]``: the scalar of s_*(U_{t,r}) U_{s,tr} -> U_{s,t} U_{st,r}.

Objects of L must act trivially on M.  G acts on M through the pi1 parts of
the functors.  All tables are normalized: anything indexed by the identity of
G is trivial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .check import PASS, Check, fail
from .cochains import Cochain, differential, is_cocycle
from .cohomology import cohomology_group, pullback, random_cocycle, solve_coboundary
from .errors import DomainMismatch, InvalidSystem, NotAHomomorphism
from .groups import FiniteGroup, automorphisms, check_homomorphism, homomorphisms
from .linalg import AffineSystem
from .modules import CoeffModule
from .pointed import (
    Modification,
    MonoidalEquivalence,
    PointedCategory,
    PseudonaturalIso,
    abelian_module,
    compose_equivalences,
    functor_defect,
    modification_defect,
    pseudonatural_defect,
    tensor_pseudonatural,
    verify_equivalence,
    verify_modification,
    verify_pseudonatural,
    vertical_compose,
)
from .trees import Walk, apply_functor


@dataclass(frozen=True, eq=False)
class CrossedSystem:
    group: FiniteGroup
    base: PointedCategory
    functors: tuple
    carriers: np.ndarray
    chi: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        G, L = self.group, self.base.objects
        n = G.order
        if len(self.functors) != n:
            raise DomainMismatch("one functor per group element is required")
        shapes = {"carriers": (n, n), "chi": (n, n, L.order), "omega": (n, n, n)}
        for name, shape in shapes.items():
            arr = np.array(getattr(self, name), dtype=np.int64)
            if arr.shape != shape:
                raise DomainMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "functors", tuple(self.functors))
        if not self.base.trivial_action:
            raise DomainMismatch("objects must act trivially on scalars")

    @property
    def M(self) -> CoeffModule:
        return self.base.scalars

    @property
    def L(self) -> FiniteGroup:
        return self.base.objects

    def functor(self, s: int) -> MonoidalEquivalence:
        return self.functors[s]

    def iso(self, s: int, t: int) -> PseudonaturalIso:
        """(U_{s,t}, chi_{s,t}): s_* t_* -> (st)_*."""
        src = compose_equivalences(self.functors[t], self.functors[s])
        return PseudonaturalIso(src, self.functors[self.group.m(s, t)], int(self.carriers[s, t]), self.chi[s, t])

    def g_module(self) -> CoeffModule:
        """M with G acting through the pi1 parts of the functors."""
        M = self.M
        if all(np.array_equal(F.pi1, np.arange(M.size)) for F in self.functors):
            return M.trivial()
        return _module_from_lookups(M, self.group, [F.pi1 for F in self.functors])

    def omega_cochain(self) -> Cochain:
        return Cochain(self.group, self.g_module(), self.omega, check=False)

    def with_omega(self, omega) -> "CrossedSystem":
        vals = omega.values if isinstance(omega, Cochain) else omega
        return CrossedSystem(self.group, self.base, self.functors, self.carriers, self.chi, vals)

    def is_central(self) -> bool:
        return all(F.is_identity for F in self.functors)

    def same_as(self, other: "CrossedSystem") -> bool:
        return (
            self.group == other.group
            and self.base.same_as(other.base)
            and all(a.same_as(b) for a, b in zip(self.functors, other.functors))
            and np.array_equal(self.carriers, other.carriers)
            and np.array_equal(self.chi, other.chi)
            and np.array_equal(self.omega, other.omega)
        )

    @classmethod
    def trivial(cls, group: FiniteGroup, base: PointedCategory) -> "CrossedSystem":
        n, l = group.order, base.objects.order
        ident = MonoidalEquivalence.identity(base)
        return cls(
            group,
            base,
            (ident,) * n,
            np.zeros((n, n), dtype=np.int64),
            np.zeros((n, n, l), dtype=np.int64),
            np.zeros((n, n, n), dtype=np.int64),
        )

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "base": self.base.to_json(),
            "functors": [F.to_json() for F in self.functors],
            "carriers": self.carriers.tolist(),
            "chi": self.M.vectors[self.chi].tolist(),
            "omega": self.M.vectors[self.omega].tolist(),
        }


def _module_from_lookups(M: CoeffModule, group: FiniteGroup, lookups) -> CoeffModule:
    from .pointed import _lookup_to_matrix

    return CoeffModule(M.factors, group, [_lookup_to_matrix(M, f) for f in lookups])


# ------------------------------------------------------------------ validation
def modification_pair(S: CrossedSystem, s: int, t: int, r: int, isos=None):
    """The two composites s_*t_*r_* -> (str)_* related by omega_{s,t,r}.

    Returns (chi_{s,tr} after (id x chi_{t,r}), chi_{st,r} after (chi_{s,t} x id)).
    ``isos`` optionally caches S.iso as a nested list.
    """
    G = S.group
    iso = S.iso if isos is None else (lambda a, b: isos[a][b])
    Fs, Fr = S.functors[s], S.functors[r]
    left = vertical_compose(
        tensor_pseudonatural(PseudonaturalIso.identity(Fs), iso(t, r)),
        iso(s, G.m(t, r)),
    )
    right = vertical_compose(
        tensor_pseudonatural(iso(s, t), PseudonaturalIso.identity(Fr)),
        iso(G.m(s, t), r),
    )
    return left, right


def validate_crossed_system(S: CrossedSystem) -> Check:
    """Axioms in order: normalization, functors, objects, factor set, pseudonaturality, modifications."""
    G, C = S.group, S.base
    L = C.objects
    n = G.order
    if not S.functors[0].is_identity:
        return fail((0,), "normalization-functor")
    for s in range(n):
        for t in range(n):
            if (s == 0 or t == 0) and (S.carriers[s, t] != 0 or S.chi[s, t].any()):
                return fail((s, t), "normalization-chi")
    bad = np.argwhere(S.omega != 0)
    for idx in bad:
        if 0 in idx:
            return fail(idx, "normalization-omega")
    for s in range(n):
        res = verify_equivalence(C, C, S.functors[s])
        if not res:
            return fail((s,) + res.witness, "functor")
    pi0 = [F.pi0 for F in S.functors]
    for s in range(n):
        for t in range(n):
            u = int(S.carriers[s, t])
            st = G.m(s, t)
            for v in range(L.order):
                if L.mul[pi0[s][pi0[t][v]], u] != L.mul[u, pi0[st][v]]:
                    return fail((s, t, v), "pseudonatural-objects")
    for s in range(n):
        for t in range(n):
            for r in range(n):
                lhs = L.mul[pi0[s][S.carriers[t, r]], S.carriers[s, G.m(t, r)]]
                rhs = L.mul[S.carriers[s, t], S.carriers[G.m(s, t), r]]
                if lhs != rhs:
                    return fail((s, t, r), "factor-set")
    for s in range(n):
        for t in range(n):
            res = verify_pseudonatural(S.iso(s, t))
            if not res:
                return fail((s, t) + res.witness, res.tag)
    for s in range(n):
        for t in range(n):
            for r in range(n):
                left, right = modification_pair(S, s, t, r)
                res = verify_modification(Modification(left, right, int(S.omega[s, t, r])))
                if not res:
                    return fail((s, t, r) + res.witness, "modification")
    return PASS


def _require_valid(S: CrossedSystem) -> None:
    res = validate_crossed_system(S)
    if not res:
        raise InvalidSystem(f"crossed system fails {res.tag}", tag=res.tag, witness=list(res.witness))


# ------------------------------------------------------------------ diagram (1)
def coherence_paths(S: CrossedSystem, s: int, t: int, r: int, m: int) -> tuple[int, int]:
    """The two composites of the coherence diagram at (s, t, r, m), top path and left path.

    Both start at s_*(t_*(U_{r,m}) U_{t,rm}) U_{s,trm} and end at
    (U_{s,t} U_{st,r}) U_{str,m}.
    """
    G, C = S.group, S.base
    M = C.scalars
    U = S.carriers
    Fs, Ft = S.functors[s], S.functors[t]
    tr, rm, st = G.m(t, r), G.m(r, m), G.m(s, t)
    trm, str_ = G.m(t, r, m), G.m(s, t, r)
    u_rm, u_t_rm, u_s_trm = int(U[r, m]), int(U[t, rm]), int(U[s, trm])
    u_tr, u_tr_m = int(U[t, r]), int(U[tr, m])
    u_s_tr, u_str_m = int(U[s, tr]), int(U[str_, m])
    u_st, u_st_r, u_st_rm = int(U[s, t]), int(U[st, r]), int(U[st, rm])
    w = S.omega
    end = ((u_st, u_st_r), u_str_m)
    Fs_tU = int(Fs.pi0[Ft.pi0[u_rm]])

    # top: s_*(omega_{t,r,m}), split psi, omega_{s,tr,m}, omega_{s,t,r}
    top = Walk(C, (Fs.pi0[C.objects.mul[Ft.pi0[u_rm], u_t_rm]], u_s_trm))
    top.step(int(Fs.pi1[w[t, r, m]]), top.tree)
    top.step(int(M.neg[Fs.k.values[u_tr, u_tr_m]]), ((int(Fs.pi0[u_tr]), int(Fs.pi0[u_tr_m])), u_s_trm))
    top.to((int(Fs.pi0[u_tr]), (int(Fs.pi0[u_tr_m]), u_s_trm)))
    top.step(int(w[s, tr, m]), (int(Fs.pi0[u_tr]), (u_s_tr, u_str_m)))
    top.to(((int(Fs.pi0[u_tr]), u_s_tr), u_str_m))
    top.step(int(w[s, t, r]), end)

    # left: split psi, omega_{s,t,rm}, chi_{s,t}(U_{r,m}), omega_{st,r,m}
    left = Walk(C, (Fs.pi0[C.objects.mul[Ft.pi0[u_rm], u_t_rm]], u_s_trm))
    left.step(int(M.neg[Fs.k.values[Ft.pi0[u_rm], u_t_rm]]), ((Fs_tU, int(Fs.pi0[u_t_rm])), u_s_trm))
    left.to((Fs_tU, (int(Fs.pi0[u_t_rm]), u_s_trm)))
    left.step(int(w[s, t, rm]), (Fs_tU, (u_st, u_st_rm)))
    left.to(((Fs_tU, u_st), u_st_rm))
    st_U = int(S.functors[st].pi0[u_rm])
    left.step(int(S.chi[s, t, u_rm]), ((u_st, st_U), u_st_rm))
    left.to((u_st, (st_U, u_st_rm)))
    left.step(int(w[st, r, m]), (u_st, (u_st_r, u_str_m)))
    left.to(end)
    return top.total, left.total


def check_coherence(S: CrossedSystem) -> Check:
    """Diagram (1) evaluated path by path at every quadruple."""
    _require_valid(S)
    n = S.group.order
    for idx in np.ndindex(n, n, n, n):
        a, b = coherence_paths(S, *idx)
        if a != b:
            return fail(idx, "coherence")
    return PASS


@dataclass(frozen=True)
class ObstructionClass:
    cocycle: Cochain
    trivializer: Optional[Cochain]

    @property
    def is_zero(self) -> bool:
        return self.cocycle.is_zero()

    @property
    def trivial_class(self) -> bool:
        return self.trivializer is not None

    def to_json(self) -> dict:
        return {
            "pi": self.cocycle.to_json(),
            "is_cocycle": bool(is_cocycle(self.cocycle)),
            "trivializer": None if self.trivializer is None else self.trivializer.to_json(),
        }


def _correction(S: CrossedSystem, s, t, r, m) -> int:
    """Rebracketing part of diagram (1): everything except omega, psi and chi terms."""
    C = S.base
    M = C.scalars
    G = S.group
    U = S.carriers
    Fs, Ft = S.functors[s], S.functors[t]
    tr, rm, st = G.m(t, r), G.m(r, m), G.m(s, t)
    sU = lambda x: int(Fs.pi0[x])
    u_s_trm = int(U[s, G.m(t, r, m)])
    str_m = int(U[G.m(s, t, r), m])
    a = Walk(C, ((sU(U[t, r]), sU(U[tr, m])), u_s_trm)).to((sU(U[t, r]), (sU(U[tr, m]), u_s_trm)))
    a.total = M.add[a.total, Walk(C, (sU(U[t, r]), (int(U[s, tr]), str_m))).to(((sU(U[t, r]), int(U[s, tr])), str_m)).total]
    x = sU(Ft.pi0[U[r, m]])
    b = Walk(C, ((x, sU(U[t, rm])), u_s_trm)).to((x, (sU(U[t, rm]), u_s_trm))).total
    b = M.add[b, Walk(C, (x, (int(U[s, t]), int(U[st, rm])))).to(((x, int(U[s, t])), int(U[st, rm]))).total]
    y = int(S.functors[st].pi0[U[r, m]])
    b = M.add[b, Walk(C, ((int(U[s, t]), y), int(U[st, rm]))).to((int(U[s, t]), (y, int(U[st, rm])))).total]
    end = ((int(U[s, t]), int(U[st, r])), str_m)
    b = M.add[b, Walk(C, (int(U[s, t]), (int(U[st, r]), str_m))).to(end).total]
    return int(M.sub[a.total, b])


def obstruction_cochain(S: CrossedSystem) -> Cochain:
    """pi = delta(omega) + psi terms - chi term + rebracketing corrections."""
    G = S.group
    module = S.g_module()
    M = S.M
    U = S.carriers
    n = G.order
    dw = differential(Cochain(G, module, S.omega, check=False)).values
    vals = np.zeros((n,) * 4, dtype=np.int64)
    for s, t, r, m in np.ndindex(n, n, n, n):
        if 0 in (s, t, r, m):
            continue
        Fs = S.functors[s]
        tr, rm = G.m(t, r), G.m(r, m)
        tU = int(S.functors[t].pi0[U[r, m]])
        x = int(dw[s, t, r, m])
        x = M.add[x, Fs.k.values[tU, U[t, rm]]]
        x = M.sub[x, Fs.k.values[U[t, r], U[tr, m]]]
        x = M.sub[x, S.chi[s, t, U[r, m]]]
        x = M.add[x, _correction(S, s, t, r, m)]
        vals[s, t, r, m] = x
    return Cochain(G, module, vals)


def coherence_obstruction(S: CrossedSystem) -> ObstructionClass:
    _require_valid(S)
    pi = obstruction_cochain(S)
    res = is_cocycle(pi)
    if not res:
        raise InvalidSystem("obstruction is not a 4-cocycle", witness=list(res.witness))
    return ObstructionClass(pi, solve_coboundary(pi))


def coherify(S: CrossedSystem) -> Optional[CrossedSystem]:
    """Replace omega by omega - lambda with d(lambda) = pi, or None if pi is not a coboundary."""
    ob = coherence_obstruction(S)
    if ob.trivializer is None:
        return None
    M = S.M
    return S.with_omega(M.sub[S.omega, ob.trivializer.values])


# ------------------------------------------------------------------ realizability
@dataclass(frozen=True)
class Realizability:
    cocycle: Cochain
    trivializer: Optional[Cochain]
    torsor: list

    @property
    def realizable(self) -> bool:
        return self.trivializer is not None

    @property
    def torsor_size(self) -> int:
        return int(np.prod(self.torsor)) if self.torsor else 1

    def to_json(self) -> dict:
        return {
            "realizable": self.realizable,
            "obstruction": self.cocycle.to_json(),
            "trivializer": None if self.trivializer is None else self.trivializer.to_json(),
            "torsor_factors": list(self.torsor),
            "torsor_size": self.torsor_size,
        }


def realizability_obstruction(group: FiniteGroup, classes: FiniteGroup, f, phi: Cochain) -> Realizability:
    """Pull phi back along f: G -> classes and decide whether the class vanishes.

    The torsor of realizations is H^2(G, M') with M' the coefficient module
    of phi pulled back along f.
    """
    f = np.asarray(f, dtype=np.int64)
    try:
        check_homomorphism(group, classes, f)
    except NotAHomomorphism:
        raise
    if phi.group != classes:
        raise DomainMismatch("phi is not a cochain on the class group")
    res = is_cocycle(phi)
    if not res:
        raise InvalidSystem("phi is not a 3-cocycle", witness=list(res.witness))
    pulled = pullback(phi, group, f)
    return Realizability(pulled, solve_coboundary(pulled), cohomology_group(group, pulled.module, 2))


# ------------------------------------------------------------------ random systems
def _automorphism_group(M: CoeffModule):
    """Aut(M) as a FiniteGroup together with the lookup table of each element."""
    import itertools

    lookups = []
    ident = np.arange(M.size)
    mats = itertools.product(range(M.exponent), repeat=M.rank * M.rank)
    seen = set()
    for entries in mats:
        mat = np.array(entries, dtype=np.int64).reshape(M.rank, M.rank)
        if not M.is_automorphism(mat):
            continue
        f = M.matrix_lookup(mat)
        key = f.tobytes()
        if key not in seen:
            seen.add(key)
            lookups.append(f)
    lookups.sort(key=lambda f: (not np.array_equal(f, ident), f.tolist()))
    index = {f.tobytes(): i for i, f in enumerate(lookups)}
    table = [[index[a[b].tobytes()] for b in lookups] for a in lookups]
    return FiniteGroup(table), lookups


def _l_module(L: FiniteGroup, group: FiniteGroup, pi0_images):
    """L (abelian) as a G-module through the automorphisms pi0_images[g]."""
    M, iso = abelian_module(L)
    inv = np.argsort(iso)
    lookups = [iso[np.asarray(a)[inv]] for a in pi0_images]
    return _module_from_lookups(M, group, lookups), iso, inv


def _system_from_vector(G, C, pi0s, pi1s, carriers, x, omega):
    n, l = G.order, C.objects.order
    M = C.scalars
    nk = (l - 1) ** 2
    functors = [MonoidalEquivalence.identity(C)]
    for s in range(1, n):
        kv = np.zeros((l, l), dtype=np.int64)
        kv[1:, 1:] = x[(s - 1) * nk : s * nk].reshape(l - 1, l - 1)
        functors.append(MonoidalEquivalence(C, C, pi0s[s], pi1s[s], Cochain(C.objects, M, kv, check=False)))
    chi = np.zeros((n, n, l), dtype=np.int64)
    off = (n - 1) * nk
    for s in range(1, n):
        for t in range(1, n):
            chi[s, t, 1:] = x[off : off + l - 1]
            off += l - 1
    return CrossedSystem(G, C, tuple(functors), carriers, chi, omega)


def system_defects(S: CrossedSystem) -> np.ndarray:
    """Concatenated functor, pseudonaturality and modification defect tables."""
    n = S.group.order
    parts = [functor_defect(S.base, S.base, F).reshape(-1) for F in S.functors]
    isos = [[S.iso(s, t) for t in range(n)] for s in range(n)]
    for s in range(n):
        for t in range(n):
            parts.append(pseudonatural_defect(isos[s][t]).reshape(-1))
    for s in range(n):
        for t in range(n):
            for r in range(n):
                left, right = modification_pair(S, s, t, r, isos)
                parts.append(modification_defect(Modification(left, right, 0)).reshape(-1))
    return np.concatenate(parts)


def complete_system(G, C, pi0s, pi1s, carriers, omega, rng: Optional[random.Random] = None):
    """Solve for all k_s and chi_{s,t} given objects, carriers and omega; None if impossible."""
    n, l = G.order, C.objects.order
    size = (n - 1) * (l - 1) ** 2 + (n - 1) ** 2 * (l - 1)

    def residual(x):
        return system_defects(_system_from_vector(G, C, pi0s, pi1s, carriers, x, omega))

    system = AffineSystem(C.scalars, size, residual)
    x = system.solve()
    if x is None:
        return None
    if rng is not None:
        x = system.random_solution(rng)
    return _system_from_vector(G, C, pi0s, pi1s, carriers, x, omega)


def random_crossed_system(
    group: FiniteGroup,
    base: PointedCategory,
    rng: random.Random,
    *,
    coherent: bool = False,
    tries: int = 50,
) -> Optional[CrossedSystem]:
    """A random valid system over an abelian base (optionally coherified)."""
    G, C = group, base
    L, M = C.objects, C.scalars
    n = G.order
    if not L.is_abelian:
        raise DomainMismatch("random systems need an abelian object group")
    autL = automorphisms(L)
    autM_group, autM = _automorphism_group(M)
    autL_group_table = {a.tobytes(): i for i, a in enumerate(autL)}
    autL_group = FiniteGroup([[autL_group_table[a[b].tobytes()] for b in autL] for a in autL])
    homs0 = homomorphisms(G, autL_group)
    homs1 = homomorphisms(G, autM_group)
    for _ in range(tries):
        h0 = homs0[rng.randrange(len(homs0))]
        h1 = homs1[rng.randrange(len(homs1))]
        pi0s = [autL[h0[s]] for s in range(n)]
        pi1s = [autM[h1[s]] for s in range(n)]
        Lmod, iso, inv = _l_module(L, G, pi0s)
        u = random_cocycle(G, Lmod, 2, rng)
        carriers = inv[u.values]
        omega = np.zeros((n, n, n), dtype=np.int64)
        omega[1:, 1:, 1:] = [[[rng.randrange(M.size) for _ in range(n - 1)] for _ in range(n - 1)] for _ in range(n - 1)]
        S = complete_system(G, C, pi0s, pi1s, carriers, omega, rng)
        if S is None:
            continue
        if coherent:
            S = coherify(S)
            if S is None:
                continue
        return S
    return None


def random_central_system(
    group: FiniteGroup,
    base: PointedCategory,
    rng: random.Random,
    *,
    coherent: bool = True,
    symmetric: bool = False,
    tries: int = 50,
) -> Optional[CrossedSystem]:
    """A random valid system with every functor the identity.

    With ``symmetric`` the carriers satisfy U_{s,t} = U_{t,s}.
    """
    G, C = group, base
    L, M = C.objects, C.scalars
    n, l = G.order, L.order
    if not L.is_abelian:
        raise DomainMismatch("random systems need an abelian object group")
    ident = MonoidalEquivalence.identity(C)
    Lmod, iso, inv = _l_module(L, G, [np.arange(l)] * n)
    nchi = (n - 1) ** 2 * (l - 1)
    for _ in range(tries):
        u = random_cocycle(G, Lmod, 2, rng)
        carriers = inv[u.values]
        if symmetric and not np.array_equal(carriers, carriers.T):
            continue
        omega = np.zeros((n, n, n), dtype=np.int64)
        omega[1:, 1:, 1:] = [[[rng.randrange(M.size) for _ in range(n - 1)] for _ in range(n - 1)] for _ in range(n - 1)]

        def build(x, carriers=carriers, omega=omega):
            chi = np.zeros((n, n, l), dtype=np.int64)
            chi[1:, 1:, 1:] = np.asarray(x, dtype=np.int64).reshape(n - 1, n - 1, l - 1)
            return CrossedSystem(G, C, (ident,) * n, carriers, chi, omega)

        system = AffineSystem(M, nchi, lambda x: system_defects(build(x)))
        x = system.random_solution(rng)
        if x is None:
            continue
        S = build(x)
        if coherent:
            S = coherify(S)
            if S is None:
                continue
        return S
    return None
