"""Cohomology of finite groups with coefficients in finite modules.

``cohomology_group`` works through the SNF solver: for every d it counts the
d-torsion of H^n = Z^n / B^n as

    |H^n[d]| = |ker (z, b) -> (dz, d*z - db)| / |C^(n-1)|,

and reads the invariant factors off those counts.  ``enumerate_cocycles`` and
``oracle_cohomology`` are brute force and share nothing with the solver.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import Optional

import numpy as np

from .cochains import Cochain, differential, is_cocycle, normalized_positions
from .errors import NotACocycle, SizeLimitExceeded
from .groups import FiniteGroup
from .linalg import AffineSystem
from .modules import CoeffModule

DEFAULT_TABLE_LIMIT = 200_000
DEFAULT_ENUM_LIMIT = 100_000


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _embed(group: FiniteGroup, degree: int, x: np.ndarray) -> np.ndarray:
    vals = np.zeros((group.order,) * degree, dtype=np.int64)
    if degree == 0:
        vals[()] = x[0]
        return vals
    sub = vals[(slice(1, None),) * degree]
    sub[...] = np.asarray(x, dtype=np.int64).reshape((group.order - 1,) * degree)
    return vals


def _restrict(values: np.ndarray) -> np.ndarray:
    if values.ndim == 0:
        return values.reshape(1)
    return values[(slice(1, None),) * values.ndim].reshape(-1)


def n_free(group: FiniteGroup, degree: int) -> int:
    return (group.order - 1) ** degree


def _guard(group: FiniteGroup, degree: int, limit: int) -> None:
    if group.order ** (degree + 1) > limit:
        raise SizeLimitExceeded(f"|G|^{degree + 1} = {group.order ** (degree + 1)} exceeds {limit}")


def coboundary_system(group: FiniteGroup, module: CoeffModule, degree: int, target: Optional[Cochain] = None):
    """Affine system b -> d(b) - target on normalized (degree-1)-cochains."""
    tgt = None if target is None else _restrict(target.values)

    def residual(x):
        b = Cochain(group, module, _embed(group, degree - 1, x), check=False)
        out = _restrict(differential(b).values)
        return out if tgt is None else module.sub[out, tgt]

    return AffineSystem(module, n_free(group, degree - 1), residual)


def solve_coboundary(c: Cochain, *, limit: int = DEFAULT_TABLE_LIMIT) -> Optional[Cochain]:
    """A normalized b with db = c, or None when c is not a coboundary."""
    if c.degree < 1:
        raise ValueError("coboundaries start in degree 1")
    _guard(c.group, c.degree, limit)
    if not is_cocycle(c):
        raise NotACocycle("input is not a cocycle")
    if c.is_zero():
        return Cochain.zero(c.group, c.module, c.degree - 1)
    system = coboundary_system(c.group, c.module, c.degree, c)
    x = system.solve()
    if x is None:
        return None
    b = Cochain(c.group, c.module, _embed(c.group, c.degree - 1, x))
    assert differential(b) == c
    return b


def cocycle_system(group: FiniteGroup, module: CoeffModule, degree: int) -> AffineSystem:
    def residual(x):
        c = Cochain(group, module, _embed(group, degree, x), check=False)
        return _restrict(differential(c).values)

    return AffineSystem(module, n_free(group, degree), residual)


def _torsion_count(group, module, degree, d) -> int:
    """|H^n[d]| via the kernel of (z, b) -> (dz, d*z - db)."""
    nz = n_free(group, degree)
    nb = n_free(group, degree - 1)
    times_d = np.array([module.times(d, x) for x in range(module.size)], dtype=np.int64)

    def residual(x):
        z = Cochain(group, module, _embed(group, degree, x[:nz]), check=False)
        b = Cochain(group, module, _embed(group, degree - 1, x[nz:]), check=False)
        first = _restrict(differential(z).values)
        second = module.sub[times_d[_restrict(z.values)], _restrict(differential(b).values)]
        return np.concatenate([first, second])

    ker = AffineSystem(module, nz + nb, residual).kernel_size()
    return ker // module.size ** nb


def factors_from_torsion(count) -> list[int]:
    """Invariant factors of a finite abelian group from d -> |H[d]| (d prime powers)."""
    total = count(None)
    parts: dict[int, list[int]] = {}
    for p in _prime_factors(total) if total > 1 else []:
        prev, k, ranks = 1, 1, []
        while True:
            cur = count(p**k)
            if cur == prev:
                break
            ranks.append(round(math.log(cur // prev, p)))
            prev, k = cur, k + 1
        # ranks[k-1] = number of cyclic p-parts of order >= p^k
        exps = []
        for j in range(len(ranks)):
            nxt = ranks[j + 1] if j + 1 < len(ranks) else 0
            exps.extend([j + 1] * (ranks[j] - nxt))
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, exps in parts.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return sorted(factors)


def cohomology_group(group: FiniteGroup, module: CoeffModule, degree: int, *, limit: int = DEFAULT_TABLE_LIMIT) -> list[int]:
    """Invariant factors of H^degree(group, module), ascending; [] for the trivial group."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    _guard(group, degree, limit)
    module.action_table(group)

    def count(d):
        return _torsion_count(group, module, degree, module.exponent if d is None else d)

    return factors_from_torsion(count)


def cohomology_order(group, module, degree, **kw) -> int:
    return math.prod(cohomology_group(group, module, degree, **kw))


# ---------------------------------------------------------------- oracles
DEFAULT_NODE_LIMIT = 3_000_000


def enumerate_cochains(group: FiniteGroup, module: CoeffModule, degree: int, *, limit: int = DEFAULT_ENUM_LIMIT):
    count = n_free(group, degree)
    total = module.size**count
    if total > limit:
        raise SizeLimitExceeded(f"{total} candidate cochains exceed the enumeration bound {limit}")
    for vals in itertools.product(range(module.size), repeat=count):
        yield Cochain(group, module, _embed(group, degree, np.array(vals, dtype=np.int64)), check=False)


def _cocycle_equations(group: FiniteGroup, degree: int):
    """Cocycle equations as lists of (position, sign, acting element), keyed by last position."""
    positions = normalized_positions(group.order, degree)
    index = {p: i for i, p in enumerate(positions)}
    by_last: list[list] = [[] for _ in positions]
    for args in itertools.product(range(1, group.order), repeat=degree + 1):
        terms = [(args[1:], 1, args[0])]
        for i in range(1, degree + 1):
            merged = args[: i - 1] + (int(group.mul[args[i - 1], args[i]]),) + args[i + 1 :]
            terms.append((merged, (-1) ** i, 0))
        terms.append((args[:degree], (-1) ** (degree + 1), 0))
        live = [(index[t], s, a) for t, s, a in terms if 0 not in t]
        if live:
            by_last[max(t for t, _, _ in live)].append(live)
    return by_last


def enumerate_cocycles(
    group: FiniteGroup,
    module: CoeffModule,
    degree: int,
    *,
    limit: int = DEFAULT_NODE_LIMIT,
) -> list[Cochain]:
    """All normalized cocycles, in lexicographic order of their value tables.

    Backtracking search: values are assigned position by position and each
    cocycle equation is tested as soon as its last entry is assigned.  When
    an equation can be solved for its last entry, that entry is not branched on.
    """
    act = module.action_table(group).tolist()
    add = module.add.tolist()
    neg = module.neg.tolist()
    inv = group.inv.tolist()
    by_last = _cocycle_equations(group, degree)
    n = len(by_last)
    # an equation whose last position occurs once pins that value down
    pinning = []
    for k, eqs in enumerate(by_last):
        pin = None
        for eq in eqs:
            hits = [(s, a) for t, s, a in eq if t == k]
            if len(hits) == 1:
                pin = (eq, hits[0])
                break
        pinning.append(pin)
    vals = [0] * n
    found: list[list[int]] = []
    nodes = 0

    def ok(k):
        for eq in by_last[k]:
            acc = 0
            for t, s, a in eq:
                v = act[a][vals[t]]
                acc = add[acc][v if s > 0 else neg[v]]
            if acc:
                return False
        return True

    def forced(k):
        eq, (s0, a0) = pinning[k]
        rest = 0
        for t, s, a in eq:
            if t == k:
                continue
            v = act[a][vals[t]]
            rest = add[rest][v if s > 0 else neg[v]]
        # s0 * a0.x + rest = 0
        target = neg[rest] if s0 > 0 else rest
        return act[inv[a0]][target]

    def search(k):
        nonlocal nodes
        if k == n:
            found.append(list(vals))
            return
        choices = [forced(k)] if pinning[k] else range(module.size)
        for v in choices:
            nodes += 1
            if nodes > limit:
                raise SizeLimitExceeded(f"cocycle search exceeded {limit} nodes")
            vals[k] = v
            if ok(k):
                search(k + 1)
        vals[k] = 0

    search(0)
    return [Cochain(group, module, _embed(group, degree, np.array(f, dtype=np.int64)), check=False) for f in found]


def enumerate_coboundaries(group, module, degree, *, limit: int = DEFAULT_NODE_LIMIT) -> set[bytes]:
    """The coboundary group B^n, generated by closure from images of elementary cochains."""
    gens = []
    for i in range(n_free(group, degree - 1)):
        for l in range(module.rank):
            x = np.zeros(n_free(group, degree - 1), dtype=np.int64)
            x[i] = module.idx([1 if c == l else 0 for c in range(module.rank)])
            b = Cochain(group, module, _embed(group, degree - 1, x), check=False)
            gens.append(differential(b).values)
    zero = np.zeros((group.order,) * degree, dtype=np.int64)
    seen = {zero.tobytes()}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = module.add[x, g]
                key = y.tobytes()
                if key not in seen:
                    seen.add(key)
                    if len(seen) > limit:
                        raise SizeLimitExceeded(f"coboundary group exceeds {limit} elements")
                    nxt.append(y)
        frontier = nxt
    return seen


def oracle_cohomology(group: FiniteGroup, module: CoeffModule, degree: int, *, limit: int = DEFAULT_NODE_LIMIT) -> list[int]:
    """Invariant factors of H^n from explicit cocycle and coboundary sets."""
    cocycles = enumerate_cocycles(group, module, degree, limit=limit)
    bounds = enumerate_coboundaries(group, module, degree, limit=limit)

    def count(d):
        if d is None:
            return len(cocycles) // len(bounds)
        times_d = np.array([module.times(d, x) for x in range(module.size)])
        hits = sum(1 for z in cocycles if times_d[z.values].tobytes() in bounds)
        return hits // len(bounds)

    return factors_from_torsion(count)


def oracle_has_preimage(c: Cochain, *, limit: int = DEFAULT_NODE_LIMIT) -> bool:
    return c.values.tobytes() in enumerate_coboundaries(c.group, c.module, c.degree, limit=limit)


def random_cochain(group: FiniteGroup, module: CoeffModule, degree: int, rng: random.Random) -> Cochain:
    x = np.array([rng.randrange(module.size) for _ in range(n_free(group, degree))], dtype=np.int64)
    return Cochain(group, module, _embed(group, degree, x), check=False)


def random_cocycle(group: FiniteGroup, module: CoeffModule, degree: int, rng: random.Random) -> Cochain:
    system = cocycle_system(group, module, degree)
    x = np.zeros(system.n, dtype=np.int64)
    for g in system.kernel_generators():
        for _ in range(rng.randrange(module.exponent)):
            x = module.add[x, g]
    return Cochain(group, module, _embed(group, degree, x), check=False)


def pullback(c: Cochain, source: FiniteGroup, f) -> Cochain:
    """The cochain (g1..gn) -> c(f(g1), ..., f(gn)) on ``source``."""
    f = np.asarray(f, dtype=np.int64)
    module = c.module if c.module.act is None else c.module.pullback(source, f)
    idx = np.indices((source.order,) * c.degree, dtype=np.int64)
    vals = c.values[tuple(f[i] for i in idx)] if c.degree else c.values
    return Cochain(source, module, vals, check=False)
