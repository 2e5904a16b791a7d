"""Linear algebra over finite abelian groups via Smith normal form over Z/E.

A system whose unknowns and equations live in M = Z/m1 x ... x Z/mr is lifted
to Z/E, E = lcm(m_i): an unknown component in Z/m_l becomes a free variable in
Z/E (reduced mod m_l afterwards) and an equation mod m_k is multiplied by
E/m_k.  Diagonalization uses unimodular row/column operations mod E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modules import CoeffModule


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _unit_normalizer(a: int, modulus: int) -> int:
    """A unit u mod ``modulus`` with u * a = gcd(a, modulus) (mod modulus)."""
    g = math.gcd(a, modulus)
    rest = modulus // g
    u = pow((a // g) % rest, -1, rest) if rest > 1 else 1
    while math.gcd(u, modulus) != 1:
        u += rest
    return u % modulus


@dataclass
class SNFResult:
    modulus: int
    diag: list[int]
    rhs: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.diag)

    def particular(self) -> np.ndarray | None:
        """One solution y of A y = b (mod E), or None."""
        E = self.modulus
        n = self.V.shape[0]
        z = np.zeros(n, dtype=np.int64)
        for i, d in enumerate(self.diag):
            if self.rhs[i] % d:
                return None
            z[i] = self.rhs[i] // d
        if np.any(self.rhs[self.rank :] % E):
            return None
        return (self.V @ z) % E

    def kernel_generators(self) -> list[np.ndarray]:
        E = self.modulus
        gens = []
        for i in range(self.V.shape[0]):
            if i < self.rank:
                step = E // self.diag[i]
                if step % E:
                    gens.append((self.V[:, i] * step) % E)
            else:
                gens.append(self.V[:, i] % E)
        return gens

    def kernel_size(self) -> int:
        n = self.V.shape[0]
        return math.prod(self.diag) * self.modulus ** (n - self.rank)


def snf_mod(A: np.ndarray, b: np.ndarray, E: int) -> SNFResult:
    """Diagonalize A (K x n) over Z/E, carrying the right-hand side b along."""
    A = np.array(A, dtype=np.int64) % E
    K, n = A.shape
    rhs = np.array(b, dtype=np.int64).reshape(K) % E
    V = np.eye(n, dtype=np.int64)
    diag: list[int] = []
    r = 0
    while r < min(K, n):
        sub = A[r:, r:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        gs = np.gcd(sub[nz[:, 0], nz[:, 1]], E)
        i, j = (nz[int(np.argmin(gs))] + r).tolist()
        if i != r:
            A[[r, i]] = A[[i, r]]
            rhs[[r, i]] = rhs[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            V[:, [r, j]] = V[:, [j, r]]
        while True:
            u = _unit_normalizer(int(A[r, r]), E)
            if u != 1:
                A[r] = (A[r] * u) % E
                rhs[r] = (rhs[r] * u) % E
            g = int(A[r, r])
            # clear the pivot column below r
            col = A[r + 1 :, r]
            div = (col % g == 0) & (col != 0)
            if div.any():
                rows = np.flatnonzero(div) + r + 1
                q = A[rows, r] // g
                A[rows] = (A[rows] - q[:, None] * A[r]) % E
                rhs[rows] = (rhs[rows] - q * rhs[r]) % E
            rest = np.flatnonzero(A[r + 1 :, r] != 0)
            if rest.size:
                i = int(rest[0]) + r + 1
                a, bb = int(A[r, r]), int(A[i, r])
                g2, s, t = _xgcd(a, bb)
                ra, ri = A[r].copy(), A[i].copy()
                A[r] = (s * ra + t * ri) % E
                A[i] = ((bb // g2) * ra - (a // g2) * ri) % E
                br, bi = int(rhs[r]), int(rhs[i])
                rhs[r] = (s * br + t * bi) % E
                rhs[i] = ((bb // g2) * br - (a // g2) * bi) % E
                continue
            # clear the pivot row right of r
            row = A[r, r + 1 :]
            div = (row % g == 0) & (row != 0)
            if div.any():
                cols = np.flatnonzero(div) + r + 1
                q = A[r, cols] // g
                A[:, cols] = (A[:, cols] - A[:, [r]] * q[None, :]) % E
                V[:, cols] = (V[:, cols] - V[:, [r]] * q[None, :]) % E
            rest = np.flatnonzero(A[r, r + 1 :] != 0)
            if rest.size:
                j = int(rest[0]) + r + 1
                a, bb = int(A[r, r]), int(A[r, j])
                g2, s, t = _xgcd(a, bb)
                ca, cj = A[:, r].copy(), A[:, j].copy()
                A[:, r] = (s * ca + t * cj) % E
                A[:, j] = ((bb // g2) * ca - (a // g2) * cj) % E
                va, vj = V[:, r].copy(), V[:, j].copy()
                V[:, r] = (s * va + t * vj) % E
                V[:, j] = ((bb // g2) * va - (a // g2) * vj) % E
                continue
            break
        diag.append(int(A[r, r]))
        r += 1
    return SNFResult(E, diag, rhs, V)


class AffineSystem:
    """Affine map M^n -> M^k given as a Python function, solved for zeros.

    ``fn`` receives an int array of n module-element indices and returns an
    array of k element indices; it must be affine (additive up to a constant).
    """

    def __init__(self, module: CoeffModule, n_unknowns: int, fn):
        self.module = module
        self.n = n_unknowns
        self.fn = fn
        M = module
        r = M.rank
        E = M.exponent
        factors = np.array(M.factors, dtype=np.int64)
        base = np.asarray(fn(np.zeros(n_unknowns, dtype=np.int64)), dtype=np.int64)
        self.k = base.size
        b0 = M.vectors[base].reshape(self.k * r)
        cols = []
        unit = [M.idx([1 if c == l else 0 for c in range(r)]) for l in range(r)]
        for j in range(n_unknowns):
            for l in range(r):
                x = np.zeros(n_unknowns, dtype=np.int64)
                x[j] = unit[l]
                img = M.vectors[np.asarray(fn(x), dtype=np.int64)].reshape(self.k * r)
                cols.append(img - b0)
        out_mod = np.tile(factors, self.k)
        if cols:
            C = np.stack(cols, axis=1) % out_mod[:, None]
        else:
            C = np.zeros((self.k * r, 0), dtype=np.int64)
        scale = (E // out_mod)[:, None]
        self.matrix = (C * scale) % E
        self.rhs = ((-b0) % out_mod * scale[:, 0]) % E
        self.in_mod = np.tile(factors, n_unknowns)
        self._snf = snf_mod(self.matrix, self.rhs, E) if self.k * r else None

    def _to_elements(self, y: np.ndarray) -> np.ndarray:
        M = self.module
        r = M.rank
        v = (y % self.in_mod).reshape(self.n, r) if r else np.zeros((self.n, 0), dtype=np.int64)
        return (v * np.array(M.strides, dtype=np.int64)).sum(axis=-1).astype(np.int64)

    def solve(self) -> np.ndarray | None:
        if self.n == 0 or self.module.rank == 0:
            ok = not np.asarray(self.fn(np.zeros(self.n, dtype=np.int64))).any()
            return np.zeros(self.n, dtype=np.int64) if ok else None
        if self._snf is None:
            return np.zeros(self.n, dtype=np.int64)
        y = self._snf.particular()
        return None if y is None else self._to_elements(y)

    def kernel_generators(self) -> list[np.ndarray]:
        if self.n == 0 or self.module.rank == 0:
            return []
        if self._snf is None:
            gens = []
            for j in range(self.n):
                for l in range(self.module.rank):
                    y = np.zeros(self.n * self.module.rank, dtype=np.int64)
                    y[j * self.module.rank + l] = 1
                    gens.append(self._to_elements(y))
            return gens
        out = []
        for y in self._snf.kernel_generators():
            x = self._to_elements(y)
            if x.any():
                out.append(x)
        return out

    def kernel_size(self) -> int:
        """Number of solutions of the homogeneous system, as elements of M^n."""
        M = self.module
        if self.n == 0 or M.rank == 0:
            return 1
        lift = math.prod((M.exponent // m) for m in M.factors) ** self.n
        if self._snf is None:
            return M.size ** self.n
        return self._snf.kernel_size() // lift

    def add_vectors(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.module.add[a, b]

    def kernel_elements(self, limit: int | None = None) -> list[np.ndarray]:
        """Every element of the homogeneous solution group (sorted lexicographically)."""
        size = self.kernel_size()
        if limit is not None and size > limit:
            from .errors import SizeLimitExceeded

            raise SizeLimitExceeded(f"solution space has {size} elements (> {limit})")
        seen = {tuple([0] * self.n)}
        frontier = [np.zeros(self.n, dtype=np.int64)]
        gens = self.kernel_generators()
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.module.add[x, g]
                    key = tuple(y.tolist())
                    if key not in seen:
                        seen.add(key)
                        nxt.append(y)
            frontier = nxt
        return [np.array(k, dtype=np.int64) for k in sorted(seen)]

    def all_solutions(self, limit: int | None = None) -> list[np.ndarray]:
        base = self.solve()
        if base is None:
            return []
        sols = {tuple(self.module.add[base, k].tolist()) for k in self.kernel_elements(limit)}
        return [np.array(s, dtype=np.int64) for s in sorted(sols)]

    def random_solution(self, rng) -> np.ndarray | None:
        """A solution shifted by a random combination of kernel generators."""
        x = self.solve()
        if x is None:
            return None
        for g in self.kernel_generators():
            for _ in range(rng.randrange(self.module.exponent)):
                x = self.module.add[x, g]
        return x
