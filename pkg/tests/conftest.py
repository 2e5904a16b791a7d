"""Shared sample generators for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from crossprod.cohomology import random_cocycle
from crossprod.groups import cyclic, direct_product
from crossprod.modules import CoeffModule
from crossprod.outer_action import CrossedSystem, coherify, random_crossed_system
from crossprod.pointed import MonoidalEquivalence, PointedCategory

OBJECT_GROUPS = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), direct_product(cyclic(2), cyclic(2))]
ACTING_GROUPS = [cyclic(2), cyclic(3)]
SCALARS = [CoeffModule([2]), CoeffModule([4]), CoeffModule([3]), CoeffModule([2, 2]), CoeffModule([8])]


def sample_systems(count: int, seed: int) -> list[CrossedSystem]:
    """Valid, usually incoherent systems with |G| <= 3, |L| <= 4, |M| <= 8.

    Every third base has zero associator so that the carriers stay diverse.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        i = len(out)
        G = ACTING_GROUPS[i % 2]
        L = OBJECT_GROUPS[i % 5]
        M = SCALARS[(i // 5) % 5]
        C = PointedCategory.build(L, M, random_cocycle(L, M, 3, rng) if i % 3 else None)
        S = random_crossed_system(G, C, rng)
        if S is not None:
            out.append(S)
    return out


_CACHE: dict = {}


def cached_systems(count: int, seed: int) -> list[CrossedSystem]:
    key = (count, seed)
    if key not in _CACHE:
        _CACHE[key] = sample_systems(count, seed)
    return _CACHE[key]


def coherent_systems(count: int, seed: int) -> list[CrossedSystem]:
    key = ("coherent", count, seed)
    if key not in _CACHE:
        out = []
        for S in cached_systems(count, seed):
            T = coherify(S)
            if T is not None:
                out.append(T)
        _CACHE[key] = out
    return _CACHE[key]


def z4_system(M: CoeffModule | None = None) -> CrossedSystem:
    """G = Z/2 acting trivially on L = Z/2 with U_{1,1} = 1: the objects form Z/4."""
    Z2 = cyclic(2)
    C = PointedCategory.build(Z2, M or CoeffModule([2]))
    ident = MonoidalEquivalence.identity(C)
    z = np.zeros((2, 2, 2), dtype=np.int64)
    return CrossedSystem(Z2, C, (ident, ident), np.array([[0, 0], [0, 1]]), z, z)


def trivial_base_system(M: CoeffModule, omega111: int = 0, n: int = 2) -> CrossedSystem:
    """G = Z/n over the trivial category; only omega carries data."""
    G = cyclic(n)
    C = PointedCategory.build(cyclic(1), M)
    ident = MonoidalEquivalence.identity(C)
    omega = np.zeros((n, n, n), dtype=np.int64)
    if n == 2:
        omega[1, 1, 1] = omega111
    return CrossedSystem(G, C, (ident,) * n, np.zeros((n, n), dtype=np.int64), np.zeros((n, n, 1), dtype=np.int64), omega)


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
