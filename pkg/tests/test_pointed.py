"""Pointed categories, monoidal equivalences, pseudonatural isos, modifications and the center."""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from crossprod.cochains import Cochain
from crossprod.cohomology import enumerate_cochains, random_cochain, random_cocycle
from crossprod.errors import NotACocycle
from crossprod.groups import cyclic, direct_product, symmetric_group
from crossprod.linalg import AffineSystem
from crossprod.modules import CoeffModule
from crossprod.pointed import (
    Modification,
    MonoidalEquivalence,
    PointedCategory,
    PseudonaturalIso,
    center_invertibles,
    compose_equivalences,
    half_braiding_defect,
    nat_iso_exists,
    pentagon_check,
    pseudonatural_defect,
    tensor_pseudonatural,
    verify_equivalence,
    verify_modification,
    verify_pseudonatural,
    vertical_compose,
)

Z2 = cyclic(2)
M2, M4 = CoeffModule([2]), CoeffModule([4])


def omega(value, M=M4):
    w = np.zeros((2, 2, 2), dtype=np.int64)
    w[1, 1, 1] = value
    return PointedCategory.build(Z2, M, w, checked=False)


def k_table(value, M=M4):
    k = np.zeros((2, 2), dtype=np.int64)
    k[1, 1] = value
    return Cochain(Z2, M, k)


def random_iso(C, F, rng):
    """A random pseudonatural iso out of F: pick carrier and chi, solve for k of the target."""
    L, M = C.objects, C.scalars
    while True:
        u = rng.randrange(L.order)
        pi0 = np.array([L.m(int(L.inv[u]), int(F.pi0[v]), u) for v in range(L.order)])
        chi = np.array([0] + [rng.randrange(M.size) for _ in range(L.order - 1)])

        def target(x):
            kg = np.zeros((L.order,) * 2, dtype=np.int64)
            kg[1:, 1:] = x.reshape(L.order - 1, L.order - 1)
            return MonoidalEquivalence(F.source, C, pi0, F.pi1, Cochain(L, M, kg, check=False))

        sy = AffineSystem(M, (L.order - 1) ** 2, lambda x: pseudonatural_defect(PseudonaturalIso(F, target(x), u, chi)).reshape(-1))
        x = sy.solve()
        if x is not None:
            return PseudonaturalIso(F, target(x), u, chi)


class TestPentagon:
    def test_examples(self):
        assert pentagon_check(omega(0, M2))
        assert pentagon_check(omega(1, M2))
        res = pentagon_check(omega(1))
        assert not res and res.witness == (1, 1, 1, 1)

    def test_checked_build_rejects(self):
        with pytest.raises(NotACocycle):
            PointedCategory.build(Z2, M4, omega(1).assoc.values)

    def test_agrees_with_cocycle_condition_on_s3(self):
        rng = random.Random(0)
        S3 = symmetric_group(3)
        for _ in range(20):
            c = random_cochain(S3, M2, 3, rng)
            from crossprod.cochains import is_cocycle

            assert bool(pentagon_check(PointedCategory.build(S3, M2, c, checked=False))) == bool(is_cocycle(c))
        assert pentagon_check(PointedCategory.build(S3, M2, random_cocycle(S3, M2, 3, rng)))


class TestEquivalences:
    def test_identity(self):
        C = omega(2)
        assert verify_equivalence(C, C, MonoidalEquivalence.identity(C))

    def test_scalar_automorphism(self):
        C = omega(2)
        F = MonoidalEquivalence(C, C, np.array([0, 1]), M4.matrix_lookup([[3]]), Cochain.zero(Z2, M4, 2))
        assert verify_equivalence(C, C, F)

    def test_no_equivalence_between_classes(self):
        C, D = omega(2), omega(0)
        for kk in range(4):
            F = MonoidalEquivalence(C, D, np.array([0, 1]), np.arange(4), k_table(kk))
            res = verify_equivalence(C, D, F)
            assert not res and res.tag == "monoidal-functor"

    def test_compose(self):
        C = omega(2)
        F = MonoidalEquivalence(C, C, np.array([0, 1]), M4.matrix_lookup([[3]]), Cochain.zero(Z2, M4, 2))
        I = MonoidalEquivalence.identity(C)
        assert compose_equivalences(F, I).same_as(F)
        FF = compose_equivalences(F, F)
        assert np.array_equal(FF.pi1, np.arange(4))

    def test_compose_nonzero_k(self):
        rng = random.Random(1)
        L = direct_product(Z2, Z2)
        C = PointedCategory.build(L, M4, random_cocycle(L, M4, 3, rng))
        I = MonoidalEquivalence.identity(C)
        F = random_iso(C, I, rng).target
        G = random_iso(C, F, rng).target
        assert verify_equivalence(C, C, F) and verify_equivalence(C, C, G)
        assert verify_equivalence(C, C, compose_equivalences(F, G))

    def test_nat_iso(self):
        C = omega(0)
        I = MonoidalEquivalence.identity(C)
        assert nat_iso_exists(I, I).is_zero()
        F = MonoidalEquivalence(C, C, np.array([0, 1]), np.arange(4), k_table(2))
        p = nat_iso_exists(F, I)
        assert p is not None and p.values[1] in (1, 3)
        C2 = omega(0, M2)
        I2 = MonoidalEquivalence.identity(C2)
        F2 = MonoidalEquivalence(C2, C2, np.array([0, 1]), np.arange(2), k_table(1, M2))
        assert nat_iso_exists(F2, I2) is None


class TestPseudonatural:
    def test_identity(self):
        C = omega(2)
        assert verify_pseudonatural(PseudonaturalIso.identity(MonoidalEquivalence.identity(C)))

    def test_chi_two_on_z4(self):
        C = omega(0)
        I = MonoidalEquivalence.identity(C)
        s = PseudonaturalIso(I, I, 0, np.array([0, 2]))
        # the square at (1, 1) reads chi(1) + chi(1) = chi(0) = 0 mod 4, so chi(1) = 2 is natural
        assert verify_pseudonatural(s)
        bad = PseudonaturalIso(I, I, 0, np.array([0, 1]))
        res = verify_pseudonatural(bad)
        assert not res and res.witness[:2] == (1, 1)

    @pytest.mark.parametrize("seed", range(6))
    def test_compositions(self, seed):
        rng = random.Random(seed)
        L = [Z2, cyclic(3), symmetric_group(3), direct_product(Z2, Z2)][seed % 4]
        M = [M2, M4, CoeffModule([2, 2])][seed % 3]
        C = PointedCategory.build(L, M, random_cocycle(L, M, 3, rng))
        I = MonoidalEquivalence.identity(C)
        s = random_iso(C, I, rng)
        t = random_iso(C, s.target, rng)
        r = random_iso(C, I, rng)
        assert verify_pseudonatural(s) and verify_pseudonatural(t)
        assert verify_pseudonatural(vertical_compose(s, t))
        assert verify_pseudonatural(tensor_pseudonatural(r, s))
        assert verify_pseudonatural(tensor_pseudonatural(t, r))

    def test_tensor_with_identity(self):
        rng = random.Random(3)
        C = PointedCategory.build(direct_product(Z2, Z2), M4)
        I = MonoidalEquivalence.identity(C)
        s = random_iso(C, I, rng)
        one = PseudonaturalIso.identity(I)
        left = tensor_pseudonatural(s, one)
        assert left.carrier == s.carrier and np.array_equal(left.chi, s.chi)
        assert tensor_pseudonatural(one, one).same_as(one)

    def test_corrupted_component(self):
        rng = random.Random(4)
        C = PointedCategory.build(cyclic(3), M4)
        I = MonoidalEquivalence.identity(C)
        s = random_iso(C, I, rng)
        chi = s.chi.copy()
        chi[2] = (chi[2] + 1) % 4
        res = verify_pseudonatural(PseudonaturalIso(s.source, s.target, s.carrier, chi))
        assert not res
        x, y = res.witness[:2]
        assert 2 in (x, y, C.objects.m(x, y))


class TestModifications:
    def test_zero_between_equal(self):
        C = omega(2)
        s = PseudonaturalIso.identity(MonoidalEquivalence.identity(C))
        assert verify_modification(Modification(s, s, 0))

    def test_any_value_under_trivial_action(self):
        # with trivial object action on scalars, every scalar is a modification between equal isos
        C = omega(2)
        s = PseudonaturalIso.identity(MonoidalEquivalence.identity(C))
        assert all(verify_modification(Modification(s, s, g)) for g in range(4))

    def test_shift(self):
        C = omega(0)
        I = MonoidalEquivalence.identity(C)
        a = PseudonaturalIso(I, I, 0, np.array([0, 0]))
        b = PseudonaturalIso(I, I, 0, np.array([0, 2]))
        assert not verify_modification(Modification(a, b, 0))


class TestCenter:
    def test_trivial_objects(self):
        C = PointedCategory.build(cyclic(1), M4)
        assert center_invertibles(C).order == 1

    def test_z2_z4(self):
        Z = center_invertibles(omega(0))
        keys = sorted(e.key() for e in Z.elements)
        assert keys == [(0, 0, 0), (0, 0, 2), (1, 0, 0), (1, 0, 2)]

    def test_against_hexagon_oracle(self):
        C = omega(2)
        Z = center_invertibles(C)
        brute = [
            (v, b)
            for v in range(2)
            for b in range(4)
            if not half_braiding_defect(C, v, [0, b]).any()
        ]
        assert Z.order == len(brute)

    def test_center_group_is_abelian_here(self):
        rng = random.Random(5)
        for L in (Z2, cyclic(3), direct_product(Z2, Z2)):
            C = PointedCategory.build(L, M4, random_cocycle(L, M4, 3, rng))
            assert center_invertibles(C).group.is_abelian
