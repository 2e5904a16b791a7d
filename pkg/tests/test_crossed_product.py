"""The crossed product construction, its pentagon families, extraction, 1-cells and 2-cells."""

from __future__ import annotations

import random

import numpy as np
import pytest
from conftest import coherent_systems, trivial_base_system, z4_system

from crossprod.cochains import Cochain
from crossprod.cohomology import random_cochain
from crossprod.crossed_product import (
    GradedPointedCategory,
    OneCell,
    TwoCell,
    build_crossed_product,
    build_unchecked,
    canonical_sections,
    check_one_cell_diagram,
    extract_crossed_system,
    extract_with_gauge,
    functor_to_one_cell,
    normalize_graded_functor,
    one_cell_to_functor,
    pentagon_suite,
    product_index,
    random_one_cell,
    random_one_cell_pair,
    suite_passes,
    transport_one_cell,
    two_cell_to_natural_iso,
    verify_one_cell,
    verify_two_cell,
)
from crossprod.errors import BadSections, IncoherentOneCell, NotCoherent, NotGraded, NotSurjectiveGrading
from crossprod.groups import cyclic, direct_product
from crossprod.modules import CoeffModule
from crossprod.outer_action import CrossedSystem
from crossprod.pointed import MonoidalEquivalence, PointedCategory, natural_iso_defect, pentagon_check, verify_equivalence

M4 = CoeffModule([4])
Z2, Z3 = cyclic(2), cyclic(3)


def with_functor_k(S, s, x, y, delta):
    """S with k_s(x, y) shifted by delta."""
    F = S.functors[s]
    k = F.k.values.copy()
    k[x, y] = S.M.add[k[x, y], delta]
    F2 = MonoidalEquivalence._raw(F.source, F.target, F.pi0, F.pi1, Cochain(S.L, S.M, k, check=False))
    functors = list(S.functors)
    functors[s] = F2
    return CrossedSystem(S.group, S.base, tuple(functors), S.carriers, S.chi, S.omega)


class TestBuild:
    def test_trivial(self):
        D = build_crossed_product(trivial_base_system(M4))
        assert D.category.same_as(PointedCategory.build(Z2, M4))

    def test_omega_is_the_associator(self):
        D = build_crossed_product(trivial_base_system(M4, 2))
        assert D.category.assoc.values[1, 1, 1] == 2
        assert pentagon_check(D.category)

    def test_z4_objects(self):
        S = z4_system()
        D = build_crossed_product(S)
        T = D.category.objects
        g = product_index(S, 0, 1)
        assert T.mul[g, g] == product_index(S, 1, 0)
        assert T.element_order(g) == 4
        assert pentagon_check(D.category)
        assert D.deg.tolist() == [0, 0, 1, 1]

    def test_incoherent_rejected(self):
        S = trivial_base_system(M4, 1)
        with pytest.raises(NotCoherent):
            build_crossed_product(S)
        D = build_crossed_product(S, coherent=False)
        assert not pentagon_check(D.category)


class TestPentagonSuite:
    def test_trivial_passes(self):
        assert suite_passes(pentagon_suite(z4_system()))

    def test_corrupted_functor(self):
        S = coherent_systems(200, 2024)[3]
        l = S.L.order
        assert l > 1
        bad = with_functor_k(S, 1, 1, 1, 1)
        reports = pentagon_suite(bad)
        failing = [r.name for r in reports if not r.check.ok]
        assert failing[0] == "monoidal-functor"
        assert "base" not in failing

    def test_incoherent_omega(self):
        S = trivial_base_system(M4, 1)
        failing = [r.name for r in pentagon_suite(S) if not r.check.ok]
        assert failing == ["coherence"]

    def test_witness_labels(self):
        S = trivial_base_system(M4, 1)
        rep = {r.name: r.check for r in pentagon_suite(S)}
        assert rep["coherence"].witness == (1, 1, 1, 1)


class TestExtraction:
    def test_z4_graded(self):
        D = GradedPointedCategory(PointedCategory.build(cyclic(4), CoeffModule([2])), Z2, np.array([0, 1, 0, 1]))
        E = extract_with_gauge(D, [0, 1])
        S = E.system
        assert S.L.order == 2
        # [1][1] = 2 in Z/4, the generator of the kernel
        assert S.carriers[1, 1] == 1 and E.labels[product_index(S, 1, 0)] == 2
        assert E.gauge.is_zero()

    def test_trivial_grading(self):
        C = PointedCategory.build(cyclic(3), M4)
        D = GradedPointedCategory(C, cyclic(1), np.zeros(3, dtype=np.int64))
        S = extract_crossed_system(D)
        assert S.group.order == 1 and S.base.same_as(C)

    def test_round_trip(self):
        for S in coherent_systems(200, 2024)[:25]:
            D = build_crossed_product(S)
            assert canonical_sections(D).tolist() == [product_index(S, 0, s) for s in range(S.group.order)]
            assert extract_crossed_system(D).same_as(S)

    def test_gauge_for_twisted_associator(self):
        rng = random.Random(3)
        from crossprod.cochains import differential
        from crossprod.cohomology import random_cocycle

        T = cyclic(4)
        C = PointedCategory.build(T, M4, random_cocycle(T, M4, 3, rng))
        D = GradedPointedCategory(C, Z2, np.array([0, 1, 0, 1]))
        E = extract_with_gauge(D)
        B = build_crossed_product(E.system)
        lab = E.labels
        A = M4.sub[C.assoc.values, differential(E.gauge).values]
        assert np.array_equal(A[np.ix_(lab, lab, lab)], B.category.assoc.values)

    def test_bad_sections(self):
        D = GradedPointedCategory(PointedCategory.build(cyclic(4), CoeffModule([2])), Z2, np.array([0, 1, 0, 1]))
        with pytest.raises(BadSections):
            extract_crossed_system(D, [0, 2])
        with pytest.raises(BadSections):
            extract_crossed_system(D, [1, 1])

    def test_grading_must_be_onto(self):
        with pytest.raises(NotSurjectiveGrading):
            GradedPointedCategory(PointedCategory.build(Z2, M4), Z2, np.array([0, 0]))


class TestOneCells:
    def test_identity(self):
        S = z4_system(M4)
        B = build_unchecked(S)
        F = one_cell_to_functor(OneCell.identity(S), B, B)
        assert F.same_as(MonoidalEquivalence.identity(B.category))
        T = functor_to_one_cell(MonoidalEquivalence.identity(B.category), S, S)
        assert T.same_as(OneCell.identity(S))

    def test_trivial_base_coboundary_shift(self):
        rng = random.Random(1)
        S = trivial_base_system(M4, 2)
        S2, T = random_one_cell_pair(S, rng)
        B, B2 = build_unchecked(S), build_unchecked(S2)
        F = one_cell_to_functor(T, B, B2)
        assert verify_equivalence(B.category, B2.category, F)

    def test_corrupted_pi(self):
        rng = random.Random(2)
        S = next(s for s in coherent_systems(200, 2024) if s.group.order == 3)
        S2, T = random_one_cell_pair(S, rng)
        Pi = T.Pi.copy()
        Pi[1, 2] = S.M.add[Pi[1, 2], 1]
        bad = OneCell(S, S2, T.H, T.carriers, T.theta, Pi)
        assert not verify_one_cell(bad)
        with pytest.raises(IncoherentOneCell):
            one_cell_to_functor(bad)

    def test_round_trip_and_diagram(self):
        rng = random.Random(3)
        seen_theta = False
        for S in coherent_systems(200, 2024)[:20]:
            pair = random_one_cell_pair(S, rng)
            if pair is None:
                continue
            S2, T = pair
            seen_theta |= bool(T.theta.any())
            B, B2 = build_unchecked(S), build_unchecked(S2)
            F = one_cell_to_functor(T, B, B2)
            assert functor_to_one_cell(F, S, S2).same_as(T)
            assert check_one_cell_diagram(T)
        assert seen_theta

    def test_normalization_of_isomorphic_functor(self):
        rng = random.Random(4)
        S = coherent_systems(200, 2024)[5]
        S2, T = random_one_cell_pair(S, rng)
        B, B2 = build_unchecked(S), build_unchecked(S2)
        F = one_cell_to_functor(T, B, B2)
        Tg = B.category.objects
        p = random_cochain(Tg, S.M, 1, rng).values
        X, Y = np.indices((Tg.order, Tg.order))
        M = S.M
        dp = M.add[M.sub[p[Y], p[Tg.mul]], p[X]]
        F2 = MonoidalEquivalence._raw(F.source, F.target, F.pi0, F.pi1, Cochain(Tg, M, M.sub[F.k.values, dp], check=False))
        assert verify_equivalence(B.category, B2.category, F2)
        T2 = functor_to_one_cell(F2, S, S2)
        assert verify_one_cell(T2, B, B2)
        G2, q = normalize_graded_functor(F2, S, S2)
        assert not natural_iso_defect(F2, G2, q).any()

    def test_not_graded(self):
        V = direct_product(Z2, Z2)
        C = PointedCategory.build(cyclic(1), M4)
        ident = MonoidalEquivalence.identity(C)
        S = CrossedSystem(V, C, (ident,) * 4, np.zeros((4, 4), dtype=np.int64), np.zeros((4, 4, 1), dtype=np.int64), np.zeros((4, 4, 4), dtype=np.int64))
        B = build_unchecked(S)
        swap = MonoidalEquivalence._raw(B.category, B.category, np.array([0, 2, 1, 3]), np.arange(4), Cochain.zero(V, M4, 2))
        with pytest.raises(NotGraded):
            functor_to_one_cell(swap, S, S)

    def test_random_one_cell_rejects_bad_objects(self):
        C = PointedCategory.build(Z2, M4)
        ident = MonoidalEquivalence.identity(C)
        S = CrossedSystem(Z3, C, (ident,) * 3, np.zeros((3, 3), dtype=np.int64), np.zeros((3, 3, 2), dtype=np.int64), np.zeros((3, 3, 3), dtype=np.int64))
        assert random_one_cell(S, S, ident, np.array([0, 0, 0]), random.Random(0)) is not None
        # with U = U' = e the carriers must form a homomorphism Z/3 -> Z/2
        T = random_one_cell(S, S, ident, np.array([0, 1, 0]), random.Random(0))
        assert T is None
        bad = OneCell(S, S, ident, np.array([0, 1, 0]), np.zeros((3, 2), dtype=np.int64), np.zeros((3, 3), dtype=np.int64))
        res = verify_one_cell(bad)
        assert not res and res.tag == "Pi-objects" and res.witness == (1, 2)


class TestTwoCells:
    def _cell(self, seed):
        rng = random.Random(seed)
        S = next(s for s in coherent_systems(200, 2024) if s.group.order == 3 and s.M.size >= 3)
        B = build_unchecked(S)
        T = random_one_cell(S, S, MonoidalEquivalence.identity(S.base), np.zeros(3, dtype=np.int64), rng, B, B)
        return S, B, T, rng

    def test_identity(self):
        S, B, T, _ = self._cell(0)
        c = TwoCell(Cochain.zero(S.L, S.M, 1), np.zeros(3, dtype=np.int64))
        assert verify_two_cell(c, T, T)

    def test_transport_and_natural_iso(self):
        S, B, T, rng = self._cell(1)
        for _ in range(5):
            m = random_cochain(S.L, S.M, 1, rng)
            ms = [0] + [rng.randrange(S.M.size) for _ in range(2)]
            T2 = transport_one_cell(T, m, ms)
            c = TwoCell(m, ms)
            assert verify_two_cell(c, T, T2) and verify_one_cell(T2, B, B)
            p = two_cell_to_natural_iso(c, T)
            F, F2 = one_cell_to_functor(T, B, B), one_cell_to_functor(T2, B, B)
            assert not natural_iso_defect(F, F2, p).any()

    def test_closed_m_on_equal_cells(self):
        S, B, T, _ = self._cell(2)
        # m = 0 with m_s a character of G leaves T fixed
        M = S.M
        for a in range(M.size):
            ms = [0, a, M.add[a, a]]
            ok = M.plus(a, a, a) == 0
            assert bool(verify_two_cell(TwoCell(Cochain.zero(S.L, M, 1), ms), T, T)) == ok

    def test_perturbed_m_sigma(self):
        S, B, T, rng = self._cell(3)
        m = random_cochain(S.L, S.M, 1, rng)
        ms = [0, 1, 2 % S.M.size]
        T2 = transport_one_cell(T, m, ms)
        bad = TwoCell(m, [0, S.M.add[ms[1], 1], ms[2]])
        res = verify_two_cell(bad, T, T2)
        assert not res and res.tag == "square-Pi" and len(res.witness) == 2
