"""Acceptance criteria 1-8, each reported as one PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the lines alone; under pytest
they appear in the terminal summary.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import subprocess
import sys
import tempfile

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import ACCEPTANCE_LINES, cached_systems, coherent_systems, trivial_base_system, z4_system  # noqa: E402

from crossprod.braiding import (  # noqa: E402
    PointedBraiding,
    action_from_braiding,
    braiding_from_action,
    hexagon_check,
    solve_action_braidings,
    solve_braidings,
    verify_action_braiding,
)
from crossprod.cochains import Cochain, differential, is_cocycle  # noqa: E402
from crossprod.cohomology import (  # noqa: E402
    cohomology_group,
    enumerate_cochains,
    n_free,
    oracle_cohomology,
    random_cochain,
    random_cocycle,
)
from crossprod.crossed_product import (  # noqa: E402
    GradedPointedCategory,
    TwoCell,
    build_crossed_product,
    build_unchecked,
    extract_crossed_system,
    extract_with_gauge,
    functor_to_one_cell,
    one_cell_to_functor,
    pentagon_suite,
    random_one_cell_pair,
    transport_one_cell,
    two_cell_to_natural_iso,
    verify_two_cell,
)
from crossprod.groups import cyclic, direct_product  # noqa: E402
from crossprod.modules import CoeffModule  # noqa: E402
from crossprod.outer_action import (  # noqa: E402
    CrossedSystem,
    check_coherence,
    coherence_obstruction,
    coherify,
)
from crossprod.pointed import PointedCategory, natural_iso_defect, pentagon_check, verify_equivalence  # noqa: E402

SAMPLE_SIZE = 200
SAMPLE_SEED = 2024
ENUM_BOUND = 10**4


# ------------------------------------------------------------------ 1
def criterion_1():
    rng = random.Random(1)
    groups = {"Z2": cyclic(2), "Z3": cyclic(3), "Z2xZ2": direct_product(cyclic(2), cyclic(2))}
    modules = {"Z2": CoeffModule([2]), "Z4": CoeffModule([4])}
    checked = mismatches = cocycles = 0
    for G in groups.values():
        for M in modules.values():
            if M.size ** n_free(G, 3) <= ENUM_BOUND:
                samples = list(enumerate_cochains(G, M, 3))
            else:
                samples = [random_cochain(G, M, 3, rng) for _ in range(500)]
                samples += [random_cocycle(G, M, 3, rng) for _ in range(50)]
            for c in samples:
                C = PointedCategory.build(G, M, c, checked=False)
                coc = bool(is_cocycle(c))
                cocycles += coc
                mismatches += bool(pentagon_check(C)) != coc
                checked += 1
    return mismatches == 0 and cocycles > 0, f"{checked} cochains, {cocycles} cocycles, {mismatches} mismatches"


# ------------------------------------------------------------------ 2
def criterion_2():
    groups = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), direct_product(cyclic(2), cyclic(2))]
    bad = []
    cases = 0
    for G in groups:
        for m in (2, 3, 4):
            M = CoeffModule([m])
            for n in (1, 2, 3):
                fast = cohomology_group(G, M, n)
                slow = oracle_cohomology(G, M, n)
                cases += 1
                if fast != slow:
                    bad.append((G.order, m, n, fast, slow))
                if G.is_abelian and len(G.generators) <= 1:
                    if math.prod(fast) != math.gcd(G.order, m):
                        bad.append(("gcd", G.order, m, n, fast))
    # a twisted module: Z/2 and Z/4 acting on Z/4 by inversion through the sign
    for G in (cyclic(2), cyclic(4)):
        M = CoeffModule([4], G, [[[1]] if g % 2 == 0 else [[3]] for g in range(G.order)])
        for n in (1, 2, 3):
            cases += 1
            if cohomology_group(G, M, n) != oracle_cohomology(G, M, n):
                bad.append(("twisted", G.order, n))
    return not bad, f"{cases} cases agree" if not bad else f"disagreements {bad}"


# ------------------------------------------------------------------ 3
def criterion_3():
    rng = random.Random(3)
    systems = cached_systems(SAMPLE_SIZE, SAMPLE_SEED)
    not_cocycle = shift_bad = 0
    for S in systems:
        ob = coherence_obstruction(S)
        not_cocycle += not is_cocycle(ob.cocycle)
        G, module = S.group, S.g_module()
        mu = random_cochain(G, S.M, 3, rng).values
        S2 = CrossedSystem(G, S.base, S.functors, S.carriers, S.chi, S.M.add[S.omega, mu])
        delta = differential(Cochain(G, module, mu)).values
        change = S.M.sub[coherence_obstruction(S2).cocycle.values, ob.cocycle.values]
        shift_bad += not np.array_equal(change, delta)
    ok = len(systems) >= 200 and not_cocycle == 0 and shift_bad == 0
    return ok, f"{len(systems)} systems, {not_cocycle} non-cocycles, {shift_bad} bad shifts"


# ------------------------------------------------------------------ 4
def criterion_4():
    systems = cached_systems(SAMPLE_SIZE, SAMPLE_SEED)
    disagree = coherify_bad = coherent = 0
    for S in systems:
        built = build_unchecked(S)
        a = bool(check_coherence(S))
        b = bool(pentagon_check(built.category))
        fam = {r.name: r.check.ok for r in pentagon_suite(S, built)}
        coherent += a
        disagree += not (a == b == fam["coherence"])
        T = coherify(S)
        if T is not None:
            bt = build_unchecked(T)
            fam = {r.name: r.check.ok for r in pentagon_suite(T, bt)}
            if not (check_coherence(T) and pentagon_check(bt.category) and fam["coherence"]):
                coherify_bad += 1
    ok = disagree == 0 and coherify_bad == 0 and 0 < coherent < len(systems)
    return ok, f"{len(systems)} systems ({coherent} coherent), {disagree} disagreements, {coherify_bad} bad coherifications"


# ------------------------------------------------------------------ 5
def _same_tables(D1, D2, labels) -> bool:
    T1, T2 = D1.category.objects, D2.category.objects
    A1, A2 = D1.category.assoc.values, D2.category.assoc.values
    return np.array_equal(T1.mul[np.ix_(labels, labels)], labels[T2.mul]) and np.array_equal(
        A1[np.ix_(labels, labels, labels)], A2
    )


def criterion_5():
    systems = coherent_systems(SAMPLE_SIZE, SAMPLE_SEED)
    bad_forward = bad_back = 0
    for S in systems:
        D = build_crossed_product(S)
        E = extract_crossed_system(D)
        bad_forward += not E.same_as(S)
        ext = extract_with_gauge(D)
        bad_back += not (ext.gauge.is_zero() and _same_tables(D, build_crossed_product(ext.system), ext.labels))
    Z4 = PointedCategory.build(cyclic(4), CoeffModule([2]))
    D = GradedPointedCategory(Z4, cyclic(2), np.array([0, 1, 0, 1]))
    ext = extract_with_gauge(D)
    z4_ok = ext.gauge.is_zero() and _same_tables(D, build_crossed_product(ext.system), ext.labels)
    ok = bad_forward == 0 and bad_back == 0 and z4_ok and len(systems) > 0
    return ok, f"{len(systems)} coherent systems, {bad_forward} forward and {bad_back} backward failures, Z/4 example {'ok' if z4_ok else 'failed'}"


# ------------------------------------------------------------------ 6
def _transfer_case(S, base_filter=None):
    """(action-braiding count, restricting braiding count, inverse maps agree) per base braiding."""
    built = build_unchecked(S)
    l = S.L.order
    all_b = solve_braidings(built.category)
    rows = []
    for base in solve_braidings(S.base):
        sols = solve_action_braidings(S, base)
        restricting = [b for b in all_b if np.array_equal(b.c[:l, :l], base.c)]
        images = [braiding_from_action(S, base, ab, built) for ab in sols]
        inverse = all(hexagon_check(b) for b in images)
        inverse &= sorted(b.c.tolist() for b in images) == sorted(b.c.tolist() for b in restricting)
        for b in restricting:
            base2, ab = action_from_braiding(S, built, b)
            inverse &= base2.same_as(base) and bool(verify_action_braiding(S, base, ab))
            inverse &= braiding_from_action(S, base, ab, built).same_as(b)
        for ab in sols:
            _, back = action_from_braiding(S, built, braiding_from_action(S, base, ab, built))
            inverse &= back.same_as(ab)
        rows.append((len(sols), len(restricting), inverse))
    return rows


def criterion_6():
    M4 = CoeffModule([4])
    parts = []
    ok = True
    for w in (0, 2):
        rows = _transfer_case(trivial_base_system(M4, w))
        ok &= rows == [(2, 2, True)]
        parts.append(f"(a) omega={w}: {rows}")
    rows = _transfer_case(z4_system(M4))
    ok &= len(rows) > 0 and all(a == b and inv for a, b, inv in rows)
    parts.append(f"(b) Z/4 objects: {rows}")
    return ok, "; ".join(parts)


# ------------------------------------------------------------------ 7
def criterion_7():
    rng = random.Random(7)
    systems = coherent_systems(SAMPLE_SIZE, SAMPLE_SEED)
    cells = bad_cell = bad_two = 0
    for S in itertools.cycle(systems):
        if cells >= 50:
            break
        pair = random_one_cell_pair(S, rng)
        if pair is None:
            continue
        S2, T = pair
        B, B2 = build_unchecked(S), build_unchecked(S2)
        F = one_cell_to_functor(T, B, B2)
        cells += 1
        if not (verify_equivalence(B.category, B2.category, F) and functor_to_one_cell(F, S, S2).same_as(T)):
            bad_cell += 1
            continue
        m = random_cochain(S.L, S.M, 1, rng)
        ms = [0] + [rng.randrange(S.M.size) for _ in range(S.group.order - 1)]
        T2 = transport_one_cell(T, m, ms)
        c = TwoCell(m, ms)
        F2 = one_cell_to_functor(T2, B, B2)
        p = two_cell_to_natural_iso(c, T)
        if not (verify_two_cell(c, T, T2) and not natural_iso_defect(F, F2, p).any()):
            bad_two += 1
    return bad_cell == 0 and bad_two == 0, f"{cells} one-cells, {bad_cell} failed round trips, {bad_two} failed two-cells"


# ------------------------------------------------------------------ 8
def _reference_pentagon(C):
    L, M = C.objects, C.scalars
    A = C.assoc.values
    for a, b, c, d in itertools.product(range(L.order), repeat=4):
        ab, bc, cd = L.m(a, b), L.m(b, c), L.m(c, d)
        top = M.plus(int(A[ab, c, d]), int(A[a, b, cd]))
        bottom = M.plus(int(A[a, b, c]), int(A[a, bc, d]), int(A[b, c, d]))
        if top != bottom:
            return (a, b, c, d)
    return None


def _reference_hexagon(C, c):
    L, M = C.objects, C.scalars
    A = C.assoc.values
    for u, v, w in itertools.product(range(L.order), repeat=3):
        h1 = M.minus(M.minus(int(c[L.m(u, v), w]), int(A[u, v, w])), int(A[w, u, v]))
        h1 = M.minus(h1, M.plus(M.minus(int(c[v, w]), int(A[u, w, v])), int(c[u, w])))
        h2 = M.plus(int(A[u, v, w]), int(c[u, L.m(v, w)]), int(A[v, w, u]))
        h2 = M.minus(h2, M.plus(int(c[u, v]), int(A[v, u, w]), int(c[u, w])))
        if h1:
            return (u, v, w), "H1"
        if h2:
            return (u, v, w), "H2"
    return None, None


def _reference_coherence(S):
    pi = coherence_obstruction(S).cocycle.values
    for idx in itertools.product(range(S.group.order), repeat=4):
        if pi[idx]:
            return idx
    return None


def _cli_runs(tmp):
    from crossprod.io import write_atomic

    S = z4_system(CoeffModule([4]))
    bad = cached_systems(SAMPLE_SIZE, SAMPLE_SEED)[1]
    write_atomic(os.path.join(tmp, "sys.json"), S.to_json())
    write_atomic(os.path.join(tmp, "bad.json"), bad.to_json())
    write_atomic(os.path.join(tmp, "g.json"), cyclic(2).to_json())
    write_atomic(os.path.join(tmp, "m.json"), {"factors": [4]})
    write_atomic(os.path.join(tmp, "b.json"), {"c": [[0, 0], [0, 2]]})
    return [
        ["cohomology", "--group", "g.json", "--module", "m.json", "-n", "3", "--oracle"],
        ["obstruction", "--system", "bad.json"],
        ["coherify", "--system", "bad.json", "-o", "coh.json"],
        ["build-crossed", "--system", "sys.json", "-o", "cat.json"],
        ["pentagon-check", "--category", "cat.json"],
        ["extract-system", "--category", "cat.json", "--grading", "cat.grading.json", "-o", "ext.json"],
        ["find-braidings", "--category", "cat.json"],
        ["find-action-braidings", "--system", "sys.json", "--base-braiding", "b.json"],
    ]


def _run_cli_twice():
    outputs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            record = []
            for argv in _cli_runs(tmp):
                proc = subprocess.run([sys.executable, "-m", "crossprod.cli", *argv], cwd=tmp, capture_output=True)
                record.append((proc.returncode, proc.stdout, proc.stderr))
            for name in sorted(os.listdir(tmp)):
                with open(os.path.join(tmp, name), "rb") as fh:
                    record.append((name, fh.read()))
            outputs.append(record)
    return outputs


def criterion_8():
    rng = random.Random(8)
    outputs = _run_cli_twice()
    deterministic = outputs[0] == outputs[1]
    mismatches = []
    checked = 0
    for G in (cyclic(2), cyclic(3), direct_product(cyclic(2), cyclic(2))):
        for M in (CoeffModule([2]), CoeffModule([4])):
            for _ in range(40):
                C = PointedCategory.build(G, M, random_cochain(G, M, 3, rng), checked=False)
                res = pentagon_check(C)
                ref = _reference_pentagon(C)
                checked += 1
                if (res.witness if not res.ok else None) != ref:
                    mismatches.append(("pentagon", res.witness, ref))
            C = PointedCategory.build(G, M, random_cocycle(G, M, 3, rng))
            if not G.is_abelian:
                continue
            for _ in range(20):
                c = random_cochain(G, M, 2, rng).values
                res = hexagon_check(PointedBraiding(C, c))
                ref = _reference_hexagon(C, c)
                checked += 1
                if ((res.witness, res.tag) if not res.ok else (None, None)) != ref:
                    mismatches.append(("hexagon", res.witness, res.tag, ref))
    for S in cached_systems(SAMPLE_SIZE, SAMPLE_SEED)[:60]:
        res = check_coherence(S)
        ref = _reference_coherence(S)
        checked += 1
        if (res.witness if not res.ok else None) != ref:
            mismatches.append(("coherence", res.witness, ref))
    ok = deterministic and not mismatches
    detail = f"CLI runs {'identical' if deterministic else 'differ'}, {checked} witnesses checked, {len(mismatches)} mismatches"
    if mismatches:
        detail += f" (first {mismatches[0]})"
    return ok, detail


CRITERIA = {
    1: ("pentagon iff 3-cocycle", criterion_1),
    2: ("cohomology solver vs oracle", criterion_2),
    3: ("obstruction is a cocycle", criterion_3),
    4: ("coherence iff product pentagon", criterion_4),
    5: ("build/extract round trip", criterion_5),
    6: ("braiding transfer bijection", criterion_6),
    7: ("functor correspondence", criterion_7),
    8: ("determinism and witness minimality", criterion_8),
}


def run_criterion(k: int):
    name, fn = CRITERIA[k]
    ok, detail = fn()
    line = f"criterion {k} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok, detail


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = run_criterion(k)
    assert ok, detail


if __name__ == "__main__":
    results = [run_criterion(k)[0] for k in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
