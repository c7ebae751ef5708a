"""Acceptance battery.

Each test is one gate: frozen desk-scale reproductions first, then the
randomized and exhaustive structural suites.  Tolerances are pinned here
and nowhere else; a failure means the engine drifted from its contract.
"""
import time

import numpy as np
import pytest

import greencore.matrices as mx
from greencore.checks import (
    check_annihilator_theorem,
    check_direct_sum,
    check_green_to_cancellation,
    check_index_set_structure,
    check_minus_order,
    check_preorder_axioms,
    check_regular_equivalence,
    check_ring_difference_property,
    check_stage_criteria,
    check_unit_regularity,
    check_witness_regularity,
)
from greencore.monoid import build_matrix_monoid, build_zn_monoid
from greencore.search import find_bc_core_ep, stage_witnesses

RESIDUAL_TOL = 1e-10   # frozen matrix reproduction
AGREE_TOL = 1e-8       # formula agreement, per-stage drift, least squares
FAST_BUDGET = 1.0      # seconds, single-instance reproductions
LEDGER_BUDGET = 300.0  # seconds, exhaustive six-way ledger


def _shift3():
    a = np.eye(3)
    b = np.zeros((3, 3))
    b[2, 2] = 1.0
    c = np.zeros((3, 3))
    c[0, 1] = 1.0
    c[1, 2] = 1.0
    return a, b, c


def test_z8_chain_reproduction():
    t0 = time.perf_counter()
    z8 = build_zn_monoid(8)
    r = find_bc_core_ep(z8, 1, 1, 2, k_max=10)
    assert r.members == tuple(range(3, 11))
    assert r.index == 3
    assert r.inverse == 0
    assert find_bc_core_ep(z8, 1, 2, 2, k_max=10).index == 2
    elapsed = time.perf_counter() - t0
    assert elapsed < FAST_BUDGET
    print(f"PASS z8 chain: members 3..10, indices 3 and 2, {elapsed:.3f}s")


def test_shift_matrix_reproduction():
    t0 = time.perf_counter()
    a, b, c = _shift3()
    assert mx.bc_core_ep_index(a, b, c, k_max=3) == (1,)
    sol = mx.bc_core_ep(a, b, c)
    e21 = np.zeros((3, 3))
    e21[1, 0] = 1.0
    assert np.abs(sol.inverse - e21).max() <= RESIDUAL_TOL
    assert all(r <= RESIDUAL_TOL for r in sol.residuals.values())
    # the stage-1 derived pair is not a flat two-sided shape
    ca = c @ a
    with pytest.raises(mx.NotBCInvertibleError):
        mx.bc_inverse(a, ca @ b, ca @ c)
    elapsed = time.perf_counter() - t0
    assert elapsed < FAST_BUDGET
    print(f"PASS shift matrix: index {{1}}, X = E21, flat shape refused, "
          f"{elapsed:.3f}s")


def test_stage_equivalence_ledger():
    t0 = time.perf_counter()
    cases = 0
    for n in range(2, 13):
        c = check_stage_criteria(build_zn_monoid(n))
        assert c.passed, c.failures[:3]
        cases += c.quantified_over
    c = check_stage_criteria(build_matrix_monoid(2, 2))
    assert c.passed, c.failures[:3]
    cases += c.quantified_over
    elapsed = time.perf_counter() - t0
    assert elapsed < LEDGER_BUDGET
    print(f"PASS six-way ledger: {cases} (a,b,c,k) tuples, "
          f"0 counterexamples, {elapsed:.1f}s")


def test_factorization_formula_agreement():
    rng = np.random.default_rng(20260822)
    checked = 0
    for _ in range(200):
        s = int(rng.integers(0, 4))
        a, b, c = mx.random_core_ep_instance(4, index=s, rng=rng)
        ca = c @ a
        sd = mx.stage_data(a, b, c, s)
        q, h, m = sd["q"], sd["h"], sd["m"]
        p1 = np.linalg.matrix_power(ca, s + 1)
        cut_p = mx._cutoff(p1, np.linalg.norm(ca, 2) ** (s + 1), None)
        seeds = [None] + [rng.standard_normal((4, 4))
                          + 1j * rng.standard_normal((4, 4))
                          for _ in range(2)]
        for z in seeds:
            g13 = mx.one_three_inverse(h, z, tol=sd["cutoff_h"])
            j13 = mx.one_three_inverse(p1, z, tol=cut_p)
            k13 = mx.one_three_inverse(m, z, tol=sd["cutoff_m"])
            d = g13 @ ca
            gprod = h @ d @ q
            cut_g = mx._cutoff(
                gprod, np.linalg.norm(h, 2) * np.linalg.norm(d, 2)
                * np.linalg.norm(q, 2), None)
            dbc = mx.bc_inverse(d, q, h,
                                tol=max(sd["cutoff_q"], sd["cutoff_h"],
                                        cut_g))
            f1 = dbc @ g13
            f2 = dbc @ a @ j13
            f3 = q @ k13
            assert np.abs(f1 - f2).max() <= AGREE_TOL
            assert np.abs(f1 - f3).max() <= AGREE_TOL
            assert np.abs(f2 - f3).max() <= AGREE_TOL
            checked += 1
    print(f"PASS factorization formulas: {checked} realizations over 200 "
          f"instances agree entrywise within {AGREE_TOL:g}")


def test_witness_uniqueness():
    # exact side: no stage ever carries two witnesses
    z6 = build_zn_monoid(6)
    for a in z6.elements():
        for b in z6.elements():
            for c in z6.elements():
                for k in range(13):
                    assert len(stage_witnesses(z6, a, b, c, k)) <= 1
    for m in (build_zn_monoid(8), build_matrix_monoid(2, 2)):
        chk = check_index_set_structure(m)
        assert chk.passed, chk.failures[:3]
    # float side: solutions computed at different member stages coincide
    worst = 0.0
    for seed in range(10):
        a, b, c = mx.random_core_ep_instance(4, index=seed % 3, rng=seed)
        members = mx.bc_core_ep_index(a, b, c, k_max=5)
        xs = [mx.bc_core_ep(a, b, c, k=k, k_max=5).inverse
              for k in members]
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                worst = max(worst, float(np.abs(xs[i] - xs[j]).max()))
    assert worst <= AGREE_TOL
    print(f"PASS witness uniqueness: every stage carries at most one "
          f"witness; per-stage drift {worst:.2e}")


def test_index_set_upward_closure():
    bound = 16
    multi = 0
    for m in (build_zn_monoid(8), build_matrix_monoid(2, 2)):
        for a in m.elements():
            for b in m.elements():
                for c in m.elements():
                    r = find_bc_core_ep(m, a, b, c, bound)
                    if len(r.members) <= 1:
                        continue
                    multi += 1
                    assert r.members == tuple(
                        range(r.members[0], bound + 1))
                    # the (c,c)-shaped chain starts no later
                    rc = find_bc_core_ep(m, a, c, c, bound)
                    assert rc.status == "exists"
                    assert rc.index <= r.index
    assert multi > 0
    print(f"PASS index sets: {multi} multi-member reports upward-closed, "
          f"nested index never larger")


def test_constrained_least_squares():
    rng = np.random.default_rng(4404)
    worst_gap = np.inf
    worst_proj = 0.0
    for _ in range(50):
        s = int(rng.integers(0, 3))
        a, b, c = mx.random_core_ep_instance(4, index=s, rng=rng)
        ca = c @ a
        rhs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        sol = mx.bc_core_ep(a, b, c)
        x = sol.inverse @ rhs
        best = float(np.linalg.norm(ca @ x - rhs))
        qk = np.linalg.matrix_power(ca, sol.k) @ b
        broad = rng.standard_normal((4, 500)) \
            + 1j * rng.standard_normal((4, 500))
        local = x[:, None] + 1e-3 * (rng.standard_normal((4, 500))
                                     + 1j * rng.standard_normal((4, 500)))
        cands = np.hstack([qk @ broad,
                           qk @ (np.linalg.pinv(qk) @ local)])
        res = np.linalg.norm(ca @ cands - rhs[:, None], axis=0)
        worst_gap = min(worst_gap, float(res.min() - best))
        worst_proj = max(worst_proj, float(
            np.linalg.norm(ca @ x - sol.projector @ rhs)))
    assert worst_gap >= -AGREE_TOL
    assert worst_proj <= AGREE_TOL
    print(f"PASS least squares: 50 instances x 1000 feasible candidates, "
          f"never beaten beyond {AGREE_TOL:g}; projection residual "
          f"{worst_proj:.2e}")


def test_direct_sum_decomposition():
    cases = 0
    for n in range(2, 13):
        c = check_direct_sum(build_zn_monoid(n))
        assert c.applicable
        assert c.passed, c.failures[:3]
        cases += c.quantified_over
    print(f"PASS direct sums: {cases} decompositions span with trivial "
          f"intersection exactly on admissible stages")


def test_relation_property_suites():
    suites = (
        check_preorder_axioms,
        check_green_to_cancellation,
        check_regular_equivalence,
        check_annihilator_theorem,
        check_minus_order,
        check_ring_difference_property,
        check_witness_regularity,
        check_unit_regularity,
    )
    cases = 0
    for n in range(2, 13):
        m = build_zn_monoid(n)
        for fn in suites:
            c = fn(m)
            assert c.applicable
            assert c.passed, (c.id, c.failures[:3])
            cases += c.quantified_over
    print(f"PASS property suites: {len(suites)} suites x 11 rings, "
          f"{cases} cases, all green")
