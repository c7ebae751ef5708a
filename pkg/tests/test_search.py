import pytest

from greencore.monoid import build_matrix_monoid, build_zn_monoid
from greencore.search import (
    InverseKind,
    default_k_max,
    dual_stage_witnesses,
    find_along,
    find_bc,
    find_bc_core,
    find_bc_core_ep,
    find_bc_one_sided,
    find_core,
    find_core_ep,
    find_drazin,
    find_dual_bc_core_ep,
    find_group,
    find_i13,
    find_i14,
    find_mp,
    find_w_core,
    find_w_core_ep,
    kind_from_token,
    stage_witnesses,
    unit_regular_check,
)


@pytest.fixture(scope="module")
def z8():
    return build_zn_monoid(8)


@pytest.fixture(scope="module")
def m22():
    return build_matrix_monoid(2, 2)


def test_staged_report_z8(z8):
    r = find_bc_core_ep(z8, 1, 1, 2, k_max=10)
    assert r.status == "exists"
    assert r.members == tuple(range(3, 11))
    assert r.index == 3
    assert r.inverse == 0
    assert r.searched_bound == 10
    assert r.kind is InverseKind.bc_core_ep


def test_staged_report_depends_on_b(z8):
    # same a and c, fatter b: the chain starts one stage earlier
    assert find_bc_core_ep(z8, 1, 2, 2, k_max=10).index == 2


def test_staged_negative_and_inconclusive(z8):
    assert find_bc_core_ep(z8, 1, 2, 3, k_max=10).status == "not_exists"
    # bound 2 is below the first admissible stage, so nothing is settled
    shallow = find_bc_core_ep(z8, 1, 1, 2, k_max=2)
    assert shallow.status == "not_determined"
    assert shallow.members == ()
    assert shallow.index is None


def test_stage_witnesses(z8):
    assert stage_witnesses(z8, 1, 1, 2, 3) == (0,)
    assert stage_witnesses(z8, 1, 1, 2, 2) == ()


def test_unity_is_its_own_staged_inverse(z8):
    r = find_bc_core_ep(z8, 1, 1, 1, k_max=2)
    assert r.members == (0, 1, 2)
    assert r.inverse == 1


def test_one_sided_shapes_collapse(z8):
    r = find_core_ep(z8, 2, k_max=10)
    assert (r.members[0], r.index, r.inverse) == (3, 3, 0)
    w = find_w_core_ep(z8, 2, 1, k_max=10)
    assert (w.members[0], w.inverse) == (2, 0)


def test_w_core_ep_of_zero(z8):
    r = find_w_core_ep(z8, 0, 1, k_max=6)
    assert r.members == tuple(range(7))
    assert r.index == 0
    assert r.inverse == 0


def test_dual_reports(z8):
    r = find_dual_bc_core_ep(z8, 1, 1, 2, k_max=10)
    assert (r.members[0], r.inverse) == (3, 0)
    assert dual_stage_witnesses(z8, 3, 1, 1, 0) == (3,)
    u = find_dual_bc_core_ep(z8, 1, 1, 1, k_max=0)
    assert u.members == (0,)
    assert u.inverse == 1


def test_moore_penrose(z8):
    assert find_mp(z8, 3).witness == 3
    r = find_mp(z8, 2)
    assert r.status == "not_exists"
    assert r.witness is None
    assert r.witnesses is None


def test_partial_isometries(z8):
    assert find_i13(z8, 3).witnesses == frozenset({3})
    assert find_i13(z8, 2).status == "not_exists"
    assert find_i14(z8, 3).witness == 3


def test_two_sided_bc(z8):
    assert find_bc(z8, 3, 1, 1).witness == 3
    assert find_bc(z8, 1, 1, 2).status == "not_exists"


def test_one_sided_bc(z8):
    assert find_bc_one_sided(z8, 3, 1, 1, "left").witnesses == frozenset({3})
    assert find_bc_one_sided(z8, 3, 1, 1, "right").witnesses == frozenset({3})
    assert find_bc_one_sided(z8, 1, 1, 2, "left").status == "not_exists"
    with pytest.raises(ValueError):
        find_bc_one_sided(z8, 3, 1, 1, "middle")


def test_weighted_core(z8):
    assert find_w_core(z8, 3, 1).witness == 3
    assert find_w_core(z8, 2, 1).status == "not_exists"
    assert find_core(z8, 3).witness == 3
    assert find_bc_core(z8, 3, 1, 1).witness == 3


def test_group_drazin_along(z8):
    assert find_group(z8, 3).witness == 3
    assert find_group(z8, 2).status == "not_exists"
    assert find_drazin(z8, 2).witness == 0
    assert find_along(z8, 3, 1).witness == 3
    assert find_along(z8, 2, 2).status == "not_exists"
    assert find_along(z8, 1, 1).witness == 1


def test_unit_regular_check(z8, m22):
    assert unit_regular_check(z8, 3, 1) is True
    with pytest.raises(ValueError, match="additive"):
        unit_regular_check(m22, 9, 9)
    # no w-core inverse: the claim has no subject
    with pytest.raises(ValueError, match="absent"):
        unit_regular_check(z8, 2, 1)


def test_noncommutative_chain_filter(m22):
    # raw stages above 0 carry a different witness and are filtered out
    r = find_bc_core_ep(m22, 9, 8, 2)
    assert r.members == (0,)
    assert r.index == 0
    assert r.inverse == 4
    assert r.searched_bound == 32


def test_kind_token_parsing(z8):
    assert kind_from_token("bc-core-ep") is InverseKind.bc_core_ep
    assert kind_from_token("moore_penrose") is InverseKind.moore_penrose
    with pytest.raises(ValueError):
        kind_from_token("frobnicate")
    assert default_k_max(z8) == 16
