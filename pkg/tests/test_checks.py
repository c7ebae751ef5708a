import pytest

from greencore.checks import (
    ALL_CHECKS,
    DEFAULT_UNIVERSES,
    TheoremCheck,
    check_direct_sum,
    check_index_set_structure,
    check_ring_difference_property,
    check_stage_criteria,
    check_unit_regularity,
    checks_to_jsonable,
    ledger_table,
    run_all,
)
from greencore.monoid import build_matrix_monoid, build_zn_monoid


@pytest.fixture(scope="module")
def z6_checks():
    return run_all(["zn:6"])


def test_battery_shape(z6_checks):
    assert len(z6_checks) == len(ALL_CHECKS) == 16
    assert len({c.id for c in z6_checks}) == 16
    assert all(c.universe == "zn:6" for c in z6_checks)


def test_battery_green_on_z6(z6_checks):
    bad = [c.id for c in z6_checks if not c.passed]
    assert bad == []
    assert all(c.quantified_over > 0 for c in z6_checks)


def test_passed_semantics():
    c = TheoremCheck(id="x", universe="u", quantified_over=3)
    assert c.passed
    c.failures.append(("case",))
    assert not c.passed
    d = TheoremCheck(id="y", universe="u", quantified_over=0,
                     applicable=False)
    assert not d.passed


def test_ring_only_checks_marked_inapplicable():
    m = build_matrix_monoid(2, 2)
    c = check_ring_difference_property(m)
    assert not c.applicable
    assert c.quantified_over == 0
    d = check_direct_sum(m)
    assert not d.applicable
    u = check_unit_regularity(m)
    assert not u.applicable


def test_stage_criteria_full_enumeration():
    m = build_zn_monoid(8)
    c = check_stage_criteria(m)
    assert c.passed
    # all (a,b,c) triples at every stage up to the default bound
    assert c.quantified_over == 8 ** 3 * 17


def test_index_structure_matrix_universe():
    c = check_index_set_structure(build_matrix_monoid(2, 2))
    assert c.passed
    # all triples plus the (a, w) chain sweep
    assert c.quantified_over == 16 ** 3 + 16 ** 2


def test_ledger_table_shape(z6_checks):
    text = ledger_table(z6_checks)
    lines = text.splitlines()
    assert len(lines) == 2 + len(z6_checks)
    assert "check" in lines[0] and "status" in lines[0]
    assert all(line.rstrip().endswith("ok") for line in lines[2:])


def test_ledger_table_marks_failures_and_na():
    rows = [
        TheoremCheck(id="a", universe="u", quantified_over=1,
                     failures=[("bad", 1)]),
        TheoremCheck(id="b", universe="u", quantified_over=0,
                     applicable=False),
    ]
    text = ledger_table(rows)
    assert "FAIL (1)" in text
    assert "n/a" in text


def test_jsonable(z6_checks):
    docs = checks_to_jsonable(z6_checks)
    assert len(docs) == len(z6_checks)
    for doc in docs:
        assert doc["passed"] is True
        assert doc["failures"] == []
    long = TheoremCheck(id="a", universe="u", quantified_over=1,
                        failures=[("f", i) for i in range(80)])
    assert len(checks_to_jsonable([long])[0]["failures"]) == 50


def test_default_universe_list():
    assert DEFAULT_UNIVERSES[0] == "zn:2"
    assert DEFAULT_UNIVERSES[-1] == "mat:2:2"
    assert len(DEFAULT_UNIVERSES) == 12


def test_monoid_instances_accepted_directly():
    checks = run_all([build_zn_monoid(5)], k_max=6)
    assert all(c.passed or not c.applicable for c in checks)
    assert {c.universe for c in checks} == {"zn:5"}
