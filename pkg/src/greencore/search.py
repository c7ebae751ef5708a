"""Brute-force search for generalized inverses over a finite *-monoid.

Every finder enumerates the carrier, so an "exists"/"not_exists" answer is a
proof at that order.  Staged kinds scan k = 0..k_max; their report keeps the
chain of stages sharing the witness found at the smallest admissible stage
(later stages can, rarely, switch to a different witness; the raw per-stage
view stays available through stage_witnesses).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class InverseKind(str, Enum):
    one_three = "one_three"
    one_four = "one_four"
    moore_penrose = "moore_penrose"
    group = "group"
    drazin = "drazin"
    along_d = "along_d"
    bc = "bc"
    bc_left = "bc_left"
    bc_right = "bc_right"
    w_core = "w_core"
    w_core_ep = "w_core_ep"
    bc_core = "bc_core"
    bc_core_ep = "bc_core_ep"
    dual_bc_core_ep = "dual_bc_core_ep"


def kind_from_token(token):
    try:
        return InverseKind(str(token).replace("-", "_"))
    except ValueError:
        raise ValueError(f"unknown inverse kind {token!r}") from None


@dataclass(frozen=True)
class InverseResult:
    kind: InverseKind
    status: str  # exists | not_exists
    witness: int | None = None
    witnesses: frozenset | None = None


@dataclass(frozen=True)
class IndexSetReport:
    kind: InverseKind
    searched_bound: int
    members: tuple
    index: int | None
    inverse: int | None
    status: str  # exists | not_exists | not_determined


def default_k_max(monoid):
    return 2 * monoid.order


# -- stage predicates ----------------------------------------------------

def _stage_scan(m, ca, q, h):
    """Witnesses x with ca.x.h = h, x R q, x L h*."""
    hst = m.star[h]
    rq = m.right_ideal(q)
    lh = m.left_ideal(hst)
    cay = m.cayley
    out = []
    for x in m.elements():
        if cay[cay[ca][x]][h] != h:
            continue
        if x not in rq or q not in m.right_ideal(x):
            continue
        if x not in lh or hst not in m.left_ideal(x):
            continue
        out.append(x)
    return tuple(out)


def _dual_stage_scan(m, ab, q, h):
    """Witnesses y with q.y.ab = q, y R q*, y L h."""
    qst = m.star[q]
    rq = m.right_ideal(qst)
    lh = m.left_ideal(h)
    cay = m.cayley
    out = []
    for y in m.elements():
        if cay[cay[q][y]][ab] != q:
            continue
        if y not in rq or qst not in m.right_ideal(y):
            continue
        if y not in lh or h not in m.left_ideal(y):
            continue
        out.append(y)
    return tuple(out)


def stage_witnesses(m, a, b, c, k, powk=None):
    """All stage-k witnesses for the (b,c) staged inverse of a."""
    ca = m.mul(c, a)
    if powk is None:
        powk = m.power(ca, k)
    return _stage_scan(m, ca, m.cayley[powk][b], m.cayley[powk][c])


def dual_stage_witnesses(m, a, b, c, k, powk=None):
    ca = m.mul(c, a)
    if powk is None:
        powk = m.power(ca, k)
    return _dual_stage_scan(m, m.cayley[a][b],
                            m.cayley[powk][b], m.cayley[powk][c])


def w_core_ep_stage_witnesses(m, a, w, k, powk=None):
    """All x with x.(aw)^{k+1}.a = (aw)^k.a, aw.x.x = x, (aw.x)* = aw.x."""
    aw = m.mul(a, w)
    if powk is None:
        powk = m.power(aw, k)
    pa = m.cayley[powk][a]
    target = m.cayley[aw][pa]
    out = []
    for x in m.elements():
        if m.cayley[x][target] != pa:
            continue
        if m.mul(aw, x, x) != x:
            continue
        awx = m.cayley[aw][x]
        if m.star[awx] != awx:
            continue
        out.append(x)
    return tuple(out)


# -- staged reports ------------------------------------------------------

def _chain_report(kind, stage_map, k_max, conclusive):
    if not stage_map:
        status = "not_exists" if conclusive else "not_determined"
        return IndexSetReport(kind, k_max, (), None, None, status)
    kmin = min(stage_map)
    x0 = stage_map[kmin]
    members = tuple(k for k in sorted(stage_map) if stage_map[k] == x0)
    return IndexSetReport(kind, k_max, members, kmin, x0, "exists")


def _staged_search(m, kind, k_max, seed_power, scan):
    """Walk powers of seed_power, collect first witness per stage.

    An empty scan is conclusive once the power sequence repeats within the
    bound: every stage predicate depends on k only through the k-th power.
    """
    stage_map = {}
    pows = []
    v = m.unity
    for k in range(k_max + 1):
        pows.append(v)
        ws = scan(v)
        if ws:
            stage_map[k] = ws[0]
        v = m.cayley[v][seed_power]
    conclusive = len(set(pows)) <= k_max
    return _chain_report(kind, stage_map, k_max, conclusive)


def find_bc_core_ep(m, a, b, c, k_max=None):
    if k_max is None:
        k_max = default_k_max(m)
    ca = m.mul(c, a)
    return _staged_search(
        m, InverseKind.bc_core_ep, k_max, ca,
        lambda powk: _stage_scan(m, ca, m.cayley[powk][b], m.cayley[powk][c]))


def find_core_ep(m, a, k_max=None):
    return find_bc_core_ep(m, a, m.unity, m.unity, k_max)


def find_dual_bc_core_ep(m, a, b, c, k_max=None):
    if k_max is None:
        k_max = default_k_max(m)
    ca = m.mul(c, a)
    ab = m.cayley[a][b]
    return _staged_search(
        m, InverseKind.dual_bc_core_ep, k_max, ca,
        lambda powk: _dual_stage_scan(m, ab,
                                      m.cayley[powk][b], m.cayley[powk][c]))


def find_w_core_ep(m, a, w, k_max=None):
    if k_max is None:
        k_max = default_k_max(m)
    aw = m.mul(a, w)
    # the two k-free conditions prune the carrier once up front
    base = [x for x in m.elements()
            if m.mul(aw, x, x) == x
            and m.star[m.cayley[aw][x]] == m.cayley[aw][x]]

    def scan(powk):
        pa = m.cayley[powk][a]
        target = m.cayley[aw][pa]
        return tuple(x for x in base if m.cayley[x][target] == pa)

    return _staged_search(m, InverseKind.w_core_ep, k_max, aw, scan)


# -- single-shot finders -------------------------------------------------

def _unique_result(kind, found):
    if not found:
        return InverseResult(kind, "not_exists")
    return InverseResult(kind, "exists", witness=found[0],
                         witnesses=frozenset(found))


def find_i13(m, a):
    found = [x for x in m.elements()
             if m.mul(a, x, a) == a
             and m.star[m.cayley[a][x]] == m.cayley[a][x]]
    return _unique_result(InverseKind.one_three, found)


def find_i14(m, a):
    found = [x for x in m.elements()
             if m.mul(a, x, a) == a
             and m.star[m.cayley[x][a]] == m.cayley[x][a]]
    return _unique_result(InverseKind.one_four, found)


def find_mp(m, a):
    found = []
    for x in m.elements():
        if m.mul(a, x, a) != a or m.mul(x, a, x) != x:
            continue
        ax = m.cayley[a][x]
        xa = m.cayley[x][a]
        if m.star[ax] == ax and m.star[xa] == xa:
            found.append(x)
    return _unique_result(InverseKind.moore_penrose, found)


def find_bc(m, a, b, c):
    """The (b,c)-inverse: y in bSy and ySc with y.a.b = b, c.a.y = c."""
    found = []
    for y in m.elements():
        if m.mul(y, a, b) != b or m.mul(c, a, y) != c:
            continue
        if not any(m.mul(b, s, y) == y for s in m.elements()):
            continue
        if not any(m.mul(y, s, c) == y for s in m.elements()):
            continue
        found.append(y)
    return _unique_result(InverseKind.bc, found)


def find_bc_one_sided(m, a, b, c, side):
    if side == "left":
        found = [x for x in m.left_ideal(c) if m.mul(x, a, b) == b]
        return _unique_result(InverseKind.bc_left, sorted(found))
    if side == "right":
        found = [x for x in m.right_ideal(b) if m.mul(c, a, x) == c]
        return _unique_result(InverseKind.bc_right, sorted(found))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def find_w_core(m, a, w):
    found = []
    aw = m.mul(a, w)
    for x in m.elements():
        if m.mul(x, aw, a) != a or m.mul(aw, x, x) != x:
            continue
        awx = m.cayley[aw][x]
        if m.star[awx] == awx:
            found.append(x)
    return _unique_result(InverseKind.w_core, found)


def find_core(m, a):
    return find_w_core(m, a, m.unity)


def find_bc_core(m, a, b, c):
    """Stage-0 case: c.a.x.c = c, x R b, x L c*."""
    ca = m.mul(c, a)
    found = _stage_scan(m, ca, b, c)
    return _unique_result(InverseKind.bc_core, list(found))


def find_group(m, a):
    found = [x for x in m.elements()
             if m.mul(a, x, a) == a and m.mul(x, a, x) == x
             and m.cayley[a][x] == m.cayley[x][a]]
    return _unique_result(InverseKind.group, found)


def find_drazin(m, a, k_max=None):
    if k_max is None:
        k_max = default_k_max(m)
    pows = [m.power(a, j) for j in range(k_max + 2)]
    found = []
    for x in m.elements():
        if m.cayley[a][x] != m.cayley[x][a] or m.mul(x, a, x) != x:
            continue
        if any(m.cayley[pows[j + 1]][x] == pows[j] for j in range(k_max + 1)):
            found.append(x)
    return _unique_result(InverseKind.drazin, found)


def find_along(m, a, d):
    """Inverse along d: b.a.d = d = d.a.b with b H-below d."""
    found = [x for x in m.elements()
             if m.mul(x, a, d) == d == m.mul(d, a, x)
             and m.green_leq(x, d, "H")]
    return _unique_result(InverseKind.along_d, found)


def unit_regular_check(m, a, w):
    """Check aw + 1 - a.g is a unit for every {1,3}-choice g, and the
    w-core witness is unit-regular.  Needs the additive (modulus) flag."""
    if m.modulus is None:
        raise ValueError("unit-regularity needs additive structure "
                         "(monoid has no modulus)")
    core = find_w_core(m, a, w)
    if core.status != "exists":
        raise ValueError("w-core inverse absent; unit-regularity claim "
                         "presumes it exists")
    x = core.witness
    n = m.modulus
    aw = m.mul(a, w)
    units = m.units()
    i13 = find_i13(m, a)
    for g in sorted(i13.witnesses or ()):
        u = (aw + 1 - m.cayley[a][g]) % n
        if u not in units:
            return False
    return any(m.mul(x, u, x) == x for u in units)
