"""Exhaustive validation of the toolkit's claims over exact finite universes.

Each check quantifies one claim over a whole carrier (or a seeded sample of
triples when asked) and records counterexamples verbatim.  A green ledger
over the default universes is the package's correctness certificate.  The
battery targets desk scale; carriers beyond a few hundred elements should be
run with an explicit sample and a small stage bound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import search as gs
from .monoid import parse_universe

DEFAULT_UNIVERSES = tuple(f"zn:{n}" for n in range(2, 13)) + ("mat:2:2",)

FULL_ENUMERATION_ORDER = 16
DEFAULT_SAMPLE = 400


@dataclass
class TheoremCheck:
    id: str
    universe: str
    quantified_over: int
    failures: list = field(default_factory=list)
    applicable: bool = True

    @property
    def passed(self):
        return self.applicable and not self.failures


def _label(m):
    return m.label or f"order:{m.order}"


def _pairs(m, sample, seed):
    n = m.order
    if sample is None or n * n <= sample:
        return list(itertools.product(range(n), repeat=2))
    rng = np.random.default_rng(seed)
    return [tuple(int(v) for v in row)
            for row in rng.integers(0, n, size=(sample, 2))]


def _triples(m, sample, seed):
    n = m.order
    if sample is None or n ** 3 <= sample:
        return list(itertools.product(range(n), repeat=3))
    rng = np.random.default_rng(seed)
    return [tuple(int(v) for v in row)
            for row in rng.integers(0, n, size=(sample, 3))]


class _StageCache:
    """Shared memo for a battery pass; stage scans depend on (ca, q, h)."""

    def __init__(self, m, k_max):
        self.m = m
        self.k_max = k_max
        self._stage = {}
        self._pow = {}
        self._s13 = {}

    def powers(self, g):
        try:
            return self._pow[g]
        except KeyError:
            m = self.m
            out = [m.unity]
            for _ in range(self.k_max + 1):
                out.append(m.cayley[out[-1]][g])
            self._pow[g] = out
            return out

    def witnesses(self, ca, q, h):
        key = (ca, q, h)
        try:
            return self._stage[key]
        except KeyError:
            ws = gs._stage_scan(self.m, ca, q, h)
            self._stage[key] = ws
            return ws

    def raw_map(self, a, b, c):
        """k -> witness tuple, over every stage up to the bound."""
        m = self.m
        ca = m.mul(c, a)
        pows = self.powers(ca)
        out = {}
        for k in range(self.k_max + 1):
            p = pows[k]
            ws = self.witnesses(ca, m.cayley[p][b], m.cayley[p][c])
            if ws:
                out[k] = ws
        return out

    def s13(self, e):
        try:
            return self._s13[e]
        except KeyError:
            m = self.m
            out = tuple(y for y in m.elements()
                        if m.mul(e, y, e) == e
                        and m.star[m.cayley[e][y]] == m.cayley[e][y])
            self._s13[e] = out
            return out


# -- relation-level checks ----------------------------------------------

def _leq_matrix(m, kind):
    n = m.order
    fn = m.green_leq if kind in ("L", "R", "H") else m.ext_leq
    return np.array([[fn(a, b, kind) for b in range(n)] for a in range(n)])


def check_preorder_axioms(m):
    """All six comparison relations are reflexive and transitive."""
    chk = TheoremCheck("preorder-axioms", _label(m), 0)
    n = m.order
    for kind in ("L", "R", "H", "L0", "R0", "H0"):
        leq = _leq_matrix(m, kind)
        chk.quantified_over += n + n ** 3
        for a in range(n):
            if not leq[a][a]:
                chk.failures.append(("not-reflexive", kind, a))
        closure = leq @ leq
        for a, c in np.argwhere(closure & ~leq):
            chk.failures.append(("not-transitive", kind, int(a), int(c)))
    return chk


def check_green_to_cancellation(m):
    """Ideal comparisons imply the cancellation comparisons, crosswise."""
    chk = TheoremCheck("green-implies-cancellation", _label(m), 0)
    mats = {k: _leq_matrix(m, k)
            for k in ("L", "R", "H", "L0", "R0", "H0")}
    for src, dst in (("R", "L0"), ("L", "R0"), ("H", "H0")):
        chk.quantified_over += 2 * m.order ** 2
        for a, b in np.argwhere(mats[src] & ~mats[dst]):
            chk.failures.append(("leq", src, dst, int(a), int(b)))
        rel_src = mats[src] & mats[src].T
        rel_dst = mats[dst] & mats[dst].T
        for a, b in np.argwhere(rel_src & ~rel_dst):
            chk.failures.append(("rel", src, dst, int(a), int(b)))
    return chk


def check_regular_equivalence(m):
    """Against a regular right-hand side the crossed preorders coincide."""
    chk = TheoremCheck("regular-element-collapse", _label(m), 0)
    for b in m.elements():
        if not m.is_regular(b):
            continue
        for a in m.elements():
            chk.quantified_over += 1
            if m.green_leq(a, b, "R") != m.ext_leq(a, b, "L0"):
                chk.failures.append(("R-vs-L0", a, b))
            if m.green_leq(a, b, "L") != m.ext_leq(a, b, "R0"):
                chk.failures.append(("L-vs-R0", a, b))
    return chk


def check_annihilator_theorem(m):
    """Cancellation order == reverse containment of annihilator pair sets."""
    chk = TheoremCheck("annihilator-containment", _label(m), 0)
    rpairs = [set(m.right_annihilator_pairs(a)) for a in m.elements()]
    lpairs = [set(m.left_annihilator_pairs(a)) for a in m.elements()]
    for a in m.elements():
        for b in m.elements():
            chk.quantified_over += 1
            if m.ext_leq(a, b, "R0") != (rpairs[b] <= rpairs[a]):
                chk.failures.append(("right", a, b))
            if m.ext_leq(a, b, "L0") != (lpairs[b] <= lpairs[a]):
                chk.failures.append(("left", a, b))
            if m.annihilator_contained(a, b, "right") != \
                    (rpairs[b] <= rpairs[a]):
                chk.failures.append(("right-api", a, b))
    return chk


def check_minus_order(m):
    """On idempotents the minus order is the H0 order, split by sides."""
    chk = TheoremCheck("minus-order-idempotents", _label(m), 0)
    idem = sorted(m.idempotents())
    for e in idem:
        for f in idem:
            chk.quantified_over += 1
            if m.minus_leq(e, f) != m.ext_leq(e, f, "H0"):
                chk.failures.append(("minus-vs-H0", e, f))
            if (m.cayley[e][f] == e) != m.ext_leq(e, f, "R0"):
                chk.failures.append(("ef-vs-R0", e, f))
            if (m.cayley[f][e] == e) != m.ext_leq(e, f, "L0"):
                chk.failures.append(("fe-vs-L0", e, f))
    return chk


def check_ring_difference_property(m):
    """Shifting a by -b leaves its cancellation order against b unchanged."""
    chk = TheoremCheck("difference-shift-invariance", _label(m), 0)
    if m.modulus is None:
        chk.applicable = False
        return chk
    n = m.modulus
    for a in m.elements():
        for b in m.elements():
            chk.quantified_over += 1
            d = (a - b) % n
            for kind in ("L0", "R0", "H0"):
                if m.ext_leq(a, b, kind) != m.ext_leq(d, b, kind):
                    chk.failures.append((kind, a, b))
    return chk


# -- stage-level checks --------------------------------------------------

def _six_stage_criteria(m, ca, q, h):
    """Truth values of the six equivalent shapes of the stage predicate."""
    hst = m.star[h]
    mm = m.cayley[ca][q]
    rq = m.right_ideal(q)
    lh = m.left_ideal(hst)
    cay = m.cayley
    f = [False] * 6
    for x in m.elements():
        if cay[cay[ca][x]][h] != h:
            continue
        in_qs = x in rq
        rel_r = in_qs and q in m.right_ideal(x)
        cax = cay[ca][x]
        sym = m.star[cax] == cax
        hits_q = cay[x][mm] == q
        if rel_r and x in lh and hst in m.left_ideal(x):
            f[0] = True
        if in_qs and hits_q and sym:
            f[2] = True
            if m.mul(x, ca, x) == x:
                f[1] = True
        if in_qs and m.ext_leq(q, x, "L0") and m.ext_leq(x, hst, "R0"):
            f[3] = True
        if rel_r and x in lh:
            f[4] = True
        if rel_r and m.ext_rel(x, hst, "R0"):
            f[5] = True
        if all(f):
            break
    return tuple(f)


def check_stage_criteria(m, k_max=None, sample=None, seed=0):
    """The six stage-predicate shapes agree at every (a, b, c, k)."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("stage-criteria-agreement", _label(m), 0)
    cache = _StageCache(m, k_max)
    memo = {}
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            key = (ca, m.cayley[p][b], m.cayley[p][c])
            chk.quantified_over += 1
            try:
                six = memo[key]
            except KeyError:
                six = memo[key] = _six_stage_criteria(m, *key)
            if len(set(six)) != 1:
                chk.failures.append((a, b, c, k, six))
    return chk


def check_index_set_structure(m, k_max=None, sample=None, seed=0):
    """Stage witnesses are unique, reports are chains reaching the bound
    unless singletons, and a multi-stage report forces a nonempty nested
    (c, c) report with a smaller or equal index."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("index-chain-structure", _label(m), 0)
    cache = _StageCache(m, k_max)
    nested = {}
    for a, b, c in _triples(m, sample, seed):
        chk.quantified_over += 1
        raw = cache.raw_map(a, b, c)
        for k, ws in raw.items():
            if len(ws) > 1:
                chk.failures.append(("stage-multiplicity", a, b, c, k, ws))
        rep = gs.find_bc_core_ep(m, a, b, c, k_max)
        if rep.status != "exists":
            if raw:
                chk.failures.append(("report-misses-stages", a, b, c))
            continue
        mem = rep.members
        if min(raw) != mem[0] or raw[mem[0]][0] != rep.inverse:
            chk.failures.append(("report-disagrees-with-stages", a, b, c))
        if list(mem) != list(range(mem[0], mem[-1] + 1)):
            chk.failures.append(("gap-in-members", a, b, c, mem))
        if len(mem) > 1 and mem[-1] != rep.searched_bound:
            chk.failures.append(("chain-stops-early", a, b, c, mem))
        if len(mem) > 1:
            key = (a, c)
            if key not in nested:
                nested[key] = gs.find_bc_core_ep(m, a, c, c, k_max)
            nrep = nested[key]
            if nrep.status != "exists":
                chk.failures.append(("nested-report-empty", a, b, c))
            elif nrep.index > rep.index:
                chk.failures.append(
                    ("nested-index-above", a, b, c, nrep.index, rep.index))
    # staged w-shaped reports: always one chain carrying one witness
    for a, w in _pairs(m, sample, seed):
        chk.quantified_over += 1
        aw = m.mul(a, w)
        pows = cache.powers(aw)
        seen = {}
        for k in range(k_max + 1):
            ws = gs.w_core_ep_stage_witnesses(m, a, w, k, pows[k])
            if len(ws) > 1:
                chk.failures.append(("w-stage-multiplicity", a, w, k, ws))
            if ws:
                seen[k] = ws[0]
        if seen:
            ks = sorted(seen)
            if len(set(seen.values())) != 1:
                chk.failures.append(("w-witness-drift", a, w, seen))
            if ks != list(range(ks[0], k_max + 1)):
                chk.failures.append(("w-chain-gap", a, w, ks))
    return chk


def _bc_invertible(m, al, b, c):
    w = m.mul(c, al, b)
    return b in m.left_ideal(w) and c in m.right_ideal(w)


def _bc_witness(m, al, b, c):
    """The (b, c)-inverse of al via the two-sided factor construction."""
    w = m.mul(c, al, b)
    for u in m.elements():
        if m.cayley[w][u] == c:
            return m.cayley[b][u]
    return None


def _factorization_at(m, cache, a, ca, p, q, h):
    admissible = bool(cache.witnesses(ca, q, h))
    mm = m.cayley[ca][q]
    pk1 = m.cayley[ca][p]
    s13_h = cache.s13(h)
    verdicts = {_bc_invertible(m, m.cayley[g][ca], q, h) for g in s13_h}
    if len(verdicts) > 1:
        return ("displaced-choice-disagreement",)
    d_inv = bool(verdicts) and verdicts.pop()
    crit = (bool(s13_h) and d_inv,
            bool(cache.s13(pk1)) and d_inv,
            bool(cache.s13(mm)) and d_inv)
    if any(cv != admissible for cv in crit):
        return ("criterion-mismatch", admissible) + crit
    if not admissible:
        return ()
    x = cache.witnesses(ca, q, h)[0]
    for jm in cache.s13(mm):
        if m.cayley[q][jm] != x:
            return ("power-column-formula", jm)
    for g in s13_h:
        d = m.cayley[g][ca]
        z = _bc_witness(m, d, q, h)
        if z is None:
            return ("displaced-inverse-missing", g)
        if m.cayley[z][g] != x:
            return ("row-factor-formula", g)
        for j in cache.s13(pk1):
            if m.mul(z, a, j) != x:
                return ("power-factor-formula", g, j)
    return ()


def _core_case_formulas(m, cache, chk, a, b, c):
    """Stage-0 core case: the four-way criterion and its three formulas."""
    chk.quantified_over += 1
    ca = m.mul(c, a)
    x_set = cache.witnesses(ca, b, c)
    core = bool(x_set)
    bc_inv = _bc_invertible(m, a, b, c)
    w0 = m.mul(c, a, b)
    forms = (bc_inv and bool(cache.s13(c)),
             bc_inv and bool(cache.s13(ca)),
             bc_inv and bool(cache.s13(w0)))
    if any(fm != core for fm in forms):
        chk.failures.append(("core-criterion", a, b, c, core, forms))
        return
    if not core:
        return
    x0 = x_set[0]
    y = _bc_witness(m, a, b, c)
    if y is None:
        chk.failures.append(("core-bc-witness-missing", a, b, c))
        return
    for g in cache.s13(c):
        if m.cayley[y][g] != x0:
            chk.failures.append(("core-formula-row", a, b, c, g))
    for g in cache.s13(ca):
        if m.mul(y, a, g) != x0:
            chk.failures.append(("core-formula-product", a, b, c, g))
    for g in cache.s13(w0):
        if m.cayley[b][g] != x0:
            chk.failures.append(("core-formula-sandwich", a, b, c, g))


def check_factorization_criteria(m, k_max=None, sample=None, seed=0):
    """{1,3}-factor criteria match stage admissibility and every closed
    formula built from any {1,3}-choice reproduces the stage witness."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("factorization-formulas", _label(m), 0)
    cache = _StageCache(m, k_max)
    memo = {}
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            q, h = m.cayley[p][b], m.cayley[p][c]
            key = (a, ca, p, q, h)
            chk.quantified_over += 1
            try:
                fail = memo[key]
            except KeyError:
                fail = memo[key] = _factorization_at(m, cache, a, ca, p, q, h)
            if fail:
                chk.failures.append((a, b, c, k) + fail)
        _core_case_formulas(m, cache, chk, a, b, c)
    return chk


def _outer_at(m, cache, ca, q, h):
    hst = m.star[h]
    found = [x for x in m.elements()
             if m.mul(x, ca, x) == x
             and m.green_rel(x, q, "R") and m.green_rel(x, hst, "L")]
    admissible = cache.witnesses(ca, q, h)
    if bool(found) != bool(admissible):
        return ("existence-mismatch", bool(found), bool(admissible))
    if not admissible:
        return ()
    x = admissible[0]
    if found != [x]:
        return ("outer-witness-set", tuple(found), x)
    if m.mul(x, ca, q) != q or m.mul(hst, ca, x) != hst:
        return ("pair-inverse-products",)
    if not any(m.mul(q, s, x) == x for s in m.elements()):
        return ("pair-inverse-left-reach",)
    if not any(m.mul(x, s, hst) == x for s in m.elements()):
        return ("pair-inverse-right-reach",)
    return ()


def check_outer_inverse_correspondence(m, k_max=None, sample=None, seed=0):
    """Stage admissibility == existence of an outer inverse of ca with the
    prescribed column and row ideals; the witness is its pair inverse."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("outer-inverse-correspondence", _label(m), 0)
    cache = _StageCache(m, k_max)
    memo = {}
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            q, h = m.cayley[p][b], m.cayley[p][c]
            key = (ca, q, h)
            chk.quantified_over += 1
            try:
                fail = memo[key]
            except KeyError:
                fail = memo[key] = _outer_at(m, cache, ca, q, h)
            if fail:
                chk.failures.append((a, b, c, k) + fail)
    return chk


def check_membership_intersection(m, k_max=None, sample=None, seed=0):
    """Stage admissibility == the two crossed ideal memberships."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("membership-intersection", _label(m), 0)
    cache = _StageCache(m, k_max)
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            q, h = m.cayley[p][b], m.cayley[p][c]
            chk.quantified_over += 1
            hst = m.star[h]
            w = m.mul(hst, m.cayley[ca][q])
            pred = q in m.left_ideal(w) and hst in m.right_ideal(w)
            if pred != bool(cache.witnesses(ca, q, h)):
                chk.failures.append((a, b, c, k))
    return chk


def _one_sided_at(m, cache, ab, ca, q, h):
    mm = m.cayley[ca][q]
    left_part = q in m.left_ideal(mm)
    reach = False
    for r in m.elements():
        hy = m.cayley[h][m.cayley[ab][r]]
        if m.cayley[hy][h] == h and m.star[hy] == hy:
            reach = True
            break
    if (left_part and reach) != bool(cache.witnesses(ca, q, h)):
        return ("mismatch", left_part, reach)
    return ()


def _one_sided_core_case(m, cache, chk, a, b, c):
    chk.quantified_over += 1
    ca = m.mul(c, a)
    x_set = cache.witnesses(ca, b, c)
    core = bool(x_set)
    ab = m.cayley[a][b]
    lefts = [x for x in m.left_ideal(c) if m.mul(x, a, b) == b]
    reach = False
    for s in m.elements():
        cy = m.cayley[c][m.cayley[ab][s]]
        if m.cayley[cy][c] == c and m.star[cy] == cy:
            reach = True
            break
    if (bool(lefts) and reach) != core:
        chk.failures.append(("core-case", a, b, c, bool(lefts), reach))
        return
    if not core:
        return
    x0 = x_set[0]
    for xl in lefts:
        for g in cache.s13(c):
            if m.cayley[xl][g] != x0:
                chk.failures.append(("left-choice-formula", a, b, c, xl, g))
    w0st = m.star[m.mul(c, a, b)]
    for r in m.elements():
        if m.mul(r, w0st, c) == c and m.cayley[b][m.star[r]] != x0:
            chk.failures.append(("star-factor-formula", a, b, c, r))


def check_one_sided_criterion(m, k_max=None, sample=None, seed=0):
    """One-sided reduction: admissibility == a left ideal membership plus a
    {1,3}-inverse of the row generator reachable through ab; plus its
    stage-0 corollary."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("one-sided-criterion", _label(m), 0)
    cache = _StageCache(m, k_max)
    memo = {}
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        ab = m.cayley[a][b]
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            q, h = m.cayley[p][b], m.cayley[p][c]
            key = (ab, ca, q, h)
            chk.quantified_over += 1
            try:
                fail = memo[key]
            except KeyError:
                fail = memo[key] = _one_sided_at(m, cache, ab, ca, q, h)
            if fail:
                chk.failures.append((a, b, c, k) + fail)
        _one_sided_core_case(m, cache, chk, a, b, c)
    return chk


def check_specializations(m, k_max=None, sample=None, seed=0):
    """Unity and w-shaped instances collapse to the classical inverses."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("specialization-consistency", _label(m), 0)
    cache = _StageCache(m, k_max)
    u = m.unity
    for a in m.elements():
        chk.quantified_over += 1
        core = gs.find_core(m, a)
        s0_unity = cache.witnesses(m.mul(a, u), a, a)
        if (core.status == "exists") != bool(s0_unity):
            chk.failures.append(("core-vs-unity-stage0", a))
        elif s0_unity and core.witness != s0_unity[0]:
            chk.failures.append(("core-unity-witness", a))
        raw_self = cache.raw_map(a, a, a)
        if (core.status == "exists") != (0 in raw_self):
            chk.failures.append(("core-vs-self-stage0", a))
        elif 0 in raw_self and core.witness != m.cayley[a][raw_self[0][0]]:
            chk.failures.append(("core-self-witness", a))
        pows_a = cache.powers(a)
        gao = [x for x in m.elements()
               if m.mul(a, x, x) == x
               and m.star[m.cayley[a][x]] == m.cayley[a][x]
               and any(m.cayley[x][pows_a[j + 1]] == pows_a[j]
                       for j in range(1, k_max + 1))]
        rep = gs.find_core_ep(m, a, k_max)
        if bool(gao) != (rep.status == "exists"):
            chk.failures.append(("classical-vs-staged", a))
        elif gao and (len(set(gao)) != 1 or gao[0] != rep.inverse):
            chk.failures.append(("classical-witness", a, tuple(set(gao))))
    for a, w in _pairs(m, sample, seed):
        chk.quantified_over += 1
        aw = m.mul(a, w)
        pows = cache.powers(aw)
        wc = gs.find_w_core(m, a, w)
        stage0 = gs.w_core_ep_stage_witnesses(m, a, w, 0, pows[0])
        if (wc.status == "exists") != bool(stage0):
            chk.failures.append(("w-core-vs-stage0", a, w))
        elif stage0 and wc.witness != stage0[0]:
            chk.failures.append(("w-core-witness", a, w))
        raw_w = {}
        for k in range(k_max + 1):
            ws = gs.w_core_ep_stage_witnesses(m, a, w, k, pows[k])
            if ws:
                raw_w[k] = ws
        raw_pair = cache.raw_map(w, a, a)
        if set(raw_w) != set(raw_pair):
            chk.failures.append(("w-index-sets-differ", a, w))
            continue
        for k in raw_w:
            if raw_w[k] != raw_pair[k]:
                chk.failures.append(("w-witness-differs", a, w, k))
            pa = m.cayley[pows[k]][a]
            ppcore = gs.find_bc_core(m, w, pa, pa)
            if ppcore.status != "exists":
                chk.failures.append(("w-vs-projected-core", a, w, k))
            elif k == 0 and ppcore.witness != raw_w[k][0]:
                chk.failures.append(("projected-core-witness", a, w))
    return chk


def _regularity_at(m, cache, ca, q, h):
    ws = cache.witnesses(ca, q, h)
    if not ws:
        return ()
    x = ws[0]
    # x.ca.x = x with (ca.x)* = ca.x makes ca a {1,4}-inverse of x
    if m.mul(x, ca, x) != x:
        return ("outer-identity",)
    cax = m.cayley[ca][x]
    if m.star[cax] != cax:
        return ("product-not-hermitian",)
    if not m.is_regular(x):
        return ("witness-not-regular",)
    if not m.is_regular(q):
        return ("column-generator-not-regular",)
    if not m.is_regular(h):
        return ("row-generator-not-regular",)
    return ()


def check_witness_regularity(m, k_max=None, sample=None, seed=0):
    """At every admissible stage ca is a {1,4}-inverse of the witness and
    the derived elements are regular."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("witness-regularity", _label(m), 0)
    cache = _StageCache(m, k_max)
    memo = {}
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            q, h = m.cayley[p][b], m.cayley[p][c]
            key = (ca, q, h)
            chk.quantified_over += 1
            try:
                fail = memo[key]
            except KeyError:
                fail = memo[key] = _regularity_at(m, cache, ca, q, h)
            if fail:
                chk.failures.append((a, b, c, k) + fail)
    return chk


def check_unit_regularity(m, sample=None, seed=0):
    """Whenever the w-shaped core inverse exists, the displaced element is a
    unit for every {1,3}-choice and the witness is unit-regular."""
    chk = TheoremCheck("unit-regular-core-witness", _label(m), 0)
    if m.modulus is None:
        chk.applicable = False
        return chk
    for a, w in _pairs(m, sample, seed):
        if gs.find_w_core(m, a, w).status != "exists":
            continue
        chk.quantified_over += 1
        if not gs.unit_regular_check(m, a, w):
            chk.failures.append((a, w))
    return chk


def _direct_sum_at(m, cache, n, full, ca, q, h):
    admissible = bool(cache.witnesses(ca, q, h))
    hst = m.star[h]
    mm = m.cayley[ca][q]
    right_part = m.right_ideal(mm)
    right_ann = m.ring_right_annihilator(hst)
    left_part = m.left_ideal(m.mul(hst, ca))
    left_ann = m.ring_left_annihilator(q)

    def spans(u, v):
        return frozenset((x + y) % n for x in u for y in v) == full

    def direct(u, v):
        return spans(u, v) and (u & v) == frozenset({0})

    cond_direct = direct(right_part, right_ann) and direct(left_part, left_ann)
    cond_span = spans(right_part, right_ann) and spans(left_part, left_ann)
    if cond_direct != admissible or cond_span != admissible:
        return ("mismatch", admissible, cond_direct, cond_span)
    return ()


def check_direct_sum(m, k_max=None, sample=None, seed=0):
    """Stage admissibility == the two-sided direct-sum splittings of the
    carrier; the plain sums already characterize it."""
    if k_max is None:
        k_max = gs.default_k_max(m)
    chk = TheoremCheck("direct-sum-decomposition", _label(m), 0)
    if m.modulus is None:
        chk.applicable = False
        return chk
    n = m.modulus
    cache = _StageCache(m, k_max)
    full = frozenset(m.elements())
    memo = {}
    for a, b, c in _triples(m, sample, seed):
        ca = m.mul(c, a)
        pows = cache.powers(ca)
        for k in range(k_max + 1):
            p = pows[k]
            q, h = m.cayley[p][b], m.cayley[p][c]
            key = (ca, q, h)
            chk.quantified_over += 1
            try:
                fail = memo[key]
            except KeyError:
                fail = memo[key] = _direct_sum_at(m, cache, n, full, ca, q, h)
            if fail:
                chk.failures.append((a, b, c, k) + fail)
    return chk


# -- orchestration -------------------------------------------------------

_RELATION_CHECKS = (
    check_preorder_axioms,
    check_green_to_cancellation,
    check_regular_equivalence,
    check_annihilator_theorem,
    check_minus_order,
    check_ring_difference_property,
)

_STAGE_CHECKS = (
    check_stage_criteria,
    check_index_set_structure,
    check_factorization_criteria,
    check_outer_inverse_correspondence,
    check_membership_intersection,
    check_one_sided_criterion,
    check_specializations,
    check_witness_regularity,
    check_direct_sum,
)

ALL_CHECKS = _RELATION_CHECKS + _STAGE_CHECKS + (check_unit_regularity,)


def run_all(universes=None, k_max=None, seed=0, sample=None):
    """Run the whole battery; one TheoremCheck per (check, universe)."""
    out = []
    for token in universes or DEFAULT_UNIVERSES:
        m = parse_universe(token) if isinstance(token, str) else token
        big = m.order > FULL_ENUMERATION_ORDER
        u_sample = sample if sample is not None else \
            (DEFAULT_SAMPLE if big else None)
        u_kmax = k_max if k_max is not None else \
            (16 if big else gs.default_k_max(m))
        for fn in _RELATION_CHECKS:
            out.append(fn(m))
        for fn in _STAGE_CHECKS:
            out.append(fn(m, k_max=u_kmax, sample=u_sample, seed=seed))
        out.append(check_unit_regularity(m, sample=u_sample, seed=seed))
    return out


def ledger_table(checks):
    wid = max((len(c.id) for c in checks), default=10)
    wu = max((len(c.universe) for c in checks), default=8)
    header = f"{'check':<{wid}}  {'universe':<{wu}}  {'cases':>9}  status"
    lines = [header, "-" * len(header)]
    for c in checks:
        if not c.applicable:
            status = "n/a"
        elif c.failures:
            status = f"FAIL ({len(c.failures)})"
        else:
            status = "ok"
        lines.append(f"{c.id:<{wid}}  {c.universe:<{wu}}  "
                     f"{c.quantified_over:>9}  {status}")
    return "\n".join(lines)


def checks_to_jsonable(checks):
    return [{"id": c.id, "universe": c.universe,
             "quantified_over": c.quantified_over,
             "applicable": c.applicable,
             "passed": c.passed,
             "failures": [list(f) for f in c.failures[:50]]}
            for c in checks]
