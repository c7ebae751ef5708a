"""Finite *-monoids as dense Cayley tables.

Elements are integers 0..order-1 indexing the table.  Green's preorders are
ideal-membership tests; the cancellation ("extended") preorders compare
equality fibers and make sense even for non-regular elements.
"""
from __future__ import annotations

import json
from functools import reduce

import numpy as np

GREEN_KINDS = ("L", "R", "H")
EXT_KINDS = ("L0", "R0", "H0")

MAX_MATRIX_MONOID_ORDER = 65536


class FiniteStarMonoid:
    """Immutable monoid with an involutive anti-automorphism.

    cayley[x][y] is the product xy.  star is the involution table.  modulus
    is set only by the Z_n builder and marks additive ring structure.
    """

    __slots__ = ("order", "cayley", "star", "unity", "label", "modulus",
                 "_rsets", "_lsets", "_units", "_idem")

    def __init__(self, cayley, star, unity, label="", modulus=None):
        cayley = tuple(tuple(row) for row in cayley)
        star = tuple(star)
        n = len(cayley)
        if n == 0:
            raise ValueError("empty carrier")
        _validate_tables(cayley, star, unity, n)
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "cayley", cayley)
        object.__setattr__(self, "star", star)
        object.__setattr__(self, "unity", unity)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_rsets", None)
        object.__setattr__(self, "_lsets", None)
        object.__setattr__(self, "_units", None)
        object.__setattr__(self, "_idem", None)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteStarMonoid is immutable")

    def __repr__(self):
        tag = self.label or "monoid"
        return f"FiniteStarMonoid({tag}, order={self.order})"

    def elements(self):
        return range(self.order)

    def mul(self, *xs):
        return reduce(lambda u, v: self.cayley[u][v], xs)

    def power(self, x, k):
        acc = self.unity
        for _ in range(k):
            acc = self.cayley[acc][x]
        return acc

    def star_of(self, x):
        return self.star[x]

    # -- ideals ----------------------------------------------------------

    def right_ideal(self, a):
        """aS as a frozenset (S is unital, so a is included)."""
        if self._rsets is None:
            sets = tuple(frozenset(row) for row in self.cayley)
            object.__setattr__(self, "_rsets", sets)
        return self._rsets[a]

    def left_ideal(self, a):
        if self._lsets is None:
            n = self.order
            sets = tuple(frozenset(self.cayley[s][a] for s in range(n))
                         for a in range(n))
            object.__setattr__(self, "_lsets", sets)
        return self._lsets[a]

    # -- Green's preorders and relations --------------------------------

    def green_leq(self, a, b, kind):
        if kind == "R":
            return a in self.right_ideal(b)
        if kind == "L":
            return a in self.left_ideal(b)
        if kind == "H":
            return a in self.right_ideal(b) and a in self.left_ideal(b)
        raise ValueError(f"kind must be one of {GREEN_KINDS}, got {kind!r}")

    def green_rel(self, a, b, kind):
        return self.green_leq(a, b, kind) and self.green_leq(b, a, kind)

    # -- cancellation preorders ------------------------------------------

    def ext_leq(self, a, b, kind):
        """a <= b when every equality bs=bt forces as=at (R0), dually (L0)."""
        if kind == "R0":
            return self._fiber_refines(self.cayley[b], self.cayley[a])
        if kind == "L0":
            col_b = [self.cayley[s][b] for s in range(self.order)]
            col_a = [self.cayley[s][a] for s in range(self.order)]
            return self._fiber_refines(col_b, col_a)
        if kind == "H0":
            return self.ext_leq(a, b, "R0") and self.ext_leq(a, b, "L0")
        raise ValueError(f"kind must be one of {EXT_KINDS}, got {kind!r}")

    def ext_rel(self, a, b, kind):
        return self.ext_leq(a, b, kind) and self.ext_leq(b, a, kind)

    @staticmethod
    def _fiber_refines(row_b, row_a):
        # groups s by row_b[s]; a constant row_a per group is the O(n) form
        # of "for all s,t: bs=bt implies as=at"
        rep = {}
        for s, v in enumerate(row_b):
            w = row_a[s]
            if v in rep:
                if rep[v] != w:
                    return False
            else:
                rep[v] = w
        return True

    # -- annihilators ----------------------------------------------------

    def right_annihilator_pairs(self, a):
        """All (s,t) with as=at and s<=t; the relational right annihilator."""
        row = self.cayley[a]
        n = self.order
        return [(s, t) for s in range(n) for t in range(s, n)
                if row[s] == row[t]]

    def left_annihilator_pairs(self, a):
        n = self.order
        col = [self.cayley[s][a] for s in range(n)]
        return [(s, t) for s in range(n) for t in range(s, n)
                if col[s] == col[t]]

    def annihilator_contained(self, a, b, side):
        """True when the relational annihilator of b sits inside that of a."""
        if side == "right":
            return self._fiber_refines(self.cayley[b], self.cayley[a])
        if side == "left":
            col_b = [self.cayley[s][b] for s in range(self.order)]
            col_a = [self.cayley[s][a] for s in range(self.order)]
            return self._fiber_refines(col_b, col_a)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def ring_right_annihilator(self, a):
        """{x : ax = 0} for Z_n carriers (element i is residue i)."""
        if self.modulus is None:
            raise ValueError("classical annihilators need additive structure "
                             "(monoid has no modulus)")
        return frozenset(x for x in self.elements()
                         if self.cayley[a][x] == 0)

    def ring_left_annihilator(self, a):
        if self.modulus is None:
            raise ValueError("classical annihilators need additive structure "
                             "(monoid has no modulus)")
        return frozenset(x for x in self.elements()
                         if self.cayley[x][a] == 0)

    # -- regularity, idempotents, units ----------------------------------

    def inner_inverses(self, a):
        return frozenset(x for x in self.elements()
                         if self.mul(a, x, a) == a)

    def is_regular(self, a):
        return any(self.mul(a, x, a) == a for x in self.elements())

    def idempotents(self):
        if self._idem is None:
            s = frozenset(e for e in self.elements()
                          if self.cayley[e][e] == e)
            object.__setattr__(self, "_idem", s)
        return self._idem

    def minus_leq(self, e, f):
        """Order e <= f on idempotents: e = ef = fe."""
        idem = self.idempotents()
        if e not in idem or f not in idem:
            raise ValueError("minus_leq is defined on idempotents only")
        return self.cayley[e][f] == e and self.cayley[f][e] == e

    def units(self):
        if self._units is None:
            u = self.unity
            s = frozenset(x for x in self.elements()
                          if any(self.cayley[x][y] == u == self.cayley[y][x]
                                 for y in self.elements()))
            object.__setattr__(self, "_units", s)
        return self._units

    def is_unit(self, a):
        return a in self.units()

    # -- serialization ---------------------------------------------------

    def to_json_dict(self):
        doc = {
            "order": self.order,
            "cayley": [list(row) for row in self.cayley],
            "star": list(self.star),
            "unity": self.unity,
        }
        if self.label:
            doc["label"] = self.label
        if self.modulus is not None:
            doc["modulus"] = self.modulus
        return doc

    @classmethod
    def from_json_dict(cls, doc):
        try:
            cayley = doc["cayley"]
            star = doc["star"]
            unity = doc["unity"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"monoid document missing field: {exc}") from exc
        m = cls(cayley, star, unity,
                label=doc.get("label", ""), modulus=doc.get("modulus"))
        if "order" in doc and doc["order"] != m.order:
            raise ValueError("declared order does not match table size")
        return m


# full O(n^3) associativity above this order would be minutes to hours;
# larger tables get a seeded sample instead
FULL_VALIDATION_ORDER = 512
_ASSOC_SAMPLES = 200000


def _validate_tables(cayley, star, unity, n):
    for row in cayley:
        if len(row) != n:
            raise ValueError("cayley table is not square")
    tab = np.array(cayley, dtype=np.int64)
    if tab.min() < 0 or tab.max() >= n:
        raise ValueError("cayley entries out of range")
    if not (0 <= unity < n):
        raise ValueError("unity out of range")
    if list(tab[unity]) != list(range(n)) or list(tab[:, unity]) != list(range(n)):
        raise ValueError("unity is not a two-sided identity")
    if n <= FULL_VALIDATION_ORDER:
        for a in range(n):
            # (ab)c == a(bc) row by row
            if not np.array_equal(tab[tab[a]], tab[a][tab]):
                raise ValueError("cayley table is not associative")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
        if not np.array_equal(tab[tab[a, b], c], tab[a, tab[b, c]]):
            raise ValueError("cayley table is not associative")
    if len(star) != n or sorted(star) != list(range(n)):
        raise ValueError("star is not a permutation of the carrier")
    st = np.array(star, dtype=np.int64)
    if not np.array_equal(st[st], np.arange(n)):
        raise ValueError("star is not an involution")
    # star reverses products: star(xy) == star(y)star(x)
    if n <= FULL_VALIDATION_ORDER:
        if not np.array_equal(st[tab], tab[np.ix_(st, st)].T):
            raise ValueError("star does not reverse products")
    else:
        rng = np.random.default_rng(1)
        x, y = rng.integers(0, n, size=(2, _ASSOC_SAMPLES))
        if not np.array_equal(st[tab[x, y]], tab[st[y], st[x]]):
            raise ValueError("star does not reverse products")


def build_zn_monoid(n):
    """Multiplicative monoid of Z_n with the identity involution."""
    if n <= 0:
        raise ValueError("n must be positive")
    cayley = [[(i * j) % n for j in range(n)] for i in range(n)]
    star = list(range(n))
    return FiniteStarMonoid(cayley, star, 1 % n, label=f"zn:{n}", modulus=n)


def build_matrix_monoid(n, m):
    """All n x n matrices over Z_m under multiplication, star = transpose.

    Matrices are encoded as base-m digit strings, row-major with the (0,0)
    entry in the least significant digit.  Order m**(n*n) is capped.
    """
    if n <= 0 or m <= 0:
        raise ValueError("dimensions must be positive")
    order = m ** (n * n)
    if order > MAX_MATRIX_MONOID_ORDER:
        raise ValueError(f"matrix monoid order {order} exceeds cap "
                         f"{MAX_MATRIX_MONOID_ORDER}")

    # digit i*n+j of a code is entry (i,j); least significant digit first
    codes = np.arange(order)
    digits = np.empty((order, n, n), dtype=np.int64)
    rem = codes.copy()
    for i in range(n):
        for j in range(n):
            digits[:, i, j] = rem % m
            rem //= m
    weights = m ** np.arange(n * n)

    def encode_batch(mats):
        flat = mats.reshape(mats.shape[0], n * n)
        return flat @ weights

    cayley = np.empty((order, order), dtype=np.int64)
    for a in range(order):
        prods = np.einsum("ik,skj->sij", digits[a], digits) % m
        cayley[a] = encode_batch(prods)
    star = encode_batch(np.transpose(digits, (0, 2, 1)))
    eye = int(encode_batch(np.eye(n, dtype=np.int64)[None, :, :])[0])
    return FiniteStarMonoid(cayley.tolist(), star.tolist(), eye,
                            label=f"mat:{n}:{m}")


def parse_universe(token):
    """Build a monoid from a descriptor like 'zn:8' or 'mat:2:2'."""
    parts = str(token).split(":")
    if parts[0] == "zn" and len(parts) == 2:
        return build_zn_monoid(int(parts[1]))
    if parts[0] == "mat" and len(parts) == 3:
        return build_matrix_monoid(int(parts[1]), int(parts[2]))
    raise ValueError(f"unknown universe descriptor {token!r}")


def load_monoid(path):
    with open(path, "r", encoding="utf-8") as fh:
        return FiniteStarMonoid.from_json_dict(json.load(fh))


def save_monoid(monoid, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(monoid.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
