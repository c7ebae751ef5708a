"""Floating-point staged core-EP machinery over complex square matrices.

Admissibility at stage k is the three-way rank equality of the derived
matrices Q = (CA)^k B, H = (CA)^k C, M = (CA)^{k+1} B; the inverse at an
admissible stage is X = Q pinv(M).  Rank decisions carry an SVD-derived
tolerance, and every returned solution is certified by residuals.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

DEFAULT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class RankProfile:
    rank: int
    singular_values: tuple
    tolerance: float


@dataclass(frozen=True)
class CoreEpSolution:
    k: int
    inverse: np.ndarray
    projector: np.ndarray
    residuals: dict


class NotCoreEpInvertibleError(ValueError):
    """No admissible stage; rank_table rows are (k, rank Q, rank H, rank M)."""

    def __init__(self, message, rank_table):
        super().__init__(message)
        self.rank_table = rank_table


class NotBCInvertibleError(ValueError):
    def __init__(self, message, ranks):
        super().__init__(message)
        self.ranks = ranks


def _as_matrix(data, square=False, name="matrix"):
    arr = np.asarray(data, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError(f"{name} contains non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def _as_vector(data, n=None, name="vector"):
    arr = np.asarray(data, dtype=complex).reshape(-1)
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError(f"{name} contains non-finite entries")
    if n is not None and arr.size != n:
        raise ValueError(f"{name} must have length {n}, got {arr.size}")
    return arr


def rank(a, tol=None):
    a = _as_matrix(a)
    if a.size == 0:
        return RankProfile(0, (), 0.0)
    sv = np.linalg.svd(a, compute_uv=False)
    if tol is None:
        tol = max(a.shape) * np.finfo(float).eps * (sv[0] if sv.size else 0.0)
    return RankProfile(int(np.sum(sv > tol)), tuple(float(s) for s in sv),
                       float(tol))


def pinv(a, tol=None):
    """Pseudoinverse; tol is an absolute singular-value cutoff."""
    a = _as_matrix(a)
    if tol is None:
        return np.linalg.pinv(a, rcond=max(a.shape) * np.finfo(float).eps)
    return _pinv_cut(a, 0.0, tol)


def i13(a, tol=None):
    """Canonical {1,3}-inverse; the pseudoinverse is one."""
    return pinv(a, tol)


def one_three_inverse(a, z=None, tol=None):
    """pinv(a) + (I - pinv(a) a) z: a {1,3}-inverse for any square z."""
    a = _as_matrix(a)
    g = pinv(a, tol)
    if z is None:
        return g
    z = _as_matrix(z)
    return g + (np.eye(a.shape[1]) - g @ a) @ z


def projector(m, tol=None):
    m = _as_matrix(m)
    return m @ pinv(m, tol)


def _cutoff(mat, floor, tol):
    """Singular-value cutoff: explicit tol, else relative with an absolute
    floor for matrices whose true value has collapsed to roundoff."""
    if tol is not None:
        return float(tol)
    sv = np.linalg.svd(mat, compute_uv=False) if mat.size else np.zeros(0)
    top = float(sv[0]) if sv.size else 0.0
    return max(mat.shape) * np.finfo(float).eps * max(top, floor)


def _rank_cut(mat, floor=0.0, tol=None):
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(sv > _cutoff(mat, floor, tol)))


def _pinv_cut(mat, floor=0.0, tol=None):
    if mat.size == 0:
        return mat.conj().T
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    cut = _cutoff(mat, floor, tol)
    inv = np.array([1.0 / x if x > cut else 0.0 for x in s])
    return (vt.conj().T * inv) @ u.conj().T


def _space_residual(rx, ry, rcat):
    # 0 iff both spaces coincide: rcat == rx == ry
    return float(2 * rcat - rx - ry)


class _Derived:
    """Power chain (CA)^k with per-stage noise floors.

    The k-th derived matrices carry roundoff of order ||CA||^k ||B|| eps, so
    rank and pinv cutoffs at stage k use that scale as an absolute floor.
    """

    def __init__(self, a, b, c, k_max, tol):
        a = _as_matrix(a, square=True, name="A")
        n = a.shape[0]
        b = _as_matrix(b, name="B")
        c = _as_matrix(c, name="C")
        if b.shape != (n, n) or c.shape != (n, n):
            raise ValueError("A, B, C must share one square shape")
        self.a, self.b, self.c = a, b, c
        self.n = n
        self.k_max = n if k_max is None else int(k_max)
        self.tol = tol
        self.ca = c @ a
        self.pows = [np.eye(n, dtype=complex)]
        for _ in range(self.k_max + 1):
            self.pows.append(self.pows[-1] @ self.ca)
        nca = float(np.linalg.norm(self.ca, 2))
        nb = float(np.linalg.norm(b, 2))
        nc = float(np.linalg.norm(c, 2))
        self.floor_q = [nca ** k * nb for k in range(self.k_max + 2)]
        self.floor_h = [nca ** k * nc for k in range(self.k_max + 2)]

    def q(self, k):
        return self.pows[k] @ self.b

    def h(self, k):
        return self.pows[k] @ self.c

    def m(self, k):
        return self.pows[k + 1] @ self.b

    def rank_row(self, k):
        return (k, _rank_cut(self.q(k), self.floor_q[k], self.tol),
                _rank_cut(self.h(k), self.floor_h[k], self.tol),
                _rank_cut(self.m(k), self.floor_q[k + 1], self.tol))

    def inverse_at(self, k):
        return self.q(k) @ _pinv_cut(self.m(k), self.floor_q[k + 1], self.tol)


def core_ep_rank_table(a, b, c, k_max=None, tol=None):
    """Rows (k, rank (CA)^k B, rank (CA)^k C, rank (CA)^{k+1} B)."""
    der = _Derived(a, b, c, k_max, tol)
    return [der.rank_row(k) for k in range(der.k_max + 1)]


def stage_data(a, b, c, k, tol=None):
    """Derived matrices q, h, m at stage k with their noise cutoffs.

    The cutoffs are the absolute singular-value thresholds the engine uses
    for this chain; feed them to pinv/one_three_inverse when building
    alternative inverses of the derived matrices.
    """
    der = _Derived(a, b, c, k, tol)
    q, h, m = der.q(k), der.h(k), der.m(k)
    return {
        "q": q, "h": h, "m": m,
        "cutoff_q": _cutoff(q, der.floor_q[k], tol),
        "cutoff_h": _cutoff(h, der.floor_h[k], tol),
        "cutoff_m": _cutoff(m, der.floor_q[k + 1], tol),
    }


def _stage_solution(der, k):
    q, h, m = der.q(k), der.h(k), der.m(k)
    ca, tol = der.ca, der.tol
    x = der.inverse_at(k)
    cax = ca @ x
    scale = 1.0 + max(np.linalg.norm(t) for t in (q, h, m, ca, x))
    rx = _rank_cut(x, 0.0, tol)
    hs = h.conj().T
    residuals = {
        "range_equation": float(np.linalg.norm(cax @ h - h)),
        "order_equation": float(np.linalg.norm(x @ m - q)),
        "hermitian_product": float(np.linalg.norm(cax - cax.conj().T)),
        "outer_inverse": float(np.linalg.norm(x @ ca @ x - x)),
        "column_space": _space_residual(
            rx, _rank_cut(q, der.floor_q[k], tol),
            _rank_cut(np.hstack([x, q]), der.floor_q[k], tol)),
        "row_space": _space_residual(
            rx, _rank_cut(hs, der.floor_h[k], tol),
            _rank_cut(np.vstack([x, hs]), der.floor_h[k], tol)),
    }
    proj = h @ _pinv_cut(h, der.floor_h[k], tol)
    return x, proj, residuals, scale


def _index_details(a, b, c, k_max=None, tol=None, vtol=None):
    der = _Derived(a, b, c, k_max, tol)
    table = []
    raw = []
    for k in range(der.k_max + 1):
        row = der.rank_row(k)
        table.append(row)
        if row[1] == row[2] == row[3]:
            raw.append(k)
    members = []
    x0 = None
    for k in raw:
        x = der.inverse_at(k)
        if x0 is None:
            x0 = x
            members.append(k)
        else:
            gap = vtol if vtol is not None else \
                DEFAULT_RESIDUAL_TOL * (1.0 + np.linalg.norm(x0))
            if np.linalg.norm(x - x0) <= gap:
                members.append(k)
    return {"der": der, "rank_table": table, "raw": raw, "members": members}


def bc_core_ep_index(a, b, c, k_max=None, tol=None, vtol=None):
    """Admissible stages sharing the minimal stage's inverse, sorted."""
    return tuple(_index_details(a, b, c, k_max, tol, vtol)["members"])


def bc_core_ep(a, b, c, k=None, k_max=None, tol=None, vtol=None):
    det = _index_details(a, b, c, k_max, tol, vtol)
    if k is None:
        if not det["members"]:
            raise NotCoreEpInvertibleError(
                "no admissible stage up to k_max "
                f"{det['der'].k_max}", det["rank_table"])
        k = det["members"][0]
    elif k not in det["raw"]:
        raise NotCoreEpInvertibleError(
            f"stage {k} fails the rank criterion", det["rank_table"])
    x, proj, residuals, scale = _stage_solution(det["der"], k)
    bound = (vtol if vtol is not None else DEFAULT_RESIDUAL_TOL) * scale
    bad = {name: r for name, r in residuals.items() if r > bound}
    if bad:
        raise NotCoreEpInvertibleError(
            f"stage {k} passed the rank criterion but residuals exceed "
            f"{bound:g}: {bad}", det["rank_table"])
    return CoreEpSolution(k=k, inverse=x, projector=proj,
                          residuals=residuals)


def bc_inverse(a, b, c, tol=None, vtol=None):
    """B pinv(CAB) C, defined when rank(CAB) = rank(B) = rank(C)."""
    a = _as_matrix(a, square=True, name="A")
    b = _as_matrix(b, name="B")
    c = _as_matrix(c, name="C")
    g = c @ a @ b
    rg = rank(g, tol).rank
    rb = rank(b, tol).rank
    rc = rank(c, tol).rank
    if not (rg == rb == rc):
        raise NotBCInvertibleError(
            f"rank(CAB)={rg}, rank(B)={rb}, rank(C)={rc} must coincide",
            {"cab": rg, "b": rb, "c": rc})
    y = b @ pinv(g, tol) @ c
    scale = 1.0 + max(np.linalg.norm(t) for t in (a, b, c, y))
    bound = (vtol if vtol is not None else DEFAULT_RESIDUAL_TOL) * scale
    r1 = float(np.linalg.norm(y @ a @ b - b))
    r2 = float(np.linalg.norm(c @ a @ y - c))
    if max(r1, r2) > bound:
        raise NotBCInvertibleError(
            f"rank preconditions hold but defining residuals {r1:g}, {r2:g} "
            f"exceed {bound:g}", {"cab": rg, "b": rb, "c": rc})
    return y


def solve_constrained(a, b_mat, c, rhs, k=None, k_max=None, tol=None,
                      vtol=None):
    """Minimize ||CA x - rhs|| over x in the column space of (CA)^k B."""
    sol = bc_core_ep(a, b_mat, c, k=k, k_max=k_max, tol=tol, vtol=vtol)
    rhs = _as_vector(rhs, n=sol.inverse.shape[0], name="rhs")
    return sol.inverse @ rhs


def dual_bc_core_ep(a, b, c, k=None, k_max=None, tol=None, vtol=None):
    """pinv((CA)^{k+1} B) (CA)^k C at the chosen (or minimal) stage."""
    det = _index_details(a, b, c, k_max, tol, vtol)
    der = det["der"]
    if k is None:
        if not det["members"]:
            raise NotCoreEpInvertibleError(
                "no admissible stage up to k_max "
                f"{der.k_max}", det["rank_table"])
        k = det["members"][0]
    elif k not in det["raw"]:
        raise NotCoreEpInvertibleError(
            f"stage {k} fails the rank criterion", det["rank_table"])
    q, h, m = der.q(k), der.h(k), der.m(k)
    y = _pinv_cut(m, der.floor_q[k + 1], tol) @ h
    ab = der.a @ der.b
    scale = 1.0 + max(np.linalg.norm(t) for t in (q, h, m, y))
    bound = (vtol if vtol is not None else DEFAULT_RESIDUAL_TOL) * scale
    r1 = float(np.linalg.norm(q - q @ y @ ab))
    ry = _rank_cut(y, 0.0, tol)
    qs = q.conj().T
    r2 = _space_residual(ry, _rank_cut(qs, der.floor_q[k], tol),
                         _rank_cut(np.hstack([y, qs]), der.floor_q[k], tol))
    r3 = _space_residual(ry, _rank_cut(h, der.floor_h[k], tol),
                         _rank_cut(np.vstack([y, h]), der.floor_h[k], tol))
    if r1 > bound or r2 or r3:
        raise NotCoreEpInvertibleError(
            f"stage {k} dual residuals out of bounds: {r1:g}, {r2:g}, {r3:g}",
            det["rank_table"])
    return y


# -- randomized admissible instances -------------------------------------

def _rand_unitary(rng, size):
    g = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _rand_well_conditioned(rng, size):
    # singular values clamped to [0.5, 2] so powers keep a clean rank gap
    u = _rand_unitary(rng, size)
    v = _rand_unitary(rng, size)
    s = rng.uniform(0.5, 2.0, size=size)
    return (u * s) @ v.conj().T


def random_core_ep_instance(n=4, index=None, rng=None):
    """(A, B, C) with CA similar to invertible + nilpotent of the given
    index; B, C invertible.  The minimal admissible stage is then `index`.

    The similarity is unitary so the numerical rank of powers stays exact.
    """
    rng = np.random.default_rng(rng)
    s = int(rng.integers(0, n)) if index is None else int(index)
    if not 0 <= s <= n:
        raise ValueError("index must lie in [0, n]")
    r = n - s
    m0 = np.zeros((n, n), dtype=complex)
    if r:
        m0[:r, :r] = _rand_well_conditioned(rng, r)
    for i in range(r, n - 1):
        m0[i, i + 1] = 1.0
    t = _rand_unitary(rng, n)
    m = t @ m0 @ t.conj().T
    c = _rand_well_conditioned(rng, n)
    a = np.linalg.solve(c, m)  # CA = M by construction
    b = _rand_well_conditioned(rng, n)
    return a, b, c


# -- serialization -------------------------------------------------------

def matrix_to_jsonable(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_jsonable(doc, name="matrix"):
    arr = np.asarray(doc, dtype=float)
    if arr.ndim == 3 and arr.shape[2] == 2:
        return _as_matrix(arr[..., 0] + 1j * arr[..., 1], name=name)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return _as_vector(arr[:, 0] + 1j * arr[:, 1], name=name)
    raise ValueError(f"{name}: expected nested [re, im] pairs")


def _format_complex(z):
    return f"{z.real:.12g}{z.imag:+.12g}j"


def save_matrix(a, path):
    path = str(path)
    a = np.asarray(a, dtype=complex)
    if path.endswith(".csv"):
        rows = a if a.ndim == 2 else a.reshape(1, -1)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            for row in rows:
                writer.writerow([_format_complex(z) for z in row])
        return
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_jsonable(a), fh)
        fh.write("\n")


def load_matrix(path, name=None):
    path = str(path)
    label = name or path
    if path.endswith(".csv"):
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = [[complex(tok.strip().replace("(", "").replace(")", ""))
                     for tok in row] for row in csv.reader(fh) if row]
        if not rows:
            raise ValueError(f"{label}: empty csv")
        return _as_matrix(rows, name=label)
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_jsonable(json.load(fh), name=label)
