"""HTTP face of the toolkit.

Pure handler functions do the work; the FastAPI app is a thin routing layer
over them, and the CLI calls the same handlers in process.
"""
from __future__ import annotations

import json

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import checks as checks_mod
from . import matrices as mx
from . import search as gs
from .monoid import FiniteStarMonoid, build_zn_monoid, parse_universe

VERSION = "0.1.0"

STAGED_KINDS = (gs.InverseKind.bc_core_ep, gs.InverseKind.dual_bc_core_ep,
                gs.InverseKind.w_core_ep)

REPRODUCE_CASES = ("z8", "shift3")


class MonoidPayload(BaseModel):
    order: int
    cayley: list[list[int]]
    star: list[int]
    unity: int
    label: str | None = None
    modulus: int | None = None


class MonoidRequest(BaseModel):
    universe: str | None = None
    monoid: MonoidPayload | None = None
    kind: str
    a: int
    b: int | None = None
    c: int | None = None
    w: int | None = None
    d: int | None = None
    side: str | None = None
    k_max: int | None = Field(default=None, ge=0)


class MonoidInvertResponse(BaseModel):
    kind: str
    status: str
    witness: int | None = None
    witnesses: list[int] | None = None


class MonoidIndexResponse(BaseModel):
    kind: str
    status: str
    searched_bound: int
    members: list[int]
    index: int | None = None
    inverse: int | None = None


class MatrixRequest(BaseModel):
    kind: str = "bc-core-ep"
    a: list
    b: list | None = None
    c: list | None = None
    rhs: list | None = None
    k: int | None = Field(default=None, ge=0)
    k_max: int | None = Field(default=None, ge=0)
    tol: float | None = Field(default=None, gt=0)
    vtol: float | None = Field(default=None, gt=0)


class MatrixInvertResponse(BaseModel):
    kind: str
    status: str  # ok | not_invertible
    k: int | None = None
    inverse: list | None = None
    projector: list | None = None
    residuals: dict[str, float] | None = None
    detail: str | None = None
    rank_table: list[list[int]] | None = None


class MatrixIndexResponse(BaseModel):
    status: str  # ok | empty
    searched_bound: int
    members: list[int]
    rank_table: list[list[int]]


class MatrixSolveResponse(BaseModel):
    status: str
    k: int | None = None
    solution: list | None = None
    detail: str | None = None
    rank_table: list[list[int]] | None = None


class CheckRequest(BaseModel):
    universes: list[str] | None = None
    k_max: int | None = Field(default=None, ge=0)
    seed: int = 0
    sample: int | None = Field(default=None, gt=0)


class CheckResponse(BaseModel):
    all_passed: bool
    table: str
    checks: list[dict]


class ReproduceRequest(BaseModel):
    case: str


class ReproduceResponse(BaseModel):
    case: str
    document: dict
    canonical: str


# -- handlers ------------------------------------------------------------

def _monoid_from(req):
    if (req.universe is None) == (req.monoid is None):
        raise ValueError("provide exactly one of 'universe' or 'monoid'")
    if req.universe is not None:
        return parse_universe(req.universe)
    return FiniteStarMonoid.from_json_dict(req.monoid.model_dump())


def _need(req, *names):
    vals = []
    for name in names:
        v = getattr(req, name)
        if v is None:
            raise ValueError(f"kind {req.kind!r} needs {name!r}")
        vals.append(v)
    return vals


def _check_element(m, name, v):
    if not 0 <= v < m.order:
        raise ValueError(f"{name}={v} outside carrier of order {m.order}")


def handle_monoid_invert(req):
    kind = gs.kind_from_token(req.kind)
    if kind in STAGED_KINDS:
        raise ValueError(f"kind {kind.value!r} is staged; use the index "
                         "operation")
    m = _monoid_from(req)
    _check_element(m, "a", req.a)
    for name in ("b", "c", "w", "d"):
        v = getattr(req, name)
        if v is not None:
            _check_element(m, name, v)
    a = req.a
    if kind == gs.InverseKind.one_three:
        res = gs.find_i13(m, a)
    elif kind == gs.InverseKind.one_four:
        res = gs.find_i14(m, a)
    elif kind == gs.InverseKind.moore_penrose:
        res = gs.find_mp(m, a)
    elif kind == gs.InverseKind.group:
        res = gs.find_group(m, a)
    elif kind == gs.InverseKind.drazin:
        res = gs.find_drazin(m, a, req.k_max)
    elif kind == gs.InverseKind.along_d:
        (d,) = _need(req, "d")
        res = gs.find_along(m, a, d)
    elif kind == gs.InverseKind.bc:
        b, c = _need(req, "b", "c")
        res = gs.find_bc(m, a, b, c)
    elif kind == gs.InverseKind.bc_left:
        b, c = _need(req, "b", "c")
        res = gs.find_bc_one_sided(m, a, b, c, "left")
    elif kind == gs.InverseKind.bc_right:
        b, c = _need(req, "b", "c")
        res = gs.find_bc_one_sided(m, a, b, c, "right")
    elif kind == gs.InverseKind.w_core:
        (w,) = _need(req, "w")
        res = gs.find_w_core(m, a, w)
    elif kind == gs.InverseKind.bc_core:
        b, c = _need(req, "b", "c")
        res = gs.find_bc_core(m, a, b, c)
    else:
        raise ValueError(f"kind {kind.value!r} not supported here")
    return MonoidInvertResponse(
        kind=res.kind.value, status=res.status, witness=res.witness,
        witnesses=sorted(res.witnesses) if res.witnesses else None)


def handle_monoid_index(req):
    kind = gs.kind_from_token(req.kind)
    if kind not in STAGED_KINDS:
        raise ValueError(f"kind {kind.value!r} is not staged; use the invert "
                         "operation")
    m = _monoid_from(req)
    _check_element(m, "a", req.a)
    for name in ("b", "c", "w"):
        v = getattr(req, name)
        if v is not None:
            _check_element(m, name, v)
    if kind == gs.InverseKind.bc_core_ep:
        b, c = _need(req, "b", "c")
        rep = gs.find_bc_core_ep(m, req.a, b, c, req.k_max)
    elif kind == gs.InverseKind.dual_bc_core_ep:
        b, c = _need(req, "b", "c")
        rep = gs.find_dual_bc_core_ep(m, req.a, b, c, req.k_max)
    else:
        (w,) = _need(req, "w")
        rep = gs.find_w_core_ep(m, req.a, w, req.k_max)
    return MonoidIndexResponse(
        kind=rep.kind.value, status=rep.status,
        searched_bound=rep.searched_bound, members=list(rep.members),
        index=rep.index, inverse=rep.inverse)


def _matrix_arg(doc, name):
    """Accept a real 2-d array or nested [re, im] pairs."""
    arr = np.asarray(doc, dtype=object)
    if arr.ndim == 3:
        return mx.matrix_from_jsonable(doc, name=name)
    try:
        return np.asarray(doc, dtype=complex)
    except (TypeError, ValueError):
        raise ValueError(f"{name}: expected a matrix") from None


def _vector_arg(doc, name):
    arr = np.asarray(doc, dtype=object)
    if arr.ndim == 2:
        return mx.matrix_from_jsonable(doc, name=name)
    try:
        return np.asarray(doc, dtype=complex)
    except (TypeError, ValueError):
        raise ValueError(f"{name}: expected a vector") from None


def _abc(req):
    a = _matrix_arg(req.a, "a")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("a must be square")
    n = a.shape[0]
    b = _matrix_arg(req.b, "b") if req.b is not None else np.eye(n)
    c = _matrix_arg(req.c, "c") if req.c is not None else np.eye(n)
    return a, b, c


_MATRIX_KINDS = ("bc-core-ep", "dual-bc-core-ep", "bc", "moore-penrose",
                 "one-three")


def handle_matrix_invert(req):
    kind = req.kind.replace("_", "-")
    if kind not in _MATRIX_KINDS:
        raise ValueError(f"matrix kind must be one of {_MATRIX_KINDS}, "
                         f"got {req.kind!r}")
    if kind == "moore-penrose":
        a = _matrix_arg(req.a, "a")
        return MatrixInvertResponse(kind=kind, status="ok",
                                    inverse=mx.matrix_to_jsonable(
                                        mx.pinv(a, req.tol)))
    if kind == "one-three":
        a = _matrix_arg(req.a, "a")
        return MatrixInvertResponse(kind=kind, status="ok",
                                    inverse=mx.matrix_to_jsonable(
                                        mx.one_three_inverse(a, tol=req.tol)))
    a, b, c = _abc(req)
    if kind == "bc":
        try:
            y = mx.bc_inverse(a, b, c, tol=req.tol, vtol=req.vtol)
        except mx.NotBCInvertibleError as exc:
            return MatrixInvertResponse(kind=kind, status="not_invertible",
                                        detail=str(exc))
        return MatrixInvertResponse(kind=kind, status="ok",
                                    inverse=mx.matrix_to_jsonable(y))
    if kind == "dual-bc-core-ep":
        try:
            y = mx.dual_bc_core_ep(a, b, c, k=req.k, k_max=req.k_max,
                                   tol=req.tol, vtol=req.vtol)
        except mx.NotCoreEpInvertibleError as exc:
            return MatrixInvertResponse(
                kind=kind, status="not_invertible", detail=str(exc),
                rank_table=[list(r) for r in exc.rank_table])
        k_used = req.k
        if k_used is None:
            members = mx.bc_core_ep_index(a, b, c, k_max=req.k_max,
                                          tol=req.tol, vtol=req.vtol)
            k_used = members[0]
        return MatrixInvertResponse(kind=kind, status="ok", k=k_used,
                                    inverse=mx.matrix_to_jsonable(y))
    try:
        sol = mx.bc_core_ep(a, b, c, k=req.k, k_max=req.k_max,
                            tol=req.tol, vtol=req.vtol)
    except mx.NotCoreEpInvertibleError as exc:
        return MatrixInvertResponse(
            kind=kind, status="not_invertible", detail=str(exc),
            rank_table=[list(r) for r in exc.rank_table])
    return MatrixInvertResponse(
        kind=kind, status="ok", k=sol.k,
        inverse=mx.matrix_to_jsonable(sol.inverse),
        projector=mx.matrix_to_jsonable(sol.projector),
        residuals={k: float(v) for k, v in sol.residuals.items()})


def handle_matrix_index(req):
    a, b, c = _abc(req)
    table = mx.core_ep_rank_table(a, b, c, k_max=req.k_max, tol=req.tol)
    members = mx.bc_core_ep_index(a, b, c, k_max=req.k_max, tol=req.tol,
                                  vtol=req.vtol)
    return MatrixIndexResponse(
        status="ok" if members else "empty",
        searched_bound=table[-1][0],
        members=list(members),
        rank_table=[list(r) for r in table])


def handle_matrix_solve(req):
    a, b, c = _abc(req)
    if req.rhs is None:
        raise ValueError("solve needs 'rhs'")
    rhs = _vector_arg(req.rhs, "rhs")
    try:
        sol = mx.bc_core_ep(a, b, c, k=req.k, k_max=req.k_max,
                            tol=req.tol, vtol=req.vtol)
    except mx.NotCoreEpInvertibleError as exc:
        return MatrixSolveResponse(
            status="not_invertible", detail=str(exc),
            rank_table=[list(r) for r in exc.rank_table])
    x = sol.inverse @ np.asarray(rhs).reshape(-1)
    return MatrixSolveResponse(status="ok", k=sol.k,
                               solution=mx.matrix_to_jsonable(x))


def handle_check(req):
    results = checks_mod.run_all(universes=req.universes, k_max=req.k_max,
                                 seed=req.seed, sample=req.sample)
    return CheckResponse(
        all_passed=all(c.passed for c in results if c.applicable),
        table=checks_mod.ledger_table(results),
        checks=checks_mod.checks_to_jsonable(results))


def _reproduce_z8():
    m = build_zn_monoid(8)
    reports = []
    for a, b, c in ((1, 1, 2), (1, 2, 2)):
        rep = gs.find_bc_core_ep(m, a, b, c, 10)
        reports.append({"a": a, "b": b, "c": c,
                        "status": rep.status,
                        "searched_bound": rep.searched_bound,
                        "members": list(rep.members),
                        "index": rep.index,
                        "inverse": rep.inverse})
    return {"case": "z8", "universe": "zn:8", "k_max": 10,
            "reports": reports}


def _reproduce_shift3():
    a = np.eye(3)
    b = np.zeros((3, 3))
    b[2, 2] = 1.0
    c = np.zeros((3, 3))
    c[0, 1] = 1.0
    c[1, 2] = 1.0
    table = mx.core_ep_rank_table(a, b, c)
    members = mx.bc_core_ep_index(a, b, c)
    sol = mx.bc_core_ep(a, b, c)
    dual = mx.dual_bc_core_ep(a, b, c)
    try:
        mx.bc_inverse(a, b, c)
        bc_ok = True
    except mx.NotBCInvertibleError:
        bc_ok = False
    return {"case": "shift3",
            "rank_table": [list(r) for r in table],
            "members": list(members),
            "stage": sol.k,
            "inverse": mx.matrix_to_jsonable(np.round(sol.inverse, 12)),
            "residuals_below_1e-10": bool(max(sol.residuals.values()) < 1e-10),
            "dual_inverse": mx.matrix_to_jsonable(np.round(dual, 12)),
            "bc_invertible": bc_ok}


def handle_reproduce(req):
    if req.case == "z8":
        doc = _reproduce_z8()
    elif req.case == "shift3":
        doc = _reproduce_shift3()
    else:
        raise ValueError(f"case must be one of {REPRODUCE_CASES}, "
                         f"got {req.case!r}")
    return ReproduceResponse(
        case=req.case, document=doc,
        canonical=json.dumps(doc, sort_keys=True, indent=2))


# -- app -----------------------------------------------------------------

def create_app():
    app = FastAPI(title="greencore", version=VERSION)

    def run(handler, req):
        try:
            return handler(req)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": VERSION}

    @app.post("/api/monoid/invert", response_model=MonoidInvertResponse,
              response_model_exclude_none=True)
    def monoid_invert(req: MonoidRequest):
        return run(handle_monoid_invert, req)

    @app.post("/api/monoid/index", response_model=MonoidIndexResponse,
              response_model_exclude_none=True)
    def monoid_index(req: MonoidRequest):
        return run(handle_monoid_index, req)

    @app.post("/api/matrix/invert", response_model=MatrixInvertResponse,
              response_model_exclude_none=True)
    def matrix_invert(req: MatrixRequest):
        return run(handle_matrix_invert, req)

    @app.post("/api/matrix/index", response_model=MatrixIndexResponse)
    def matrix_index(req: MatrixRequest):
        return run(handle_matrix_index, req)

    @app.post("/api/matrix/solve", response_model=MatrixSolveResponse,
              response_model_exclude_none=True)
    def matrix_solve(req: MatrixRequest):
        return run(handle_matrix_solve, req)

    @app.post("/api/check", response_model=CheckResponse)
    def check(req: CheckRequest):
        return run(handle_check, req)

    @app.post("/api/reproduce", response_model=ReproduceResponse)
    def reproduce(req: ReproduceRequest):
        return run(handle_reproduce, req)

    return app


app = create_app()
