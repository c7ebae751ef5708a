"""Command line client; every verb calls the in-process service handlers."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np
from pydantic import ValidationError

from . import matrices as mx
from . import service as sv


def _add_common(p):
    p.add_argument("--format", choices=("json", "table"), default="table",
                   dest="fmt")
    p.add_argument("--out", help="write the result to this file")


def _add_monoid_args(p):
    p.add_argument("--universe", help="carrier token, e.g. zn:8 or mat:2:2")
    p.add_argument("--monoid", help="path to a monoid json file")
    p.add_argument("-a", "--a", type=int, help="element to invert")
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("-w", "--w", type=int)
    p.add_argument("-d", "--d", type=int)


def _add_matrix_args(p):
    p.add_argument("--a-file", help="matrix A as .json or .csv")
    p.add_argument("--b-file", help="matrix B (default: identity)")
    p.add_argument("--c-file", help="matrix C (default: identity)")
    p.add_argument("--tol", type=float, help="absolute singular value cutoff")
    p.add_argument("--vtol", type=float, help="residual verification bound")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="greencore",
        description="staged (b, c)-shaped generalized inverses: exact "
                    "monoid engine, floating point matrix engine, and a "
                    "theorem-checking battery")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("invert", help="compute one inverse")
    p.add_argument("--kind", default="bc-core-ep")
    _add_monoid_args(p)
    _add_matrix_args(p)
    p.add_argument("--k", type=int, help="stage to use (matrix mode)")
    p.add_argument("--kmax", type=int, help="stage search bound")
    _add_common(p)

    p = sub.add_parser("index", help="staged report: members and inverse")
    p.add_argument("--kind", default="bc-core-ep")
    _add_monoid_args(p)
    _add_matrix_args(p)
    p.add_argument("--kmax", type=int)
    _add_common(p)

    p = sub.add_parser("solve", help="constrained least squares (matrix)")
    p.add_argument("--kind", default="bc-core-ep", help=argparse.SUPPRESS)
    _add_matrix_args(p)
    p.add_argument("--rhs", help="comma separated right-hand side")
    p.add_argument("--rhs-file", help="right-hand side as .json or .csv")
    p.add_argument("--k", type=int)
    p.add_argument("--kmax", type=int)
    _add_common(p)

    p = sub.add_parser("check", help="run the theorem-checking battery")
    p.add_argument("--universes", nargs="*", help="carrier tokens")
    p.add_argument("--kmax", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample", type=int, help="triple sample size")
    _add_common(p)

    p = sub.add_parser("reproduce", help="re-derive a pinned reference case")
    p.add_argument("--case", choices=sv.REPRODUCE_CASES, required=True)
    _add_common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return ap


# -- request assembly ----------------------------------------------------

def _monoid_request(args):
    payload = None
    if args.monoid:
        with open(args.monoid, "r", encoding="utf-8") as fh:
            payload = sv.MonoidPayload(**json.load(fh))
    if args.a is None:
        raise ValueError("monoid mode needs -a ELEMENT")
    return sv.MonoidRequest(universe=args.universe, monoid=payload,
                            kind=args.kind, a=args.a, b=args.b, c=args.c,
                            w=args.w, d=args.d, k_max=args.kmax)


def _matrix_request(args, rhs=None, k=None):
    def load(path, name):
        if path is None:
            return None
        return mx.matrix_to_jsonable(mx.load_matrix(path, name))

    return sv.MatrixRequest(kind=args.kind,
                            a=load(args.a_file, "a"),
                            b=load(args.b_file, "b"),
                            c=load(args.c_file, "c"),
                            rhs=rhs, k=k, k_max=args.kmax,
                            tol=args.tol, vtol=args.vtol)


def _rhs_doc(args):
    if (args.rhs is None) == (args.rhs_file is None):
        raise ValueError("solve needs exactly one of --rhs or --rhs-file")
    if args.rhs_file:
        return mx.matrix_to_jsonable(mx.load_matrix(args.rhs_file, "rhs"))
    try:
        vals = [complex(tok.strip().replace("(", "").replace(")", ""))
                for tok in args.rhs.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"cannot parse --rhs {args.rhs!r}") from None
    if not vals:
        raise ValueError("--rhs is empty")
    return mx.matrix_to_jsonable(np.asarray(vals))


# -- table rendering -----------------------------------------------------

def _fmt_num(z):
    z = complex(z)
    if abs(z.imag) < 5e-13:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def _matrix_lines(doc, indent="    "):
    arr = np.asarray(doc, dtype=float)
    if arr.ndim == 2:
        vals = [complex(re, im) for re, im in arr]
        return [indent + "  ".join(_fmt_num(v) for v in vals)]
    out = []
    for row in arr:
        out.append(indent + "  ".join(_fmt_num(complex(re, im))
                                      for re, im in row))
    return out


def _members_str(members):
    return " ".join(str(k) for k in members) if members else "(none)"


def _invert_table(d):
    lines = [f"kind: {d['kind']}", f"status: {d['status']}"]
    if d.get("witness") is not None:
        lines.append(f"witness: {d['witness']}")
    if d.get("witnesses"):
        lines.append("witnesses: " + " ".join(str(x) for x in d["witnesses"]))
    if d.get("k") is not None:
        lines.append(f"stage: {d['k']}")
    if d.get("inverse") is not None:
        lines.append("inverse:")
        lines.extend(_matrix_lines(d["inverse"]))
    if d.get("residuals"):
        worst = max(d["residuals"].values())
        lines.append(f"max residual: {worst:.3g}")
    if d.get("detail"):
        lines.append(f"detail: {d['detail']}")
    if d.get("rank_table"):
        lines.append("rank table (k, rank Q, rank H, rank M):")
        for row in d["rank_table"]:
            lines.append("    " + " ".join(str(v) for v in row))
    return "\n".join(lines)


def _index_table(d):
    lines = [f"status: {d['status']}"]
    if "kind" in d:
        lines.insert(0, f"kind: {d['kind']}")
    lines.append(f"searched bound: {d['searched_bound']}")
    lines.append("members: " + _members_str(d.get("members")))
    if d.get("index") is not None:
        lines.append(f"index: {d['index']}")
    if d.get("inverse") is not None:
        lines.append(f"inverse: {d['inverse']}")
    if d.get("rank_table"):
        lines.append("rank table (k, rank Q, rank H, rank M):")
        for row in d["rank_table"]:
            lines.append("    " + " ".join(str(v) for v in row))
    return "\n".join(lines)


def _solve_table(d):
    lines = [f"status: {d['status']}"]
    if d.get("k") is not None:
        lines.append(f"stage: {d['k']}")
    if d.get("solution") is not None:
        lines.append("solution:")
        lines.extend(_matrix_lines(d["solution"]))
    if d.get("detail"):
        lines.append(f"detail: {d['detail']}")
    return "\n".join(lines)


# -- verbs ---------------------------------------------------------------

def _run_invert(args):
    if args.a_file:
        resp = sv.handle_matrix_invert(_matrix_request(args, k=args.k))
    else:
        resp = sv.handle_monoid_invert(_monoid_request(args))
    d = resp.model_dump(exclude_none=True)
    return d, _invert_table(d), 0


def _run_index(args):
    if args.a_file:
        resp = sv.handle_matrix_index(_matrix_request(args))
    else:
        resp = sv.handle_monoid_index(_monoid_request(args))
    d = resp.model_dump(exclude_none=True)
    return d, _index_table(d), 0


def _run_solve(args):
    if not args.a_file:
        raise ValueError("solve needs --a-file")
    resp = sv.handle_matrix_solve(
        _matrix_request(args, rhs=_rhs_doc(args), k=args.k))
    d = resp.model_dump(exclude_none=True)
    return d, _solve_table(d), 0


def _run_check(args):
    resp = sv.handle_check(sv.CheckRequest(
        universes=args.universes or None, k_max=args.kmax,
        seed=args.seed, sample=args.sample))
    d = {"all_passed": resp.all_passed, "checks": resp.checks}
    verdict = "all checks passed" if resp.all_passed else "CHECK FAILURES"
    table = resp.table + "\n" + verdict
    return d, table, 0 if resp.all_passed else 1


def _run_reproduce(args):
    resp = sv.handle_reproduce(sv.ReproduceRequest(case=args.case))
    return resp.document, resp.canonical, 0


_VERBS = {"invert": _run_invert, "index": _run_index, "solve": _run_solve,
          "check": _run_check, "reproduce": _run_reproduce}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verb == "serve":
        import uvicorn
        uvicorn.run(sv.app, host=args.host, port=args.port)
        return 0
    try:
        payload, table, code = _VERBS[args.verb](args)
    except (ValueError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(payload, indent=2, sort_keys=True) \
        if args.fmt == "json" else table
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
