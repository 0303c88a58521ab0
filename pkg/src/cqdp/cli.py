"""Command-line interface: ``cqdp <subcommand> ...``.

Exit codes: 0 success, 1 a check came out negative, 2 any error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import re
import sys

import numpy as np

from . import certify as cert
from . import frontier, io, witness
from .dp import ClassicalTuple, classical_dp_report, cq_dp_report, min_epsilon_report
from .errors import CQDPError, Infeasible
from .fisher import fisher_classical, fisher_quantum
from .hermitian import PSD_TOL

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

_LN = re.compile(r"^\s*(-?)ln\(?\s*([0-9.eE+-]+)\s*\)?\s*$")


def real(text: str) -> float:
    """Parse a decimal, or a natural-log literal such as ``ln2`` / ``ln(3)``."""
    m = _LN.match(text)
    try:
        if m:
            val = math.log(float(m.group(2)))
            return -val if m.group(1) else val
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def real_list(text: str) -> list:
    return [real(x) for x in text.split(",") if x.strip()]


def int_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _finite_or_none(x):
    return x if x is not None and math.isfinite(x) else None


def cmd_verify(args) -> int:
    t, _ = io.load_tuple(_read(args.input))
    dens = t.to_density() if isinstance(t, ClassicalTuple) else t
    if isinstance(t, ClassicalTuple):
        rep = classical_dp_report(t, args.eps, args.tol)
    else:
        rep = cq_dp_report(t, args.eps, args.tol)
    try:
        min_eps, min_pair = min_epsilon_report(dens)
        infeasible = False
    except Infeasible:
        min_eps, min_pair, infeasible = None, None, True
    _write(_dump({
        "kind": "classical" if isinstance(t, ClassicalTuple) else "density",
        "eps": args.eps,
        "tol": args.tol,
        "is_dp": rep.is_dp,
        "worst_pair": list(rep.worst_pair),
        "worst_eigenvalue": rep.worst_eigenvalue,
        "min_epsilon": min_eps,
        "min_epsilon_pair": list(min_pair) if min_pair else None,
        "infeasible": infeasible,
    }), args.out)
    return EXIT_OK if rep.is_dp else EXIT_NEGATIVE


def cmd_fisher(args) -> int:
    t, _ = io.load_tuple(_read(args.input))
    n = t.n
    mat = [[0.0] * n for _ in range(n)]
    for i, j in itertools.permutations(range(n), 2):
        if isinstance(t, ClassicalTuple):
            mat[i][j] = _finite_or_none(fisher_classical(args.theta, t[i], t[j]))
        else:
            mat[i][j] = fisher_quantum(args.theta, t[i], t[j])
    off = [mat[i][j] for i, j in itertools.permutations(range(n), 2)]
    finite = all(v is not None for v in off)
    _write(_dump({
        "theta": args.theta,
        "J": mat,
        "avg": float(np.mean(off)) if finite else None,
        "min": float(np.min(off)) if finite else None,
    }), args.out)
    return EXIT_OK


def cmd_classical_max(args) -> int:
    out = {"n": args.n, "eps": args.eps, "theta": args.theta, "method": args.method}
    if args.method == "lp":
        sol = frontier.lp_supremum(args.n, args.eps, frontier.fisher_objective(args.n, args.theta))
        out["value"] = sol.objective / (args.n * (args.n - 1))
        out["lp_objective"] = sol.objective
        out["residual"] = sol.residual
        out["weights"] = [{"vertex": list(v), "weight": w} for v, w in sol.weights.items()]
    else:
        out["value"] = frontier.avg_fisher_supremum(args.n, args.eps, args.theta, args.method)
    out["k_star"] = frontier.k_star(args.n, args.eps)
    _write(_dump(out), args.out_json)
    return EXIT_OK


def cmd_construct_classical(args) -> int:
    k = frontier.k_star(args.n, args.eps) if args.k is None else args.k
    t = frontier.extremal_tuple(args.n, k, args.eps)
    _write(io.emit_tuple(t, args.eps, {"construction": "extremal", "n": args.n, "k": k}), args.out)
    return EXIT_OK


def cmd_construct_witness(args) -> int:
    if args.real:
        sys_ = witness.equiangular_real(args.d, args.c)
    else:
        sys_ = witness.equiangular_complex(args.d, args.c)
    params = witness.t_max(args.eps, args.c)
    t = params.t_max if args.t is None else args.t
    dens = witness.witness_tuple(sys_, t)
    meta = {
        "construction": "real-equiangular" if args.real else "complex-equiangular",
        "d": args.d, "c": repr(args.c), "t": repr(t), "t_max": repr(params.t_max),
    }
    _write(io.emit_tuple(dens, args.eps, meta), args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    t, doc = io.load_tuple(_read(args.input))
    eps = args.eps if args.eps is not None else doc["eps_hint"]
    if eps is None:
        raise CQDPError("no --eps given and the document has no eps_hint")
    if isinstance(t, ClassicalTuple):
        t = t.to_density()
    c = cert.certify_not_ec(
        t, eps,
        theta_grid=cert.default_theta_grid(args.theta_points),
        margin_tol=args.margin_tol,
        dp_tol=args.tol,
        subset=args.subset,
    )
    _write(_dump(c.to_dict()), args.out)
    return EXIT_OK if c.certified else EXIT_NEGATIVE


def _sweep_rows(args):
    q = args.quantity
    if q == "mnc":
        for n, e, th in itertools.product(args.n, args.eps, args.theta):
            yield {"eps": e, "theta": th, "n": n, "kind": "mnc", "value": frontier.mnc_closed(n, e, th)}
    elif q == "m2":
        for e, th in itertools.product(args.eps, args.theta):
            yield {"eps": e, "theta": th, "n": 2, "kind": "m2", "value": frontier.m2_closed(e, th)}
    elif q == "gap-ratio":
        for e in args.eps:
            yield {"eps": e, "kind": "gap-ratio", "value": cert.gap_ratio(e)}
    elif q == "thm1-margin":
        for e in args.eps:
            yield {"eps": e, "theta": 0.5, "n": 3, "d": 2, "kind": "thm1-margin", "value": cert.thm1_margin(e)}
    elif q == "cq-limit":
        for n, e, th in itertools.product(args.n, args.eps, args.theta):
            for c, val in cert.cq_limit_sweep(e, th, n, args.c):
                yield {"eps": e, "theta": th, "n": n, "d": n, "c": c,
                       "t": witness.t_max(e, c).t_max, "kind": "cq-limit", "value": val}


def cmd_sweep(args) -> int:
    _write(io.emit_sweep(list(_sweep_rows(args))), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cqdp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", help="check (CQ) eps-DP and report the minimal eps")
    s.add_argument("--eps", type=real, required=True)
    s.add_argument("--tol", type=real, default=PSD_TOL)
    s.add_argument("--input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fisher", help="pairwise RLD Fisher information matrix")
    s.add_argument("--theta", type=real, required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fisher)

    s = sub.add_parser("classical-max", help="classical supremum of the average pairwise J_theta")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eps", type=real, required=True)
    s.add_argument("--theta", type=real, required=True)
    s.add_argument("--method", choices=("closed", "lp", "grouped"), default="closed")
    s.add_argument("--out", dest="out_json")
    s.set_defaults(func=cmd_classical_max)

    s = sub.add_parser("construct-classical", help="emit the extremal classical eps-DP tuple")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--eps", type=real, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct_classical)

    s = sub.add_parser("construct-witness", help="emit an equiangular CQ eps-DP witness tuple")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--eps", type=real, required=True)
    s.add_argument("--c", type=real, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--t", type=real)
    g.add_argument("--t-max", action="store_true", help="use t = t_max (the default)")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--real", action="store_true", help="d real vectors in R^d")
    g.add_argument("--complex", action="store_true", help="d+1 complex vectors in C^d (default)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct_witness)

    s = sub.add_parser("certify", help="certify that a CQ eps-DP tuple is not essentially classical")
    s.add_argument("--eps", type=real)
    s.add_argument("--input", required=True)
    s.add_argument("--theta-points", type=int, default=cert.DEFAULT_THETA_POINTS)
    s.add_argument("--margin-tol", type=real, default=cert.MARGIN_TOL)
    s.add_argument("--tol", type=real, default=PSD_TOL)
    s.add_argument("--subset", type=int_list)
    s.add_argument("--out")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", help="tabulate closed-form quantities over a grid as CSV")
    s.add_argument("--quantity", required=True, choices=("mnc", "m2", "gap-ratio", "thm1-margin", "cq-limit"))
    s.add_argument("--n", type=int_list, default=[3])
    s.add_argument("--eps", type=real_list, default=[math.log(2)])
    s.add_argument("--theta", type=real_list, default=[0.5])
    s.add_argument("--c", type=real_list, default=[1 - 10.0**-j for j in range(1, 7)])
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (CQDPError, OSError, ValueError) as exc:
        print(f"cqdp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
