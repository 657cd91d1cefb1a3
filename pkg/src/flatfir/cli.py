"""Command-line interface: design runs, degree tables, identity checks, response export.

All artifacts are deterministic for a fixed seed and configuration: no
timestamps, fixed key order, decimal strings for every non-integer value
(degree-112 runs have coefficients far beyond machine words).
"""

from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import os
import sys
from fractions import Fraction

from .diffops import (bracket_matrix, bracket_matrix_shifted, predicted_det,
                      predicted_det_shifted, proportional,
                      verify_bracket_identities, verify_rank_drops)
from .errors import (EliminationFailure, FlatfirError, ParamError,
                     VerificationFailure)
from .exactalg import poly_gcd, squarefree_part
from .eliminate import eliminate, select_backend
from .solve import fraction_to_decimal, magnitude_response, solve_filters
from .system import DesignParams

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_ELIMINATION = 3
EXIT_VERIFICATION = 4


def _write_artifact(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _decimal(x: Fraction, digits: int) -> str:
    return fraction_to_decimal(x, digits)


def cmd_design(args) -> int:
    params = DesignParams(args.K, args.L, args.M)
    if args.M <= args.L:
        raise ParamError("design needs M > L")
    backend = args.backend or select_backend(params)
    elim = eliminate(params, seed=args.seed, backend=backend)
    solutions = solve_filters(elim, precision_bits=args.precision_bits,
                              samples=args.samples)
    digits = max(12, args.precision_bits * 3 // 20)
    report = {
        "params": {"K": params.K, "L": params.L, "M": params.M, "N": params.N},
        "region": params.region,
        "backend": elim.backend,
        "degree": elim.stripped.degree,
        "polynomial": [str(c.numerator) for c in elim.stripped.coeffs],
        "roots": [
            {
                "t": s.t_decimal,
                "interval": [str(s.root.lo), str(s.root.hi)],
                "partner": s.partner,
            }
            for s in solutions
        ],
        "solutions": [
            {
                "moments": [_decimal(m.mid, digits) for m in s.moments],
                "coeffs": [_decimal(c.mid, digits) for c in s.coeffs],
                "response_class": s.response_class,
            }
            for s in solutions
        ],
    }
    _write_artifact(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def _degree_cell(conn, K: int, L: int, M: int, seed: int) -> None:
    try:
        params = DesignParams(K, L, M)
        elim = eliminate(params, seed=seed)
        conn.send({"degree": elim.stripped.degree, "backend": elim.backend})
    except FlatfirError as exc:
        conn.send({"error": f"{type(exc).__name__}: {exc}"})


def cmd_degree_table(args) -> int:
    l_lo, l_hi = args.L_range
    m_lo, m_hi = args.M_range
    cells = []
    for M in range(m_lo, m_hi + 1):
        for L in range(l_lo, l_hi + 1):
            if L <= M:
                cells.append((M, L))
    workers = max(1, int(os.environ.get("FLATFIR_WORKERS", "1")))
    results: dict[tuple, dict] = {}
    ctx = mp.get_context("fork")
    for start in range(0, len(cells), workers):
        wave = cells[start:start + workers]
        procs = []
        for M, L in wave:
            parent, child = ctx.Pipe()
            proc = ctx.Process(target=_degree_cell,
                               args=(child, args.K, L, M, args.seed))
            proc.start()
            procs.append((M, L, proc, parent))
        for M, L, proc, parent in procs:
            proc.join(args.budget_seconds)
            if proc.is_alive():
                proc.terminate()
                proc.join()
                results[(M, L)] = {"status": "skipped"}
            elif parent.poll():
                cell = parent.recv()
                cell["status"] = "error" if "error" in cell else "ok"
                results[(M, L)] = cell
            else:
                results[(M, L)] = {"status": "error"}
    table = {
        "K": args.K,
        "L_range": [l_lo, l_hi],
        "M_range": [m_lo, m_hi],
        "cells": [
            {"M": M, "L": L, **results[(M, L)]}
            for M in range(m_lo, m_hi + 1)
            for L in range(l_lo, l_hi + 1)
            if (M, L) in results
        ],
    }
    _write_artifact(json.dumps(table, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_verify_findiff(args) -> int:
    checks = 0
    for K in range(1, args.max_K + 1):
        for l in range(0, args.max_l + 1):
            for j in range(0, l + 1):
                verify_bracket_identities(j, l, K)
                checks += 1
    for s in range(1, args.max_s + 1):
        for m in range(0, args.max_m + 1):
            for K in range(1, args.max_K + 1):
                a = bracket_matrix(s, m, K)
                d = a.det()
                if not proportional(d, predicted_det(s, m, K)):
                    raise VerificationFailure(
                        f"determinant mismatch at (s={s}, m={m}, K={K})")
                if m >= 1:
                    dt = bracket_matrix_shifted(s, m, K).det()
                    if not proportional(dt, predicted_det_shifted(s, m, K)):
                        raise VerificationFailure(
                            f"shifted determinant mismatch at (s={s}, m={m}, K={K})")
                snf = a.smith_normal_form()
                if snf[m] != squarefree_part(d):
                    raise VerificationFailure(
                        f"final invariant factor mismatch at (s={s}, m={m}, K={K})")
                if m >= 1:
                    repeated = poly_gcd(d, d.derivative())
                    expect = squarefree_part(repeated) if repeated.degree > 0 \
                        else repeated.monic()
                    if snf[m - 1] != expect:
                        raise VerificationFailure(
                            f"repeated-root invariant factor mismatch at (s={s}, m={m}, K={K})")
                verify_rank_drops(s, m, K)
                checks += 3
    report = {"status": "pass", "checks": checks,
              "grid": {"s": args.max_s, "m": args.max_m, "K": args.max_K,
                       "l": args.max_l}}
    _write_artifact(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_response(args) -> int:
    try:
        with open(args.design) as fh:
            report = json.load(fh)
    except OSError as exc:
        raise ParamError(f"cannot read design artifact: {exc}") from exc
    solutions = report.get("solutions", [])
    if not 0 <= args.solution < len(solutions):
        raise ParamError(f"solution index {args.solution} out of range")
    coeffs = [Fraction(c) for c in solutions[args.solution]["coeffs"]]
    samples = magnitude_response(coeffs, args.samples, args.precision_bits)
    digits = max(12, args.precision_bits * 3 // 20)
    lines = ["omega,response"]
    with_prec = []
    import mpmath
    with mpmath.workprec(args.precision_bits):
        for w, v in samples:
            with_prec.append((mpmath.nstr(w, digits, strip_zeros=False),
                              mpmath.nstr(v, digits, strip_zeros=False)))
    for w, v in with_prec:
        lines.append(f"{w},{v}")
    _write_artifact("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _range_pair(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatfir",
        description="Exact design of maximally flat reduced-delay FIR filters "
                    "via resultant elimination.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--precision-bits", dest="precision_bits", type=int, default=256)
        p.add_argument("--samples", type=int, default=512)
        p.add_argument("--output", default=None, help="artifact path (default stdout)")

    p = sub.add_parser("design", help="solve one (K, L, M) design exactly")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--backend", choices=["region1_linear", "diag_q3", "diag_q4", "dixon"],
                   default=None, help="override the automatic back-end choice")
    common(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("degree-table", help="degrees of the moment polynomial over a grid")
    p.add_argument("--K", type=int, default=1)
    p.add_argument("--L-range", dest="L_range", type=_range_pair, required=True,
                   metavar="LO:HI")
    p.add_argument("--M-range", dest="M_range", type=_range_pair, required=True,
                   metavar="LO:HI")
    p.add_argument("--budget-seconds", dest="budget_seconds", type=float, default=600.0)
    common(p)
    p.set_defaults(func=cmd_degree_table)

    p = sub.add_parser("verify-findiff", help="exact checks of the difference-matrix identities")
    p.add_argument("--max-s", dest="max_s", type=int, default=3)
    p.add_argument("--max-m", dest="max_m", type=int, default=3)
    p.add_argument("--max-K", dest="max_K", type=int, default=3)
    p.add_argument("--max-l", dest="max_l", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_verify_findiff)

    p = sub.add_parser("response", help="CSV magnitude-response samples from a design artifact")
    p.add_argument("--design", required=True, help="path to a design JSON artifact")
    p.add_argument("--solution", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_response)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParamError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except EliminationFailure as exc:
        print(f"elimination failure: {exc}", file=sys.stderr)
        return EXIT_ELIMINATION
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
