"""Command-line interface: linearize, solve, verify, bench.

File formats are the JSON schemas of `detrep.serialize`.  The environment
variable DETREP_LOG selects the log level.  Exit codes: 0 success, 2
completed with warnings, 1 failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import monomial_tree, representation_tree, serialize, solver, twopar
from .polynomials import BivariatePolynomial, MatrixBivariatePolynomial

logger = logging.getLogger("detrep.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2


def _configure_logging():
    level = os.environ.get("DETREP_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _emit(payload, output: str | None):
    if output:
        serialize.dump(payload, output)
    else:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")


def cmd_linearize(args) -> int:
    try:
        poly = serialize.polynomial_from_json(serialize.load(args.input))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read polynomial file {args.input!r}: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    if args.method == "tree":
        if args.sparse:
            tree = monomial_tree.sparse_tree_heuristic(poly)
        else:
            tree = monomial_tree.generic_tree(poly.degree)
        pencil = monomial_tree.assemble_pencil_from_monomial_tree(poly, tree)
        meta = {"method": "tree", "tree": serialize.monomial_tree_to_json(tree)}
    else:  # alg2
        if isinstance(poly, MatrixBivariatePolynomial):
            print(
                "error: method 'alg2' supports scalar polynomials only", file=sys.stderr
            )
            return EXIT_FAILURE
        tree = representation_tree.build_linearization_tree(poly)
        pencil = representation_tree.assemble_pencil_from_representation_tree(tree)
        meta = {"method": "alg2", "tree": serialize.representation_tree_to_json(tree)}

    payload = serialize.pencil_to_json(pencil)
    payload.update(meta)
    _emit(payload, args.output)
    return EXIT_OK


def _solve_options(args) -> solver.SolveOptions:
    opts = solver.SolveOptions()
    if args.method == "tree":
        opts.linearization = "lin1"
    elif args.method == "alg2":
        opts.linearization = "lin2"
    if args.rank_tol is not None:
        opts.rank_tol = args.rank_tol
    if args.cluster_tol is not None:
        opts.cluster_tol = args.cluster_tol
    if args.newton_steps is not None:
        opts.newton_steps = args.newton_steps
    if args.residual_accept is not None:
        opts.residual_accept = args.residual_accept
    opts.swap_variables = args.swap_xy
    return opts


def cmd_solve(args) -> int:
    try:
        p, q, file_opts = serialize.system_from_json(serialize.load(args.input))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read system file {args.input!r}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    opts = _solve_options(args)
    for key, val in file_opts.items():
        if hasattr(opts, key):
            setattr(opts, key, val)

    diagnostics = solver.SolveDiagnostics()
    try:
        records = solver.solve_system(p, q, opts, diagnostics)
    except (solver.DegenerateSystemError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    _emit(serialize.roots_to_json(records), args.output)

    if args.dump_deltas:
        pen_p = solver.linearize_polynomial(p, opts.linearization)
        pen_q = solver.linearize_polynomial(q, opts.linearization)
        deltas = twopar.operator_determinants(
            twopar.TwoParameterProblem.from_pencils(pen_p, pen_q)
        )
        dump = {
            "delta0": serialize._matrix_to_json(deltas.delta0),
            "delta1": serialize._matrix_to_json(deltas.delta1),
            "delta2": serialize._matrix_to_json(deltas.delta2),
            "staircase": diagnostics.staircase_steps,
            "warnings": diagnostics.warnings,
        }
        serialize.dump(dump, args.dump_deltas)

    unrefined = sum(1 for r in records if not r.refined)
    if diagnostics.warnings or unrefined:
        for w in diagnostics.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if unrefined:
            print(f"warning: {unrefined} root(s) left unrefined", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        pencil = serialize.pencil_from_json(serialize.load(args.pencil))
        poly = serialize.polynomial_from_json(serialize.load(args.polynomial))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    block = getattr(poly, "block_size", 1)
    if pencil.block_size != block:
        print(
            f"error: pencil block size {pencil.block_size} does not match "
            f"polynomial block size {block}",
            file=sys.stderr,
        )
        return EXIT_FAILURE

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    matrix_case = isinstance(poly, MatrixBivariatePolynomial)
    for _ in range(args.samples):
        x = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        y = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        target = np.linalg.det(poly(x, y)) if matrix_case else poly(x, y)
        value = pencil.determinant(x, y)
        denom = max(abs(target), 1e-30)
        worst = max(worst, abs(value - target) / denom)
    print(f"max relative determinant error over {args.samples} samples: {worst:.3e}")
    return EXIT_OK if worst <= args.tolerance else EXIT_FAILURE


def _bench_row(n: int, seed: int, sizes_only: bool, newton_steps: int) -> dict:
    rng = np.random.default_rng((seed, n))
    def rand_poly():
        table = np.zeros((n + 1, n + 1))
        for j in range(n + 1):
            for k in range(n + 1 - j):
                table[j, k] = rng.uniform(0.0, 1.0)
        return BivariatePolynomial(table)

    p, q = rand_poly(), rand_poly()
    lin1_size = monomial_tree.generic_tree_size(n)
    lin2_size = representation_tree.linearize(p).size
    row = {
        "degree": n,
        "lin1_size": lin1_size,
        "lin2_size": lin2_size,
        "lin1_delta_size": lin1_size * lin1_size,
        "lin2_delta_size": lin2_size * lin2_size,
    }
    if sizes_only:
        return row
    for method in ("lin1", "lin2"):
        opts = solver.SolveOptions(linearization=method, newton_steps=newton_steps)
        start = time.perf_counter()
        records = solver.solve_system(p, q, opts)
        elapsed = time.perf_counter() - start
        row[f"{method}_roots"] = sum(r.multiplicity for r in records)
        row[f"{method}_max_accuracy"] = max(r.accuracy for r in records)
        row[f"{method}_seconds"] = elapsed
    return row


def cmd_bench(args) -> int:
    lo, hi = args.degrees
    if not (3 <= lo <= hi <= 12):
        print("error: degree range must satisfy 3 <= a <= b <= 12", file=sys.stderr)
        return EXIT_FAILURE
    degrees = list(range(lo, hi + 1))
    if args.jobs > 1 and not args.sizes_only:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(
                pool.map(
                    lambda n: _bench_row(n, args.seed, args.sizes_only, args.newton_steps
                                          if args.newton_steps is not None else 2),
                    degrees,
                )
            )
    else:
        rows = [
            _bench_row(n, args.seed, args.sizes_only,
                       args.newton_steps if args.newton_steps is not None else 2)
            for n in degrees
        ]

    headers = list(rows[0].keys())
    print("  ".join(f"{h:>18}" for h in headers))
    for row in rows:
        cells = []
        for h in headers:
            val = row.get(h, "")
            if isinstance(val, float):
                cells.append(f"{val:>18.3e}")
            else:
                cells.append(f"{val:>18}")
        print("  ".join(cells))
    if args.output:
        serialize.dump(rows, args.output)
    return EXIT_OK


def _parse_degree_range(text: str):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    value = int(text)
    return value, value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detrep",
        description="Determinantal representations of bivariate polynomials and "
        "eigenvalue-based root finding for systems of two of them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_lin = sub.add_parser("linearize", help="build a pencil A + xB + yC for a polynomial file")
    p_lin.add_argument("input", help="polynomial JSON file")
    p_lin.add_argument("--method", choices=("tree", "alg2"), default="tree")
    p_lin.add_argument("--sparse", action="store_true",
                       help="with --method tree, use the small-tree heuristic")
    p_lin.add_argument("--output", help="write the pencil JSON here instead of stdout")
    p_lin.set_defaults(func=cmd_linearize)

    p_solve = sub.add_parser("solve", help="compute all roots of a two-polynomial system file")
    p_solve.add_argument("input", help="system JSON file with entries 'p' and 'q'")
    p_solve.add_argument("--method", choices=("auto", "tree", "alg2"), default="auto")
    p_solve.add_argument("--rank-tol", type=float, default=None)
    p_solve.add_argument("--cluster-tol", type=float, default=None)
    p_solve.add_argument("--newton-steps", type=int, default=None)
    p_solve.add_argument("--residual-accept", type=float, default=None)
    p_solve.add_argument("--swap-xy", action="store_true")
    p_solve.add_argument("--dump-deltas", metavar="PATH",
                         help="dump the operator determinants to a JSON file")
    p_solve.add_argument("--output", help="write the roots JSON here instead of stdout")
    p_solve.set_defaults(func=cmd_solve)

    p_ver = sub.add_parser("verify", help="check det(A + xB + yC) against a polynomial")
    p_ver.add_argument("pencil", help="pencil JSON file")
    p_ver.add_argument("polynomial", help="polynomial JSON file")
    p_ver.add_argument("--samples", type=int, default=20)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--tolerance", type=float, default=1e-8)
    p_ver.set_defaults(func=cmd_verify)

    p_bench = sub.add_parser("bench", help="size table and solve statistics for random systems")
    p_bench.add_argument("--degrees", type=_parse_degree_range, default=(3, 10),
                         metavar="A..B", help="degree range, e.g. 3..10")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--sizes-only", action="store_true",
                         help="report only the deterministic size columns")
    p_bench.add_argument("--newton-steps", type=int, default=None)
    p_bench.add_argument("--jobs", type=int, default=1)
    p_bench.add_argument("--output", help="also write rows as JSON here")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
