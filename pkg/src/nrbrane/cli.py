"""Command line: strata tables, limits, wobbly-locus search and the self-check.

Exit codes: 0 ok, 1 invariant failure, 2 configuration error,
3 no nodal base point, 4 bad request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import encode
from .config import build, desk_config, load_config
from .errors import (
    BudgetExhausted,
    ConfigError,
    InadmissibleDelta,
    NRBraneError,
    NotNodalIntegral,
    ZeroSection,
)
from .selfcheck import run_selfcheck
from .strata import FixedPointVHS, StrictlySemistable, Unstable, enumerate_strata, strata_rows
from .wobbly_bbb import search_wobbly

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_SAMPLING, EXIT_REQUEST = 0, 1, 2, 3, 4


def _verdict_name(v) -> str:
    if isinstance(v, Unstable):
        return f"Unstable({v.side})"
    if isinstance(v, StrictlySemistable):
        return f"StrictlySemistable({v.side})"
    return "Stable"


def encode_row(row: dict) -> dict:
    rep = row["report"]
    lim = rep.limit
    if isinstance(lim, FixedPointVHS):
        limit = {"L1_deg": lim.L1.degree, "L2_deg": lim.L2.degree, "phi_divisor": encode.divisor(lim.phi_divisor)}
    else:
        limit = "semistable"
    return {
        "D": encode.divisor(row["D"]),
        "dim": row["dim"],
        "Dprime": encode.divisor(row["Dprime"]),
        "verdict": _verdict_name(rep.verdict),
        "destabilizer": encode.pic(rep.verdict.destabilizer) if isinstance(rep.verdict, Unstable) else None,
        "limit": limit,
        "label": rep.label,
        "wobbly": rep.wobbly,
        "nilpotent_witness_dim": rep.witness.dimension if rep.witness is not None else None,
        "contains_very_stable": row["contains_very_stable"],
    }


def _rows_worker(args):
    bp, M, masks = args
    return [encode_row(r) for r in strata_rows(bp, M, masks)]


def compute_rows(bp, M, parallel: bool = False) -> list:
    n = len(enumerate_strata(bp, M))
    if not parallel or n < 2:
        return [encode_row(r) for r in strata_rows(bp, M)]
    chunks = [list(range(i, n, 4)) for i in range(min(4, n))]
    with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
        parts = list(ex.map(_rows_worker, [(bp, M, c) for c in chunks]))
    by_index = {}
    for chunk, rows in zip(chunks, parts):
        by_index.update(zip(chunk, rows))
    return [by_index[i] for i in range(n)]


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    return _dumps(v)


def render(header: dict, rows: list, columns: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({**header, "rows": rows}, sort_keys=True, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
        return buf.getvalue().rstrip("\n")
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    head = [f"# {k}: {_cell(v)}" for k, v in sorted(header.items())]
    return "\n".join(head + lines)


def _setup(args):
    cfg = load_config(args.config) if args.config else desk_config(2)
    if args.seed is not None:
        cfg.seed = args.seed
    fmt = args.format or cfg.format
    return build(cfg), fmt


def _header(setup, bp=None) -> dict:
    C = setup.curve
    h = {
        "p": C.p,
        "genus": C.g,
        "f": encode.poly(C.f),
        "S": list(setup.model.S),
        "M": encode.pic(setup.M),
        "seed": setup.config.seed,
    }
    if bp is not None:
        h["a"] = [encode.elem(c) for c in bp.a_coeffs]
        h["b"] = [encode.elem(c) for c in bp.b_coeffs]
        h["div_b"] = encode.divisor(bp.div_of_b())
    return h


STRATA_COLUMNS = ["D", "dim", "Dprime", "verdict", "limit", "label", "wobbly", "contains_very_stable"]
LIMIT_COLUMNS = ["D", "dim", "limit", "label", "wobbly"]


def cmd_strata(args, limits_only: bool = False) -> int:
    setup, fmt = _setup(args)
    bp = setup.base_point(random.Random(setup.config.seed))
    if bp.fb.is_zero() or not bp.is_ni():
        raise NotNodalIntegral("the base point has b = 0 or a non-reduced div(b)")
    rows = compute_rows(bp, setup.M, args.parallel)
    cols = LIMIT_COLUMNS if limits_only else STRATA_COLUMNS
    if limits_only:
        rows = [{c: r[c] for c in cols} for r in rows]
    print(render(_header(setup, bp), rows, cols, fmt))
    return EXIT_OK


def cmd_wobbly_search(args) -> int:
    if args.delta is None:
        raise InadmissibleDelta("--delta is required")
    setup, fmt = _setup(args)
    warning = None
    executor = ProcessPoolExecutor(max_workers=4) if args.parallel else None
    try:
        data = search_wobbly(setup.model, args.delta, budget=args.budget, seed=setup.config.seed,
                             ext=args.ext, executor=executor)
    except BudgetExhausted as exc:
        data, warning = exc.partial, f"budget of {args.budget} checks exhausted; results are partial"
    finally:
        if executor is not None:
            executor.shutdown()
    rows = [
        {
            "delta": d.delta,
            "F0": encode.pic(d.F0),
            "R": encode.cover_divisor(d.R),
            "witness_D": encode.divisor(d.witness),
            "det_class": encode.pic(d.det_class),
            "strict_flag": d.strict,
        }
        for d in data
    ]
    header = {**_header(setup), "delta": args.delta, "budget": args.budget,
              "extension": args.ext, "field": f"F_{setup.curve.p}", "warning": warning}
    cols = ["delta", "F0", "R", "witness_D", "det_class", "strict_flag"]
    print(render(header, rows, cols, fmt if args.format else "json"))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    setup, fmt = _setup(args)
    results = run_selfcheck(setup, seed=setup.config.seed)
    rows = [
        {"group": r.name, "passed": r.passed, "failed": r.failed,
         "status": "PASS" if r.ok else "FAIL", "notes": "; ".join(r.notes)}
        for r in results
    ]
    print(render(_header(setup), rows, ["group", "passed", "failed", "status", "notes"], fmt))
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVARIANT


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration (default: the g=2 reference curve)")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--format", choices=("json", "csv", "table"))
    common.add_argument("--parallel", action="store_true", help="use worker processes")

    parser = argparse.ArgumentParser(prog="nrbrane", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("strata", parents=[common], help="one row per stratum of the fibre")
    sub.add_parser("limits", parents=[common], help="limit columns of the strata table")
    ws = sub.add_parser("wobbly-search", parents=[common], help="search the wobbly locus")
    ws.add_argument("--delta", type=int)
    ws.add_argument("--budget", type=int, default=2000)
    ws.add_argument("--ext", type=int, choices=(1, 2), default=1,
                    help="also use conjugate pairs of points over F_p^2")
    sub.add_parser("selfcheck", parents=[common], help="run the invariant suite")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "strata":
            return cmd_strata(args)
        if args.command == "limits":
            return cmd_strata(args, limits_only=True)
        if args.command == "wobbly-search":
            return cmd_wobbly_search(args)
        return cmd_selfcheck(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NotNodalIntegral, ZeroSection) as exc:
        print(f"sampling error: {exc}", file=sys.stderr)
        return EXIT_SAMPLING
    except InadmissibleDelta as exc:
        print(f"bad request: {exc}", file=sys.stderr)
        return EXIT_REQUEST
    except NRBraneError as exc:
        print(f"invariant failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
