"""``bbcodes`` command-line interface.

Structured results go to stdout (or ``--out``); progress and warnings go to
stderr. Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 distance budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import codes, decoder, distance, polyring, search, sim
from .codes import CodeSpec

log = logging.getLogger("bbcodes")

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3
SMALL_N = 56


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class TableRow:
    table: str
    row: int
    spec: CodeSpec
    n: int
    k: int
    d: int

    @property
    def label(self) -> str:
        return f"{self.table}:{self.row}"


def load_fixtures(tables: list[str] | None = None) -> list[TableRow]:
    """Table rows shipped in ``data/tables.json``."""
    text = resources.files("bbcodes").joinpath("data/tables.json").read_text()
    out = []
    for doc in json.loads(text):
        if tables and doc["table"] not in tables:
            continue
        spec = CodeSpec.from_json(doc)
        if spec.n != doc["n"]:
            raise ValueError(f"fixture {doc['table']}:{doc['row']} has n != 2lm")
        out.append(TableRow(doc["table"], doc["row"], spec, doc["n"], doc["k"], doc["d"]))
    return out


def load_spec(text: str) -> CodeSpec:
    """A spec from a JSON file, inline JSON, or ``table:<id>:<row>``."""
    try:
        if text.startswith("table:"):
            _, table, row = text.split(":")
            for r in load_fixtures([table]):
                if r.row == int(row):
                    return r.spec
            raise InvalidInput(f"no fixture row {text}")
        if text.lstrip().startswith("{"):
            return CodeSpec.from_json(text)
        return CodeSpec.from_json(Path(text).read_text())
    except InvalidInput:
        raise
    except (ValueError, KeyError, OSError, TypeError) as exc:
        raise InvalidInput(f"invalid code spec {text!r}: {exc}") from None


def load_matrix(path: str, which: str = "h_x"):
    text = Path(path).read_text()
    try:
        if "[h_x]" in text:
            return getattr(codes.checks_from_text(text), which)
        first = text.strip().split("\n")[0].split()
        if len(first) == 2 and all(t.isdigit() for t in first):
            return codes.matrix_from_alist(text)
        return codes.matrix_from_dense_text(text)
    except (ValueError, IndexError) as exc:
        raise InvalidInput(f"cannot read matrix {path}: {exc}") from None


# ---------------------------------------------------------------------------
# output


def _emit(args, payload, *, rows: list[dict] | None = None, text: str | None = None) -> None:
    fmt = args.format
    if fmt == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out = buf.getvalue()
    elif fmt == "text" and text is not None:
        out = text.rstrip("\n") + "\n"
    else:
        out = json.dumps(payload, indent=2, default=_jsonable) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj)}")


def _decoder_config(args) -> decoder.DecoderConfig:
    osd, order = decoder.parse_osd(args.osd)
    scaling = args.scaling if args.scaling == "variable" else float(args.scaling)
    return decoder.DecoderConfig(args.iters, scaling, osd, order or 7)


def _support(v) -> list[int]:
    return [int(i) for i in np.flatnonzero(v)]


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args) -> int:
    spec = load_spec(args.spec)
    pc = codes.build_checks(spec)
    k = codes.dimension(pc)
    if k == 0:
        log.warning("code encodes no logical qubits (k = 0)")
    if args.matrix_out:
        Path(args.matrix_out).write_text(codes.checks_to_text(pc, args.matrix_format))
    payload = {"spec": spec.to_json(), "n": pc.n, "k": k,
               "row_weight": int(pc.h_x.row_weights().max()),
               "col_weight": int(pc.h_x.col_weights().max()),
               "connected": codes.is_connected(pc)}
    if args.matrix_out is None and args.out is None and args.format == "text":
        sys.stdout.write(codes.checks_to_text(pc, args.matrix_format))
        return EXIT_OK
    _emit(args, payload, text=f"[[{pc.n},{k}]] {json.dumps(spec.to_json())}")
    return EXIT_OK


def cmd_params(args) -> int:
    spec = load_spec(args.spec)
    params = codes.code_params(spec)
    if params.k == 0:
        log.warning("code encodes no logical qubits (k = 0)")
    payload = {"n": params.n, "k": params.k}
    if spec.origin == "coprime-bb":
        g = codes.gcd_with_modulus(spec.a_uni, spec.b_uni, spec.l * spec.m)
        payload["g"] = polyring.format_uni(g)
    _emit(args, payload, text=f"[[{params.n},{params.k}]]")
    return EXIT_OK


def cmd_factor(args) -> int:
    if args.n < 1:
        raise InvalidInput("n must be >= 1")
    fact = polyring.factorize_circulant(args.n)
    factors = [{"factor": polyring.format_uni(f, "x"), "degree": f.degree, "multiplicity": e}
               for f, e in fact.factors]
    payload = {"n": args.n, "count": len(factors), "factors": factors}
    text = " * ".join(f"({f['factor']})" + (f"^{f['multiplicity']}" if f["multiplicity"] > 1 else "")
                      for f in factors)
    _emit(args, payload, rows=factors, text=f"x^{args.n}+1 = {text}")
    return EXIT_OK


def _search_config(args, **extra) -> search.SearchConfig:
    return search.SearchConfig(args.l, args.m, tau_k=args.tau_k, tau_d=args.tau_d,
                               probe_trials=args.trials, seed=args.seed,
                               connectivity_filter=not args.no_connectivity_filter, **extra)


def _emit_hits(args, hits) -> None:
    docs = [h.to_json() for h in hits]
    rows = [{"key": d["canonical_key"], "n": d["n"], "k": d["k"], "d_upper": d["d_upper"]}
            for d in docs]
    text = "\n".join(f"[[{d['n']},{d['k']},<={d['d_upper']}]] {d['canonical_key']}" for d in docs)
    _emit(args, {"hits": docs}, rows=rows, text=text or "no hits")


def cmd_search(args) -> int:
    t0 = time.time()
    hits = search.search_bb(_search_config(args))
    log.info("%d hits in %.1f s", len(hits), time.time() - t0)
    _emit_hits(args, hits)
    return EXIT_OK


def cmd_search_coprime(args) -> int:
    N = args.l * args.m
    restriction = None
    if args.g:
        restriction = polyring.parse_uni(args.g, None)
    elif args.g_degree:
        lo, hi = (int(t) for t in args.g_degree.split(":"))
        restriction = (lo, hi)
    config = _search_config(args, g_restriction=restriction,
                            irreducible_only=args.irreducible_only)
    log.info("coprime search over pi^%d+1", N)
    _emit_hits(args, search.search_coprime(config))
    return EXIT_OK


def cmd_distance(args) -> int:
    spec = load_spec(args.spec)
    ctx = distance.LogicalTestContext(codes.build_checks(spec))
    if ctx.k == 0:
        raise InvalidInput("code has k = 0; distance is undefined")
    payload = {"spec": spec.to_json(), "n": ctx.n, "k": ctx.k}
    if args.exact:
        try:
            rep = distance.exact_distance(ctx, args.wmax, budget=args.budget)
        except distance.DistanceBudgetExceeded as exc:
            payload.update(status="budget_exceeded", partial=True, message=str(exc))
            _emit(args, payload, text=f"budget exceeded: {exc}")
            return EXIT_BUDGET
        payload.update(method="exhaustive", d=rep.d_exact, lower_bound=rep.lower_bound,
                       kind=rep.kind, witness=_support(rep.witness) if rep.d_exact else None)
        text = f"d = {rep.d_exact}" if rep.d_exact else f"d > {args.wmax}"
    else:
        rep = distance.distance_upperbound(ctx, 1, args.trials, seed=args.seed,
                                           target=args.target, workers=args.threads)
        payload.update(method="decoder-probe", d_upper=rep.d_upper, trials=rep.trials_used,
                       seed=args.seed, kind=rep.kind,
                       witness=_support(rep.witness) if rep.witness is not None else None)
        text = f"d <= {rep.d_upper}" if rep.d_upper else "no logical found"
    _emit(args, payload, text=text)
    return EXIT_OK


def _read_syndrome(text: str, m: int) -> np.ndarray:
    path = Path(text)
    if path.exists():
        text = path.read_text()
    bits = "".join(ch for ch in text if ch in "01")
    if len(bits) != m:
        raise InvalidInput(f"syndrome has {len(bits)} bits, H has {m} rows")
    return np.array([c == "1" for c in bits], dtype=np.uint8)


def cmd_decode(args) -> int:
    H = load_matrix(args.H, args.which)
    s = _read_syndrome(args.syndrome, H.rows)
    out = decoder.decode(H, s, _decoder_config(args))
    est = out.estimate
    ok = not np.any(((H.to_dense().astype(np.int64) @ est) & 1) ^ s)
    payload = {"estimate": "".join(map(str, est)), "weight": int(est.sum()),
               "support": _support(est), "bp_converged": out.bp_converged,
               "iterations": out.iterations_run, "syndrome_satisfied": bool(ok)}
    _emit(args, payload, text=payload["estimate"])
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    try:
        p_list = sim.parse_p_range(args.p)
    except ValueError as exc:
        raise InvalidInput(f"bad --p {args.p!r}: {exc}") from None
    if codes.code_params(spec).k == 0:
        raise InvalidInput("code has k = 0; nothing can fail logically")
    log.info("master seed %d", args.seed)
    results = sim.sweep(spec, p_list, _decoder_config(args), args.stop_errors, args.seed,
                        max_shots=args.max_shots, x_only=args.x_only, workers=args.threads)
    rows = [r.row() for r in results]
    if args.format == "json":
        _emit(args, {"spec": spec.to_json(), "master_seed": args.seed, "rows": rows})
    else:
        text = sim.to_csv(results)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def verify_row(row: TableRow, trials: int, seed: int, budget: int,
               lb_budget: int = 2_000_000) -> dict:
    """Check one table row: exact ``k``; exact ``d`` for small ``n``, else a bound."""
    pc = codes.build_checks(row.spec)
    k = codes.dimension(pc)
    rec = {"table": row.table, "row": row.row, "n": row.n, "k_table": row.k, "k": k,
           "d_table": row.d, "spec": row.spec.to_json(), "k_match": k == row.k}
    if k != row.k:
        rec.update(status="mismatch", reason="dimension differs")
        return rec
    ctx = distance.LogicalTestContext(pc)
    if row.n <= SMALL_N:
        rep = distance.exact_distance(ctx, row.d, budget=budget)
        rec.update(method="exhaustive", d=rep.d_exact)
        rec["status"] = "exact match" if rep.d_exact == row.d else "mismatch"
        return rec
    w_lb = 1
    while w_lb + 1 < row.d and distance.subset_count(row.n, (w_lb + 2) // 2) <= lb_budget:
        w_lb += 1
    lb = distance.exact_distance(ctx, w_lb, budget=lb_budget)
    lower = lb.lower_bound if lb.d_exact is None else lb.d_exact
    rep = distance.distance_upperbound(ctx, 1, trials, seed=seed, target=row.d)
    rec.update(method="decoder-probe", d_upper=rep.d_upper, lower_bound=lower,
               trials=rep.trials_used, seed=seed)
    if lb.d_exact is not None or (rep.d_upper is not None and rep.d_upper < row.d):
        rec["status"] = "mismatch"
    elif rep.d_upper == row.d:
        rec["status"] = "bounded consistent"
    else:
        rec["status"] = "unconfirmed"
    return rec


def cmd_verify_tables(args) -> int:
    rows = load_fixtures(args.table)
    report = []
    for row in rows:
        t0 = time.time()
        rec = verify_row(row, args.trials, args.seed, args.budget)
        rec["seconds"] = round(time.time() - t0, 2)
        log.info("%s %s [[%d,%d,%d]]: %s", row.table, row.row, row.n, row.k, row.d, rec["status"])
        report.append(rec)
    flat = [{key: r.get(key) for key in ("table", "row", "n", "k_table", "k", "d_table", "d",
                                         "d_upper", "lower_bound", "status")} for r in report]
    text = "\n".join(f"{r['table']}:{r['row']} [[{r['n']},{r['k_table']},{r['d_table']}]] "
                     f"k={r['k']} -> {r['status']}" for r in flat)
    _emit(args, {"seed": args.seed, "rows": report}, rows=flat, text=text)
    return EXIT_MISMATCH if any(r["status"] == "mismatch" for r in report) else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(suppress: bool) -> argparse.ArgumentParser:
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)  # noqa: E731
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=dflt(0), help="master random seed")
    p.add_argument("--threads", type=int, default=dflt(1), help="worker threads")
    p.add_argument("--out", default=dflt(None), help="write the result here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"), default=dflt(None),
                   help="output format (default: csv for simulate, json otherwise)")
    p.add_argument("-v", "--verbose", action="store_true", default=dflt(False))
    return p


def _add_decoder_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--iters", type=int, default=1000, help="max min-sum iterations")
    p.add_argument("--scaling", default="variable", help="'variable' or a factor in (0, 1]")
    p.add_argument("--osd", default="cs7", help="none, osd0 or cs<order>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bbcodes", parents=[_common(False)],
                                     description="Bivariate-bicycle quantum code toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)
    spec_help = "code spec: JSON file, inline JSON, or table:<id>:<row>"

    p = sub.add_parser("construct", parents=[common], help="build H_X and H_Z")
    p.add_argument("--spec", required=True, help=spec_help)
    p.add_argument("--matrix-out", help="write both check matrices to this file")
    p.add_argument("--matrix-format", choices=("alist", "dense"), default="alist")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("params", parents=[common], help="print n and k")
    p.add_argument("--spec", required=True, help=spec_help)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("factor", parents=[common], help="factor x^n + 1 over GF(2)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_factor)

    for name, func in (("search", cmd_search), ("search-coprime", cmd_search_coprime)):
        p = sub.add_parser(name, parents=[common], help=f"{name.replace('-', ' ')} for codes")
        p.add_argument("--l", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--tau-k", type=int, default=2)
        p.add_argument("--tau-d", type=int, default=1)
        p.add_argument("--trials", type=int, default=10_000, help="distance probes per candidate")
        p.add_argument("--no-connectivity-filter", action="store_true")
        if name == "search-coprime":
            p.add_argument("--g", help="fix g(pi), e.g. 1+p+p2")
            p.add_argument("--g-degree", help="degree range lo:hi for g")
            p.add_argument("--irreducible-only", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("distance", parents=[common], help="exact distance or an upper bound")
    p.add_argument("--spec", required=True, help=spec_help)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--probe", action="store_true")
    p.add_argument("--wmax", type=int, default=8)
    p.add_argument("--budget", type=int, default=distance.DEFAULT_BUDGET)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--target", type=int, help="stop probing once this weight is reached")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("decode", parents=[common], help="BP-OSD decode one syndrome")
    p.add_argument("--H", required=True, help="matrix file (alist, dense or checks file)")
    p.add_argument("--which", choices=("h_x", "h_z"), default="h_x")
    p.add_argument("--syndrome", required=True, help="0/1 string or a file holding one")
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", parents=[common], help="code-capacity logical error rates")
    p.add_argument("--spec", required=True, help=spec_help)
    p.add_argument("--p", required=True, help="start:stop:step or comma list")
    p.add_argument("--stop-errors", type=int, default=100)
    p.add_argument("--max-shots", type=int, default=10_000_000)
    p.add_argument("--x-only", action="store_true")
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-tables", parents=[common], help="check the shipped code tables")
    p.add_argument("--table", action="append", help="restrict to a table id (repeatable)")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--budget", type=int, default=distance.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify_tables)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "simulate" else "json"
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (InvalidInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except distance.DistanceBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
