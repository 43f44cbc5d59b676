"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .combinatorics import (
    Multidegree,
    count_all,
    count_primitive,
    enumerate_necklaces,
    fold_class,
    necklace_to_string,
    recursion_identity_holds,
)
from .osculants import OsculantRecord, conjugation_pairing, sample_curve
from .pipeline import manifest, random_target, run_experiment, solve
from .series import SparseHypersurface
from .start import START_TOL, build_start_set, start_point
from .system import evaluate, tilde_hypersurface
from .tracker import TrackerConfig

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

log = logging.getLogger("osculants")


class UsageError(Exception):
    pass


def _degree(text: str) -> Multidegree:
    try:
        return Multidegree.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad multidegree {text!r}: {exc}") from None


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be 'lo,hi', got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("range needs lo < hi")
    return lo, hi


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_manifest(path: str | None, doc: dict):
    """CSV outputs carry their manifest in a sidecar file next to them."""
    if path and path != "-":
        Path(path + ".manifest.json").write_text(json.dumps(doc, indent=2) + "\n")


def _tracker_config(args) -> TrackerConfig:
    cfg = TrackerConfig.load(args.config) if args.config else TrackerConfig()
    changes = {}
    if args.gamma_seed is not None:
        changes["gamma_seed"] = args.gamma_seed
    if args.tol is not None:
        changes["newton_tol"] = args.tol
    return cfg.replace(**changes) if changes else cfg


# --- subcommands ---


def cmd_count(args) -> int:
    d = Multidegree.parse(args.d)
    ok = recursion_identity_holds(d)
    print(f"primitive: {count_primitive(d)}, total: {count_all(d)}")
    print(f"recursion identity: {'ok' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_necklaces(args) -> int:
    d = args.degree
    for nk in enumerate_necklaces(d, primitive_only=args.primitive):
        k, _ = fold_class(nk)
        tag = "primitive" if k == 1 else f"{k}-fold"
        print(f"{necklace_to_string(nk)}  {tag}")
    return EXIT_OK


def cmd_verify_start(args) -> int:
    d = args.degree
    f = tilde_hypersurface(d.n)
    nks = enumerate_necklaces(d, primitive_only=True)
    good = 0
    for nk in nks:
        res = evaluate(f, start_point(nk)).max_norm
        if res <= args.tol:
            good += 1
        else:
            print(f"{necklace_to_string(nk)}: residual {res:.3e}", file=sys.stderr)
    expected = count_primitive(d)
    print(f"{good}/{expected} start points verified")
    return EXIT_OK if good == expected == len(nks) else EXIT_NUMERIC


def cmd_solve(args) -> int:
    d = args.degree
    cfg = _tracker_config(args)
    if args.curve:
        try:
            target = SparseHypersurface.load(args.curve)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read curve file {args.curve}: {exc}") from None
        source = {"file": str(args.curve), "hypersurface": target.to_dict()}
    else:
        target = random_target(d, np.random.default_rng(args.seed))
        source = {"random_seed": args.seed, "hypersurface": target.to_dict()}
    if target.n != d.n:
        raise UsageError(f"curve has {target.n} variables but degree {d} has {d.n} entries")

    sol = solve(target, d, cfg, workers=args.workers)
    rep = conjugation_pairing(sol.osculants, d=d)
    doc = {"manifest": manifest(d, source, cfg), **sol.to_dict(), "parity_ok": rep.parity_ok}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        _write(args.out, text)
    if args.json:
        sys.stdout.write(text)
    print(sol.summary(), file=sys.stderr if args.json else sys.stdout)

    for p in sol.failures:
        print(f"path from {necklace_to_string(p.source)} failed: {p.status}", file=sys.stderr)
    if sol.collisions:
        print(f"coinciding endpoints: {sol.collisions}", file=sys.stderr)
    if not rep.parity_ok:
        print("conjugate pairing anomaly", file=sys.stderr)
    return EXIT_OK if sol.complete and rep.parity_ok else EXIT_NUMERIC


def cmd_experiment(args) -> int:
    d = args.degree
    cfg = _tracker_config(args)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    res = run_experiment(d, args.trials, args.seed, cfg)
    text = res.to_csv()
    _write(args.out, text)
    if args.out and args.out != "-":
        src = {"random_seed": args.seed, "trials": args.trials, "support": "dense, total degree < |d|"}
        _write_manifest(args.out, manifest(d, src, cfg))
    n_ok = args.trials - len(res.failed)
    print(
        f"{n_ok}/{args.trials} trials complete, {len(res.parity_anomalies)} parity anomalies",
        file=sys.stderr,
    )
    return EXIT_OK if not res.failed and not res.parity_anomalies else EXIT_NUMERIC


def _load_solution(path: str):
    try:
        doc = json.loads(Path(path).read_text())
        d = Multidegree.parse(doc["manifest"]["multidegree"])
        records = [OsculantRecord.from_dict(r, d) for r in doc["osculants"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read solution file {path}: {exc}") from None
    return doc, d, records


def _csv_block(pts: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in pts:
        w.writerow([f"{v:.12g}" for v in row])
    return buf.getvalue()


def cmd_plot_data(args) -> int:
    doc, d, records = _load_solution(args.solution)
    real = [r for r in records if r.is_real]
    if args.index is not None:
        if not 0 <= args.index < len(real):
            raise UsageError(f"--index must be in [0, {len(real)}), got {args.index}")
        chosen = [(args.index, real[args.index])]
    else:
        chosen = list(enumerate(real))
    if not chosen:
        print("no real osculants in solution", file=sys.stderr)
        return EXIT_OK
    lo, hi = args.range
    blocks = [(k, r, _csv_block(sample_curve(r.form, lo, hi, args.samples))) for k, r in chosen]

    if args.out is None or args.out == "-":
        sys.stdout.write("\n".join(b for _, _, b in blocks))
        return EXIT_OK
    out = Path(args.out)
    if len(blocks) == 1:
        targets = [out]
    else:
        targets = [out.with_name(f"{out.stem}_{k}{out.suffix or '.csv'}") for k, _, _ in blocks]
    for path, (k, r, block) in zip(targets, blocks):
        path.write_text(block)
        meta = {
            **doc["manifest"],
            "osculant": k,
            "necklace": necklace_to_string(r.source_necklace) if r.source_necklace else None,
            "range": [lo, hi],
            "samples": args.samples,
        }
        _write_manifest(str(path), meta)
        print(path)
    return EXIT_OK


# --- parser ---


def _add_tracker_flags(p: argparse.ArgumentParser):
    p.add_argument("--gamma-seed", type=int, default=None, help="seed for the gamma constant")
    p.add_argument("--tol", type=float, default=None, help="Newton residual tolerance")
    p.add_argument("--config", default=None, help="tracker settings (JSON or TOML)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="osculants", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count primitive and all necklaces of content d")
    p.add_argument("d", nargs="+", type=int)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("necklaces", help="list necklaces with their fold class")
    p.add_argument("--degree", type=_degree, required=True)
    p.add_argument("--primitive", action="store_true", help="primitive necklaces only")
    p.set_defaults(func=cmd_necklaces)

    p = sub.add_parser("verify-start", help="check every start point against the start system")
    p.add_argument("--degree", type=_degree, required=True)
    p.add_argument("--tol", type=float, default=START_TOL)
    p.set_defaults(func=cmd_verify_start)

    p = sub.add_parser("solve", help="compute all osculants of one hypersurface")
    p.add_argument("--degree", type=_degree, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--curve", help="hypersurface JSON file")
    src.add_argument("--random", action="store_true", help="random real target")
    p.add_argument("--seed", type=int, default=0, help="seed for --random")
    p.add_argument("--out", default=None, help="write the solution JSON here")
    p.add_argument("--json", action="store_true", help="print the solution JSON")
    p.add_argument("--workers", type=int, default=1)
    _add_tracker_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="tally real counts over random targets")
    p.add_argument("--degree", type=_degree, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    _add_tracker_flags(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot-data", help="sample real osculants of a solution as CSV")
    p.add_argument("--solution", required=True)
    p.add_argument("--range", type=_range, default=(0.0, 1.0))
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--index", type=int, default=None, help="only this real osculant")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plot_data)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
