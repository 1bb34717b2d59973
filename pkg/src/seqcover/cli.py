"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 bad input or precondition,
3 resource guard (including heavy runs requested without ``--heavy``).

Output formats
--------------
PSCA text file (``construct --out``, read by ``verify``)::

    psca v=<v> t=<t> lambda=<int or ?> count=<N>
    <N lines of v space-separated integers; entry i is pi(i)>

``geometry.json`` (``geometry --q Q [--t T]`` dumps PG(T-2, Q))::

    {"n": int, "q": int,
     "points": [[c_0, ..., c_n], ...],  # c = discrete log of the coordinate, -1 for zero
     "lines": [[point index, ...], ...] or null}  # sorted; planes only

``singer.json`` (``singer --q Q``)::

    {"q": int, "r": int, "D": [sorted residues], "lines": [[sorted labels], ...]}  # lines sorted

``ascstats.json`` (``thm2 --q Q --out``)::

    {"q", "e": [e1, e2, e3, e4], "e5", "census": {class: count},
     "histogram": {"coverage": multiplicity}, "perfect_fraction", "perfect_fraction_exact",
     "bound", "bound_exact", "lambda", "group_order"}

Integers above 2^53 are written as decimal strings.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass

from . import kernels
from .ascstats import DEFAULT_GROUP_GUARD, coverage_histogram_thm2
from .errors import ResourceGuardError
from .gf import FieldError, is_prime_power
from .grp import DEFAULT_MATERIALIZE_GUARD, pgl_order
from .projgeom import build_geometry, geometry_to_json
from .psca import (
    NotPerfectError,
    PSCAFormatError,
    construct_psca,
    construction_lambda,
    g_upper_bound,
    histogram_summary,
    iter_construction,
    read_psca,
    verify_psca,
    write_psca,
    write_psca_stream,
)
from .singer import DifferenceSetError, labeling_from_singer, singer_to_json, validate_difference_set

log = logging.getLogger("seqcover")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
HEAVY_GROUP_ORDER = 100_000


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    t: int | None = None
    v: int | None = None
    out: str | None = None
    fmt: str = "text"
    threads: int | None = None
    heavy: bool = False
    max_group_size: int = DEFAULT_GROUP_GUARD
    max_rows: int = DEFAULT_MATERIALIZE_GUARD
    difference_set: str | None = None

    def __post_init__(self):
        if self.max_group_size <= 0 or self.max_rows <= 0:
            raise ValueError("guards must be positive")


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload))
    else:
        print(text)


def _need_prime_power(q):
    if q is None or not is_prime_power(q):
        raise ValueError(f"--q must be a prime power, got {q}")


def cmd_construct(cfg: RunConfig) -> int:
    q, t = cfg.q, cfg.t
    _need_prime_power(q)
    if t is None or t < 3 or q < t - 1:
        log.error("construction needs t >= 3 and q >= t - 1 (q=%s, t=%s)", q, t)
        return EXIT_USAGE
    order = pgl_order(t - 2, q)
    lam = construction_lambda(q, t)
    if order > cfg.max_rows and not cfg.heavy:
        log.error("%d rows; rerun with --heavy to stream them to a file", order)
        return EXIT_GUARD
    if order > cfg.max_group_size:
        log.error("|PGL| = %d exceeds --max-group-size %d", order, cfg.max_group_size)
        return EXIT_GUARD
    if cfg.out is None:
        log.error("--out is required")
        return EXIT_USAGE
    if order <= cfg.max_rows:
        X = construct_psca(q, t, max_rows=cfg.max_rows)
        write_psca(cfg.out, X, t, lam)
    else:
        write_psca_stream(cfg.out, q + 1, t, lam, order, iter_construction(q, t))
    _emit(cfg, {"v": q + 1, "t": t, "lambda": lam, "count": order},
          f"wrote {order} rows on {q + 1} symbols to {cfg.out}; lambda = {lam}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, path: str) -> int:
    try:
        f = read_psca(path)
    except (OSError, PSCAFormatError) as exc:
        log.error("%s: %s", path, exc)
        return EXIT_USAGE
    t = cfg.t or f.t
    if not 1 <= t <= f.v:
        log.error("strength %d out of range for v=%d", t, f.v)
        return EXIT_USAGE
    try:
        lam = verify_psca(f.multiset, t)
    except NotPerfectError as exc:
        rep = exc.report
        wit = [list(s) for ws in rep.witnesses.values() for s in ws][:10]
        _emit(cfg, {"perfect": False, "histogram": {str(k): v for k, v in rep.histogram.items()},
                    "witnesses": wit},
              f"not a PSCA of strength {t}: {exc}\nhistogram {histogram_summary(rep)}\n"
              + "\n".join(f"witness {tuple(s)}" for s in wit))
        return EXIT_FAIL
    _emit(cfg, {"perfect": True, "lambda": lam, "v": f.v, "t": t, "count": len(f.multiset)},
          f"PSCA({f.v},{t},{lam}) with {len(f.multiset)} rows")
    return EXIT_OK


def cmd_thm2(cfg: RunConfig) -> int:
    q = cfg.q
    _need_prime_power(q)
    order = pgl_order(2, q)
    if order > cfg.max_group_size:
        log.error("|PGL(3,%d)| = %d exceeds --max-group-size", q, order)
        return EXIT_GUARD
    if order > HEAVY_GROUP_ORDER and not cfg.heavy:
        log.error("q=%d streams %d elements over all 4-sequences; rerun with --heavy", q, order)
        return EXIT_GUARD
    dset = None
    if cfg.difference_set:
        with open(cfg.difference_set) as fh:
            dset = validate_difference_set(json.load(fh), q)
    start = time.perf_counter()
    try:
        res = coverage_histogram_thm2(q, dset, max_group=cfg.max_group_size)
    except AssertionError as exc:
        log.error("almost-perfect property failed: %s", exc)
        return EXIT_FAIL
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(res.to_json() + "\n")
    frac = res.perfect_fraction
    _emit(cfg, json.loads(res.to_json()),
          f"q={q}: {res.perfect}/{res.total} sequences covered exactly {res.lam} times "
          f"(fraction {float(frac):.6f}, bound {q}/{q + 1}); "
          f"histogram {res.histogram}; {time.perf_counter() - start:.1f}s")
    return EXIT_OK if res.passes else EXIT_FAIL


def cmd_bound(cfg: RunConfig) -> int:
    v, t = cfg.v, cfg.t
    if v is None or t is None or t < 4 or v < t:
        log.error("the bound needs v >= t >= 4 (v=%s, t=%s)", v, t)
        return EXIT_USAGE
    b = g_upper_bound(v, t)
    _emit(cfg, {"v": v, "t": t, "q": b.q, "constructive": str(b.constructive),
                "closed_form": str(b.closed_form)},
          f"g({v},{t}) <= {b.constructive} (q = {b.q}); closed form < {b.closed_form}")
    return EXIT_OK


def cmd_geometry(cfg: RunConfig) -> int:
    _need_prime_power(cfg.q)
    n = cfg.t - 2 if cfg.t else 2
    text = geometry_to_json(build_geometry(n, cfg.q))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_singer(cfg: RunConfig) -> int:
    _need_prime_power(cfg.q)
    dset = None
    if cfg.difference_set:
        with open(cfg.difference_set) as fh:
            dset = validate_difference_set(json.load(fh), cfg.q)
    lab = labeling_from_singer(build_geometry(2, cfg.q), dset)
    text = json.dumps(singer_to_json(lab))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $PSCA_THREADS or numba's default)")
    common.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    common.add_argument("--heavy", action="store_true", help="allow long-running jobs")
    common.add_argument("--max-group-size", type=int, default=DEFAULT_GROUP_GUARD)
    common.add_argument("--max-rows", type=int, default=DEFAULT_MATERIALIZE_GUARD)
    common.add_argument("--out", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="seqcover", description=__doc__.splitlines()[0],
                                     epilog="Exit codes: 0 ok, 1 not perfect, 2 bad input, 3 guard.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="write the arc-restricted PGL array")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="check a PSCA file")
    p.add_argument("file")
    p.add_argument("--t", type=int, default=None, help="strength (default: from header)")

    p = sub.add_parser("thm2", parents=[common], help="4-sequence histogram under the Singer labelling")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--difference-set", default=None, help="JSON list of residues to use instead")

    p = sub.add_parser("bound", parents=[common], help="upper bounds on g(v, t)")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("geometry", parents=[common], help="dump PG(t-2, q) as JSON")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, default=4)

    p = sub.add_parser("singer", parents=[common], help="dump the Singer difference set and lines")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--difference-set", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    threads = args.threads or (int(os.environ["PSCA_THREADS"]) if os.environ.get("PSCA_THREADS") else None)
    try:
        cfg = RunConfig(
            command=args.command,
            q=getattr(args, "q", None),
            t=getattr(args, "t", None),
            v=getattr(args, "v", None),
            out=args.out,
            fmt=args.fmt,
            threads=threads,
            heavy=args.heavy,
            max_group_size=args.max_group_size,
            max_rows=args.max_rows,
            difference_set=getattr(args, "difference_set", None),
        )
        kernels.set_threads(cfg.threads)
        if cfg.command == "construct":
            return cmd_construct(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg, args.file)
        if cfg.command == "thm2":
            return cmd_thm2(cfg)
        if cfg.command == "bound":
            return cmd_bound(cfg)
        if cfg.command == "geometry":
            return cmd_geometry(cfg)
        return cmd_singer(cfg)
    except (ValueError, FieldError, DifferenceSetError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        log.error("%s", exc)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
