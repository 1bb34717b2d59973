"""Perfect sequence covering arrays: coverage, verification, deletion, construction.

A permutation is stored in one-line notation, ``row[i] = pi(i)``; it covers
the sequence ``s`` when the symbols of ``s`` appear in the row from left to
right in that order.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from . import kernels
from .errors import ResourceGuardError
from .gf import prime_power
from .grp import DEFAULT_MATERIALIZE_GUARD, GroupRep, pgl_order
from .projgeom import Geometry, build_geometry, rational_normal_curve_arc

MAX_ROWS = 2**40

log = logging.getLogger(__name__)


class PSCAFormatError(ValueError):
    """Malformed PSCA file."""


class NotPerfectError(Exception):
    """The multiset is not a PSCA of the requested strength."""

    def __init__(self, report: "CoverageReport", message: str | None = None):
        self.report = report
        super().__init__(message or f"coverage is not uniform: {report.histogram}")


class SizeLawError(NotPerfectError):
    """Uniform coverage but |X| != t! * lambda, which cannot happen for valid input."""


@dataclass
class PermutationMultiset:
    v: int
    perms: np.ndarray
    lam: int | None = None  # claimed multiplicity, metadata only

    def __post_init__(self):
        self.perms = np.asarray(self.perms)
        if self.perms.ndim != 2 or self.perms.shape[1] != self.v:
            raise ValueError(f"rows must have length {self.v}")
        if len(self.perms) > MAX_ROWS:
            raise ResourceGuardError("more than 2^40 rows")

    def __len__(self) -> int:
        return len(self.perms)

    def check(self) -> "PermutationMultiset":
        bad = bijection_violations(self.perms, self.v)
        if bad.size:
            raise ValueError(f"row {int(bad[0])} is not a permutation of [{self.v}]")
        return self


def bijection_violations(perms: np.ndarray, v: int) -> np.ndarray:
    perms = np.asarray(perms)
    ok = (perms >= 0).all(axis=1) & (perms < v).all(axis=1)
    ok &= (np.sort(perms, axis=1) == np.arange(v)).all(axis=1)
    return np.flatnonzero(~ok)


@dataclass
class CoverageReport:
    v: int
    t: int
    histogram: dict[int, int]
    witnesses: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)
    counts: np.ndarray | None = field(default=None, repr=False)

    @property
    def lam(self) -> int | None:
        return next(iter(self.histogram)) if len(self.histogram) == 1 else None

    @property
    def total(self) -> int:
        return sum(self.histogram.values())


def covers(pi, s) -> bool:
    pi = [int(x) for x in pi]
    s = [int(x) for x in s]
    v = len(pi)
    if any(not 0 <= x < v for x in s):
        raise ValueError(f"symbol outside [0, {v})")
    if len(set(s)) != len(s):
        raise ValueError("sequence entries must be distinct")
    pos = {x: i for i, x in enumerate(pi)}
    return all(pos[a] < pos[b] for a, b in zip(s, s[1:]))


def naive_coverage(perms, s) -> int:
    """Coverage of one sequence by scanning every row (independent of the subset method)."""
    perms = np.asarray(perms)
    inv = np.argsort(perms, axis=1)
    positions = inv[:, list(s)]
    return int((np.diff(positions, axis=1) > 0).all(axis=1).sum())


def coverage_report(X: PermutationMultiset, t: int, witnesses: int = 10) -> CoverageReport:
    if not 1 <= t <= X.v:
        raise ValueError(f"strength t={t} must lie in [1, {X.v}]")
    counts = kernels.coverage_counts(X.perms, t)
    if int(counts.sum()) != len(X) * math.comb(X.v, t):
        raise AssertionError("subset-method increment total is wrong")
    values, mult = np.unique(counts, return_counts=True)
    histogram = {int(a): int(b) for a, b in zip(values, mult)}
    wit: dict[int, list[tuple[int, ...]]] = {}
    if len(histogram) > 1 and witnesses:
        mode = max(histogram, key=lambda c: (histogram[c], c))
        for c in histogram:
            if c != mode:
                ranks = np.flatnonzero(counts == c)[:witnesses]
                wit[c] = [kernels.sequence_unrank(int(r), X.v, t) for r in ranks]
    return CoverageReport(X.v, t, histogram, wit, counts)


def verify_psca(X: PermutationMultiset, t: int, witnesses: int = 10) -> int:
    """Return lambda if X is a PSCA(v, t, lambda); raise NotPerfectError otherwise."""
    report = coverage_report(X, t, witnesses)
    lam = report.lam
    if lam is None:
        raise NotPerfectError(report)
    if len(X) != math.factorial(t) * lam:
        raise SizeLawError(report, f"uniform coverage {lam} but {len(X)} rows != {t}!*{lam}")
    return lam


def delete_symbols(X: PermutationMultiset, j: int) -> PermutationMultiset:
    """Drop the symbols j, ..., v-1 from every row, keeping the order of the rest."""
    if not 1 <= j <= X.v:
        raise ValueError(f"j={j} must lie in [1, {X.v}]")
    return PermutationMultiset(j, _restrict(X.perms, j), X.lam)


def _restrict(perms: np.ndarray, j: int) -> np.ndarray:
    return perms[perms < j].reshape(len(perms), j)


# construction


def arc_labeling(g: Geometry) -> np.ndarray:
    """Labelling putting the normal-curve arc on labels 0..q, other points after, in order."""
    arc = rational_normal_curve_arc(g.n, g.q, g)
    rest = [i for i in range(g.r) if i not in set(arc)]
    psi = np.empty(g.r, dtype=np.int64)
    psi[arc + rest] = np.arange(g.r)
    return psi


def _construction_rep(q: int, t: int) -> GroupRep:
    if t < 3:
        raise ValueError(f"strength t={t} must be >= 3")
    prime_power(q)
    n = t - 2
    if q < n + 1:
        raise ValueError(f"the construction needs q >= t - 1 (q={q}, t={t})")
    g = build_geometry(n, q)
    return GroupRep(g, arc_labeling(g))


def construction_lambda(q: int, t: int) -> int:
    return pgl_order(t - 2, q) // math.factorial(t)


def construct_psca(q: int, t: int, max_rows: int = DEFAULT_MATERIALIZE_GUARD) -> PermutationMultiset:
    """The group of PG(t-2, q) restricted to an arc of q+1 symbols."""
    rep = _construction_rep(q, t)
    if rep.order > max_rows:
        raise ResourceGuardError(
            f"{rep.order} rows exceed the materialization guard {max_rows}; stream to a file instead"
        )
    rows = np.concatenate(list(iter_construction(q, t, rep=rep)))
    return PermutationMultiset(q + 1, rows, construction_lambda(q, t))


def iter_construction(q: int, t: int, rep: GroupRep | None = None) -> Iterator[np.ndarray]:
    """Stream the construction's rows in chunks (one chunk per first matrix row)."""
    rep = rep or _construction_rep(q, t)
    for chunk in rep.chunks(row0_chunk=1):
        yield _restrict(chunk, q + 1)


def construction_coverage(q: int, t: int, seqs) -> np.ndarray:
    """Coverage of arc-label sequences by the construction, in one streaming pass.

    Uses that the rows form a group (closed under inverses), so a sequence s is
    covered as often as the number of elements mapping s to an increasing one.
    """
    seqs = np.atleast_2d(np.asarray(seqs, dtype=np.int64))
    if seqs.max() > q or seqs.min() < 0:
        raise ValueError("sequences must use arc labels 0..q")
    return _construction_rep(q, t).count_ascending(seqs)


# bound


@dataclass(frozen=True)
class Bound:
    q: int
    constructive: int
    closed_form: int


def _least_prime_power_at_least(x: int) -> int:
    from .gf import is_prime_power

    q = max(2, x)
    while not is_prime_power(q):
        q += 1
    return q


def g_upper_bound(v: int, t: int) -> Bound:
    if t < 4 or v < t:
        raise ValueError(f"the bound needs v >= t >= 4 (v={v}, t={t})")
    q = _least_prime_power_at_least(max(v - 1, t - 1))
    constructive = pgl_order(t - 2, q) // math.factorial(t)
    closed = (2 * v) ** ((t - 1) ** 2) // (math.factorial(t) * (2 * v - 1))
    return Bound(q, constructive, closed)


# file format


_HEADER = re.compile(r"psca v=(\d+) t=(\d+) lambda=(\d+|\?) count=(\d+)")


def format_header(v: int, t: int, lam: int | None, count: int) -> str:
    return f"psca v={v} t={t} lambda={'?' if lam is None else lam} count={count}"


def write_psca(path, X: PermutationMultiset, t: int, lam: int | None = None) -> None:
    lam = X.lam if lam is None else lam
    with open(path, "w") as fh:
        fh.write(format_header(X.v, t, lam, len(X)) + "\n")
        _write_rows(fh, X.perms)


def write_psca_stream(path, v: int, t: int, lam: int | None, count: int, chunks) -> int:
    written = 0
    with open(path, "w") as fh:
        fh.write(format_header(v, t, lam, count) + "\n")
        for chunk in chunks:
            _write_rows(fh, chunk)
            written += len(chunk)
    if written != count:
        raise AssertionError(f"wrote {written} rows, header says {count}")
    return written


def _write_rows(fh, perms: np.ndarray) -> None:
    if len(perms):
        np.savetxt(fh, perms, fmt="%d", delimiter=" ")


@dataclass
class PSCAFile:
    v: int
    t: int
    lam: int | None
    multiset: PermutationMultiset
    declared_count: int | None = None


def read_psca(path) -> PSCAFile:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise PSCAFormatError("empty file")
    m = _HEADER.fullmatch(lines[0].strip())
    if not m:
        raise PSCAFormatError(f"bad header: {lines[0]!r}")
    v, t, count = int(m.group(1)), int(m.group(2)), int(m.group(4))
    lam = None if m.group(3) == "?" else int(m.group(3))
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != count:
        # reported rather than fatal so truncated arrays still reach the coverage check
        log.warning("header says %d rows, found %d", count, len(body))
    try:
        rows = np.array([[int(x) for x in ln.split()] for ln in body], dtype=np.int64)
    except ValueError as exc:
        raise PSCAFormatError(str(exc)) from None
    if not body:
        rows = np.empty((0, v), dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != v:
        raise PSCAFormatError(f"every row must have {v} entries")
    bad = bijection_violations(rows, v)
    if bad.size:
        raise PSCAFormatError(f"row {int(bad[0]) + 1} is not a permutation of [{v}]")
    return PSCAFile(v, t, lam, PermutationMultiset(v, rows, lam), count)


def histogram_summary(report: CoverageReport) -> str:
    parts = ", ".join(f"{k}: {v}" for k, v in sorted(report.histogram.items()))
    return "{" + parts + "}"


def strength_cascade(lam: int, t: int, t2: int) -> int:
    """Multiplicity of a PSCA(v, t, lam) seen at strength t2 <= t.

    Both strengths count the same t!*lam rows, so the factor is t!/t2!; the
    binomial C(t, t2) agrees with it only when t2 >= t - 1.
    """
    if not 1 <= t2 <= t:
        raise ValueError(f"t2={t2} must lie in [1, {t}]")
    return lam * math.factorial(t) // math.factorial(t2)


__all__ = [
    "Bound",
    "CoverageReport",
    "NotPerfectError",
    "PSCAFile",
    "PSCAFormatError",
    "PermutationMultiset",
    "SizeLawError",
    "arc_labeling",
    "construct_psca",
    "construction_coverage",
    "construction_lambda",
    "coverage_report",
    "covers",
    "delete_symbols",
    "g_upper_bound",
    "iter_construction",
    "naive_coverage",
    "read_psca",
    "strength_cascade",
    "verify_psca",
    "write_psca",
    "write_psca_stream",
]
