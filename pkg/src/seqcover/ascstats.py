"""Ascent sums over a labelled line set and the almost-perfect 4-sequence histogram.

For a labelled plane, every 4-sequence of distinct points is a frame (no
three collinear), lies entirely on a line, or has exactly three collinear
points with the odd one out in position i (family T_i).  The number of
increasing sequences in the orbit of a T_i sequence is a weighted sum over
the sorted lines; these are the sums ``e1``..``e4`` below.
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import kernels
from .errors import ResourceGuardError
from .grp import GroupRep, orbit_asc_stab, pgl_order
from .projgeom import build_geometry
from .singer import DifferenceSet, cyclic_index, labeling_from_singer

DEFAULT_GROUP_GUARD = 10**9


class SequenceClass(enum.Enum):
    FRAME = "Frame"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    COLLINEAR4 = "Collinear4"


T_CLASSES = (SequenceClass.T1, SequenceClass.T2, SequenceClass.T3, SequenceClass.T4)


@dataclass(frozen=True, eq=False)
class LabeledLineSet:
    q: int
    lines: np.ndarray  # (r, q+1), each row strictly increasing

    def __post_init__(self):
        lines = np.asarray(self.lines, dtype=np.int64)
        object.__setattr__(self, "lines", lines)
        r = self.r
        if lines.shape != (r, self.q + 1):
            raise ValueError(f"expected {r} lines of {self.q + 1} labels, got shape {lines.shape}")
        if (np.diff(lines, axis=1) <= 0).any():
            raise ValueError("each line must be sorted strictly ascending")
        if lines.min() < 0 or lines.max() >= r:
            raise ValueError(f"labels must lie in [0, {r})")
        pairs = np.zeros((r, r), dtype=np.int64)
        for row in lines:
            pairs[np.ix_(row, row)] += 1
        np.fill_diagonal(pairs, 1)
        if (pairs != 1).any():
            raise ValueError("two labels must lie on exactly one common line")

    @property
    def r(self) -> int:
        return self.q * self.q + self.q + 1

    @property
    def line_of(self) -> np.ndarray:
        """``line_of[a, b]`` is the line through a and b (-1 on the diagonal)."""
        lo = np.full((self.r, self.r), -1, dtype=np.int64)
        for j, row in enumerate(self.lines):
            lo[np.ix_(row, row)] = j
        np.fill_diagonal(lo, -1)
        return lo

    @property
    def incidence(self) -> np.ndarray:
        inc = np.zeros((self.r, self.r), dtype=bool)
        for j, row in enumerate(self.lines):
            inc[j, row] = True
        return inc

    def is_translate_closed(self) -> bool:
        shifted = np.sort((self.lines + 1) % self.r, axis=1)
        return {tuple(row) for row in shifted.tolist()} == {tuple(row) for row in self.lines.tolist()}

    def relabel(self, perm) -> "LabeledLineSet":
        perm = np.asarray(perm, dtype=np.int64)
        return LabeledLineSet(self.q, np.sort(perm[self.lines], axis=1))


def lineset_from_geometry(g, psi) -> LabeledLineSet:
    psi = np.asarray(psi, dtype=np.int64)
    return LabeledLineSet(g.q, np.sort(psi[g.lines], axis=1))


# classification


def classify(s, L: LabeledLineSet) -> SequenceClass:
    s = [int(x) for x in s]
    if len(s) != 4:
        raise ValueError("classification is defined for 4-sequences")
    if len(set(s)) != 4:
        raise ValueError("sequence entries must be distinct")
    inc = L.incidence
    line = L.line_of[s[0], s[1]]
    if inc[line, s[2]] and inc[line, s[3]]:
        return SequenceClass.COLLINEAR4
    for i in range(4):
        rest = [s[j] for j in range(4) if j != i]
        if inc[L.line_of[rest[0], rest[1]], rest[2]]:
            return T_CLASSES[i]
    return SequenceClass.FRAME


_CLASS_CODES = [SequenceClass.FRAME, *T_CLASSES, SequenceClass.COLLINEAR4]


def all_sequences(r: int, t: int = 4) -> np.ndarray:
    """Every sequence of S_{r,t}, row k having rank k."""
    return np.array(list(permutations(range(r), t)), dtype=np.int64)


def classify_all(L: LabeledLineSet) -> np.ndarray:
    """Class code (index into ``_CLASS_CODES``) for every 4-sequence, in rank order."""
    seqs = all_sequences(L.r)
    inc, lo = L.incidence, L.line_of

    def collinear(a, b, c):
        return inc[lo[a, b], c]

    a, b, c, d = seqs.T
    off = [collinear(b, c, d), collinear(a, c, d), collinear(a, b, d), collinear(a, b, c)]
    all4 = off[0] & off[3]
    codes = np.zeros(len(seqs), dtype=np.int64)
    for i in range(4):
        codes[off[i] & ~all4] = i + 1
    codes[all4] = 5
    return codes


def census(L: LabeledLineSet) -> dict[str, int]:
    codes = classify_all(L)
    counts = np.bincount(codes, minlength=6)
    return {cls.value: int(counts[k]) for k, cls in enumerate(_CLASS_CODES)}


def census_closed_form(q: int) -> dict[str, int]:
    r = q * q + q + 1
    t = r * q**3 * (q + 1) * (q - 1)
    out = {"Frame": t * (q - 1)}
    out.update({cls.value: t for cls in T_CLASSES})
    out["Collinear4"] = r * (q + 1) * q * (q - 1) * (q - 2)
    return out


# ascent sums


@dataclass(frozen=True)
class AscentSums:
    e1: int
    e2: int
    e3: int
    e4: int
    e5: int

    def as_list(self) -> list[int]:
        return [self.e1, self.e2, self.e3, self.e4]


def e5_closed_form(q: int) -> int:
    return (q * q + q + 1) * q**3 * (q + 1) * (q - 1) // 6


def ascent_sums(L: LabeledLineSet) -> AscentSums:
    q = L.q
    lines = L.lines.tolist()
    c2 = lambda x: x * (x - 1) // 2  # noqa: E731
    e1 = e2 = e3 = e4 = 0
    for line in lines:
        for i, li in enumerate(line):
            gap = li - i
            e1 += c2(q - i) * gap
            e2 += (i * (q - i) - c2(q - i)) * gap
            e3 += (c2(i) - i * (q - i)) * gap
            e4 += c2(i) * (q * q - gap)
    raw2, raw3 = raw_e2_e3(L)
    if (raw2, raw3) != (e2, e3):
        raise AssertionError(f"collapsed sums ({e2}, {e3}) disagree with double sums ({raw2}, {raw3})")
    return AscentSums(e1, e2, e3, e4, e5_closed_form(q))


def raw_e2_e3(L: LabeledLineSet) -> tuple[int, int]:
    """The T_2 and T_3 sums straight from their double-sum definitions."""
    q = L.q
    e2 = e3 = 0
    for line in L.lines.tolist():
        for j in range(q + 1):
            for i in range(j):
                between = (line[j] - j) - (line[i] - i)
                e2 += (q - j) * between
                e3 += i * between
    return e2, e3


def representative(cls: SequenceClass, L: LabeledLineSet) -> tuple[int, ...]:
    """Some 4-sequence of the given class."""
    line = L.lines[0].tolist()
    if cls is SequenceClass.COLLINEAR4:
        if len(line) < 4:
            raise ValueError("lines have fewer than 4 points")
        return tuple(line[:4])
    if cls is SequenceClass.FRAME:
        for cand in permutations(range(L.r), 4):
            if classify(cand, L) is SequenceClass.FRAME:
                return cand
        raise ValueError("no frame exists")
    off = next(x for x in range(L.r) if x not in line)
    pos = T_CLASSES.index(cls)
    seq = line[:3]
    seq.insert(pos, off)
    return tuple(seq)


def asc_equals_orbit_count(L: LabeledLineSet, cls: SequenceClass, rep: GroupRep) -> bool:
    """Compare the predicted |Asc| for the class with an orbit walk."""
    if not np.array_equal(lineset_from_geometry(rep.geometry, rep.labeling).lines, L.lines):
        raise ValueError("the representation's labelled lines differ from L")
    stats = orbit_asc_stab(representative(cls, L), rep)
    if cls is SequenceClass.FRAME:
        return stats.asc_size == rep.order // 24
    if cls is SequenceClass.COLLINEAR4:
        raise ValueError("no closed form for four collinear points")
    return stats.asc_size == ascent_sums(L).as_list()[T_CLASSES.index(cls)]


def linesum_check(L: LabeledLineSet) -> tuple[int, int, bool]:
    q = L.q
    computed = sum(i * li for line in L.lines.tolist() for i, li in enumerate(line))
    closed = (q * q + q) * (q * q + q + 1) * (2 * q * q + 2 * q + 1) // 6
    return computed, closed, computed == closed


def _gap(D: DifferenceSet, k: int, i: int) -> int:
    # a_{k+i} - a_k lifted into [0, r): the length of the gap walked forward
    return (cyclic_index(D, k + i) - cyclic_index(D, k)) % D.r


def diffset_sides(D: DifferenceSet, i: int) -> tuple[int, int]:
    q = D.q
    if not 0 <= i <= q:
        raise ValueError(f"i={i} must lie in [0, {q}]")
    lhs = sum(_gap(D, k, i) * _gap(D, k - 1, 1) for k in range(q + 1))
    rhs = sum(_gap(D, k, 1) * _gap(D, k - i, i) for k in range(q + 1))
    return lhs, rhs


def diffset_identity_check(D: DifferenceSet, i: int) -> bool:
    lhs, rhs = diffset_sides(D, i)
    return lhs == rhs


def lineflip_sides(L: LabeledLineSet, i: int) -> tuple[int, int]:
    q = L.q
    if not 0 <= i <= q:
        raise ValueError(f"i={i} must lie in [0, {q}]")
    if not L.is_translate_closed():
        raise ValueError("line set is not the set of translates of a difference set")
    lines = L.lines
    return int((q * q + q - lines[:, q - i]).sum()), int(lines[:, i].sum())


def lineflip_check(L: LabeledLineSet, i: int) -> bool:
    lhs, rhs = lineflip_sides(L, i)
    return lhs == rhs


# the almost-perfect histogram


@dataclass
class AlmostPerfectResult:
    q: int
    group_order: int
    lam: int
    sums: AscentSums
    census: dict[str, int]
    histogram: dict[int, int]
    class_histograms: dict[str, dict[int, int]]
    perfect: int
    total: int
    counts: np.ndarray = field(repr=False)

    @property
    def perfect_fraction(self) -> Fraction:
        return Fraction(self.perfect, self.total)

    @property
    def bound(self) -> Fraction:
        return Fraction(self.q, self.q + 1)

    @property
    def weak_bound(self) -> Fraction:
        return 1 - Fraction(1, self.q)

    @property
    def passes(self) -> bool:
        return self.perfect_fraction > max(self.bound, self.weak_bound)

    def to_json(self) -> str:
        return json.dumps(
            {
                "q": self.q,
                "e": [_portable(x) for x in self.sums.as_list()],
                "e5": _portable(self.sums.e5),
                "census": {k: _portable(v) for k, v in self.census.items()},
                "histogram": {str(k): _portable(v) for k, v in sorted(self.histogram.items())},
                "perfect_fraction": float(self.perfect_fraction),
                "perfect_fraction_exact": f"{self.perfect}/{self.total}",
                "bound": float(self.bound),
                "bound_exact": f"{self.q}/{self.q + 1}",
                "lambda": _portable(self.lam),
                "group_order": _portable(self.group_order),
            },
            indent=2,
        )


def _portable(x: int):
    return str(x) if abs(x) > 2**53 else x


def coverage_histogram_thm2(
    q: int,
    difference_set: DifferenceSet | None = None,
    max_group: int = DEFAULT_GROUP_GUARD,
    row0_chunk: int = 1,
) -> AlmostPerfectResult:
    """Coverage of every 4-sequence under the Singer-labelled PGL(3, q).

    Raises AssertionError when some frame or T_i sequence is not covered
    exactly |PGL|/24 times or the perfect fraction does not beat q/(q+1).
    """
    order = pgl_order(2, q)
    if order > max_group:
        raise ResourceGuardError(f"|PGL(3,{q})| = {order} exceeds the guard {max_group}")
    g = build_geometry(2, q)
    lab = labeling_from_singer(g, difference_set)
    rep = GroupRep(g, lab.psi)
    L = lab.lineset

    counts = np.zeros(math.perm(g.r, 4), dtype=np.int64)
    for chunk in rep.chunks(row0_chunk):
        counts += kernels.coverage_counts(chunk, 4)
    if int(counts.sum()) != order * math.comb(g.r, 4):
        raise AssertionError("subset-method increment total is wrong")

    lam = order // 24
    codes = classify_all(L)
    class_hist = {}
    for k, cls in enumerate(_CLASS_CODES):
        c = Counter(counts[codes == k].tolist())
        class_hist[cls.value] = dict(sorted(c.items()))
    cen = {cls.value: int((codes == k).sum()) for k, cls in enumerate(_CLASS_CODES)}
    hist = dict(sorted(Counter(counts.tolist()).items()))
    result = AlmostPerfectResult(
        q=q,
        group_order=order,
        lam=lam,
        sums=ascent_sums(L),
        census=cen,
        histogram=hist,
        class_histograms=class_hist,
        perfect=int((counts == lam).sum()),
        total=len(counts),
        counts=counts,
    )
    for cls in (SequenceClass.FRAME, *T_CLASSES):
        h = class_hist[cls.value]
        if h and set(h) != {lam}:
            raise AssertionError(f"{cls.value} sequences covered {sorted(h)} times, expected {lam}")
    if not result.perfect_fraction > result.bound:
        raise AssertionError(f"perfect fraction {result.perfect_fraction} <= {result.bound}")
    return result
