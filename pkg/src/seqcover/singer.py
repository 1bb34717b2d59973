"""Planar difference sets from a Singer cycle and the matching point labelling.

GF(q^3) is built as GF(q)[y]/(c(y)) with c the least monic primitive cubic
over GF(q), coefficients compared as integer codes from the y^2 term down
(for prime q this is the modulus :func:`gf_build` picks for GF(q^3)).
Writing ``w = y``, each ``w^k`` has coordinates (c0, c1, c2) in the basis
1, w, w^2; these are the homogeneous coordinates of a point of PG(2, q).
Multiplication by w permutes points cyclically, so labelling the point of
``w^k`` by ``k mod r`` turns every line into a translate of one difference set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .gf import gf_field
from .projgeom import Geometry, normalize


class DifferenceSetError(ValueError):
    """Not a difference set of Z_r (some nonzero residue is missed)."""


class NotPlanarError(DifferenceSetError):
    """Every nonzero residue is a difference, but some more than once."""


@dataclass(frozen=True)
class DifferenceSet:
    r: int
    elems: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.elems) - 1

    def __iter__(self):
        return iter(self.elems)

    def translate(self, j: int) -> tuple[int, ...]:
        return tuple(sorted((a + j) % self.r for a in self.elems))


def cyclic_index(a: DifferenceSet, k: int) -> int:
    """``a_k`` with the index taken modulo q + 1 (values are not shifted)."""
    return a.elems[k % len(a.elems)]


def validate_difference_set(elems, q: int) -> DifferenceSet:
    """Check planarity and normalize so the least element is 0."""
    r = q * q + q + 1
    elems = [int(x) for x in elems]
    vals = sorted({x % r for x in elems})
    if len(vals) != len(elems):
        raise DifferenceSetError("difference set entries must be distinct residues")
    diffs = np.zeros(r, dtype=np.int64)
    for a in vals:
        for b in vals:
            if a != b:
                diffs[(a - b) % r] += 1
    if (diffs[1:] == 0).any():
        missing = int(np.flatnonzero(diffs[1:] == 0)[0]) + 1
        raise DifferenceSetError(f"residue {missing} is not a difference")
    if (diffs[1:] != 1).any() or len(vals) != q + 1:
        raise NotPlanarError(f"{len(vals)} elements give repeated differences; need {q + 1}, each once")
    base = vals[0]
    return DifferenceSet(r, tuple(sorted((a - base) % r for a in vals)))


@dataclass(frozen=True, eq=False)
class CubicExtension:
    q: int
    cubic: tuple[int, int, int]  # (a2, a1, a0) as order codes: y^3 + a2 y^2 + a1 y + a0
    powers: np.ndarray  # (q^3 - 1, 3) coordinates of w^k in order codes


@lru_cache(maxsize=None)
def cubic_extension(q: int) -> CubicExtension:
    f = gf_field(q)
    t = f.order_tables
    add, mul, neg = t.add.tolist(), t.mul.tolist(), t.neg.tolist()
    order_of = [f.to_order(f.from_int(c)) for c in range(q)]
    n = q**3 - 1
    for codes in product(range(q), repeat=3):
        a2, a1, a0 = (order_of[c] for c in codes)
        if a0 == 0:
            continue
        na2, na1, na0 = neg[a2], neg[a1], neg[a0]
        c = (1, 0, 0)
        powers = [c]
        for k in range(1, n + 1):
            c0, c1, c2 = c
            c = (mul[c2][na0], add[c0][mul[c2][na1]], add[c1][mul[c2][na2]])
            if c == (1, 0, 0):
                break
            powers.append(c)
        if k == n and c == (1, 0, 0):
            return CubicExtension(q, (a2, a1, a0), np.array(powers, dtype=np.int64))
    raise AssertionError(f"no primitive cubic over GF({q})")  # pragma: no cover


def singer_difference_set(q: int) -> DifferenceSet:
    ext = cubic_extension(q)
    r = q * q + q + 1
    elems = tuple(k for k in range(r) if ext.powers[k, 2] == 0)
    return validate_difference_set(elems, q)


def translate_lines(d: DifferenceSet) -> np.ndarray:
    """Line j is D + j, sorted ascending."""
    return np.array([d.translate(j) for j in range(d.r)], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class SingerLabeling:
    psi: np.ndarray  # psi[point index] = label
    D: DifferenceSet
    lineset: "LabeledLineSet"  # noqa: F821


def labeling_from_singer(g: Geometry, difference_set: DifferenceSet | None = None) -> SingerLabeling:
    """Labelling whose lines are the translates of the Singer set (or of ``difference_set``).

    A user-supplied set is accepted when it is an affine image ``u*D + b`` of
    the Singer set; the labelling is transformed accordingly.
    """
    from .ascstats import LabeledLineSet

    if g.n != 2:
        raise ValueError("Singer labellings exist for planes only")
    q, r = g.q, g.r
    ext = cubic_extension(q)
    psi = np.full(r, -1, dtype=np.int64)
    for k in range(r):
        psi[g.index_of(normalize(ext.powers[k], g.tables))] = k
    if (psi < 0).any():
        raise AssertionError("Singer powers do not reach every point")
    base = singer_difference_set(q)
    D = base
    if difference_set is not None:
        u, b = _affine_match(base, difference_set)
        psi = (u * psi + b) % r
        D = difference_set

    labelled = np.sort(psi[g.lines], axis=1)
    translates = translate_lines(D)
    if {tuple(x) for x in labelled.tolist()} != {tuple(x) for x in translates.tolist()}:
        raise AssertionError("labelled lines are not the translates of the difference set")
    return SingerLabeling(psi, D, LabeledLineSet(q, translates))


def _affine_match(base: DifferenceSet, target: DifferenceSet) -> tuple[int, int]:
    r = base.r
    goal = set(target.elems)
    for u in range(1, r):
        if math.gcd(u, r) != 1:
            continue
        scaled = [(u * a) % r for a in base.elems]
        for b in range(r):
            if {(x + b) % r for x in scaled} == goal:
                return u, b
    raise DifferenceSetError("difference set is not an affine image of the Singer set")


def singer_to_json(lab: SingerLabeling) -> dict:
    return {
        "q": lab.D.q,
        "r": lab.D.r,
        "D": list(lab.D.elems),
        "lines": sorted(lab.lineset.lines.tolist()),
    }
