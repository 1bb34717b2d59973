"""PG(n, q): canonical points, lines of the plane, rank, frames and arcs.

Coordinates are stored as order codes (see :mod:`seqcover.gf`): 0 is the
zero element and ``k + 1`` is ``primitive**k``.  A point's canonical
representative has its first nonzero coordinate equal to 1 (order code 1),
and points are numbered in lexicographic order of these representatives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from dataclasses import field as dc_field
from itertools import combinations

import numpy as np

from .gf import FieldError, FieldSpec, OrderTables, gf_field


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Geometry:
    n: int
    q: int
    field: FieldSpec = dc_field(repr=False)
    points: np.ndarray = dc_field(repr=False)  # (r, n+1) order codes
    code_to_index: np.ndarray = dc_field(repr=False)  # (q^(n+1),) -> point index or -1
    lines: np.ndarray | None = dc_field(repr=False, default=None)  # (r, q+1) for n == 2

    @property
    def r(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def tables(self) -> OrderTables:
        return self.field.order_tables

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(tuple(int(c) for c in self.points[i]))

    def encode(self, vec) -> int:
        code = 0
        for c in vec:
            code = code * self.q + int(c)
        return code

    def index_of(self, vec) -> int:
        """Index of the point spanned by a nonzero vector of order codes."""
        vec = normalize(vec, self.tables)
        return int(self.code_to_index[self.encode(vec)])

    def field_coords(self, i: int):
        return tuple(self.field.from_order(int(c)) for c in self.points[i])

    def lines_through(self, i: int) -> np.ndarray:
        self._require_plane()
        return np.flatnonzero((self.lines == i).any(axis=1))

    def line_through(self, i: int, j: int) -> int:
        """Index of the unique line through two distinct points of the plane."""
        self._require_plane()
        if i == j:
            raise ValueError("two distinct points are needed to span a line")
        hits = np.flatnonzero((self.lines == i).any(axis=1) & (self.lines == j).any(axis=1))
        return int(hits[0])

    def _require_plane(self):
        if self.lines is None:
            raise ValueError("line sets are only stored for projective planes (n = 2)")


def normalize(vec, t: OrderTables) -> tuple[int, ...]:
    vec = [int(c) for c in vec]
    for c in vec:
        if c:
            s = t.inv[c]
            return tuple(int(t.mul[s, x]) for x in vec)
    raise ValueError("the zero vector does not span a point")


def dot(u, v, t: OrderTables) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = t.add[acc, t.mul[int(a), int(b)]]
    return int(acc)


def point_count(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def build_geometry(n: int, q: int) -> Geometry:
    if n < 1:
        raise ValueError(f"projective dimension must be >= 1, got {n}")
    f = gf_field(q)
    t = f.order_tables
    d = n + 1
    # all vectors in lexicographic order, first coordinate most significant
    allvecs = np.stack(np.unravel_index(np.arange(q**d), (q,) * d), axis=1)
    nonzero = allvecs != 0
    has_nz = nonzero.any(axis=1)
    first = np.argmax(nonzero, axis=1)
    canonical = has_nz & (allvecs[np.arange(q**d), first] == 1)
    points = allvecs[canonical].astype(np.int64)
    code_to_index = np.full(q**d, -1, dtype=np.int64)
    code_to_index[np.flatnonzero(canonical)] = np.arange(len(points))
    assert len(points) == point_count(n, q)

    lines = None
    if n == 2:
        inc = incidence_matrix(points, points, t)
        lines = np.array([np.flatnonzero(row) for row in inc], dtype=np.int64)
    return Geometry(n, q, f, points, code_to_index, lines)


def incidence_matrix(duals: np.ndarray, points: np.ndarray, t: OrderTables) -> np.ndarray:
    """Boolean matrix, entry (a, x) true iff dual vector a annihilates point x."""
    acc = np.zeros((len(duals), len(points)), dtype=np.int64)
    for i in range(duals.shape[1]):
        acc = t.add[acc, t.mul[duals[:, i][:, None], points[:, i][None, :]]]
    return acc == 0


# exact linear algebra over GF(q) in order codes


def row_reduce(rows, t: OrderTables) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[int(c) for c in row] for row in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    prow = 0
    for col in range(ncols):
        found = next((i for i in range(prow, len(m)) if m[i][col]), None)
        if found is None:
            continue
        m[prow], m[found] = m[found], m[prow]
        s = t.inv[m[prow][col]]
        m[prow] = [int(t.mul[s, x]) for x in m[prow]]
        for i in range(len(m)):
            if i != prow and m[i][col]:
                c = t.neg[m[i][col]]
                m[i] = [int(t.add[x, t.mul[c, y]]) for x, y in zip(m[i], m[prow])]
        pivots.append(col)
        prow += 1
        if prow == len(m):
            break
    return m, pivots


def matrix_rank(rows, t: OrderTables) -> int:
    return len(row_reduce(rows, t)[1])


def solve(a, b, t: OrderTables) -> list[int]:
    """Solve the square nonsingular system a x = b."""
    d = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(d)]
    red, pivots = row_reduce(aug, t)
    if pivots[:d] != list(range(d)):
        raise ValueError("singular system")
    return [red[i][d] for i in range(d)]


def mat_mul(a, b, t: OrderTables) -> list[list[int]]:
    cols = list(zip(*b))
    return [[dot(row, col, t) for col in cols] for row in a]


def mat_inv(a, t: OrderTables) -> list[list[int]]:
    d = len(a)
    aug = [list(a[i]) + [1 if j == i else 0 for j in range(d)] for i in range(d)]
    red, pivots = row_reduce(aug, t)
    if pivots[:d] != list(range(d)):
        raise ValueError("matrix is singular")
    return [row[d:] for row in red]


def mat_vec(a, x, t: OrderTables) -> list[int]:
    return [dot(row, x, t) for row in a]


# geometric predicates


def _check_indices(pts, g: Geometry):
    for i in pts:
        if not 0 <= int(i) < g.r:
            raise IndexError(f"point index {i} outside [0, {g.r})")


def rank_of(pts, g: Geometry) -> int:
    _check_indices(pts, g)
    return matrix_rank([g.points[i] for i in pts], g.tables)


def is_frame(s, g: Geometry) -> bool:
    s = [int(i) for i in s]
    if len(s) != g.n + 2:
        raise ValueError(f"a frame of PG({g.n},{g.q}) has {g.n + 2} points, got {len(s)}")
    if len(set(s)) != len(s):
        raise ValueError("frame entries must be distinct")
    return is_arc(s, g)


def is_arc(pts, g: Geometry) -> bool:
    pts = [int(i) for i in pts]
    _check_indices(pts, g)
    d = g.n + 1
    if len(pts) < d:
        return len(set(pts)) == len(pts)
    return all(rank_of(sub, g) == d for sub in combinations(pts, d))


def rational_normal_curve_arc(n: int, q: int, g: Geometry) -> list[int]:
    """Points ``(1, u, u^2, ..., u^n)`` for u in field order, then ``(0, ..., 0, 1)``."""
    if q < n:
        raise ValueError(f"a (q+1)-arc from the normal curve needs q >= n (q={q}, n={n})")
    if (g.n, g.q) != (n, q):
        raise ValueError("geometry does not match (n, q)")
    t = g.tables
    arc = []
    for u in range(q):
        vec = [1]
        for _ in range(n):
            vec.append(int(t.mul[vec[-1], u]))
        arc.append(g.index_of(vec))
    arc.append(g.index_of([0] * n + [1]))
    if not is_arc(arc, g):  # pragma: no cover - Vandermonde guarantees this
        raise AssertionError("normal curve points failed the arc check")
    return arc


def geometry_to_json(g: Geometry) -> str:
    """``{"n", "q", "points": [[dlog or -1, ...], ...], "lines": [[...], ...]}``."""
    doc = {
        "n": g.n,
        "q": g.q,
        "points": (g.points - 1).tolist(),
        "lines": g.lines.tolist() if g.lines is not None else None,
    }
    return json.dumps(doc)


__all__ = [
    "FieldError",
    "Geometry",
    "ProjPoint",
    "build_geometry",
    "geometry_to_json",
    "incidence_matrix",
    "is_arc",
    "is_frame",
    "mat_inv",
    "mat_mul",
    "mat_vec",
    "matrix_rank",
    "normalize",
    "point_count",
    "rank_of",
    "rational_normal_curve_arc",
    "row_reduce",
    "solve",
]
