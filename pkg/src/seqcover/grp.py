"""PGL(n+1, q) as a permutation group on labelled points.

Group elements are canonical scalar-coset representatives: invertible
matrices whose first nonzero entry in row-major order is 1.  Since an
invertible matrix has a nonzero first row, that entry sits in row 0, so
row 0 runs over the canonical point representatives and the enumeration
splits naturally into one chunk per first row.

A labelling ``psi`` is an integer array with ``psi[i]`` the label of
default point ``i``; the element induced by matrix ``A`` acts on labels as
``i -> psi[A . psi^-1(i)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import numpy as np

from . import kernels
from .errors import ResourceGuardError
from .projgeom import Geometry, is_frame, mat_inv, mat_mul, mat_vec, solve

DEFAULT_ORBIT_GUARD = 10**8
DEFAULT_MATERIALIZE_GUARD = 10**7


def pgl_order(n: int, q: int) -> int:
    num = 1
    for i in range(n + 1):
        num *= q ** (n + 1) - q**i
    return num // (q - 1)


@dataclass(frozen=True, eq=False)
class Projectivity:
    perm: np.ndarray
    matrix: tuple | None = None

    def __call__(self, i: int) -> int:
        return int(self.perm[i])

    def key(self) -> bytes:
        return np.asarray(self.perm, dtype=np.int32).tobytes()


def identity_labeling(g: Geometry) -> np.ndarray:
    return np.arange(g.r, dtype=np.int64)


def check_labeling(psi, r: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.int64)
    if psi.shape != (r,) or not np.array_equal(np.sort(psi), np.arange(r)):
        raise ValueError("labeling must be a bijection on the point indices")
    return psi


@dataclass(frozen=True, eq=False)
class GroupRep:
    """The permutation representation of PGL(n+1, q) under a labelling."""

    geometry: Geometry
    labeling: np.ndarray = field(default=None)

    def __post_init__(self):
        psi = self.labeling
        if psi is None:
            psi = identity_labeling(self.geometry)
        object.__setattr__(self, "labeling", check_labeling(psi, self.geometry.r))

    @property
    def order(self) -> int:
        return pgl_order(self.geometry.n, self.geometry.q)

    @property
    def degree(self) -> int:
        return self.geometry.r

    @property
    def inverse_labeling(self) -> np.ndarray:
        inv = np.empty_like(self.labeling)
        inv[self.labeling] = np.arange(len(self.labeling))
        return inv

    @property
    def per_row0(self) -> int:
        return self.order // self.geometry.r

    def _code_to_label(self) -> np.ndarray:
        c2i = self.geometry.code_to_index
        return np.where(c2i >= 0, self.labeling[np.maximum(c2i, 0)], -1)

    def _label_targets(self, labels) -> np.ndarray:
        labels = np.asarray(labels, dtype=np.int64).ravel()
        if labels.size and (labels.min() < 0 or labels.max() >= self.degree):
            raise IndexError("label outside the point range")
        return self.geometry.points[self.inverse_labeling[labels]]

    def images(self, labels, row0_chunk: int | None = None) -> Iterator[np.ndarray]:
        """Stream the images of ``labels`` under every element, in chunks of rows."""
        g = self.geometry
        targets = self._label_targets(labels)
        c2l = self._code_to_label()
        step = row0_chunk or g.r
        for lo in range(0, g.r, step):
            yield kernels.pgl_images(
                g.n, g.q, g.tables, g.points[lo : lo + step], targets, c2l, self.per_row0
            )

    def chunks(self, row0_chunk: int | None = None) -> Iterator[np.ndarray]:
        """Stream the group as arrays of permutations in one-line notation."""
        yield from self.images(np.arange(self.degree), row0_chunk)

    def permutations(self, max_rows: int = DEFAULT_MATERIALIZE_GUARD) -> np.ndarray:
        if self.order > max_rows:
            raise ResourceGuardError(
                f"|PGL| = {self.order} exceeds the materialization guard {max_rows}"
            )
        return np.concatenate(list(self.chunks()))

    def count_ascending(self, seqs) -> np.ndarray:
        """For each sequence s, the number of elements g with g(s) strictly increasing."""
        seqs = np.asarray(seqs, dtype=np.int64)
        if seqs.ndim == 1:
            seqs = seqs[None, :]
        g = self.geometry
        counts, done = kernels.pgl_count_ascending(
            g.n, g.q, g.tables, g.points, self._label_targets(seqs), self._code_to_label(),
            seqs.shape[1],
        )
        if done != self.order:
            raise AssertionError(f"streamed {done} elements, expected {self.order}")
        return counts


def enumerate_pgl(g: Geometry, psi=None) -> Iterator[Projectivity]:
    rep = GroupRep(g, psi)
    for chunk in rep.chunks(row0_chunk=1):
        for row in chunk:
            yield Projectivity(row)


def iter_pgl_matrices(g: Geometry) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Canonical invertible matrices in row-major lexicographic order (pure Python)."""
    d = g.dim
    t = g.tables
    vecs = list(product(range(g.q), repeat=d))
    for rows in product(vecs, repeat=d):
        if _leading_entry(rows) != 1:
            continue
        if len(_rank_rows(rows, t)) == d:
            yield rows


def _leading_entry(rows) -> int:
    for row in rows:
        for c in row:
            if c:
                return c
    return 0


def _rank_rows(rows, t):
    from .projgeom import row_reduce

    return row_reduce(rows, t)[1]


def projectivity_from_matrix(a, g: Geometry, psi=None) -> Projectivity:
    """Permutation of labels induced by matrix ``a`` acting on column vectors."""
    psi = identity_labeling(g) if psi is None else check_labeling(psi, g.r)
    inv = np.empty_like(psi)
    inv[psi] = np.arange(g.r)
    perm = np.empty(g.r, dtype=np.int64)
    for label in range(g.r):
        image = mat_vec(a, g.points[inv[label]], g.tables)
        perm[label] = psi[g.index_of(image)]
    return Projectivity(perm, tuple(tuple(int(x) for x in row) for row in a))


def frame_matrix(s, g: Geometry) -> list[list[int]]:
    """Matrix taking the standard frame e_0, ..., e_n, e_0+...+e_n onto frame ``s``."""
    t = g.tables
    d = g.dim
    cols = [list(g.points[i]) for i in s[:d]]
    a = [[cols[j][i] for j in range(d)] for i in range(d)]
    lam = solve(a, list(g.points[s[d]]), t)
    return [[int(t.mul[a[i][j], lam[j]]) for j in range(d)] for i in range(d)]


def projectivity_from_frames(s, s2, g: Geometry) -> Projectivity:
    s, s2 = [int(i) for i in s], [int(i) for i in s2]
    if not (is_frame(s, g) and is_frame(s2, g)):
        raise ValueError("both inputs must be frames")
    t = g.tables
    a = mat_mul(frame_matrix(s2, g), mat_inv(frame_matrix(s, g), t), t)
    return projectivity_from_matrix(a, g)


@dataclass(frozen=True)
class OrbitStats:
    orbit_size: int
    stab_size: int
    asc_size: int

    @property
    def coverage(self) -> int:
        return self.asc_size * self.stab_size


def orbit_asc_stab(s, rep: GroupRep, max_orbit: int = DEFAULT_ORBIT_GUARD) -> OrbitStats:
    s = [int(x) for x in s]
    if len(set(s)) != len(s):
        raise ValueError("sequence entries must be distinct")
    if rep.order * len(s) > max_orbit:
        raise ResourceGuardError(
            f"orbit walk over {rep.order} elements exceeds the guard {max_orbit}"
        )
    v = rep.degree
    target = int(kernels.sequence_rank(np.array(s), v))
    seen, seen_asc = [], []
    stab = 0
    for chunk in rep.images(s):
        ranks = kernels.sequence_rank(chunk, v)
        stab += int((ranks == target).sum())
        seen.append(np.unique(ranks))
        seen_asc.append(np.unique(ranks[(np.diff(chunk, axis=1) > 0).all(axis=1)]))
    orbit = np.unique(np.concatenate(seen))
    asc = np.unique(np.concatenate(seen_asc))
    if len(orbit) * stab != rep.order:
        raise AssertionError("orbit-stabiliser identity failed")
    return OrbitStats(len(orbit), stab, len(asc))


def _is_increasing(seq) -> bool:
    return all(a < b for a, b in zip(seq, seq[1:]))


def coverage_via_orbit(s, rep: GroupRep, max_orbit: int = DEFAULT_ORBIT_GUARD) -> int:
    return orbit_asc_stab(s, rep, max_orbit).coverage
