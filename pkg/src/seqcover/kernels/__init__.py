"""Hot loops behind a backend switch.

The numba backend is used when numba imports and the environment variable
``SEQCOVER_NO_NUMBA`` is unset or "0"; otherwise the numpy twins run.
:func:`use_backend` switches at runtime (tests and the benchmark use it).
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager

import numpy as np

from . import _numpy

ENV_FLAG = "SEQCOVER_NO_NUMBA"

# the bundled TBB is too old for numba and only produces a warning
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None


def _initial_backend() -> str:
    if _numba is None or os.environ.get(ENV_FLAG, "0") not in ("", "0"):
        return "numpy"
    return "numba"


_state = {"backend": _initial_backend()}


def backend() -> str:
    return _state["backend"]


def available_backends() -> list[str]:
    return ["numpy"] + (["numba"] if _numba is not None else [])


@contextmanager
def use_backend(name: str):
    if name not in available_backends():
        raise ValueError(f"backend {name!r} is not available")
    prev = _state["backend"]
    _state["backend"] = name
    try:
        yield
    finally:
        _state["backend"] = prev


def _impl():
    return _numba if _state["backend"] == "numba" else _numpy


def set_threads(n: int | None) -> None:
    if n and _numba is not None:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def num_threads() -> int:
    if _numba is not None and backend() == "numba":
        import numba

        return numba.get_num_threads()
    return 1


def sequence_count(v: int, t: int) -> int:
    return math.perm(v, t)


def sequence_rank(seqs, v: int) -> np.ndarray:
    return _numpy.sequence_rank(seqs, v)


def sequence_unrank(rank: int, v: int, t: int) -> tuple[int, ...]:
    digits = []
    for j in range(t - 1, -1, -1):
        rank, dj = divmod(rank, v - j)
        digits.append(dj)
    digits.reverse()
    seq: list[int] = []
    for dj in digits:
        free = [x for x in range(v) if x not in seq]
        seq.append(free[dj])
    return tuple(seq)


def all_vectors(q: int, d: int) -> np.ndarray:
    return np.stack(np.unravel_index(np.arange(q**d), (q,) * d), axis=1).astype(np.int64)


def pgl_images(n, q, tables, row0s, targets, code_to_label, per_row0) -> np.ndarray:
    """Labelled images of ``targets`` under every group element whose first row is in ``row0s``."""
    args = _pgl_args(n, q, tables, row0s, targets, code_to_label)
    out, done = _impl().pgl_images(*args, int(per_row0))
    if not (done == per_row0).all():
        raise AssertionError(f"enumeration produced {done.tolist()} elements, expected {per_row0} each")
    return out


def pgl_count_ascending(n, q, tables, row0s, targets, code_to_label, seq_len) -> tuple[np.ndarray, int]:
    """Per sequence, how many group elements map it to a strictly increasing label sequence."""
    args = _pgl_args(n, q, tables, row0s, targets, code_to_label)
    counts, done = _impl().pgl_count_ascending(*args, int(seq_len))
    return counts, int(done.sum())


def _pgl_args(n, q, tables, row0s, targets, code_to_label):
    return (
        int(n),
        int(q),
        np.ascontiguousarray(tables.add, dtype=np.int64),
        np.ascontiguousarray(tables.mul, dtype=np.int64),
        np.ascontiguousarray(tables.neg, dtype=np.int64),
        np.ascontiguousarray(tables.inv, dtype=np.int64),
        np.ascontiguousarray(row0s, dtype=np.int64),
        all_vectors(q, n + 1),
        np.ascontiguousarray(targets, dtype=np.int64),
        np.ascontiguousarray(code_to_label, dtype=np.int64),
    )


def coverage_counts(perms: np.ndarray, t: int, nchunks: int | None = None) -> np.ndarray:
    """Coverage count of every sequence of S_{v,t}, indexed by :func:`sequence_rank`."""
    perms = np.ascontiguousarray(perms)
    if perms.dtype.kind not in "iu":
        raise TypeError("permutation rows must be integer arrays")
    v = perms.shape[1]
    size = sequence_count(v, t)
    if nchunks is None:
        nchunks = num_threads()
    return _impl().coverage_counts(perms, int(t), int(size), int(max(1, nchunks)))
