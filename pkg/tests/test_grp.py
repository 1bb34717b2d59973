from itertools import permutations

import numpy as np
import pytest

from seqcover.errors import ResourceGuardError
from seqcover.grp import (
    GroupRep,
    coverage_via_orbit,
    enumerate_pgl,
    iter_pgl_matrices,
    orbit_asc_stab,
    pgl_order,
    projectivity_from_frames,
    projectivity_from_matrix,
)
from seqcover.projgeom import build_geometry, is_frame
from seqcover.psca import naive_coverage


def brute_pgl_order(n, q):
    """|GL(n+1, q)| / (q - 1) from the product formula written out term by term."""
    d = n + 1
    gl = 1
    for i in range(d):
        gl *= q**d - q**i
    assert gl % (q - 1) == 0
    return gl // (q - 1)


@pytest.mark.parametrize("n,q,order", [(2, 2, 168), (2, 3, 5616), (2, 4, 60480), (2, 5, 372000),
                                       (1, 5, 120), (3, 2, 20160)])
def test_group_order(n, q, order):
    assert pgl_order(n, q) == brute_pgl_order(n, q) == order


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2)])
def test_enumeration_is_the_group(n, q):
    g = build_geometry(n, q)
    perms = GroupRep(g).permutations()
    assert len(perms) == pgl_order(n, q)
    assert len({row.tobytes() for row in perms}) == len(perms)
    assert (np.sort(perms, axis=1) == np.arange(g.r)).all()


def test_enumeration_is_closed_under_composition():
    g = build_geometry(2, 2)
    perms = GroupRep(g).permutations()
    keys = {row.tobytes() for row in perms}
    rng = np.random.default_rng(1)
    for a, b in rng.integers(0, len(perms), size=(200, 2)):
        assert perms[a][perms[b]].tobytes() in keys
        inv = np.argsort(perms[a])
        assert inv.astype(perms.dtype).tobytes() in keys


@pytest.mark.parametrize("n,q", [(2, 2), (1, 3), (1, 4)])
def test_enumeration_order_matches_python_oracle(n, q):
    g = build_geometry(n, q)
    mats = list(iter_pgl_matrices(g))
    assert len(mats) == pgl_order(n, q)
    oracle = np.array([projectivity_from_matrix(a, g).perm for a in mats])
    assert np.array_equal(oracle, GroupRep(g).permutations())


def test_labelled_action_is_conjugate():
    g = build_geometry(2, 3)
    rng = np.random.default_rng(7)
    psi = rng.permutation(g.r)
    plain = GroupRep(g).permutations()
    labelled = GroupRep(g, psi).permutations()
    inv = np.argsort(psi)
    assert np.array_equal(labelled, psi[plain[:, inv]])


def test_generator_yields_projectivities():
    g = build_geometry(2, 2)
    items = list(enumerate_pgl(g))
    assert len(items) == 168
    assert any((p.perm == np.arange(7)).all() for p in items)


@pytest.mark.parametrize("q", [2, 3])
def test_frames_map_uniquely(q):
    g = build_geometry(2, q)
    perms = GroupRep(g).permutations()
    rng = np.random.default_rng(q)
    frames = [s for s in permutations(range(g.r), 4) if is_frame(s, g)]
    for _ in range(5):
        s = frames[rng.integers(len(frames))]
        s2 = frames[rng.integers(len(frames))]
        hits = np.flatnonzero((perms[:, list(s)] == s2).all(axis=1))
        assert len(hits) == 1
        pi = projectivity_from_frames(s, s2, g)
        assert np.array_equal(pi.perm, perms[hits[0]])


def test_frame_map_rejects_non_frames():
    g = build_geometry(2, 2)
    with pytest.raises(ValueError):
        projectivity_from_frames(g.lines[0].tolist() + [6], [0, 1, 2, 3], g)


@pytest.mark.parametrize("q", [2, 3])
def test_orbit_stabiliser_and_coverage(q):
    g = build_geometry(2, q)
    rep = GroupRep(g)
    perms = rep.permutations()
    rng = np.random.default_rng(11)
    for _ in range(15):
        s = tuple(rng.choice(g.r, size=4, replace=False).tolist())
        st = orbit_asc_stab(s, rep)
        assert st.orbit_size * st.stab_size == rep.order
        assert coverage_via_orbit(s, rep) == naive_coverage(perms, s)


def test_count_ascending_is_coverage():
    g = build_geometry(2, 3)
    rep = GroupRep(g, np.random.default_rng(3).permutation(13))
    perms = rep.permutations()
    seqs = np.array([[0, 5, 2, 9], [12, 1, 3, 4], [7, 8, 9, 10]])
    assert rep.count_ascending(seqs).tolist() == [naive_coverage(perms, s) for s in seqs]


def test_guards():
    rep = GroupRep(build_geometry(2, 3))
    with pytest.raises(ResourceGuardError):
        rep.permutations(max_rows=100)
    with pytest.raises(ResourceGuardError):
        orbit_asc_stab((0, 1, 2, 3), rep, max_orbit=10)
    with pytest.raises(ValueError):
        orbit_asc_stab((0, 0, 2, 3), rep)
    with pytest.raises(ValueError):
        GroupRep(build_geometry(2, 2), [0, 0, 1, 2, 3, 4, 5])
