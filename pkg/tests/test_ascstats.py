import json
from collections import Counter
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from seqcover.ascstats import (
    T_CLASSES,
    LabeledLineSet,
    SequenceClass,
    asc_equals_orbit_count,
    ascent_sums,
    census,
    census_closed_form,
    classify,
    classify_all,
    coverage_histogram_thm2,
    diffset_identity_check,
    e5_closed_form,
    lineflip_check,
    lineflip_sides,
    lineset_from_geometry,
    linesum_check,
    representative,
)
from seqcover.errors import ResourceGuardError
from seqcover.grp import GroupRep, orbit_asc_stab
from seqcover.projgeom import build_geometry, rank_of
from seqcover.singer import labeling_from_singer, singer_difference_set

SINGER_Q = [2, 3, 4, 5, 7, 8, 9]


def brute_class(s, g, inv_psi):
    """Classify from ranks of point triples in the geometry."""
    pts = [int(inv_psi[x]) for x in s]
    collinear = [rank_of([pts[j] for j in range(4) if j != i], g) == 2 for i in range(4)]
    if all(collinear):
        return SequenceClass.COLLINEAR4
    if any(collinear):
        return T_CLASSES[collinear.index(True)]
    return SequenceClass.FRAME


def brute_asc(s, rep):
    """Number of distinct increasing images of s under the group."""
    perms = rep.permutations()
    imgs = perms[:, list(s)]
    inc = imgs[(np.diff(imgs, axis=1) > 0).all(axis=1)]
    return len({tuple(row) for row in inc.tolist()})


@pytest.mark.parametrize("q", [2, 3])
def test_classification_matches_ranks(q, plane):
    g = plane(q)
    psi = np.random.default_rng(q).permutation(g.r)
    L = lineset_from_geometry(g, psi)
    inv = np.argsort(psi)
    codes = classify_all(L)
    names = [SequenceClass.FRAME, *T_CLASSES, SequenceClass.COLLINEAR4]
    rng = np.random.default_rng(5)
    seqs = list(permutations(range(g.r), 4))
    for k in rng.integers(0, len(seqs), size=300):
        s = seqs[k]
        expected = brute_class(s, g, inv)
        assert classify(s, L) is expected
        assert names[codes[k]] is expected


@pytest.mark.parametrize("q", [2, 3, 4])
def test_census(q, plane):
    L = labeling_from_singer(plane(q)).lineset
    got = census(L)
    assert got == census_closed_form(q)
    assert sum(got.values()) == L.r * (L.r - 1) * (L.r - 2) * (L.r - 3)


def test_census_q3_numbers(plane):
    assert census(labeling_from_singer(plane(3)).lineset) == {
        "Frame": 5616, "T1": 2808, "T2": 2808, "T3": 2808, "T4": 2808, "Collinear4": 312
    }


@pytest.mark.parametrize("q", SINGER_Q)
def test_singer_ascent_sums_are_equal(q, plane):
    L = labeling_from_singer(plane(q)).lineset
    s = ascent_sums(L)
    assert s.e1 == s.e2 == s.e3 == s.e4
    assert 4 * s.e1 == s.e5 == e5_closed_form(q)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_relabelled_ascent_identities(q, plane):
    g = plane(q)
    rng = np.random.default_rng(100 + q)
    for _ in range(20):
        L = lineset_from_geometry(g, rng.permutation(g.r))
        s = ascent_sums(L)
        assert s.e1 + s.e4 == s.e2 + s.e3
        assert 2 * (s.e1 + s.e4) == s.e5
        computed, closed, ok = linesum_check(L)
        assert ok and computed == closed


@pytest.mark.parametrize("q", [2, 3])
def test_predicted_asc_matches_orbit_walk(q, plane):
    g = plane(q)
    for psi in (labeling_from_singer(g).psi, np.random.default_rng(9).permutation(g.r)):
        L = lineset_from_geometry(g, psi)
        rep = GroupRep(g, psi)
        sums = ascent_sums(L).as_list()
        for i, cls in enumerate(T_CLASSES):
            s = representative(cls, L)
            assert classify(s, L) is cls
            assert brute_asc(s, rep) == sums[i]
            assert asc_equals_orbit_count(L, cls, rep)
        assert asc_equals_orbit_count(L, SequenceClass.FRAME, rep)
        with pytest.raises(ValueError):
            asc_equals_orbit_count(L, SequenceClass.COLLINEAR4, rep)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_orbit_of_t_class_is_whole_class(q, plane):
    g = plane(q)
    lab = labeling_from_singer(g)
    rep = GroupRep(g, lab.psi)
    for cls in T_CLASSES:
        st = orbit_asc_stab(representative(cls, lab.lineset), rep)
        assert st.orbit_size == census_closed_form(q)[cls.value]


@pytest.mark.parametrize("q", SINGER_Q)
def test_difference_set_identities(q):
    D = singer_difference_set(q)
    assert all(diffset_identity_check(D, i) for i in range(q + 1))


@pytest.mark.parametrize("q", SINGER_Q)
def test_line_flip_identity(q, plane):
    L = labeling_from_singer(plane(q)).lineset
    assert all(lineflip_check(L, i) for i in range(q + 1))


def test_line_flip_needs_translate_closure(plane):
    g = plane(3)
    L = lineset_from_geometry(g, np.random.default_rng(1).permutation(g.r))
    assert not L.is_translate_closed()
    with pytest.raises(ValueError):
        lineflip_sides(L, 0)


def test_lineset_validation():
    with pytest.raises(ValueError):
        LabeledLineSet(2, [[0, 1, 2]] * 7)
    with pytest.raises(ValueError):
        LabeledLineSet(2, [[0, 3, 1], [1, 2, 4], [2, 3, 5], [3, 4, 6], [0, 4, 5], [1, 5, 6], [0, 2, 6]])


def brute_translate_lines(D):
    return sorted(tuple(sorted((a + j) % D.r for a in D.elems)) for j in range(D.r))


def test_relabel_lines():
    D = singer_difference_set(2)
    L = LabeledLineSet(2, brute_translate_lines(D))
    assert sorted(map(tuple, L.relabel(np.arange(7)).lines.tolist())) == brute_translate_lines(D)
    perm = np.array([1, 2, 3, 4, 5, 6, 0])
    assert L.relabel(perm).is_translate_closed()


@pytest.mark.parametrize("q", [2, 3])
def test_histogram_matches_brute_force(q, plane):
    res = coverage_histogram_thm2(q)
    g = plane(q)
    lab = labeling_from_singer(g)
    perms = GroupRep(g, lab.psi).permutations()
    inv = np.argsort(perms, axis=1)
    seqs = np.array(list(permutations(range(g.r), 4)))
    pos = inv[:, seqs]  # (|G|, |S|, 4)
    brute = (np.diff(pos, axis=2) > 0).all(axis=2).sum(axis=0)
    assert np.array_equal(res.counts, brute)


def test_histogram_q4(plane):
    res = coverage_histogram_thm2(4)
    assert res.lam == 2520 and res.group_order == 60480
    for cls in ("Frame", "T1", "T2", "T3", "T4"):
        assert set(res.class_histograms[cls]) == {2520}
    assert res.perfect_fraction > Fraction(4, 5)
    assert res.passes
    doc = json.loads(res.to_json())
    assert doc["census"] == census_closed_form(4)
    assert sum(doc["histogram"].values()) == res.total == 21 * 20 * 19 * 18
    assert doc["e"] == [840] * 4 and doc["e5"] == 3360


def test_histogram_collinear_part_balances():
    res = coverage_histogram_thm2(4)
    col = Counter(res.class_histograms["Collinear4"])
    total = sum(k * v for k, v in col.items())
    assert total == res.lam * sum(col.values())


def test_histogram_guard():
    with pytest.raises(ResourceGuardError):
        coverage_histogram_thm2(3, max_group=1000)


def test_representatives_need_four_point_lines():
    L = labeling_from_singer(build_geometry(2, 2)).lineset
    with pytest.raises(ValueError):
        representative(SequenceClass.COLLINEAR4, L)
