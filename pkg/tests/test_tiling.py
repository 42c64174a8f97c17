import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromono.errors import TilingFailure
from entromono.tiling import QuasiTiling, TileSystem, box, cube, quasi_tile, translates, verify_quasi_tiling


def test_interval_tiles_exactly():
    t = quasi_tile(TileSystem([box((0,), (2,))], Fraction(1, 10)), box((0,), (8,)))
    assert t.centers == [[(0,), (2,), (4,), (6,)]]
    assert t.leftover() == 0
    assert verify_quasi_tiling(t, Fraction(1, 10))


def test_two_shapes_tile_a_large_square():
    eps = Fraction(1, 10)
    t = quasi_tile(TileSystem([cube(2, 2), cube(4, 2)], eps), cube(100, 2))
    v = verify_quasi_tiling(t, eps)
    assert v.ok and v.details["leftover"] == 0
    by_len = dict(zip((len(S) for S in t.shapes), t.centers))
    assert len(by_len[16]) == 625 and by_len[4] == []


def test_greedy_failure_reports_the_ratio():
    with pytest.raises(TilingFailure) as exc:
        quasi_tile(TileSystem([box((0,), (3,))], Fraction(1, 20)), box((0,), (10,)))
    assert exc.value.leftover_ratio == Fraction(1, 10)
    t = exc.value.tiling
    assert t.centers == [[(0,), (3,), (6,)]]
    v = verify_quasi_tiling(t, Fraction(1, 20))
    assert not v and v.clause == "QT.3"


def test_duplicated_center_across_shapes_violates_qt2():
    S = box((0,), (2,))
    t = QuasiTiling(box((0,), (8,)), (S, S), [[(0,), (2,), (4,), (6,)], [(2,)]])
    v = verify_quasi_tiling(t, Fraction(1, 10))
    assert v.clause == "QT.2" and v.witness["common_cell"] == (2,)


def test_empty_centers_violate_qt3():
    t = QuasiTiling(box((0,), (5,)), (box((0,), (2,)),), [[]])
    v = verify_quasi_tiling(t, Fraction(1, 10))
    assert v.clause == "QT.3" and v.witness["leftover"] == 5


def test_qt1_catches_tiles_outside_the_target_and_overlaps_within_a_shape():
    S = box((0,), (2,))
    v = verify_quasi_tiling(QuasiTiling(box((0,), (4,)), (S,), [[(3,)]]), Fraction(1, 10))
    assert v.clause == "QT.1" and v.witness["cell_outside_target"] == (4,)
    v = verify_quasi_tiling(QuasiTiling(box((0,), (4,)), (S,), [[(0,), (1,), (2,)]]), Fraction(1, 10))
    assert v.clause == "QT.1" and v.witness["size"] == 4


def test_tile_system_validation():
    with pytest.raises(ValueError):
        TileSystem([], Fraction(1, 10))
    with pytest.raises(ValueError):
        TileSystem([box((0,), (2,))], Fraction(1, 2))
    with pytest.raises(ValueError):
        TileSystem([box((0,), (2,)), cube(2, 2)], Fraction(1, 10))
    with pytest.raises(ValueError):
        quasi_tile(TileSystem([box((0,), (2,))], Fraction(1, 10)), [])
    assert len(TileSystem([box((0,), (2,)), box((0,), (2,))], Fraction(1, 10)).shapes) == 1


@st.composite
def tiling_problems(draw):
    d = draw(st.integers(1, 2))
    side = draw(st.integers(3, 14 if d == 2 else 60))
    lo = tuple(draw(st.integers(-5, 5)) for _ in range(d))
    F = box(lo, tuple(a + side for a in lo))
    shapes = []
    for _ in range(draw(st.integers(1, 3))):
        shapes.append(box((0,) * d, tuple(draw(st.integers(1, 4)) for _ in range(d))))
    eps = Fraction(draw(st.integers(1, 49)), 100)
    return F, shapes, eps


@given(tiling_problems())
@settings(max_examples=80)
def test_greedy_output_always_satisfies_the_clauses(problem):
    F, shapes, eps = problem
    system = TileSystem(shapes, eps)
    try:
        t = quasi_tile(system, F)
    except TilingFailure as e:
        assert e.leftover_ratio > eps
        t = e.tiling
        assert verify_quasi_tiling(t, eps).clause == "QT.3"
    else:
        assert verify_quasi_tiling(t, eps).ok
    # independent recount: tiles are exactly disjoint and inside F
    cells = Counter()
    for C, S in zip(t.centers, t.shapes):
        cells.update(translates(C, S))
    assert all(v == 1 for v in cells.values())
    assert set(cells) <= F
    assert t.leftover() == len(F) - len(cells)


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_verifier_rejects_perturbed_tilings(seed):
    rng = random.Random(seed)
    eps = Fraction(1, 10)
    S = box((0, 0), (2, 2))
    F = box((0, 0), (10, 10))
    t = quasi_tile(TileSystem([S], eps), F)
    C = list(t.centers[0])
    c = rng.choice([x for x in C if x[0] < 8])
    # one overlapping tile stays within the eps slack of QT.1; a stray one does not
    overlap = QuasiTiling(F, t.shapes, [C + [(c[0] + 1, c[1])]])
    assert verify_quasi_tiling(overlap, eps).ok
    stray = QuasiTiling(F, t.shapes, [C[:-1] + [(c[0] + 10, c[1])]])
    assert verify_quasi_tiling(stray, eps).clause == "QT.1"
    doubled = QuasiTiling(F, t.shapes, [C + [(x + 1, y) for x, y in C]])
    assert verify_quasi_tiling(doubled, eps).clause == "QT.1"
    dropped = QuasiTiling(F, t.shapes, [C[: len(C) - 3]])
    assert verify_quasi_tiling(dropped, eps).clause == "QT.3"
