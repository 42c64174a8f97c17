import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromono.errors import AmbientMismatchError, NotInvertibleError, ResourceLimitError
from entromono.fingroup import Element, FinAbGroup, Hom, Subgroup
from entromono.shiftspace import (
    Configuration,
    EncodedSet,
    EndoKind,
    FiberwiseSubgroup,
    IndexKind,
    ShiftSpace,
    TranslationEndo,
    Window,
    apply_translation,
    map_values,
    subgroup_order_in_window,
    sumset,
    window_hom,
)

Z2, Z3, Z4 = FinAbGroup((2,)), FinAbGroup((3,)), FinAbGroup((4,))
N_Z2 = ShiftSpace(Z2, 1, IndexKind.NONNEG)
Z_Z3 = ShiftSpace(Z3, 1, IndexKind.FULL)

spaces = st.sampled_from(
    [
        N_Z2,
        Z_Z3,
        ShiftSpace(FinAbGroup((2, 2)), 1, IndexKind.FULL),
        ShiftSpace(Z4, 2, IndexKind.NONNEG),
        ShiftSpace(Z2, 2, IndexKind.FULL),
    ]
)


def random_config(rng, X, spread=4, nsites=4):
    lo = 0 if X.index_kind is IndexKind.NONNEG else -spread
    vals = {}
    for _ in range(rng.randint(0, nsites)):
        idx = tuple(rng.randint(lo, spread) for _ in range(X.dim))
        vals[idx] = X.base.random_element(rng)
    return Configuration(X, vals)


def random_vector(rng, X, nonneg):
    lo = 0 if nonneg else -3
    return tuple(rng.randint(lo, 3) for _ in range(X.dim))


def test_translation_examples():
    assert TranslationEndo(N_Z2, (1,), EndoKind.PUSH)(N_Z2.delta(0)) == N_Z2.delta(1)
    assert TranslationEndo(N_Z2, (1,), EndoKind.PULL)(N_Z2.delta(0)).is_zero()
    assert TranslationEndo(Z_Z3, (1,), EndoKind.PULL)(Z_Z3.delta(0, 2)) == Z_Z3.delta(-1, 2)


def test_sumset_examples():
    d0, d1, zero = N_Z2.delta(0), N_Z2.delta(1), N_Z2.zero()
    assert sumset([zero, d0], [zero, d1]) == {zero, d0, d1, d0 + d1}
    assert sumset([zero, d0, d1], [zero]) == {zero, d0, d1}
    assert sumset([zero, d0], [zero, d0]) == {zero, d0}


def test_configurations_are_canonical():
    X = Z_Z3
    a = Configuration(X, {(0,): (1,), (2,): (0,)})
    b = Configuration(X, {(0,): (4,)})
    assert a == b and hash(a) == hash(b) and a.indices() == [(0,)]
    assert (a + a + a).is_zero() and a - a == X.zero() and 3 * a == X.zero()
    with pytest.raises(AmbientMismatchError):
        Configuration(N_Z2, {(-1,): (1,)})
    with pytest.raises(AmbientMismatchError):
        N_Z2.delta(0) + Z_Z3.delta(0)
    with pytest.raises(ValueError):
        ShiftSpace(FinAbGroup(()), 1)


@given(spaces, st.integers(0, 10**6), st.booleans())
def test_translations_are_homomorphisms(X, seed, push):
    rng = random.Random(seed)
    v = random_vector(rng, X, X.index_kind is IndexKind.NONNEG)
    e = TranslationEndo(X, v, EndoKind.PUSH if push else EndoKind.PULL)
    x, y = random_config(rng, X), random_config(rng, X)
    assert e(x + y) == e(x) + e(y)
    assert e(-x) == -e(x)
    assert e(X.zero()).is_zero()


@given(st.integers(0, 10**6))
def test_push_on_one_sided_space_is_injective(seed):
    rng = random.Random(seed)
    X = ShiftSpace(Z4, 2, IndexKind.NONNEG)
    e = TranslationEndo(X, random_vector(rng, X, True), EndoKind.PUSH)
    x, y = random_config(rng, X), random_config(rng, X)
    assert (e(x) == e(y)) == (x == y)
    assert e.is_injective()


def test_pull_on_one_sided_space_has_a_kernel():
    e = TranslationEndo(N_Z2, (2,), EndoKind.PULL)
    assert not e.is_injective()
    assert e(N_Z2.delta(1)).is_zero()
    with pytest.raises(NotInvertibleError):
        e.inverse()
    with pytest.raises(ValueError):
        TranslationEndo(N_Z2, (-1,), EndoKind.PUSH)


@given(st.integers(0, 10**6))
def test_two_sided_translations_are_invertible(seed):
    rng = random.Random(seed)
    X = ShiftSpace(Z2, 2, IndexKind.FULL)
    v = random_vector(rng, X, False)
    for kind in EndoKind:
        e = TranslationEndo(X, v, kind)
        x = random_config(rng, X)
        assert e.inverse()(e(x)) == x == e(e.inverse()(x))
    push, pull = TranslationEndo(X, v, EndoKind.PUSH), TranslationEndo(X, v, EndoKind.PULL)
    x = random_config(rng, X)
    assert push(pull(x)) == x
    w = random_vector(rng, X, False)
    assert push.compose(TranslationEndo(X, w))(x) == push(TranslationEndo(X, w)(x))
    assert push.scaled(3)(x) == push(push(push(x)))


@given(spaces, st.integers(0, 10**6))
@settings(max_examples=60)
def test_sumset_against_pairwise_enumeration(X, seed):
    rng = random.Random(seed)
    A = {X.zero()} | {random_config(rng, X, spread=2, nsites=3) for _ in range(rng.randint(1, 14))}
    B = {X.zero()} | {random_config(rng, X, spread=2, nsites=3) for _ in range(rng.randint(1, 14))}
    brute = {a + b for a in A for b in B}
    got = sumset(A, B)
    assert got == brute
    assert len(got) <= len(A) * len(B)


def test_sumset_equality_on_disjoint_free_supports():
    A = [N_Z2.zero(), N_Z2.delta(0)] + [N_Z2.delta(0) + N_Z2.delta(1)]
    B = [N_Z2.zero()] + [N_Z2.delta(k) for k in range(5, 30)]
    assert len(sumset(A, B)) == len(A) * len(B)


def test_sumset_cap_raises():
    A = [sum((N_Z2.delta(i) for i in range(6) if m >> i & 1), N_Z2.zero()) for m in range(64)]
    B = [sum((N_Z2.delta(6 + i) for i in range(6) if m >> i & 1), N_Z2.zero()) for m in range(64)]
    with pytest.raises(ResourceLimitError):
        sumset(A, B, cap=100)


@given(spaces, st.integers(0, 10**6))
@settings(max_examples=40)
def test_encoded_sets_round_trip_and_translate(X, seed):
    rng = random.Random(seed)
    configs = {random_config(rng, X, spread=3) for _ in range(rng.randint(1, 10))}
    E = EncodedSet.from_configurations(configs)
    assert set(E.configurations()) == configs
    extra = Window(X, list(E.window.sites) + [tuple([3] * X.dim), tuple([5] * X.dim)])
    assert set(E.reencode(extra).configurations()) == configs
    v = random_vector(rng, X, X.index_kind is IndexKind.NONNEG)
    for kind in EndoKind:
        e = TranslationEndo(X, v, kind)
        assert set(E.translate(e).configurations()) == {e(c) for c in configs}


def window_closure(W, gens):
    seen = {W.space.zero()}
    frontier = list(seen)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_subgroup_order_in_window_against_closure(seed):
    rng = random.Random(seed)
    X = ShiftSpace(FinAbGroup((2, 4)), 1, IndexKind.NONNEG)
    W = Window(X, [(0,), (1,), (2,)])
    gens = [random_config(rng, X, spread=2) for _ in range(rng.randint(0, 3))]
    assert subgroup_order_in_window(W, gens) == len(window_closure(W, gens))


def test_window_group_and_hom_agree_with_translation():
    X = ShiftSpace(FinAbGroup((2, 4)), 1, IndexKind.NONNEG)
    W = Window(X, [(0,), (1,), (2,)])
    T = Window(X, [(0,), (1,)])
    e = TranslationEndo(X, (1,), EndoKind.PULL)
    G1, G2, f = window_hom(W, e, T)
    assert G1.order() == W.order() == 8**3 and G2.order() == 8**2
    assert f.image().order() == G2.order()
    assert f.kernel().order() == 8
    assert e.commutes_with(TranslationEndo(X, (2,), EndoKind.PULL))


def test_window_digits_round_trip():
    X = ShiftSpace(FinAbGroup((2, 4)), 2, IndexKind.FULL)
    W = Window(X, itertools.product(range(-1, 1), repeat=2))
    rng = random.Random(0)
    for _ in range(20):
        d = [rng.randrange(m) for m in W.moduli]
        assert W.digits(W.configuration(d)) == d
    assert len(W) == 4 and (0, 0) in W


def test_fiberwise_subgroup_and_value_maps():
    X = ShiftSpace(Z4, 1, IndexKind.FULL)
    C = Subgroup(Z4, [Z4.element((2,))])
    H = FiberwiseSubgroup(X, C)
    assert X.delta(3, 2) in H and X.delta(3, 1) not in H
    with pytest.raises(AmbientMismatchError):
        FiberwiseSubgroup(X, Subgroup(Z2, []))
    Y = ShiftSpace(Z2, 1, IndexKind.FULL)
    f = Hom(Z4, Z2, [[1]])
    x = X.delta(0, 3) + X.delta(2, 2)
    assert map_values(x, f, Y) == Y.delta(0, 1)
    assert map_values(x, f, None) is None
    assert isinstance(apply_translation(TranslationEndo(X, (1,)), x), Configuration)
    assert Element(Z4, (2,)) in list(C.elements())
