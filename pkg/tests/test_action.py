import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromono.action import (
    LeftAction,
    RightAction,
    act,
    check_localization,
    induced_injective_action,
    invariant_closure,
    invariant_restriction_and_quotient,
    kernel_of_action,
    ore_localize,
    subgroup_is_invariant,
    surjective_core,
    trivial_action,
)
from entromono.errors import NotInvariantError, NotInvertibleError, UnsupportedActionError
from entromono.fingroup import FinAbGroup, Hom, Subgroup, random_group, random_hom, random_subgroup
from entromono.monoid import AmenableMonoid, Fraction
from entromono.shiftspace import EndoKind, FiberwiseSubgroup, IndexKind, ShiftSpace, TranslationEndo

N, N2, Z = AmenableMonoid.free(1), AmenableMonoid.free(2), AmenableMonoid.lattice(1)


def mult(n, c, M=N):
    G = FinAbGroup((n,))
    return LeftAction(M, G, {(1,): Hom.scalar(G, c)})


def shift(kind, index_kind=IndexKind.NONNEG, base=(2,), M=N):
    X = ShiftSpace(FinAbGroup(base), 1, index_kind)
    return LeftAction(M, X, {(1,): TranslationEndo(X, (1,), kind)})


def elements_set(H):
    return set(H.elements())


def test_act_examples():
    a = mult(5, 2)
    G = a.carrier
    for x in G.elements():
        assert act(a, (0,), x) == x
        assert act(a, (3,), x) == 3 * x  # 2^3 = 8 = 3 mod 5
    b = shift(EndoKind.PUSH)
    X = b.carrier
    assert act(b, (2,), X.delta(0)) == X.delta(2)


@given(st.integers(0, 10**6), st.integers(0, 9), st.integers(0, 9))
@settings(max_examples=40)
def test_powers_agree_with_naive_iteration(seed, s, t):
    rng = random.Random(seed)
    G = random_group(rng, 40)
    f = random_hom(rng, G, G)
    a = LeftAction(N, G, {(1,): f})
    x = G.random_element(rng)
    y = x
    for _ in range(s):
        y = f(y)
    assert a.act((s,), x) == y
    assert a.act((s + t,), x) == a.act((s,), a.act((t,), x))


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_two_generator_actions_satisfy_la2(seed):
    rng = random.Random(seed)
    G = random_group(rng, 40)
    f = random_hom(rng, G, G)
    a = LeftAction(N2, G, {(1, 0): f, (0, 1): f.power(2)})
    s, t = (rng.randint(0, 4), rng.randint(0, 4)), (rng.randint(0, 4), rng.randint(0, 4))
    x = G.random_element(rng)
    assert a.act((s[0] + t[0], s[1] + t[1]), x) == a.act(s, a.act(t, x))


def test_construction_checks():
    G = FinAbGroup((2, 2))
    f, h = Hom(G, G, [[1, 1], [0, 1]]), Hom(G, G, [[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        LeftAction(N2, G, {(1, 0): f, (0, 1): h})
    with pytest.raises(NotInvertibleError):
        mult(4, 2, Z)
    with pytest.raises(ValueError):
        LeftAction(N, G, {})
    with pytest.raises(NotInvertibleError):
        shift(EndoKind.PUSH, IndexKind.NONNEG, M=Z)


def test_numerical_monoid_action_respects_relations():
    M = AmenableMonoid.numerical([2, 3])
    G = FinAbGroup((7,))
    f = Hom.scalar(G, 3)
    a = LeftAction(M, G, {2: f.power(2), 3: f.power(3)})
    x = G.element((1,))
    assert a.act(5, x) == f.power(5)(x)
    assert a.act(9, x) == f.power(9)(x)
    with pytest.raises(ValueError):
        LeftAction(M, G, {2: f, 3: f})
    loc = ore_localize(a)
    assert loc.act(Fraction(M, 1), x) == f(x)
    assert loc.act(Fraction(M, -1), f(x)) == x


def test_kernel_examples():
    k4 = kernel_of_action(mult(4, 2))
    assert k4.is_whole and k4.chain_orders[:2] == (2, 4)
    assert kernel_of_action(mult(5, 2)).is_trivial
    assert kernel_of_action(shift(EndoKind.PULL)).is_whole
    assert kernel_of_action(shift(EndoKind.PUSH)).is_trivial
    k8 = kernel_of_action(mult(8, 2))
    assert k8.subgroup.order() == 8


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_kernel_matches_enumeration_and_is_invariant(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    f = random_hom(rng, G, G)
    a = LeftAction(N, G, {(1,): f})
    K = kernel_of_action(a).subgroup
    brute = set()
    for x in G.elements():
        y = x
        for _ in range(G.order()):
            if y.is_zero():
                brute.add(x)
                break
            y = f(y)
    assert elements_set(K) == brute
    assert {x for x in G.elements() if K.contains(f(x))} == brute


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_induced_action_is_injective_and_equivariant(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    f = random_hom(rng, G, G)
    a = LeftAction(N, G, {(1,): f})
    bar, proj = induced_injective_action(a)
    for h in bar.generator_endos():
        assert h.is_injective()
    for x in G.elements():
        assert bar.act((1,), proj(x)) == proj(f(x))


def test_induced_action_examples():
    bar, _ = induced_injective_action(mult(4, 2))
    assert bar.carrier.is_trivial()
    a = mult(5, 2)
    bar, _ = induced_injective_action(a)
    assert bar.carrier == a.carrier and bar.generator_map == a.generator_map
    bar, proj = induced_injective_action(shift(EndoKind.PULL))
    assert bar.carrier.is_trivial()


def test_ore_localize_examples():
    loc = ore_localize(mult(5, 2))
    G = loc.carrier
    for x in G.elements():
        assert loc.act(Fraction(N, (-1,)), x) == 3 * x
    assert check_localization(loc, list(G.elements()))

    b = shift(EndoKind.PUSH)
    loc = ore_localize(b)
    assert loc.carrier.index_kind is IndexKind.FULL
    X = b.carrier
    y = loc.epsilon1(X.delta(0))
    assert loc.act(Fraction(N, (-3,)), y) == loc.carrier.delta(-3)
    assert check_localization(loc, [X.delta(0), X.delta(2) + X.delta(5)])

    g = mult(5, 2, Z)
    loc = ore_localize(g)
    assert loc.action.generator_map == g.generator_map

    with pytest.raises(UnsupportedActionError):
        ore_localize(LeftAction(N, ShiftSpace(FinAbGroup((2,)), 1, IndexKind.NONNEG), {(1,): TranslationEndo(ShiftSpace(FinAbGroup((2,)), 1, IndexKind.NONNEG), (0,), EndoKind.PULL)}))


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_localization_inverts_every_generator(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    f = random_hom(rng, G, G)
    loc = ore_localize(LeftAction(N, G, {(1,): f}))
    X = loc.carrier
    for x in X.elements():
        assert loc.act(Fraction(N, (-1,)), loc.act(Fraction(N, (1,)), x)) == x
    assert check_localization(loc, list(loc.injective_action.carrier.elements()))


def test_surjective_core_examples():
    assert surjective_core(mult(4, 2)).subgroup.is_trivial()
    assert surjective_core(mult(5, 2)).subgroup.is_whole()
    G = FinAbGroup((3, 3))
    assert surjective_core(trivial_action(N, G, RightAction)).subgroup.is_whole()


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_surjective_core_is_intersection_of_images_and_idempotent(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    f = random_hom(rng, G, G)
    r = RightAction(N, G, {(1,): f})
    core = surjective_core(r)
    img = set(G.elements())
    for _ in range(G.order()):
        img = {f(x) for x in img}
    assert elements_set(core.subgroup) == img
    again = surjective_core(core.action)
    assert again.subgroup.is_whole()


def test_invariant_restriction_on_shifts():
    a = shift(EndoKind.PUSH, IndexKind.FULL, base=(4,), M=Z)
    X = a.carrier
    Y = FiberwiseSubgroup(X, Subgroup(X.base, [X.base.element((2,))]))
    pair = invariant_restriction_and_quotient(a, Y)
    assert pair.sub_action.carrier.base.order() == 2
    assert pair.quotient_action.carrier.base.order() == 2
    x = X.delta(0, 3) + X.delta(1, 2)
    q = pair.projection(x)
    assert pair.quotient_action.act((1,), q) == pair.projection(a.act((1,), x))
    z = pair.sub_action.carrier.delta(4, 1)
    assert pair.inclusion(z) == X.delta(4, 2)


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_invariant_restriction_and_quotient_are_equivariant(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    f = random_hom(rng, G, G)
    a = LeftAction(N, G, {(1,): f})
    H = invariant_closure(a, random_subgroup(rng, G).generators)
    assert subgroup_is_invariant(a, H)
    pair = invariant_restriction_and_quotient(a, H)
    assert pair.sub_action.carrier.order() * pair.quotient_action.carrier.order() == G.order()
    for x in G.elements():
        assert pair.quotient_action.act((1,), pair.projection(x)) == pair.projection(f(x))


def test_invariant_restriction_edge_cases_and_errors():
    a = mult(8, 3)
    G = a.carrier
    triv = invariant_restriction_and_quotient(a, Subgroup(G, []))
    assert triv.quotient_action.carrier.order() == 8
    whole = invariant_restriction_and_quotient(a, Subgroup(G, [G.element((1,))]))
    assert whole.sub_action.carrier.order() == 8
    V = FinAbGroup((2, 2))
    swap = LeftAction(N, V, {(1,): Hom(V, V, [[0, 1], [1, 0]])})
    with pytest.raises(NotInvariantError):
        invariant_restriction_and_quotient(swap, Subgroup(V, [V.element((1, 0))]))
