import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromono.action import LeftAction, RightAction, kernel_of_action
from entromono.duality import (
    ProfiniteDual,
    WindowGroup,
    annihilator,
    bridge_pair_check,
    colocalization_conjugacy_check,
    coset_partition,
    dual_action,
    dual_hom,
    omega,
    pairing,
    profinite_index,
    trajectory_window,
    windowed_quotient,
)
from entromono.errors import AmbientMismatchError, NotASubgroupError
from entromono.fingroup import (
    FinAbGroup,
    Hom,
    Subgroup,
    random_group,
    random_hom,
    random_subgroup,
    subgroup_intersection,
    subgroup_sum,
)
from entromono.monoid import AmenableMonoid
from entromono.shiftspace import EndoKind, IndexKind, ShiftSpace, TranslationEndo

N = AmenableMonoid.free(1)


def perp_by_enumeration(H):
    X = H.ambient
    hs = list(H.elements())
    return {y for y in X.elements() if all(pairing(X, h, y) == 0 for h in hs)}


def mult(n, c):
    G = FinAbGroup((n,))
    return LeftAction(N, G, {(1,): Hom.scalar(G, c)})


def test_pairing_is_bilinear_and_nondegenerate():
    X = FinAbGroup((2, 6))
    xs = list(X.elements())
    rng = random.Random(0)
    for _ in range(50):
        x, y, z = rng.choice(xs), rng.choice(xs), rng.choice(xs)
        s = pairing(X, x + y, z) - pairing(X, x, z) - pairing(X, y, z)
        assert s.denominator == 1
    for x in xs:
        if not x.is_zero():
            assert any(pairing(X, x, y) != 0 for y in xs)
    with pytest.raises(AmbientMismatchError):
        pairing(X, FinAbGroup((3,)).zero(), X.zero())


def test_annihilator_examples():
    G = FinAbGroup((4,))
    assert annihilator(Subgroup(G, [])).is_whole()
    assert annihilator(Subgroup(G, [G.element((1,))])).is_trivial()
    H = Subgroup(G, [G.element((2,))])
    assert set(annihilator(H).elements()) == {G.element((0,)), G.element((2,))}


@given(st.integers(0, 10**6))
@settings(max_examples=50)
def test_annihilator_against_character_enumeration(seed):
    rng = random.Random(seed)
    X = random_group(rng, 64)
    H = random_subgroup(rng, X, rng.randint(0, 2))
    P = annihilator(H)
    assert set(P.elements()) == perp_by_enumeration(H)
    assert H.order() * P.order() == X.order()
    assert annihilator(P) == H


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_perp_is_a_lattice_anti_isomorphism(seed):
    rng = random.Random(seed)
    X = random_group(rng, 64)
    A, B = random_subgroup(rng, X), random_subgroup(rng, X)
    assert annihilator(subgroup_sum(A, B)) == subgroup_intersection(annihilator(A), annihilator(B))
    assert annihilator(subgroup_intersection(A, B)) == subgroup_sum(annihilator(A), annihilator(B))


def test_dual_hom_examples():
    G = FinAbGroup((4,))
    assert dual_hom(Hom.identity(G)) == Hom.identity(G)
    assert dual_hom(Hom.scalar(G, 2)) == Hom.scalar(G, 2)
    Y = FinAbGroup((2, 2))
    assert dual_hom(Hom.zero(G, Y)) == Hom.zero(Y, G)


@given(st.integers(0, 10**6))
@settings(max_examples=50)
def test_dual_hom_is_adjoint_for_the_pairing(seed):
    rng = random.Random(seed)
    X, Y = random_group(rng, 36), random_group(rng, 36)
    f = random_hom(rng, X, Y)
    fh = dual_hom(f)
    for _ in range(10):
        x, y = X.random_element(rng), Y.random_element(rng)
        assert pairing(Y, f(x), y) == pairing(X, x, fh(y))
    assert annihilator(f.image()) == fh.kernel()
    H = random_subgroup(rng, X)
    fH = Subgroup(Y, [f(h) for h in H.generators])
    lhs = annihilator(fH)
    rhs = {y for y in Y.elements() if annihilator(H).contains(fh(y))}
    assert set(lhs.elements()) == rhs


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_dual_is_contravariant_and_omega_natural(seed):
    rng = random.Random(seed)
    X, Y, W = random_group(rng, 24), random_group(rng, 24), random_group(rng, 24)
    f, g = random_hom(rng, X, Y), random_hom(rng, Y, W)
    assert dual_hom(g.compose(f)) == dual_hom(f).compose(dual_hom(g))
    assert omega(Y).compose(f) == dual_hom(dual_hom(f)).compose(omega(X))


def test_dual_action_examples():
    d = dual_action(mult(5, 2))
    assert isinstance(d, RightAction)
    assert d.generator_map[(1,)] == Hom.scalar(FinAbGroup((5,)), 2)
    dd = dual_action(d)
    assert isinstance(dd, LeftAction) and not isinstance(dd, RightAction)
    assert dd.generator_map == mult(5, 2).generator_map


@pytest.mark.parametrize("n,c,kernel_order", [(4, 2, 4), (8, 2, 8), (5, 2, 1), (12, 2, 4), (9, 3, 9)])
def test_bridge_pair_examples(n, c, kernel_order):
    rep = bridge_pair_check(mult(n, c))
    assert rep.passed
    assert rep.kernel.order() == kernel_order
    assert rep.core.order() * kernel_order == n


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_bridge_pair_and_colocalization_on_random_actions(seed):
    rng = random.Random(seed)
    G = random_group(rng, 64)
    a = LeftAction(N, G, {(1,): random_hom(rng, G, G)})
    rep = bridge_pair_check(a)
    assert rep.passed
    assert set(rep.core.elements()) == perp_by_enumeration(kernel_of_action(a).subgroup)
    assert colocalization_conjugacy_check(a)


def one_sided(kind=EndoKind.PUSH):
    X = ShiftSpace(FinAbGroup((2,)), 1, IndexKind.NONNEG)
    return LeftAction(N, X, {(1,): TranslationEndo(X, (1,), kind)})


def test_windowed_quotient_examples():
    a = one_sided()
    X = a.carrier
    P = ProfiniteDual(a)
    assert windowed_quotient(P, []).K.is_trivial()
    assert windowed_quotient(P, [X.delta(0), X.delta(1)]).K.order() == 4
    seed = [X.delta(0)]
    W = trajectory_window(a, [(0,), (1,), (2,)], seed)
    wq = windowed_quotient(P, W, [(0,), (1,), (2,)], seed)
    assert wq.K.order() == 8
    assert wq.intersection().is_trivial()
    assert len(wq.coset_cover((1,)).members) == 2
    with pytest.raises(NotASubgroupError):
        windowed_quotient(P, [X.delta(0)], [(1,)], seed)


def test_profinite_index_is_the_trajectory_subgroup_order():
    a = one_sided()
    X = a.carrier
    for n in range(1, 6):
        F = [(k,) for k in range(n)]
        assert profinite_index(a, F, [X.delta(0)]) == 2**n
        assert profinite_index(a, F, [X.delta(0), X.delta(1)]) == 2 ** (n + 1)
    assert profinite_index(one_sided(EndoKind.PULL), [(0,), (1,)], [X.delta(0)]) == 2


def test_window_group_coordinates_and_cosets():
    X = ShiftSpace(FinAbGroup((4,)), 1, IndexKind.FULL)
    wg = WindowGroup(X, [X.delta(0, 2), X.delta(1, 1)])
    assert wg.order() == 8
    K = FinAbGroup((2, 4))
    V = Subgroup(K, [K.element((0, 2))])
    cover = coset_partition(K, V)
    assert len(cover.members) == 4 and all(bin(m).count("1") == 2 for m in cover.members)
