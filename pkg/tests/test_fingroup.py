import itertools
import random
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromono import _intmat
from entromono.errors import AmbientMismatchError, NotASubgroupError, NotInvertibleError
from entromono.fingroup import (
    FinAbGroup,
    Hom,
    Subgroup,
    generated_subgroup,
    image_of_subgroup,
    kernel,
    preimage,
    presentation,
    quotient,
    quotient_lifts,
    random_automorphism,
    random_group,
    random_hom,
    random_subgroup,
    smith_normal_form,
    subgroup_intersection,
    subgroup_sum,
)

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def closure(G, gens):
    """Brute-force subgroup generated by ``gens``."""
    seen = {G.zero()}
    frontier = [G.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


@given(matrices)
def test_smith_normal_form_is_a_unimodular_diagonalisation(A):
    U, D, V = smith_normal_form(A)
    assert _intmat.matmul(_intmat.matmul(U, A), V) == D
    assert abs(_intmat.determinant(U)) == 1 and abs(_intmat.determinant(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_invariant_factor_product(A):
    d = abs(_intmat.determinant(A))
    fs = _intmat.invariant_factors(A)
    assert d == (prod(fs) if len(fs) == len(A) and all(fs) else 0)


@given(matrices)
def test_integer_kernel_is_killed(A):
    n = len(A[0])
    for v in _intmat.integer_kernel(A, n):
        assert _intmat.matvec(A, v) == [0] * len(A)


@given(matrices, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_integer_round_trip(A, x):
    x = x[: len(A[0])]
    b = _intmat.matvec(A, x)
    y = _intmat.solve_integer(A, b)
    assert y is not None and _intmat.matvec(A, y) == b


def test_from_orders_normalises_to_invariant_factors():
    assert FinAbGroup.from_orders([2, 3]).invariant_factors == (6,)
    assert FinAbGroup.from_orders([4, 6]).invariant_factors == (2, 12)
    assert FinAbGroup.from_orders([1]).is_trivial()
    with pytest.raises(ValueError):
        FinAbGroup((4, 6))
    with pytest.raises(ValueError):
        FinAbGroup((1,))


def test_presentation_of_z_mod_relations():
    G, _ = presentation([[2, 0], [0, 3]], 2)
    assert G.order() == 6 and G.rank == 1


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_element_arithmetic_and_indexing(seed):
    rng = random.Random(seed)
    G = random_group(rng, 60)
    xs = list(G.elements())
    assert len(xs) == G.order() == len(set(xs))
    assert [G.index_of(x) for x in xs] == list(range(G.order()))
    x, y = G.random_element(rng), G.random_element(rng)
    assert x + y == y + x and (x - y) + y == x and x + (-x) == G.zero()
    assert (x.order() * x).is_zero()
    assert all(not (k * x).is_zero() for k in range(1, x.order()))
    assert G.element_at(G.index_of(x)) == x


def test_element_accepts_an_integer_as_last_generator_multiple():
    G = FinAbGroup((2, 4))
    assert G.element(3) == G.element((0, 3))


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_subgroup_order_and_membership_match_enumeration(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    gens = [G.random_element(rng) for _ in range(rng.randint(0, 2))]
    H = Subgroup(G, gens)
    brute = closure(G, gens)
    assert H.order() == len(brute) and set(H.elements()) == brute
    assert all(H.contains(x) == (x in brute) for x in G.elements())
    assert H.index() * H.order() == G.order()


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_quotient_is_surjective_with_kernel_h(seed):
    rng = random.Random(seed)
    G = random_group(rng, 48)
    H = random_subgroup(rng, G, rng.randint(1, 2))
    Q, proj = quotient(G, H)
    assert Q.order() * H.order() == G.order()
    assert proj.is_surjective()
    assert kernel(proj) == H
    assert {x for x in G.elements() if proj(x).is_zero()} == set(H.elements())
    lifts = quotient_lifts(G, H)
    assert [proj(x) for x in lifts] == Q.basis()


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_kernel_image_and_preimage_against_enumeration(seed):
    rng = random.Random(seed)
    G, K = random_group(rng, 32), random_group(rng, 32)
    f = random_hom(rng, G, K)
    assert set(kernel(f).elements()) == {x for x in G.elements() if f(x).is_zero()}
    assert set(f.image().elements()) == {f(x) for x in G.elements()}
    assert f.kernel().order() * f.image().order() == G.order()
    L = random_subgroup(rng, K)
    assert set(preimage(f, L).elements()) == {x for x in G.elements() if L.contains(f(x))}
    H = random_subgroup(rng, G)
    assert set(image_of_subgroup(f, H).elements()) == {f(x) for x in H.elements()}


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_sum_and_intersection_against_enumeration(seed):
    rng = random.Random(seed)
    G = random_group(rng, 64)
    A, B = random_subgroup(rng, G), random_subgroup(rng, G)
    sa, sb = set(A.elements()), set(B.elements())
    assert set(subgroup_sum(A, B).elements()) == {a + b for a in sa for b in sb}
    assert set(subgroup_intersection(A, B).elements()) == sa & sb
    assert A.is_subgroup_of(subgroup_sum(A, B))


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_automorphism_inverse_and_powers(seed):
    rng = random.Random(seed)
    G = random_group(rng, 40)
    f = random_automorphism(rng, G)
    assert f.is_bijective()
    g = f.inverse()
    assert f.compose(g) == Hom.identity(G) == g.compose(f)
    x = G.random_element(rng)
    assert f.power(3)(x) == f(f(f(x)))
    assert f.power(-1) == g


def test_non_invertible_and_mismatched_inputs_fail_loudly():
    G = FinAbGroup((4,))
    with pytest.raises(NotInvertibleError):
        Hom.scalar(G, 2).inverse()
    K = FinAbGroup((3,))
    with pytest.raises(AmbientMismatchError):
        G.element((1,)) + K.element((1,))
    with pytest.raises((NotASubgroupError, AmbientMismatchError)):
        quotient(G, Subgroup(K, [K.element((1,))]))


def test_hom_well_definedness_is_checked():
    with pytest.raises(ValueError):
        Hom(FinAbGroup((2,)), FinAbGroup((3,)), [[1]])


def test_restrict_and_induced_maps_commute_with_projections():
    G = FinAbGroup((2, 4))
    f = Hom(G, G, [[1, 1], [2, 1]])
    H = generated_subgroup(G, [G.element((0, 2))])
    assert all(H.contains(f(h)) for h in H.elements())
    fbar = f.induced_on_quotients(H, H)
    Q, proj = quotient(G, H)
    for x in G.elements():
        assert fbar(proj(x)) == proj(f(x))
    res = f.restrict(H, H)
    assert res.source.order() == H.order()


def test_codes_are_mixed_radix_with_last_coordinate_fastest():
    G = FinAbGroup((2, 4))
    assert [x.coords for x in itertools.islice(G.elements(), 5)] == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)]
