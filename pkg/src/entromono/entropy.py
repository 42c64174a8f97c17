"""Entropy of normed-monoid actions, with the concrete instances used here.

A normed monoid is a commutative monoid ``M`` with a norm ``v``.  Every
instance in this module has ``v(x) = log(norm_argument(x))`` for an exact
positive integer argument (a set size, a subgroup order, a minimal subcover
size), so per-level values ``v(T_F(alpha, m)) / |F|`` can be compared
exactly through integer identities such as ``arg == p ** |F|``.

Instances:

* :class:`SubsetMonoid`: finite subsets containing 0 under sumset, ``v = log|E|``.
* :class:`SubgroupMonoid`: finite subgroups under sum, ``v = log|H|``.
* :class:`CoverMonoid`: finite covers of a finite group under join, ``v = log N(U)``.
* :class:`ProductMonoid` and :class:`TrivialMonoid`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .action import LeftAction, kernel_of_action, surjective_core
from .covers import FiniteCover, join_all, mask_of, min_subcover
from .duality import profinite_index
from .errors import AmbientMismatchError, CoverError, NotASubgroupError, NotSurjectiveError
from .fingroup import Element, FinAbGroup, Hom, Subgroup
from .monoid import AmenableMonoid, FolnerSequence
from .shiftspace import (
    DEFAULT_SUMSET_CAP,
    Configuration,
    EncodedSet,
    ShiftSpace,
    Window,
    subgroup_order_in_window,
)

# -- finite-group subsets as code arrays -------------------------------------


def element_codes(G: FinAbGroup, xs: Iterable[Element]) -> np.ndarray:
    return np.unique(np.array([G.index_of(x) for x in xs], dtype=np.int64))


def _hom_codes(f: Hom, codes: np.ndarray) -> np.ndarray:
    G, H = f.source, f.target
    if H.rank == 0:
        return np.zeros_like(codes)
    digits = []
    rem = codes.copy()
    for d in reversed(G.invariant_factors):
        digits.append(rem % d)
        rem //= d
    digits.reverse()
    out = np.zeros_like(codes)
    for i, e in enumerate(H.invariant_factors):
        acc = np.zeros_like(codes)
        for j in range(G.rank):
            if f.matrix[i][j]:
                acc += f.matrix[i][j] * digits[j]
        out = out * e + acc % e
    return out


def hom_on_codes(f: Hom, codes: np.ndarray) -> np.ndarray:
    """Sorted image codes of ``f`` applied to every code."""
    return np.unique(_hom_codes(f, np.asarray(codes, dtype=np.int64)))


def element_map(f: Hom) -> list[int]:
    """``f`` on element indices."""
    return _hom_codes(f, np.arange(f.source.order(), dtype=np.int64)).tolist()


@dataclass(frozen=True)
class FiniteSubset:
    """A finite subset of a :class:`FinAbGroup` as sorted element codes."""

    group: FinAbGroup
    codes: np.ndarray

    @classmethod
    def of(cls, G: FinAbGroup, xs: Iterable[Element]) -> "FiniteSubset":
        return cls(G, element_codes(G, xs))

    def __len__(self):
        return int(self.codes.size)

    def elements(self) -> list[Element]:
        return [self.group.element_at(int(c)) for c in self.codes]


# -- normed monoids -------------------------------------------------------------


class NormedMonoid:
    name = "normed monoid"
    monotone = True
    subadditive = True

    def identity(self):
        raise NotImplementedError

    def op(self, x, y):
        raise NotImplementedError

    def norm_argument(self, x) -> int:
        raise NotImplementedError

    def norm(self, x) -> float:
        return math.log(self.norm_argument(x))


class SubsetMonoid(NormedMonoid):
    """Finite subsets containing 0 under sumset; ``v(E) = log|E|``."""

    name = "subsets under sumset"

    def __init__(self, carrier, cap: int = DEFAULT_SUMSET_CAP):
        self.carrier = carrier
        self.cap = cap

    def element(self, xs: Iterable) -> Any:
        xs = list(xs)
        if isinstance(self.carrier, FinAbGroup):
            s = FiniteSubset.of(self.carrier, xs)
            if 0 not in set(s.codes.tolist()):
                raise ValueError("trajectory seeds must contain 0")
            return s
        if not any(x.is_zero() for x in xs):
            raise ValueError("trajectory seeds must contain 0")
        return EncodedSet.from_configurations(xs)

    def identity(self):
        if isinstance(self.carrier, FinAbGroup):
            return FiniteSubset(self.carrier, np.zeros(1, dtype=np.int64))
        return EncodedSet(Window(self.carrier, ()), np.zeros(1, dtype=np.int64))

    def op(self, x, y):
        if isinstance(self.carrier, FinAbGroup):
            G = self.carrier
            if G.rank == 0:
                return x
            return FiniteSubset(G, _kernels.sumset_codes(x.codes, y.codes, list(G.invariant_factors), self.cap))
        return x.sumset(y, self.cap)

    def norm_argument(self, x) -> int:
        return len(x)


class SubgroupMonoid(NormedMonoid):
    """Finite subgroups under sum; ``v(H) = log|H|``.

    On shift carriers an element is a tuple of generating configurations.
    """

    name = "finite subgroups under sum"

    def __init__(self, carrier):
        self.carrier = carrier

    def element(self, gens: Iterable) -> Any:
        gens = tuple(gens)
        if isinstance(self.carrier, FinAbGroup):
            return Subgroup(self.carrier, gens)
        return tuple(g for g in gens if not g.is_zero())

    def identity(self):
        if isinstance(self.carrier, FinAbGroup):
            return Subgroup(self.carrier, ())
        return ()

    def op(self, x, y):
        if isinstance(self.carrier, FinAbGroup):
            return Subgroup(self.carrier, x.generators + y.generators)
        return x + y

    def norm_argument(self, x) -> int:
        if isinstance(self.carrier, FinAbGroup):
            return x.order()
        if not x:
            return 1
        window = Window(self.carrier, (i for g in x for i in g.indices()))
        return subgroup_order_in_window(window, x)


class CoverMonoid(NormedMonoid):
    """Finite covers of a finite group under join; ``v(U) = log N(U)``."""

    name = "covers under join"

    def __init__(self, group: FinAbGroup):
        self.group = group

    def identity(self):
        return FiniteCover.trivial(self.group.order())

    def op(self, x, y):
        return join_all([x, y])

    def norm_argument(self, x) -> int:
        return min_subcover(x)


class TrivialMonoid(NormedMonoid):
    name = "trivial"

    def identity(self):
        return None

    def op(self, x, y):
        return None

    def norm_argument(self, x) -> int:
        return 1


class ProductMonoid(NormedMonoid):
    """``M1 (+) M2`` with ``(v1 (+) v2)(x, y) = v1(x) + v2(y)``."""

    def __init__(self, m1: NormedMonoid, m2: NormedMonoid):
        self.m1, self.m2 = m1, m2
        self.name = f"({m1.name}) x ({m2.name})"
        self.monotone = m1.monotone and m2.monotone
        self.subadditive = m1.subadditive and m2.subadditive

    def identity(self):
        return (self.m1.identity(), self.m2.identity())

    def op(self, x, y):
        return (self.m1.op(x[0], y[0]), self.m2.op(x[1], y[1]))

    def norm_argument(self, x) -> int:
        return self.m1.norm_argument(x[0]) * self.m2.norm_argument(x[1])


# -- normed actions -----------------------------------------------------------


@dataclass
class NormedAction:
    """An action of ``monoid`` on a normed monoid by norm-nonincreasing endomorphisms."""

    monoid: AmenableMonoid
    target: NormedMonoid
    apply: Callable[[Any, Any], Any]
    source_action: Any = None

    def __call__(self, s, m):
        return self.apply(s, m)


def _image_subset(a: LeftAction, s, E):
    f = a.endo(s)
    if a.is_finite:
        return FiniteSubset(a.carrier, hom_on_codes(f, E.codes))
    return E.translate(f)


def subset_action(a: LeftAction, cap: int = DEFAULT_SUMSET_CAP) -> NormedAction:
    """``s . E = lambda_s(E)`` on finite subsets containing 0."""
    return NormedAction(a.monoid, SubsetMonoid(a.carrier, cap), lambda s, E: _image_subset(a, s, E), a)


def subgroup_action(a: LeftAction) -> NormedAction:
    def apply(s, H):
        f = a.endo(s)
        if a.is_finite:
            return Subgroup(a.carrier, [f(g) for g in H.generators])
        return tuple(y for y in (f(g) for g in H) if not y.is_zero())

    return NormedAction(a.monoid, SubgroupMonoid(a.carrier), apply, a)


def pullback_cover(U: FiniteCover, f: Hom) -> FiniteCover:
    """``f^{-1}(U)``."""
    return U.pullback(element_map(f), f.source.order())


def cover_action(r: LeftAction) -> NormedAction:
    """``s . U = rho_s^{-1}(U)`` on covers of a finite group."""
    if not r.is_finite:
        raise AmbientMismatchError("cover actions need a finite carrier")
    return NormedAction(r.monoid, CoverMonoid(r.carrier), lambda s, U: pullback_cover(U, r.endo(s)), r)


def trivial_normed_action(M: AmenableMonoid) -> NormedAction:
    return NormedAction(M, TrivialMonoid(), lambda s, m: None)


def product_action(a1: NormedAction, a2: NormedAction) -> NormedAction:
    if a1.monoid != a2.monoid:
        raise AmbientMismatchError("product of actions of different monoids")
    return NormedAction(
        a1.monoid,
        ProductMonoid(a1.target, a2.target),
        lambda s, m: (a1.apply(s, m[0]), a2.apply(s, m[1])),
    )


def trajectory(alpha: NormedAction, F: Iterable, m):
    """``T_F(alpha, m)``: the product of ``alpha_s(m)`` over ``s`` in ``F``."""
    F = list(dict.fromkeys(F))
    if not F:
        raise ValueError("F must be nonempty")
    M = alpha.target
    out = alpha.apply(F[0], m)
    for s in F[1:]:
        out = M.op(out, alpha.apply(s, m))
    return out


# -- estimates ----------------------------------------------------------------


@dataclass(frozen=True)
class LevelValue:
    n: int
    size: int  # |F_n|
    argument: int  # the norm is log(argument)

    @property
    def value(self) -> float:
        return math.log(self.argument) / self.size

    def equals_log(self, base: int | Fraction) -> bool:
        """Exactly ``value == log(base)``."""
        return Fraction(self.argument) == Fraction(base) ** self.size

    def same_value(self, other: "LevelValue") -> bool:
        return Fraction(self.argument) ** other.size == Fraction(other.argument) ** self.size


@dataclass
class TrajectoryEstimate:
    levels: list[LevelValue]
    limit: float
    gap: float
    exact: bool
    bound: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        return [lv.value for lv in self.levels]


def summarize(levels: list[LevelValue], bound: int | None = None) -> TrajectoryEstimate:
    """Last value, oscillation over the final third, and the exactness flag.

    ``bound`` is a certified upper bound on every norm argument; with it the
    limit is 0, because the values are at most ``log(bound)/|F_n|``.
    """
    if not levels:
        raise ValueError("no levels")
    tail = levels[len(levels) - max(2, -(-len(levels) // 3)) :] if len(levels) >= 2 else levels
    vals = [lv.value for lv in tail]
    gap = max(vals) - min(vals)
    exact = len(tail) >= 2 and all(tail[0].same_value(lv) for lv in tail[1:])
    notes = []
    limit = levels[-1].value
    if bound is not None:
        if any(lv.argument > bound for lv in levels):
            raise AssertionError("norm argument exceeds its certified bound")
        limit = 0.0
        notes.append(f"norm arguments bounded by {bound}; values <= log({bound})/|F_n|")
        exact = exact and levels[-1].argument == 1
    return TrajectoryEstimate(list(levels), limit, gap, exact, bound, notes)


def level_values(alpha: NormedAction, folner: FolnerSequence, m, horizon: int, start: int = 1) -> list[LevelValue]:
    """Per-level norm arguments along the Følner sequence, incremental when nested."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    M = alpha.target
    out = []
    prev_F: set | None = None
    T = None
    for n in range(start, horizon + 1):
        F = folner.set(n)
        if folner.nested and prev_F is not None and prev_F.issubset(F):
            new = [s for s in F if s not in prev_F]
            for s in new:
                T = M.op(T, alpha.apply(s, m))
        else:
            T = trajectory(alpha, F, m)
        prev_F = set(F)
        out.append(LevelValue(n, len(F), int(M.norm_argument(T))))
    return out


def entropy_at(alpha: NormedAction, folner: FolnerSequence, m, horizon: int, bound: int | None = None) -> TrajectoryEstimate:
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    return summarize(level_values(alpha, folner, m, horizon), bound)


@dataclass
class EntropyResult:
    value: float
    estimates: list[TrajectoryEstimate]
    exact: bool


def entropy(alpha: NormedAction, folner: FolnerSequence, family: Iterable, horizon: int) -> EntropyResult:
    """Supremum of the per-element estimates over the supplied family."""
    ests = [entropy_at(alpha, folner, m, horizon) for m in family]
    if not ests:
        raise ValueError("empty family")
    return EntropyResult(max(e.limit for e in ests), ests, all(e.exact for e in ests))


def certified_bound(a: LeftAction, E: Sequence[Configuration]) -> int | None:
    """A bound on ``|T_F(lambda, E)|`` valid for every ``F``, when one is known.

    Applies when every configuration is killed by a large enough element
    (kernel of the action is everything) and the action moves supports
    toward the origin: trajectories then stay inside the box spanned by the
    supports of ``E``.
    """
    if a.is_finite:
        return a.carrier.order()
    cert = kernel_of_action(a)
    if not cert.is_whole:
        return None
    X: ShiftSpace = a.carrier
    top = [0] * X.dim
    for x in E:
        for i in x.indices():
            top = [max(t, c) for t, c in zip(top, i)]
    sites = math.prod(t + 1 for t in top)
    return X.base.order() ** sites


# -- topological entropy: finite oracle and profinite index ---------------------


def cover_trajectory(r: LeftAction, F: Iterable, U: FiniteCover) -> FiniteCover:
    """``U_{rho, F}``: the join of ``rho_f^{-1}(U)`` over ``f`` in ``F``."""
    return join_all([pullback_cover(U, r.endo(f)) for f in dict.fromkeys(F)])


def h_top_finite(r: LeftAction, covers: Iterable[FiniteCover], folner: FolnerSequence, horizon: int) -> EntropyResult:
    """Per-level ``log N(U_{rho,F_n}) / |F_n|`` for each cover."""
    alpha = cover_action(r)
    return entropy(alpha, folner, list(covers), horizon)


def h_top_profinite(a: LeftAction, family: Iterable[Sequence[Configuration]], folner: FolnerSequence, horizon: int) -> EntropyResult:
    """Per-level ``log [K : C_{F_n}(rho, W^perp)] / |F_n|`` for finite subgroups ``W`` of ``X``.

    ``a`` is the discrete-side action whose dual is ``rho``; each family
    member lists generators of a subgroup ``W``.  Indices are computed
    through annihilators in the dual of a finite window.
    """
    ests = []
    for gens in family:
        gens = list(gens)
        if a.is_finite and any(not isinstance(g, Element) for g in gens):
            raise NotASubgroupError("family members must be generator lists")
        levels = []
        for n in range(1, horizon + 1):
            F = folner.set(n)
            if a.is_finite:
                idx = _finite_profinite_index(a, F, gens)
            else:
                idx = profinite_index(a, F, gens)
            levels.append(LevelValue(n, len(F), idx))
        ests.append(summarize(levels))
    return EntropyResult(max(e.limit for e in ests), ests, all(e.exact for e in ests))


def _finite_profinite_index(a: LeftAction, F, gens) -> int:
    from .duality import annihilator
    from .fingroup import subgroup_intersection, whole_subgroup

    X = a.carrier
    C = whole_subgroup(X)
    for s in F:
        f = a.endo(s)
        C = subgroup_intersection(C, annihilator(Subgroup(X, [f(g) for g in gens])))
    return C.index()


# -- conditional counts ---------------------------------------------------------


def _check_surjective(pi: Sequence[int], qsize: int):
    if set(pi) != set(range(qsize)):
        raise NotSurjectiveError("projection is not surjective")


def fiber_masks(pi: Sequence[int], qsize: int) -> list[int]:
    fibers = [0] * qsize
    for k, q in enumerate(pi):
        fibers[q] |= 1 << k
    return fibers


def conditional_count(U: FiniteCover, W: FiniteCover, pi: Sequence[int]) -> int:
    """``N(U|W)``: max over members ``W`` of ``N_{pi^{-1}(W)}(U)``."""
    _check_surjective(pi, W.size)
    if len(pi) != U.size:
        raise AmbientMismatchError("projection domain does not match the cover")
    fibers = fiber_masks(pi, W.size)
    best = 0
    for w in W.members:
        B = 0
        q = 0
        while w:
            if w & 1:
                B |= fibers[q]
            w >>= 1
            q += 1
        best = max(best, min_subcover(U, B))
    return best


def fiber_count(U: FiniteCover, pi: Sequence[int], qsize: int) -> int:
    """``N(U|pi)``: max over points ``q`` of ``N_{pi^{-1}(q)}(U)``."""
    _check_surjective(pi, qsize)
    return max(min_subcover(U, B) for B in fiber_masks(pi, qsize))


# -- even covers --------------------------------------------------------------


def even_cover(K: FinAbGroup, U: Iterable[Element]) -> FiniteCover:
    """``{x + U : x in K}``."""
    U = list(U)
    if K.zero() not in U:
        raise CoverError("the neighbourhood must contain 0")
    members = [mask_of(K.index_of(x + u) for u in U) for x in K.elements()]
    return FiniteCover(K.order(), members)


def quotient_even_cover(K: FinAbGroup, proj: Hom, U: Iterable[Element]) -> FiniteCover:
    """``{pi(x + U) : x in K}`` on ``K/H``."""
    U = list(U)
    if K.zero() not in U:
        raise CoverError("the neighbourhood must contain 0")
    Q = proj.target
    members = [mask_of(Q.index_of(proj(x + u)) for u in U) for x in K.elements()]
    return FiniteCover(Q.order(), members)


# -- domination ---------------------------------------------------------------


@dataclass
class DominationReport:
    checked: int
    violations: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.violations


def domination_check(a1: NormedAction, a2: NormedAction, witness_map: Callable, samples: Iterable, F_samples: Iterable) -> DominationReport:
    """``v1(T_F(a1, x)) <= v2(T_F(a2, witness(x)))`` on every sample."""
    F_samples = [list(F) for F in F_samples]
    violations = []
    checked = 0
    for x in samples:
        y = witness_map(x)
        for F in F_samples:
            v1 = a1.target.norm_argument(trajectory(a1, F, x))
            v2 = a2.target.norm_argument(trajectory(a2, F, y))
            checked += 1
            if v1 > v2:
                violations.append((x, tuple(F), v1, v2))
    return DominationReport(checked, violations)


# -- surjective-core scan -----------------------------------------------------


def restricted_count(U: FiniteCover, H_mask: int) -> int:
    return min_subcover(U, H_mask)


def subgroup_mask(G: FinAbGroup, H: Subgroup) -> int:
    return mask_of(G.index_of(h) for h in H.elements())


@dataclass
class CoreScan:
    s: Any
    count_core: int
    counts_along_chain: list[int]


def claim1_scan(r: LeftAction, V: FiniteCover) -> CoreScan:
    """Find ``s`` on the diagonal chain with ``N_{E(rho)}(V) = N_{rho_s(K)}(V)``."""
    K = r.carrier
    core = surjective_core(r)
    M = r.monoid
    nE = restricted_count(V, subgroup_mask(K, core.subgroup))
    counts = []
    chosen = None
    for n in range(0, len(core.chain_orders) + 1):
        s = M.diagonal(n)
        c = restricted_count(V, subgroup_mask(K, r.endo(s).image()))
        counts.append(c)
        if chosen is None and c == nE:
            chosen = s
    if chosen is None:
        raise AssertionError("no element of the image chain attains the core count")
    return CoreScan(chosen, nE, counts)


# -- windowed cover oracle ------------------------------------------------------


def windowed_cover_count(a: LeftAction, F: Sequence, seed: Sequence[Configuration]) -> tuple[int, int]:
    """``(N(U_{rho,F}), |K_W|)`` by exact set cover inside the dual of a finite window.

    ``U`` is the even cover of ``K_W`` by cosets of ``W_0^perp``; its pullback
    under ``rho_s`` is the coset partition of ``(lambda_s W_0)^perp``.
    """
    from .duality import ProfiniteDual, trajectory_window, windowed_quotient

    F = list(F)
    gens = trajectory_window(a, F, seed)
    if not gens:
        return 1, 1
    wq = windowed_quotient(ProfiniteDual(a), gens, F, seed)
    U = join_all([wq.coset_cover(s) for s in F])
    return min_subcover(U), wq.K.order()


def subgroup_elements(space: ShiftSpace, gens: Sequence[Configuration], cap: int = DEFAULT_SUMSET_CAP) -> list[Configuration]:
    """All elements of the subgroup generated by ``gens``, by iterated sumsets of cyclic pieces."""
    out = EncodedSet.from_configurations([space.zero()])
    for g in gens:
        multiples = [space.zero()]
        x = g
        while not x.is_zero():
            multiples.append(x)
            x = x + g
        out = out.sumset(EncodedSet.from_configurations(multiples), cap)
    return out.configurations()
