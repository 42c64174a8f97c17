"""Pontryagin duality for finite abelian groups, and windowed duals of shift spaces.

Every finite ``X = Z/d_1 + ... + Z/d_k`` is identified with its dual through
the pairing ``<x, y> = sum x_i y_i / d_i`` (mod 1), so ``X^`` is the same
:class:`FinAbGroup` and ``omega: X -> X^^`` is the identity in coordinates.
The compact dual of a shift space is never built; questions about it are
answered inside the dual of a finite window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _intmat
from .action import (
    LeftAction,
    RightAction,
    induced_injective_action,
    kernel_of_action,
    ore_localize,
    surjective_core,
)
from .covers import FiniteCover, mask_of
from .errors import AmbientMismatchError, NotASubgroupError, UnsupportedActionError
from .fingroup import (
    Element,
    FinAbGroup,
    Hom,
    Subgroup,
    generated_subgroup,
    kernel,
    subgroup_intersection,
    whole_subgroup,
)
from .shiftspace import Configuration, ShiftSpace, Window, apply_translation


def pairing(X: FinAbGroup, x: Element, y: Element) -> Fraction:
    """``<x, y>`` in ``Q/Z``, as a rational in ``[0, 1)``."""
    if x.group != X or y.group != X:
        raise AmbientMismatchError("pairing of elements outside the group")
    v = sum(Fraction(a * b, d) for a, b, d in zip(x.coords, y.coords, X.invariant_factors))
    return v - (v.numerator // v.denominator)


def dual_group(X: FinAbGroup) -> FinAbGroup:
    return X


def omega(X: FinAbGroup) -> Hom:
    """The natural map ``X -> X^^``."""
    return Hom.identity(X)


def annihilator(H: Subgroup) -> Subgroup:
    """``H^perp``: characters vanishing on ``H``."""
    X = H.ambient
    if X.is_trivial():
        return whole_subgroup(X)
    E = X.exponent()
    rows = [[h[i] * (E // d) for i, d in enumerate(X.invariant_factors)] for h in H.canonical_basis]
    # y -> (sum_i h_i (E/d_i) y_i mod E) for each basis row h of H
    T = FinAbGroup((E,) * len(rows))
    return kernel(Hom(X, T, rows))


def dual_hom(f: Hom) -> Hom:
    """``f^ : Y^ -> X^`` for ``f: X -> Y``."""
    X, Y = f.source, f.target
    B = [
        [f.matrix[i][j] * X.invariant_factors[j] // Y.invariant_factors[i] for i in range(Y.rank)]
        for j in range(X.rank)
    ]
    return Hom(Y, X, B)


def dual_action(a: LeftAction) -> LeftAction:
    """The dual action on ``X^``: left becomes right and right becomes left."""
    if not a.is_finite:
        raise UnsupportedActionError("only finite carriers are dualized explicitly")
    cls = LeftAction if isinstance(a, RightAction) else RightAction
    return cls(a.monoid, a.carrier, {g: dual_hom(f) for g, f in a.generator_map.items()})


# -- bridge pair --------------------------------------------------------------


@dataclass
class BridgePairReport:
    kernel: Subgroup
    kernel_perp: Subgroup
    core: Subgroup
    perp_equals_core: bool
    conjugacy_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.perp_equals_core and self.conjugacy_ok


def bridge_pair_check(a: LeftAction) -> BridgePairReport:
    """``Ker(lambda)^perp == E(lambda^)`` and ``(lambda_bar)^`` conjugate to ``rho_bar`` via ``pi^``."""
    if not a.is_finite:
        raise UnsupportedActionError("bridge pair check needs a finite carrier")
    X = a.carrier
    cert = kernel_of_action(a)
    ker = cert.subgroup
    rho = dual_action(a)
    core = surjective_core(rho)
    perp = annihilator(ker)
    same = perp == core.subgroup
    bar, proj = induced_injective_action(a)
    pi_hat = dual_hom(proj)  # (X/Ker)^ -> X^, image Ker^perp
    conj = pi_hat.image() == core.subgroup
    for g, fb in bar.generator_map.items():
        lhs = pi_hat.compose(dual_hom(fb))
        rhs = rho.generator_map[g].compose(pi_hat)
        if lhs != rhs:
            conj = False
    details = {
        "kernel_order": ker.order(),
        "core_order": core.subgroup.order(),
        "kernel_chain": list(cert.chain_orders),
        "core_chain": list(core.chain_orders),
        "group": str(X),
    }
    return BridgePairReport(ker, perp, core.subgroup, same, conj, details)


def ore_colocalize(r: LeftAction):
    """Finite colocalization: the fraction group acting on ``E(rho)`` through inverses.

    Returns ``(core, action)``, where ``action`` is a right action of the
    lattice ``Z^rank`` on the abstract group of the core.
    """
    core = surjective_core(r)
    M = r.monoid
    # rho_bar is a right action by automorphisms; its localization is obtained
    # exactly like the left one (commutative monoid)
    loc = ore_localize(LeftAction(M, core.action.carrier, core.action.generator_map))
    act = RightAction(loc.action.monoid, loc.action.carrier, loc.action.generator_map)
    return core, act


def colocalization_conjugacy_check(a: LeftAction) -> bool:
    """The dual of ``lambda*`` is conjugate to the colocalization of ``lambda^``."""
    loc = ore_localize(a)
    dual_loc = dual_action(loc.action)
    core, co = ore_colocalize(dual_action(a))
    proj = loc.projection
    pi_hat = dual_hom(proj)  # (X_bar)^ -> X^, image E(rho)
    # express pi_hat as an iso onto the abstract core group
    Y, incl = core.subgroup.as_group()
    if pi_hat.image() != core.subgroup:
        return False
    images = [core.subgroup.coordinates(pi_hat(e)) for e in pi_hat.source.basis()]
    if not images:
        return Y.is_trivial()
    iso = Hom.from_images(pi_hat.source, images)
    if not iso.is_bijective():
        return False
    for g, f in dual_loc.generator_map.items():
        if iso.compose(f) != co.generator_map[g].compose(iso):
            return False
    return True


# -- windowed duals of shift spaces ------------------------------------------


@dataclass(frozen=True)
class ProfiniteDual:
    """``K = X^`` for a torsion shift space ``X``, known only through finite windows."""

    action: LeftAction

    @property
    def space(self) -> ShiftSpace:
        return self.action.carrier


class WindowGroup:
    """A finite subgroup ``W <= X`` of a shift space as an abstract :class:`FinAbGroup`."""

    def __init__(self, space: ShiftSpace, generators: Iterable[Configuration], window: Window | None = None):
        gens = list(generators)
        for g in gens:
            if g.space != space:
                raise NotASubgroupError("generator lies in another space")
        if window is None:
            window = Window(space, (i for g in gens for i in g.indices()))
        self.space = space
        self.window = window
        self.ambient, self._P = window.as_group()
        self.subgroup = generated_subgroup(self.ambient, [self.to_ambient(g) for g in gens])
        self.group, self._incl = self.subgroup.as_group()

    def to_ambient(self, x: Configuration) -> Element:
        return Element(self.ambient, _intmat.matvec(self._P, self.window.digits(x)) if self._P else ())

    def coordinates(self, x: Configuration) -> Element:
        """Coordinates of ``x`` (which must lie in ``W``) in :attr:`group`."""
        return self.subgroup.coordinates(self.to_ambient(x))

    def subgroup_of(self, configs: Iterable[Configuration]) -> Subgroup:
        """The subgroup of :attr:`group` generated by the given configurations."""
        return generated_subgroup(self.group, [self.coordinates(c) for c in configs])

    def order(self) -> int:
        return self.subgroup.order()


@dataclass
class WindowedQuotient:
    """``K_W`` (the dual of ``W``) with the subgroups ``V_s = (lambda_s W_0)^perp``."""

    K: FinAbGroup
    window_group: WindowGroup
    V: dict

    def coset_cover(self, s) -> FiniteCover:
        """The partition of ``K_W`` into cosets of ``V_s`` (an even cover)."""
        return coset_partition(self.K, self.V[s])

    def intersection(self) -> Subgroup:
        out = whole_subgroup(self.K)
        for V in self.V.values():
            out = subgroup_intersection(out, V)
        return out


def coset_partition(K: FinAbGroup, V: Subgroup) -> FiniteCover:
    members = {}
    Vel = list(V.elements())
    for x in K.elements():
        key = min(K.index_of(x + v) for v in Vel)
        members.setdefault(key, []).append(K.index_of(x))
    return FiniteCover(K.order(), (mask_of(m) for m in members.values()))


def windowed_quotient(
    P: ProfiniteDual,
    W: Iterable[Configuration],
    F: Sequence = (),
    seed: Iterable[Configuration] = (),
) -> WindowedQuotient:
    """``K_W`` for the subgroup ``W`` generated by the given configurations.

    For each ``s`` in ``F`` the subgroup ``V_s`` annihilates ``lambda_s(W_0)``
    where ``W_0`` is generated by ``seed``; all these images must lie in ``W``.
    """
    wg = WindowGroup(P.space, W)
    K = wg.group
    V = {}
    seed = list(seed)
    for s in F:
        f = P.action.endo(s)
        imgs = [apply_translation(f, x) for x in seed]
        for y in imgs:
            if not all(i in wg.window for i in y.indices()) or not wg.subgroup.contains(wg.to_ambient(y)):
                raise NotASubgroupError(f"lambda_{s}(W_0) is not inside W")
        V[s] = annihilator(wg.subgroup_of(imgs))
    return WindowedQuotient(K, wg, V)


def trajectory_window(a: LeftAction, F: Sequence, seed: Iterable[Configuration]) -> list[Configuration]:
    """Generators of ``sum_{s in F} lambda_s(W_0)`` for the subgroup ``W_0 = <seed>``."""
    out = []
    for s in F:
        f = a.endo(s)
        out.extend(apply_translation(f, x) for x in seed)
    return [x for x in out if not x.is_zero()]


def profinite_index(a: LeftAction, F: Sequence, seed: Iterable[Configuration]) -> int:
    """``[K : C_F(rho, W_0^perp)]`` computed in the dual of a window.

    ``C_F = intersection over s in F of rho_s^{-1}(W_0^perp) = (lambda_s W_0)^perp``;
    inside the dual of the full window group ``B^sites`` this is an
    intersection of annihilators, and the index is ``|K_W| / |C_F|``.
    """
    seed = list(seed)
    gens = trajectory_window(a, F, seed)
    if not gens:
        return 1
    X = a.carrier
    window = Window(X, (i for g in gens for i in g.indices()))
    G, Pm = window.as_group()

    def coords(x: Configuration) -> Element:
        return Element(G, _intmat.matvec(Pm, window.digits(x)))

    C = whole_subgroup(G)
    for s in F:
        f = a.endo(s)
        imgs = [coords(apply_translation(f, x)) for x in seed]
        C = subgroup_intersection(C, annihilator(generated_subgroup(G, imgs)))
    return G.order() // C.order()
