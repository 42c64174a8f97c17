"""Monoid actions on finite abelian groups and shift spaces.

An action is given by one endomorphism per monoid generator.  Over a
commutative monoid this determines the action once the generator
endomorphisms commute, which is checked at construction.  The same
representation serves for right actions; only the ``side`` flag differs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Any, Callable, Mapping, Union

from .errors import (
    AmbientMismatchError,
    HorizonExhaustedError,
    NotInvariantError,
    NotInvertibleError,
    UnsupportedActionError,
)
from .fingroup import (
    Element,
    FinAbGroup,
    Hom,
    Subgroup,
    kernel,
    quotient,
    trivial_subgroup,
    whole_subgroup,
)
from .monoid import AmenableMonoid, Fraction, FractionGroup, MonoidKind, fraction_group
from .shiftspace import (
    Configuration,
    EndoKind,
    FiberwiseSubgroup,
    IndexKind,
    ShiftSpace,
    TranslationEndo,
    map_values,
)

Carrier = Union[FinAbGroup, ShiftSpace]
Endo = Union[Hom, TranslationEndo]

DEFAULT_HORIZON = 4096


def _numerical_decomposition(M: AmenableMonoid, s: int) -> list[int]:
    """Coefficients ``c`` with ``s = sum c_i g_i``, preferring large generators."""
    gens = M.generators_
    best: dict[int, list[int] | None] = {0: [0] * len(gens)}
    for n in range(1, s + 1):
        best[n] = None
        for i in range(len(gens) - 1, -1, -1):
            g = gens[i]
            if g <= n and best[n - g] is not None:
                c = list(best[n - g])
                c[i] += 1
                best[n] = c
                break
    if best[s] is None:
        raise ValueError(f"{s} is not in {M}")
    return best[s]


def _bezout(M: AmenableMonoid) -> list[int]:
    """Integers ``c`` with ``sum c_i g_i = gcd(g)``."""
    coeffs = [1] + [0] * (len(M.generators_) - 1)
    g = M.generators_[0]
    for i, h in enumerate(M.generators_[1:], start=1):
        # extended Euclid on (g, h)
        r0, r1, a0, a1, b0, b1 = g, h, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            a0, a1 = a1, a0 - q * a1
            b0, b1 = b1, b0 - q * b1
        coeffs = [a0 * c for c in coeffs]
        coeffs[i] = b0
        g = r0
    return coeffs


class LeftAction:
    side = "left"

    def __init__(self, monoid: AmenableMonoid, carrier: Carrier, generator_map: Mapping[Any, Endo]):
        self.monoid = monoid
        self.carrier = carrier
        gens = monoid.action_generators()

        def norm(k):
            if monoid.kind is MonoidKind.NUMERICAL:
                return int(k[0]) if isinstance(k, tuple) else int(k)
            return (int(k),) if isinstance(k, int) else tuple(int(c) for c in k)

        gm = {norm(k): v for k, v in generator_map.items()}
        if set(gm) != set(gens):
            raise ValueError(f"endomorphisms must be given exactly for the generators {gens}")
        gm = {g: gm[g] for g in gens}
        self.generator_map: dict[Any, Endo] = gm
        self._validate()

    # -- construction checks -------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return isinstance(self.carrier, FinAbGroup)

    def _validate(self):
        endos = list(self.generator_map.values())
        if self.is_finite:
            for f in endos:
                if not isinstance(f, Hom) or f.source != self.carrier or f.target != self.carrier:
                    raise AmbientMismatchError("generator map must consist of endomorphisms of the carrier")
            for i, f in enumerate(endos):
                for h in endos[i + 1 :]:
                    if f.compose(h) != h.compose(f):
                        raise ValueError("generator endomorphisms do not commute")
            if self.monoid.is_group:
                for f in endos:
                    if not f.is_bijective():
                        raise NotInvertibleError("a group action needs invertible generator endomorphisms")
        else:
            kinds = set()
            for f in endos:
                if not isinstance(f, TranslationEndo) or f.space != self.carrier:
                    raise AmbientMismatchError("generator map must consist of translations of the carrier")
                kinds.add(f.kind)
            if len(kinds) > 1:
                raise UnsupportedActionError("mixing PUSH and PULL generators is not supported")
            if self.monoid.is_group and self.carrier.index_kind is not IndexKind.FULL:
                if any(not f.is_identity() for f in endos):
                    raise NotInvertibleError("a group action on a one-sided shift space must be trivial")
        if self.monoid.kind is MonoidKind.NUMERICAL:
            gens = self.monoid.generators_
            for i in range(len(gens)):
                for j in range(i + 1, len(gens)):
                    d = gcd(gens[i], gens[j])
                    lhs = self._power(self.generator_map[gens[i]], gens[j] // d)
                    rhs = self._power(self.generator_map[gens[j]], gens[i] // d)
                    if not self._endo_equal(lhs, rhs):
                        raise ValueError(f"generators {gens[i]} and {gens[j]} violate a monoid relation")

    def _identity(self) -> Endo:
        if self.is_finite:
            return Hom.identity(self.carrier)
        kind = next(iter(self.generator_map.values())).kind if self.generator_map else EndoKind.PUSH
        return TranslationEndo(self.carrier, (0,) * self.carrier.dim, kind)

    def _power(self, f: Endo, n: int) -> Endo:
        if isinstance(f, Hom):
            return f.power(n)
        if n < 0:
            if self.carrier.index_kind is not IndexKind.FULL:
                raise NotInvertibleError("negative power of a one-sided translation")
            return TranslationEndo(f.space, tuple(n * c for c in f.vector), f.kind)
        return f.scaled(n)

    def _compose(self, f: Endo, h: Endo) -> Endo:
        if isinstance(f, Hom):
            return f.compose(h)
        return TranslationEndo(f.space, tuple(a + b for a, b in zip(f.vector, h.vector)), f.kind)

    @staticmethod
    def _endo_equal(f: Endo, h: Endo) -> bool:
        return f == h

    # -- evaluation -----------------------------------------------------------

    def endo(self, s) -> Endo:
        """The endomorphism by which ``s`` acts."""
        M = self.monoid
        if M.kind is MonoidKind.NUMERICAL:
            s = M.element(s)
            coeffs = _numerical_decomposition(M, s)
            pairs = zip(M.generators_, coeffs)
        else:
            s = (int(s),) if isinstance(s, int) else tuple(int(c) for c in s)
            if not M.contains(s):
                raise ValueError(f"{s} is not in {M}")
            pairs = zip(M.action_generators(), s)
        out = self._identity()
        for g, c in pairs:
            if c:
                out = self._compose(out, self._power(self.generator_map[g], c))
        return out

    def act(self, s, x):
        return act(self, s, x)

    def generator_endos(self) -> list[Endo]:
        return list(self.generator_map.values())

    def __repr__(self):
        return f"{type(self).__name__}({self.monoid} on {self.carrier})"


class RightAction(LeftAction):
    """Right action; over commutative monoids it is stored exactly like a left action."""

    side = "right"


def act(a: LeftAction, s, x):
    """``lambda_s(x)``."""
    f = a.endo(s)
    if a.is_finite:
        if not isinstance(x, Element) or x.group != a.carrier:
            raise AmbientMismatchError("point is not in the carrier")
        return f(x)
    if not isinstance(x, Configuration) or x.space != a.carrier:
        raise AmbientMismatchError("point is not in the carrier")
    return f(x)


def trivial_action(M: AmenableMonoid, carrier: Carrier, cls=LeftAction) -> LeftAction:
    if isinstance(carrier, FinAbGroup):
        return cls(M, carrier, {g: Hom.identity(carrier) for g in M.action_generators()})
    return cls(M, carrier, {g: TranslationEndo(carrier, (0,) * carrier.dim) for g in M.action_generators()})


# -- kernel of an action ------------------------------------------------------


@dataclass(frozen=True)
class KernelCertificate:
    """``Ker(lambda)`` with the chain that certified it."""

    subgroup: Subgroup | None
    description: str
    witness: Any
    chain_orders: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        if self.subgroup is not None:
            return self.subgroup.is_trivial()
        return self.description == "trivial"

    @property
    def is_whole(self) -> bool:
        if self.subgroup is not None:
            return self.subgroup.is_whole()
        return self.description == "all configurations"


def kernel_of_action(a: LeftAction, horizon: int = DEFAULT_HORIZON) -> KernelCertificate:
    """Union of ``Ker(lambda_{s_n})`` along ``s_n = n*(1,...,1)``, with one confirming step."""
    M = a.monoid
    if not a.is_finite:
        X = a.carrier
        endos = a.generator_endos()
        if X.index_kind is IndexKind.NONNEG and any(f.kind is EndoKind.PULL and not f.is_identity() for f in endos):
            # a finitely supported x dies under a large enough backward shift
            return KernelCertificate(None, "all configurations", "pull past the support", ())
        if all(f.is_injective() for f in endos):
            return KernelCertificate(None, "trivial", M.identity(), ())
        raise HorizonExhaustedError("unsupported shift action for kernel computation")
    X = a.carrier
    if M.is_group:
        return KernelCertificate(trivial_subgroup(X), "trivial", M.identity(), (1,))
    step = a.endo(M.diagonal(1))
    orders = []
    K = trivial_subgroup(X)
    f = Hom.identity(X)
    for n in range(1, horizon + 1):
        f = step.compose(f)
        Kn = kernel(f)
        orders.append(Kn.order())
        if Kn == K:
            return KernelCertificate(K, _describe(K), M.diagonal(n - 1), tuple(orders))
        K = Kn
    raise HorizonExhaustedError(f"kernel chain did not stabilize within {horizon} steps")


def _describe(H: Subgroup) -> str:
    if H.is_trivial():
        return "trivial"
    if H.is_whole():
        return "whole group"
    return f"subgroup of order {H.order()}"


# -- quotient by the kernel -------------------------------------------------


class ZeroMap:
    """The map from a carrier to the trivial group."""

    def __init__(self, source: Carrier):
        self.source = source
        self.target = FinAbGroup(())

    def __call__(self, x):
        return self.target.zero()


class IdentityMap:
    def __init__(self, carrier: Carrier):
        self.source = self.target = carrier

    def __call__(self, x):
        return x


def induced_injective_action(a: LeftAction):
    """``(lambda_bar, projection)`` for ``X -> X/Ker(lambda)``."""
    cert = kernel_of_action(a)
    M = a.monoid
    if not a.is_finite:
        if cert.is_trivial:
            return a, IdentityMap(a.carrier)
        Z = FinAbGroup(())
        return trivial_action(M, Z, type(a)), ZeroMap(a.carrier)
    X = a.carrier
    Q, proj = quotient(X, cert.subgroup)
    gm = {g: f.induced_on_quotients(cert.subgroup, cert.subgroup) for g, f in a.generator_map.items()}
    bar = type(a)(M, Q, gm)
    for g, fb in gm.items():
        if not fb.is_injective():
            raise AssertionError("induced generator endomorphism is not injective")
        for e in X.basis():
            if fb(proj(e)) != proj(a.generator_map[g](e)):
                raise AssertionError("projection is not equivariant")
    return bar, proj


# -- Ore localization ---------------------------------------------------------


@dataclass
class LocalizedAction:
    """Action of the fraction group on ``X*`` with the structural map ``eps1: X_bar -> X*``."""

    group: FractionGroup
    carrier: Carrier
    action: LeftAction
    epsilon1: Callable
    injective_action: LeftAction
    projection: Callable

    def lattice_element(self, g: Fraction | Any):
        v = g.value if isinstance(g, Fraction) else g
        if self.group.monoid.kind is MonoidKind.NUMERICAL:
            if v % self.group.scale:
                raise ValueError(f"{v} is not in the fraction group")
            return (v // self.group.scale,)
        return tuple(v)

    def act(self, g, x):
        return self.action.act(self.lattice_element(g), x)


class _Inclusion:
    def __init__(self, source: ShiftSpace, target: ShiftSpace):
        self.source, self.target = source, target

    def __call__(self, x: Configuration) -> Configuration:
        if x.space != self.source:
            raise AmbientMismatchError("configuration of another space")
        return Configuration._raw(self.target, x.support)


def ore_localize(a: LeftAction) -> LocalizedAction:
    M = a.monoid
    G = fraction_group(M)
    Z = AmenableMonoid.lattice(G.rank)
    bar, proj = induced_injective_action(a)
    if bar.is_finite:
        X = bar.carrier
        if M.kind is MonoidKind.NUMERICAL:
            coeffs = _bezout(M)
            f = Hom.identity(X)
            for gen, c in zip(M.generators_, coeffs):
                h = bar.generator_map[gen]
                f = f.compose(h.power(c) if c >= 0 else h.inverse().power(-c))
            gm = {(1,): f}
        else:
            gm = {g: bar.generator_map[g] for g in M.action_generators()}
            for f in gm.values():
                if not f.is_bijective():
                    raise AssertionError("injective endomorphism of a finite group is not bijective")
        star = LeftAction(Z, X, gm)
        return LocalizedAction(G, X, star, IdentityMap(X), bar, proj)
    X = bar.carrier
    endos = bar.generator_endos()
    if M.kind is MonoidKind.NUMERICAL:
        raise UnsupportedActionError("localization of numerical-monoid shift actions is not supported")
    if X.index_kind is IndexKind.FULL:
        star = LeftAction(Z, X, dict(bar.generator_map))
        return LocalizedAction(G, X, star, IdentityMap(X), bar, proj)
    if any(f.kind is not EndoKind.PUSH for f in endos):
        raise UnsupportedActionError("only PUSH shifts on one-sided spaces are localized")
    Xs = X.with_kind(IndexKind.FULL)
    gm = {g: TranslationEndo(Xs, f.vector, f.kind) for g, f in bar.generator_map.items()}
    star = LeftAction(Z, Xs, gm)
    return LocalizedAction(G, Xs, star, _Inclusion(X, Xs), bar, proj)


def check_localization(loc: LocalizedAction, samples) -> bool:
    """``eps1 o lambda_bar_s == lambda*_s o eps1`` on generators and samples, and ``g`` then ``-g`` is the identity."""
    bar = loc.injective_action
    M = bar.monoid
    for g in M.action_generators():
        gf = Fraction(M, g)
        for x in samples:
            if loc.epsilon1(bar.act(g, x)) != loc.act(gf, loc.epsilon1(x)):
                return False
            y = loc.epsilon1(x)
            if loc.act(-gf, loc.act(gf, y)) != y:
                return False
    return True


# -- surjective core ----------------------------------------------------------


@dataclass(frozen=True)
class SurjectiveCore:
    subgroup: Subgroup
    action: RightAction
    inclusion: Hom
    witness: Any
    chain_orders: tuple[int, ...]


def surjective_core(r: LeftAction, horizon: int = DEFAULT_HORIZON) -> SurjectiveCore:
    """``E(rho)``: the intersection of the images ``rho_t(K)``, with the restricted action."""
    if not r.is_finite:
        raise UnsupportedActionError("surjective core is computed on finite carriers only")
    M = r.monoid
    K = r.carrier
    step = r.endo(M.diagonal(1)) if not M.is_group else Hom.identity(K)
    E = whole_subgroup(K)
    f = Hom.identity(K)
    orders = []
    witness = None
    for n in range(1, horizon + 1):
        f = step.compose(f)
        En = f.image()
        orders.append(En.order())
        if En == E:
            witness = M.diagonal(n - 1)
            break
        E = En
    else:
        raise HorizonExhaustedError(f"image chain did not stabilize within {horizon} steps")
    Y, incl = E.as_group()
    gm = {g: h.restrict(E, E) for g, h in r.generator_map.items()}
    bar = RightAction(M, Y, gm)
    for h in gm.values():
        if not h.is_surjective():
            raise AssertionError("restricted action is not surjective")
    return SurjectiveCore(E, bar, incl, witness, tuple(orders))


# -- invariant subgroups ------------------------------------------------------


@dataclass
class InducedPair:
    sub_action: LeftAction
    quotient_action: LeftAction
    inclusion: Callable
    projection: Callable


def _check_invariant_finite(a: LeftAction, Y: Subgroup):
    for g, f in a.generator_map.items():
        for row in Y.canonical_basis:
            y = Element(Y.ambient, row)
            fy = f(y)
            if not Y.contains(fy):
                raise NotInvariantError(g, y, fy)


def invariant_restriction_and_quotient(a: LeftAction, Y: Subgroup | FiberwiseSubgroup) -> InducedPair:
    M = a.monoid
    cls = type(a)
    if a.is_finite:
        if not isinstance(Y, Subgroup) or Y.ambient != a.carrier:
            raise AmbientMismatchError("invariant subgroup must live in the carrier")
        _check_invariant_finite(a, Y)
        X = a.carrier
        Yg, incl = Y.as_group()
        Q, proj = quotient(X, Y)
        sub = cls(M, Yg, {g: f.restrict(Y, Y) for g, f in a.generator_map.items()})
        quo = cls(M, Q, {g: f.induced_on_quotients(Y, Y) for g, f in a.generator_map.items()})
        for g, f in a.generator_map.items():
            for e in Yg.basis():
                assert incl(sub.generator_map[g](e)) == f(incl(e))
            for e in X.basis():
                assert proj(f(e)) == quo.generator_map[g](proj(e))
        return InducedPair(sub, quo, incl, proj)
    if not isinstance(Y, FiberwiseSubgroup) or Y.space != a.carrier:
        raise AmbientMismatchError("shift carriers take fiberwise invariant subgroups")
    X = a.carrier
    C, cincl = Y.fiber.as_group()
    Qb, qproj = quotient(X.base, Y.fiber)

    def shift_on(base: FinAbGroup):
        if base.is_trivial():
            return trivial_action(M, base, cls), None
        sp = ShiftSpace(base, X.dim, X.index_kind)
        gm = {g: TranslationEndo(sp, f.vector, f.kind) for g, f in a.generator_map.items()}
        return cls(M, sp, gm), sp

    sub, sub_space = shift_on(C)
    quo, quo_space = shift_on(Qb)

    def inclusion(x):
        if sub_space is None:
            return X.zero()
        return map_values(x, cincl, X)

    def projection(x):
        if quo_space is None:
            return FinAbGroup(()).zero()
        return map_values(x, qproj, quo_space)

    return InducedPair(sub, quo, inclusion, projection)


def subgroup_is_invariant(a: LeftAction, Y: Subgroup) -> bool:
    try:
        _check_invariant_finite(a, Y)
    except NotInvariantError:
        return False
    return True


def invariant_closure(a: LeftAction, gens) -> Subgroup:
    """Smallest invariant subgroup containing ``gens`` (finite carriers)."""
    X = a.carrier
    H = Subgroup(X, gens)
    while True:
        bigger = Subgroup(X, list(H.generators) + [f(h) for f in a.generator_endos() for h in H.generators])
        if bigger == H:
            return H
        H = Subgroup(X, [Element(X, r) for r in bigger.canonical_basis])
