"""Complex functions on a finite abelian group and its dual, and the Peters monoids.

Value tables are numpy arrays of shape ``invariant_factors`` (``(1,)`` for
the trivial group), indexed by coordinates, so flattening in C order gives
the element order of :meth:`FinAbGroup.elements`.

Measure conventions: counting measure on the discrete side ``X`` and the
normalized (mass one) measure on the compact side ``K = X^``.  With the
pairing of :mod:`entromono.duality` the transforms are

    phi^(gamma) = sum_x phi(x) exp(-2 pi i <x, gamma>)           (X -> K)
    phi^(x)     = |K|^-1 sum_gamma phi(gamma) exp(-2 pi i <gamma, x>)  (K -> X)

and transforming twice gives ``x -> phi(-x)``, which is ``phi`` itself for
every positive-definite ``phi``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .action import LeftAction
from .duality import dual_action
from .entropy import element_map
from .errors import AmbientMismatchError, InvalidPetersElementError, NotInvertibleError
from .fingroup import Element, FinAbGroup, Hom, Subgroup

TOL = 1e-9


class Side(enum.Enum):
    DISCRETE = "COUNTING"
    COMPACT = "NORMALIZED"


def _shape(G: FinAbGroup) -> tuple[int, ...]:
    return tuple(G.invariant_factors) or (1,)


@dataclass(frozen=True, eq=False)
class CxFunction:
    group: FinAbGroup
    values: np.ndarray
    side: Side = Side.DISCRETE

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.dtype != object:
            v = v.astype(complex)
        v = v.reshape(_shape(self.group))
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "side", Side(self.side))

    @classmethod
    def from_callable(cls, G: FinAbGroup, f: Callable[[Element], complex], side: Side = Side.DISCRETE) -> "CxFunction":
        return cls(G, np.array([f(x) for x in G.elements()], dtype=complex), side)

    @classmethod
    def indicator(cls, G: FinAbGroup, xs: Iterable[Element], side: Side = Side.DISCRETE) -> "CxFunction":
        v = np.zeros(G.order(), dtype=complex)
        for x in xs:
            v[G.index_of(x)] = 1
        return cls(G, v, side)

    @classmethod
    def constant(cls, G: FinAbGroup, c: complex = 1, side: Side = Side.DISCRETE) -> "CxFunction":
        return cls(G, np.full(G.order(), c, dtype=complex), side)

    @property
    def point_mass(self) -> float:
        return 1.0 if self.side is Side.DISCRETE else 1.0 / self.group.order()

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __call__(self, x: Element):
        return self.flat[self.group.index_of(x)]

    def at_zero(self):
        return self.flat[0]

    def l1(self) -> float:
        return float(np.sum(np.abs(self.values.astype(complex)))) * self.point_mass

    def _same(self, other: "CxFunction"):
        if other.group != self.group or other.side is not self.side:
            raise AmbientMismatchError("functions live on different groups or sides")

    def __add__(self, other: "CxFunction") -> "CxFunction":
        self._same(other)
        return CxFunction(self.group, self.values + other.values, self.side)

    def __sub__(self, other: "CxFunction") -> "CxFunction":
        self._same(other)
        return CxFunction(self.group, self.values - other.values, self.side)

    def __mul__(self, other):
        """Pointwise product (or scaling by a number)."""
        if isinstance(other, CxFunction):
            self._same(other)
            return CxFunction(self.group, self.values * other.values, self.side)
        return CxFunction(self.group, self.values * other, self.side)

    __rmul__ = __mul__

    def reflect(self) -> "CxFunction":
        """``x -> phi(-x)``."""
        v = self.values
        for ax in range(v.ndim):
            v = np.roll(np.flip(v, ax), 1, ax)
        return CxFunction(self.group, v, self.side)

    def star(self) -> "CxFunction":
        """``phi^*(x) = conj(phi(-x))``."""
        r = self.reflect()
        return CxFunction(self.group, np.conj(r.values) if r.values.dtype != object else r.values, self.side)

    def compose(self, f: Hom) -> "CxFunction":
        """``phi o f`` for an endomorphism ``f`` of the group."""
        if f.source != self.group or f.target != self.group:
            raise AmbientMismatchError("composition with a map between other groups")
        idx = np.array(element_map(f), dtype=np.int64)
        return CxFunction(self.group, self.flat[idx], self.side)

    def allclose(self, other: "CxFunction", tol: float = TOL) -> bool:
        self._same(other)
        scale = max(1.0, float(np.max(np.abs(self.values.astype(complex)))))
        return bool(np.max(np.abs((self.values - other.values).astype(complex))) <= tol * scale)


def convolve(phi: CxFunction, psi: CxFunction) -> CxFunction:
    """``(phi * psi)(x) = sum_y phi(y) psi(x - y)`` times the point mass.

    Computed directly (not through the transform) so that rational inputs
    stay exact when the tables have object dtype.
    """
    phi._same(psi)
    out = np.zeros_like(psi.values)
    G = phi.group
    for y in G.elements():
        c = phi.flat[G.index_of(y)]
        if c == 0:
            continue
        shifted = psi.values
        for ax, k in enumerate(y.coords):
            shifted = np.roll(shifted, k, ax)
        out = out + c * shifted
    if phi.side is Side.COMPACT:
        out = out / G.order() if out.dtype != object else out * Fraction(1, G.order())
    return CxFunction(G, out, phi.side)


def dft(phi: CxFunction) -> CxFunction:
    """Transform to the other side under the fixed pairing."""
    v = np.fft.fftn(phi.values.astype(complex), axes=tuple(range(phi.values.ndim)))
    if phi.side is Side.DISCRETE:
        return CxFunction(phi.group, v, Side.COMPACT)
    return CxFunction(phi.group, v / phi.group.order(), Side.DISCRETE)


# -- exact character sums ----------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant term first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, list(cyclotomic(d)))
    return tuple(num)


def _polydiv_exact(a: list, b: list) -> list:
    q, r = _polydivmod(a, b)
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return q


def _polydivmod(a: list, b: list):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [0] * max(1, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            c = Fraction(c, lead) if lead != 1 else c
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] -= c * bj
    return q, a[:db]


def root_of_unity_sum(coeffs: Sequence, n: int) -> tuple:
    """Canonical form of ``sum_k coeffs[k] zeta_n^k`` (reduced modulo the n-th cyclotomic polynomial).

    Two sums are equal iff their canonical forms are equal; a rational
    number ``q`` has canonical form ``(q, 0, ..., 0)``.
    """
    phi = list(cyclotomic(n))
    _, r = _polydivmod(list(coeffs) + [0] * max(0, len(phi) - len(coeffs)), phi)
    r = [Fraction(c) for c in r]
    return tuple(r)


def rational_form(q, n: int) -> tuple:
    deg = len(cyclotomic(n)) - 1
    return tuple([Fraction(q)] + [Fraction(0)] * (deg - 1)) if deg else ()


def exact_dft_value(G: FinAbGroup, values: dict[int, Fraction], gamma: Element) -> tuple:
    """Canonical form of ``sum_x phi(x) exp(-2 pi i <x, gamma>)`` for rational ``phi``."""
    E = G.exponent()
    coeffs = [Fraction(0)] * E
    for code, c in values.items():
        x = G.element_at(code)
        k = sum(a * b * (E // d) for a, b, d in zip(x.coords, gamma.coords, G.invariant_factors)) % E
        coeffs[(-k) % E] += Fraction(c)
    return root_of_unity_sum(coeffs, E)


def indicator_transform_exact_check(H: Subgroup) -> bool:
    """``(chi_H)^ == |H| chi_{H^perp}`` with exact cyclotomic arithmetic at every character."""
    from .duality import annihilator

    G = H.ambient
    perp = annihilator(H)
    E = G.exponent()
    values = {G.index_of(h): Fraction(1) for h in H.elements()}
    for gamma in G.elements():
        expect = H.order() if perp.contains(gamma) else 0
        if exact_dft_value(G, values, gamma) != rational_form(expect, E):
            return False
    return True


# -- positive definiteness ----------------------------------------------------


def _rational_table(phi: CxFunction) -> dict[int, Fraction] | None:
    if phi.values.dtype == object:
        return {i: Fraction(v) for i, v in enumerate(phi.flat) if v != 0}
    return None


def is_positive_definite(phi: CxFunction, tol: float = TOL) -> bool:
    """Bochner criterion: every transform value is real and nonnegative.

    Real parts in ``(-tol * phi(0), 0)`` are clamped to 0; for rational tables
    such borderline values are confirmed to be exactly zero.
    """
    hat = dft(phi).values.astype(complex).reshape(-1)
    band = tol * abs(complex(phi.at_zero()))
    table = _rational_table(phi)
    G = phi.group
    for i, z in enumerate(hat):
        if abs(z.imag) > band:
            return False
        if z.real < 0:
            if z.real <= -band:
                return False
            if table is not None and exact_dft_value(G, table, G.element_at(i)) != rational_form(0, G.exponent()):
                return False
    return True


def is_positive_definite_quadratic(phi: CxFunction, tol: float = TOL) -> bool:
    """Definition check: the matrix ``phi(x - y)`` is Hermitian positive semidefinite."""
    G = phi.group
    els = list(G.elements())
    M = np.array([[complex(phi(x - y)) for y in els] for x in els])
    if not np.allclose(M, M.conj().T, atol=tol * max(1.0, abs(complex(phi.at_zero())))):
        return False
    ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
    return bool(ev.min() >= -tol * max(1.0, abs(complex(phi.at_zero()))) * len(els))


def is_positive(phi: CxFunction, tol: float = TOL) -> bool:
    v = phi.values.astype(complex)
    scale = max(1.0, float(np.max(np.abs(v))))
    return bool(np.all(np.abs(v.imag) <= tol * scale) and np.all(v.real >= -tol * scale))


# -- Peters monoids ------------------------------------------------------------


@dataclass(frozen=True)
class PetersElement:
    """A nonzero, positive, positive-definite function."""

    phi: CxFunction

    def __post_init__(self):
        phi = self.phi
        if not np.any(np.abs(phi.values.astype(complex)) > 0):
            raise InvalidPetersElementError("the zero function is excluded")
        if not is_positive(phi):
            raise InvalidPetersElementError("function is not real and nonnegative")
        if not is_positive_definite(phi):
            raise InvalidPetersElementError("function is not positive-definite")

    @property
    def side(self) -> Side:
        return self.phi.side

    def norm(self) -> float:
        return peters_norm(self.phi)

    def op(self, other: "PetersElement") -> "PetersElement":
        """Monoid operation: convolution on the discrete side, product on the compact side."""
        if self.side is Side.DISCRETE:
            return PetersElement(convolve(self.phi, other.phi))
        return PetersElement(self.phi * other.phi)


def peters_norm(phi: CxFunction, side: Side | None = None) -> float:
    """``w_alg = log(|phi|_1 / phi(0))`` on X, ``w_top = log(phi(0) / |phi|_1)`` on K."""
    side = Side(side) if side is not None else phi.side
    if side is not phi.side:
        raise AmbientMismatchError("norm requested for the other side")
    z = complex(phi.at_zero()).real
    if z <= 0:
        raise InvalidPetersElementError("phi(0) must be positive")
    r = phi.l1() / z
    return float(np.log(r)) if side is Side.DISCRETE else float(-np.log(r))


def random_peters_element(G: FinAbGroup, rng: np.random.Generator, side: Side = Side.DISCRETE, density: float = 0.5) -> PetersElement:
    """``psi * psi^*`` for a random nonnegative ``psi``."""
    v = rng.random(G.order()) * (rng.random(G.order()) < density)
    v[rng.integers(G.order())] += 1.0
    psi = CxFunction(G, v, side)
    return PetersElement(convolve(psi, psi.star()))


@dataclass
class IsometryReport:
    w_source: float
    w_image: float
    double_transform_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return abs(self.w_source - self.w_image) <= self.tol and self.double_transform_error <= self.tol


def transform_isometry_check(phi: CxFunction | PetersElement, tol: float = TOL) -> IsometryReport:
    if isinstance(phi, PetersElement):
        phi = phi.phi
    else:
        PetersElement(phi)
    hat = dft(phi)
    back = dft(hat)
    scale = max(1.0, float(np.max(np.abs(phi.values.astype(complex)))))
    err = float(np.max(np.abs(back.values - phi.values.astype(complex)))) / scale
    return IsometryReport(peters_norm(phi), peters_norm(hat), err, tol)


# -- actions -------------------------------------------------------------------


@dataclass
class PetersActions:
    action: LeftAction
    dual: LeftAction

    def lam_alg(self, g, phi: CxFunction) -> CxFunction:
        """``(lambda_alg)_g phi = phi o lambda_g^{-1}`` on the discrete side."""
        f = self.action.endo(g)
        if not f.is_bijective():
            raise NotInvertibleError(f"lambda_{g} is not invertible")
        return phi.compose(f.inverse())

    def rho_top(self, g, phi: CxFunction) -> CxFunction:
        """``(rho_top)_g phi = phi o rho_g`` on the compact side."""
        return phi.compose(self.dual.endo(g))


def peters_actions(a: LeftAction) -> PetersActions:
    if not a.monoid.is_group:
        for f in a.generator_endos():
            if not f.is_bijective():
                raise NotInvertibleError("Peters actions need invertible generators")
    return PetersActions(a, dual_action(a))


def intertwining_check(P: PetersActions, samples: Iterable[CxFunction], elements: Iterable | None = None, tol: float = TOL) -> bool:
    """``dft((lambda_alg)_g phi) == (rho_top)_g dft(phi)`` for every sample and group element."""
    gs = list(elements) if elements is not None else P.action.monoid.action_generators()
    for phi in samples:
        for g in gs:
            if not dft(P.lam_alg(g, phi)).allclose(P.rho_top(g, dft(phi)), tol):
                return False
    return True
