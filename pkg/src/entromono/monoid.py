"""Commutative cancellative monoids: N^d, Z^d and numerical monoids.

Elements are tuples of ints for FREE_COMM/LATTICE and plain ints for
NUMERICAL.  Everything is written additively.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import cached_property, reduce
from math import gcd
from typing import Callable, Iterable, Sequence, Union

from .errors import AmbientMismatchError

MonoidElement = Union[tuple, int]


class MonoidKind(enum.Enum):
    FREE_COMM = "FREE_COMM"
    LATTICE = "LATTICE"
    NUMERICAL = "NUMERICAL"


@dataclass(frozen=True)
class AmenableMonoid:
    kind: MonoidKind
    dim: int = 1
    generators_: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", MonoidKind(self.kind))
        if self.kind is MonoidKind.NUMERICAL:
            gens = tuple(sorted(set(int(g) for g in self.generators_)))
            if not gens or gens[0] <= 0:
                raise ValueError("numerical monoids need positive generators")
            object.__setattr__(self, "generators_", gens)
            object.__setattr__(self, "dim", 1)
        elif self.dim < 1:
            raise ValueError("dim must be >= 1")

    @classmethod
    def free(cls, d: int = 1) -> "AmenableMonoid":
        return cls(MonoidKind.FREE_COMM, d)

    @classmethod
    def lattice(cls, d: int = 1) -> "AmenableMonoid":
        return cls(MonoidKind.LATTICE, d)

    @classmethod
    def numerical(cls, gens: Sequence[int]) -> "AmenableMonoid":
        return cls(MonoidKind.NUMERICAL, 1, tuple(gens))

    @property
    def is_group(self) -> bool:
        return self.kind is MonoidKind.LATTICE

    @cached_property
    def gcd(self) -> int:
        return reduce(gcd, self.generators_) if self.kind is MonoidKind.NUMERICAL else 1

    @cached_property
    def frobenius_bound(self) -> int:
        """Every multiple of gcd above this bound is in the monoid."""
        if self.kind is not MonoidKind.NUMERICAL:
            return 0
        g = self.gcd
        red = [x // g for x in self.generators_]
        if red[0] == 1:
            return 0
        # Schur: the Frobenius number is below (min-1)(max-1)
        return g * (red[0] - 1) * (red[-1] - 1)

    def generators(self) -> list[MonoidElement]:
        """Monoid generators (for LATTICE, the group generators ``+-e_i``)."""
        if self.kind is MonoidKind.NUMERICAL:
            return list(self.generators_)
        basis = [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]
        if self.kind is MonoidKind.LATTICE:
            return basis + [tuple(-c for c in b) for b in basis]
        return basis

    def action_generators(self) -> list[MonoidElement]:
        """Generators on which actions are specified (for LATTICE, the ``e_i`` only)."""
        if self.kind is MonoidKind.NUMERICAL:
            return list(self.generators_)
        return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]

    def identity(self) -> MonoidElement:
        return 0 if self.kind is MonoidKind.NUMERICAL else (0,) * self.dim

    def _numerical_members(self, bound: int) -> list[bool]:
        ok = [False] * (bound + 1)
        ok[0] = True
        for n in range(1, bound + 1):
            ok[n] = any(g <= n and ok[n - g] for g in self.generators_)
        return ok

    def contains(self, s) -> bool:
        if self.kind is MonoidKind.NUMERICAL:
            if isinstance(s, tuple):
                if len(s) != 1:
                    return False
                s = s[0]
            s = int(s)
            if s < 0 or s % self.gcd:
                return False
            if s > self.frobenius_bound:
                return True
            return self._members_upto(self.frobenius_bound)[s]
        if not isinstance(s, tuple) or len(s) != self.dim:
            return False
        return self.kind is MonoidKind.LATTICE or all(c >= 0 for c in s)

    def _members_upto(self, bound: int) -> list[bool]:
        cache = self.__dict__.setdefault("_member_cache", {})
        if bound not in cache:
            cache[bound] = self._numerical_members(bound)
        return cache[bound]

    def element(self, s) -> MonoidElement:
        if self.kind is MonoidKind.NUMERICAL:
            s = int(s[0] if isinstance(s, tuple) else s)
        else:
            s = tuple(int(c) for c in s)
        if not self.contains(s):
            raise ValueError(f"{s} is not in the monoid {self}")
        return s

    def add(self, s, t) -> MonoidElement:
        if self.kind is MonoidKind.NUMERICAL:
            return s + t
        return tuple(a + b for a, b in zip(s, t))

    def scale(self, n: int, s) -> MonoidElement:
        if self.kind is MonoidKind.NUMERICAL:
            return n * s
        return tuple(n * a for a in s)

    def diagonal(self, n: int) -> MonoidElement:
        """The cofinal chain element ``n*(1,...,1)`` (``n*max g`` for NUMERICAL)."""
        if self.kind is MonoidKind.NUMERICAL:
            return n * self.generators_[-1]
        return (n,) * self.dim

    def __str__(self):
        if self.kind is MonoidKind.NUMERICAL:
            return "<" + ",".join(map(str, self.generators_)) + ">"
        base = "N" if self.kind is MonoidKind.FREE_COMM else "Z"
        return base if self.dim == 1 else f"{base}^{self.dim}"


def folner_set(M: AmenableMonoid, n: int) -> list[MonoidElement]:
    """Box Følner set ``F_n`` in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if M.kind is MonoidKind.FREE_COMM:
        return [tuple(p) for p in itertools.product(range(n), repeat=M.dim)]
    if M.kind is MonoidKind.LATTICE:
        return [tuple(p) for p in itertools.product(range(-n, n + 1), repeat=M.dim)]
    top = n * M.generators_[-1]
    ok = M._members_upto(max(top, M.frobenius_bound))
    return [s for s in range(top) if ok[s]]


def translate_set(M: AmenableMonoid, F: Iterable[MonoidElement], s: MonoidElement) -> list[MonoidElement]:
    return [M.add(f, s) for f in F]


def folner_defect(M: AmenableMonoid, F: Iterable[MonoidElement], s: MonoidElement) -> Q:
    """Exact ``|F s \\ F| / |F|``."""
    F = list(F)
    if not F:
        raise ValueError("F must be nonempty")
    Fs = set(F)
    moved = {M.add(f, s) for f in F}
    return Q(len(moved - Fs), len(Fs))


def ore_witness(M: AmenableMonoid, s: MonoidElement, others: Sequence[MonoidElement]) -> tuple[MonoidElement, list[MonoidElement]]:
    """``(t, [t_1..t_n])`` with ``t_j + s_j = t + s`` for every j."""
    s = M.element(s)
    others = [M.element(x) for x in others]
    distinct = [x for x in dict.fromkeys(others) if x != s]
    t = M.identity()
    for x in distinct:
        t = M.add(t, x)
    # t + s = P with P = s + sum(distinct); t_j = P - s_j lies in M
    P = M.add(t, s)
    ts = []
    for x in others:
        if x == s:
            ts.append(t)
        else:
            rest = M.identity()
            for y in distinct:
                if y != x:
                    rest = M.add(rest, y)
            ts.append(M.add(rest, s))
    for x, tj in zip(others, ts):
        if M.add(tj, x) != P or not M.contains(tj):
            raise AssertionError("Ore witness failed verification")
    return t, ts


@dataclass(frozen=True)
class Fraction:
    """Element ``s^{-1} t`` of the fraction group, stored canonically as ``t - s``."""

    monoid: AmenableMonoid
    value: MonoidElement

    @classmethod
    def of(cls, M: AmenableMonoid, s: MonoidElement, t: MonoidElement) -> "Fraction":
        s, t = M.element(s), M.element(t)
        if M.kind is MonoidKind.NUMERICAL:
            return cls(M, t - s)
        return cls(M, tuple(b - a for a, b in zip(s, t)))

    def __add__(self, other: "Fraction") -> "Fraction":
        if other.monoid != self.monoid:
            raise AmbientMismatchError("fractions over different monoids")
        return Fraction(self.monoid, self.monoid.add(self.value, other.value))

    def __neg__(self) -> "Fraction":
        v = self.value
        return Fraction(self.monoid, -v if isinstance(v, int) else tuple(-c for c in v))

    def __sub__(self, other: "Fraction") -> "Fraction":
        return self + (-other)

    def representative(self) -> tuple[MonoidElement, MonoidElement]:
        """A pair ``(s, t)`` of monoid elements with ``t - s == value``."""
        M = self.monoid
        v = self.value
        if M.kind is MonoidKind.NUMERICAL:
            s = M.frobenius_bound + M.gcd + (abs(v) if v < 0 else 0)
            s = -(-s // M.gcd) * M.gcd
            return s, s + v
        if M.kind is MonoidKind.LATTICE:
            return (0,) * M.dim, v
        s = tuple(max(0, -c) for c in v)
        return s, tuple(a + b for a, b in zip(s, v))


@dataclass(frozen=True)
class FractionGroup:
    """``Z^d``, or ``gcd * Z`` for numerical monoids."""

    monoid: AmenableMonoid
    rank: int
    scale: int = 1

    def embed(self, s: MonoidElement) -> Fraction:
        return Fraction(self.monoid, self.monoid.element(s))

    def contains(self, v) -> bool:
        if self.monoid.kind is MonoidKind.NUMERICAL:
            return isinstance(v, int) and v % self.scale == 0
        return isinstance(v, tuple) and len(v) == self.rank

    def element(self, v) -> Fraction:
        if not self.contains(v):
            raise ValueError(f"{v} is not in the fraction group")
        return Fraction(self.monoid, v)


def fraction_group(M: AmenableMonoid) -> FractionGroup:
    if M.kind is MonoidKind.NUMERICAL:
        return FractionGroup(M, 1, M.gcd)
    return FractionGroup(M, M.dim, 1)


def s_preorder_leq(g1: Fraction, g2: Fraction, M: AmenableMonoid) -> bool:
    """``g1 <=_S g2`` iff ``g1 - g2`` lies in the monoid."""
    if g1.monoid != M or g2.monoid != M:
        raise AmbientMismatchError("fractions over a different monoid")
    return M.contains((g1 - g2).value)


def upper_bound(M: AmenableMonoid, g1: Fraction, g2: Fraction) -> Fraction:
    """Some ``g`` with ``g1 <=_S g`` and ``g2 <=_S g``, found by descending the diagonal."""
    n = 0
    while True:
        g = g1 + g2 - Fraction(M, M.diagonal(n))
        if s_preorder_leq(g1, g, M) and s_preorder_leq(g2, g, M):
            return g
        n += 1


@dataclass(frozen=True)
class FolnerSequence:
    """Box Følner sequence, optionally decorated by left translations ``s_n + F_n``."""

    monoid: AmenableMonoid
    translation: Callable[[int], MonoidElement] | None = None

    def set(self, n: int) -> list[MonoidElement]:
        F = folner_set(self.monoid, n)
        if self.translation is None:
            return F
        return translate_set(self.monoid, F, self.monoid.element(self.translation(n)))

    @property
    def nested(self) -> bool:
        return self.translation is None

    def defects(self, n: int) -> dict:
        """Exact defect of ``F_n`` for each monoid generator."""
        F = self.set(n)
        return {g: folner_defect(self.monoid, F, g) for g in self.monoid.generators()}
