"""Finite abelian groups in invariant-factor form.

A group ``Z/d_1 + ... + Z/d_k`` (with ``d_1 | d_2 | ... | d_k`` and every
``d_i >= 2``) is stored as its tuple of invariant factors.  Subgroups are
stored through the lattice ``L_H = <generators> + diag(d) Z^k`` in ``Z^k``;
the Hermite normal form of that lattice is the canonical basis, so subgroup
equality is syntactic.  Homomorphisms are integer matrices acting on
coordinate columns.

>>> G = FinAbGroup((4,))
>>> H = generated_subgroup(G, [G.element((2,))])
>>> Q, proj = quotient(G, H)
>>> Q.invariant_factors
(2,)
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from . import _intmat
from .errors import AmbientMismatchError, NotASubgroupError, NotInvertibleError

__all__ = [
    "FinAbGroup",
    "Element",
    "Hom",
    "Subgroup",
    "smith_normal_form",
    "presentation",
    "quotient",
    "kernel",
    "image",
    "preimage",
    "subgroup_sum",
    "subgroup_intersection",
    "generated_subgroup",
    "trivial_subgroup",
    "whole_subgroup",
    "random_group",
    "random_hom",
    "random_automorphism",
    "random_subgroup",
]


def smith_normal_form(A, ncols=None):
    """``(U, D, V)`` with ``U A V = D`` diagonal, nonnegative, divisibility chain."""
    return _intmat.smith_normal_form(A, ncols)


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for i, d in enumerate(fs):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i + 1 < len(fs) and fs[i + 1] % d:
                raise ValueError(f"invariant factors {fs} do not form a divisibility chain")

    @classmethod
    def cyclic(cls, n: int) -> "FinAbGroup":
        return cls(() if n == 1 else (n,))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FinAbGroup":
        """The group ``Z/o_1 + ... + Z/o_m`` for arbitrary orders, normalized."""
        return presentation([[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)], len(orders))[0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def order(self) -> int:
        return prod(self.invariant_factors)

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def element(self, coords: Sequence[int] | int) -> "Element":
        """An element from coordinates; a bare int is a multiple of the last generator."""
        if isinstance(coords, int):
            if not self.invariant_factors:
                return self.zero()
            coords = (0,) * (self.rank - 1) + (coords,)
        return Element(self, tuple(coords))

    def zero(self) -> "Element":
        return Element(self, (0,) * self.rank)

    def basis(self) -> list["Element"]:
        return [Element(self, tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def elements(self) -> Iterator["Element"]:
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield Element(self, coords, _reduced=True)

    def random_element(self, rng: random.Random) -> "Element":
        return Element(self, tuple(rng.randrange(d) for d in self.invariant_factors), _reduced=True)

    def index_of(self, x: "Element") -> int:
        """Mixed-radix position of ``x`` in :meth:`elements` order."""
        idx = 0
        for c, d in zip(x.coords, self.invariant_factors):
            idx = idx * d + c
        return idx

    def element_at(self, idx: int) -> "Element":
        coords = []
        for d in reversed(self.invariant_factors):
            idx, c = divmod(idx, d)
            coords.append(c)
        return Element(self, tuple(reversed(coords)), _reduced=True)

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


class Element:
    __slots__ = ("group", "coords")

    def __init__(self, group: FinAbGroup, coords: Sequence[int], _reduced: bool = False):
        if len(coords) != group.rank:
            raise AmbientMismatchError(f"{len(coords)} coordinates for a rank-{group.rank} group")
        self.group = group
        if _reduced:
            self.coords = tuple(coords)
        else:
            self.coords = tuple(int(c) % d for c, d in zip(coords, group.invariant_factors))

    def _check(self, other: "Element"):
        if not isinstance(other, Element) or other.group != self.group:
            raise AmbientMismatchError("elements of different groups")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "Element":
        return Element(self.group, [-a for a in self.coords])

    def __rmul__(self, k: int) -> "Element":
        return Element(self.group, [k * a for a in self.coords])

    def __mul__(self, k: int) -> "Element":
        return self.__rmul__(k)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        o = 1
        for c, d in zip(self.coords, self.group.invariant_factors):
            o = o * (d // gcd(c, d)) // gcd(o, d // gcd(c, d))
        return o

    def __eq__(self, other):
        return isinstance(other, Element) and self.group == other.group and self.coords == other.coords

    def __hash__(self):
        return hash((self.group.invariant_factors, self.coords))

    def __repr__(self):
        return f"Element({self.coords} in {self.group})"


class Hom:
    """Homomorphism ``source -> target`` given by an integer matrix.

    ``matrix[i][j]`` is coordinate ``i`` of the image of the ``j``-th basis
    element of the source; entries are reduced mod the target factor of row i.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix: Sequence[Sequence[int]]):
        if len(matrix) != target.rank or any(len(r) != source.rank for r in matrix):
            raise AmbientMismatchError(
                f"matrix shape does not match {source} -> {target}"
            )
        es = target.invariant_factors
        ds = source.invariant_factors
        rows = []
        for i, row in enumerate(matrix):
            r = []
            for j, a in enumerate(row):
                a = int(a) % es[i]
                if (a * ds[j]) % es[i]:
                    raise ValueError(
                        f"entry ({i},{j})={a} is not well defined: {es[i]} does not divide {a}*{ds[j]}"
                    )
                r.append(a)
            rows.append(tuple(r))
        self.source = source
        self.target = target
        self.matrix = tuple(rows)

    @classmethod
    def identity(cls, G: FinAbGroup) -> "Hom":
        return cls(G, G, _intmat.identity(G.rank))

    @classmethod
    def zero(cls, G: FinAbGroup, H: FinAbGroup) -> "Hom":
        return cls(G, H, _intmat.zeros(H.rank, G.rank))

    @classmethod
    def scalar(cls, G: FinAbGroup, c: int) -> "Hom":
        return cls(G, G, [[c if i == j else 0 for j in range(G.rank)] for i in range(G.rank)])

    @classmethod
    def from_images(cls, source: FinAbGroup, images: Sequence[Element]) -> "Hom":
        """The hom sending the j-th basis element of ``source`` to ``images[j]``."""
        if len(images) != source.rank:
            raise AmbientMismatchError("need one image per source basis element")
        if not images:
            raise ValueError("target cannot be inferred for a trivial source; use Hom.zero")
        target = images[0].group
        cols = [x.coords for x in images]
        return cls(source, target, _intmat.transpose(cols, target.rank) if cols else [])

    def __call__(self, x: Element) -> Element:
        if x.group != self.source:
            raise AmbientMismatchError(f"{x!r} is not in the source {self.source}")
        return Element(self.target, _intmat.matvec(self.matrix, x.coords))

    def compose(self, other: "Hom") -> "Hom":
        """``self o other``."""
        if other.target != self.source:
            raise AmbientMismatchError("composition of non-composable homs")
        M = _intmat.matmul(self.matrix, other.matrix, inner=self.source.rank) if self.matrix else []
        if not self.matrix:
            M = []
        return Hom(other.source, self.target, M if self.target.rank else [])

    __matmul__ = compose

    def __add__(self, other: "Hom") -> "Hom":
        if (self.source, self.target) != (other.source, other.target):
            raise AmbientMismatchError("sum of homs with different domains")
        return Hom(self.source, self.target, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)])

    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def power(self, n: int) -> "Hom":
        if not self.is_endomorphism():
            raise AmbientMismatchError("power of a non-endomorphism")
        if n < 0:
            return self.inverse().power(-n)
        result = Hom.identity(self.source)
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            base = base.compose(base)
            n >>= 1
        return result

    def kernel(self) -> "Subgroup":
        return kernel(self)

    def image(self) -> "Subgroup":
        return image(self)

    def is_injective(self) -> bool:
        return kernel(self).order() == 1

    def is_surjective(self) -> bool:
        return image(self).order() == self.target.order()

    def is_bijective(self) -> bool:
        return self.source.order() == self.target.order() and self.is_injective()

    def inverse(self) -> "Hom":
        if not self.is_bijective():
            raise NotInvertibleError("hom is not bijective")
        T = self.target
        images = []
        for e in T.basis():
            x = _solve_preimage(self, e)
            images.append(x)
        if not images:
            return Hom(T, self.source, [])
        return Hom.from_images(T, images)

    def restrict(self, H: "Subgroup", K: "Subgroup") -> "Hom":
        """The map ``H -> K`` (abstract groups of :meth:`Subgroup.as_group`) induced by self."""
        if H.ambient != self.source or K.ambient != self.target:
            raise AmbientMismatchError("restriction to subgroups of other groups")
        Y, incl = H.as_group()
        Z, _ = K.as_group()
        images = []
        for g in Y.basis():
            y = self(incl(g))
            if not K.contains(y):
                raise NotASubgroupError(f"{y!r} is not in the target subgroup")
            images.append(K.coordinates(y))
        if not images:
            return Hom.zero(Y, Z)
        return Hom(Y, Z, _intmat.transpose([v.coords for v in images], Z.rank))

    def induced_on_quotients(self, H: "Subgroup", K: "Subgroup") -> "Hom":
        """The map ``source/H -> target/K`` induced by self (requires ``self(H) <= K``)."""
        if not image_of_subgroup(self, H).is_subgroup_of(K):
            raise NotASubgroupError("hom does not map H into K")
        Q1, _ = quotient(self.source, H)
        Q2, p2 = quotient(self.target, K)
        lifts = quotient_lifts(self.source, H)
        images = [p2(self(lift)) for lift in lifts]
        if not images:
            return Hom.zero(Q1, Q2)
        return Hom(Q1, Q2, _intmat.transpose([v.coords for v in images], Q2.rank))

    def __eq__(self, other):
        return (
            isinstance(other, Hom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"Hom({self.source} -> {self.target}, {[list(r) for r in self.matrix]})"


def _solve_preimage(f: Hom, y: Element) -> Element | None:
    """Some ``x`` with ``f(x) == y``, or ``None``."""
    m, k = f.target.rank, f.source.rank
    # A x + E z = y over the integers
    A = [list(f.matrix[i]) + [f.target.invariant_factors[i] if i == j else 0 for j in range(m)] for i in range(m)]
    sol = _intmat.solve_integer(A, list(y.coords), k + m)
    if sol is None:
        return None
    return Element(f.source, sol[:k])


class Subgroup:
    """Subgroup of a :class:`FinAbGroup` generated by a list of elements."""

    __slots__ = ("ambient", "generators", "canonical_basis", "__dict__")

    def __init__(self, ambient: FinAbGroup, generators: Iterable[Element] = ()):
        gens = tuple(generators)
        for g in gens:
            if g.group != ambient:
                raise AmbientMismatchError(f"generator {g!r} not in {ambient}")
        self.ambient = ambient
        self.generators = gens
        k = ambient.rank
        rows = [list(g.coords) for g in gens]
        rows += [[d if i == j else 0 for j in range(k)] for i, d in enumerate(ambient.invariant_factors)]
        self.canonical_basis = tuple(_intmat.hnf_rows(rows, k))

    def order(self) -> int:
        det = prod(self.canonical_basis[i][i] for i in range(self.ambient.rank))
        return self.ambient.order() // det

    def index(self) -> int:
        return self.ambient.order() // self.order()

    def contains(self, x: Element) -> bool:
        if x.group != self.ambient:
            raise AmbientMismatchError("element of another group")
        v = list(x.coords)
        for i, row in enumerate(self.canonical_basis):
            # full-rank echelon basis: pivot of row i sits in column i
            p = row[i]
            if v[i] % p:
                return False
            q = v[i] // p
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    __contains__ = contains

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        if other.ambient != self.ambient:
            raise AmbientMismatchError("subgroups of different groups")
        return all(other.contains(g) for g in self.generators)

    def is_trivial(self) -> bool:
        return self.order() == 1

    def is_whole(self) -> bool:
        return self.order() == self.ambient.order()

    @cached_property
    def _group_data(self):
        k = self.ambient.rank
        B = [list(r) for r in self.canonical_basis]
        Binv = _intmat.rational_inverse(B) if k else []
        # diag(d) expressed in the basis B:  C = diag(d) B^{-1}
        C = []
        for i, d in enumerate(self.ambient.invariant_factors):
            row = [d * v for v in Binv[i]]
            if any(v.denominator != 1 for v in row):
                raise AssertionError("lattice does not contain diag(d)")
            C.append([int(v) for v in row])
        U, D, V = _intmat.smith_normal_form(C, k)
        keep = [i for i in range(k) if D[i][i] > 1]
        Y = FinAbGroup(tuple(D[i][i] for i in keep))
        Vinv = _intmat.integer_inverse(V) if k else []
        gens = []
        for i in keep:
            c = Vinv[i]
            x = [sum(c[t] * B[t][j] for t in range(k)) for j in range(k)]
            gens.append(Element(self.ambient, x))
        if gens:
            incl = Hom(Y, self.ambient, _intmat.transpose([g.coords for g in gens], k))
        else:
            incl = Hom.zero(Y, self.ambient)
        return Y, incl, Binv, V, keep

    def as_group(self) -> tuple[FinAbGroup, Hom]:
        """An abstract group ``Y`` with an injective hom ``Y -> ambient`` onto self."""
        Y, incl, *_ = self._group_data
        return Y, incl

    def coordinates(self, x: Element) -> Element:
        """The element of :meth:`as_group` mapping to ``x``."""
        if not self.contains(x):
            raise NotASubgroupError(f"{x!r} is not in the subgroup")
        Y, _, Binv, V, keep = self._group_data
        k = self.ambient.rank
        c = [sum(x.coords[t] * Binv[t][j] for t in range(k)) for j in range(k)]
        c = [int(v) for v in c]
        cv = [sum(c[t] * V[t][j] for t in range(k)) for j in range(k)]
        return Element(Y, [cv[i] for i in keep])

    def elements(self) -> Iterator[Element]:
        Y, incl = self.as_group()
        for y in Y.elements():
            yield incl(y)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and self.canonical_basis == other.canonical_basis
        )

    def __hash__(self):
        return hash((self.ambient, self.canonical_basis))

    def __repr__(self):
        return f"Subgroup(order {self.order()} in {self.ambient}, basis={list(self.canonical_basis)})"


def presentation(relations: Sequence[Sequence[int]], ngens: int) -> tuple[FinAbGroup, list[list[int]]]:
    """Normalize ``Z^ngens / <relations>`` (must be finite).

    Returns the group and the ``rank x ngens`` matrix sending the i-th
    standard generator of ``Z^ngens`` to its coordinates in the group.
    """
    rows = _intmat.hnf_rows(relations, ngens)
    if len(rows) < ngens:
        raise ValueError("relations do not define a finite group")
    U, D, V = _intmat.smith_normal_form(rows, ngens)
    # Z^n / rowspan(R):  x -> x V  (mod D_ii)
    keep = [i for i in range(ngens) if D[i][i] > 1]
    G = FinAbGroup(tuple(D[i][i] for i in keep))
    P = [[V[j][i] % D[i][i] for j in range(ngens)] for i in keep]
    return G, P


def _check_sub(G: FinAbGroup, H: Subgroup):
    if H.ambient != G:
        raise AmbientMismatchError(f"subgroup of {H.ambient} used in {G}")


def _quotient_data(G: FinAbGroup, H: Subgroup):
    k = G.rank
    B = [list(r) for r in H.canonical_basis]
    U, D, V = _intmat.smith_normal_form(B, k)
    keep = [i for i in range(k) if D[i][i] > 1]
    Q = FinAbGroup(tuple(D[i][i] for i in keep))
    return Q, V, keep


def quotient(G: FinAbGroup, H: Subgroup) -> tuple[FinAbGroup, Hom]:
    """``G/H`` in invariant-factor form with the projection ``G -> G/H``."""
    _check_sub(G, H)
    Q, V, keep = _quotient_data(G, H)
    P = [[V[j][i] for j in range(G.rank)] for i in keep]
    return Q, Hom(G, Q, P)


def quotient_lifts(G: FinAbGroup, H: Subgroup) -> list[Element]:
    """Elements of ``G`` projecting onto the basis of ``G/H`` (same order as :func:`quotient`)."""
    _check_sub(G, H)
    Q, V, keep = _quotient_data(G, H)
    Vinv = _intmat.integer_inverse(V) if G.rank else []
    return [Element(G, Vinv[i]) for i in keep]


def generated_subgroup(G: FinAbGroup, gens: Iterable[Element]) -> Subgroup:
    return Subgroup(G, gens)


def trivial_subgroup(G: FinAbGroup) -> Subgroup:
    return Subgroup(G, ())


def whole_subgroup(G: FinAbGroup) -> Subgroup:
    return Subgroup(G, G.basis())


def _preimage_lattice(f: Hom, target_rows: Sequence[Sequence[int]]) -> Subgroup:
    m, k = f.target.rank, f.source.rank
    r = len(target_rows)
    # A x - R^T z = 0
    M = [list(f.matrix[i]) + [-target_rows[t][i] for t in range(r)] for i in range(m)]
    ker = _intmat.integer_kernel(M, k + r)
    return Subgroup(f.source, [Element(f.source, v[:k]) for v in ker])


def kernel(f: Hom) -> Subgroup:
    T = f.target
    rows = [[d if i == j else 0 for j in range(T.rank)] for i, d in enumerate(T.invariant_factors)]
    return _preimage_lattice(f, rows)


def image(f: Hom) -> Subgroup:
    return Subgroup(f.target, [f(e) for e in f.source.basis()])


def image_of_subgroup(f: Hom, H: Subgroup) -> Subgroup:
    if H.ambient != f.source:
        raise AmbientMismatchError("subgroup not in the source")
    return Subgroup(f.target, [f(g) for g in H.generators])


def preimage(f: Hom, H: Subgroup) -> Subgroup:
    if H.ambient != f.target:
        raise AmbientMismatchError("subgroup not in the target")
    return _preimage_lattice(f, H.canonical_basis)


def subgroup_sum(H1: Subgroup, H2: Subgroup) -> Subgroup:
    if H1.ambient != H2.ambient:
        raise AmbientMismatchError("subgroups of different groups")
    return Subgroup(H1.ambient, H1.generators + H2.generators)


def subgroup_intersection(H1: Subgroup, H2: Subgroup) -> Subgroup:
    if H1.ambient != H2.ambient:
        raise AmbientMismatchError("subgroups of different groups")
    G = H1.ambient
    k = G.rank
    B1, B2 = H1.canonical_basis, H2.canonical_basis
    n1, n2 = len(B1), len(B2)
    # u B1 = v B2  <=>  [B1^T | -B2^T] (u, v) = 0
    M = [[B1[t][j] for t in range(n1)] + [-B2[t][j] for t in range(n2)] for j in range(k)]
    ker = _intmat.integer_kernel(M, n1 + n2)
    gens = []
    for vec in ker:
        u = vec[:n1]
        gens.append(Element(G, [sum(u[t] * B1[t][j] for t in range(n1)) for j in range(k)]))
    return Subgroup(G, gens)


# -- random instances (tests, harness) --------------------------------------


def random_group(rng: random.Random, max_order: int, max_rank: int = 3) -> FinAbGroup:
    while True:
        r = rng.randint(1, max_rank)
        orders = [rng.randint(2, max(2, max_order)) for _ in range(r)]
        if prod(orders) <= max_order:
            return FinAbGroup.from_orders(orders)


def random_hom(rng: random.Random, G: FinAbGroup, H: FinAbGroup) -> Hom:
    M = []
    for e in H.invariant_factors:
        row = []
        for d in G.invariant_factors:
            step = e // gcd(e, d)
            row.append(step * rng.randrange(e // step))
        M.append(row)
    return Hom(G, H, M)


def random_automorphism(rng: random.Random, G: FinAbGroup, tries: int = 1000) -> Hom:
    for _ in range(tries):
        f = random_hom(rng, G, G)
        if f.is_bijective():
            return f
    return Hom.identity(G)


def random_subgroup(rng: random.Random, G: FinAbGroup, ngens: int = 1) -> Subgroup:
    return Subgroup(G, [G.random_element(rng) for _ in range(ngens)])
