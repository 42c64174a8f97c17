"""Finitely supported configurations over N^d or Z^d with values in a finite abelian group.

Configurations are sparse maps ``index -> base element`` kept sorted by
index, so equality and hashing are canonical.  Finite families of
configurations are handled in bulk by :class:`EncodedSet`, which packs each
configuration restricted to a finite window of sites into a mixed-radix
integer; sumsets then run through the compiled kernel.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _intmat, _kernels
from .errors import AmbientMismatchError, NotInvertibleError, ResourceLimitError
from .fingroup import Element, FinAbGroup, Hom, presentation

DEFAULT_SUMSET_CAP = 1 << 24
_INT64_CODE_LIMIT = 1 << 62

Index = tuple[int, ...]


class IndexKind(enum.Enum):
    NONNEG = "NONNEG"
    FULL = "FULL"


class EndoKind(enum.Enum):
    PUSH = "PUSH"
    PULL = "PULL"


@dataclass(frozen=True)
class ShiftSpace:
    base: FinAbGroup
    dim: int = 1
    index_kind: IndexKind = IndexKind.NONNEG

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.base.order() < 2:
            raise ValueError("base group must be nontrivial")
        object.__setattr__(self, "index_kind", IndexKind(self.index_kind))

    def valid_index(self, i: Sequence[int]) -> bool:
        return len(i) == self.dim and (self.index_kind is IndexKind.FULL or all(c >= 0 for c in i))

    def zero(self) -> "Configuration":
        return Configuration(self, {})

    def delta(self, index: int | Sequence[int], value: Sequence[int] | Element | int = 1) -> "Configuration":
        """The configuration with a single value at ``index``."""
        if isinstance(index, int):
            index = (index,)
        if isinstance(value, int):
            # a bare integer is a multiple of the generator of the largest cyclic factor
            value = (0,) * (self.base.rank - 1) + (value,)
        return Configuration(self, {tuple(index): value})

    def with_kind(self, kind: IndexKind) -> "ShiftSpace":
        return ShiftSpace(self.base, self.dim, kind)

    def __str__(self):
        idx = "N" if self.index_kind is IndexKind.NONNEG else "Z"
        d = "" if self.dim == 1 else f"^{self.dim}"
        return f"(+)_{{{idx}{d}}} {self.base}"


class Configuration:
    __slots__ = ("space", "support", "_hash")

    def __init__(self, space: ShiftSpace, values: Mapping[Sequence[int], Sequence[int] | Element]):
        items = {}
        B = space.base
        for idx, v in values.items():
            idx = tuple(int(c) for c in idx)
            if not space.valid_index(idx):
                raise AmbientMismatchError(f"index {idx} outside the index set of {space}")
            if isinstance(v, Element):
                if v.group != B:
                    raise AmbientMismatchError("value not in the base group")
                coords = v.coords
            else:
                coords = Element(B, v).coords
            if any(coords):
                items[idx] = coords
        self.space = space
        self.support: tuple[tuple[Index, tuple[int, ...]], ...] = tuple(sorted(items.items()))
        self._hash = None

    @classmethod
    def _raw(cls, space: ShiftSpace, support) -> "Configuration":
        c = cls.__new__(cls)
        c.space = space
        c.support = support
        c._hash = None
        return c

    def _check(self, other: "Configuration"):
        if not isinstance(other, Configuration) or other.space != self.space:
            raise AmbientMismatchError("configurations from different shift spaces")

    def __getitem__(self, idx: Sequence[int]) -> tuple[int, ...]:
        idx = tuple(idx)
        for i, v in self.support:
            if i == idx:
                return v
        return (0,) * self.space.base.rank

    def indices(self) -> list[Index]:
        return [i for i, _ in self.support]

    def __add__(self, other: "Configuration") -> "Configuration":
        self._check(other)
        d = dict(self.support)
        fs = self.space.base.invariant_factors
        for i, v in other.support:
            if i in d:
                d[i] = tuple((a + b) % m for a, b, m in zip(d[i], v, fs))
            else:
                d[i] = v
        return Configuration._raw(self.space, tuple(sorted((i, v) for i, v in d.items() if any(v))))

    def __neg__(self) -> "Configuration":
        fs = self.space.base.invariant_factors
        return Configuration._raw(self.space, tuple((i, tuple((-a) % m for a, m in zip(v, fs))) for i, v in self.support))

    def __sub__(self, other: "Configuration") -> "Configuration":
        return self + (-other)

    def __rmul__(self, k: int) -> "Configuration":
        fs = self.space.base.invariant_factors
        return Configuration(self.space, {i: tuple(k * a % m for a, m in zip(v, fs)) for i, v in self.support})

    def is_zero(self) -> bool:
        return not self.support

    def __eq__(self, other):
        return isinstance(other, Configuration) and self.space == other.space and self.support == other.support

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, self.support))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{i if len(i) > 1 else i[0]}: {v if len(v) != 1 else v[0]}" for i, v in self.support)
        return f"Configuration({{{body}}})"


@dataclass(frozen=True)
class TranslationEndo:
    """``PUSH``: ``(e x)(i) = x(i - s)``; ``PULL``: ``(e x)(i) = x(i + s)``.

    On NONNEG spaces, PUSH needs ``s >= 0`` and PULL discards whatever lands
    below the origin.
    """

    space: ShiftSpace
    vector: tuple[int, ...]
    kind: EndoKind = EndoKind.PUSH

    def __post_init__(self):
        v = tuple(int(c) for c in self.vector)
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "kind", EndoKind(self.kind))
        if len(v) != self.space.dim:
            raise AmbientMismatchError("translation vector has the wrong dimension")
        if self.space.index_kind is IndexKind.NONNEG and any(c < 0 for c in v):
            raise ValueError("translations on NONNEG spaces need a nonnegative vector")

    @property
    def offset(self) -> tuple[int, ...]:
        """Displacement applied to indices."""
        return self.vector if self.kind is EndoKind.PUSH else tuple(-c for c in self.vector)

    def __call__(self, x: Configuration) -> Configuration:
        return apply_translation(self, x)

    def scaled(self, n: int) -> "TranslationEndo":
        return TranslationEndo(self.space, tuple(n * c for c in self.vector), self.kind)

    def is_injective(self) -> bool:
        return self.space.index_kind is IndexKind.FULL or self.kind is EndoKind.PUSH or not any(self.vector)

    def is_identity(self) -> bool:
        return not any(self.vector)

    def inverse(self) -> "TranslationEndo":
        if self.space.index_kind is not IndexKind.FULL and not self.is_identity():
            raise NotInvertibleError("translations of a one-sided index set are not invertible")
        other = EndoKind.PULL if self.kind is EndoKind.PUSH else EndoKind.PUSH
        return TranslationEndo(self.space, self.vector, other)

    def compose(self, other: "TranslationEndo") -> "TranslationEndo":
        """``self o other`` for endomorphisms of the same kind."""
        if other.space != self.space or other.kind is not self.kind:
            raise AmbientMismatchError("can only compose translations of one kind on one space")
        return TranslationEndo(self.space, tuple(a + b for a, b in zip(self.vector, other.vector)), self.kind)

    def commutes_with(self, other: "TranslationEndo") -> bool:
        return other.space == self.space


def _shift_index(i: Index, off: Sequence[int]) -> Index:
    return tuple(a + b for a, b in zip(i, off))


def apply_translation(e: TranslationEndo, x: Configuration) -> Configuration:
    if x.space != e.space:
        raise AmbientMismatchError(f"configuration of {x.space} given to a translation of {e.space}")
    off = e.offset
    nonneg = e.space.index_kind is IndexKind.NONNEG
    out = []
    for i, v in x.support:
        j = _shift_index(i, off)
        if nonneg and any(c < 0 for c in j):
            continue
        out.append((j, v))
    return Configuration._raw(e.space, tuple(out))


# -- windows and encoded families ---------------------------------------------


class Window:
    """A finite, sorted tuple of sites and the product group ``B^sites``.

    Digit ``p*k + j`` of a code is coordinate ``j`` of the value at site
    ``sites[p]`` (``k`` = rank of the base).
    """

    __slots__ = ("space", "sites", "_pos", "moduli")

    def __init__(self, space: ShiftSpace, sites: Iterable[Index]):
        self.space = space
        self.sites: tuple[Index, ...] = tuple(sorted(set(tuple(s) for s in sites)))
        for s in self.sites:
            if not space.valid_index(s):
                raise AmbientMismatchError(f"site {s} outside {space}")
        self._pos = {s: p for p, s in enumerate(self.sites)}
        self.moduli: tuple[int, ...] = tuple(
            m for _ in self.sites for m in space.base.invariant_factors
        )

    def __len__(self):
        return len(self.sites)

    def __contains__(self, site) -> bool:
        return tuple(site) in self._pos

    def __eq__(self, other):
        return isinstance(other, Window) and self.space == other.space and self.sites == other.sites

    def __hash__(self):
        return hash((self.space, self.sites))

    def order(self) -> int:
        return prod(self.moduli)

    def fits_int64(self) -> bool:
        return self.order() < _INT64_CODE_LIMIT

    def position(self, site: Index) -> int:
        return self._pos[site]

    def union(self, other: "Window") -> "Window":
        return Window(self.space, self.sites + other.sites)

    def digits(self, x: Configuration) -> list[int]:
        k = self.space.base.rank
        out = [0] * (len(self.sites) * k)
        for i, v in x.support:
            p = self._pos.get(i)
            if p is None:
                raise AmbientMismatchError(f"site {i} not in the window")
            out[p * k : p * k + k] = v
        return out

    def configuration(self, digits: Sequence[int]) -> Configuration:
        k = self.space.base.rank
        vals = {}
        for p, s in enumerate(self.sites):
            v = tuple(int(d) for d in digits[p * k : p * k + k])
            if any(v):
                vals[s] = v
        return Configuration._raw(self.space, tuple(sorted(vals.items())))

    def as_group(self) -> tuple[FinAbGroup, list[list[int]]]:
        """Invariant-factor form of ``B^sites`` and the digit-to-coordinate matrix."""
        L = len(self.moduli)
        rels = [[m if i == j else 0 for j in range(L)] for i, m in enumerate(self.moduli)]
        if L == 0:
            return FinAbGroup(()), []
        return presentation(rels, L)


def _weights(moduli: Sequence[int]) -> list[int]:
    w = [1] * len(moduli)
    for i in range(len(moduli) - 2, -1, -1):
        w[i] = w[i + 1] * moduli[i + 1]
    return w


class EncodedSet:
    """A finite set of configurations supported inside a window.

    ``codes`` is a sorted int64 array when the window group fits in 62
    bits, otherwise a sorted list of digit tuples.
    """

    __slots__ = ("window", "codes")

    def __init__(self, window: Window, codes):
        self.window = window
        self.codes = codes

    @classmethod
    def from_configurations(cls, configs: Iterable[Configuration], window: Window | None = None) -> "EncodedSet":
        configs = list(configs)
        if not configs:
            raise ValueError("empty family")
        space = configs[0].space
        for c in configs:
            if c.space != space:
                raise AmbientMismatchError("configurations from different shift spaces")
        if window is None:
            window = Window(space, (i for c in configs for i in c.indices()))
        digs = [window.digits(c) for c in configs]
        if window.fits_int64():
            w = _weights(window.moduli)
            codes = np.unique(np.array([sum(d * wi for d, wi in zip(ds, w)) for ds in digs], dtype=np.int64))
        else:
            codes = sorted(set(tuple(ds) for ds in digs))
        return cls(window, codes)

    def __len__(self):
        return len(self.codes)

    @property
    def is_int(self) -> bool:
        return isinstance(self.codes, np.ndarray)

    def digit_rows(self) -> list[list[int]]:
        if self.is_int:
            w = _weights(self.window.moduli)
            return [[int(c) // wi % m for wi, m in zip(w, self.window.moduli)] for c in self.codes]
        return [list(t) for t in self.codes]

    def configurations(self) -> list[Configuration]:
        return [self.window.configuration(d) for d in self.digit_rows()]

    def reencode(self, window: Window) -> "EncodedSet":
        """Same configurations in a larger window."""
        if window == self.window:
            return self
        k = self.window.space.base.rank
        # old digit -> new digit
        target = []
        for s in self.window.sites:
            try:
                p = window.position(s)
            except KeyError:
                raise AmbientMismatchError(f"site {s} missing from the new window") from None
            target.extend(range(p * k, p * k + k))
        if self.is_int and window.fits_int64():
            w_old = _weights(self.window.moduli)
            w_new = _weights(window.moduli)
            out = np.zeros_like(self.codes)
            for a, b in enumerate(target):
                out += (self.codes // w_old[a] % self.window.moduli[a]) * w_new[b]
            return EncodedSet(window, np.sort(out))
        L = len(window.moduli)
        rows = []
        for d in self.digit_rows():
            nd = [0] * L
            for a, b in enumerate(target):
                nd[b] = d[a]
            rows.append(nd)
        if window.fits_int64():
            w_new = _weights(window.moduli)
            return EncodedSet(window, np.unique(np.array([sum(x * y for x, y in zip(r, w_new)) for r in rows], dtype=np.int64)))
        return EncodedSet(window, sorted(set(map(tuple, rows))))

    def translate(self, e: TranslationEndo) -> "EncodedSet":
        """Image under a translation; clipped sites are dropped and duplicates merged."""
        off = e.offset
        space = self.window.space
        nonneg = space.index_kind is IndexKind.NONNEG
        moved = [_shift_index(s, off) for s in self.window.sites]
        keep = [p for p, s in enumerate(moved) if not (nonneg and any(c < 0 for c in s))]
        if len(keep) == len(moved):
            return EncodedSet(Window(space, moved), self.codes)
        if not keep:
            return EncodedSet(Window(space, ()), np.zeros(1, dtype=np.int64))
        k = space.base.rank
        new_window = Window(space, [moved[p] for p in keep])
        digit_idx = [p * k + j for p in keep for j in range(k)]
        rows = {tuple(d[i] for i in digit_idx) for d in self.digit_rows()}
        if new_window.fits_int64():
            w = _weights(new_window.moduli)
            return EncodedSet(new_window, np.unique(np.array([sum(x * y for x, y in zip(r, w)) for r in rows], dtype=np.int64)))
        return EncodedSet(new_window, sorted(rows))

    def sumset(self, other: "EncodedSet", cap: int = DEFAULT_SUMSET_CAP) -> "EncodedSet":
        if other.window.space != self.window.space:
            raise AmbientMismatchError("sumset of families from different shift spaces")
        W = self.window.union(other.window)
        a, b = self.reencode(W), other.reencode(W)
        if W.fits_int64():
            codes = _kernels.sumset_codes(a.codes, b.codes, list(W.moduli), cap)
        else:
            codes = _kernels.sumset_tuples(a.codes, b.codes, W.moduli, cap)
        return EncodedSet(W, codes)


def sumset(A: Iterable[Configuration], Bset: Iterable[Configuration], cap: int = DEFAULT_SUMSET_CAP) -> frozenset[Configuration]:
    """``{a + b}`` for finite families of configurations."""
    A, Bset = list(A), list(Bset)
    if not A or not Bset:
        raise ValueError("sumset of an empty family")
    if A[0].space != Bset[0].space:
        raise AmbientMismatchError("sumset of families from different shift spaces")
    if len(A) * len(Bset) <= 64:
        out = {a + b for a in A for b in Bset}
        if len(out) > cap:
            raise ResourceLimitError(f"sumset exceeds cap of {cap} elements")
        return frozenset(out)
    return frozenset(EncodedSet.from_configurations(A).sumset(EncodedSet.from_configurations(Bset), cap).configurations())


def subgroup_order_in_window(window: Window, generators: Iterable[Configuration]) -> int:
    """Order of the subgroup of ``B^window`` generated by ``generators``."""
    L = len(window.moduli)
    rows = [window.digits(g) for g in generators]
    rows += [[m if i == j else 0 for j in range(L)] for i, m in enumerate(window.moduli)]
    H = _intmat.hnf_rows(rows, L)
    return window.order() // prod(H[i][i] for i in range(L))


def window_hom(window: Window, endo: TranslationEndo, target: Window) -> tuple[FinAbGroup, FinAbGroup, Hom]:
    """The translation as a hom between window groups (sites leaving ``target`` must be clipped)."""
    G1, P1 = window.as_group()
    G2, P2 = target.as_group()
    L1 = len(window.moduli)
    # digit vectors representing the basis of G1
    basis_digits = []
    for e in G1.basis():
        A = [list(P1[i]) + [G1.invariant_factors[i] if i == j else 0 for j in range(G1.rank)] for i in range(G1.rank)]
        sol = _intmat.solve_integer(A, list(e.coords), L1 + G1.rank)
        basis_digits.append(sol[:L1])
    images = []
    for digs in basis_digits:
        x = window.configuration([d % m for d, m in zip(digs, window.moduli)])
        y = apply_translation(endo, x)
        yd = target.digits(y)
        images.append(Element(G2, _intmat.matvec(P2, yd)))
    if not images:
        return G1, G2, Hom.zero(G1, G2)
    return G1, G2, Hom.from_images(G1, images)


class FiberwiseSubgroup:
    """The subgroup ``(+) C`` of a shift space: configurations with every value in ``C <= B``."""

    def __init__(self, space: ShiftSpace, fiber):
        if fiber.ambient != space.base:
            raise AmbientMismatchError("fiber subgroup is not in the base group")
        self.space = space
        self.fiber = fiber

    def contains(self, x: Configuration) -> bool:
        if x.space != self.space:
            raise AmbientMismatchError("configuration of another space")
        B = self.space.base
        return all(self.fiber.contains(Element(B, v)) for _, v in x.support)

    __contains__ = contains

    def __repr__(self):
        return f"FiberwiseSubgroup({self.space}, {self.fiber!r})"


def map_values(x: Configuration, f: Hom, target: ShiftSpace | None) -> Configuration | None:
    """Apply a base-group hom sitewise; ``target=None`` stands for the zero space."""
    if target is None:
        return None
    B = x.space.base
    vals = {i: f(Element(B, v)) for i, v in x.support}
    return Configuration(target, vals)
