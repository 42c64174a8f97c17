"""Epsilon-quasi-tilings of finite subsets of Z^d by translates of Følner shapes.

Shapes and targets are finite sets of integer tuples.  A tiling places
translates ``c + S`` of each shape ``S`` at a set of centers; the verifier
checks the three quasi-tiling clauses independently of the construction.

QT.1  every ``C_t + S_t`` lies in the target and
      ``|C_t + S_t| >= (1 - eps) |C_t| |S_t|``;
QT.2  the sets ``C_t + S_t`` are pairwise disjoint across ``t``;
QT.3  ``|F \\ union_t (C_t + S_t)| <= eps |F|``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import TilingFailure

Point = tuple[int, ...]


def box(lo: Sequence[int], hi: Sequence[int]) -> frozenset[Point]:
    """``[lo_1, hi_1) x ... x [lo_d, hi_d)``."""
    return frozenset(itertools.product(*(range(a, b) for a, b in zip(lo, hi))))


def cube(n: int, d: int) -> frozenset[Point]:
    return box((0,) * d, (n,) * d)


def _add(c: Point, s: Point) -> Point:
    return tuple(a + b for a, b in zip(c, s))


def translates(centers: Iterable[Point], shape: Iterable[Point]) -> list[Point]:
    """``C + S`` as a list with multiplicity."""
    shape = list(shape)
    return [_add(c, s) for c in centers for s in shape]


@dataclass(frozen=True)
class TileSystem:
    dim: int
    shapes: tuple[frozenset, ...]
    eps: Fraction

    def __init__(self, shapes: Iterable[Iterable[Point]], eps, dim: int | None = None):
        shapes = tuple(dict.fromkeys(frozenset(tuple(int(c) for c in p) for p in s) for s in shapes))
        if not shapes or any(not s for s in shapes):
            raise ValueError("shapes must be nonempty")
        d = dim if dim is not None else len(next(iter(shapes[0])))
        for s in shapes:
            if any(len(p) != d for p in s):
                raise ValueError("shape points must all have dimension %d" % d)
        eps = Fraction(eps)
        if not 0 < eps < Fraction(1, 2):
            raise ValueError("eps must lie in (0, 1/2)")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "shapes", tuple(sorted(shapes, key=len)))
        object.__setattr__(self, "eps", eps)


@dataclass
class QuasiTiling:
    target: frozenset
    shapes: tuple[frozenset, ...]
    centers: list[list[Point]]

    def covered(self) -> set[Point]:
        out: set[Point] = set()
        for C, S in zip(self.centers, self.shapes):
            out.update(translates(C, S))
        return out

    def leftover(self) -> int:
        return len(self.target - self.covered())

    def leftover_ratio(self) -> Fraction:
        return Fraction(self.leftover(), len(self.target))


def quasi_tile(system: TileSystem, F: Iterable[Point]) -> QuasiTiling:
    """Greedy tiling: largest shape first, centers scanned in lexicographic order.

    A placement is accepted only when it lies inside the still-uncovered part
    of ``F``, so the tiles are exactly disjoint.  Raises
    :class:`TilingFailure` when the leftover exceeds ``eps |F|``.
    """
    F = frozenset(tuple(p) for p in F)
    if not F:
        raise ValueError("target must be nonempty")
    free = set(F)
    order = sorted(F)
    centers_by_shape: dict[frozenset, list[Point]] = {}
    for S in sorted(system.shapes, key=len, reverse=True):
        pts = sorted(S)
        anchor = pts[0]
        rest = pts[1:]
        placed: list[Point] = []
        # every admissible center c has c + anchor in F; scanning F in
        # lexicographic order scans the centers in lexicographic order too
        for f in order:
            if f not in free:
                continue
            c = tuple(a - b for a, b in zip(f, anchor))
            cells = [_add(c, s) for s in rest]
            if all(x in free for x in cells):
                free.discard(f)
                free.difference_update(cells)
                placed.append(c)
        centers_by_shape[S] = placed
    t = QuasiTiling(F, system.shapes, [centers_by_shape[S] for S in system.shapes])
    ratio = Fraction(len(free), len(F))
    if ratio > system.eps:
        raise TilingFailure(ratio, t)
    return t


@dataclass
class Verdict:
    ok: bool
    clause: str | None = None
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def verify_quasi_tiling(t: QuasiTiling, eps) -> Verdict:
    """Check QT.1 to QT.3 from scratch; report the first violated clause with a witness."""
    eps = Fraction(eps)
    F = t.target
    blocks = []
    for k, (C, S) in enumerate(zip(t.centers, t.shapes)):
        cells = set()
        for c in C:
            for s in S:
                cells.add(tuple(a + b for a, b in zip(c, s)))
        outside = sorted(cells - F)
        if outside:
            return Verdict(False, "QT.1", {"shape": k, "cell_outside_target": outside[0]})
        if len(cells) < (1 - eps) * len(C) * len(S):
            return Verdict(False, "QT.1", {"shape": k, "size": len(cells), "required": (1 - eps) * len(C) * len(S)})
        blocks.append(cells)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            common = blocks[i] & blocks[j]
            if common:
                return Verdict(False, "QT.2", {"shapes": (i, j), "common_cell": min(common)})
    union = set().union(*blocks) if blocks else set()
    left = len(F - union)
    details = {"leftover": left, "target": len(F), "blocks": [len(b) for b in blocks]}
    if left > eps * len(F):
        return Verdict(False, "QT.3", {"leftover": left, "allowed": eps * len(F)}, details)
    return Verdict(True, None, None, details)
