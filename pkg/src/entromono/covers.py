"""Finite covers of finite sets, stored as bitmasks over element indices."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from . import _kernels
from .errors import CoverError, ResourceLimitError

MAX_AMBIENT = 1 << 12
MAX_MEMBERS = 1 << 12


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class FiniteCover:
    """A cover of ``{0, ..., size-1}`` by the nonempty sets ``members``.

    Duplicate members are merged (first occurrence kept), so the member
    order is the input order.
    """

    __slots__ = ("size", "members")

    def __init__(self, size: int, members: Iterable[int], check: bool = True):
        seen = set()
        ms = []
        for m in members:
            if m and m not in seen:
                seen.add(m)
                ms.append(m)
        self.size = size
        self.members: tuple[int, ...] = tuple(ms)
        if check and self.union() != self.full_mask:
            raise CoverError("family does not cover the ambient set")

    @classmethod
    def from_sets(cls, size: int, sets: Iterable[Iterable[int]]) -> "FiniteCover":
        return cls(size, (mask_of(s) for s in sets))

    @classmethod
    def trivial(cls, size: int) -> "FiniteCover":
        return cls(size, [(1 << size) - 1])

    @classmethod
    def singletons(cls, size: int) -> "FiniteCover":
        return cls(size, [1 << i for i in range(size)])

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def union(self) -> int:
        u = 0
        for m in self.members:
            u |= m
        return u

    def __len__(self):
        return len(self.members)

    def member_sets(self) -> list[list[int]]:
        return [indices_of(m) for m in self.members]

    def join(self, other: "FiniteCover") -> "FiniteCover":
        if other.size != self.size:
            raise CoverError("join of covers of different sets")
        return FiniteCover(self.size, (a & b for a in self.members for b in other.members), check=False)

    def pullback(self, f: Callable[[int], int] | Sequence[int], size: int) -> "FiniteCover":
        """``{f^{-1}(U)}`` for a map ``f`` from ``{0..size-1}`` to this ambient."""
        fv = [f[i] if not callable(f) else f(i) for i in range(size)]
        ms = []
        for m in self.members:
            ms.append(mask_of(i for i in range(size) if (m >> fv[i]) & 1))
        return FiniteCover(size, ms)

    def refines(self, other: "FiniteCover") -> bool:
        """``self`` refines ``other``: every member lies inside some member of ``other``."""
        return all(any(m & ~o == 0 for o in other.members) for m in self.members)

    def __eq__(self, other):
        return isinstance(other, FiniteCover) and self.size == other.size and set(self.members) == set(other.members)

    def __hash__(self):
        return hash((self.size, frozenset(self.members)))

    def __repr__(self):
        return f"FiniteCover(size={self.size}, members={self.member_sets()})"


def join_all(covers: Iterable[FiniteCover]) -> FiniteCover:
    covers = list(covers)
    out = covers[0]
    for c in covers[1:]:
        out = out.join(c)
        if len(out.members) > MAX_MEMBERS:
            out = FiniteCover(out.size, _drop_dominated(out.members), check=False)
    return out


def _drop_dominated(members: Sequence[int]) -> list[int]:
    """Remove members contained in another member (keeps input order)."""
    ms = sorted(set(members), key=lambda m: -m.bit_count())
    keep: list[int] = []
    for m in ms:
        if not any(m & ~k == 0 for k in keep):
            keep.append(m)
    kept = set(keep)
    out = []
    for m in members:
        if m in kept:
            out.append(m)
            kept.discard(m)
    return out


def _reduce(B: int, pool: list[int]) -> tuple[int, list[int], list[int], int]:
    """Exact preprocessing for set cover of ``B`` by ``pool``.

    An element whose set of covering members contains another element's set
    is covered for free, so only elements with minimal signatures are kept
    (one per signature).  Members are then re-encoded on the kept elements
    and dominated members dropped; the two steps alternate to a fixpoint.
    Returns ``(universe, members, index, nbits)`` where ``index[j]`` is the
    position in ``pool`` of the j-th reduced member.
    """
    index = list(range(len(pool)))
    members = list(pool)
    elems = [e for e in range(B.bit_length()) if (B >> e) & 1]
    while True:
        sig: dict[int, int] = {}
        for e in elems:
            bit = 1 << e
            v = 0
            for j, m in enumerate(members):
                if m & bit:
                    v |= 1 << j
            sig.setdefault(v, e)
        kept: list[int] = []
        for v in sorted(sig, key=lambda v: (v.bit_count(), sig[v])):
            if not any(k & ~v == 0 for k in kept):
                kept.append(v)
        new = [0] * len(members)
        for pos, v in enumerate(kept):
            j = 0
            while v:
                if v & 1:
                    new[j] |= 1 << pos
                v >>= 1
                j += 1
        survivors = _drop_dominated([m for m in new if m])
        if len(survivors) == len(members) and len(kept) == len(elems):
            return (1 << len(kept)) - 1, new, index, len(kept)
        pick, used = [], set()
        for j, m in enumerate(new):
            if m and m in survivors and m not in used:
                pick.append(j)
                used.add(m)
        index = [index[j] for j in pick]
        members = [new[j] for j in pick]
        elems = list(range(len(kept)))


def min_subcover(U: FiniteCover, B: int | None = None, *, return_members: bool = False):
    """``N_B(U)``: the least number of members of ``U`` covering ``B`` (default: everything)."""
    if B is None:
        B = U.full_mask
    if not B:
        return (0, []) if return_members else 0
    if U.size > MAX_AMBIENT:
        raise ResourceLimitError(f"set cover ambient of {U.size} elements exceeds {MAX_AMBIENT}")
    restricted = [m & B for m in U.members]
    u = 0
    for m in restricted:
        u |= m
    if u & B != B:
        raise CoverError("the cover does not cover the requested subset")
    # members contained in B-wise larger members never help
    pool = _drop_dominated([m for m in restricted if m]) if len(restricted) <= 2048 else [m for m in restricted if m]
    if len(pool) > MAX_MEMBERS:
        raise ResourceLimitError(f"set cover with {len(pool)} members exceeds {MAX_MEMBERS}")
    universe, reduced, index, nbits = _reduce(B, pool)
    chosen = [index[i] for i in _kernels.min_cover(universe, reduced, nbits)]
    if return_members:
        return len(chosen), [pool[i] for i in chosen]
    return len(chosen)


def brute_force_min_subcover(U: FiniteCover, B: int | None = None) -> int:
    """Reference oracle: try subfamilies in order of size."""
    from itertools import combinations

    if B is None:
        B = U.full_mask
    if not B:
        return 0
    ms = [m & B for m in U.members]
    for k in range(1, len(ms) + 1):
        for combo in combinations(ms, k):
            u = 0
            for m in combo:
                u |= m
            if u == B:
                return k
    raise CoverError("the cover does not cover the requested subset")
