"""Pure-Python/numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels`` must agree with them
bit for bit.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ResourceLimitError

_CHUNK = 1 << 21


def _weights(moduli: Sequence[int]) -> list[int]:
    w = [1] * len(moduli)
    for i in range(len(moduli) - 2, -1, -1):
        w[i] = w[i + 1] * moduli[i + 1]
    return w


def sumset_codes(a: np.ndarray, b: np.ndarray, moduli: Sequence[int], cap: int) -> np.ndarray:
    """Sorted unique codes of ``{x + y}`` under digit-wise modular addition.

    Codes are mixed-radix integers whose digit ``i`` lives in
    ``Z/moduli[i]`` (digit 0 most significant).  Raises
    :class:`ResourceLimitError` once more than ``cap`` distinct sums appear.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return np.empty(0, dtype=np.int64)
    w = _weights(moduli)
    # per-digit decomposition of b, reused across chunks of a
    b_digits = [(b // wi) % mi for wi, mi in zip(w, moduli)]
    rows = max(1, _CHUNK // b.size)
    found: np.ndarray | None = None
    for start in range(0, a.size, rows):
        blk = a[start : start + rows]
        acc = np.zeros((blk.size, b.size), dtype=np.int64)
        for wi, mi, bd in zip(w, moduli, b_digits):
            ad = (blk // wi) % mi
            acc += ((ad[:, None] + bd[None, :]) % mi) * wi
        u = np.unique(acc)
        found = u if found is None else np.union1d(found, u)
        if found.size > cap:
            raise ResourceLimitError(f"sumset exceeds cap of {cap} elements")
    assert found is not None
    return found


def sumset_tuples(a: Sequence[tuple], b: Sequence[tuple], moduli: Sequence[int], cap: int) -> list[tuple]:
    """Tuple-based sumset for code spaces too large for int64."""
    out: set[tuple] = set()
    for x in a:
        for y in b:
            out.add(tuple((u + v) % m for u, v, m in zip(x, y, moduli)))
        if len(out) > cap:
            raise ResourceLimitError(f"sumset exceeds cap of {cap} elements")
    return sorted(out)


def _greedy(universe: int, members: Sequence[int]) -> list[int]:
    chosen = []
    left = universe
    while left:
        best, best_gain = -1, 0
        for i, m in enumerate(members):
            g = (m & left).bit_count()
            if g > best_gain:
                best, best_gain = i, g
        if best < 0:
            return []
        chosen.append(best)
        left &= ~members[best]
    return chosen


def _neighbourhoods(members: Sequence[int], elem_members: list[list[int]]) -> list[int]:
    """For each element, the union of the members containing it."""
    out = []
    for idx in elem_members:
        u = 0
        for i in idx:
            u |= members[i]
        out.append(u)
    return out


def min_cover(universe: int, members: Sequence[int], nbits: int) -> list[int]:
    """Indices of a minimum subfamily of ``members`` whose union contains ``universe``.

    Bitmask branch and bound.  Elements are branched on in increasing order
    of how many members contain them (ties by bit index).  At each node the
    members covering the branching element are restricted to what is still
    uncovered, duplicates and strictly dominated ones are dropped, and the
    rest are tried largest first.  Two lower bounds prune: the ceiling bound
    from the largest restricted member, and a packing bound counting
    remaining elements no two of which share a member.  Returns ``[]`` for
    an empty universe; the caller checks coverability beforehand.
    """
    if not universe:
        return []
    members = list(members)
    elem_members = []
    for e in range(nbits):
        bit = 1 << e
        elem_members.append([i for i, m in enumerate(members) if m & bit])
    nbh = _neighbourhoods(members, elem_members)
    order = sorted(
        (e for e in range(nbits) if (universe >> e) & 1),
        key=lambda e: (len(elem_members[e]), e),
    )
    best = _greedy(universe, members)
    best_n = len(best)
    stack: list[int] = []

    def rec(left: int) -> None:
        nonlocal best, best_n
        if not left:
            if len(stack) < best_n:
                best, best_n = list(stack), len(stack)
            return
        room = best_n - len(stack)
        if room <= 1:
            return
        maxcov = 0
        for m in members:
            c = (m & left).bit_count()
            if c > maxcov:
                maxcov = c
        if maxcov == 0 or -(-left.bit_count() // maxcov) >= room:
            return
        packed, blocked, e = 0, 0, -1
        for x in order:
            bit = 1 << x
            if left & bit:
                if e < 0:
                    e = x
                if not blocked & bit:
                    packed += 1
                    blocked |= nbh[x]
        if packed >= room:
            return
        cands: dict[int, int] = {}
        for i in elem_members[e]:
            cands.setdefault(members[i] & left, i)
        rs = sorted(cands, key=lambda r: (-r.bit_count(), cands[r]))
        for k, r in enumerate(rs):
            if any(q & r == r for q in rs[:k]):
                continue
            stack.append(cands[r])
            rec(left & ~r)
            stack.pop()

    rec(universe)
    return best
