"""Exact integer matrix routines (lists of lists of Python ints)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    """Product of an m x k and a k x n matrix. ``inner`` is needed when k == 0."""
    m = len(A)
    k = len(B) if inner is None else inner
    n = len(B[0]) if B else 0
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    row[j] += a * Bt[j]
    return out


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative entries
    and ``D[0][0] | D[1][1] | ...``.  ``ncols`` is only needed for 0-row input.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        for M in (D, U):
            rs, rd = M[src], M[dst]
            for j in range(len(rd)):
                rd[j] += q * rs[j]

    def add_col(dst, src, q):
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        clean = False
            if clean:
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t onto the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            _, i1, j1 = best
            swap_rows(t, i1)
            swap_cols(t, j1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-v for v in M[t]]
    return U, D, V


def invariant_factors(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    _, D, _ = smith_normal_form(A, ncols)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def hnf_rows(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above a pivot lie
    in ``[0, pivot)``, so the result is a canonical basis of the row lattice.
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[i0] = M[i0], M[r]
            if len(nz) == 1:
                break
            p = M[r][c]
            pr = M[r]
            for i in range(r + 1, len(M)):
                q = M[i][c] // p
                if q:
                    Mi = M[i]
                    for j in range(c, ncols):
                        Mi[j] -= q * pr[j]
        if r == len(M) or M[r][c] == 0:
            continue
        if M[r][c] < 0:
            M[r] = [-v for v in M[r]]
        p = M[r][c]
        pr = M[r]
        for i in range(r):
            q = M[i][c] // p
            if q:
                Mi = M[i]
                for j in range(c, ncols):
                    Mi[j] -= q * pr[j]
        r += 1
    return [tuple(row) for row in M[:r]]


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis (rows) of the lattice ``{x in Z^ncols : A x = 0}``."""
    m = len(A)
    aug = []
    for i in range(ncols):
        head = [A[r][i] for r in range(m)]
        tail = [int(i == j) for j in range(ncols)]
        aug.append(head + tail)
    H = hnf_rows(aug, m + ncols)
    return [row[m:] for row in H if not any(row[:m])]


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None):
    """An integer solution ``x`` of ``A x = b``, or ``None`` if there is none."""
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    U, D, V = smith_normal_form(A, n)
    c = matvec(U, b)
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(V, y)


def rational_inverse(A: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [v / p for v in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [row[n:] for row in M]


def integer_inverse(A: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular matrix."""
    inv = rational_inverse(A)
    out = []
    for row in inv:
        if any(v.denominator != 1 for v in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in row])
    return out


def determinant(A: Sequence[Sequence[int]]) -> int:
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(v) for v in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return int(det)
