"""Exact integer linear algebra: Hermite and Smith normal forms, kernels.

Matrices are lists of rows of Python ints.  Lattices are always row lattices:
the Z-span of the rows.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def _row_sub(a: list[int], b: list[int], q: int) -> None:
    if q:
        for k in range(len(a)):
            a[k] -= q * b[k]


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row-style Hermite normal form of the Z-span of ``rows``.

    The result is echelon, pivots positive, and entries above each pivot are
    reduced into ``[0, pivot)``.  Zero rows are dropped, so the output is a
    basis and is unique for the lattice.

    Rows are inserted one at a time.  Once the partial basis has full rank
    with determinant D, the lattice contains D*Z^n, so later arithmetic is
    done modulo D; D only shrinks, so all discarded multiples stay inside
    the final span.
    """
    rows = [list(r) for r in rows]
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    piv: list[list[int] | None] = [None] * n
    npiv = 0
    D = 0
    for v in rows:
        if D:
            v = [x % D for x in v]
        for i in range(n):
            a = v[i]
            if not a:
                continue
            h = piv[i]
            if h is None:
                if a < 0:
                    v = [-x for x in v]
                piv[i] = v
                npiv += 1
                if npiv == n:
                    D = _diag_prod(piv)
                    piv = [_mod_row(r, D) for r in piv]
                break
            b = h[i]
            g, s_, t_ = _xgcd(b, a)
            new_h = [s_ * x + t_ * y for x, y in zip(h, v)]
            v = [(b // g) * y - (a // g) * x for x, y in zip(h, v)]
            if D:
                D = D // b * g
                new_h = _mod_row(new_h, D, i)
                v = [x % D for x in v]
            piv[i] = new_h
    out = [r for r in piv if r is not None]
    # reduce above the pivots
    for k in range(len(out)):
        r = out[k]
        j = next(c for c, x in enumerate(r) if x)
        p = r[j]
        for m in range(k):
            q = out[m][j] // p
            if q:
                _row_sub(out[m], r, q)
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g = gcd(a, b) > 0 with s*a + t*b = g; a > 0 assumed."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    x, y = a, b
    while y:
        q = x // y
        x, y = y, x - q * y
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def _diag_prod(piv) -> int:
    D = 1
    for i, r in enumerate(piv):
        D *= r[i]
    return D


def _mod_row(r: list[int], D: int, start: int | None = None) -> list[int]:
    """Reduce the entries right of the pivot modulo D (pivot kept)."""
    if start is None:
        start = next(c for c, x in enumerate(r) if x)
    return r[:start + 1] + [x % D for x in r[start + 1:]]


def hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int | None = None
                       ) -> tuple[Matrix, Matrix]:
    """Return ``(H, kernel)`` where ``H`` is the HNF of the row span and
    ``kernel`` is an HNF basis of ``{c : c * rows = 0}``."""
    A = [list(r) for r in rows]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    # Track the transform by carrying an identity block along.
    T = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pr = 0
    for col in range(n):
        if pr >= m:
            break
        while True:
            nz = [i for i in range(pr, m) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            if piv != pr:
                A[pr], A[piv] = A[piv], A[pr]
                T[pr], T[piv] = T[piv], T[pr]
            p = A[pr][col]
            done = True
            for i in range(pr + 1, m):
                if A[i][col]:
                    q = A[i][col] // p
                    _row_sub(A[i], A[pr], q)
                    _row_sub(T[i], T[pr], q)
                    if A[i][col]:
                        done = False
            if done:
                break
        if pr < m and A[pr][col] != 0:
            if A[pr][col] < 0:
                A[pr] = [-x for x in A[pr]]
                T[pr] = [-x for x in T[pr]]
            p = A[pr][col]
            for i in range(pr):
                q = A[i][col] // p
                _row_sub(A[i], A[pr], q)
                _row_sub(T[i], T[pr], q)
            pr += 1
    kernel = hnf(T[pr:], m) if pr < m else []
    return A[:pr], kernel


def left_kernel(rows: Sequence[Sequence[int]]) -> Matrix:
    """Z-basis (HNF) of ``{c in Z^m : c * rows = 0}``."""
    return hnf_with_transform(rows)[1]


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction-free)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return ``(diag, U, V)`` with ``U * M * V`` diagonal, ``diag`` its
    diagonal (length ``min(rows, cols)``) forming a divisibility chain of
    non-negative integers.  ``U`` and ``V`` are unimodular."""
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        _row_sub(A[dst], A[src], q)
        _row_sub(U[dst], U[src], q)

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for r in A:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            for k in range(n):
                A[t][k] += A[bad[0]][k]
            for k in range(m):
                U[t][k] += U[bad[0]][k]
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    diag = [A[i][i] for i in range(min(m, n))]
    return diag, U, V


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vec_mat(v: Sequence, A: Sequence[Sequence]) -> list:
    n = len(A[0]) if A else 0
    out = [0] * n
    for c, row in zip(v, A):
        if c:
            for j in range(n):
                out[j] += c * row[j]
    return out


def mat_inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def in_lattice(v: Sequence[int], H: Sequence[Sequence[int]]) -> bool:
    """Membership of an integer vector in the row lattice of an HNF basis."""
    w = list(v)
    r = 0
    for row in H:
        piv = next(j for j, x in enumerate(row) if x)
        for j in range(r, piv):
            if w[j]:
                return False
        if w[piv] % row[piv]:
            return False
        _row_sub(w, list(row), w[piv] // row[piv])
        r = piv + 1
    return not any(w)


def content(rows: Sequence[Sequence[int]]) -> int:
    g = 0
    for r in rows:
        for x in r:
            g = gcd(g, x)
    return g
