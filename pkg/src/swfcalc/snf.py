"""Smith normal form over the integers.

Matrices are lists of rows of Python ints.  ``smith_normal_form`` returns
unimodular ``U`` and ``V`` with ``U @ A @ V == D`` where ``D`` is diagonal and
each nonzero diagonal entry divides the next.
"""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)] for row in a]


def transpose(a: Matrix, rows: int | None = None, cols: int | None = None) -> Matrix:
    r = len(a) if rows is None else rows
    c = (len(a[0]) if a else 0) if cols is None else cols
    return [[a[i][j] for i in range(r)] for j in range(c)]


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]  # nonzero invariant factors, positive, d_i | d_{i+1}
    U: Matrix
    V: Matrix
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _swap_rows(m: Matrix, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: Matrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(a: Matrix, rows: int | None = None, cols: int | None = None) -> SmithForm:
    """Smith form of ``a`` (``rows``/``cols`` are needed only for empty shapes)."""
    r = len(a) if rows is None else rows
    c = (len(a[0]) if a else 0) if cols is None else cols
    m = [list(map(int, row)) for row in a] if r else []
    U = identity(r)
    V = identity(c)
    t = 0
    while t < min(r, c):
        pivot = None
        for i in range(t, r):
            for j in range(t, c):
                if m[i][j] and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        _swap_rows(m, t, pivot[0])
        _swap_rows(U, t, pivot[0])
        _swap_cols(m, t, pivot[1])
        _swap_cols(V, t, pivot[1])
        while True:
            done = True
            p = m[t][t]
            for i in range(t + 1, r):
                q = m[i][t] // p
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, c):
                q = m[t][j] // p
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if m[t][j]:
                    done = False
            if done:
                # the pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if m[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                i = bad[0]
                m[t] = [x + y for x, y in zip(m[t], m[i])]
                U[t] = [x + y for x, y in zip(U[t], U[i])]
                continue
            # a smaller remainder appeared in the pivot row or column; move it in
            best = (t, t)
            for i in range(t, r):
                if m[i][t] and abs(m[i][t]) < abs(m[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, c):
                if m[t][j] and abs(m[t][j]) < abs(m[best[0]][best[1]]):
                    best = (t, j)
            _swap_rows(m, t, best[0])
            _swap_rows(U, t, best[0])
            _swap_cols(m, t, best[1])
            _swap_cols(V, t, best[1])
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = tuple(m[i][i] for i in range(t))
    return SmithForm(diag, U, V, r, c)


def invariant_factors(a: Matrix, rows: int | None = None, cols: int | None = None) -> tuple[int, ...]:
    return smith_normal_form(a, rows, cols).diagonal


def rank(a: Matrix, rows: int | None = None, cols: int | None = None) -> int:
    return smith_normal_form(a, rows, cols).rank
