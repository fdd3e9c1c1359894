"""Exact integer linear algebra: Smith normal form with transforms, lattices,
and solving linear systems over finitely generated abelian groups.

Matrices are lists of lists of Python ints (row major).  Nothing here uses
floating point.
"""
from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in a]


def shape(a: Sequence[Sequence[int]], cols: int | None = None) -> tuple[int, int]:
    if len(a) == 0:
        return 0, (cols or 0)
    return len(a), len(a[0])


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    m = len(a)
    n = len(b[0]) if b else 0
    k = len(b)
    out = zeros(m, n)
    for i in range(m):
        row = a[i]
        oi = out[i]
        for t in range(k):
            v = row[t]
            if v:
                bt = b[t]
                for j in range(n):
                    oi[j] += v * bt[j]
    return out


def matvec(a: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(r * v for r, v in zip(row, x)) for row in a]


def transpose(a: Sequence[Sequence[int]], rows: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(rows or 0)]
    return [list(col) for col in zip(*a)]


def hstack(blocks: Sequence[Matrix], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for b in blocks:
        for i in range(rows):
            out[i].extend(b[i] if b else [])
    return out


def smith_normal_form(a: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None):
    """Return ``(S, U, V)`` with ``U @ A @ V == S``.

    ``U`` and ``V`` are unimodular; ``S`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ... | d_r`` followed by zeros.
    """
    m = len(a) if rows is None else rows
    n = (len(a[0]) if a else 0) if cols is None else cols
    s = copy(a) if m and n else zeros(m, n)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            sd, ss = s[dst], s[src]
            for j in range(n):
                sd[j] += c * ss[j]
            ud, us = u[dst], u[src]
            for j in range(m):
                ud[j] += c * us[j]

    def add_col(dst, src, c):
        if c:
            for row in s:
                row[dst] += c * row[src]
            for row in v:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = s[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            p = s[t][t]
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    if s[i][t]:
                        done = False
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    if s[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block by the pivot
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if s[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest entry of row/column t onto the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if s[i][t] and abs(s[i][t]) < best[0]:
                    best = (abs(s[i][t]), i, t)
            for j in range(t + 1, n):
                if s[t][j] and abs(s[t][j]) < best[0]:
                    best = (abs(s[t][j]), t, j)
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def diagonal(s: Matrix) -> list[int]:
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def rank_of(s: Matrix) -> int:
    return sum(1 for d in diagonal(s) if d)


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    s, _, _ = smith_normal_form(a)
    return [d for d in diagonal(s) if d]


def inverse_unimodular(u: Matrix) -> Matrix:
    """Inverse of a unimodular matrix, by exact Gauss-Jordan over the integers."""
    n = len(u)
    s, left, right = smith_normal_form(u)
    # left @ u @ right = I  =>  u^{-1} = right @ left
    assert all(s[i][i] == 1 for i in range(n)), "matrix is not unimodular"
    return matmul(right, left)


def lattice_basis(gens: Matrix, dim: int) -> Matrix:
    """A basis (as columns of a ``dim x r`` matrix) of the lattice spanned by
    the columns of ``gens``."""
    if not gens or not gens[0]:
        return [[] for _ in range(dim)]
    s, u, _ = smith_normal_form(gens, dim, len(gens[0]))
    uinv = inverse_unimodular(u)
    d = diagonal(s)
    r = sum(1 for x in d if x)
    return [[uinv[i][j] * d[j] for j in range(r)] for i in range(dim)]


def kernel_basis(a: Matrix, rows: int, cols: int) -> Matrix:
    """Columns spanning ``{x in Z^cols : a x = 0}`` (a basis)."""
    if cols == 0:
        return []
    if rows == 0:
        return identity(cols)
    s, _, v = smith_normal_form(a, rows, cols)
    r = rank_of(s)
    return [[v[i][j] for j in range(r, cols)] for i in range(cols)]


def solve_integer(a: Matrix, b: Sequence[int], rows: int, cols: int) -> list[int] | None:
    """One integer solution of ``a x = b`` or ``None``."""
    if cols == 0:
        return [] if all(x == 0 for x in b) else None
    s, u, v = smith_normal_form(a, rows, cols)
    ub = matvec(u, b)
    y = [0] * cols
    for i in range(rows):
        d = s[i][i] if i < cols else 0
        if d:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
        elif ub[i]:
            return None
    return matvec(v, y)


def relation_matrix(moduli: Sequence[int]) -> Matrix:
    """Columns ``d_i e_i`` for every nonzero modulus."""
    k = len(moduli)
    cols = [i for i, d in enumerate(moduli) if d]
    return [[moduli[i] if i == j else 0 for j in cols] for i in range(k)]


def reduce_vec(x: Sequence[int], moduli: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(v) % d if d else int(v) for v, d in zip(x, moduli))


def solve_modular(a: Matrix, b: Sequence[int], src_moduli: Sequence[int],
                  dst_moduli: Sequence[int]) -> list[int] | None:
    """Solve ``a x == b`` in ``prod Z/dst_moduli`` for ``x`` in ``prod Z/src_moduli``.

    A modulus of 0 stands for a free summand.  Returns a reduced solution or
    ``None``.
    """
    rows, cols = len(dst_moduli), len(src_moduli)
    rel = relation_matrix(dst_moduli)
    aug = hstack([a if cols else [[] for _ in range(rows)], rel], rows)
    width = cols + (len(rel[0]) if rel and rel[0] else 0)
    sol = solve_integer(aug, list(b), rows, width)
    if sol is None:
        return None
    return list(reduce_vec(sol[:cols], src_moduli))


def kernel_modular(a: Matrix, src_moduli: Sequence[int], dst_moduli: Sequence[int]) -> Matrix:
    """Generators (columns) of the kernel of ``a`` as a map between the groups."""
    rows, cols = len(dst_moduli), len(src_moduli)
    rel = relation_matrix(dst_moduli)
    aug = hstack([a if cols else [[] for _ in range(rows)], rel], rows)
    width = cols + (len(rel[0]) if rel and rel[0] else 0)
    k = kernel_basis(aug, rows, width)
    return [row for row in k[:cols]]
