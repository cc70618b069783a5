"""Exact linear algebra over Q on plain nested lists of Fractions.

Matrices are lists of rows.  Subspaces of Q^n are stored as n x k matrices
whose columns form a basis.  Every routine returns fresh lists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list  # list[list[Fraction]]


def frac_matrix(rows: Iterable[Iterable], ncols: int | None = None) -> Matrix:
    out = [[Fraction(x) for x in r] for r in rows]
    if ncols is not None and out and any(len(r) != ncols for r in out):
        raise ValueError("ragged matrix")
    return out


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def shape(m: Matrix, ncols: int | None = None) -> tuple:
    """Shape of ``m``; an empty row list needs ``ncols`` to know its width."""
    if not m:
        return (0, ncols or 0)
    return (len(m), len(m[0]))


def transpose(m: Matrix, ncols: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, bcols: int | None = None) -> Matrix:
    """Product; ``bcols`` is needed only when ``b`` has no rows."""
    n = len(a)
    k = len(b) if inner is None else inner
    if b:
        m = len(b[0])
    else:
        m = bcols if bcols is not None else 0
    if a and len(a[0]) != k:
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {k}x{m}")
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        row = a[i]
        orow = out[i]
        for t in range(k):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(m):
                    y = brow[j]
                    if y:
                        orow[j] += x * y
    return out


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in r] for r in a]


def is_zero(m: Matrix) -> bool:
    return all(not x for r in m for x in r)


def rref(m: Matrix) -> tuple:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots = []
    pr = 0
    for c in range(cols):
        if pr >= rows:
            break
        piv = next((r for r in range(pr, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[pr], a[piv] = a[piv], a[pr]
        inv = 1 / a[pr][c]
        a[pr] = [x * inv for x in a[pr]]
        for r in range(rows):
            if r != pr and a[r][c]:
                f = a[r][c]
                prow = a[pr]
                a[r] = [x - f * y for x, y in zip(a[r], prow)]
        pivots.append(c)
        pr += 1
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {v : m v = 0} as the columns of the returned matrix.

    The basis is the standard one read off the RREF: one vector per free
    column, with a 1 in that column.
    """
    n = len(m[0]) if m else (ncols or 0)
    if not m:
        return identity(n)
    r, pivots = rref(m)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(v)
    return transpose(basis, 0) if basis else [[] for _ in range(n)]


def ncols_of(basis: Matrix) -> int:
    return len(basis[0]) if basis and basis[0] is not None else 0


def columns(m: Matrix) -> list:
    if not m:
        return []
    return [list(c) for c in zip(*m)]


def from_columns(cols: Sequence[Sequence], n: int) -> Matrix:
    if not cols:
        return [[] for _ in range(n)]
    return [[Fraction(c[i]) for c in cols] for i in range(n)]


def column_space(m: Matrix) -> Matrix:
    """RREF basis of the column space (rows of rref(m^T)), as columns."""
    n = len(m)
    cols = columns(m)
    if not cols:
        return [[] for _ in range(n)]
    r, piv = rref(cols)
    return from_columns(r[: len(piv)], n)


def left_nullspace(m: Matrix, nrows: int | None = None) -> Matrix:
    """Rows p (returned as a matrix of rows) with p m = 0, in RREF form."""
    n = len(m) if m else (nrows or 0)
    mt = transpose(m, n) if m else []
    if not mt or not mt[0]:
        return identity(n)
    ns = nullspace(mt, n)
    basis = columns(ns)
    if not basis:
        return []
    r, piv = rref(basis)
    return r[: len(piv)]


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(r) + identity(n)[i] for i, r in enumerate(m)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def det(m: Matrix) -> Fraction:
    n = len(m)
    a = [list(r) for r in m]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


def solve_in_span(basis: Matrix, v: Sequence) -> list | None:
    """Coordinates of ``v`` in the column basis ``basis``, or None if outside."""
    n = len(v)
    k = ncols_of(basis)
    aug = [list(basis[i]) + [Fraction(v[i])] for i in range(n)]
    r, piv = rref(aug)
    if k in piv:
        return None
    coords = [Fraction(0)] * k
    for i, p in enumerate(piv):
        coords[p] = r[i][k]
    return coords


def span_dim(basis: Matrix) -> int:
    if not basis or not basis[0]:
        return 0
    return rank(basis)


def contains(big: Matrix, small: Matrix) -> bool:
    """Column span of ``small`` lies inside the column span of ``big``."""
    if ncols_of(small) == 0:
        return True
    if ncols_of(big) == 0:
        return is_zero(small)
    return rank(hstack(big, small)) == rank(big)


def same_span(a: Matrix, b: Matrix) -> bool:
    return span_dim(a) == span_dim(b) and contains(a, b)


def hstack(*mats: Matrix) -> Matrix:
    n = len(mats[0])
    return [sum((list(m[i]) for m in mats), []) for i in range(n)]


def vstack(*mats: Matrix) -> Matrix:
    out = []
    for m in mats:
        out.extend(list(r) for r in m)
    return out


def intersect(a: Matrix, b: Matrix) -> Matrix:
    """Basis (columns) of span(a) ∩ span(b) inside Q^n."""
    n = len(a)
    ka, kb = ncols_of(a), ncols_of(b)
    if ka == 0 or kb == 0:
        return [[] for _ in range(n)]
    # solve a x = b y
    system = hstack(a, scale(b, -1))
    ns = nullspace(system)
    vecs = [matmul(a, [[c[i]] for i in range(ka)]) for c in columns(ns)]
    if not vecs:
        return [[] for _ in range(n)]
    return column_space(hstack(*vecs))


def adapted_basis(chain: Sequence[Matrix], n: int) -> Matrix:
    """Invertible n x n matrix whose first dim(V_l) columns span V_l.

    ``chain`` is a nested sequence of subspaces (column bases) of Q^n.  The
    columns are taken greedily, level by level, from the RREF basis of each
    level and then from the standard basis, keeping a vector only when it
    raises the rank.  For coordinate flags this returns the identity.
    """
    chosen: list = []
    current_rank = 0

    def offer(vec):
        nonlocal current_rank
        trial = chosen + [vec]
        rk = rank(trial)
        if rk > current_rank:
            chosen.append(vec)
            current_rank = rk

    for level in list(chain) + [identity(n)]:
        for vec in columns(column_space(level)):
            if current_rank == n:
                break
            offer(vec)
    return from_columns(chosen, n)


def block(m: Matrix, rows: range, cols: range) -> Matrix:
    return [[m[r][c] for c in cols] for r in rows]


def coordinate_subspace(n: int, k: int) -> Matrix:
    """Span of the first k standard basis vectors of Q^n."""
    return [[Fraction(int(i == j)) for j in range(k)] for i in range(n)]


def mat_str(m: Matrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in m) + "]"
