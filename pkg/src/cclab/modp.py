"""Small, fast linear algebra over F_p on plain lists of ints.

Vectors are tuples; matrices are tuples of row tuples.  Subspaces are
stored by their reduced row echelon basis, which makes them canonical.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

Vec = tuple
Mat = tuple


def rref(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    a = [list(r) for r in rows]
    piv: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if a[i][c] % p), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        row = a[r]
        inv = pow(row[c], -1, p)
        row = [x * inv % p for x in row]
        a[r] = row
        for i in range(nrows):
            if i != r:
                f = a[i][c] % p
                if f:
                    ai = a[i]
                    a[i] = [(x - f * y) % p for x, y in zip(ai, row)]
        piv.append(c)
        r += 1
    return a[:r], piv


def span(vectors: Sequence[Sequence[int]], n: int, p: int) -> Mat:
    """Canonical (RREF) basis of the span of ``vectors`` in F_p^n."""
    if not vectors:
        return ()
    rows, _ = rref(vectors, n, p)
    return tuple(tuple(r) for r in rows)


def null_space(rows: Sequence[Sequence[int]], n: int, p: int) -> list[tuple[int, ...]]:
    """Basis of ``{v : A v = 0}`` for ``A`` given by rows."""
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    red, piv = rref(rows, n, p)
    pivset = set(piv)
    out = []
    for f in range(n):
        if f in pivset:
            continue
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = -red[i][f] % p
        out.append(tuple(v))
    return out


def mat_vec(A: Mat, v: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in A)


def image(A: Mat, basis: Sequence[Sequence[int]], nrows: int, p: int) -> Mat:
    return span([mat_vec(A, v, p) for v in basis], nrows, p)


def annihilator(basis: Sequence[Sequence[int]], n: int, p: int) -> list[tuple[int, ...]]:
    """Functionals (as rows) vanishing exactly on the span of ``basis``."""
    return null_space(basis, n, p)


def annihilator_rref(basis: Sequence[Sequence[int]], n: int, p: int) -> list[tuple[int, ...]]:
    """Annihilator of a subspace already given by its RREF basis (no elimination)."""
    piv = []
    for row in basis:
        piv.append(next(i for i, x in enumerate(row) if x))
    pivset = set(piv)
    out = []
    for f in range(n):
        if f in pivset:
            continue
        h = [0] * n
        h[f] = 1
        for r, c in enumerate(piv):
            x = basis[r][f]
            if x:
                h[c] = -x % p
        out.append(tuple(h))
    return out


def preimage(A: Mat, ann: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Rows ``h A`` for each functional ``h``: their joint kernel is ``A^{-1}(U)``."""
    if not A:
        return []
    ncols = len(A[0])
    return [[sum(h[k] * A[k][j] for k in range(len(A))) % p for j in range(ncols)] for h in ann]


def subspaces(m: int, j: int, p: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All j-dimensional subspaces of F_p^m, each as its RREF basis."""
    if j == 0:
        yield ()
        return
    for piv in combinations(range(m), j):
        # free positions: row r, columns c > piv[r] that are not pivots
        pivset = set(piv)
        free = [(r, c) for r in range(j) for c in range(piv[r] + 1, m) if c not in pivset]
        base = [[0] * m for _ in range(j)]
        for r, c in enumerate(piv):
            base[r][c] = 1
        for vals in product(range(p), repeat=len(free)):
            rows = [row[:] for row in base]
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rank(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    if not rows or not ncols:
        return 0
    return len(rref(rows, ncols, p)[1])
