"""Exact dense linear algebra over the rationals and prime fields.

Everything here is deterministic: elimination always pivots on the first
nonzero entry, scanning rows top-down and columns left to right, so that
kernels, complements and quotients come out identical on every run.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence


class Field:
    """The rationals (``p == 0``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p < 0 or p == 1:
            raise ValueError(f"invalid characteristic {p}")
        if p > 2**61:
            raise ValueError("prime fields are limited to p <= 2**61")
        self.p = p

    def __repr__(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    @property
    def order(self) -> int | None:
        return self.p or None

    def __call__(self, x):
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("division by zero in field")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    def elements(self) -> range:
        if not self.p:
            raise ValueError("QQ is infinite")
        return range(self.p)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Matrix:
    """Immutable dense matrix over a :class:`Field`.

    ``rows`` is a tuple of tuples; shape is stored separately so that
    ``0 x n`` and ``n x 0`` matrices keep their dimensions.
    """

    __slots__ = ("field", "nrows", "ncols", "rows", "_hash")

    def __init__(self, field: Field, rows: Iterable[Sequence], ncols: int | None = None, *, _trusted=False):
        self.field = field
        if _trusted:
            rows = tuple(rows)
        else:
            rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> "Matrix":
        z = field(0)
        return cls(field, (tuple(z for _ in range(n)) for _ in range(m)), n, _trusted=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, z = field(1), field(0)
        return cls(field, (tuple(one if i == j else z for j in range(n)) for i in range(n)), n, _trusted=True)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls(field, (tuple(c[i] for c in cols) for i in range(nrows)), len(cols), _trusted=True)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {[list(r) for r in self.rows]}, shape={self.shape})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.shape, self.rows))
        return self._hash

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    # arithmetic -----------------------------------------------------------
    def _norm(self, x):
        p = self.field.p
        return x % p if p else x

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        p = self.field.p
        if p:
            rows = (tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        else:
            rows = (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix(self.field, rows, self.ncols, _trusted=True)

    def __neg__(self) -> "Matrix":
        p = self.field.p
        if p:
            rows = (tuple(-a % p for a in r) for r in self.rows)
        else:
            rows = (tuple(-a for a in r) for r in self.rows)
        return Matrix(self.field, rows, self.ncols, _trusted=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        p = self.field.p
        if p:
            rows = (tuple(a * c % p for a in r) for r in self.rows)
        else:
            rows = (tuple(a * c for a in r) for r in self.rows)
        return Matrix(self.field, rows, self.ncols, _trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.p
        cols = other.columns()
        if p:
            rows = (tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows)
        else:
            rows = (tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.rows)
        return Matrix(self.field, rows, other.ncols, _trusted=True)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.columns(), self.nrows, _trusted=True)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, (tuple(self.rows[i][j] for j in cols) for i in rows), len(cols), _trusted=True)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return Matrix(self.field, (a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols, _trusted=True)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("vstack column mismatch")
        return Matrix(self.field, self.rows + other.rows, self.ncols, _trusted=True)

    def change_field(self, field: Field) -> "Matrix":
        """Reduce (or lift, for 0/1 data) the entries into ``field``."""
        return Matrix(field, self.rows, self.ncols)

    # elimination-based queries -------------------------------------------
    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        rows, pivots = _rref(self.field, [list(r) for r in self.rows], self.ncols)
        return Matrix(self.field, (tuple(r) for r in rows), self.ncols, _trusted=True), pivots

    def rank(self) -> int:
        return rank(self)


def _check_same(a: Matrix, b: Matrix) -> None:
    if a.field != b.field or a.shape != b.shape:
        raise ValueError(f"incompatible matrices {a.shape}/{a.field} and {b.shape}/{b.field}")


def _rref(field: Field, rows: list[list], ncols: int) -> tuple[list[list], tuple[int, ...]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    p = field.p
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        if p:
            rows[r] = [x * inv % p for x in rows[r]]
        else:
            rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    if p:
                        rows[i] = [(a - f * b) % p for a, b in zip(ri, pr)]
                    else:
                        rows[i] = [a - f * b for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows, tuple(pivots)


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        if den == 1:
            out.append([x.numerator for x in r])
        else:
            out.append([x.numerator * (den // x.denominator) for x in r])
    return out


def _rank_fraction_free(rows: list[list[int]], ncols: int) -> int:
    """Bareiss elimination on integer rows; exact and free of Fractions.

    Only the active block is kept: the pivot row and column are dropped
    after each step, since Bareiss never looks at them again.
    """
    active = [r for r in rows if any(r)]
    r = 0
    prev = 1
    for _ in range(ncols):
        if not active:
            break
        piv = next((i for i, row in enumerate(active) if row[0]), None)
        if piv is None:
            active = [row[1:] for row in active]
            continue
        pr = active.pop(piv)
        a, tail = pr[0], pr[1:]
        nxt = []
        for row in active:
            f = row[0]
            if f:
                new = [(a * x - f * y) // prev for x, y in zip(row[1:], tail)]
            elif a == 1 and prev == 1:
                new = row[1:]
            else:
                new = [a * x // prev for x in row[1:]]
            if any(new):
                nxt.append(new)
        active = nxt
        prev = a
        r += 1
    return r


def _rank_sparse(rows, p: int = 0) -> int:
    """Incremental echelon form on dict rows; cheap when rows have few nonzeros.

    Over QQ the rows are kept integral and primitive instead of normalised.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        if not p:
            den = 1
            for x in row.values():
                d = x.denominator
                if d != 1:
                    den = den * d // gcd(den, d)
            row = {j: x.numerator * (den // x.denominator) for j, x in row.items()}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                if p:
                    inv = pow(row[c], -1, p)
                    row = {j: x * inv % p for j, x in row.items()}
                pivots[c] = row
                break
            f = row[c]
            if p:
                for j, y in prow.items():
                    v = (row.get(j, 0) - f * y) % p
                    if v:
                        row[j] = v
                    else:
                        row.pop(j, None)
            else:
                a = prow[c]
                g = gcd(a, f)
                a, f = a // g, f // g
                new = {j: a * x for j, x in row.items()}
                for j, y in prow.items():
                    v = new.get(j, 0) - f * y
                    if v:
                        new[j] = v
                    else:
                        new.pop(j, None)
                content = 0
                for x in new.values():
                    content = gcd(content, x)
                    if content == 1:
                        break
                row = {j: x // content for j, x in new.items()} if content > 1 else new
    return len(pivots)


def _sparse_rows(A: Matrix) -> list[dict] | None:
    """Rows as {column: value} if at most a quarter of the entries are nonzero."""
    out = [{j: x for j, x in enumerate(r) if x} for r in A.rows]
    if 4 * sum(map(len, out)) < A.nrows * A.ncols:
        return out
    return None


def rank(A: Matrix) -> int:
    if A.nrows == 0 or A.ncols == 0:
        return 0
    sparse = _sparse_rows(A)
    if sparse is not None:
        return _rank_sparse(sparse, A.field.p)
    if A.field.p == 0:
        return _rank_fraction_free(_integer_rows(A.rows), A.ncols)
    _, piv = _rref(A.field, [list(r) for r in A.rows], A.ncols)
    return len(piv)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of ``{x : A x = 0}`` (free-variable convention)."""
    F = A.field
    n = A.ncols
    rows, piv = _rref(F, [list(r) for r in A.rows], n)
    free = [j for j in range(n) if j not in set(piv)]
    zero, one = F(0), F(1)
    p = F.p
    cols = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(piv):
            x = rows[i][f]
            v[pc] = (-x % p) if p else -x
        cols.append(v)
    return Matrix.from_columns(F, cols, n)


def left_kernel_basis(A: Matrix) -> Matrix:
    """Rows form a basis of ``{y : y A = 0}``."""
    return kernel_basis(A.T).T


def column_space_basis(A: Matrix) -> Matrix:
    """The pivot columns of ``A``: a basis of its image, as columns."""
    _, piv = _rref(A.field, [list(r) for r in A.rows], A.ncols)
    return A.submatrix(range(A.nrows), piv)


def solve(A: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``A x = b`` (free variables set to 0), or ``None``."""
    if A.nrows != b.nrows:
        raise ValueError(f"shape mismatch: A is {A.shape}, b is {b.shape}")
    F = A.field
    n = A.ncols
    aug = [list(r) + list(s) for r, s in zip(A.rows, b.rows)]
    rows, piv = _rref(F, aug, n + b.ncols)
    if any(c >= n for c in piv):
        return None
    zero = F(0)
    x = [[zero] * b.ncols for _ in range(n)]
    for i, c in enumerate(piv):
        x[c] = rows[i][n:]
    return Matrix(F, (tuple(r) for r in x), b.ncols, _trusted=True)


def determinant(A: Matrix):
    if A.nrows != A.ncols:
        raise ValueError("determinant of non-square matrix")
    F = A.field
    p = F.p
    rows = [list(r) for r in A.rows]
    n = A.nrows
    det = F(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return F(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = F.inv(rows[c][c])
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
                if p:
                    rows[i] = [a % p for a in rows[i]]
    return det % p if p else det


def inverse(A: Matrix) -> Matrix:
    n = A.nrows
    sol = solve(A, Matrix.identity(A.field, n))
    if sol is None or rank(A) != n:
        raise ZeroDivisionError("matrix is singular")
    return sol


# --- rank stratification -----------------------------------------------------

class RankStratum:
    """Rank ``r`` with the lexicographically first invertible ``r x r`` minor.

    Indices are 1-based, matching the usual matrix-minor notation.
    """

    __slots__ = ("r", "I", "J")

    def __init__(self, r: int, I: tuple[int, ...], J: tuple[int, ...]):
        self.r, self.I, self.J = r, I, J

    def __eq__(self, other) -> bool:
        return isinstance(other, RankStratum) and (self.r, self.I, self.J) == (other.r, other.I, other.J)

    def __hash__(self) -> int:
        return hash((self.r, self.I, self.J))

    def __repr__(self) -> str:
        return f"RankStratum(r={self.r}, I={self.I}, J={self.J})"


def _greedy_independent(vectors: Sequence[Sequence], field: Field) -> list[int]:
    chosen: list[int] = []
    basis: list[list] = []
    for idx, v in enumerate(vectors):
        trial = basis + [list(v)]
        _, piv = _rref(field, [list(r) for r in trial], len(v))
        if len(piv) > len(basis):
            basis = trial
            chosen.append(idx)
    return chosen


def matrix_stratum(A: Matrix) -> RankStratum:
    """The stratum ``(r, I, J)`` of ``A``.

    Greedy row selection yields the lexicographically least independent row
    set (matroid greedy); the least column set is then greedy on ``A[I, :]``.
    """
    if A.nrows == 0 or A.ncols == 0:
        return RankStratum(0, (), ())
    I = _greedy_independent(A.rows, A.field)
    if not I:
        return RankStratum(0, (), ())
    sub = A.submatrix(I, range(A.ncols))
    J = _greedy_independent(sub.columns(), A.field)
    return RankStratum(len(I), tuple(i + 1 for i in I), tuple(j + 1 for j in J))


def brute_force_stratum(A: Matrix) -> RankStratum:
    """Enumerate all minors, largest size first; reference oracle for :func:`matrix_stratum`."""
    for r in range(min(A.nrows, A.ncols), 0, -1):
        for I in combinations(range(A.nrows), r):
            for J in combinations(range(A.ncols), r):
                if determinant(A.submatrix(I, J)):
                    return RankStratum(r, tuple(i + 1 for i in I), tuple(j + 1 for j in J))
    return RankStratum(0, (), ())


def _front_permutation(idx: Sequence[int], n: int) -> list[int]:
    """Positions after the transposition sequence (1,i_1), ..., (r,i_r)."""
    order = list(range(n))
    for k, i in enumerate(idx):
        order[k], order[i - 1] = order[i - 1], order[k]
    return order


def _perm_matrix(field: Field, order: Sequence[int]) -> Matrix:
    """P with (P x)_k = x_{order[k]}."""
    n = len(order)
    one, z = field(1), field(0)
    return Matrix(field, (tuple(one if j == order[k] else z for j in range(n)) for k in range(n)), n, _trusted=True)


def _blocks(A: Matrix, st: RankStratum):
    F = A.field
    P_I = _perm_matrix(F, _front_permutation(st.I, A.nrows))
    P_J = _perm_matrix(F, _front_permutation(st.J, A.ncols)).T
    B = P_I @ A @ P_J
    r = st.r
    A1 = B.submatrix(range(r), range(r))
    A2 = B.submatrix(range(r), range(r, B.ncols))
    A3 = B.submatrix(range(r, B.nrows), range(r))
    return P_I, P_J, A1, A2, A3


def stratum_kernel(A: Matrix) -> Matrix:
    """Kernel columns ``P_J [-A1^{-1} A2 ; I]`` built from the stratum blocks."""
    st = matrix_stratum(A)
    F = A.field
    d, r = A.ncols, st.r
    if r == 0:
        return Matrix.identity(F, d)
    P_I, P_J, A1, A2, _ = _blocks(A, st)
    top = -(inverse(A1) @ A2)
    return P_J @ top.vstack(Matrix.identity(F, d - r))


def stratum_cokernel(A: Matrix) -> Matrix:
    """Cokernel projection rows ``(-A3 A1^{-1}, I) P_I`` from the stratum blocks."""
    st = matrix_stratum(A)
    F = A.field
    dp, r = A.nrows, st.r
    if r == 0:
        return Matrix.identity(F, dp)
    P_I, P_J, A1, _, A3 = _blocks(A, st)
    left = -(A3 @ inverse(A1))
    return left.hstack(Matrix.identity(F, dp - r)) @ P_I


def complement_columns(B: Matrix) -> list[int]:
    """Indices of standard basis vectors completing the column span of ``B``.

    Uses the pivot convention on ``[B | I]``, so the choice is deterministic.
    """
    n = B.nrows
    aug = B.hstack(Matrix.identity(B.field, n))
    _, piv = aug.rref()
    return [c - B.ncols for c in piv if c >= B.ncols]


def coordinates(B: Matrix, v: Matrix) -> Matrix | None:
    """Solve ``B c = v`` for column-independent ``B``; ``None`` if outside the span."""
    return solve(B, v)
