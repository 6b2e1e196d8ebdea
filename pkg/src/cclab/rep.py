"""Quiver representations, morphisms and the standard constructions on them."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .linalg import (
    QQ,
    Field,
    Matrix,
    column_space_basis,
    complement_columns,
    kernel_basis,
    left_kernel_basis,
    rank,
    solve,
    stratum_cokernel,
    stratum_kernel,
)
from .quiver import Quiver


class RepresentationError(ValueError):
    pass


class BadPrimeError(ArithmeticError):
    """Reduction mod p changed the rank of some structure map."""


class Representation:
    """A representation: one vector space ``F^{d_i}`` per vertex, one matrix per arrow.

    The matrix of arrow ``a: i -> j`` has shape ``d_j x d_i``.
    """

    __slots__ = ("quiver", "dims", "mats", "field", "label", "__dict__")

    def __init__(self, quiver: Quiver, dims: Sequence[int], mats: Sequence[Matrix], field: Field = QQ, label: str = ""):
        dims = tuple(int(d) for d in dims)
        if len(dims) != quiver.n:
            raise RepresentationError(f"expected {quiver.n} dimensions, got {len(dims)}")
        if any(d < 0 for d in dims):
            raise RepresentationError("negative dimension")
        mats = tuple(mats)
        if len(mats) != len(quiver.arrows):
            raise RepresentationError("one matrix per arrow required")
        for a, m in zip(quiver.arrows, mats):
            if m.field != field:
                raise RepresentationError(f"arrow {a.name}: matrix over {m.field}, expected {field}")
            if m.shape != (dims[a.target], dims[a.source]):
                raise RepresentationError(
                    f"arrow {a.name}: shape {m.shape}, expected {(dims[a.target], dims[a.source])}"
                )
        self.quiver = quiver
        self.dims = dims
        self.mats = mats
        self.field = field
        self.label = label

    @classmethod
    def from_lists(cls, quiver: Quiver, dims: Sequence[int], mats: Mapping[str, Sequence[Sequence]] | Sequence, field: Field = QQ, label: str = ""):
        """Build from nested lists; ``mats`` maps arrow names (or positions) to row lists.

        Missing arrows are zero maps.
        """
        if len(dims) != quiver.n:
            raise RepresentationError(f"dimension vector has {len(dims)} entries, quiver has {quiver.n} vertices")
        out = []
        for k, a in enumerate(quiver.arrows):
            if isinstance(mats, Mapping):
                rows = mats.get(a.name)
            else:
                rows = mats[k]
            shape = (dims[a.target], dims[a.source])
            if rows is None or shape[0] == 0 or shape[1] == 0:
                if rows and any(len(r) for r in rows):
                    raise RepresentationError(f"arrow {a.name}: nonempty matrix for a zero space")
                out.append(Matrix.zeros(field, *shape))
            else:
                out.append(Matrix(field, rows, shape[1]))
        return cls(quiver, dims, out, field, label)

    @classmethod
    def zero(cls, quiver: Quiver, field: Field = QQ) -> "Representation":
        return cls(quiver, (0,) * quiver.n, [Matrix.zeros(field, 0, 0) for _ in quiver.arrows], field, "0")

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<Representation{tag} dim={self.dims} over {self.field}>"

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return not any(self.dims)

    def key(self) -> tuple:
        """Exact data for hashing and equality of concrete matrices."""
        return (self.field.p, self.dims, tuple(m.rows for m in self.mats))

    def with_label(self, label: str) -> "Representation":
        return Representation(self.quiver, self.dims, self.mats, self.field, label)

    def negated(self) -> "Representation":
        return Representation(self.quiver, self.dims, [-m for m in self.mats], self.field, self.label)

    def change_field(self, field: Field) -> "Representation":
        return Representation(self.quiver, self.dims, [m.change_field(field) for m in self.mats], field, self.label)

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else str(x)
            return int(x)

        return {
            "quiver": self.quiver.name,
            "dims": list(self.dims),
            "matrices": {a.name: [[enc(x) for x in r] for r in m.rows] for a, m in zip(self.quiver.arrows, self.mats)},
        }

    def dual(self) -> "Representation":
        """Vector-space dual, a representation of the opposite quiver."""
        return Representation(self.quiver.opposite(), self.dims, [m.T for m in self.mats], self.field, self.label)

    @cached_property
    def rank_profile(self) -> tuple[int, ...]:
        return tuple(rank(m) for m in self.mats)


def rep_from_json(data: Mapping, quiver: Quiver) -> Representation:
    """Parse the JSON representation format (integer or rational entries)."""
    if "dims" not in data or "matrices" not in data:
        raise RepresentationError("representation JSON needs 'dims' and 'matrices'")
    names = {a.name for a in quiver.arrows}
    extra = set(data["matrices"]) - names
    if extra:
        raise RepresentationError(f"unknown arrows {sorted(extra)}")
    mats = {k: [[Fraction(x) for x in r] for r in v] for k, v in data["matrices"].items()}
    return Representation.from_lists(quiver, data["dims"], mats)


def load_rep(path, quiver: Quiver) -> Representation:
    with open(path, encoding="utf-8") as fh:
        return rep_from_json(json.load(fh), quiver)


def reduce_mod(M: Representation, p: int) -> Representation:
    """Entrywise reduction of a rational representation to F_p.

    Raises :class:`BadPrimeError` if a denominator vanishes or an arrow
    matrix loses rank.
    """
    if M.field.p:
        raise RepresentationError("reduce_mod needs a representation over QQ")
    F = Field(p)
    try:
        R = M.change_field(F)
    except ZeroDivisionError as exc:
        raise BadPrimeError(str(exc)) from None
    if R.rank_profile != M.rank_profile:
        raise BadPrimeError(f"rank drop modulo {p}")
    return R


class Morphism:
    """Vertexwise matrices ``f_i: M_i -> N_i`` intertwining the arrow maps."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Representation, target: Representation, comps: Sequence[Matrix], check: bool = True):
        if source.quiver != target.quiver or source.field != target.field:
            raise RepresentationError("morphism between representations of different quivers/fields")
        comps = tuple(comps)
        if len(comps) != source.quiver.n:
            raise RepresentationError("one component per vertex required")
        for i, c in enumerate(comps):
            if c.shape != (target.dims[i], source.dims[i]):
                raise RepresentationError(f"component {i + 1} has shape {c.shape}")
        if check:
            for a, x, y in zip(source.quiver.arrows, source.mats, target.mats):
                if comps[a.target] @ x != y @ comps[a.source]:
                    raise RepresentationError(f"not a morphism: fails to intertwine arrow {a.name}")
        self.source, self.target, self.comps = source, target, comps

    def __repr__(self) -> str:
        return f"<Morphism {self.source.dims} -> {self.target.dims}>"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def rank_vector(self) -> tuple[int, ...]:
        return tuple(rank(c) for c in self.comps)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, [a + b for a, b in zip(self.comps, other.comps)], check=False)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, [m.scale(c) for m in self.comps], check=False)

    def compose(self, other: "Morphism") -> "Morphism":
        """``self o other``."""
        return Morphism(other.source, self.target, [a @ b for a, b in zip(self.comps, other.comps)], check=False)


def _check_pair(M: Representation, N: Representation) -> None:
    if M.quiver != N.quiver:
        raise RepresentationError("representations of different quivers")
    if M.field != N.field:
        raise RepresentationError(f"field mismatch: {M.field} vs {N.field}")


def hom_system(M: Representation, N: Representation) -> tuple[Matrix, list[tuple[int, int]]]:
    """Linear system whose kernel is Hom(M, N).

    Unknowns are the entries of ``f_i`` vertex by vertex, row-major;
    returns the coefficient matrix and the (offset, ncols) of each block.
    """
    _check_pair(M, N)
    Q = M.quiver
    F = M.field
    offsets = []
    off = 0
    for i in Q.vertices:
        offsets.append((off, M.dims[i]))
        off += N.dims[i] * M.dims[i]
    nvar = off
    zero = F(0)
    p = F.p
    eqs = []
    for a, x, y in zip(Q.arrows, M.mats, N.mats):
        s, t = a.source, a.target
        ot, ct = offsets[t]
        os_, cs = offsets[s]
        # (f_t x - y f_s)[r, c] = 0
        for r in range(N.dims[t]):
            for c in range(M.dims[s]):
                row = [zero] * nvar
                for k in range(M.dims[t]):
                    v = x.rows[k][c]
                    if v:
                        idx = ot + r * ct + k
                        row[idx] = row[idx] + v
                for k in range(N.dims[s]):
                    v = y.rows[r][k]
                    if v:
                        idx = os_ + k * cs + c
                        row[idx] = row[idx] - v
                if p:
                    row = [z % p for z in row]
                eqs.append(tuple(row))
    return Matrix(F, eqs, nvar, _trusted=True), offsets


def _unpack(vec: Sequence, M: Representation, N: Representation, offsets) -> list[Matrix]:
    comps = []
    for i in M.quiver.vertices:
        off, nc = offsets[i]
        rows = [tuple(vec[off + r * nc + c] for c in range(nc)) for r in range(N.dims[i])]
        comps.append(Matrix(M.field, rows, nc, _trusted=True))
    return comps


def hom_basis(M: Representation, N: Representation) -> list[Morphism]:
    system, offsets = hom_system(M, N)
    K = kernel_basis(system)
    return [Morphism(M, N, _unpack(col, M, N, offsets), check=False) for col in K.columns()]


def dim_hom(M: Representation, N: Representation) -> int:
    system, _ = hom_system(M, N)
    return system.ncols - rank(system)


def hom_from_coordinates(M: Representation, N: Representation, basis: Sequence[Morphism], coords: Sequence) -> Morphism:
    F = M.field
    p = F.p
    comps = []
    for i in M.quiver.vertices:
        rows = []
        for r in range(N.dims[i]):
            row = []
            for c in range(M.dims[i]):
                v = sum(co * b.comps[i].rows[r][c] for co, b in zip(coords, basis))
                row.append(v % p if p else v)
            rows.append(tuple(row))
        comps.append(Matrix(F, rows, M.dims[i], _trusted=True))
    return Morphism(M, N, comps, check=False)


# --- subrepresentations -----------------------------------------------------

class Subrep:
    """A subrepresentation of ``parent``, given by a column basis at each vertex."""

    __slots__ = ("parent", "bases", "__dict__")

    def __init__(self, parent: Representation, bases: Sequence[Matrix], check: bool = True):
        self.parent = parent
        self.bases = tuple(bases)
        if check:
            for i, B in enumerate(self.bases):
                if B.nrows != parent.dims[i] or rank(B) != B.ncols:
                    raise RepresentationError(f"bad basis at vertex {i + 1}")
            # closure under arrows
            self.induced_maps()

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(B.ncols for B in self.bases)

    def induced_maps(self) -> list[Matrix]:
        out = []
        for a, x in zip(self.parent.quiver.arrows, self.parent.mats):
            Bs, Bt = self.bases[a.source], self.bases[a.target]
            y = solve(Bt, x @ Bs)
            if y is None:
                raise RepresentationError(f"subspaces not closed under arrow {a.name}")
            out.append(y)
        return out

    @cached_property
    def rep(self) -> Representation:
        return Representation(self.parent.quiver, self.dims, self.induced_maps(), self.parent.field)

    def inclusion(self) -> Morphism:
        return Morphism(self.rep, self.parent, self.bases, check=False)

    def quotient(self) -> tuple[Representation, Morphism]:
        return cokernel(self.inclusion())


def _induced_on_kernels(M: Representation, bases: Sequence[Matrix]) -> Representation:
    return Subrep(M, bases, check=False).rep


def kernel(f: Morphism, method: str = "generic") -> tuple[Representation, Morphism]:
    """``K`` with an injective morphism ``K -> source(f)`` onto the vertexwise kernels."""
    M = f.source
    kb = stratum_kernel if method == "stratified" else kernel_basis
    bases = [kb(c) for c in f.comps]
    sub = Subrep(M, bases, check=False)
    return sub.rep, sub.inclusion()


def cokernel(f: Morphism, method: str = "generic") -> tuple[Representation, Morphism]:
    """``C`` with a surjection ``target(f) -> C`` killing the image."""
    N = f.target
    F = N.field
    if method == "stratified":
        projs = [stratum_cokernel(c) for c in f.comps]
    else:
        projs = [left_kernel_basis(c) for c in f.comps]
    mats = []
    for a, y in zip(N.quiver.arrows, N.mats):
        Cs, Ct = projs[a.source], projs[a.target]
        # z with z Cs = Ct y; Cs has full row rank
        rhs = Ct @ y
        z = solve(Cs.T, rhs.T)
        if z is None:
            raise RepresentationError("cokernel projection is not compatible with arrows")
        mats.append(z.T)
    C = Representation(N.quiver, tuple(P.nrows for P in projs), mats, F)
    return C, Morphism(N, C, projs, check=False)


def image(f: Morphism) -> Subrep:
    bases = [column_space_basis(c) for c in f.comps]
    return Subrep(f.target, bases, check=False)


def quotient_by(M: Representation, sub_bases: Sequence[Matrix]) -> tuple[Representation, list[Matrix], list[list[int]]]:
    """Quotient ``M / U`` in coordinates of a pivot-chosen complement.

    Returns the quotient, the projection matrices and, per vertex, the
    standard basis indices spanning the complement (a section).
    """
    F = M.field
    comps = []
    projs = []
    for i, B in enumerate(sub_bases):
        cols = complement_columns(B)
        comps.append(cols)
        # basis [B | E_cols]; projection = last rows of its inverse
        E = Matrix.identity(F, M.dims[i]).submatrix(range(M.dims[i]), cols)
        full = B.hstack(E)
        inv = solve(full, Matrix.identity(F, M.dims[i]))
        projs.append(inv.submatrix(range(B.ncols, M.dims[i]), range(M.dims[i])))
    mats = []
    for a, x in zip(M.quiver.arrows, M.mats):
        E = Matrix.identity(F, M.dims[a.source]).submatrix(range(M.dims[a.source]), comps[a.source])
        mats.append(projs[a.target] @ x @ E)
    Qr = Representation(M.quiver, tuple(len(c) for c in comps), mats, F)
    return Qr, projs, comps


# --- standard modules -------------------------------------------------------

def direct_sum(*reps: Representation) -> Representation:
    if not reps:
        raise RepresentationError("direct_sum needs at least one summand")
    Q, F = reps[0].quiver, reps[0].field
    for R in reps[1:]:
        _check_pair(reps[0], R)
    dims = tuple(sum(R.dims[i] for R in reps) for i in Q.vertices)
    mats = []
    zero = F(0)
    for k, a in enumerate(Q.arrows):
        rows = []
        col_off = []
        off = 0
        for R in reps:
            col_off.append(off)
            off += R.dims[a.source]
        for idx, R in enumerate(reps):
            for r in R.mats[k].rows:
                row = [zero] * dims[a.source]
                row[col_off[idx]:col_off[idx] + len(r)] = r
                rows.append(tuple(row))
        mats.append(Matrix(F, rows, dims[a.source], _trusted=True))
    label = " + ".join(R.label or "?" for R in reps)
    return Representation(Q, dims, mats, F, label)


def _paths(Q: Quiver) -> list[tuple[int, int, tuple[int, ...]]]:
    """All paths as (start, end, arrow sequence), trivial paths included."""
    out = [(i, i, ()) for i in Q.vertices]
    frontier = list(out)
    while frontier:
        nxt = []
        for s, t, p in frontier:
            for k in Q.arrows_out_of(t):
                q = (s, Q.arrows[k].target, p + (k,))
                nxt.append(q)
        out.extend(nxt)
        frontier = nxt
    return out


def _check_vertex(Q: Quiver, i: int) -> None:
    if not 0 <= i < Q.n:
        raise RepresentationError(f"vertex {i + 1} out of range 1..{Q.n}")


def simple(Q: Quiver, i: int, field: Field = QQ) -> Representation:
    _check_vertex(Q, i)
    dims = tuple(1 if j == i else 0 for j in Q.vertices)
    return Representation.from_lists(Q, dims, {}, field, label=f"S{i + 1}")


def projective(Q: Quiver, i: int, field: Field = QQ) -> Representation:
    """P_i: basis of vertex j = paths from i to j; arrows act by post-composition."""
    _check_vertex(Q, i)
    paths = [p for p in _paths(Q) if p[0] == i]
    basis = {j: [p[2] for p in paths if p[1] == j] for j in Q.vertices}
    mats = []
    for k, a in enumerate(Q.arrows):
        src, tgt = basis[a.source], basis[a.target]
        rows = [[1 if tp == sp + (k,) else 0 for sp in src] for tp in tgt]
        mats.append(rows)
    dims = tuple(len(basis[j]) for j in Q.vertices)
    return Representation.from_lists(Q, dims, mats, field, label=f"P{i + 1}")


def injective(Q: Quiver, i: int, field: Field = QQ) -> Representation:
    """I_i: basis of vertex j = paths from j to i; an arrow strips itself off the front."""
    _check_vertex(Q, i)
    paths = [p for p in _paths(Q) if p[1] == i]
    basis = {j: [p[2] for p in paths if p[0] == j] for j in Q.vertices}
    mats = []
    for k, a in enumerate(Q.arrows):
        src, tgt = basis[a.source], basis[a.target]
        rows = [[1 if sp == (k,) + tp else 0 for sp in src] for tp in tgt]
        mats.append(rows)
    dims = tuple(len(basis[j]) for j in Q.vertices)
    return Representation.from_lists(Q, dims, mats, field, label=f"I{i + 1}")


def radical(M: Representation) -> Subrep:
    """Sum of the images of all arrow maps."""
    F = M.field
    bases = []
    for j in M.quiver.vertices:
        incoming = [M.mats[k] for k in M.quiver.arrows_into(j)]
        if not incoming or M.dims[j] == 0:
            bases.append(Matrix.zeros(F, M.dims[j], 0))
            continue
        big = incoming[0]
        for m in incoming[1:]:
            big = big.hstack(m)
        bases.append(column_space_basis(big))
    return Subrep(M, bases, check=False)


def socle(M: Representation) -> Subrep:
    """Joint kernel of the arrow maps leaving each vertex."""
    F = M.field
    bases = []
    for i in M.quiver.vertices:
        outgoing = [M.mats[k] for k in M.quiver.arrows_out_of(i)]
        if not outgoing:
            bases.append(Matrix.identity(F, M.dims[i]))
            continue
        big = outgoing[0]
        for m in outgoing[1:]:
            big = big.vstack(m)
        bases.append(kernel_basis(big))
    return Subrep(M, bases, check=False)


def top(M: Representation) -> Representation:
    return radical(M).quotient()[0]


# --- extensions -------------------------------------------------------------

def extension_space(M: Representation, N: Representation) -> tuple[list[tuple[int, int, int]], Matrix]:
    """The space m(M, N) of arrow-indexed maps ``M_s -> N_t`` and the coboundary.

    Returns the coordinate layout ``(arrow, row, col)`` of m(M, N) and the
    matrix of ``h -> (h_t x_a - y_a h_s)_a`` whose image is the kernel of
    m(M, N) -> Ext^1(M, N).
    """
    _check_pair(M, N)
    Q = M.quiver
    F = M.field
    p = F.p
    layout = [(k, r, c) for k, a in enumerate(Q.arrows) for r in range(N.dims[a.target]) for c in range(M.dims[a.source])]
    pos = {key: n for n, key in enumerate(layout)}
    hoff = []
    off = 0
    for i in Q.vertices:
        hoff.append(off)
        off += N.dims[i] * M.dims[i]
    nh = off
    zero = F(0)
    cols = []
    for i in Q.vertices:
        for r in range(N.dims[i]):
            for c in range(M.dims[i]):
                vec = [zero] * len(layout)
                # h = E_{rc} at vertex i
                for k, a in enumerate(Q.arrows):
                    if a.target == i:
                        # (h x_a)[r, c'] = x_a[c, c']
                        for cc in range(M.dims[a.source]):
                            v = M.mats[k].rows[c][cc]
                            if v:
                                n = pos[(k, r, cc)]
                                vec[n] = vec[n] + v
                    if a.source == i:
                        # -(y_a h)[r', c] = -y_a[r', r]
                        for rr in range(N.dims[a.target]):
                            v = N.mats[k].rows[rr][r]
                            if v:
                                n = pos[(k, rr, c)]
                                vec[n] = vec[n] - v
                if p:
                    vec = [z % p for z in vec]
                cols.append(vec)
    delta = Matrix.from_columns(F, cols, len(layout)) if cols else Matrix.zeros(F, len(layout), 0)
    del nh
    return layout, delta


def dim_ext1_direct(M: Representation, N: Representation) -> int:
    layout, delta = extension_space(M, N)
    return len(layout) - rank(delta)


def dim_ext1(M: Representation, N: Representation) -> int:
    """dim Hom(M, N) - <dim M, dim N> (the path algebra is hereditary)."""
    return dim_hom(M, N) - M.quiver.euler_form(M.dims, N.dims)


def middle_term(M: Representation, N: Representation, layout, m: Sequence) -> Representation:
    """L(m) with arrow matrices [[N_a, m(a)], [0, M_a]]; N's basis comes first."""
    Q = M.quiver
    F = M.field
    blocks = {k: {} for k in range(len(Q.arrows))}
    for (k, r, c), v in zip(layout, m):
        blocks[k][(r, c)] = F(v)
    dims = tuple(N.dims[i] + M.dims[i] for i in Q.vertices)
    zero = F(0)
    mats = []
    for k, a in enumerate(Q.arrows):
        s, t = a.source, a.target
        rows = []
        for r in range(N.dims[t]):
            row = list(N.mats[k].rows[r]) + [blocks[k].get((r, c), zero) for c in range(M.dims[s])]
            rows.append(tuple(row))
        for r in range(M.dims[t]):
            rows.append((zero,) * N.dims[s] + tuple(M.mats[k].rows[r]))
        mats.append(Matrix(F, rows, dims[s], _trusted=True))
    return Representation(Q, dims, mats, F)


def iter_vectors(field: Field, n: int) -> Iterable[tuple[int, ...]]:
    """All vectors of F_p^n in lexicographic order."""
    from itertools import product

    return product(field.elements(), repeat=n)
