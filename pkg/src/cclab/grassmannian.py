"""Point counts of quiver Grassmannians over F_p and their Euler characteristics.

Counting engines:

* ``enumerate`` walks the vertices, the most expensive one last.  At each
  vertex the subspace is squeezed between the images of already chosen
  subspaces and the preimages of already chosen targets; the last
  vertex is summed in closed form with a Gaussian binomial.
* ``split`` counts a visible direct sum X + Y from subrepresentations of
  X and Y separately, weighting each pair by a Hom count.
* ``tube`` handles Kronecker modules in a homogeneous tube (one
  invertible arrow, the other acting as a single Jordan block after
  normalising).  It peels off the socle line and recurses, which keeps
  the cost polynomial in n instead of exponential in q.

The ``auto`` engine uses ``tube`` whenever the module has that shape,
``split`` for visible direct sums, and enumerates otherwise.  If the
counts blow the budget it falls back to torus fixed points (see
:mod:`cclab.fixedpoints`), which give Euler characteristics but no point
counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from . import fixedpoints, modp
from .interpolate import DEFAULT_PRIMES, BudgetExceeded, Interpolator
from .linalg import Matrix, inverse, rank
from .quiver import is_kronecker
from .rep import BadPrimeError, Representation, RepresentationError, reduce_mod

DEFAULT_BUDGET = 400_000
COUNTING_ENGINES = ("auto", "enumerate", "split", "tube")


# --- plain data for the F_p engines ------------------------------------------

@dataclass(frozen=True)
class _Plain:
    p: int
    dims: tuple[int, ...]
    mats: tuple[tuple[tuple[int, ...], ...], ...]
    arrows: tuple[tuple[int, int], ...]
    order: tuple[int, ...]


def _plain(M: Representation) -> _Plain:
    if not M.field.p:
        raise RepresentationError("counting needs a representation over F_p")
    return _Plain(
        M.field.p,
        M.dims,
        tuple(m.rows for m in M.mats),
        tuple((a.source, a.target) for a in M.quiver.arrows),
        M.quiver.order,
    )


def _constraints(P: _Plain, v: int, chosen: dict[int, tuple]) -> tuple[list, list]:
    """Images arriving at v and functionals cutting out the allowed subspace at v."""
    p = P.p
    img = []
    cons = []
    for k, (s, t) in enumerate(P.arrows):
        if t == v and s in chosen:
            A = P.mats[k]
            img.extend(modp.mat_vec(A, u, p) for u in chosen[s][0])
        if s == v and t in chosen:
            cons.extend(modp.preimage(P.mats[k], chosen[t][1], p))
    return img, cons


def _inside(W, cons, p: int) -> bool:
    return not any(sum(a * b for a, b in zip(row, w)) % p for row in cons for w in W)


def _vertex_bounds(P: _Plain, v: int, chosen: dict[int, tuple]) -> tuple[tuple, list | None] | None:
    """(W, K-basis) at vertex v given choices elsewhere; None if W is not inside K.

    K is ``None`` when there are no constraints (the whole space).
    """
    p, d = P.p, P.dims[v]
    img, cons = _constraints(P, v, chosen)
    W = modp.span(img, d, p) if img else ()
    if not cons:
        return W, None
    if W and not _inside(W, cons, p):
        return None
    return W, modp.null_space(cons, d, p)


def _complement(W: tuple, K: list, d: int, p: int) -> list[tuple[int, ...]]:
    """Vectors of K completing a basis of W to one of span(K)."""
    out = []
    cur = list(W)
    r = len(cur)
    for v in K:
        if modp.rank(cur + [v], d, p) > r:
            cur.append(v)
            out.append(v)
            r += 1
    return out


def _lift(W: tuple, C: list, S: tuple, d: int, p: int) -> tuple:
    vecs = list(W)
    for row in S:
        v = [0] * d
        for coef, c in zip(row, C):
            if coef:
                for i in range(d):
                    v[i] = (v[i] + coef * c[i]) % p
        vecs.append(tuple(v))
    return modp.span(vecs, d, p)


def enumeration_cost(dims: Sequence[int], order: Sequence[int], q: int, e: Sequence[int] | None = None) -> int:
    """Upper bound on the number of subspace choices the enumeration engine visits."""
    total = 1
    for v in order[:-1]:
        if e is None:
            total *= sum(modp.gaussian_binomial(dims[v], k, q) for k in range(dims[v] + 1))
        else:
            total *= modp.gaussian_binomial(dims[v], e[v], q)
    return total


def _walk(P: _Plain, e: Sequence[int] | None, full: bool) -> Iterator[tuple[dict, int, int, tuple, list]]:
    """Depth-first over vertices; yields at the last vertex.

    In counting mode (``full=False``) the last vertex is not enumerated; the
    caller receives (chosen, v, dim_W, W, K) and sums binomials.
    """
    order = P.order
    p = P.p

    def rec(pos: int, chosen: dict):
        v = order[pos]
        d = P.dims[v]
        last = pos == len(order) - 1
        if last and not full:
            img, cons = _constraints(P, v, chosen)
            W = modp.span(img, d, p) if img else ()
            if cons:
                if W and not _inside(W, cons, p):
                    return
                kdim = d - modp.rank(cons, d, p)
            else:
                kdim = d
            yield chosen, v, len(W), W, kdim
            return
        bounds = _vertex_bounds(P, v, chosen)
        if bounds is None:
            return
        W, K = bounds
        free = not W and K is None
        if K is None:
            K = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        C = None if free else _complement(W, K, d, p)
        m = d if free else len(C)
        targets = [e[v]] if e is not None else range(len(W), len(W) + m + 1)
        for k in targets:
            j = k - len(W)
            if j < 0 or j > m:
                continue
            for S in modp.subspaces(m, j, p):
                U = S if free else _lift(W, C, S, d, p)
                chosen[v] = (U, modp.annihilator_rref(U, d, p))
                if last:
                    yield chosen, v, 0, U, None
                else:
                    yield from rec(pos + 1, chosen)
                del chosen[v]

    if not order:
        yield {}, -1, 0, (), []
        return
    yield from rec(0, {})


def _count_enumerate(P: _Plain, e: Sequence[int] | None) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    n = len(P.dims)
    if n == 0:
        return {(): 1}
    for chosen, v, w, W, kdim in _walk(P, e, full=False):
        base = [0] * n
        for u, (U, _) in chosen.items():
            base[u] = len(U)
        m = kdim - w
        ks = [e[v]] if e is not None else range(w, kdim + 1)
        for k in ks:
            if k < w or k - w > m:
                continue
            base[v] = k
            key = tuple(base)
            out[key] = out.get(key, 0) + modp.gaussian_binomial(m, k - w, P.p)
    return out


def iter_subreps(M: Representation, e: Sequence[int] | None = None) -> Iterator[tuple[tuple, ...]]:
    """All subrepresentations of M (over F_p) as canonical row bases per vertex."""
    P = _plain(M)
    for chosen, *_ in _walk(P, e, full=True):
        yield tuple(chosen[v][0] for v in range(len(P.dims)))


def subrep_from_rows(M: Representation, bases: Sequence[tuple]):
    """Wrap canonical row bases as a :class:`Subrep` of M."""
    from .rep import Subrep

    F = M.field
    mats = [Matrix.from_columns(F, list(B), M.dims[i]) if B else Matrix.zeros(F, M.dims[i], 0) for i, B in enumerate(bases)]
    return Subrep(M, mats, check=False)


# --- block-diagonal direct sums ---------------------------------------------

def _components(P: _Plain) -> list[list[tuple[int, int]]]:
    """Connected components of the coordinate graph: (vertex, index) pairs
    linked whenever some arrow matrix has a nonzero entry between them."""
    nodes = [(v, i) for v in range(len(P.dims)) for i in range(P.dims[v])]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (s, t), A in zip(P.arrows, P.mats):
        for r, row in enumerate(A):
            for c, x in enumerate(row):
                if x:
                    a, b = find((t, r)), find((s, c))
                    if a != b:
                        parent[a] = b
    groups: dict = {}
    for x in nodes:
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def _restrict(P: _Plain, coords: set) -> _Plain:
    idx = [[i for i in range(P.dims[v]) if (v, i) in coords] for v in range(len(P.dims))]
    mats = tuple(
        tuple(tuple(A[r][c] for c in idx[s]) for r in idx[t]) for (s, t), A in zip(P.arrows, P.mats)
    )
    return _Plain(P.p, tuple(len(x) for x in idx), mats, P.arrows, P.order)


def _pivots(B) -> list[int]:
    return [next(i for i, x in enumerate(row) if x) for row in B]


def _reduce(v, B, piv, p: int) -> list[int]:
    v = list(v)
    for row, c in zip(B, piv):
        f = v[c]
        if f:
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return v


def _sub_plain(P: _Plain, bases) -> _Plain:
    """The subrepresentation spanned by RREF row bases, in those bases."""
    p = P.p
    mats = []
    for (s, t), A in zip(P.arrows, P.mats):
        piv_t = _pivots(bases[t])
        cols = [modp.mat_vec(A, b, p) for b in bases[s]]
        mats.append(tuple(tuple(col[c] for col in cols) for c in piv_t))
    return _Plain(p, tuple(len(B) for B in bases), tuple(mats), P.arrows, P.order)


def _quotient_plain(P: _Plain, bases) -> _Plain:
    """M/U in the coordinates of the non-pivot standard vectors."""
    p = P.p
    pivs = [_pivots(B) for B in bases]
    comp = [[i for i in range(P.dims[v]) if i not in set(pivs[v])] for v in range(len(P.dims))]
    mats = []
    for (s, t), A in zip(P.arrows, P.mats):
        cols = []
        for f in comp[s]:
            img = [A[r][f] for r in range(len(A))]
            red = _reduce(img, bases[t], pivs[t], p)
            cols.append([red[i] for i in comp[t]])
        mats.append(tuple(tuple(col[r] for col in cols) for r in range(len(comp[t]))))
    return _Plain(p, tuple(len(c) for c in comp), tuple(mats), P.arrows, P.order)


def _hom_dim(X: _Plain, Y: _Plain) -> int:
    p = X.p
    off = []
    o = 0
    for i in range(len(X.dims)):
        off.append(o)
        o += Y.dims[i] * X.dims[i]
    nvar = o
    if not nvar:
        return 0
    rows = []
    for (s, t), x, y in zip(X.arrows, X.mats, Y.mats):
        for r in range(Y.dims[t]):
            for c in range(X.dims[s]):
                row = [0] * nvar
                for k in range(X.dims[t]):
                    v = x[k][c]
                    if v:
                        row[off[t] + r * X.dims[t] + k] += v
                for k in range(Y.dims[s]):
                    v = y[r][k]
                    if v:
                        row[off[s] + k * X.dims[s] + c] -= v
                if any(row):
                    rows.append([z % p for z in row])
    return nvar - modp.rank(rows, nvar, p)


def _walk_plain_points(P: _Plain):
    for chosen, *_ in _walk(P, None, full=True):
        yield tuple(chosen[v][0] for v in range(len(P.dims)))


def _count_split(P: _Plain, parts: list[_Plain], e) -> dict[tuple[int, ...], int]:
    """|Gr(X + Y)| = sum over X1 in Gr(X), Y1 in Gr(Y) of |Hom(Y1, X/X1)|."""
    X = parts[0]
    p = P.p
    Y = _direct_sum_plain(parts[1:])
    quots: dict = {}
    for B in _walk_plain_points(X):
        Z = _quotient_plain(X, B)
        dims = tuple(len(b) for b in B)
        quots.setdefault((dims, Z), 0)
        quots[(dims, Z)] += 1
    out: dict[tuple[int, ...], int] = {}
    for B in _walk_plain_points(Y):
        Y1 = _sub_plain(Y, B)
        for (dx, Z), mult in quots.items():
            key = tuple(a + b for a, b in zip(dx, Y1.dims))
            if e is not None and key != tuple(e):
                continue
            out[key] = out.get(key, 0) + mult * p ** _hom_dim(Y1, Z)
    return out


def _direct_sum_plain(parts: list[_Plain]) -> _Plain:
    first = parts[0]
    n = len(first.dims)
    dims = tuple(sum(P.dims[v] for P in parts) for v in range(n))
    mats = []
    for k, (s, t) in enumerate(first.arrows):
        rows = []
        col_off = 0
        offs = []
        for P in parts:
            offs.append(col_off)
            col_off += P.dims[s]
        for P, o in zip(parts, offs):
            for r in P.mats[k]:
                row = [0] * dims[s]
                row[o:o + len(r)] = r
                rows.append(tuple(row))
        mats.append(tuple(rows))
    return _Plain(first.p, dims, tuple(mats), first.arrows, first.order)


def split_parts(M: Representation) -> list[list[tuple[int, int]]]:
    """Coordinate blocks along which M is visibly a direct sum."""
    return _components(_plain(M)) if M.field.p else _components(
        _Plain(0, M.dims, tuple(m.rows for m in M.mats), tuple((a.source, a.target) for a in M.quiver.arrows), M.quiver.order)
    )


# --- homogeneous tube engine -----------------------------------------------

def _jordan_data(M: Representation) -> tuple[int, Matrix] | None:
    """For a Kronecker module (A, B) with dims (n, n): a nilpotent N of rank n-1
    such that subrepresentations are pairs U1 ⊆ U2 (after identifying via
    the invertible arrow) with N U1 ⊆ U2.  None if M is not of that shape."""
    Q = M.quiver
    if not is_kronecker(Q):
        return None
    a, b = Q.arrows
    n = M.dims[a.source]
    if n == 0 or M.dims[a.target] != n:
        return None
    A, B = M.mats[0], M.mats[1]
    F = M.field
    for X, Y in ((A, B), (B, A)):
        if rank(X) != n:
            continue
        T = inverse(X) @ Y
        tr = sum(T.rows[i][i] for i in range(n))
        if not F.p:
            candidates = [tr / n]
        elif n % F.p:
            candidates = [tr * pow(n, -1, F.p) % F.p]
        else:
            # the trace does not determine the eigenvalue; p <= n is tiny
            candidates = range(F.p)
        for lam in candidates:
            N = T - Matrix.identity(F, n).scale(lam)
            if rank(N) != n - 1:
                continue
            Z = N
            for _ in range(n - 1):
                Z = Z @ N
            if Z.is_zero():
                return n, N
    return None


def is_tube_module(M: Representation) -> bool:
    return _jordan_data(M) is not None


@lru_cache(maxsize=None)
def tube_count(n: int, a: int, b: int, q: int) -> int:
    """Pairs U1 ⊆ U2 ⊆ F_q^n with dims (a, b) and J U1 ⊆ U2, J one nilpotent Jordan block.

    Peels off the socle line L of F_q[t]/t^n: either L ⊆ U1, or L ⊆ U2 only
    (q^a lifts of U1), or L avoids both, which needs the socle of the
    quotient to avoid the image of U1 and leaves q^(b-a) lifts.
    """
    if a < 0 or b < 0 or a > b or b > n:
        return 0
    if n == 0:
        return 1
    socle_in_u1 = tube_count(n - 2, a - 1, b - 1, q) if n >= 2 else 0
    return (
        tube_count(n - 1, a - 1, b - 1, q)
        + q ** a * tube_count(n - 1, a, b - 1, q)
        + q ** (b - a) * (tube_count(n - 1, a, b, q) - socle_in_u1)
    )


def _count_tube(M: Representation, e: Sequence[int] | None) -> dict[tuple[int, ...], int]:
    data = _jordan_data(M)
    if data is None:
        raise BadPrimeError("module is not a single Jordan block modulo this prime")
    n = data[0]
    s, t = M.quiver.arrows[0].source, M.quiver.arrows[0].target
    q = M.field.p
    out = {}
    for a in range(n + 1):
        for b in range(a, n + 1):
            key = [0, 0]
            key[s], key[t] = a, b
            key = tuple(key)
            if e is not None and key != tuple(e):
                continue
            c = tube_count(n, a, b, q)
            if c:
                out[key] = c
    return out


# --- public counting API ------------------------------------------------------

def count_profile_mod_p(M: Representation, e: Sequence[int] | None = None, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> dict[tuple[int, ...], int]:
    """Counts of F_p-subrepresentations by dimension vector (only e if given)."""
    if not M.field.p:
        raise RepresentationError("count over F_p needs a reduced representation")
    if e is not None:
        e = tuple(e)
        if len(e) != M.quiver.n or any(x < 0 or x > d for x, d in zip(e, M.dims)):
            raise RepresentationError(f"dimension vector {e} not within {M.dims}")
    if engine not in COUNTING_ENGINES:
        raise RepresentationError(f"unknown counting engine {engine!r}; choose from {', '.join(COUNTING_ENGINES)}")
    if engine == "tube":
        return _count_tube(M, e)
    if engine == "auto" and _jordan_data(M) is not None:
        return _count_tube(M, e)
    P = _plain(M)
    if engine in ("auto", "split"):
        comps = _components(P)
        if len(comps) > 1:
            parts = sorted((_restrict(P, set(c)) for c in comps), key=lambda X: enumeration_cost(X.dims, X.order, X.p))
            rest = [sum(X.dims[v] for X in parts[1:]) for v in range(len(P.dims))]
            cost = sum(enumeration_cost(d, P.order, P.p) for d in (parts[0].dims, rest))
            if cost > budget:
                raise BudgetExceeded(f"split counting needs about {cost} subrepresentations at q={P.p}, budget {budget}")
            return _count_split(P, parts, e)
    P = _cheapest_order(P, e)
    cost = enumeration_cost(P.dims, P.order, P.p, e)
    if cost > budget:
        raise BudgetExceeded(f"enumeration needs about {cost} subspace visits at q={P.p}, budget {budget}")
    return _count_enumerate(P, e)


def _cheapest_order(P: _Plain, e) -> _Plain:
    """Move the most expensive vertex last, where the walk sums it in closed form.

    The walk honours constraints from both neighbours, so any order works.
    """
    if len(P.order) < 2:
        return P
    def vertex_cost(v):
        d = P.dims[v]
        if e is not None:
            return modp.gaussian_binomial(d, e[v], P.p)
        return sum(modp.gaussian_binomial(d, k, P.p) for k in range(d + 1))

    last = max(P.order, key=vertex_cost)
    order = tuple(v for v in P.order if v != last) + (last,)
    return _Plain(P.p, P.dims, P.mats, P.arrows, order)


def count_subreps(M: Representation, e: Sequence[int], engine: str = "auto", budget: int = DEFAULT_BUDGET) -> int:
    return count_profile_mod_p(M, e, engine, budget).get(tuple(e), 0)


def degree_bound(d: Sequence[int], e: Sequence[int]) -> int:
    """Dimension of the ambient product of Grassmannians."""
    return sum(x * (y - x) for x, y in zip(e, d))


@dataclass
class CountProfile:
    e: tuple[int, ...]
    counts: list[tuple[int, int]]
    poly: list[int]
    euler: int
    degree_cap: int = 0
    held_out: int = 0

    def to_json(self) -> dict:
        return {"e": list(self.e), "counts": [list(c) for c in self.counts], "poly": list(self.poly), "euler": self.euler}


@dataclass
class GrassmannianProfile:
    dims: tuple[int, ...]
    euler: dict[tuple[int, ...], int]
    details: dict[tuple[int, ...], CountProfile] = field(default_factory=dict)
    skipped_primes: list[int] = field(default_factory=list)

    def __getitem__(self, e) -> int:
        return self.euler.get(tuple(e), 0)

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "profile": [self.details[e].to_json() for e in sorted(self.details)]}


def _all_dim_vectors(d: Sequence[int]) -> list[tuple[int, ...]]:
    return [tuple(x) for x in product(*(range(k + 1) for k in d))]


def _reducer(M: Representation):
    if M.field.p:
        raise RepresentationError("interpolation needs a rational representation (integer master)")
    cache: dict[int, Representation] = {}

    def at(p: int) -> Representation:
        if p not in cache:
            cache[p] = reduce_mod(M, p)
        return cache[p]

    return at


_PROFILE_CACHE: dict[tuple, GrassmannianProfile] = {}


def _torus_profile(M: Representation) -> GrassmannianProfile:
    euler = fixedpoints.euler_profile(M)
    details = {e: CountProfile(e, [], [], chi) for e, chi in euler.items()}
    return GrassmannianProfile(M.dims, euler, details)


def grassmannian_profile(M: Representation, primes: Sequence[int] = DEFAULT_PRIMES, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> GrassmannianProfile:
    """Euler characteristics of Gr_e(M) for every 0 <= e <= dim M.

    ``auto`` counts points and falls back to torus fixed points when the
    counts exceed the budget; ``torus`` uses fixed points only.
    """
    cache_key = (M.quiver.arrows, M.key(), tuple(primes), engine, budget)
    hit = _PROFILE_CACHE.get(cache_key)
    if hit is not None:
        return hit
    if engine == "torus":
        prof = _torus_profile(M)
    else:
        try:
            prof = _counted_profile(M, primes, engine, budget)
        except BudgetExceeded:
            if engine != "auto" or not fixedpoints.is_applicable(M):
                raise
            prof = _torus_profile(M)
    _PROFILE_CACHE[cache_key] = prof
    return prof


def _counted_profile(M: Representation, primes, engine: str, budget: int) -> GrassmannianProfile:
    at = _reducer(M)
    keys = _all_dim_vectors(M.dims)
    caps = {e: degree_bound(M.dims, e) for e in keys}
    interp = Interpolator(lambda p: count_profile_mod_p(at(p), None, engine, budget), caps, primes=primes)
    fitted = interp.run()
    details = {}
    euler = {}
    for e, fc in fitted.items():
        chi = fc.value_at_one
        details[e] = CountProfile(e, fc.points, fc.poly, chi, fc.degree_cap, fc.held_out)
        if chi:
            euler[e] = chi
    return GrassmannianProfile(M.dims, euler, details, interp.skipped)


def euler_grassmannian(M: Representation, e: Sequence[int], primes: Sequence[int] = DEFAULT_PRIMES, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> CountProfile:
    """chi(Gr_e(M)) from counts at several primes, with its fitted polynomial."""
    e = tuple(e)
    if len(e) != M.quiver.n or any(x < 0 or x > d for x, d in zip(e, M.dims)):
        raise RepresentationError(f"dimension vector {e} not within {M.dims}")
    at = _reducer(M)
    cap = degree_bound(M.dims, e)
    interp = Interpolator(lambda p: count_profile_mod_p(at(p), e, engine, budget), {e: cap}, primes=primes)
    fc = interp.run()[e]
    return CountProfile(e, fc.points, fc.poly, fc.value_at_one, cap, fc.held_out)


def clear_cache() -> None:
    _PROFILE_CACHE.clear()
