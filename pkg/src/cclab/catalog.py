"""Indecomposable modules of Dynkin quivers and of the Kronecker quiver.

Isomorphism classes are recognised by Hom fingerprints: for the quivers
handled here the vector ``(dim Hom(X, M))_X`` over the indecomposables
``X`` determines ``M`` up to isomorphism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .ar import max_projective_summand, tau, tau_inverse
from .linalg import QQ, Matrix, complement_columns, rank, solve
from .quiver import Quiver, dynkin_type, is_kronecker
from .rep import (
    BadPrimeError,
    Representation,
    dim_ext1,
    dim_hom,
    direct_sum,
    extension_space,
    middle_term,
    projective,
    reduce_mod,
)

DEFAULT_REGULAR_CAP = 8
DEFAULT_COMPONENT_CAP = 6
# Dynkin AR quivers are finite; this only guards against a wrong input
_DYNKIN_LIMIT = 500


class CatalogError(ValueError):
    """Unsupported quiver, or a module that the catalog cannot account for."""


LAMBDAS = ("0", "1", "inf")


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _jordan(n: int) -> list[list[int]]:
    return [[int(j == i + 1) for j in range(n)] for i in range(n)]


def kronecker_regular(Q: Quiver, lam: str, n: int, field=QQ) -> Representation:
    """``u[lam](n)``: ``(I, J)``, ``(I, I + J)`` or ``(J, I)`` on ``F^n -> F^n``."""
    if n < 1:
        raise CatalogError("regular modules need n >= 1")
    I, J = _identity(n), _jordan(n)
    if lam == "0":
        a, b = I, J
    elif lam == "1":
        a, b = I, [[x + y for x, y in zip(r, s)] for r, s in zip(I, J)]
    elif lam == "inf":
        a, b = J, I
    else:
        raise CatalogError(f"unknown regular family {lam!r}; expected one of {LAMBDAS}")
    names = [x.name for x in Q.arrows]
    return Representation.from_lists(Q, (n, n), {names[0]: a, names[1]: b}, field, f"u[{lam}]({n})")


def kronecker_preprojective(Q: Quiver, k: int, field=QQ) -> Representation:
    """k-th preprojective: dimension ``(k, k+1)`` with arrows ``[I; 0]`` and ``[0; I]``."""
    a = [[int(r == c) for c in range(k)] for r in range(k + 1)]
    b = [[int(r == c + 1) for c in range(k)] for r in range(k + 1)]
    names = [x.name for x in Q.arrows]
    return Representation.from_lists(Q, (k, k + 1), {names[0]: a, names[1]: b}, field, _pp_label(k))


def kronecker_preinjective(Q: Quiver, k: int, field=QQ) -> Representation:
    """k-th preinjective: dimension ``(k+1, k)`` with arrows ``[I | 0]`` and ``[0 | I]``."""
    a = [[int(r == c) for c in range(k + 1)] for r in range(k)]
    b = [[int(c == r + 1) for c in range(k + 1)] for r in range(k)]
    names = [x.name for x in Q.arrows]
    return Representation.from_lists(Q, (k + 1, k), {names[0]: a, names[1]: b}, field, _pi_label(k))


def _pp_label(k: int) -> str:
    # position k in P2, P1, tau^-1 P2, tau^-1 P1, ...
    vertex = 1 if k % 2 else 2
    t = k // 2
    return f"P{vertex}" if t == 0 else f"tau^-{t} P{vertex}"


def _pi_label(k: int) -> str:
    vertex = 2 if k % 2 else 1
    t = k // 2
    return f"I{vertex}" if t == 0 else f"tau^{t} I{vertex}"


@dataclass
class Member:
    label: str
    rep: Representation
    kind: str

    @property
    def dims(self) -> tuple[int, ...]:
        return self.rep.dims


@dataclass
class Decomposition:
    """Multiset of catalog labels; ``parts`` maps label to multiplicity."""

    parts: dict[str, int]
    dims: tuple[int, ...]

    def key(self) -> tuple:
        return tuple(sorted(self.parts.items()))

    def __str__(self) -> str:
        if not self.parts:
            return "0"
        return " + ".join(lab if m == 1 else f"{m}*{lab}" for lab, m in sorted(self.parts.items()))

    def is_indecomposable(self) -> bool:
        return sum(self.parts.values()) == 1


@dataclass
class Catalog:
    quiver: Quiver
    members: list[Member]
    ar_order: list[int]
    caps: dict = field(default_factory=dict)
    _hom: dict = field(default_factory=dict, repr=False)
    _reduced: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return [m.label for m in self.members]

    def index(self, label: str) -> int:
        for k, m in enumerate(self.members):
            if m.label == label:
                return k
        raise CatalogError(f"no catalog member labelled {label!r}")

    def get(self, label: str, field=QQ) -> Representation:
        return self.member_rep(self.index(label), field.p)

    def member_rep(self, k: int, p: int = 0) -> Representation:
        if p == 0:
            return self.members[k].rep
        key = (k, p)
        if key not in self._reduced:
            self._reduced[key] = reduce_mod(self.members[k].rep, p)
        return self._reduced[key]

    def hom_dim(self, j: int, k: int, p: int = 0) -> int:
        """dim Hom(X_j, X_k) over QQ (p = 0) or F_p."""
        key = (j, k, p)
        if key not in self._hom:
            d = dim_hom(self.member_rep(j, p), self.member_rep(k, p))
            if p and d != self.hom_dim(j, k, 0):
                raise BadPrimeError(f"Hom dimension between catalog members jumps modulo {p}")
            self._hom[key] = d
        return self._hom[key]

    def hom_table(self, p: int = 0) -> list[list[int]]:
        n = len(self.members)
        return [[self.hom_dim(j, k, p) for k in range(n)] for j in range(n)]

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.name,
            "caps": self.caps,
            "members": [
                {"label": m.label, "kind": m.kind, "dims": list(m.dims), "matrices": m.rep.to_json()["matrices"]}
                for m in self.members
            ],
            "hom_table": self.hom_table(),
            "ar_order": [self.members[k].label for k in self.ar_order],
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


def _topological(n: int, before: Sequence[Sequence[bool]]) -> list[int]:
    """Order indices so that ``before[j][k]`` implies j comes first; ties by index."""
    indeg = [sum(before[j][k] for j in range(n) if j != k) for k in range(n)]
    ready = [k for k in range(n) if indeg[k] == 0]
    out: list[int] = []
    while ready:
        ready.sort()
        j = ready.pop(0)
        out.append(j)
        for k in range(n):
            if k != j and before[j][k]:
                indeg[k] -= 1
                if indeg[k] == 0:
                    ready.append(k)
    if len(out) != n:
        raise CatalogError("Hom relation among catalog members has a cycle")
    return out


def _build_dynkin(Q: Quiver) -> Catalog:
    members: list[Member] = []
    for i in Q.order:
        M = projective(Q, i)
        k = 0
        while not M.is_zero():
            label = f"P{i + 1}" if k == 0 else f"tau^-{k} P{i + 1}"
            members.append(Member(label, M.with_label(label), "preprojective"))
            if len(members) > _DYNKIN_LIMIT:
                raise CatalogError("too many indecomposables; is the quiver really Dynkin?")
            M = tau_inverse(M)
            k += 1
    cat = Catalog(Q, members, [], {})
    n = len(members)
    table = cat.hom_table()
    cat.ar_order = _topological(n, [[table[j][k] > 0 for k in range(n)] for j in range(n)])
    return cat


def _build_kronecker(Q: Quiver, regular_cap: int, component_cap: int) -> Catalog:
    members: list[Member] = []
    for k in range(component_cap + 1):
        members.append(Member(_pp_label(k), kronecker_preprojective(Q, k), "preprojective"))
    for lam in LAMBDAS:
        for n in range(1, regular_cap + 1):
            members.append(Member(f"u[{lam}]({n})", kronecker_regular(Q, lam, n), "regular"))
    for k in range(component_cap + 1):
        members.append(Member(_pi_label(k), kronecker_preinjective(Q, k), "preinjective"))
    caps = {"regular": regular_cap, "component": component_cap}
    return Catalog(Q, members, list(range(len(members))), caps)


_CATALOGS: dict = {}


def build_catalog(Q: Quiver, regular_cap: int = DEFAULT_REGULAR_CAP, component_cap: int = DEFAULT_COMPONENT_CAP) -> Catalog:
    """All indecomposables (Dynkin) or the capped Kronecker families.

    Kronecker preprojectives are indexed 0, 1, 2, ... along the component
    (P2, P1, tau^-1 P2, ...); ``component_cap`` bounds that index, and
    likewise for preinjectives.  Regulars are ``u[lam](n)`` for
    ``n <= regular_cap``.
    """
    key = (Q, Q.name, regular_cap, component_cap)
    if key in _CATALOGS:
        return _CATALOGS[key]
    if is_kronecker(Q):
        cat = _build_kronecker(Q, regular_cap, component_cap)
    elif dynkin_type(Q) is not None:
        cat = _build_dynkin(Q)
    else:
        raise CatalogError(f"quiver {Q.name or Q!r} is neither Dynkin nor Kronecker")
    _CATALOGS[key] = cat
    return cat


def decompose(M: Representation, catalog: Catalog | None = None) -> Decomposition:
    """Multiplicities of catalog members in ``M`` from Hom fingerprints.

    Only members whose dimension vector fits inside ``dim M`` can occur,
    and the Hom matrix restricted to them is invertible, so the linear
    system has a unique rational solution.  It is accepted only if it is
    a nonnegative integer vector that reproduces ``dim M`` and ``dim End M``.
    """
    cat = catalog or build_catalog(M.quiver)
    if M.is_zero():
        return Decomposition({}, M.dims)
    p = M.field.p
    cand = [k for k, m in enumerate(cat.members) if all(a <= b for a, b in zip(m.dims, M.dims))]
    if not cand:
        raise CatalogError(f"no catalog member fits inside dimension {M.dims}")
    A = Matrix(QQ, [[cat.hom_dim(j, k, p) for k in cand] for j in cand], len(cand))
    b = Matrix(QQ, [[dim_hom(cat.member_rep(j, p), M)] for j in cand], 1)
    x = solve(A, b)
    if x is None or rank(A) < len(cand):
        raise CatalogError("Hom fingerprint system is singular; the catalog is inconsistent")
    mult = [Fraction(r[0]) for r in x.rows]
    if any(m.denominator != 1 or m < 0 for m in mult):
        raise CatalogError(f"module {M!r} is not a sum of catalog members (outside the caps?)")
    mult_i = [int(m) for m in mult]
    dims = [0] * M.quiver.n
    for m, k in zip(mult_i, cand):
        for v in range(len(dims)):
            dims[v] += m * cat.members[k].dims[v]
    if tuple(dims) != M.dims:
        raise CatalogError(f"module {M!r} is not a sum of catalog members (dimension mismatch)")
    end = sum(mj * mk * cat.hom_dim(j, k, p) for mj, j in zip(mult_i, cand) for mk, k in zip(mult_i, cand))
    if end != dim_hom(M, M):
        raise CatalogError(f"module {M!r} is not a sum of catalog members (End mismatch)")
    parts = {cat.members[k].label: m for m, k in zip(mult_i, cand) if m}
    return Decomposition(parts, M.dims)


def is_isomorphic(M: Representation, N: Representation, catalog: Catalog | None = None) -> bool:
    if M.dims != N.dims:
        return False
    return decompose(M, catalog).key() == decompose(N, catalog).key()


def build_from_parts(cat: Catalog, parts: Mapping[str, int], field=QQ) -> Representation:
    reps = [cat.get(lab, field) for lab, m in sorted(parts.items()) for _ in range(m)]
    if not reps:
        return Representation.zero(cat.quiver, field)
    return direct_sum(*reps) if len(reps) > 1 else reps[0]


def _nonsplit_middle(M: Representation, target: Decomposition | None, cat: Catalog):
    """Middle term of an extension of M by tau M along a basis class of Ext^1.

    With ``target`` given, the first basis class whose middle term has that
    decomposition is used; otherwise any class that does not split.
    """
    N = tau(M)
    layout, delta = extension_space(M, N)
    split = decompose(direct_sum(N, M), cat).key()
    for c in complement_columns(delta):
        m = [0] * len(layout)
        m[c] = 1
        L = middle_term(M, N, layout, m)
        d = decompose(L, cat)
        if d.key() == split:
            continue
        if target is None or d.key() == target.key():
            return L
    return None


def ar_middle(M: Representation, catalog: Catalog | None = None) -> Representation:
    """Middle term B of the almost split sequence ``0 -> tau M -> B -> M -> 0``."""
    Q = M.quiver
    cat = catalog or build_catalog(Q)
    dec = decompose(M, cat)
    if not dec.is_indecomposable():
        raise CatalogError(f"{M!r} is not indecomposable")
    _, mult, _ = max_projective_summand(M)
    if any(mult):
        raise CatalogError(f"{M!r} is projective; it ends no almost split sequence")
    (label,) = dec.parts
    if is_kronecker(Q) and label.startswith("u["):
        lam, n = label[2:].split("](")
        n = int(n.rstrip(")"))
        parts = {f"u[{lam}]({n + 1})": 1}
        if n > 1:
            parts[f"u[{lam}]({n - 1})"] = 1
        for lab in parts:
            cat.index(lab)
        target = Decomposition(parts, tuple(2 * d for d in M.dims))
        L = _nonsplit_middle(M, target, cat)
        if L is None:
            raise CatalogError(f"no extension of {label} by its translate has middle term {target}")
        return build_from_parts(cat, parts, M.field)
    e = dim_ext1(M, tau(M))
    if e != 1:
        raise CatalogError(f"dim Ext^1(M, tau M) = {e}; only the one-dimensional case is supported")
    L = _nonsplit_middle(M, None, cat)
    if L is None:
        raise CatalogError("the extension class splits; the translate is wrong")
    return L
