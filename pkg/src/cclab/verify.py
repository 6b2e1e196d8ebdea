"""Exact checks of cluster-character identities assembled from point counts.

Every Euler characteristic below is the value at q = 1 of a polynomial
fitted to counts over several prime fields.  Strata are grouped by
isomorphism type of the modules involved, recognised through the catalog.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

from .ar import max_injective_summand, max_projective_summand, tau, tau_inverse
from .catalog import Catalog, ar_middle, build_catalog, build_from_parts, decompose
from .cc import cc_module
from .grassmannian import DEFAULT_BUDGET, grassmannian_profile, iter_subreps, subrep_from_rows
from .interpolate import DEFAULT_PRIMES, BudgetExceeded, Interpolator
from .laurent import LaurentPolynomial, monomial
from .linalg import complement_columns, rank
from .rep import (
    BadPrimeError,
    Representation,
    RepresentationError,
    cokernel,
    dim_ext1,
    dim_hom,
    direct_sum,
    extension_space,
    hom_basis,
    hom_from_coordinates,
    iter_vectors,
    kernel,
    middle_term,
    reduce_mod,
)

# full enumeration of m(M, N) is used while q^dim stays below this size;
# beyond it, one representative per extension class is enumerated
FULL_SPACE_LIMIT = 3000


class VerificationError(RuntimeError):
    """A consistency check inside a verification failed (a bug, not a verdict)."""


@dataclass
class StratumReport:
    key: Hashable
    label: str
    counts: list[tuple[int, int]]
    poly: list[int]
    chi: int
    contribution: LaurentPolynomial | None = None

    def to_json(self) -> dict:
        return {
            "stratum": self.label,
            "counts": [list(c) for c in self.counts],
            "poly": self.poly,
            "chi": self.chi,
            "contribution": None if self.contribution is None else str(self.contribution),
        }


@dataclass
class VerificationReport:
    name: str
    lhs: object
    rhs: object
    strata: list[StratumReport] = field(default_factory=list)
    primes: list[int] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, LaurentPolynomial):
                return str(x)
            if isinstance(x, dict):
                return {str(k): enc(v) for k, v in x.items()}
            return x

        return {
            "identity": self.name,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "verdict": self.verdict,
            "strata": [s.to_json() for s in self.strata],
            "primes": self.primes,
            "notes": enc(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.verdict else 'FAIL'}", f"  lhs = {_fmt(self.lhs)}", f"  rhs = {_fmt(self.rhs)}"]
        for s in self.strata:
            tail = "" if s.contribution is None else f"  -> {s.contribution}"
            lines.append(f"  [{s.label}] chi={s.chi} poly={s.poly}{tail}")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _fmt(x) -> str:
    if isinstance(x, dict):
        if not x:
            return "{}"
        return ", ".join(f"{k}: {v}" for k, v in sorted(x.items()))
    return str(x)


# --- helpers ---------------------------------------------------------------

def _check_budget(q: int, dim: int, budget: int, what: str) -> None:
    if q ** dim > budget:
        raise BudgetExceeded(f"{what}: {q}^{dim} points exceed the budget {budget}")


def _exact_div(a: int, b: int, what: str) -> int:
    if a % b:
        raise VerificationError(f"{what}: {a} is not divisible by {b}")
    return a // b


def _reduced(M: Representation, p: int) -> Representation:
    return M if M.field.p == p else reduce_mod(M, p)


def _run(count_at: Callable[[int], Mapping], cap: int, primes: Sequence[int]):
    interp = Interpolator(count_at, {}, default_cap=cap, primes=primes)
    return interp.run(), interp.skipped


def _dec_label(key: tuple) -> str:
    if not key:
        return "0"
    return " + ".join(lab if m == 1 else f"{m}*{lab}" for lab, m in key)


def _mult_label(prefix: str, mult: Sequence[int]) -> str:
    parts = [f"{prefix}{i + 1}" if m == 1 else f"{m}*{prefix}{i + 1}" for i, m in enumerate(mult) if m]
    return " + ".join(parts) or "0"


def _scaling_check(classify, vec: Sequence[int], p: int, expected) -> None:
    for c in range(2, p):
        if classify([c * x % p for x in vec]) != expected:
            raise VerificationError(f"stratum type changes under scaling by {c} at q={p}")


def _no_projective_summand(M: Representation) -> None:
    _, mult, _ = max_projective_summand(M)
    if any(mult):
        raise RepresentationError(f"{M!r} has a projective summand")


def _projective_mult(P: Representation) -> list[int]:
    _, mult, rest = max_projective_summand(P)
    if not rest.is_zero():
        raise RepresentationError(f"{P!r} is not projective")
    return mult


def _injective_mult(I: Representation) -> list[int]:
    _, mult, rest = max_injective_summand(I)
    if not rest.is_zero():
        raise RepresentationError(f"{I!r} is not injective")
    return mult


class _CC:
    """Cluster characters of catalog decompositions, memoised."""

    def __init__(self, cat: Catalog, primes, budget):
        self.cat = cat
        self.primes = primes
        self.budget = budget
        self.memo: dict[tuple, LaurentPolynomial] = {}

    def __call__(self, key: tuple) -> LaurentPolynomial:
        if key not in self.memo:
            n = self.cat.quiver.n
            X = LaurentPolynomial.one(n)
            for lab, m in key:
                X = X * cc_module(self.cat.get(lab), self.primes, budget=self.budget) ** m
            self.memo[key] = X
        return self.memo[key]

    def rep(self, key: tuple) -> Representation:
        return build_from_parts(self.cat, dict(key))


# --- the two stratifications -------------------------------------------------

def stratify_ext(M: Representation, N: Representation, primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET,
                 catalog: Catalog | None = None, check_scaling: bool = True) -> list[StratumReport]:
    """chi of the projectivised extension classes with a given middle term.

    Classes are extensions ``0 -> N -> L -> M -> 0``.  While the whole
    space m(M, N) is small every point is classified and raw counts are
    divided by the size of the kernel of m(M, N) -> Ext^1(M, N);
    otherwise one point per class is taken from a fixed complement.
    """
    cat = catalog or build_catalog(M.quiver)
    e = dim_ext1(M, N)
    if e == 0:
        return []
    cc = _CC(cat, primes, budget)

    def count_at(p: int) -> dict:
        Mp, Np = _reduced(M, p), _reduced(N, p)
        layout, delta = extension_space(Mp, Np)
        D = len(layout)
        r = rank(delta)
        if D - r != e:
            raise BadPrimeError(f"dim Ext^1 jumps modulo {p}")

        def classify(m):
            return decompose(middle_term(Mp, Np, layout, m), cat).key()

        raw: dict = {}
        seen: set = set()
        if p ** D <= FULL_SPACE_LIMIT:
            for m in iter_vectors(Mp.field, D):
                if not any(m):
                    continue
                k = classify(m)
                raw[k] = raw.get(k, 0) + 1
                if check_scaling and k not in seen:
                    seen.add(k)
                    _scaling_check(classify, m, p, k)
            kerpi = p ** r
            split = decompose(direct_sum(Np, Mp), cat).key()
            # points of ker(pi) other than 0 have the split middle term
            raw[split] = raw.get(split, 0) - (kerpi - 1)
            classes = {k: _exact_div(v, kerpi, "extension class count") for k, v in raw.items()}
            if classes.get(split, 0) < 0:
                raise VerificationError("split middle term counted fewer times than ker(pi)")
            if classes.get(split) == 0:
                del classes[split]
        else:
            _check_budget(p, e, budget, "extension classes")
            comp = complement_columns(delta)
            classes = {}
            for c in iter_vectors(Mp.field, e):
                if not any(c):
                    continue
                m = [0] * D
                for idx, v in zip(comp, c):
                    m[idx] = v
                k = classify(m)
                classes[k] = classes.get(k, 0) + 1
                if check_scaling and k not in seen:
                    seen.add(k)
                    _scaling_check(classify, m, p, k)
        if sum(classes.values()) + 1 != p ** e:
            raise VerificationError(f"extension classes do not add up to q^{e} at q={p}")
        return {k: _exact_div(v, p - 1, "projectivisation") for k, v in classes.items()}

    fitted, _ = _run(count_at, e - 1, primes)
    out = []
    for k in sorted(fitted, key=str):
        fc = fitted[k]
        chi = fc.value_at_one
        if chi == 0 and not any(c for _, c in fc.points):
            continue
        out.append(StratumReport(k, _dec_label(k), fc.points, fc.poly, chi, cc(k).scale(chi)))
    return out


def stratify_hom_tau(N: Representation, M: Representation, primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET,
                     catalog: Catalog | None = None, check_scaling: bool = True) -> list[StratumReport]:
    """Strata of the projectivised Hom(N, tau M) by the types of ker g and coker g.

    ``coker g`` is split as ``tau U + I`` with ``I`` its largest injective
    summand; the key is (type of ker g, type of U, multiplicities of I).
    """
    _no_projective_summand(M)
    cat = catalog or build_catalog(M.quiver)
    h = dim_hom(N, tau(M))
    if h == 0:
        return []
    cc = _CC(cat, primes, budget)

    def count_at(p: int) -> dict:
        Np = _reduced(N, p)
        tMp = tau(_reduced(M, p))
        basis = hom_basis(Np, tMp)
        if len(basis) != h:
            raise BadPrimeError(f"dim Hom jumps modulo {p}")
        _check_budget(p, h, budget, "Hom(N, tau M)")

        def classify(c):
            g = hom_from_coordinates(Np, tMp, basis, c)
            V, _ = kernel(g)
            C, _ = cokernel(g)
            _, imult, rest = max_injective_summand(C)
            U = tau_inverse(rest)
            return (decompose(V, cat).key(), decompose(U, cat).key(), tuple(imult))

        counts: dict = {}
        seen: set = set()
        for c in iter_vectors(Np.field, h):
            if not any(c):
                continue
            k = classify(c)
            counts[k] = counts.get(k, 0) + 1
            if check_scaling and k not in seen:
                seen.add(k)
                _scaling_check(classify, c, p, k)
        return {k: _exact_div(v, p - 1, "projectivisation") for k, v in counts.items()}

    fitted, _ = _run(count_at, h - 1, primes)
    out = []
    for k in sorted(fitted, key=str):
        fc = fitted[k]
        Vk, Uk, imult = k
        label = f"V={_dec_label(Vk)}; U={_dec_label(Uk)}; I={_mult_label('I', imult)}"
        contrib = (cc(Vk) * cc(Uk) * monomial(imult)).scale(fc.value_at_one)
        out.append(StratumReport(k, label, fc.points, fc.poly, fc.value_at_one, contrib))
    return out


def _total(n: int, strata: Sequence[StratumReport]) -> LaurentPolynomial:
    acc = LaurentPolynomial.zero(n)
    for s in strata:
        acc = acc + s.contribution
    return acc


def _primes_used(strata: Sequence[StratumReport]) -> list[int]:
    ps: set = set()
    for s in strata:
        ps.update(p for p, _ in s.counts)
    return sorted(ps)


# --- identities --------------------------------------------------------------

def verify_theorem_part1(M: Representation, N: Representation, primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET,
                         catalog: Catalog | None = None) -> VerificationReport:
    """dim Ext^1(M,N) X_M X_N against the extension strata plus the Hom(N, tau M) strata."""
    _no_projective_summand(M)
    n = M.quiver.n
    e = dim_ext1(M, N)
    lhs = (cc_module(M, primes, budget=budget) * cc_module(N, primes, budget=budget)).scale(e)
    s1 = stratify_ext(M, N, primes, budget, catalog)
    s2 = stratify_hom_tau(N, M, primes, budget, catalog)
    rhs = _total(n, s1) + _total(n, s2)
    name = f"product formula ({M.label or M.dims}, {N.label or N.dims})"
    rep = VerificationReport(name, lhs, rhs, s1 + s2, _primes_used(s1 + s2))
    rep.notes = {"dim_ext1": e, "dim_hom_n_tau_m": dim_hom(N, tau(M))}
    return rep


def verify_theorem_part2(P: Representation, M: Representation, primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET,
                         catalog: Catalog | None = None) -> VerificationReport:
    """dim Hom(P,M) X_M x^(dim top P) against strata of Hom(M, I) and Hom(P, M).

    ``I`` is the injective with the same multiplicities as ``P``.
    """
    Q = M.quiver
    n = Q.n
    cat = catalog or build_catalog(Q)
    mult = _projective_mult(P)
    from .ar import injective_for_projective

    I = injective_for_projective(mult, Q, M.field)
    h = dim_hom(P, M)
    lhs = (cc_module(M, primes, budget=budget) * monomial(mult)).scale(h)
    cc = _CC(cat, primes, budget)

    def strata_of(src: Representation, dst: Representation, classify_g, label_of, contrib_of):
        d = dim_hom(src, dst)
        if d == 0:
            return []

        def count_at(p: int) -> dict:
            S, T = _reduced(src, p), _reduced(dst, p)
            basis = hom_basis(S, T)
            if len(basis) != d:
                raise BadPrimeError(f"dim Hom jumps modulo {p}")
            _check_budget(p, d, budget, "Hom space")

            def classify(c):
                return classify_g(hom_from_coordinates(S, T, basis, c))

            counts: dict = {}
            seen: set = set()
            for c in iter_vectors(S.field, d):
                if not any(c):
                    continue
                k = classify(c)
                counts[k] = counts.get(k, 0) + 1
                if k not in seen:
                    seen.add(k)
                    _scaling_check(classify, c, p, k)
            return {k: _exact_div(v, p - 1, "projectivisation") for k, v in counts.items()}

        fitted, _ = _run(count_at, d - 1, primes)
        return [
            StratumReport(k, label_of(k), fc.points, fc.poly, fc.value_at_one, contrib_of(k).scale(fc.value_at_one))
            for k, fc in sorted(fitted.items(), key=lambda kv: str(kv[0]))
        ]

    def into_injective(g):
        V, _ = kernel(g)
        C, _ = cokernel(g)
        return (decompose(V, cat).key(), tuple(_injective_mult(C)))

    def from_projective(f):
        K, _ = kernel(f)
        C, _ = cokernel(f)
        return (tuple(_projective_mult(K)), decompose(C, cat).key())

    sa = strata_of(M, I, into_injective,
                   lambda k: f"V={_dec_label(k[0])}; I'={_mult_label('I', k[1])}",
                   lambda k: cc(k[0]) * monomial(k[1]))
    sb = strata_of(P, M, from_projective,
                   lambda k: f"P'={_mult_label('P', k[0])}; U={_dec_label(k[1])}",
                   lambda k: cc(k[1]) * monomial(k[0]))
    rhs = _total(n, sa) + _total(n, sb)
    name = f"projective formula ({P.label or P.dims}, {M.label or M.dims})"
    return VerificationReport(name, lhs, rhs, sa + sb, _primes_used(sa + sb), {"dim_hom": h})


def verify_ar_identity(M: Representation, primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET,
                       catalog: Catalog | None = None) -> VerificationReport:
    """X_M X_{tau M} = 1 + X_B for the almost split sequence ending in M."""
    B = ar_middle(M, catalog)
    XM = cc_module(M, primes, budget=budget)
    lhs = XM * cc_module(tau(M), primes, budget=budget)
    rhs = cc_module(B, primes, budget=budget) + 1
    dec = decompose(B, catalog)
    return VerificationReport(f"mesh relation ({M.label or M.dims})", lhs, rhs, notes={"middle": str(dec)})


def _hoa_lhs(strata: Sequence[StratumReport], M: Representation, cat: Catalog, primes, budget) -> dict:
    out: dict = {}
    for s in strata:
        Vk, Uk, _ = s.key
        V = build_from_parts(cat, dict(Vk))
        U = build_from_parts(cat, dict(Uk))
        gV = grassmannian_profile(V, primes, budget=budget).euler if not V.is_zero() else {V.dims: 1}
        gU = grassmannian_profile(U, primes, budget=budget).euler if not U.is_zero() else {U.dims: 1}
        for e1, c1 in gV.items():
            for e2, c2 in gU.items():
                d = tuple(a + b + m - u for a, b, m, u in zip(e1, e2, M.dims, U.dims))
                out[d] = out.get(d, 0) + s.chi * c1 * c2
    return {d: v for d, v in out.items() if v}


def _hoa_rhs_counts(M: Representation, N: Representation, p: int) -> dict:
    Mp, Np = _reduced(M, p), _reduced(N, p)
    subN = [subrep_from_rows(Np, b) for b in iter_subreps(Np)]
    subM = [subrep_from_rows(Mp, b) for b in iter_subreps(Mp)]
    quots = [(S.dims, S.quotient()[0]) for S in subN]
    taus = [(S.dims, tau(S.rep)) for S in subM]
    out: dict = {}
    for e1, Qn in quots:
        for e2, T in taus:
            h = dim_hom(Qn, T) if not (Qn.is_zero() or T.is_zero()) else 0
            if h == 0:
                continue
            d = tuple(a + b for a, b in zip(e1, e2))
            out[d] = out.get(d, 0) + (p ** h - 1) // (p - 1)
    return out


def verify_high_order_assoc(M: Representation, N: Representation, d: Sequence[int] | None = None,
                            primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET,
                            catalog: Catalog | None = None) -> VerificationReport:
    """Flag-side and extension-side Euler characteristics, per total dimension vector d.

    Left: strata (V, U, I) of the projectivised Hom(N, tau M) weighted by
    chi(Gr_e1 V) chi(Gr_e2 U), collected at d = e1 + e2 + dim M - dim U.
    Right: pairs N1 <= N, M1 <= M with dim N1 + dim M1 = d, each weighted
    by the number of lines in Hom(N/N1, tau M1).  With ``d`` omitted,
    every d is compared.
    """
    _no_projective_summand(M)
    cat = catalog or build_catalog(M.quiver)
    strata = stratify_hom_tau(N, M, primes, budget, cat)
    lhs = _hoa_lhs(strata, M, cat, primes, budget)
    cap = sum(N.dims) * sum(M.dims) + sum(a * a for a in N.dims) + sum(a * a for a in M.dims)
    fitted, _ = _run(lambda p: _hoa_rhs_counts(M, N, p), cap, primes)
    rhs = {k: fc.value_at_one for k, fc in fitted.items() if fc.value_at_one}
    if d is not None:
        d = tuple(d)
        lhs = {d: lhs.get(d, 0)}
        rhs = {d: rhs.get(d, 0)}
    name = f"high order associativity ({M.label or M.dims}, {N.label or N.dims})"
    rep = VerificationReport(name, lhs, rhs, strata, _primes_used(strata))
    rep.notes = {"rhs_polys": {str(k): fc.poly for k, fc in fitted.items()}}
    return rep


# --- coarsening ---------------------------------------------------------------

def coarsen_by_profile(strata: Sequence[StratumReport], cat: Catalog, primes=DEFAULT_PRIMES,
                       budget: int = DEFAULT_BUDGET) -> dict:
    """Merge extension strata whose middle terms share all Grassmannian Euler characteristics."""
    groups: dict = {}
    for s in strata:
        L = build_from_parts(cat, dict(s.key))
        prof = grassmannian_profile(L, primes, budget=budget).euler
        key = (L.dims, tuple(sorted(prof.items())))
        groups.setdefault(key, []).append(s)
    return groups


# --- the Kronecker example -------------------------------------------------------

def kronecker_demo(nmax: int = 4, primes=DEFAULT_PRIMES, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Characters of S1, S2, u0 and the tube recurrence on the Kronecker quiver.

    Checks r_{k+1} = r_1 r_k - r_{k-1} for 1 <= k < nmax and the three
    quadratic identities, and records which sign of
    ``r_1 r_n = r_{n+1} +- r_{n-1}`` holds.
    """
    from .catalog import kronecker_regular
    from .quiver import kronecker_quiver
    from .rep import simple

    Q = kronecker_quiver()
    need = max(nmax, 4)
    r = [LaurentPolynomial.one(2)] + [cc_module(kronecker_regular(Q, "0", n), primes, budget=budget) for n in range(1, need + 1)]
    x0 = cc_module(simple(Q, 1), primes, budget=budget)
    x3 = cc_module(simple(Q, 0), primes, budget=budget)
    checks = {}
    for k in range(1, nmax):
        checks[f"r{k + 1} = r1*r{k} - r{k - 1}"] = r[k + 1] == r[1] * r[k] - r[k - 1]
    checks["r1^2 = r2 + 1"] = r[1] ** 2 == r[2] + 1
    checks["r2^2 = r1*r3 + 1"] = r[2] ** 2 == r[1] * r[3] + 1
    checks["2*r2^2 = r4 + r1*r3 + r1^2 + 1"] = r[2] ** 2 * 2 == r[4] + r[1] * r[3] + r[1] ** 2 + 1
    checks["r2^2 = r4 + r1^2"] = r[2] ** 2 == r[4] + r[1] ** 2
    signs = {}
    for k in range(1, nmax):
        plus = r[1] * r[k] == r[k + 1] + r[k - 1]
        minus = r[1] * r[k] == r[k + 1] - r[k - 1]
        signs[k] = "+" if plus and not minus else "-" if minus and not plus else "both" if plus else "neither"
    notes = {"x0 = X_S2": x0, "x3 = X_S1": x3, "X_u0": r[1], "sign": signs}
    for n in range(2, need + 1):
        notes[f"r{n}"] = r[n]
    ok = all(checks.values())
    rep = VerificationReport("kronecker example", ok, True, notes=notes)
    rep.notes["checks"] = checks
    return rep
