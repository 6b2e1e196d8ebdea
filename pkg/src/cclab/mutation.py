"""Cluster variables by iterated seed mutation, as an oracle independent of modules."""

from __future__ import annotations

from collections import deque

import sympy

from .laurent import LaurentError, LaurentPolynomial
from .quiver import Quiver, dynkin_type

SEED_LIMIT = 20000


class MutationError(ValueError):
    pass


def exchange_matrix(Q: Quiver) -> tuple[tuple[int, ...], ...]:
    """Skew-symmetric b_ij = #(i -> j) - #(j -> i)."""
    B = [[0] * Q.n for _ in range(Q.n)]
    for a in Q.arrows:
        B[a.source][a.target] += 1
        B[a.target][a.source] -= 1
    return tuple(tuple(r) for r in B)


def mutate_matrix(B, k: int):
    n = len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-B[i][j])
            else:
                bik, bkj = B[i][k], B[k][j]
                sign = (bik > 0) - (bik < 0)
                row.append(B[i][j] + sign * max(bik * bkj, 0))
        out.append(tuple(row))
    return tuple(out)


def mutate_seed(cluster, B, k: int):
    """One exchange: x_k x_k' = prod_{b_ik > 0} x_i^b_ik + prod_{b_ik < 0} x_i^-b_ik."""
    pos = sympy.Integer(1)
    neg = sympy.Integer(1)
    for i, x in enumerate(cluster):
        b = B[i][k]
        if b > 0:
            pos *= x ** b
        elif b < 0:
            neg *= x ** (-b)
    new = sympy.cancel((pos + neg) / cluster[k])
    return cluster[:k] + (new,) + cluster[k + 1:], mutate_matrix(B, k)


def to_laurent(expr, symbols) -> LaurentPolynomial:
    """Convert a rational function with monomial denominator."""
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    dpoly = sympy.Poly(den, *symbols)
    if len(dpoly.terms()) != 1:
        raise LaurentError(f"{expr} is not a Laurent polynomial")
    (dexp, dcoef), = dpoly.terms()
    terms = {}
    for exp, coef in sympy.Poly(num, *symbols).terms():
        c = sympy.Rational(coef, dcoef)
        if c.q != 1:
            raise LaurentError(f"{expr} has a non-integer coefficient")
        terms[tuple(a - b for a, b in zip(exp, dexp))] = int(c)
    return LaurentPolynomial(len(symbols), terms)


def fz_mutation_oracle(Q: Quiver, seed_limit: int = SEED_LIMIT) -> set[LaurentPolynomial]:
    """All cluster variables reachable from the initial seed of ``Q``."""
    if Q.n < 2:
        raise MutationError("mutation oracle needs at least two vertices")
    if dynkin_type(Q) is None:
        raise MutationError("mutation oracle only saturates for Dynkin quivers")
    xs = sympy.symbols(f"x1:{Q.n + 1}")
    start = (tuple(xs), exchange_matrix(Q))
    # a cluster determines its seed, so unordered clusters label the exchange graph
    seen = {frozenset(map(sympy.srepr, start[0]))}
    variables = {sympy.srepr(x): x for x in xs}
    queue = deque([start])
    while queue:
        cluster, B = queue.popleft()
        for k in range(Q.n):
            new_cluster, new_B = mutate_seed(cluster, B, k)
            key = frozenset(map(sympy.srepr, new_cluster))
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > seed_limit:
                raise MutationError(f"more than {seed_limit} seeds; no saturation")
            variables.setdefault(sympy.srepr(new_cluster[k]), new_cluster[k])
            queue.append((new_cluster, new_B))
    return {to_laurent(v, xs) for v in variables.values()}
