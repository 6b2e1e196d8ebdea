"""The cluster character of modules, shifted projectives and shifted injectives."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .ar import max_injective_summand, max_projective_summand
from .grassmannian import DEFAULT_BUDGET, grassmannian_profile
from .interpolate import DEFAULT_PRIMES
from .laurent import LaurentPolynomial, monomial
from .quiver import Quiver
from .rep import Representation, RepresentationError, socle, top

log = logging.getLogger(__name__)


def _exponent_rmatrix(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> tuple[int, ...]:
    R = Q.ext_matrix()
    rest = [a - b for a, b in zip(d, e)]
    eR = R.row_times(e)
    rRt = R.row_times_tr(rest)
    return tuple(a + b - c for a, b, c in zip(eR, rRt, d))


def _exponent_euler(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> tuple[int, ...]:
    rest = [a - b for a, b in zip(d, e)]
    out = []
    for i in Q.vertices:
        s = [1 if j == i else 0 for j in Q.vertices]
        out.append(-Q.euler_form(e, s) - Q.euler_form(s, rest))
    return tuple(out)


def _assemble(M: Representation, exponent, primes, engine, budget) -> LaurentPolynomial:
    Q = M.quiver
    prof = grassmannian_profile(M, primes, engine, budget)
    terms = {}
    for e, chi in prof.euler.items():
        v = exponent(Q, M.dims, e)
        terms[v] = terms.get(v, 0) + chi
    X = LaurentPolynomial(Q.n, terms)
    if any(c < 0 for c in X.coefficients()):
        log.info("negative coefficient in the character of %r: %s", M, X)
    return X


def cc_module(M: Representation, primes=DEFAULT_PRIMES, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> LaurentPolynomial:
    """sum_e chi(Gr_e M) x^(e R + (d - e) R^tr - d), with R the Ext matrix."""
    return _assemble(M, _exponent_rmatrix, primes, engine, budget)


def cc_module_eulerform(M: Representation, primes=DEFAULT_PRIMES, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> LaurentPolynomial:
    """Same character with exponents -<e, s_i> - <s_i, d - e> from the Euler form."""
    return _assemble(M, _exponent_euler, primes, engine, budget)


def cc_shift_projective(P: Representation) -> LaurentPolynomial:
    """x^(dim top P) for a projective P."""
    _, _, rest = max_projective_summand(P)
    if not rest.is_zero():
        raise RepresentationError(f"{P!r} is not projective")
    return monomial(top(P).dims)


def cc_shift_injective(I: Representation) -> LaurentPolynomial:
    """x^(dim soc I) for an injective I."""
    _, _, rest = max_injective_summand(I)
    if not rest.is_zero():
        raise RepresentationError(f"{I!r} is not injective")
    return monomial(socle(I).dims)


@dataclass
class ClusterObject:
    """A module together with shifted projectives P_i[1] and shifted injectives I_i[-1].

    The shifted parts are multiplicity vectors indexed by vertex.
    """

    quiver: Quiver
    module: Representation | None = None
    shifted_projective: tuple[int, ...] = field(default=())
    shifted_injective: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = self.quiver.n
        self.shifted_projective = tuple(self.shifted_projective) or (0,) * n
        self.shifted_injective = tuple(self.shifted_injective) or (0,) * n
        for part in (self.shifted_projective, self.shifted_injective):
            if len(part) != n or any(m < 0 for m in part):
                raise RepresentationError("shift multiplicities must be nonnegative, one per vertex")


def cc_object(obj: ClusterObject, primes=DEFAULT_PRIMES, engine: str = "auto", budget: int = DEFAULT_BUDGET) -> LaurentPolynomial:
    """Product of the characters of the three parts.

    top(P_i) and soc(I_i) are both S_i, so each shifted copy contributes x_i.
    """
    n = obj.quiver.n
    X = LaurentPolynomial.one(n)
    if obj.module is not None and not obj.module.is_zero():
        X = X * cc_module(obj.module, primes, engine, budget)
    shift = tuple(a + b for a, b in zip(obj.shifted_projective, obj.shifted_injective))
    return X * monomial(shift)
