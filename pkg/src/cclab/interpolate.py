"""Turning point counts at several primes into integer polynomials in q.

Every count in this library is assumed to be a polynomial in the field
size.  That assumption is checked per instance: a fitted polynomial must
have integer coefficients and must predict counts at primes it was not
fitted on.  Any failure raises :class:`NonPolynomialCount`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .rep import BadPrimeError


class NonPolynomialCount(ArithmeticError):
    """Raised when point counts are not explained by an integer polynomial."""


class BudgetExceeded(RuntimeError):
    pass


def _first_primes(n: int) -> list[int]:
    out: list[int] = []
    k = 2
    while len(out) < n:
        if all(k % d for d in out if d * d <= k):
            out.append(k)
        k += 1
    return out


DEFAULT_PRIMES: tuple[int, ...] = tuple(_first_primes(40))


def fit_polynomial(points: list[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (constant first) of the unique degree < len(points) interpolant."""
    n = len(points)
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    # Newton divided differences
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
        for k in range(n):
            new[k] -= xs[i] * poly[k]
        new[0] += coef[i]
        poly = new
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def evaluate(poly: Iterable, x) -> int | Fraction:
    acc = 0
    for c in reversed(list(poly)):
        acc = acc * x + c
    return acc


@dataclass
class FittedCount:
    key: Hashable
    points: list[tuple[int, int]]
    poly: list[int]
    degree_cap: int
    held_out: int

    @property
    def value_at_one(self) -> int:
        return sum(self.poly)


def try_fit(points: list[tuple[int, int]], degree_cap: int) -> tuple[list[int], int] | None:
    """Smallest degree whose fit is integral and predicts at least two further points.

    At the degree cap a single held-out point suffices.  Returns
    ``(poly, held_out_count)`` or ``None`` if more points are needed.
    Raises :class:`NonPolynomialCount` once the cap is exhausted.
    """
    n = len(points)
    for k in range(0, degree_cap + 1):
        need = k + 1 + (1 if k == degree_cap else 2)
        if n < need:
            return None
        poly = fit_polynomial(points[: k + 1])
        if any(c.denominator != 1 for c in poly):
            continue
        if all(evaluate(poly, x) == y for x, y in points[k + 1:]):
            ipoly = [int(c) for c in poly]
            return ipoly, n - k - 1
    raise NonPolynomialCount(
        f"non-polynomial count: no integer polynomial of degree <= {degree_cap} fits {points}"
    )


@dataclass
class Interpolator:
    """Resolve many counting polynomials from one stream of per-prime counts.

    ``count_at(p)`` returns a mapping key -> count (missing keys count 0)
    or raises :class:`BadPrimeError`, in which case the prime is skipped.
    ``degree_caps`` bounds the degree of each key; keys first seen later
    get ``default_cap``.
    """

    count_at: Callable[[int], Mapping[Hashable, int]]
    degree_caps: Mapping[Hashable, int] = field(default_factory=dict)
    default_cap: int | None = None
    primes: Iterable[int] = DEFAULT_PRIMES
    skipped: list[int] = field(default_factory=list)

    def run(self) -> dict[Hashable, FittedCount]:
        caps = dict(self.degree_caps)
        samples: list[tuple[int, Mapping[Hashable, int]]] = []
        keys: list[Hashable] = list(caps)
        done: dict[Hashable, FittedCount] = {}
        for p in self.primes:
            try:
                counts = dict(self.count_at(p))
            except BadPrimeError:
                self.skipped.append(p)
                continue
            for k in counts:
                if k not in caps:
                    if self.default_cap is None:
                        raise NonPolynomialCount(f"unexpected key {k!r} without a degree cap")
                    caps[k] = self.default_cap
                    keys.append(k)
            samples.append((p, counts))
            for k, fc in done.items():
                got = counts.get(k, 0)
                if evaluate(fc.poly, p) != got:
                    raise NonPolynomialCount(
                        f"non-polynomial count for {k!r}: fitted {fc.poly} predicts "
                        f"{evaluate(fc.poly, p)} at q={p}, counted {got}"
                    )
                fc.points.append((p, got))
                fc.held_out += 1
            for k in keys:
                if k in done:
                    continue
                pts = [(q, c.get(k, 0)) for q, c in samples]
                res = try_fit(pts, caps[k])
                if res is not None:
                    done[k] = FittedCount(k, pts, res[0], caps[k], res[1])
            if len(done) == len(keys) and len(samples) >= 2:
                return {k: done[k] for k in keys}
        missing = [k for k in keys if k not in done]
        raise NonPolynomialCount(f"ran out of primes before resolving {missing!r}")
