"""Laurent polynomials in x1..xn with integer coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class LaurentError(ValueError):
    pass


def _term_key(v: tuple[int, ...]) -> tuple:
    # higher total degree first, ties in ascending lexicographic order
    return (-sum(v), v)


class LaurentPolynomial:
    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], int] | Iterable = ()):
        self.n = n
        acc: dict[tuple[int, ...], int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for v, c in items:
            v = tuple(int(x) for x in v)
            if len(v) != n:
                raise LaurentError(f"exponent {v} has length {len(v)}, expected {n}")
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise LaurentError(f"non-integer coefficient {c}")
                c = c.numerator
            elif not isinstance(c, int):
                raise LaurentError(f"non-integer coefficient {c!r}")
            acc[v] = acc.get(v, 0) + c
        self.terms = {v: acc[v] for v in sorted(acc, key=_term_key) if acc[v]}
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "LaurentPolynomial":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "LaurentPolynomial":
        return cls(n, {(0,) * n: 1})

    @classmethod
    def variable(cls, n: int, i: int) -> "LaurentPolynomial":
        """x_{i+1} (0-indexed ``i``)."""
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): 1})

    def _check(self, other: "LaurentPolynomial") -> None:
        if not isinstance(other, LaurentPolynomial):
            raise TypeError(f"expected LaurentPolynomial, got {type(other).__name__}")
        if other.n != self.n:
            raise LaurentError(f"variable-count mismatch: {self.n} vs {other.n}")

    def _lift(self, other):
        if isinstance(other, int):
            return LaurentPolynomial(self.n, {(0,) * self.n: other})
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        return LaurentPolynomial(self.n, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.n, {v: -c for v, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        acc: dict[tuple[int, ...], int] = {}
        for v, c in self.terms.items():
            for w, d in other.terms.items():
                u = tuple(a + b for a, b in zip(v, w))
                acc[u] = acc.get(u, 0) + c * d
        return LaurentPolynomial(self.n, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise LaurentError("only monomials can be inverted")
            (v, c), = self.terms.items()
            if c not in (1, -1):
                raise LaurentError("only unit monomials can be inverted")
            return LaurentPolynomial(self.n, {tuple(x * k for x in v): c ** -k})
        out = LaurentPolynomial.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self.n, {v: c * x for v, x in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial(self.n, {(0,) * self.n: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, tuple(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({to_text(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"exponent": list(v), "coefficient": c} for v, c in self.terms.items()]

    def coefficients(self) -> list[int]:
        return list(self.terms.values())

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for v, c in self.terms.items():
            t = Fraction(c)
            for x, e in zip(point, v):
                t *= Fraction(x) ** e
            total += t
        return total


def monomial(v: Sequence[int], coefficient: int = 1) -> LaurentPolynomial:
    return LaurentPolynomial(len(v), {tuple(v): coefficient})


def _monomial_text(v: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(v):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def to_text(p: LaurentPolynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (v, c) in enumerate(p.terms.items()):
        mono = _monomial_text(v)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_FACTOR = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def parse_laurent(text: str, n: int) -> LaurentPolynomial:
    """Parse the canonical text form (and any reordering of it)."""
    s = text.replace(" ", "")
    if not s:
        raise LaurentError("empty polynomial")
    if s == "0":
        return LaurentPolynomial(n)
    # protect exponent signs, then split on + and -
    s = s.replace("^-", "^~")
    tokens = [t.replace("~", "-") for t in re.findall(r"[+-]?[^+-]+", s)]
    if "".join(tokens).replace("^-", "^~") != s:
        raise LaurentError(f"cannot parse {text!r}")
    terms = []
    for tok in tokens:
        sign = 1
        if tok[0] in "+-":
            sign = -1 if tok[0] == "-" else 1
            tok = tok[1:]
        coeff = 1
        v = [0] * n
        for k, f in enumerate(tok.split("*")):
            if k == 0 and f.isdigit():
                coeff = int(f)
                continue
            m = _FACTOR.match(f)
            if not m:
                raise LaurentError(f"bad factor {f!r} in {text!r}")
            i = int(m.group(1))
            if not 1 <= i <= n:
                raise LaurentError(f"variable x{i} out of range 1..{n}")
            v[i - 1] += int(m.group(2) or 1)
        terms.append((tuple(v), sign * coeff))
    return LaurentPolynomial(n, terms)
