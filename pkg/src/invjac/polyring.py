"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` lives in ``Q[x1, ..., xn]`` and stores a map from exponent
tuples to nonzero :class:`fractions.Fraction` coefficients.  Polys are
immutable and hashable.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Union

Scalar = Union[int, Fraction]
Monomial = tuple  # tuple[int, ...] of exponents, one per variable

DEFAULT_DIM_CAP = 20000
DIM_CAP_ENV = "INVJAC_DIM_CAP"

ZERO = "zero"
MIXED = "mixed"


class DimensionCapError(ValueError):
    """A graded piece would exceed the configured dimension cap."""


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position
        self.text = text


def dimension_cap() -> int:
    value = os.environ.get(DIM_CAP_ENV)
    if value is None:
        return DEFAULT_DIM_CAP
    return int(value)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``; floats are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Immutable element of Q[x1..xn]."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        if n < 0:
            raise ValueError("variable count must be non-negative")
        clean = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise ValueError(f"monomial {mono} has wrong length for n={n}")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = as_fraction(c)
                if c:
                    clean[mono] = clean.get(mono, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        """The coordinate function x_i (1-based)."""
        _check_index(n, i)
        mono = [0] * n
        mono[i - 1] = 1
        return cls._raw(n, {tuple(mono): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Iterable[int], c: Scalar = 1) -> "Poly":
        exponents = tuple(exponents)
        return cls(len(exponents), {exponents: c})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(0,) * self.n: other}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.n, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        c = as_fraction(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._raw(self.n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(self.n, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order, x1 > x2 > ... > xn, largest first."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.n}, {format_poly(self)!r})"


def _check_index(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} out of range 1..{n}")


def partial(f: Poly, i: int) -> Poly:
    """Derivative of f with respect to x_i (1-based)."""
    _check_index(f.n, i)
    k = i - 1
    out = {}
    for mono, c in f.items():
        a = mono[k]
        if a:
            m = list(mono)
            m[k] = a - 1
            out[tuple(m)] = c * a
    return Poly._raw(f.n, out)


def homogeneous_degree(f: Poly) -> Union[int, str]:
    """Common total degree of f's terms, ``"mixed"``, or ``"zero"``."""
    degrees = {sum(m) for m in f}
    if not degrees:
        return ZERO
    if len(degrees) > 1:
        return MIXED
    return degrees.pop()


class GradedPiece:
    """Coordinatization of A_d: the degree-d monomials in n variables.

    The basis is listed in graded-lex order with x1 > x2 > ... > xn, so for
    (n, d) = (2, 3) it reads x1^3, x1^2*x2, x1*x2^2, x2^3.
    """

    __slots__ = ("n", "d", "basis", "index")

    def __init__(self, n: int, d: int, basis: tuple, index: dict):
        self.n = n
        self.d = d
        self.basis = basis
        self.index = index

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedPiece) and (self.n, self.d) == (other.n, other.d)

    def __hash__(self) -> int:
        return hash((self.n, self.d))

    def __repr__(self) -> str:
        return f"GradedPiece(n={self.n}, d={self.d}, dim={self.dim})"

    def coordinates(self, f: Poly) -> tuple[Fraction, ...]:
        """Coordinate vector of a homogeneous degree-d polynomial."""
        if f.n != self.n:
            raise ValueError(f"variable count mismatch: {f.n} vs {self.n}")
        vec = [Fraction(0)] * len(self.basis)
        for mono, c in f.items():
            try:
                vec[self.index[mono]] = c
            except KeyError:
                raise ValueError(f"{format_poly(f)} is not in A_{self.d}") from None
        return tuple(vec)

    def poly(self, coords: Iterable[Scalar]) -> Poly:
        terms = {}
        for mono, c in zip(self.basis, coords):
            if c:
                terms[mono] = as_fraction(c)
        return Poly._raw(self.n, terms)


def graded_piece_dim(n: int, d: int) -> int:
    if n == 0:
        return 1 if d == 0 else 0
    return comb(n + d - 1, d)


def _compositions(n: int, d: int) -> Iterator[tuple]:
    # descending lex order on exponent tuples
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _compositions(n - 1, d - a):
            yield (a,) + rest


@lru_cache(maxsize=256)
def _graded_piece(n: int, d: int) -> GradedPiece:
    basis = tuple(_compositions(n, d)) if n else ((),) if d == 0 else ()
    return GradedPiece(n, d, basis, {m: k for k, m in enumerate(basis)})


def monomial_basis(n: int, d: int, cap: int | None = None) -> GradedPiece:
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    cap = dimension_cap() if cap is None else cap
    size = graded_piece_dim(n, d)
    if size > cap:
        raise DimensionCapError(f"dim A_{d} for n={n} is {size}, above the cap {cap}")
    return _graded_piece(n, d)


# -- text form -------------------------------------------------------------


def format_monomial(mono: Monomial) -> str:
    factors = []
    for k, e in enumerate(mono, start=1):
        if e == 1:
            factors.append(f"x{k}")
        elif e > 1:
            factors.append(f"x{k}^{e}")
    return "*".join(factors)


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    pieces = []
    for idx, (mono, c) in enumerate(f.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_monomial(mono)
        if not body:
            text = format_rational(a)
        elif a == 1:
            text = body
        else:
            text = f"{format_rational(a)}*{body}"
        if idx == 0:
            pieces.append(text if sign == "+" else f"-{text}")
        else:
            pieces.append(f" {sign} {text}")
    return "".join(pieces)


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise PolyParseError(message, self.pos if pos is None else pos, self.text)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected unsigned integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Poly:
        result = {}
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        self.term(sign, result)
        while True:
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            self.pos += 1
            self.term(1 if ch == "+" else -1, result)
        return Poly(self.n, result)

    def term(self, sign: int, acc: dict) -> None:
        coeff = Fraction(sign)
        mono = [0] * self.n
        ch = self.peek()
        if ch.isdigit():
            num = self.uint()
            if self.peek() == "/":
                slash = self.pos
                self.pos += 1
                den = self.uint()
                if den == 0:
                    self.error("zero denominator", slash)
                coeff *= Fraction(num, den)
            else:
                coeff *= num
            if self.peek() != "*":
                acc[tuple(mono)] = acc.get(tuple(mono), 0) + coeff
                return
            self.pos += 1
        self.factor(mono)
        while self.peek() == "*":
            self.pos += 1
            self.factor(mono)
        acc[tuple(mono)] = acc.get(tuple(mono), 0) + coeff

    def factor(self, mono: list) -> None:
        if self.peek() != "x":
            self.error("expected variable 'x<k>'")
        start = self.pos
        self.pos += 1
        if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
            self.error("expected variable index")
        k = self.uint()
        if not 1 <= k <= self.n:
            self.error(f"variable index {k} out of range 1..{self.n}", start)
        e = 1
        if self.peek() == "^":
            self.pos += 1
            e = self.uint()
        mono[k - 1] += e


def parse_poly(text: str, n: int) -> Poly:
    """Parse an expression such as ``"3/2*x1^2*x3 - x2"`` over n variables."""
    if n < 1:
        raise ValueError("variable count must be positive")
    return _Parser(text, n).parse()
