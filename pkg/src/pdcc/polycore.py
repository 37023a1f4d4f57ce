"""Exact rationals, multivariate polynomials in d1..dn and monomial orders."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from gmpy2 import mpq

Rational = mpq
Exponent = tuple  # tuple[int, ...]

ZERO = mpq(0)
ONE = mpq(1)


def to_rational(x) -> mpq:
    """Coerce int, str ("3/4"), Fraction, mpq or a (num, den) pair to mpq."""
    if isinstance(x, (list, tuple)):
        num, den = x
        if den == 0:
            raise ValueError("zero denominator")
        return mpq(int(num), int(den))
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not allowed")
    return mpq(x)


def rational_pair(q: mpq) -> list[int]:
    return [int(q.numerator), int(q.denominator)]


def format_rational(q: mpq) -> str:
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def exp_divides(a: Exponent, b: Exponent) -> bool:
    """True if d^a divides d^b."""
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomials_of_degree(n: int, d: int) -> list[Exponent]:
    """All exponents of total degree d, in descending degrevlex order."""
    if d < 0:
        return []
    out: list[Exponent] = []

    def rec(prefix, left, k):
        if k == n - 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, k + 1)

    if n == 0:
        return [()] if d == 0 else []
    rec((), d, 0)
    out.sort(key=degrevlex_key, reverse=True)
    return out


# --- monomial orders -------------------------------------------------------

def degrevlex_key(e: Exponent):
    return (sum(e),) + tuple(-x for x in reversed(e))


def lex_key(e: Exponent):
    return tuple(e)


_BASE_KEYS = {"degrevlex": degrevlex_key, "lex": lex_key}


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class TermOrder:
    """Monomial order plus its extension to module terms (position, exponent).

    ``module`` is one of ``"pot"`` (position over term, lower index smaller),
    ``"top"`` (term over position) or ``"schreyer"``.  A Schreyer order needs
    ``schreyer_leads`` (the leading term ``(pos, exp)`` of each generator it is
    induced from) and ``schreyer_base`` (the order those leads were taken in).
    """

    kind: str = "degrevlex"
    module: str = "pot"
    schreyer_leads: tuple = field(default=(), compare=True)
    schreyer_base: "TermOrder | None" = None

    def __post_init__(self):
        if self.kind not in _BASE_KEYS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.module not in ("pot", "top", "schreyer"):
            raise ValueError(f"unknown module order {self.module!r}")
        if self.module == "schreyer" and self.schreyer_base is None:
            raise ValueError("schreyer order needs a base order")

    def mono_key(self, e: Exponent):
        return _BASE_KEYS[self.kind](e)

    def term_key(self, pos: int, e: Exponent) -> tuple:
        """Flat integer tuple; larger tuple means larger module term."""
        if self.module == "pot":
            return (pos,) + _BASE_KEYS[self.kind](e)
        if self.module == "top":
            return _BASE_KEYS[self.kind](e) + (pos,)
        lp, le = self.schreyer_leads[pos]
        return self.schreyer_base.term_key(lp, exp_add(le, e)) + (pos,)

    def key_function(self):
        """Memoised term-key function on (pos, exp) pairs."""
        cache: dict = {}
        tk = self.term_key

        def key(t):
            k = cache.get(t)
            if k is None:
                k = cache[t] = tk(t[0], t[1])
            return k

        return key

    def with_kind(self, kind: str) -> "TermOrder":
        base = self.schreyer_base.with_kind(kind) if self.schreyer_base else None
        return TermOrder(kind, self.module, self.schreyer_leads, base)


DEFAULT_ORDER = TermOrder()


def compare_monomials(order: TermOrder, a: Exponent, b: Exponent) -> Ordering:
    if len(a) != len(b):
        raise ValueError("exponent length mismatch")
    ka, kb = order.mono_key(tuple(a)), order.mono_key(tuple(b))
    if ka == kb:
        return Ordering.EQ
    return Ordering.GT if ka > kb else Ordering.LT


# --- polynomials -----------------------------------------------------------

class Poly:
    """Sparse polynomial over Q in the commuting symbols d1..dn.

    Treated as immutable: arithmetic returns new objects.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Exponent, object] | None = None):
        self.n = n
        clean: dict = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for n={n}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent {e}")
                c = to_rational(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.n = n
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c) -> "Poly":
        c = to_rational(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        """The symbol d_i (1-based)."""
        e = [0] * n
        e[i - 1] = 1
        return cls._raw(n, {tuple(e): ONE})

    @classmethod
    def monomial(cls, n: int, e: Exponent, c=1) -> "Poly":
        return cls(n, {tuple(e): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> float:
        """Total degree; -inf for the zero polynomial."""
        if not self.terms:
            return float("-inf")
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, ZERO) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly._raw(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_rational(other)
            if not c:
                return Poly.zero(self.n)
            return Poly._raw(self.n, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = t.get(e, ZERO) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Poly._raw(self.n, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, mpq)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def evaluate(self, point) -> mpq:
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def leading(self, order: TermOrder = DEFAULT_ORDER):
        """(exponent, coefficient) of the leading term."""
        e = max(self.terms, key=order.mono_key)
        return e, self.terms[e]

    def sorted_terms(self, order: TermOrder = DEFAULT_ORDER):
        return sorted(self.terms.items(), key=lambda t: order.mono_key(t[0]), reverse=True)

    def __repr__(self):
        return f"Poly({self.n}, {str(self)!r})"

    def __str__(self):
        return format_poly(self)


def poly_add(a: Poly, b: Poly) -> Poly:
    a._check(b)
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    a._check(b)
    return a * b


def negate_variables(p: Poly) -> Poly:
    """p(d1, ..., dn) -> p(-d1, ..., -dn)."""
    return Poly._raw(p.n, {e: (-c if sum(e) % 2 else c) for e, c in p.terms.items()})


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Quotient a / b, raising ArithmeticError if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    order = DEFAULT_ORDER
    be, bc = b.leading(order)
    rem = dict(a.terms)
    quot: dict = {}
    while rem:
        e = max(rem, key=order.mono_key)
        if not exp_divides(be, e):
            raise ArithmeticError("inexact polynomial division")
        m = exp_sub(e, be)
        f = rem[e] / bc
        quot[m] = f
        for e2, c2 in b.terms.items():
            k = exp_add(e2, m)
            v = rem.get(k, ZERO) - f * c2
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return Poly._raw(a.n, quot)


# --- text form -------------------------------------------------------------

def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            f"d{i + 1}" if k == 1 else f"d{i + 1}^{k}" for i, k in enumerate(e) if k
        )
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        else:
            body = format_rational(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*([+-])?\s*((?:\d+(?:/\d+)?|d\d+(?:\^\d+)?)(?:\s*\*\s*(?:\d+(?:/\d+)?|d\d+(?:\^\d+)?))*)")


def parse_poly(text: str, n: int) -> Poly:
    """Parse the canonical text form, e.g. ``"4/3*d1 - 2/3*d2^2*d3"``."""
    s = text.strip()
    if s in ("", "0"):
        return Poly.zero(n)
    terms: dict = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos or (m.group(1) is None and not first):
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        first = False
        c = ONE
        e = [0] * n
        for factor in re.split(r"\s*\*\s*", m.group(2)):
            if factor.startswith("d"):
                var, _, power = factor[1:].partition("^")
                i = int(var)
                if not 1 <= i <= n:
                    raise ValueError(f"symbol d{i} out of range for n={n}")
                e[i - 1] += int(power) if power else 1
            else:
                c *= mpq(factor)
        if m.group(1) == "-":
            c = -c
        t = tuple(e)
        terms[t] = terms.get(t, ZERO) + c
        pos = m.end()
    return Poly(n, terms)


def poly_to_json(p: Poly) -> list:
    return [[rational_pair(c), list(e)] for e, c in p.sorted_terms()]


def poly_from_json(obj, n: int) -> Poly:
    terms: dict = {}
    for term in obj:
        coeff, exp = term
        exp = tuple(int(x) for x in exp)
        if len(exp) != n:
            raise ValueError(f"exponent {list(exp)} has wrong length for n={n}")
        terms[exp] = terms.get(exp, ZERO) + to_rational(coeff)
    return Poly(n, terms)


def polys_equal(a: Iterable[Poly], b: Iterable[Poly]) -> bool:
    return list(a) == list(b)
