"""Exact sparse multivariate polynomials over the rationals.

Variables live in a fixed universe described by :class:`VarSpec`: the matrix
entries ``a[i,j]`` (row-major), optionally ``x[1..n]``, then ``t`` and ``y``.
Monomials are dense exponent tuples indexed by that universe, and a
:class:`Polynomial` is an immutable map from monomials to nonzero rationals.
Integral coefficients are stored as ``int`` so that arithmetic on the
(mostly integral) polynomials of this package stays fast.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Coefficient = Union[int, Fraction]


class IncompatibleRingError(ValueError):
    """Operands live in polynomial rings with different variable sets."""


@dataclass(frozen=True)
class VarSpec:
    """The variable universe of a polynomial ring.

    ``d`` is carried along for bookkeeping only; it does not change the set
    of variables and is ignored when comparing rings.
    """

    n: int
    d: int = field(default=1, compare=False)
    includes_x: bool = False
    includes_t: bool = False
    includes_y: bool = False

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")

    @cached_property
    def names(self) -> tuple[str, ...]:
        out = [f"a[{i},{j}]" for i in range(1, self.n + 1) for j in range(1, self.n + 1)]
        if self.includes_x:
            out += [f"x[{i}]" for i in range(1, self.n + 1)]
        if self.includes_t:
            out.append("t")
        if self.includes_y:
            out.append("y")
        return tuple(out)

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._positions[name.replace(" ", "")]
        except KeyError:
            raise KeyError(f"variable {name!r} is not in the ring {self.names}") from None

    def a_index(self, i: int, j: int) -> int:
        self._check_label(i)
        self._check_label(j)
        return (i - 1) * self.n + (j - 1)

    def x_index(self, i: int) -> int:
        if not self.includes_x:
            raise KeyError("ring has no x variables")
        self._check_label(i)
        return self.n * self.n + i - 1

    @property
    def t_index(self) -> int:
        return self.index("t")

    @property
    def y_index(self) -> int:
        return self.index("y")

    @cached_property
    def a_positions(self) -> range:
        return range(self.n * self.n)

    @cached_property
    def x_positions(self) -> range:
        if not self.includes_x:
            return range(0)
        return range(self.n * self.n, self.n * self.n + self.n)

    def _check_label(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValueError(f"index {i} outside [1, {self.n}]")

    def extended(self, *, x: bool | None = None, t: bool | None = None,
                 y: bool | None = None) -> "VarSpec":
        """Return the same ring with variable groups switched on or off."""
        return replace(
            self,
            includes_x=self.includes_x if x is None else x,
            includes_t=self.includes_t if t is None else t,
            includes_y=self.includes_y if y is None else y,
        )

    # constructors for common elements

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Coefficient) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name_or_index: str | int) -> "Polynomial":
        k = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        m = [0] * self.nvars
        m[k] = 1
        return Polynomial._raw(self, {tuple(m): 1})

    def a(self, i: int, j: int) -> "Polynomial":
        return self.var(self.a_index(i, j))

    def x(self, i: int) -> "Polynomial":
        return self.var(self.x_index(i))

    def t(self) -> "Polynomial":
        return self.var(self.t_index)

    def y(self) -> "Polynomial":
        return self.var(self.y_index)


def _norm(c) -> Coefficient:
    if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
        if hasattr(c, "numerator") and hasattr(c, "denominator") and not isinstance(c, float):
            c = Fraction(int(c.numerator), int(c.denominator))
        else:
            raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# monomial helpers
# ---------------------------------------------------------------------------

def monomial_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(map(operator.add, u, v))


def monomial_divides(u: Monomial, v: Monomial) -> bool:
    """True when u divides v."""
    return all(a <= b for a, b in zip(u, v))


def monomial_quotient(v: Monomial, u: Monomial) -> Monomial:
    return tuple(map(operator.sub, v, u))


def monomial_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(map(max, u, v))


@dataclass(frozen=True)
class MonomialOrder:
    """Lex or degree-reverse-lex order.

    ``priority`` lists variable positions from most to least significant;
    ``None`` means the ring's natural order (a[1,1] > a[1,2] > ... > x[1] >
    ... > t > y).
    """

    kind: str = "degrevlex"
    priority: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "degrevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key_function(self) -> Callable[[Monomial], tuple]:
        """Return a key such that larger keys are larger monomials."""
        perm = self.priority
        if self.kind == "lex":
            if perm is None:
                return lambda m: m
            return lambda m: tuple(m[k] for k in perm)
        if perm is None:
            return lambda m: (sum(m), tuple(-e for e in reversed(m)))
        rev = tuple(reversed(perm))
        return lambda m: (sum(m), tuple(-m[k] for k in rev))

    def key(self, m: Monomial) -> tuple:
        return self.key_function()(m)


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def compare_monomials(order: MonomialOrder, u: Monomial, v: Monomial) -> int:
    """Return -1, 0 or 1 as u is smaller than, equal to or greater than v."""
    ku, kv = order.key(u), order.key(v)
    return (ku > kv) - (ku < kv)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("spec", "_terms", "_hash")

    def __init__(self, spec: VarSpec, terms: Mapping[Monomial, Coefficient] | None = None):
        clean: dict[Monomial, Coefficient] = {}
        nv = spec.nvars
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nv:
                raise ValueError(f"monomial {m} has {len(m)} exponents, ring has {nv} variables")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            c = _norm(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.spec = spec
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, spec: VarSpec, terms: dict[Monomial, Coefficient]) -> "Polynomial":
        # trusted constructor: terms already canonical and owned by the result
        p = object.__new__(cls)
        p.spec = spec
        p._terms = terms
        p._hash = None
        return p

    # --- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Coefficient]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Coefficient:
        return self._terms.get((0,) * self.spec.nvars, 0)

    def coefficient(self, m: Monomial) -> Coefficient:
        return self._terms.get(tuple(m), 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def x_degree(self) -> int:
        xs = self.spec.x_positions
        return max((sum(m[k] for k in xs) for m in self._terms), default=-1)

    def variables(self) -> set[int]:
        return {k for m in self._terms for k, e in enumerate(m) if e}

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple[Monomial, Coefficient]]:
        key = order.key_function()
        return sorted(self._terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple[Monomial, Coefficient]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key_function()
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        from math import gcd, lcm
        if not self._terms:
            return Fraction(0)
        num = den = 0
        for c in self._terms.values():
            c = Fraction(c)
            num = gcd(num, c.numerator)
            den = lcm(den or 1, c.denominator)
        return Fraction(num, den)

    # --- ring plumbing ----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.spec != self.spec:
                raise IncompatibleRingError(
                    f"ring mismatch: {self.spec.names} vs {other.spec.names}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.spec.const(other)
        return NotImplemented

    def change_spec(self, spec: VarSpec) -> "Polynomial":
        """Re-embed into another ring, matching variables by name."""
        if spec == self.spec:
            return self
        used = self.variables()
        src = self.spec.names
        target_pos = {}
        for k in used:
            try:
                target_pos[k] = spec.index(src[k])
            except KeyError:
                raise IncompatibleRingError(f"variable {src[k]} has no image in target ring") from None
        nv = spec.nvars
        out = {}
        for m, c in self._terms.items():
            e = [0] * nv
            for k in used:
                if m[k]:
                    e[target_pos[k]] = m[k]
            out[tuple(e)] = c
        return Polynomial._raw(spec, out)

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return Polynomial._raw(self.spec, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.spec, {m: -c for m, c in self._terms.items()})

    def __pos__(self) -> "Polynomial":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            inv = Fraction(1) / other
            return Polynomial._raw(self.spec, {m: _norm(c * inv) for m, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
        return power(self, k)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.spec == other.spec and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == self.spec.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self._terms.items())))
        return self._hash

    # --- calculus and evaluation -------------------------------------------

    def diff(self, var: str | int) -> "Polynomial":
        k = var if isinstance(var, int) else self.spec.index(var)
        out: dict[Monomial, Coefficient] = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                mm = m[:k] + (e - 1,) + m[k + 1:]
                out[mm] = c * e
        return Polynomial._raw(self.spec, out)

    def evaluate(self, values: Mapping[str, Coefficient]) -> Coefficient:
        """Evaluate at an assignment name -> rational covering every variable that occurs."""
        names = self.spec.names
        missing = sorted(names[k] for k in self.variables() if names[k] not in values)
        if missing:
            raise KeyError(f"no value for {', '.join(missing)}")
        total = 0
        for m, c in self._terms.items():
            term = c
            for k, e in enumerate(m):
                if e:
                    term *= values[names[k]] ** e
            total += term
        return _norm(total) if isinstance(total, Fraction) else total

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def mul(p: Polynomial, q: Polynomial, x_degree_bound: int | None = None) -> Polynomial:
    """Product of p and q, dropping terms of x-degree above the bound if given."""
    if p.spec != q.spec:
        raise IncompatibleRingError("ring mismatch in multiplication")
    if len(p._terms) < len(q._terms):
        p, q = q, p
    out: dict[Monomial, Coefficient] = {}
    add = operator.add
    if x_degree_bound is None:
        qt = list(q._terms.items())
        for m1, c1 in p._terms.items():
            for m2, c2 in qt:
                m = tuple(map(add, m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
    else:
        xs = p.spec.x_positions
        lo, hi = (xs.start, xs.stop) if len(xs) else (0, 0)
        qt = [(m, c, sum(m[lo:hi])) for m, c in q._terms.items()]
        for m1, c1 in p._terms.items():
            d1 = sum(m1[lo:hi])
            if d1 > x_degree_bound:
                continue
            for m2, c2, d2 in qt:
                if d1 + d2 > x_degree_bound:
                    continue
                m = tuple(map(add, m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
    return Polynomial._raw(p.spec, {m: _norm(c) for m, c in out.items()})


def power(p: Polynomial, k: int, x_degree_bound: int | None = None) -> Polynomial:
    result = p.spec.one()
    base = p
    while k:
        if k & 1:
            result = mul(result, base, x_degree_bound)
        k >>= 1
        if k:
            base = mul(base, base, x_degree_bound)
    return result


def poly_arith(op: str, p: Polynomial, q_or_k) -> Polynomial:
    """Dispatch add/sub/mul/pow by name."""
    if op == "add":
        return _binary(p, q_or_k, operator.add)
    if op == "sub":
        return _binary(p, q_or_k, operator.sub)
    if op == "mul":
        return _binary(p, q_or_k, operator.mul)
    if op == "pow":
        return p ** q_or_k
    raise ValueError(f"unknown operation {op!r}")


def _binary(p: Polynomial, q, fn) -> Polynomial:
    if isinstance(q, Polynomial) and q.spec != p.spec:
        raise IncompatibleRingError("ring mismatch")
    return fn(p, q)


def substitute(p: Polynomial, assignment: Mapping[str | int, Polynomial],
               x_degree_bound: int | None = None) -> Polynomial:
    """Ring homomorphism sending the given variables to polynomials.

    Unmapped variables are left alone.  With ``x_degree_bound`` the result is
    computed modulo x-degree ``bound + 1`` without forming the discarded terms.
    """
    spec = p.spec
    images: dict[int, Polynomial] = {}
    for var, image in assignment.items():
        k = var if isinstance(var, int) else spec.index(var)
        if isinstance(image, (int, Fraction)):
            image = spec.const(image)
        if image.spec != spec:
            raise IncompatibleRingError("substituted polynomial lives in another ring")
        images[k] = image
    power_cache: dict[tuple[int, int], Polynomial] = {}

    def image_power(k: int, e: int) -> Polynomial:
        key = (k, e)
        if key not in power_cache:
            power_cache[key] = power(images[k], e, x_degree_bound)
        return power_cache[key]

    total: dict[Monomial, Coefficient] = {}
    for m, c in p._terms.items():
        kept = list(m)
        factors = []
        for k in images:
            if m[k]:
                factors.append(image_power(k, m[k]))
                kept[k] = 0
        term = Polynomial._raw(spec, {tuple(kept): c})
        for f in factors:
            term = mul(term, f, x_degree_bound)
        if x_degree_bound is not None:
            term = truncate_x_degree(term, x_degree_bound)
        for mm, cc in term._terms.items():
            s = total.get(mm, 0) + cc
            if s:
                total[mm] = s
            else:
                del total[mm]
    return Polynomial._raw(spec, {m: _norm(c) for m, c in total.items()})


def truncate_x_degree(p: Polynomial, N: int) -> Polynomial:
    """Drop every term whose x-degree exceeds N."""
    if N < 0:
        raise ValueError("degree bound must be nonnegative")
    xs = p.spec.x_positions
    lo, hi = (xs.start, xs.stop) if len(xs) else (0, 0)
    return Polynomial._raw(p.spec, {m: c for m, c in p._terms.items() if sum(m[lo:hi]) <= N})


def extract_x_coefficients(p: Polynomial) -> dict[tuple[int, ...], Polynomial]:
    """Split p = sum_alpha coeff_alpha * x^alpha.

    Keys are x-multidegrees (length-n tuples); values live in the ring
    without x variables.
    """
    spec = p.spec
    if not spec.includes_x:
        return {(0,) * spec.n: p} if p else {}
    base = spec.extended(x=False)
    xs = spec.x_positions
    lo, hi = xs.start, xs.stop
    parts: dict[tuple[int, ...], dict[Monomial, Coefficient]] = {}
    for m, c in p._terms.items():
        alpha = m[lo:hi]
        rest = m[:lo] + m[hi:]
        parts.setdefault(alpha, {})[rest] = c
    return {alpha: Polynomial._raw(base, terms) for alpha, terms in parts.items()}


def homogeneous_components(p: Polynomial) -> dict[int, Polynomial]:
    """Split p by total degree."""
    parts: dict[int, dict[Monomial, Coefficient]] = {}
    for m, c in p._terms.items():
        parts.setdefault(sum(m), {})[m] = c
    return {k: Polynomial._raw(p.spec, v) for k, v in parts.items()}


def x_monomial(spec: VarSpec, alpha: Sequence[int]) -> Polynomial:
    m = [0] * spec.nvars
    for k, e in zip(spec.x_positions, alpha):
        m[k] = e
    return Polynomial._raw(spec, {tuple(m): 1})


def poly_sum(polys: Iterable[Polynomial], spec: VarSpec) -> Polynomial:
    out: dict[Monomial, Coefficient] = {}
    for p in polys:
        if p.spec != spec:
            raise IncompatibleRingError("ring mismatch in sum")
        for m, c in p._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
    return Polynomial._raw(spec, {m: _norm(c) for m, c in out.items()})


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _format_coefficient(c: Coefficient) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_monomial(spec: VarSpec, m: Monomial) -> str:
    parts = []
    for name, e in zip(spec.names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    """Render in the ``-2*a[1,1]^2*x[1] + 1/3`` grammar, leading term first."""
    return format_terms(p.spec, p.sorted_terms(order))


def format_terms(spec: VarSpec, terms: Sequence[tuple[Monomial, Coefficient]]) -> str:
    if not terms:
        return "0"
    pieces = []
    for k, (m, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(spec, m)
        if not mono:
            body = _format_coefficient(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coefficient(a)}*{mono}"
        if k == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>a\[\s*\d+\s*,\s*\d+\s*\]|x\[\s*\d+\s*\]|t|y)|(?P<op>[-+*/^()]))")


class PolynomialSyntaxError(ValueError):
    pass


def _tokenize(s: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected input at position {pos}: {s[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind).replace(" ", "")))
        pos = m.end()
    return out


def parse_polynomial(s: str, spec: VarSpec) -> Polynomial:
    """Parse the text grammar (also accepts parentheses and powers of groups)."""
    tokens = _tokenize(s)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise PolynomialSyntaxError(f"expected {value or kind}, got {tok[1]!r} in {s!r}")
        pos += 1
        return tok

    def expr() -> Polynomial:
        result = spec.zero()
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        result = term() * sign
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = term()
            result = result + t if op == "+" else result - t
        return result

    def term() -> Polynomial:
        result = factor()
        while peek() == ("op", "*"):
            take()
            result = result * factor()
        return result

    def factor() -> Polynomial:
        kind, val = peek()
        if kind == "num":
            take()
            c: Coefficient = int(val)
            if peek() == ("op", "/"):
                take()
                den = int(take("num")[1])
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator")
                c = Fraction(c, den)
            base = spec.const(c)
        elif kind == "var":
            take()
            try:
                base = spec.var(val)
            except KeyError as exc:
                raise PolynomialSyntaxError(str(exc)) from None
        elif (kind, val) == ("op", "("):
            take()
            base = expr()
            take("op", ")")
        else:
            raise PolynomialSyntaxError(f"unexpected token {val!r} in {s!r}")
        if peek() == ("op", "^"):
            take()
            base = base ** int(take("num")[1])
        return base

    if not tokens:
        raise PolynomialSyntaxError("empty polynomial string")
    result = expr()
    if pos != len(tokens):
        raise PolynomialSyntaxError(f"trailing input {tokens[pos][1]!r} in {s!r}")
    return result
