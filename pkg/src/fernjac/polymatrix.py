"""Square matrices over the polynomial ring.

Indexing through ``M[i, j]`` is 0-based like any Python container; the
module-level helpers that speak in matrix labels (``principal_minor``) take
1-based row indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .polyring import (
    Polynomial, VarSpec, IncompatibleRingError, mul, parse_polynomial, poly_sum,
)


class PolyMatrix:
    __slots__ = ("spec", "size", "_rows")

    def __init__(self, rows: Sequence[Sequence[Polynomial]]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        spec = rows[0][0].spec
        if any(e.spec != spec for r in rows for e in r):
            raise IncompatibleRingError("matrix entries live in different rings")
        self.spec = spec
        self.size = n
        self._rows = rows

    @classmethod
    def from_function(cls, spec: VarSpec, n: int,
                      fn: Callable[[int, int], Polynomial]) -> "PolyMatrix":
        """Build from fn(i, j) with 1-based i, j."""
        return cls([[fn(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])

    @classmethod
    def identity(cls, spec: VarSpec, n: int) -> "PolyMatrix":
        one, zero = spec.one(), spec.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def generic(cls, spec: VarSpec) -> "PolyMatrix":
        """The matrix A with A[i,j] = a[i,j]."""
        return cls.from_function(spec, spec.n, spec.a)

    @classmethod
    def from_numbers(cls, spec: VarSpec, rows: Sequence[Sequence[int | Fraction]]) -> "PolyMatrix":
        return cls([[spec.const(v) for v in r] for r in rows])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self._rows[i][j]

    @property
    def rows(self) -> tuple[tuple[Polynomial, ...], ...]:
        return self._rows

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self._rows for e in r)

    def map(self, fn: Callable[[Polynomial], Polynomial]) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self._rows])

    def change_spec(self, spec: VarSpec) -> "PolyMatrix":
        return self.map(lambda e: e.change_spec(spec))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def scale(self, c: Polynomial | int | Fraction) -> "PolyMatrix":
        return self.map(lambda e: e * c)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return mat_mul(self, other)

    def _check(self, other: "PolyMatrix") -> None:
        if self.size != other.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        if self.spec != other.spec:
            raise IncompatibleRingError("matrices live in different rings")

    def to_json(self) -> str:
        return json.dumps([[str(e) for e in r] for r in self._rows])

    @classmethod
    def from_json(cls, text: str, spec: VarSpec) -> "PolyMatrix":
        return cls([[parse_polynomial(s, spec) for s in r] for r in json.loads(text)])

    def __repr__(self) -> str:
        return f"PolyMatrix({[[str(e) for e in r] for r in self._rows]})"


def mat_mul(M: PolyMatrix, N: PolyMatrix) -> PolyMatrix:
    M._check(N)
    n = M.size
    cols = [[N[k, j] for k in range(n)] for j in range(n)]
    return PolyMatrix([
        [poly_sum((mul(a, b) for a, b in zip(M.rows[i], cols[j]) if a and b), M.spec)
         for j in range(n)]
        for i in range(n)
    ])


def mat_pow(M: PolyMatrix, k: int) -> PolyMatrix:
    if k < 0:
        raise ValueError("matrix exponent must be nonnegative")
    result = PolyMatrix.identity(M.spec, M.size)
    for _ in range(k):
        result = mat_mul(result, M)
    return result


def mat_powers(M: PolyMatrix, k: int) -> list[PolyMatrix]:
    """[M^0, M^1, ..., M^k]."""
    out = [PolyMatrix.identity(M.spec, M.size)]
    for _ in range(k):
        out.append(mat_mul(out[-1], M))
    return out


def _laplace(rows: Sequence[Sequence[Polynomial]], spec: VarSpec) -> Polynomial:
    # expansion along successive rows, memoised on the set of columns still free
    n = len(rows)
    memo: dict[int, Polynomial] = {}

    def minor(r: int, cols: int) -> Polynomial:
        if r == n:
            return spec.one()
        if cols in memo:
            return memo[cols]
        acc = []
        sign = 1
        for j in range(n):
            if not cols >> j & 1:
                continue
            e = rows[r][j]
            if e:
                sub = minor(r + 1, cols & ~(1 << j))
                if sub:
                    prod = mul(e, sub)
                    acc.append(prod if sign > 0 else -prod)
            sign = -sign
        memo[cols] = poly_sum(acc, spec)
        return memo[cols]

    return minor(0, (1 << n) - 1)


def _bareiss(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Fraction-free elimination for numeric matrices."""
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for p in range(k + 1, n):
                if m[p][k] != 0:
                    m[k], m[p] = m[p], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinant(M: PolyMatrix) -> Polynomial:
    """Exact determinant: Bareiss for constant matrices, cofactor expansion otherwise."""
    if all(e.is_constant() for r in M.rows for e in r) and M.size > 4:
        return M.spec.const(_bareiss([[e.constant_term() for e in r] for r in M.rows]))
    return _laplace(M.rows, M.spec)


def principal_minor(M: PolyMatrix, rows: Sequence[int]) -> Polynomial:
    """Determinant of the submatrix on the given 1-based rows and the same columns."""
    rows = tuple(rows)
    if not rows:
        return M.spec.one()
    if any(not 1 <= r <= M.size for r in rows):
        raise ValueError(f"row indices {rows} out of range [1, {M.size}]")
    if any(a >= b for a, b in zip(rows, rows[1:])):
        raise ValueError(f"row indices {rows} must be strictly increasing")
    sub = [[M[i - 1, j - 1] for j in rows] for i in rows]
    return _laplace(sub, M.spec)


@dataclass(frozen=True)
class CharPoly:
    """Coefficients c_0..c_n of det(tI - M), ascending in t."""

    coefficients: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        if not self.coefficients or self.coefficients[-1] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Polynomial:
        return self.coefficients[k]

    def evaluate_at(self, M: PolyMatrix) -> PolyMatrix:
        """p(M) = sum_k c_k M^k."""
        powers = mat_powers(M, self.degree)
        n = M.size
        return PolyMatrix([
            [poly_sum((mul(c, P[i, j]) for c, P in zip(self.coefficients, powers)), M.spec)
             for j in range(n)]
            for i in range(n)
        ])


def _t_coefficients(p: Polynomial, base: VarSpec, n: int) -> list[Polynomial]:
    k_t = p.spec.t_index
    parts: list[dict] = [{} for _ in range(n + 1)]
    for m, c in p.terms.items():
        e = m[k_t]
        parts[e][m[:k_t] + (0,) + m[k_t + 1:]] = c
    return [Polynomial(p.spec, terms).change_spec(base) for terms in parts]


def char_poly(M: PolyMatrix) -> CharPoly:
    """det(tI - M) computed in the ring extended by t, split by powers of t."""
    base = M.spec
    ext = base.extended(t=True)
    t = ext.t()
    n = M.size
    shifted = PolyMatrix([
        [(t if i == j else ext.zero()) - M[i, j].change_spec(ext) for j in range(n)]
        for i in range(n)
    ])
    return CharPoly(tuple(_t_coefficients(determinant(shifted), base, n)))


def char_coeffs_reversed(M: PolyMatrix) -> list[Polynomial]:
    """J_0..J_n with det(I - tM) = sum_i J_i t^i."""
    base = M.spec
    ext = base.extended(t=True)
    t = ext.t()
    n = M.size
    shifted = PolyMatrix([
        [(ext.one() if i == j else ext.zero()) - t * M[i, j].change_spec(ext) for j in range(n)]
        for i in range(n)
    ])
    J = _t_coefficients(determinant(shifted), base, n)
    c = char_poly(M).coefficients
    # det(I - tM) = t^n p(1/t), so the coefficient lists are mirror images
    for i in range(n + 1):
        assert J[i] == c[n - i], f"det(I - tM) and det(tI - M) disagree at t^{i}"
    return J
