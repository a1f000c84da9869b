"""Degree d-linear maps, their Jacobian ideal, and the fern membership identity."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .polymatrix import (
    PolyMatrix, char_coeffs_reversed, char_poly, determinant, mat_mul, mat_powers,
    principal_minor,
)
from .polyring import (
    Polynomial, VarSpec, extract_x_coefficients, homogeneous_components, mul, poly_sum,
    power,
)
from .trees import fern_mu, z_fern


@dataclass(frozen=True)
class DLinearMap:
    n: int
    d: int
    components: tuple[Polynomial, ...]

    @property
    def spec(self) -> VarSpec:
        return self.components[0].spec


def linear_form(spec: VarSpec, i: int) -> Polynomial:
    """sum_j a[i,j] x[j]"""
    return poly_sum((spec.a(i, j) * spec.x(j) for j in range(1, spec.n + 1)), spec)


def build_map(n: int, d: int) -> DLinearMap:
    """f_i = x_i - (sum_j a[i,j] x_j)^d over generic coefficients."""
    spec = VarSpec(n, d, includes_x=True)
    comps = tuple(spec.x(i) - power(linear_form(spec, i), d) for i in range(1, n + 1))
    return DLinearMap(n, d, comps)


def differential(f: DLinearMap) -> PolyMatrix:
    """D(f)_{i,j} = delta_{i,j} - d a[i,j] (sum_r a[i,r] x_r)^(d-1)."""
    spec = f.spec
    d = f.d
    rows = []
    for i in range(1, f.n + 1):
        lin_pow = power(linear_form(spec, i), d - 1)
        row = []
        for j in range(1, f.n + 1):
            entry = -d * spec.a(i, j) * lin_pow
            if i == j:
                entry = entry + 1
            row.append(entry)
        rows.append(row)
    return PolyMatrix(rows)


def symbolic_differential(f: DLinearMap) -> PolyMatrix:
    """Entrywise partial derivatives of the components, for cross-checking."""
    spec = f.spec
    return PolyMatrix([[fi.diff(spec.x_index(j)) for j in range(1, f.n + 1)] for fi in f.components])


@lru_cache(maxsize=None)
def jacobian_determinant(n: int, d: int) -> Polynomial:
    return determinant(differential(build_map(n, d)))


@lru_cache(maxsize=None)
def jacobian_coefficients(n: int, d: int) -> dict[tuple[int, ...], Polynomial]:
    """x-multidegree -> J_alpha in the ring of the a[i,j]."""
    return extract_x_coefficients(jacobian_determinant(n, d))


def _graded_lex_key(alpha: tuple[int, ...]) -> tuple:
    return (sum(alpha), tuple(-a for a in alpha))


@dataclass(frozen=True)
class IdealSpec:
    """A named generator list in the ring of the a[i,j] (optionally with y)."""

    name: str
    n: int
    generators: tuple[Polynomial, ...] = field(repr=False)

    def __add__(self, other: "IdealSpec") -> "IdealSpec":
        if self.n != other.n:
            raise ValueError("ideals live in different rings")
        return IdealSpec(f"{self.name}+{other.name}", self.n, self.generators + other.generators)

    @property
    def spec(self) -> VarSpec:
        return VarSpec(self.n)


@lru_cache(maxsize=None)
def jacobian_ideal(n: int, d: int) -> IdealSpec:
    """The ideal J(d,n) cut out by Jac(f) = 1.

    For d >= 2 the generators are the coefficients of every nonconstant
    x-monomial, in graded-lex order of the multidegree.  For d = 1 the
    Jacobian has no x and the generators are its nonconstant homogeneous
    components, by degree.
    """
    coeffs = jacobian_coefficients(n, d)
    zero = (0,) * n
    if d >= 2:
        assert coeffs.get(zero) == 1, "constant term of the Jacobian must be 1"
        gens = [coeffs[a] for a in sorted(coeffs, key=_graded_lex_key) if a != zero]
    else:
        jac = coeffs[zero]
        comps = homogeneous_components(jac)
        assert comps.get(0) == 1, "constant term of the Jacobian must be 1"
        gens = [comps[k] for k in sorted(comps) if k > 0]
    return IdealSpec(f"J({d},{n})", n, tuple(gens))


def nil2_ideal(n: int) -> IdealSpec:
    """Entries of A^2."""
    spec = VarSpec(n)
    A = PolyMatrix.generic(spec)
    sq = mat_mul(A, A)
    return IdealSpec(f"I_nil2({n})", n, tuple(e for r in sq.rows for e in r if e))


def char_ideal(n: int) -> IdealSpec:
    """Nonconstant coefficients of the characteristic polynomial of A."""
    spec = VarSpec(n)
    cp = char_poly(PolyMatrix.generic(spec))
    return IdealSpec(f"I_char({n})", n, tuple(cp.coefficients[:-1]))


def j_alpha_closed_form(n: int, d: int, k: int, l: int) -> Polynomial:
    """(-d)^k * sum over k-subsets S of |A|_S * prod_{i in S} a[i,l]^(d-1)."""
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if not 1 <= l <= n:
        raise ValueError(f"l={l} outside [1, {n}]")
    spec = VarSpec(n, d)
    A = PolyMatrix.generic(spec)
    terms = []
    for rows in itertools.combinations(range(1, n + 1), k):
        factor = spec.one()
        for i in rows:
            factor = mul(factor, power(spec.a(i, l), d - 1))
        terms.append(mul(principal_minor(A, rows), factor))
    return poly_sum(terms, spec) * (-d) ** k


def alpha(n: int, k: int, d: int, l: int) -> tuple[int, ...]:
    """The multidegree with k(d-1) in slot l and zeros elsewhere."""
    return tuple(k * (d - 1) if r == l else 0 for r in range(1, n + 1))


def extracted_j_alpha(n: int, d: int, k: int, l: int) -> Polynomial:
    """J_{alpha(k,l)} read off the expanded determinant (d >= 2)."""
    if d < 2:
        raise ValueError("for d = 1 every alpha(k,l) is the zero multidegree")
    base = VarSpec(n, d)
    coeffs = jacobian_coefficients(n, d)
    c = coeffs.get(alpha(n, k, d, l))
    return c.change_spec(base) if c is not None else base.zero()


def build_B(n: int, d: int, l: int, spec: VarSpec | None = None) -> PolyMatrix:
    """B[i,j] = a[i,j] * a[i,l]^(d-1)."""
    if not 1 <= l <= n:
        raise ValueError(f"l={l} outside [1, {n}]")
    spec = spec or VarSpec(n, d)
    return PolyMatrix.from_function(
        spec, n, lambda i, j: mul(spec.a(i, j), power(spec.a(i, l), d - 1)))


@dataclass
class MembershipReport:
    n: int
    d: int
    i: int
    j: int
    l: int
    lhs: Polynomial
    rhs: Polynomial
    char_coefficients: list[Polynomial]
    c_k_match: list[bool]
    a_power_variant_equal: bool
    elapsed_ms: float

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def ok(self) -> bool:
        return self.equal and all(self.c_k_match)

    def to_json(self) -> dict:
        return {
            "n": self.n, "d": self.d, "i": self.i, "j": self.j, "l": self.l,
            "equal": self.equal,
            "c_k_match": self.c_k_match,
            "a_power_variant_equal": self.a_power_variant_equal,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def j_alpha_for_c(n: int, d: int, m: int, l: int) -> Polynomial:
    """J_{alpha(m,l)}: extracted from the determinant for d >= 2, from det(I - A) when d = 1."""
    if d >= 2:
        return extracted_j_alpha(n, d, m, l)
    # d = 1: alpha(m,l) degenerates, the m-th homogeneous piece plays its role
    comps = homogeneous_components(jacobian_coefficients(n, 1)[(0,) * n])
    return comps.get(m, VarSpec(n, d).zero()).change_spec(VarSpec(n, d))


@lru_cache(maxsize=None)
def _b_data(n: int, d: int, l: int):
    spec = VarSpec(n, d)
    B = build_B(n, d, l, spec)
    c = char_poly(B).coefficients
    return B, c, mat_powers(B, n - 1)


def theorem_membership_check(n: int, d: int, i: int, j: int, l: int) -> MembershipReport:
    """Check c_k = d^-(n-k) J_alpha(n-k,l) and z(fern, mu(i,j,l)) = -sum_k (B^k)_{ij} c_k."""
    for v in (i, j, l):
        if not 1 <= v <= n:
            raise ValueError(f"label {v} outside [1, {n}]")
    start = time.perf_counter()
    spec = VarSpec(n, d)
    B, c, powers = _b_data(n, d, l)

    matches = []
    for k in range(n):
        scaled = j_alpha_for_c(n, d, n - k, l) * Fraction(1, d ** (n - k))
        matches.append(c[k] == scaled)

    lhs = z_fern(fern_mu(i, j, l, d, n), spec)
    rhs = -poly_sum((mul(powers[k][i - 1, j - 1], c[k]) for k in range(n)), spec)

    A_powers = mat_powers(PolyMatrix.generic(spec), n - 1)
    rhs_a = -poly_sum((mul(A_powers[k][i - 1, j - 1], c[k]) for k in range(n)), spec)

    elapsed = (time.perf_counter() - start) * 1000
    return MembershipReport(n, d, i, j, l, lhs, rhs, list(c), matches, lhs == rhs_a, elapsed)


def all_membership_checks(n: int, d: int) -> list[MembershipReport]:
    rng = range(1, n + 1)
    return [theorem_membership_check(n, d, i, j, l) for i in rng for j in rng for l in rng]


def cayley_hamilton_residual(M: PolyMatrix) -> PolyMatrix:
    """p_M(M); the zero matrix when Cayley-Hamilton holds."""
    return char_poly(M).evaluate_at(M)


def reversed_coefficients(n: int) -> list[Polynomial]:
    return char_coeffs_reversed(PolyMatrix.generic(VarSpec(n)))
