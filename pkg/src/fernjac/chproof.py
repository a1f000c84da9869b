"""Exhaustive check of the sign-reversing involution behind Cayley-Hamilton.

The identity sum_i J_i (A^(n-i))_{r,l} = 0 is expanded into signed
monomials, each indexed by a walk ``lam`` from r to l of length n - i and a
permutation ``sigma`` of an i-subset S.  The involution pairs every index
with one of opposite sign and equal monomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .polymatrix import PolyMatrix, char_coeffs_reversed, mat_powers
from .polyring import Polynomial, VarSpec, mul, poly_sum


class MalformedIndexError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A permutation of a finite subset, stored as sorted (s, sigma(s)) pairs."""

    pairs: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_cycles(cls, cycles) -> "Permutation":
        mapping = {}
        for c in cycles:
            for k, v in enumerate(c):
                if v in mapping:
                    raise ValueError(f"cycles overlap at {v}")
                mapping[v] = c[(k + 1) % len(c)]
        return cls(tuple(sorted(mapping.items())))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.pairs)

    def __call__(self, s: int) -> int:
        return dict(self.pairs)[s]

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles, each starting at its smallest element, ordered by that element."""
        mapping = dict(self.pairs)
        seen = set()
        out = []
        for s in self.support:
            if s in seen:
                continue
            cyc = [s]
            seen.add(s)
            nxt = mapping[s]
            while nxt != s:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = mapping[nxt]
            out.append(tuple(cyc))
        return out

    def cycle_of(self, s: int) -> tuple[int, ...]:
        """The cycle through s, starting at s."""
        mapping = dict(self.pairs)
        cyc = [s]
        nxt = mapping[s]
        while nxt != s:
            cyc.append(nxt)
            nxt = mapping[nxt]
        return tuple(cyc)

    @property
    def cycle_count(self) -> int:
        return len(self.cycles())

    def signature(self) -> int:
        return (-1) ** (len(self.pairs) - self.cycle_count)

    def without(self, cycle) -> "Permutation":
        drop = set(cycle)
        return Permutation(tuple(p for p in self.pairs if p[0] not in drop))

    def with_cycle(self, cycle) -> "Permutation":
        if set(cycle) & set(self.support):
            raise MalformedIndexError("adjoined cycle meets the permutation's support")
        return Permutation(tuple(sorted(self.pairs + Permutation.from_cycles([cycle]).pairs)))


@dataclass(frozen=True)
class TermIndex:
    """(lam, S, sigma); lam is empty exactly when |S| = n."""

    lam: tuple[int, ...]
    sigma: Permutation = field(default_factory=Permutation)

    @property
    def S(self) -> tuple[int, ...]:
        return self.sigma.support

    @property
    def i(self) -> int:
        return len(self.sigma.pairs)

    @property
    def sign(self) -> int:
        return -1 if self.sigma.cycle_count % 2 else 1

    def monomial(self, n: int) -> tuple[int, ...]:
        e = [0] * (n * n)
        for u, v in zip(self.lam, self.lam[1:]):
            e[(u - 1) * n + v - 1] += 1
        for s, t in self.sigma.pairs:
            e[(s - 1) * n + t - 1] += 1
        return tuple(e)

    def __str__(self) -> str:
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.sigma.cycles())
        return f"lam={self.lam} S={set(self.S) or '{}'} sigma={cyc or '()'}"


@dataclass(frozen=True)
class FirstRep:
    l1: int
    l2: int
    C: tuple[int, ...]


def first_rep(lam: tuple[int, ...]) -> FirstRep | None:
    """Indices l1 < l2 with lam[l1] == lam[l2] and lam[l1+1:] free of repeats.

    Equivalently l1 is the last position whose value occurs again later, so
    the scan runs from the right end of the walk.
    """
    later: dict[int, int] = {}
    for k in range(len(lam) - 1, -1, -1):
        v = lam[k]
        if v in later:
            l2 = later[v]
            return FirstRep(k, l2, tuple(lam[k + 1:l2 + 1]))
        later[v] = k
    return None


def enumerate_terms(n: int, r: int, l: int, diag: bool | None = None) -> list[TermIndex]:
    """Every index of the expansion of sum_i J_i (A^(n-i))_{r,l}."""
    if diag is None:
        diag = r == l
    if diag != (r == l):
        raise ValueError("diag must hold exactly when r == l")
    labels = range(1, n + 1)
    top = n if diag else n - 1
    out = []
    for i in range(top + 1):
        length = n - i
        if length == 0:
            walks = [()]
        else:
            walks = [(r, *mid, l) for mid in itertools.product(labels, repeat=length - 1)]
        for S in itertools.combinations(labels, i):
            perms = [Permutation(tuple(zip(S, img))) for img in itertools.permutations(S)]
            for lam in walks:
                for sigma in perms:
                    out.append(TermIndex(lam, sigma))
    return out


def _cut(lam: tuple[int, ...], fr: FirstRep, sigma: Permutation) -> TermIndex:
    rest = lam[:fr.l1 + 1] + lam[fr.l2 + 1:]
    if len(rest) == 1:
        rest = ()  # a walk of length 0 is the empty index of the i = n term
    return TermIndex(rest, sigma.with_cycle(fr.C))


def involution(x: TermIndex, r: int, l: int, diag: bool | None = None) -> TermIndex:
    """The four-case sign-reversing map, following the combinatorial proof verbatim."""
    if diag is None:
        diag = r == l
    lam, sigma = x.lam, x.sigma
    S = set(sigma.support)
    if not lam:
        # all of [1,n] is permuted: unfold the cycle through r into a closed walk
        if not diag or r not in S:
            raise MalformedIndexError(f"empty walk needs r in S on the diagonal: {x}")
        c = sigma.cycle_of(r)
        return TermIndex((r, *c[1:], r), sigma.without(c))
    if lam[0] != r or lam[-1] != l:
        raise MalformedIndexError(f"walk must run from {r} to {l}: {x}")
    hs = [k for k, v in enumerate(lam) if v in S]
    fr = first_rep(lam)
    if not hs:
        if fr is None:
            raise MalformedIndexError(f"no first repetition and no walk vertex in S: {x}")
        return _cut(lam, fr, sigma)
    h = hs[-1]
    if fr is None or h > fr.l1:
        c = sigma.cycle_of(lam[h])
        new_lam = lam[:h + 1] + c[1:] + (lam[h],) + lam[h + 1:]
        return TermIndex(new_lam, sigma.without(c))
    return _cut(lam, fr, sigma)


@dataclass
class CHReport:
    n: int
    r: int
    l: int
    index_count: int
    total: bool
    involution_ok: bool
    fixed_point_free: bool
    sign_reversing: bool
    monomial_preserving: bool
    sum_zero: bool
    matrix_sum_zero: bool
    expansion_matches: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all((self.total, self.involution_ok, self.fixed_point_free, self.sign_reversing,
                    self.monomial_preserving, self.sum_zero, self.matrix_sum_zero,
                    self.expansion_matches))

    def to_json(self) -> dict:
        return {
            "n": self.n, "r": self.r, "l": self.l,
            "index_count": self.index_count,
            "involution_ok": self.involution_ok and self.total,
            "fixed_point_free": self.fixed_point_free,
            "sign_reversing": self.sign_reversing,
            "monomial_preserving": self.monomial_preserving,
            "sum_zero": self.sum_zero and self.matrix_sum_zero,
        }


def _index_sum(terms: list[TermIndex], n: int, spec: VarSpec) -> Polynomial:
    acc: dict[tuple[int, ...], int] = {}
    for x in terms:
        m = x.monomial(n)
        acc[m] = acc.get(m, 0) + x.sign
    return Polynomial(spec, acc)


def verify_case(n: int, r: int, l: int, involution_fn=involution, max_failures: int = 5) -> CHReport:
    diag = r == l
    spec = VarSpec(n)
    terms = enumerate_terms(n, r, l, diag)
    universe = set(terms)
    failures: list[str] = []
    total = inv = fpf = signrev = monopres = True

    def note(msg: str) -> None:
        if len(failures) < max_failures:
            failures.append(msg)

    for x in terms:
        try:
            y = involution_fn(x, r, l, diag)
        except MalformedIndexError as exc:
            total = False
            note(f"undefined on {x}: {exc}")
            continue
        if y not in universe:
            total = False
            note(f"{x} maps outside the index set to {y}")
            continue
        if y == x:
            fpf = False
            note(f"fixed point {x}")
        if y.sign != -x.sign:
            signrev = False
            note(f"sign not reversed: {x} -> {y}")
        if y.monomial(n) != x.monomial(n):
            monopres = False
            note(f"monomial changed: {x} -> {y}")
        try:
            back = involution_fn(y, r, l, diag)
        except MalformedIndexError:
            back = None
        if back != x:
            inv = False
            note(f"not an involution: {x} -> {y} -> {back}")

    # the signed index sum, split by i, against J_i (A^(n-i))_{r,l}
    A = PolyMatrix.generic(spec)
    J = char_coeffs_reversed(A)
    powers = mat_powers(A, n)
    top = n if diag else n - 1
    expansion_ok = True
    matrix_terms = []
    for i in range(top + 1):
        expected = mul(J[i], powers[n - i][r - 1, l - 1])
        matrix_terms.append(expected)
        got = _index_sum([x for x in terms if x.i == i], n, spec)
        if got != expected:
            expansion_ok = False
            note(f"index expansion of the i={i} term disagrees with J_{i} (A^{n - i})_{r},{l}")
    return CHReport(
        n, r, l, len(terms), total, inv, fpf, signrev, monopres,
        sum_zero=_index_sum(terms, n, spec).is_zero(),
        matrix_sum_zero=poly_sum(matrix_terms, spec).is_zero(),
        expansion_matches=expansion_ok,
        failures=failures,
    )


def verify_ch(n: int, involution_fn=involution) -> list[CHReport]:
    if n < 1:
        raise ValueError("n must be positive")
    return [verify_case(n, r, l, involution_fn) for r in range(1, n + 1) for l in range(1, n + 1)]
