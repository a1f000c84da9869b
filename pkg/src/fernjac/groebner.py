"""Buchberger's algorithm, normal forms, and ideal / radical membership.

The engine works on plain ``{exponent tuple: rational}`` dicts with monic
basis elements.  Pairs are selected by the normal strategy (smallest lcm in
the active order) and pruned with the Gebauer-Moeller criteria, which include
the coprime-leading-monomial criterion.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from operator import add, sub
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .polyring import (
    DEGREVLEX, MonomialOrder, Monomial, Polynomial, VarSpec, format_polynomial,
    parse_polynomial,
)

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

log = logging.getLogger(__name__)

ENGINE_VERSION = "1"
DEFAULT_TIMEOUT = 300.0


class GroebnerTimeout(RuntimeError):
    """The computation exceeded its time or size budget."""


@dataclass(frozen=True)
class Limits:
    max_seconds: float | None = DEFAULT_TIMEOUT
    max_basis_size: int | None = None


# ---------------------------------------------------------------------------
# order keys
# ---------------------------------------------------------------------------

def descending_key(order: MonomialOrder) -> Callable[[Monomial], tuple]:
    """Key under which *smaller* means *larger monomial* (heap friendly)."""
    perm = order.priority
    if order.kind == "lex":
        if perm is None:
            return lambda m: tuple(-e for e in m)
        return lambda m: tuple(-m[k] for k in perm)
    if perm is None:
        return lambda m: (-sum(m), m[::-1])
    rev = tuple(reversed(perm))
    return lambda m: (-sum(m), tuple(m[k] for k in rev))


def _to_q(c) -> _Q:
    return _Q(c.numerator, c.denominator) if isinstance(c, Fraction) else _Q(c)


def _from_q(c) -> int | Fraction:
    num, den = int(c.numerator), int(c.denominator)
    return num if den == 1 else Fraction(num, den)


def _divides(u: Monomial, v: Monomial) -> bool:
    for a, b in zip(u, v):
        if a > b:
            return False
    return True


def _lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(map(max, u, v))


def _coprime(u: Monomial, v: Monomial) -> bool:
    for a, b in zip(u, v):
        if a and b:
            return False
    return True


class _Elem:
    """A monic polynomial: leading monomial plus the remaining terms, largest first."""

    __slots__ = ("lm", "tail")

    def __init__(self, lm: Monomial, tail: list[tuple[Monomial, object]]):
        self.lm = lm
        self.tail = tail

    def terms(self):
        yield self.lm, _Q(1)
        yield from self.tail


class _Engine:
    def __init__(self, order: MonomialOrder):
        self.order = order
        raw = descending_key(order)
        cache: dict[Monomial, tuple] = {}

        def key(m: Monomial) -> tuple:
            k = cache.get(m)
            if k is None:
                k = cache[m] = raw(m)
            return k

        self.key = key

    def make_elem(self, p: dict) -> _Elem | None:
        if not p:
            return None
        items = sorted(p.items(), key=lambda mc: self.key(mc[0]))
        lm, lc = items[0]
        if lc == 1:
            tail = items[1:]
        else:
            inv = 1 / lc
            tail = [(m, c * inv) for m, c in items[1:]]
        return _Elem(lm, tail)

    def reduce(self, p: dict, basis: Sequence[_Elem]) -> dict:
        """Full reduction of p (consumed) modulo basis; returns the remainder."""
        key = self.key
        heap = [(key(m), m) for m in p]
        heapq.heapify(heap)
        rem: dict = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = p.pop(m, None)
            if c is None:
                continue
            for g in basis:
                if _divides(g.lm, m):
                    break
            else:
                rem[m] = c
                continue
            q = tuple(map(sub, m, g.lm))
            for tm, tc in g.tail:
                nm = tuple(map(add, tm, q))
                old = p.get(nm)
                if old is None:
                    p[nm] = -c * tc
                    heapq.heappush(heap, (key(nm), nm))
                else:
                    new = old - c * tc
                    if new:
                        p[nm] = new
                    else:
                        del p[nm]
        return rem

    def spoly(self, f: _Elem, g: _Elem) -> dict:
        L = _lcm(f.lm, g.lm)
        qf = tuple(map(sub, L, f.lm))
        qg = tuple(map(sub, L, g.lm))
        out: dict = {}
        for m, c in f.tail:
            out[tuple(map(add, m, qf))] = c
        for m, c in g.tail:
            nm = tuple(map(add, m, qg))
            new = out.get(nm, 0) - c
            if new:
                out[nm] = new
            else:
                out.pop(nm, None)
        return out

    def buchberger(self, polys: Iterable[dict], limits: Limits) -> list[_Elem]:
        start = time.monotonic()
        key = self.key
        elems = [e for e in (self.make_elem(dict(p)) for p in polys) if e is not None]
        if not elems:
            return []
        elems.sort(key=lambda e: key(e.lm), reverse=True)  # smallest leading monomial first

        f: list[_Elem] = []
        G: list[int] = []
        pairs: set[tuple[int, int]] = set()
        heap: list = []

        def check_limits():
            if limits.max_seconds is not None and time.monotonic() - start > limits.max_seconds:
                raise GroebnerTimeout(f"Groebner basis exceeded {limits.max_seconds} s")
            if limits.max_basis_size is not None and len(G) > limits.max_basis_size:
                raise GroebnerTimeout(f"Groebner basis exceeded {limits.max_basis_size} elements")

        def add_elem(h: _Elem) -> bool:
            nonlocal G, pairs
            f.append(h)
            ih = len(f) - 1
            if not any(h.lm):
                return True
            G, new_pairs, pairs = self._update(f, G, pairs, ih)
            for pr in new_pairs:
                L = _lcm(f[pr[0]].lm, f[pr[1]].lm)
                heapq.heappush(heap, (_neg(key(L)), min(pr), max(pr), pr))
            return False

        for e in elems:
            r = self.reduce({m: c for m, c in e.terms()}, [f[i] for i in G])
            h = self.make_elem(r)
            if h is not None and add_elem(h):
                return [h]

        while heap:
            check_limits()
            _, _, _, pr = heapq.heappop(heap)
            if pr not in pairs:
                continue
            pairs.discard(pr)
            s = self.spoly(f[pr[0]], f[pr[1]])
            r = self.reduce(s, [f[i] for i in G])
            h = self.make_elem(r)
            if h is None:
                continue
            if add_elem(h):
                return [h]
            log.debug("basis %d, pairs %d, new lm degree %d", len(G), len(pairs), sum(h.lm))

        return self._interreduce([f[i] for i in G])

    def _update(self, f, G, B, ih):
        """Gebauer-Moeller installation of f[ih]; returns (G, new pairs, all live pairs)."""
        mh = f[ih].lm
        C = sorted(G)
        D: list[tuple[int, int]] = []
        while C:
            ig = C.pop(0)
            mg = f[ig].lm
            lcm_hg = _lcm(mh, mg)

            def dominated(ip: int) -> bool:
                return _divides(_lcm(mh, f[ip].lm), lcm_hg)

            if _coprime(mh, mg) or (
                    not any(dominated(ip) for ip in C) and not any(dominated(p[1]) for p in D)):
                D.append((ih, ig))
        E = [(h, g) for h, g in D if not _coprime(mh, f[g].lm)]
        B_new = set()
        for pr in B:
            g1, g2 = pr
            m1, m2 = f[g1].lm, f[g2].lm
            L12 = _lcm(m1, m2)
            if not _divides(mh, L12) or _lcm(m1, mh) == L12 or _lcm(m2, mh) == L12:
                B_new.add(pr)
        new = [(min(p), max(p)) for p in E]
        B_new.update(new)
        G_new = [ig for ig in G if not _divides(mh, f[ig].lm)]
        G_new.append(ih)
        return G_new, new, B_new

    def _interreduce(self, basis: list[_Elem]) -> list[_Elem]:
        basis = sorted(basis, key=lambda e: self.key(e.lm))
        out = []
        for k, e in enumerate(basis):
            others = basis[:k] + basis[k + 1:]
            tail = self.reduce(dict(e.tail), others)
            tail_items = sorted(tail.items(), key=lambda mc: self.key(mc[0]))
            out.append(_Elem(e.lm, tail_items))
        return out


def _neg(k: tuple) -> tuple:
    # invert a descending key so the heap pops the smallest lcm first
    return tuple(_neg(x) if isinstance(x, tuple) else -x for x in k)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def _to_dict(p: Polynomial) -> dict:
    return {m: _to_q(c) for m, c in p.terms.items()}


def _elem_to_poly(e: _Elem, spec: VarSpec) -> Polynomial:
    return Polynomial._raw(spec, {m: _from_q(c) for m, c in e.terms()})


@dataclass
class GroebnerBasis:
    """A reduced Groebner basis with monic elements, largest leading monomial first."""

    generators: list[Polynomial]
    order: MonomialOrder
    spec: VarSpec
    reduced: bool = True
    _elems: list[_Elem] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self._elems is None:
            eng = _Engine(self.order)
            self._elems = [eng.make_elem(_to_dict(g)) for g in self.generators]

    def __len__(self) -> int:
        return len(self.generators)

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0] == 1

    def normal_form(self, p: Polynomial) -> Polynomial:
        p = p.change_spec(self.spec)
        rem = _Engine(self.order).reduce(_to_dict(p), self._elems)
        return Polynomial._raw(self.spec, {m: _from_q(c) for m, c in rem.items()})

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def primitive_generators(self) -> list[Polynomial]:
        """The basis scaled to integer-primitive form with positive leading coefficient."""
        return [g / g.content() for g in self.generators]

    def is_groebner(self) -> bool:
        """Every S-polynomial reduces to zero."""
        eng = _Engine(self.order)
        E = self._elems
        for a in range(len(E)):
            for b in range(a + 1, len(E)):
                if _coprime(E[a].lm, E[b].lm):
                    continue
                if eng.reduce(eng.spoly(E[a], E[b]), E):
                    return False
        return True

    def is_reduced(self) -> bool:
        for k, e in enumerate(self._elems):
            for j, other in enumerate(self._elems):
                if j != k and any(_divides(other.lm, m) for m, _ in e.terms()):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "engine_version": ENGINE_VERSION,
            "order": self.order.kind,
            "priority": list(self.order.priority) if self.order.priority else None,
            "spec": {"n": self.spec.n, "x": self.spec.includes_x,
                     "t": self.spec.includes_t, "y": self.spec.includes_y},
            "generators": [format_polynomial(g, self.order) for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroebnerBasis":
        s = data["spec"]
        spec = VarSpec(s["n"], includes_x=s["x"], includes_t=s["t"], includes_y=s["y"])
        prio = data.get("priority")
        order = MonomialOrder(data["order"], tuple(prio) if prio else None)
        gens = [parse_polynomial(g, spec) for g in data["generators"]]
        return cls(gens, order, spec)


def normal_form(p: Polynomial, G: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Remainder of multivariate division of p by G (G need not be a Groebner basis)."""
    eng = _Engine(order)
    elems = []
    for g in G:
        if g.spec != p.spec:
            raise ValueError("divisors live in a different ring")
        e = eng.make_elem(_to_dict(g))
        if e is not None:
            elems.append(e)
    rem = eng.reduce(_to_dict(p), elems)
    return Polynomial._raw(p.spec, {m: _from_q(c) for m, c in rem.items()})


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
               limits: Limits = Limits()) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    spec = gens[0].spec
    if any(g.spec != spec for g in gens):
        raise ValueError("generators live in different rings")
    eng = _Engine(order)
    elems = eng.buchberger((_to_dict(g) for g in gens), limits)
    elems.sort(key=lambda e: eng.key(e.lm))
    polys = [_elem_to_poly(e, spec) for e in elems]
    return GroebnerBasis(polys, order, spec, True, elems)


# ---------------------------------------------------------------------------
# ideals and membership
# ---------------------------------------------------------------------------

@dataclass
class MembershipVerdict:
    target: str
    ideal: str
    verdict: str  # member | non-member | timeout
    witness: Polynomial | None
    elapsed_ms: float

    @property
    def witness_terms(self) -> int:
        return len(self.witness) if self.witness is not None else 0

    @property
    def is_member(self) -> bool:
        return self.verdict == "member"


class BasisCache:
    """In-memory basis cache, optionally mirrored to JSON files on disk."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self._mem: dict[tuple, GroebnerBasis] = {}
        self.directory = Path(directory) if directory else None

    @classmethod
    def from_env(cls) -> "BasisCache":
        return cls(os.environ.get("FERNJAC_CACHE_DIR"))

    def _path(self, key: tuple) -> Path:
        digest = hashlib.sha256(repr(key).encode()).hexdigest()[:24]
        return self.directory / f"basis-{digest}.json"

    def get_or_compute(self, name: str, gens: Sequence[Polynomial], order: MonomialOrder,
                       limits: Limits) -> GroebnerBasis:
        spec = gens[0].spec
        # generators enter the key so a stale name can never alias a different ideal
        fingerprint = hashlib.sha256(
            "\n".join(format_polynomial(g) for g in gens).encode()).hexdigest()
        key = (name, order.kind, order.priority, spec.names, ENGINE_VERSION, fingerprint)
        if key in self._mem:
            return self._mem[key]
        if self.directory is not None:
            path = self._path(key)
            if path.exists():
                gb = GroebnerBasis.from_json(json.loads(path.read_text()))
                self._mem[key] = gb
                return gb
        gb = buchberger(gens, order, limits)
        self._mem[key] = gb
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = self._path(key).with_suffix(".tmp")
            tmp.write_text(json.dumps(gb.to_json(), sort_keys=True))
            tmp.replace(self._path(key))
        return gb


_default_cache = BasisCache()


def ideal_membership(p: Polynomial, ideal, order: MonomialOrder = DEGREVLEX,
                     limits: Limits = Limits(), cache: BasisCache | None = None,
                     target: str | None = None) -> MembershipVerdict:
    """Decide p in ideal by reducing p to normal form modulo the ideal's Groebner basis."""
    cache = cache or _default_cache
    start = time.perf_counter()
    gens = [g.change_spec(p.spec) for g in ideal.generators]
    try:
        gb = cache.get_or_compute(ideal.name, gens, order, limits)
    except GroebnerTimeout:
        return MembershipVerdict(target or str(p), ideal.name, "timeout", None,
                                 (time.perf_counter() - start) * 1000)
    nf = gb.normal_form(p)
    return MembershipVerdict(target or str(p), ideal.name,
                             "member" if nf.is_zero() else "non-member", nf,
                             (time.perf_counter() - start) * 1000)


def radical_membership(p: Polynomial, ideal, order: MonomialOrder = DEGREVLEX,
                       limits: Limits = Limits(), target: str | None = None) -> MembershipVerdict:
    """Decide p in the radical: 1 in <ideal, 1 - y p> with a fresh variable y."""
    start = time.perf_counter()
    spec = p.spec.extended(y=True)
    y = spec.y()
    gens = [g.change_spec(spec) for g in ideal.generators]
    gens.append(spec.one() - y * p.change_spec(spec))
    try:
        gb = buchberger(gens, order, limits)
    except GroebnerTimeout:
        return MembershipVerdict(target or str(p), f"sqrt({ideal.name})", "timeout", None,
                                 (time.perf_counter() - start) * 1000)
    witness = gb.normal_form(spec.one())
    return MembershipVerdict(target or str(p), f"sqrt({ideal.name})",
                             "member" if gb.is_unit() else "non-member", witness,
                             (time.perf_counter() - start) * 1000)
