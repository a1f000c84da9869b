"""Reproduction battery for the Groebner membership results on fern z-values.

Each row records one membership question, the reference verdict, and the
verdict computed here.  The reference exception lists name one
representative per relabeling class: J(d,n) is stable under permuting
the indices 1..n simultaneously, so every relabeling of an exception is an
exception too and is expected as such.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable

from .groebner import BasisCache, Limits, MembershipVerdict, ideal_membership, radical_membership
from .jacobian import IdealSpec, char_ideal, jacobian_ideal, nil2_ideal
from .polyring import DEGREVLEX, MonomialOrder, Polynomial
from .trees import FernLabeling, all_fern_labelings, parse_fern_labeling, z_fern

MEMBER = "member"
NON_MEMBER = "non-member"
UNSTATED = "unstated"

# the pair of exceptional labelings for n = 3, keyed by d
EXCEPTIONS = {
    2: ("1;(2);(3);(1,1)", "1;(3);(2);(1,1)"),
    3: ("1;(2,2);(3,3);(1,1,1)", "1;(3,3);(2,2);(1,1,1)"),
    4: ("1;(2,2,2);(3,3,3);(1,1,1,1)", "1;(3,3,3);(2,2,2);(1,1,1,1)"),
}

NOTES = [
    "Membership for n=2 and the sum/square rows is tested in J(d,n) for the d under "
    "discussion; the reference statements write J_{1,2}, J_{1,3} there.",
    "Exception lists are read up to simultaneous relabeling of 1..n.",
    "The unions with I_nil2 and I_char are ideal sums (concatenated generators).",
]


@dataclass
class Row:
    claim_id: str
    ideal: str
    target: str
    expected: str
    computed: str
    witness_terms: int
    elapsed_ms: float
    covers: int = 1

    @property
    def status(self) -> str:
        if self.computed == "timeout":
            return "timeout"
        if self.expected == UNSTATED:
            return "reported"
        return "match" if self.expected == self.computed else "mismatch"

    def to_json(self, with_timing: bool = True) -> dict:
        out = {
            "claim_id": self.claim_id,
            "ideal": self.ideal,
            "target": self.target,
            "expected": self.expected,
            "computed": self.computed,
            "witness_terms": self.witness_terms,
            "status": self.status,
        }
        if self.covers != 1:
            out["covers"] = self.covers
        if with_timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass
class Section5Report:
    rows: list[Row] = field(default_factory=list)
    notes: list[str] = field(default_factory=lambda: list(NOTES))

    @property
    def mismatches(self) -> list[Row]:
        return [r for r in self.rows if r.status == "mismatch"]

    @property
    def timeouts(self) -> list[Row]:
        return [r for r in self.rows if r.status == "timeout"]

    def rows_for(self, claim_id: str) -> list[Row]:
        return [r for r in self.rows if r.claim_id == claim_id]

    def to_json(self, with_timing: bool = True) -> dict:
        return {"rows": [r.to_json(with_timing) for r in self.rows], "notes": self.notes}

    def summary(self) -> list[tuple[str, int, int, int]]:
        """(claim_id, rows, matches, mismatches) per claim, in first-seen order."""
        out: dict[str, list[int]] = {}
        for r in self.rows:
            s = out.setdefault(r.claim_id, [0, 0, 0])
            s[0] += 1
            s[1] += r.status in ("match", "reported")
            s[2] += r.status == "mismatch"
        return [(k, *v) for k, v in out.items()]


def relabel(fl: FernLabeling, perm: dict[int, int]) -> FernLabeling:
    return FernLabeling(perm[fl.root],
                        tuple(tuple(perm[v] for v in t) for t in fl.side_tuples),
                        tuple(perm[v] for v in fl.last_tuple))


def relabeling_orbit(fl: FernLabeling, n: int) -> set[FernLabeling]:
    labels = range(1, n + 1)
    return {relabel(fl, dict(zip(labels, p))) for p in itertools.permutations(labels)}


def exception_orbit(d: int, n: int = 3) -> set[FernLabeling]:
    out: set[FernLabeling] = set()
    for s in EXCEPTIONS[d]:
        out |= relabeling_orbit(parse_fern_labeling(s, n, d), n)
    return out


def canonical(fl: FernLabeling) -> FernLabeling:
    """Sort the side leaves of each spine vertex; z-values only see these multisets."""
    return FernLabeling(fl.root, tuple(tuple(sorted(t)) for t in fl.side_tuples),
                        (fl.last_tuple[0],) + tuple(sorted(fl.last_tuple[1:])))


def _row(claim_id: str, target: str, expected: str, v: MembershipVerdict, covers: int = 1) -> Row:
    return Row(claim_id, v.ideal, target, expected, v.verdict, v.witness_terms, v.elapsed_ms, covers)


def _all_labelings_rows(claim_id: str, d: int, n: int, ideal: IdealSpec, expected_of,
                        order: MonomialOrder, limits: Limits, cache: BasisCache,
                        collapse: bool) -> Iterable[Row]:
    if collapse:
        classes: dict[FernLabeling, int] = {}
        for fl in all_fern_labelings(d, n):
            c = canonical(fl)
            classes[c] = classes.get(c, 0) + 1
        items = list(classes.items())
    else:
        items = [(fl, 1) for fl in all_fern_labelings(d, n)]
    for fl, covers in items:
        v = ideal_membership(z_fern(fl), ideal, order, limits, cache, str(fl))
        yield _row(claim_id, str(fl), expected_of(fl), v, covers)


def _n3_rows(d: int, order: MonomialOrder, limits: Limits, cache: BasisCache,
             collapse: bool, stated_extensions: bool) -> list[Row]:
    n = 3
    J = jacobian_ideal(n, d)
    orbit = exception_orbit(d, n)
    orbit_canon = {canonical(f) for f in orbit}
    tag = f"n3-d{d}"
    rows = list(_all_labelings_rows(
        f"{tag}-all", d, n, J,
        lambda fl: NON_MEMBER if canonical(fl) in orbit_canon else MEMBER,
        order, limits, cache, collapse))

    e1, e2 = (parse_fern_labeling(s, n, d) for s in EXCEPTIONS[d])
    z1, z2 = z_fern(e1), z_fern(e2)
    rows.append(_row(f"{tag}-sum", f"z({e1}) + z({e2})", MEMBER,
                     ideal_membership(z1 + z2, J, order, limits, cache)))
    for e, z in ((e1, z1), (e2, z2)):
        rows.append(_row(f"{tag}-square", f"z({e})^2", MEMBER,
                         ideal_membership(z * z, J, order, limits, cache)))
    for e, z in ((e1, z1), (e2, z2)):
        rows.append(_row(f"{tag}-radical", f"z({e})", MEMBER,
                         radical_membership(z, J, order, limits)))
    expected_ext = MEMBER if stated_extensions else UNSTATED
    for label, extra in (("nil2", nil2_ideal(n)), ("char", char_ideal(n))):
        ideal = J + extra
        for e, z in ((e1, z1), (e2, z2)):
            rows.append(_row(f"{tag}-{label}", f"z({e})", expected_ext,
                             ideal_membership(z, ideal, order, limits, cache)))
    return rows


def section5_report(include_slow: bool = False, order: MonomialOrder = DEGREVLEX,
                    limits: Limits = Limits(), cache: BasisCache | None = None) -> Section5Report:
    """Evaluate every membership claim; slow rows (n = 3, d = 3, 4) only on request."""
    cache = cache or BasisCache()
    report = Section5Report()
    for d in (2, 3):
        J = jacobian_ideal(2, d)
        report.rows.extend(_all_labelings_rows(
            f"n2-d{d}", d, 2, J, lambda fl: MEMBER, order, limits, cache, collapse=False))
    report.rows.extend(_n3_rows(2, order, limits, cache, collapse=False, stated_extensions=True))
    if include_slow:
        for d in (3, 4):
            report.rows.extend(_n3_rows(d, order, limits, cache, collapse=True,
                                        stated_extensions=False))
    return report


def membership_target(labeling: str, n: int, d: int) -> tuple[FernLabeling, Polynomial]:
    fl = parse_fern_labeling(labeling, n, d)
    return fl, z_fern(fl)
