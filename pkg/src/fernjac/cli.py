"""``fernjac`` command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 timeout, 3 a verification
or reproduction mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import chproof, jacobian, section5
from .groebner import BasisCache, Limits, ideal_membership, radical_membership
from .polyring import (
    LEX, DEGREVLEX, PolynomialSyntaxError, VarSpec, format_terms, parse_polynomial,
)
from .trees import (
    FernLabeling, fern_mu, formal_inverse_fixed_point, formal_inverse_tree_sum,
    parse_fern_labeling, z_fern,
)

EXIT_OK, EXIT_USAGE, EXIT_TIMEOUT, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, text_lines: Sequence[str], payload) -> None:
    if args.output == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _order(args):
    return LEX if args.order == "lex" else DEGREVLEX


def _limits(args) -> Limits:
    return Limits(max_seconds=args.timeout_secs)


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _series_string(p) -> str:
    # ascending x-degree, leading-term-first inside each degree
    spec = p.spec
    xs = spec.x_positions
    groups: dict[int, list] = {}
    for m, c in p.sorted_terms(DEGREVLEX):
        groups.setdefault(sum(m[k] for k in xs), []).append((m, c))
    terms = [t for deg in sorted(groups) for t in groups[deg]]
    return format_terms(spec, terms)


def cmd_inverse(args) -> int:
    _require(args, "n", "d", "max_degree")
    comps = [args.component] if args.component else list(range(1, args.n + 1))
    fixed = formal_inverse_fixed_point(args.n, args.d, args.max_degree)
    lines, payload, agree = [], {}, True
    for i in comps:
        if not 1 <= i <= args.n:
            raise UsageError(f"--component must lie in [1, {args.n}]")
        g = formal_inverse_tree_sum(args.n, args.d, i, args.max_degree)
        agree &= g == fixed[i - 1]
        s = _series_string(g)
        lines.append(s if len(comps) == 1 else f"g[{i}] = {s}")
        payload[str(i)] = s
    _emit(args, lines, {"n": args.n, "d": args.d, "max_degree": args.max_degree,
                        "components": payload, "constructions_agree": agree})
    if not agree:
        print("tree sum and fixed-point iteration disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_jac_ideal(args) -> int:
    _require(args, "n", "d")
    ideal = jacobian.jacobian_ideal(args.n, args.d)
    gens = [str(g) for g in ideal.generators]
    _emit(args, [f"{ideal.name}: {len(gens)} generators"] + gens,
          {"ideal": ideal.name, "generators": gens})
    return EXIT_OK


def _labeling(args) -> FernLabeling:
    if args.labeling is not None:
        try:
            return parse_fern_labeling(args.labeling, args.n, args.d)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _require(args, "i", "j", "l")
    for v in (args.i, args.j, args.l):
        if not 1 <= v <= args.n:
            raise UsageError(f"labels must lie in [1, {args.n}]")
    return fern_mu(args.i, args.j, args.l, args.d, args.n)


def cmd_zfern(args) -> int:
    _require(args, "n", "d")
    fl = _labeling(args)
    z = z_fern(fl)
    _emit(args, [str(z)], {"labeling": str(fl), "z": str(z)})
    return EXIT_OK


def _ideal(args):
    J = jacobian.jacobian_ideal(args.n, args.d)
    if args.ideal == "J":
        return J
    if args.ideal == "J+nil2":
        return J + jacobian.nil2_ideal(args.n)
    return J + jacobian.char_ideal(args.n)


def _target(args):
    if args.target is not None:
        try:
            return args.target, parse_polynomial(args.target, VarSpec(args.n))
        except PolynomialSyntaxError as exc:
            raise UsageError(str(exc)) from None
    fl = _labeling(args)
    return f"z({fl})", z_fern(fl)


def _membership(args, radical: bool) -> int:
    _require(args, "n", "d")
    name, p = _target(args)
    ideal = _ideal(args)
    if radical:
        v = radical_membership(p, ideal, _order(args), _limits(args), target=name)
    else:
        v = ideal_membership(p, ideal, _order(args), _limits(args), BasisCache.from_env(), name)
    payload = {"target": v.target, "ideal": v.ideal, "verdict": v.verdict,
               "witness_terms": v.witness_terms, "elapsed_ms": round(v.elapsed_ms, 3)}
    _emit(args, [f"{v.target} in {v.ideal}: {v.verdict}"], payload)
    return EXIT_TIMEOUT if v.verdict == "timeout" else EXIT_OK


def cmd_member(args) -> int:
    return _membership(args, radical=False)


def cmd_radical_member(args) -> int:
    return _membership(args, radical=True)


def cmd_theorem(args) -> int:
    _require(args, "n", "d")
    rng = range(1, args.n + 1)
    triples = [(args.i, args.j, args.l)] if args.i is not None else [
        (i, j, l) for i in rng for j in rng for l in rng]
    for t in triples:
        if None in t:
            raise UsageError("give all of --i, --j, --l or none of them")
        if any(not 1 <= v <= args.n for v in t):
            raise UsageError(f"labels must lie in [1, {args.n}]")
    reports = [jacobian.theorem_membership_check(args.n, args.d, *t) for t in triples]
    lines = [f"(i,j,l)=({r.i},{r.j},{r.l}): identity {'holds' if r.equal else 'FAILS'}, "
             f"c_k match {r.c_k_match}, A^k variant {'equal' if r.a_power_variant_equal else 'differs'}"
             for r in reports]
    _emit(args, lines, [r.to_json() for r in reports])
    return EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH


def cmd_ch_verify(args) -> int:
    _require(args, "n")
    if not 1 <= args.n <= 5:
        raise UsageError("--n must lie in [1, 5]")
    reports = chproof.verify_ch(args.n)
    lines = [f"(r,l)=({r.r},{r.l}): {r.index_count} indices, {'pass' if r.ok else 'FAIL'}"
             for r in reports]
    for r in reports:
        lines += ["  " + f for f in r.failures]
    _emit(args, lines, [r.to_json() for r in reports])
    return EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH


def cmd_section5(args) -> int:
    report = section5.section5_report(args.include_slow, _order(args), _limits(args),
                                      BasisCache.from_env())
    lines = [f"{'claim':<16}{'rows':>6}{'agree':>7}{'mismatch':>10}"]
    lines += [f"{cid:<16}{total:>6}{ok:>7}{bad:>10}" for cid, total, ok, bad in report.summary()]
    for r in report.rows:
        if r.status in ("mismatch", "timeout") or r.claim_id.endswith(("sum", "square", "radical", "nil2", "char")) \
                or r.computed == "non-member":
            lines.append(f"  [{r.status}] {r.claim_id}: {r.target} in {r.ideal}: "
                         f"expected {r.expected}, computed {r.computed}")
    lines += ["note: " + n for n in report.notes]
    _emit(args, lines, report.to_json())
    if report.mismatches:
        return EXIT_MISMATCH
    if report.timeouts:
        return EXIT_TIMEOUT
    return EXIT_OK


COMMANDS = {
    "inverse": cmd_inverse,
    "jac-ideal": cmd_jac_ideal,
    "zfern": cmd_zfern,
    "member": cmd_member,
    "radical-member": cmd_radical_member,
    "theorem": cmd_theorem,
    "ch-verify": cmd_ch_verify,
    "section5": cmd_section5,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--i", type=int)
    common.add_argument("--j", type=int)
    common.add_argument("--l", type=int)
    common.add_argument("--component", type=int)
    common.add_argument("--max-degree", type=int)
    common.add_argument("--labeling")
    common.add_argument("--target")
    common.add_argument("--ideal", choices=["J", "J+nil2", "J+char"], default="J")
    common.add_argument("--order", choices=["lex", "degrevlex"], default="degrevlex")
    common.add_argument("--timeout-secs", type=float, default=300.0)
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--include-slow", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="fernjac", description="Fern z-values and the Jacobian ideal of degree d-linear maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for name in ("n", "d"):
        v = getattr(args, name)
        if v is not None and v < 1:
            print(f"fernjac: error: --{name} must be positive", file=sys.stderr)
            return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fernjac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"fernjac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
