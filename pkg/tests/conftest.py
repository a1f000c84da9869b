import os
import sys

import pytest
import sympy

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    # keep tests hermetic even when the caller exports a cache directory
    monkeypatch.delenv("FERNJAC_CACHE_DIR", raising=False)


def sympy_symbols(spec):
    return [sympy.Symbol(name.replace("[", "_").replace("]", "").replace(",", "_"))
            for name in spec.names]


def to_sympy(p):
    syms = sympy_symbols(p.spec)
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if not isinstance(c, int) else sympy.Integer(c)
        for s, e in zip(syms, m):
            if e:
                term *= s ** e
        expr += term
    return expr
