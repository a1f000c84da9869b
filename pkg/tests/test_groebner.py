from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import sympy_symbols, to_sympy
from fernjac.groebner import (
    BasisCache, GroebnerBasis, GroebnerTimeout, Limits, buchberger, ideal_membership,
    normal_form, radical_membership,
)
from fernjac.jacobian import IdealSpec, jacobian_ideal
from fernjac.polyring import DEGREVLEX, LEX, Polynomial, VarSpec, parse_polynomial
from fernjac.trees import parse_fern_labeling, z_fern

R = VarSpec(2)


def P(s, spec=R):
    return parse_polynomial(s, spec)


def ideal(name, *polys):
    return IdealSpec(name, polys[0].spec.n, tuple(polys))


def sympy_reduced(gens, order):
    syms = sympy_symbols(gens[0].spec)
    G = sympy.groebner([to_sympy(g) for g in gens], *syms, order=order, domain="QQ")
    return {sympy.expand(g) for g in G.exprs}


# --- normal forms -------------------------------------------------------------

def test_normal_form_examples():
    p = P("a[1,1]^2*a[1,2] + 3*a[2,2]")
    assert normal_form(p, [p]).is_zero()
    assert normal_form(P("a[1,1]"), [P("a[1,1] - a[1,2]")], LEX) == P("a[1,2]")
    # x^2 y - x = x (x y - 1), with x = a[1,1], y = a[1,2]
    assert normal_form(P("a[1,1]^2*a[1,2] - a[1,1]"), [P("a[1,1]*a[1,2] - 1")]).is_zero()


def test_normal_form_rejects_foreign_ring():
    with pytest.raises(ValueError):
        normal_form(P("a[1,1]"), [VarSpec(3).a(1, 1)])


# --- bases ----------------------------------------------------------------------

def test_unit_ideal():
    G = buchberger([R.one()])
    assert G.generators == [R.one()] and G.is_unit()
    assert buchberger([P("a[1,1]"), P("a[1,1] + 2")]).is_unit()


def test_single_generator_is_made_monic():
    G = buchberger([P("4*a[1,1]^2 - 2*a[2,2]")])
    assert G.generators == [P("a[1,1]^2 - 1/2*a[2,2]")]
    assert G.primitive_generators() == [P("2*a[1,1]^2 - a[2,2]")]


def test_hand_example_lex():
    G = buchberger([P("a[1,1]^2 - 1"), P("a[1,1]*a[1,2] - 1")], LEX)
    assert set(G.generators) == {P("a[1,1] - a[1,2]"), P("a[1,2]^2 - 1")}


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3)])
@pytest.mark.parametrize("order,name", [(DEGREVLEX, "grevlex"), (LEX, "lex")])
def test_jacobian_bases_match_sympy(n, d, order, name):
    gens = list(jacobian_ideal(n, d).generators)
    G = buchberger(gens, order)
    assert {to_sympy(g) for g in G.generators} == sympy_reduced(gens, name)
    assert G.is_groebner() and G.is_reduced()
    assert all(G.contains(g) for g in gens)


def test_j23_basis_size():
    assert len(buchberger(list(jacobian_ideal(3, 2).generators))) == 85


small = st.dictionaries(st.tuples(*[st.integers(0, 2)] * 4), st.integers(-3, 3), min_size=1, max_size=3)


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=1, max_size=3))
def test_random_ideals_match_sympy(term_maps):
    gens = [Polynomial(R, t) for t in term_maps]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    G = buchberger(gens)
    assert {to_sympy(g) for g in G.generators} == sympy_reduced(gens, "grevlex")
    for g in gens:
        assert G.normal_form(g).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=1, max_size=2), small)
def test_normal_form_idempotent(term_maps, target):
    gens = [Polynomial(R, t) for t in term_maps if any(target.values())]
    gens = [g for g in gens if not g.is_zero()] or [R.a(1, 1)]
    G = buchberger(gens)
    p = Polynomial(R, target)
    nf = G.normal_form(p)
    assert G.normal_form(nf) == nf
    assert G.contains(p - nf)


def test_deterministic_output():
    gens = list(jacobian_ideal(2, 3).generators)
    assert buchberger(gens).generators == buchberger(list(reversed(gens))).generators


def test_json_round_trip():
    G = buchberger(list(jacobian_ideal(2, 2).generators))
    H = GroebnerBasis.from_json(G.to_json())
    assert H.generators == G.generators and H.order == G.order


def test_limits():
    gens = list(jacobian_ideal(3, 3).generators)
    with pytest.raises(GroebnerTimeout):
        buchberger(gens, limits=Limits(max_seconds=0.0))
    with pytest.raises(GroebnerTimeout):
        buchberger(gens, limits=Limits(max_basis_size=5))


# --- membership -------------------------------------------------------------------

def test_membership_trivial():
    p = P("a[1,1]*a[2,2] - 7")
    assert ideal_membership(p, ideal("P", p)).is_member
    v = ideal_membership(R.one(), ideal("A", R.a(1, 1)))
    assert v.verdict == "non-member" and v.witness_terms == 1


def test_membership_scaling_invariance():
    J = jacobian_ideal(3, 2)
    z = z_fern(parse_fern_labeling("1;(2);(3);(1,1)", 3, 2))
    w = z_fern(parse_fern_labeling("1;(1);(2);(3,1)", 3, 2))
    for p in (z, w):
        verdicts = {ideal_membership(p * c, J).verdict for c in (1, -3, Fraction(2, 7))}
        assert len(verdicts) == 1


def test_exception_is_non_member():
    z = z_fern(parse_fern_labeling("1;(2);(3);(1,1)", 3, 2))
    v = ideal_membership(z, jacobian_ideal(3, 2), target="exception")
    assert v.verdict == "non-member" and v.witness_terms > 0 and v.target == "exception"


@pytest.mark.slow
@pytest.mark.parametrize("labeling,expected", [("1;(2);(3);(1,1)", "non-member"), ("1;(1);(1);(1,1)", "member"),
                                               ("2;(1);(3);(2,2)", "non-member")])
def test_membership_order_invariance(labeling, expected):
    z = z_fern(parse_fern_labeling(labeling, 3, 2))
    J = jacobian_ideal(3, 2)
    assert ideal_membership(z, J, LEX).verdict == expected
    assert ideal_membership(z, J, DEGREVLEX).verdict == expected


def test_timeout_verdict():
    J = jacobian_ideal(3, 3)
    v = ideal_membership(VarSpec(3).a(1, 1), J, limits=Limits(max_seconds=0.0), cache=BasisCache())
    assert v.verdict == "timeout" and not v.is_member


def test_radical_membership():
    a = R.a(1, 1)
    assert radical_membership(a, ideal("Q", a * a)).is_member
    assert radical_membership(R.one(), ideal("A", a)).verdict == "non-member"
    assert not ideal_membership(a, ideal("Q", a * a)).is_member
    z = z_fern(parse_fern_labeling("1;(2);(3);(1,1)", 3, 2))
    v = radical_membership(z, jacobian_ideal(3, 2))
    assert v.is_member and v.ideal == "sqrt(J(2,3))"


# --- cache ----------------------------------------------------------------------

def test_disk_cache(tmp_path):
    J = jacobian_ideal(2, 3)
    p = VarSpec(2).a(1, 1) ** 3
    first = ideal_membership(p, J, cache=BasisCache(tmp_path))
    files = list(tmp_path.glob("basis-*.json"))
    assert len(files) == 1
    second = ideal_membership(p, J, cache=BasisCache(tmp_path))
    assert first.verdict == second.verdict and first.witness == second.witness


def test_cache_keys_on_generators(tmp_path):
    cache = BasisCache(tmp_path)
    a = R.a(1, 1)
    assert ideal_membership(a, ideal("I", a), cache=cache).is_member
    # same name, different generators: must not reuse the stale basis
    assert not ideal_membership(a, ideal("I", R.a(2, 2)), cache=cache).is_member


def test_cache_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("FERNJAC_CACHE_DIR", str(tmp_path))
    assert BasisCache.from_env().directory == tmp_path
