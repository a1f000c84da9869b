import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import to_sympy
from fernjac.jacobian import build_B
from fernjac.polymatrix import (
    PolyMatrix, char_coeffs_reversed, char_poly, determinant, mat_mul, mat_pow, mat_powers,
    principal_minor,
)
from fernjac.polyring import VarSpec, parse_polynomial, poly_sum


def generic(n):
    return PolyMatrix.generic(VarSpec(n))


def P(s, n):
    return parse_polynomial(s, VarSpec(n))


def test_power_zero_is_identity():
    A = generic(3)
    assert mat_pow(A, 0) == PolyMatrix.identity(VarSpec(3), 3)


def test_square_entry():
    assert mat_pow(generic(2), 2)[0, 1] == P("a[1,1]*a[1,2] + a[1,2]*a[2,2]", 2)


def test_powers_list():
    A = generic(2)
    pw = mat_powers(A, 3)
    assert len(pw) == 4 and pw[3] == mat_mul(A, mat_mul(A, A))


def test_shape_mismatch():
    with pytest.raises(ValueError):
        mat_mul(generic(2), generic(2).change_spec(VarSpec(3)).__class__(
            [[VarSpec(3).one()] * 3] * 3))


def test_det_examples():
    assert determinant(generic(2)) == P("a[1,1]*a[2,2] - a[1,2]*a[2,1]", 2)
    assert determinant(PolyMatrix.identity(VarSpec(4), 4)) == 1
    M = PolyMatrix.from_numbers(VarSpec(1), [[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert determinant(M) == -3


def test_det_generic_matches_sympy():
    for n in (3, 4):
        A = generic(n)
        sym = sympy.Matrix(n, n, lambda i, j: to_sympy(A[i, j]))
        assert sympy.expand(to_sympy(determinant(A)) - sym.det(method="berkowitz")) == 0


small_int_matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=40)
@given(small_int_matrices)
def test_bareiss_and_laplace_agree_with_sympy(rows):
    spec = VarSpec(1)
    assert determinant(PolyMatrix.from_numbers(spec, rows)) == int(sympy.Matrix(rows).det())


@settings(max_examples=30)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    *[st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)] * 2)))
def test_det_multiplicative(pair):
    spec = VarSpec(1)
    M, N = (PolyMatrix.from_numbers(spec, r) for r in pair)
    assert determinant(M @ N) == determinant(M) * determinant(N)


def test_principal_minors():
    A = generic(3)
    assert principal_minor(A, (2,)) == VarSpec(3).a(2, 2)
    assert principal_minor(A, (1, 3)) == P("a[1,1]*a[3,3] - a[1,3]*a[3,1]", 3)
    assert principal_minor(A, (1, 2, 3)) == determinant(A)
    with pytest.raises(ValueError):
        principal_minor(A, (2, 1))


def test_char_poly_small():
    cp = char_poly(generic(1))
    assert cp.coefficients[0] == -VarSpec(1).a(1, 1) and cp.coefficients[1] == 1
    cp2 = char_poly(generic(2))
    assert cp2.coefficients[1] == P("-a[1,1] - a[2,2]", 2)
    assert cp2.coefficients[0] == P("a[1,1]*a[2,2] - a[1,2]*a[2,1]", 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_char_coefficients_are_signed_minor_sums(n):
    A = generic(n)
    cp = char_poly(A)
    for k in range(n):
        m = n - k
        minors = poly_sum((principal_minor(A, rows) for rows in itertools.combinations(range(1, n + 1), m)),
                          VarSpec(n))
        assert cp.coefficients[k] == (-1) ** m * minors


@pytest.mark.parametrize("n", [1, 2, 3])
def test_char_poly_at_zero(n):
    A = generic(n)
    assert char_poly(A).coefficients[0] == (-1) ** n * determinant(A)


def test_reversed_coefficients():
    n = 3
    A = generic(n)
    J = char_coeffs_reversed(A)
    c = char_poly(A).coefficients
    assert J[0] == 1
    assert J[1] == P("-a[1,1] - a[2,2] - a[3,3]", 3)
    assert all(J[i] == c[n - i] for i in range(n + 1))
    assert char_coeffs_reversed(generic(2))[2] == P("a[1,1]*a[2,2] - a[1,2]*a[2,1]", 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cayley_hamilton_generic(n):
    A = generic(n)
    assert char_poly(A).evaluate_at(A).is_zero()


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_cayley_hamilton_for_B(n, d):
    for l in range(1, n + 1):
        B = build_B(n, d, l)
        assert char_poly(B).evaluate_at(B).is_zero()


def test_json_round_trip():
    A = mat_pow(generic(2), 2).scale(parse_polynomial("1/2", VarSpec(2)))
    assert PolyMatrix.from_json(A.to_json(), VarSpec(2)) == A


def test_ragged_rows_rejected():
    spec = VarSpec(2)
    with pytest.raises(ValueError):
        PolyMatrix([[spec.one(), spec.one()], [spec.one()]])
