import pytest
from hypothesis import given, settings, strategies as st

from morseforest.complex import builtin, from_maximal_faces
from morseforest.linalg import (IntegerMatrix, IntegerPolynomial, adjacency_matrix,
                                bareiss_determinant, betti_numbers, boundary_matrix,
                                char_poly_shifted, determinant, homology, interpolate, laplacian,
                                laplacian_by_cases, prime_power_parts, rank, smith_normal_form)

from oracles import (boundary_rows, cofactor_det, laplacian_rows, shifted_charpoly, snf_diagonal,
                     sympy_det, sympy_rank)

SMALL = [("cycle", 4), ("star", 3), ("complete", 4), ("wheel", 5), ("simplex", 2),
         ("simplex_boundary", 3), ("simplex_boundary", 4), ("moebius", None),
         ("bipyramid", None), ("projective_plane", None)]

matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))
rect = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda s: st.lists(st.lists(st.integers(-5, 5), min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0]))


def test_boundary_of_triangle():
    B = boundary_matrix(builtin("simplex", 2), 2)
    # rows (0,1), (0,2), (1,2); dropping vertex j gives sign (-1)^j
    assert B.tolist() == [[1], [-1], [1]]


@pytest.mark.parametrize("name,n", SMALL)
def test_boundary_and_laplacian_match_oracle(name, n):
    K = builtin(name, n)
    for d in range(1, K.dim + 1):
        assert boundary_matrix(K, d).tolist() == boundary_rows(K, d)
        L = laplacian(K, d)
        assert L.tolist() == laplacian_rows(K, d)
        assert L.is_symmetric()
        assert L == laplacian_by_cases(K, d)


@pytest.mark.parametrize("name,n", SMALL)
def test_boundary_squares_to_zero(name, n):
    K = builtin(name, n)
    for d in range(2, K.dim + 1):
        P = boundary_matrix(K, d - 1) @ boundary_matrix(K, d)
        assert all(x == 0 for row in P.tolist() for x in row)


def test_c4_laplacian_entries():
    L = laplacian(builtin("cycle", 4), 1)
    assert L.tolist() == [[2, -1, 0, -1], [-1, 2, -1, 0], [0, -1, 2, -1], [-1, 0, -1, 2]]


@pytest.mark.parametrize("name,n,expected", [
    ("cycle", 4, [0, 16, 20, 8, 1]),
    ("moebius", None, [0, 0, 0, 0, 0, 125, 275, 225, 85, 15, 1]),
    ("bipyramid", None, [0, 0, 0, 0, 1125, 1425, 710, 174, 21, 1]),
])
def test_char_poly_known_values(name, n, expected):
    K = builtin(name, n)
    assert list(char_poly_shifted(laplacian(K, K.dim)).coeffs) == expected


@pytest.mark.parametrize("name,n", SMALL)
def test_char_poly_matches_sympy(name, n):
    K = builtin(name, n)
    L = laplacian(K, K.dim)
    assert list(char_poly_shifted(L).coeffs) == shifted_charpoly(L.tolist())


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_determinant_matches_cofactor_expansion(rows):
    expected = cofactor_det(rows)
    assert bareiss_determinant(rows) == expected
    assert determinant(rows) == expected
    assert determinant(rows) == sympy_det(rows)


def test_determinant_large_entries_fall_back_exactly():
    rows = [[10**30, 1], [3, 10**25]]
    assert determinant(rows) == 10**55 - 3


def test_determinant_edge_cases():
    assert determinant([]) == 1
    with pytest.raises(ValueError):
        determinant([[1, 2]])


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_char_poly_property(rows):
    M = IntegerMatrix.from_rows(rows)
    assert list(char_poly_shifted(M).padded(len(rows) + 1)) == shifted_charpoly(rows)


@settings(max_examples=150, deadline=None)
@given(rect)
def test_smith_form_matches_sympy(rows):
    snf = smith_normal_form(rows)
    assert list(snf.factors) == snf_diagonal(rows)
    assert snf.rank == sympy_rank(rows)
    for a, b in zip(snf.factors, snf.factors[1:]):
        assert b % a == 0


@settings(max_examples=150, deadline=None)
@given(rect)
def test_rank_matches_sympy(rows):
    assert rank(rows) == sympy_rank(rows)


def test_interpolate_rejects_non_integer():
    # these are the values of x(x-1)/2
    with pytest.raises(ArithmeticError):
        interpolate([0, 0, 1])


def test_polynomial_basics():
    p = IntegerPolynomial((0, 16, 20, 8, 1, 0, 0))
    assert p.coeffs == (0, 16, 20, 8, 1)
    assert p.degree == 4
    assert p(1) == 45
    assert str(p) == "λ^4 + 8λ^3 + 20λ^2 + 16λ"
    assert str(IntegerPolynomial((0, -2, 0, 1))) == "λ^3 - 2λ"
    assert str(IntegerPolynomial(())) == "0"
    assert (p - p).coeffs == ()


def test_adjacency_of_path():
    A = adjacency_matrix(builtin("path", 3))
    assert A.tolist() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]


@pytest.mark.parametrize("name,n,betti,torsion", [
    ("simplex_boundary", 3, [1, 0, 1], {}),
    ("moebius", None, [1, 1, 0], {}),
    ("projective_plane", None, [1, 0, 0], {1: (2,)}),
    ("cycle", 5, [1, 1], {}),
    ("complete", 4, [1, 3], {}),
    ("bipyramid", None, [1, 0, 2], {}),
])
def test_homology(name, n, betti, torsion):
    K = builtin(name, n)
    assert betti_numbers(K) == betti
    for d in range(K.dim + 1):
        assert homology(K, d).torsion == torsion.get(d, ())


def test_prime_power_parts():
    assert prime_power_parts(12) == [4, 3]
    assert prime_power_parts(1) == []
    assert prime_power_parts(49) == [49]


def test_homology_order():
    K = builtin("projective_plane")
    assert homology(K, 1).order == 2
    assert homology(K, 0).order is None


def test_matrix_json_uses_strings():
    M = IntegerMatrix.from_rows([[1, -2]])
    assert M.to_json() == [["1", "-2"]]


def test_laplacian_dimension_errors():
    with pytest.raises(ValueError):
        laplacian(from_maximal_faces([[0, 1]]), 2)
