import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from invjac.polyring import Poly, monomial_basis, parse_poly
from invjac.qlinalg import (
    AmbientMismatchError,
    QMatrix,
    Subspace,
    contains,
    equal,
    intersect,
    kernel,
    rank,
    rref,
    solve_linear,
    span,
)


def M(rows):
    return QMatrix.from_rows(rows)


def random_matrix(rng, rows, cols, density=0.6):
    return M([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < density else 0
               for _ in range(cols)] for _ in range(rows)])


def sympy_rref(A: QMatrix):
    S = sympy.Matrix(A.rows, A.cols, lambda i, j: sympy.Rational(A[i, j].numerator, A[i, j].denominator))
    R, pivots = S.rref()
    return [[Fraction(int(x.p), int(x.q)) for x in R.row(i)] for i in range(R.rows)], len(pivots)


class TestRref:
    def test_identity(self):
        I = QMatrix.identity(3)
        assert rref(I) == (I, 3)

    def test_rank_one(self):
        R, r = rref(M([[1, 2], [2, 4]]))
        assert R == M([[1, 2], [0, 0]]) and r == 1

    def test_zero(self):
        Z = QMatrix.zeros(2, 3)
        assert rref(Z) == (Z, 0)

    def test_against_sympy(self):
        rng = random.Random(3)
        for _ in range(200):
            A = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
            R, r = rref(A)
            expected, er = sympy_rref(A)
            assert [list(row) for row in R.entries] == expected
            assert r == er

    def test_idempotent(self):
        rng = random.Random(4)
        for _ in range(100):
            A = random_matrix(rng, 4, 5)
            R, r = rref(A)
            assert rref(R) == (R, r)


class TestKernel:
    def test_identity(self):
        assert kernel(QMatrix.identity(3)).dim == 0

    def test_zero_matrix(self):
        assert kernel(QMatrix.zeros(2, 3)).dim == 3

    def test_single_row(self):
        K = kernel(M([[1, 1]]))
        assert K.basis == ((1, -1),)

    def test_rank_nullity_random(self):
        rng = random.Random(5)
        for _ in range(200):
            A = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 7), density=0.4)
            K = kernel(A)
            assert rank(A) + K.dim == A.cols
            for v in K.basis:
                assert all(x == 0 for x in A.apply(v))


class TestSpan:
    A1 = monomial_basis(2, 1)

    def test_parallel_polys(self):
        assert span([parse_poly("x1", 2), parse_poly("2*x1", 2)]).dim == 1

    def test_empty(self):
        assert span([], self.A1).dim == 0

    def test_partials_of_determinant(self):
        items = [parse_poly(t, 4) for t in ("x4", "-x3", "-x2", "x1")]
        S = span(items)
        assert S.dim == 4 and equal(S, Subspace.full(monomial_basis(4, 1)))

    def test_mixed_ambient(self):
        with pytest.raises(AmbientMismatchError):
            span([parse_poly("x1", 2), parse_poly("x1^2", 2)])

    def test_canonical_under_shuffle_and_rescale(self):
        rng = random.Random(6)
        for _ in range(200):
            vecs = [[Fraction(rng.randint(-3, 3)) for _ in range(5)] for _ in range(rng.randint(0, 5))]
            S = span(vecs, 5)
            mixed = []
            for v in vecs:
                c = Fraction(rng.choice([-3, -1, 2, 5]), rng.randint(1, 4))
                mixed.append([c * x for x in v])
            rng.shuffle(mixed)
            assert span(mixed, 5).basis == S.basis


class TestSubspaceRelations:
    A1 = monomial_basis(2, 1)

    def test_contains(self):
        assert contains(Subspace.full(self.A1), span([parse_poly("x1", 2)]))

    def test_intersect_trivial(self):
        assert intersect(span([parse_poly("x1", 2)]), span([parse_poly("x2", 2)])).dim == 0

    def test_intersect_lines_in_plane(self):
        S = span([(1, 0, 0), (0, 1, 0)], 3)
        T = span([(1, 1, 1), (0, 0, 1)], 3)
        assert intersect(S, T).basis == ((1, 1, 0),)

    def test_solve_identity(self):
        sol = solve_linear(QMatrix.identity(3), [1, 2, 3])
        assert sol.particular == (1, 2, 3) and sol.homogeneous.dim == 0

    def test_solve_inconsistent(self):
        assert solve_linear(M([[1, 1], [2, 2]]), [1, 3]) is None

    def test_solve_underdetermined(self):
        sol = solve_linear(M([[1, 1]]), [2])
        assert (Fraction(3), Fraction(-1)) in sol
        assert sol.homogeneous.dim == 1

    def test_ambient_mismatch(self):
        with pytest.raises(AmbientMismatchError):
            contains(Subspace.full(self.A1), Subspace.full(monomial_basis(2, 2)))


vec_sets = st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), max_size=4)


@settings(max_examples=200, deadline=None)
@given(vec_sets, vec_sets)
def test_mutual_containment_iff_equal(a, b):
    S, T = span(a, 4), span(b, 4)
    assert (contains(S, T) and contains(T, S)) == equal(S, T)
    inter = intersect(S, T)
    assert contains(S, inter) and contains(T, inter)
    # dim(S + T) + dim(S ∩ T) = dim S + dim T
    assert span(list(S.basis) + list(T.basis), 4).dim + inter.dim == S.dim + T.dim
