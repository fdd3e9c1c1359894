import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from trackgamma import intlinalg as il
from trackgamma.abelian import AbGroup, GroupError, MMatrix, subquotient


def matrices(max_rows=4, max_cols=4, bound=6):
    return st.integers(1, max_rows).flatmap(lambda m: st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


@given(matrices())
def test_smith_form_is_a_unimodular_factorization(a):
    s, u, v = il.smith_normal_form(a)
    assert il.matmul(il.matmul(u, a), v) == s
    assert abs(Matrix(u).det()) == 1 and abs(Matrix(v).det()) == 1
    d = il.diagonal(s)
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(s[i][j] == 0 for i in range(len(s)) for j in range(len(s[0])) if i != j)


@given(matrices())
def test_invariant_factors_match_sympy(a):
    ref = sympy_snf(Matrix(a), domain=ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i])
    assert sorted(il.invariant_factors(a)) == ref_diag


@given(matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_integer_solutions(a, x):
    m, n = len(a), len(a[0])
    b = il.matvec(a, x[:n])
    sol = il.solve_integer(a, b, m, n)
    assert sol is not None and il.matvec(a, sol) == b
    for col in zip(*il.kernel_basis(a, m, n)) if il.kernel_basis(a, m, n) and il.kernel_basis(a, m, n)[0] else []:
        assert not any(il.matvec(a, list(col)))


def test_unsolvable_system():
    assert il.solve_integer([[2, 4]], [3], 1, 2) is None
    assert il.solve_modular([[2]], [1], [4], [4]) is None
    assert il.solve_modular([[2]], [2], [4], [4]) in ([1], [3])


def test_modular_solutions_by_enumeration():
    # the second column has order 2, so the map is defined on Z/4 + Z/2
    a = [[1, 2], [3, 2]]
    src, dst = [4, 2], [4, 4]
    for b in itertools.product(range(4), range(4)):
        sol = il.solve_modular(a, list(b), src, dst)
        brute = [x for x in itertools.product(range(4), range(2))
                 if il.reduce_vec(il.matvec(a, list(x)), dst) == b]
        assert (sol is None) == (not brute)
        if sol is not None:
            assert il.reduce_vec(il.matvec(a, sol), dst) == b


def test_subquotient_of_a_cyclic_complex():
    # Z/2 -0-> Z/2 -0-> Z/2: homology Z/2
    sq = subquotient([[0]], [[0]], [2], [2], [2])
    assert sq.group == AbGroup.cyclic(2)
    # Z -2-> Z -0-> Z: homology Z/2
    sq = subquotient([[2]], [[0]], [0], [0], [0])
    assert sq.group == AbGroup.cyclic(2)
    assert sq.coords([1]) == (1,) and sq.coords([4]) == (0,)


def test_group_normal_form():
    g = AbGroup.from_moduli([6, 0, 4])
    assert g.is_finite is False
    assert AbGroup.from_moduli([6, 4]).order() == 24
    assert sorted(AbGroup.from_moduli([6, 4]).torsion) == [2, 12]


def test_matrix_coefficients():
    # coordinates list the torsion summands first, then the free ones
    M = AbGroup(1, (2,))
    x = MMatrix.from_entries(M, [[(1, 1), (0, 2)]])
    assert (x + x).entry(0, 0) == (0, 2)
    assert x.lmul([[3]]).entry(0, 1) == (0, 6)
    assert MMatrix.from_flat(M, x.flat(), 1, 2) == x
    with pytest.raises(GroupError):
        x.rmul([[1, 2]])
