import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from atiyahkit.atiyah import atiyah_cocycle, extend_connection, is_a_compatible
from atiyahkit.cohomology import (
    atiyah_class,
    b_assignment_from_vector,
    b_assignment_vector,
    ce_complex,
    coboundary_witness,
    coefficient_module,
    cohomology_dim,
    compatible_connection_solve,
    connection_shift_check,
    d_squared_violations,
    is_cocycle,
)
from atiyahkit.fixtures import (
    degenerate_full_triad,
    fixture_triads,
    random_extending,
    sl2_borel_triad,
    sl2_standard,
    two_dim_triad,
)
from atiyahkit.lie import LieAlgebra, NotFlatError, Representation
from atiyahkit.linalg import Matrix

seeds = st.integers(0, 10_000)


def sympy_rank(m: Matrix) -> int:
    if not m.nrows or not m.ncols:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.rows]).rank()


def oracle_dim(cx, k):
    before = sympy_rank(cx.d(k - 1)) if k else 0
    return cx.cochain_dims[k] - sympy_rank(cx.d(k)) - before


def test_abelian_trivial_complex_is_zero():
    rep = Representation.trivial(LieAlgebra.abelian(2), 3)
    cx = ce_complex(rep)
    assert all(d.is_zero() for d in cx.differentials)
    assert [cohomology_dim(cx, k) for k in range(3)] == [3, 6, 3]


@pytest.mark.parametrize("lam", [-2, 0, 1])
def test_one_dim_complex(lam):
    rep = Representation(LieAlgebra.abelian(1), 1, [Matrix([[lam]])])
    cx = ce_complex(rep)
    assert cx.d(0) == Matrix([[lam]])
    expected = 1 if lam == 0 else 0
    assert cohomology_dim(cx, 0) == expected
    assert cohomology_dim(cx, 1) == expected


def test_borel_coefficient_module():
    cx = ce_complex(coefficient_module(sl2_borel_triad()))
    assert d_squared_violations(cx) == []
    for k in range(3):
        assert cohomology_dim(cx, k) == oracle_dim(cx, k)


def test_refuses_non_flat():
    L = LieAlgebra.from_brackets(2, {(0, 1): (0, 1)})
    with pytest.raises(NotFlatError):
        ce_complex(Representation(L, 1, [Matrix([[0]]), Matrix([[1]])]))


def test_degree_out_of_range():
    cx = ce_complex(Representation.trivial(LieAlgebra.abelian(1), 1))
    with pytest.raises(ValueError):
        cohomology_dim(cx, 3)


def test_witness_requires_cocycle():
    L = LieAlgebra.abelian(2)
    rep = Representation(L, 1, [Matrix([[1]]), Matrix([[0]])])
    cx = ce_complex(rep)
    omega = (0, 1)
    assert not is_cocycle(cx, 1, omega)
    with pytest.raises(ValueError):
        coboundary_witness(cx, 1, omega)
    s = coboundary_witness(cx, 1, (1, 0))
    assert cx.d(0).apply(s.particular) == (1, 0)


@pytest.mark.parametrize("name", list(fixture_triads()))
def test_coefficient_module_flat_and_dims(name):
    triad = fixture_triads()[name]
    cx = ce_complex(coefficient_module(triad))
    assert d_squared_violations(cx) == []
    for k in range(3):
        assert cohomology_dim(cx, k) == oracle_dim(cx, k)


def test_atiyah_class_spec_cases():
    res = atiyah_class(sl2_borel_triad())
    assert res.vanishes
    triad = sl2_borel_triad()
    conn = extend_connection(triad, res.compatible_b_assignment(1, 2))
    assert is_a_compatible(triad, conn)
    res = atiyah_class(two_dim_triad(1))
    assert res.is_cocycle and not res.vanishes and res.h1_dim == 1
    res = atiyah_class(two_dim_triad(0))
    assert res.vanishes and not any(res.witness.particular)


def test_solver_spec_cases():
    sol = compatible_connection_solve(degenerate_full_triad())
    assert not sol.empty and sol.dim == 0
    assert compatible_connection_solve(two_dim_triad(1)).empty
    triad = sl2_borel_triad()
    sol = compatible_connection_solve(triad)
    assert sol.contains(b_assignment_vector([sl2_standard()[2]]))


@pytest.mark.parametrize("lam", range(-2, 3))
def test_solver_matches_class(lam):
    triad = two_dim_triad(lam)
    sol = compatible_connection_solve(triad)
    res = atiyah_class(triad)
    assert sol.empty == (lam != 0) == (not res.vanishes)
    if lam:
        assert res.h1_dim == 1
    else:
        assert sol.dim == res.h0_dim


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cocycle_closed_and_shift(seed):
    rng = random.Random(seed)
    for triad in fixture_triads().values():
        c1, c2 = random_extending(triad, rng), random_extending(triad, rng)
        cx = ce_complex(coefficient_module(triad))
        assert is_cocycle(cx, 1, atiyah_cocycle(triad, c1).as_cochain())
        assert connection_shift_check(triad, c1, c2).ok


def test_shift_scalar_example_is_zero():
    triad = two_dim_triad(2)
    c1 = extend_connection(triad, [Matrix([[1]])])
    c2 = extend_connection(triad, [Matrix([[-3]])])
    assert connection_shift_check(triad, c1, c2).ok
    assert atiyah_cocycle(triad, c1) == atiyah_cocycle(triad, c2)


def test_b_assignment_vector_roundtrip():
    mats = [Matrix([[1, 2], [3, 4]]), Matrix([[0, "1/2"], [0, 0]])]
    assert b_assignment_from_vector(b_assignment_vector(mats), 2, 2) == mats
