import random

import pytest
from hypothesis import given, settings, strategies as st

from atiyahkit.atiyah import (
    Connection,
    NotExtendingError,
    atiyah_cocycle,
    bianchi,
    build_split_atiyah,
    curvature,
    extend_connection,
    is_a_compatible,
    jacobi_bianchi_comparison,
    jacobiator_table,
    restricted_curvature,
    split_iso_check,
    universal_construction,
)
from atiyahkit.fixtures import (
    degenerate_full_triad,
    fixture_triads,
    random_connection,
    random_extending,
    random_matrix,
    sl2,
    sl2_borel_triad,
    sl2_standard,
    sl2_standard_connection,
    two_dim,
    two_dim_triad,
)
from atiyahkit.lie import LieAlgebra, direct_product
from atiyahkit.linalg import Matrix

seeds = st.integers(0, 10_000)


def test_curvature_spec_cases():
    assert curvature(sl2_standard_connection()).is_zero()
    ab = LieAlgebra.abelian(2)
    X, Y = Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])
    R = curvature(Connection(ab, 2, [X, Y]))
    assert R.table[0][1] == X.commutator(Y)
    R = curvature(Connection(two_dim(), 1, [Matrix([[0]]), Matrix([[1]])]))
    assert R.table[0][1] == Matrix([[-1]])


def test_extend_connection_spec_cases():
    triad = sl2_borel_triad()
    zero = extend_connection(triad, [Matrix.zeros(2, 2)])
    assert zero.at(triad.pair.i_B.col(0)).is_zero()
    full = extend_connection(triad, [sl2_standard()[2]])
    assert full == sl2_standard_connection()
    deg = degenerate_full_triad()
    assert extend_connection(deg, []).assignment == tuple(deg.E_rep.action)


def test_atiyah_cocycle_spec_cases():
    triad = sl2_borel_triad()
    assert atiyah_cocycle(triad, sl2_standard_connection()).is_zero()
    for lam in (-2, 1, 3):
        t = two_dim_triad(lam)
        for mu in (0, 5):
            conn = extend_connection(t, [Matrix([[mu]])])
            assert atiyah_cocycle(t, conn).table[0][0] == Matrix([[lam]])
    bad = Connection(sl2(), 2, [Matrix.zeros(2, 2)] * 3)
    with pytest.raises(NotExtendingError):
        atiyah_cocycle(triad, bad)


def test_is_a_compatible_spec_cases():
    assert is_a_compatible(sl2_borel_triad(), sl2_standard_connection())
    t = two_dim_triad(1)
    assert not is_a_compatible(t, extend_connection(t, [Matrix([[0]])]))
    deg = degenerate_full_triad()
    assert is_a_compatible(deg, extend_connection(deg, []))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cocycle_independent_of_splitting(seed):
    rng = random.Random(seed)
    triad = sl2_borel_triad("adjoint")
    conn = random_extending(triad, rng)
    I = random_matrix(rng, 2, 1)
    other = triad.with_splitting(triad.pair.i_B + triad.pair.i_A @ I)
    assert atiyah_cocycle(triad, conn) == atiyah_cocycle(other, conn)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_compatible_iff_A_L_curvature_vanishes(seed):
    rng = random.Random(seed)
    for triad in fixture_triads().values():
        conn = random_extending(triad, rng)
        assert is_a_compatible(triad, conn) == restricted_curvature(triad, conn, "A", "L").is_zero()


def test_build_split_atiyah_spec_cases():
    ab = LieAlgebra.abelian(2)
    zero = Connection(ab, 2, [Matrix.zeros(2, 2)] * 2)
    assert build_split_atiyah(zero).algebra == direct_product(LieAlgebra.gl(2), ab)
    flat = build_split_atiyah(sl2_standard_connection()).algebra
    assert flat.is_valid()
    # semidirect: brackets of L-basis vectors have no End component
    for i in range(4, 7):
        for j in range(4, 7):
            assert not any(flat.consts[i][j][:4])


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_jacobi_and_bianchi_vanish_for_random_connections(seed):
    conn = random_connection(sl2(), 2, random.Random(seed))
    alg = build_split_atiyah(conn).algebra
    assert alg.is_valid()
    assert not jacobiator_table(alg)
    assert all(m.is_zero() for m in bianchi(conn).values())
    assert jacobi_bianchi_comparison(conn).ok


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_generic_two_form_jacobiator_is_minus_derivative(seed):
    rng = random.Random(seed)
    conn = random_connection(sl2(), 2, rng)
    table = {(i, j): random_matrix(rng, 2, 2) for i in range(3) for j in range(i + 1, 3)}

    def omega(x, y):
        out = Matrix.zeros(2, 2)
        for (i, j), m in table.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                out = out + m.scale(c)
        return out

    rep = jacobi_bianchi_comparison(conn, omega)
    assert rep.payload["componentwise_agree"]


def test_bianchi_small_dim_is_empty():
    conn = Connection(two_dim(), 2, [Matrix([[1, 2], [0, 1]]), Matrix([[0, 1], [1, 0]])])
    assert all(m.is_zero() for m in bianchi(conn).values())


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_split_iso_and_universal_construction(seed):
    conn = random_connection(sl2(), 2, random.Random(seed))
    assert split_iso_check(conn).ok
    assert universal_construction(conn).report.ok


def test_split_iso_trivial_cases():
    assert split_iso_check(Connection(LieAlgebra.abelian(2), 2, [Matrix.zeros(2, 2)] * 2)).ok
    assert split_iso_check(Connection(LieAlgebra.abelian(1), 1, [Matrix([[3]])])).ok
