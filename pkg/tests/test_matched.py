import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from atiyahkit.atiyah import Connection, extend_connection
from atiyahkit.fixtures import (
    borel_inclusion,
    heisenberg,
    random_extending,
    sl2,
    sl2_borel_triad,
    sl2_standard,
    sl2_standard_connection,
    so3,
    two_dim,
    two_dim_triad,
)
from atiyahkit.lie import LieAlgebra, Representation, direct_product, pullback_algebra
from atiyahkit.linalg import Matrix
from atiyahkit.matched import (
    MatchedError,
    MatchedPair,
    build_matched_sum,
    check_matched,
    derivation_algebra,
    equivariant_structure,
    is_derivation,
    is_g_invariant,
    matched_atiyah_decomposition,
    matched_curvature_split,
    matched_sum_reproduces,
    recognize_matched,
)
from atiyahkit.selftest import fiber_curved_triad, perturbed

seeds = st.integers(0, 10_000)
F_LINE = Matrix([[0], [0], [1]])


def brute_force_der_dim(L: LieAlgebra) -> int:
    """Solve the derivation equations symbolically, independently of the library."""
    m = L.dim
    d = sympy.Matrix(m, m, sympy.symbols(f"d0:{m * m}"))
    C = [[sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in L.consts[i][j]])
          for j in range(m)] for i in range(m)]

    def br(x, y):
        out = sympy.zeros(m, 1)
        for i in range(m):
            for j in range(m):
                out += x[i] * y[j] * C[i][j]
        return out

    eqs = []
    for i in range(m):
        for j in range(m):
            ei, ej = sympy.eye(m)[:, i], sympy.eye(m)[:, j]
            eqs.extend(d * C[i][j] - br(d * ei, ej) - br(ei, d * ej))
    A, _ = sympy.linear_eq_to_matrix(eqs, list(d))
    return m * m - A.rank()


def test_zero_actions_give_direct_product():
    A, B = two_dim(), LieAlgebra.abelian(1)
    mp = MatchedPair(A, B, Representation.trivial(A, 1), Representation.trivial(B, 2))
    assert check_matched(mp).ok
    assert build_matched_sum(mp) == direct_product(A, B)
    assert "vacuous" in check_matched(mp).payload["condition_iii"]


def test_semidirect_by_derivation():
    g = LieAlgebra.abelian(1)
    V = LieAlgebra.abelian(2)
    mp = MatchedPair(g, V, Representation(g, 2, [Matrix([[1, 2], [0, 3]])]), Representation.trivial(V, 1))
    total = build_matched_sum(mp)
    assert total.is_valid()
    assert total.bracket((1, 0, 0), (0, 1, 0)) == (0, 1, 0)


def test_sl2_roundtrip_and_perturbation():
    L = sl2()
    rec = recognize_matched(L, borel_inclusion(), F_LINE)
    assert check_matched(rec.matched).ok
    assert rec.roundtrip_ok and matched_sum_reproduces(L, rec)
    assert build_matched_sum(rec.matched) == L
    rep = check_matched(perturbed(rec.matched))
    assert rep.status == "fail" and rep.witnesses
    with pytest.raises(MatchedError):
        build_matched_sum(perturbed(rec.matched))


def test_recognize_other_complement():
    L = sl2()
    inc_B = Matrix([[1], [0], [1]])
    rec = recognize_matched(L, borel_inclusion(), inc_B)
    assert check_matched(rec.matched).ok and rec.roundtrip_ok
    std = recognize_matched(L, borel_inclusion(), F_LINE)
    assert rec.matched.D_B_on_A.action != std.matched.D_B_on_A.action
    M = Matrix.hstack(borel_inclusion(), inc_B)
    assert build_matched_sum(rec.matched) == pullback_algebra(L, M, M.inverse())


def test_recognize_direct_product():
    L = direct_product(two_dim(), so3())
    inc_A = Matrix.vstack(Matrix.identity(2), Matrix.zeros(3, 2))
    inc_B = Matrix.vstack(Matrix.zeros(2, 3), Matrix.identity(3))
    rec = recognize_matched(L, inc_A, inc_B)
    assert all(m.is_zero() for m in rec.matched.D_A_on_B.action)
    assert all(m.is_zero() for m in rec.matched.D_B_on_A.action)


def test_recognize_rejects_bad_input():
    with pytest.raises(ValueError):
        recognize_matched(sl2(), borel_inclusion(), Matrix([[1], [0], [0]]))
    with pytest.raises(MatchedError):
        recognize_matched(sl2(), Matrix([[1], [0], [0]]), Matrix([[0, 0], [1, 0], [0, 1]]))


def test_matched_atiyah_spec_cases():
    triad = sl2_borel_triad()
    assert matched_atiyah_decomposition(triad, sl2_standard_connection()).ok


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_matched_atiyah_random(seed):
    triad = sl2_borel_triad()
    assert matched_atiyah_decomposition(triad, random_extending(triad, random.Random(seed))).ok


def test_curvature_split_spec_cases():
    rep = matched_curvature_split(sl2_borel_triad(), sl2_standard_connection())
    assert rep.ok and rep.payload["flat"]
    assert all(rep.payload["zero_blocks"].values())
    t = two_dim_triad(1)
    rep = matched_curvature_split(t, extend_connection(t, [Matrix([[4]])]))
    assert rep.ok and not rep.payload["flat"] and not rep.payload["zero_blocks"]["A_B"]
    t, c = fiber_curved_triad()
    rep = matched_curvature_split(t, c)
    assert rep.ok and not rep.payload["flat"]
    assert rep.payload["zero_blocks"] == {"A_A": True, "A_B": True, "B_B": False}


@pytest.mark.parametrize("L,expected", [
    (LieAlgebra.abelian(2), 4), (sl2(), 3), (two_dim(), 2), (heisenberg(), 6), (so3(), 3),
])
def test_derivation_dims(L, expected):
    der = derivation_algebra(L)
    assert der.dim == expected == brute_force_der_dim(L)
    assert der.algebra.is_valid()
    for d in der.matrices():
        assert is_derivation(L, d)


def test_inner_derivations_of_sl2():
    L = sl2()
    for i in range(3):
        assert is_derivation(L, L.ad_basis(i))


def test_equivariant_structure_spec_cases():
    L = two_dim()
    g = LieAlgebra.abelian(1)
    mp = equivariant_structure(g, L, [Matrix.zeros(2, 2)])
    assert build_matched_sum(mp) == direct_product(g, L)
    mp = equivariant_structure(sl2(), LieAlgebra.abelian(2), sl2_standard())
    assert build_matched_sum(mp).is_valid()
    der = derivation_algebra(L).matrices()[0]
    assert check_matched(equivariant_structure(g, L, [der])).ok
    with pytest.raises(MatchedError):
        equivariant_structure(g, L, [Matrix([[1, 0], [0, 0]])])
    with pytest.raises(MatchedError):
        equivariant_structure(sl2(), LieAlgebra.abelian(2), [sl2_standard()[0], sl2_standard()[1],
                                                            Matrix.zeros(2, 2)])


def test_g_invariance_spec_cases():
    g, L = sl2(), LieAlgebra.abelian(2)
    mp = equivariant_structure(g, L, [Matrix.zeros(2, 2)] * 3)
    ok, wit = is_g_invariant(mp, [Matrix.zeros(2, 2)] * 3, Connection(L, 2, [Matrix.zeros(2, 2)] * 2))
    assert ok and wit == []
    # restriction of a representation of sl2 |x R^2 on E = Q^2 with R^2 acting by zero
    mp = equivariant_structure(g, L, sl2_standard())
    ok, _ = is_g_invariant(mp, sl2_standard(), Connection(L, 2, [Matrix.zeros(2, 2)] * 2))
    assert ok
    ok, wit = is_g_invariant(mp, sl2_standard(), Connection(L, 2, [Matrix([[1, 0], [0, 0]]), Matrix.zeros(2, 2)]))
    assert not ok and wit
