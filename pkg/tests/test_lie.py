import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from atiyahkit.fixtures import borel_inclusion, heisenberg, random_matrix, sl2, sl2_standard, so3, two_dim
from atiyahkit.lie import (
    LieAlgebra,
    PairError,
    Representation,
    bott_connection,
    bracket_decomposition_check,
    eth,
    make_lie_pair,
    splitting_difference,
)
from atiyahkit.linalg import DimensionError, Matrix


def borel_pair():
    return make_lie_pair(sl2(), borel_inclusion())


def test_validate_spec_cases():
    assert LieAlgebra.abelian(3).validate().ok
    assert sl2().validate().ok
    bad = LieAlgebra([[[0, 0], [1, 0]], [[1, 0], [0, 0]]])
    rep = bad.validate()
    assert rep.status == "fail"
    assert {"kind": "antisymmetry", "pair": [0, 1]} in rep.witnesses


def test_validate_reports_jacobi_triple():
    # [x,y]=y, [x,z]=z, [y,z]=x has Jacobiator 2x on (x,y,z)
    L = LieAlgebra.from_brackets(3, {(0, 1): (0, 1, 0), (0, 2): (0, 0, 1), (1, 2): (1, 0, 0)})
    rep = L.validate()
    assert rep.witnesses == [{"kind": "jacobi", "triple": [0, 1, 2]}]


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        LieAlgebra([[[0, 0]], [[0, 0]]])


@pytest.mark.parametrize("L", [sl2(), so3(), heisenberg(), two_dim(), LieAlgebra.gl(2)])
def test_fixture_algebras_are_valid(L):
    assert L.is_valid()


def test_make_lie_pair_spec_cases():
    pair = borel_pair()
    assert pair.dim_B == 1 and pair.splitting_identity_holds()
    with pytest.raises(PairError) as err:
        make_lie_pair(sl2(), Matrix([[0, 0], [1, 0], [0, 1]]))
    assert err.value.witness is not None
    full = make_lie_pair(sl2(), Matrix.identity(3))
    assert full.dim_B == 0
    with pytest.raises(ValueError):
        make_lie_pair(sl2(), Matrix([[1, 1], [0, 0], [0, 0]]))


def test_bott_connection_spec_cases():
    D = bott_connection(borel_pair())
    assert D.action[0] == Matrix([[-2]])
    assert D.action[1] == Matrix([[0]])
    assert D.is_flat()
    full = bott_connection(make_lie_pair(sl2(), Matrix.identity(3)))
    assert full.module_dim == 0
    ab = make_lie_pair(LieAlgebra.abelian(3), Matrix([[1], [0], [0]]))
    assert all(m.is_zero() for m in bott_connection(ab).action)


def test_eth_spec_cases():
    pair = borel_pair()
    assert pair.i_B == Matrix([[0], [0], [1]])
    assert eth(pair, (1,), (1, 0)) == (0, 0)
    assert eth(pair, (1,), (0, 1)) == (-1, 0)
    ab = make_lie_pair(LieAlgebra.abelian(2), Matrix([[1], [0]]))
    assert eth(ab, (1,), (1,)) == (0,)


def test_bracket_decomposition():
    assert bracket_decomposition_check(borel_pair()).ok
    assert bracket_decomposition_check(make_lie_pair(heisenberg(), Matrix([[0], [1], [0]]))).ok


def test_splitting_difference_spec_cases():
    pair = borel_pair()
    assert splitting_difference(pair, pair.i_B).is_zero()
    assert splitting_difference(pair, Matrix([[1], [0], [1]])) == Matrix([[1], [0]])
    with pytest.raises(ValueError):
        splitting_difference(pair, Matrix([[1], [0], [0]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_splitting_difference_returns_given_map(seed):
    rng = random.Random(seed)
    pair = borel_pair()
    J = random_matrix(rng, 2, 1)
    assert splitting_difference(pair, pair.i_B + pair.i_A @ J) == J
    other = pair.with_splitting(pair.i_B + pair.i_A @ J)
    assert other.splitting_identity_holds()
    assert bracket_decomposition_check(other).ok
    assert bott_connection(other).action == bott_connection(pair).action


def test_representation_flatness_and_constructions():
    L = sl2()
    std = Representation(L, 2, sl2_standard())
    assert std.is_flat()
    assert Representation.adjoint(L).is_flat()
    assert std.dual().is_flat()
    assert std.tensor(std.dual()).is_flat()
    assert std.end_commutator().is_flat()
    bad = Representation(L, 2, [sl2_standard()[0], sl2_standard()[1], Matrix.zeros(2, 2)])
    assert not bad.is_flat()


def test_sl2_structure_constants():
    L = sl2()
    h, e, f = (L.basis(i) for i in range(3))
    assert L.bracket(h, e) == (0, 2, 0)
    assert L.bracket(h, f) == (0, 0, -2)
    assert L.bracket(e, f) == (1, 0, 0)
    assert L.jacobiator(h, e, f) == (0, 0, 0)
    assert L.bracket(f, e) == (Fraction(-1), 0, 0)
