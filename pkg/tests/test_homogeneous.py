import pytest

from atiyahkit.fixtures import borel_inclusion, sl2, so3
from atiyahkit.homogeneous import (
    WangError,
    WangProblem,
    canonical_connection,
    equivariant_hom_dim,
    reductive_problem,
    reductive_test,
    wang_constraint_violations,
    wang_dimension_check,
    wang_solve,
)
from atiyahkit.lie import LieAlgebra
from atiyahkit.linalg import Matrix, Subspace

E3 = Matrix([[0], [0], [1]])


def rotation_problem():
    return WangProblem(so3(), E3, LieAlgebra.abelian(1), Matrix([[1]]))


def test_h_equals_g_unique():
    p = WangProblem(sl2(), Matrix.identity(3), sl2(), Matrix.identity(3))
    sol = wang_solve(p)
    assert sol.dim == 0 and sol.particular() == Matrix.identity(3)
    assert wang_dimension_check(p).ok
    assert canonical_connection(p, Matrix.identity(3)) == Matrix.identity(3)


def test_rotation_unique():
    sol = wang_solve(rotation_problem())
    assert not sol.empty and sol.dim == 0
    assert sol.particular() == Matrix([[0, 0, 1]])
    assert sol.connected_isotropy_assumption


def test_sl2_borel_not_reductive():
    p = WangProblem(sl2(), borel_inclusion(), reductive_problem(sl2(), borel_inclusion()).k,
                    Matrix.identity(2))
    assert wang_solve(p).empty
    red = reductive_test(sl2(), borel_inclusion())
    assert not red.reductive and red.complement is None
    assert wang_dimension_check(p).status == "obstruction"


def test_rotation_reductive_complement():
    red = reductive_test(so3(), E3)
    assert red.reductive and red.invariant
    assert red.complement == Subspace.span(3, [(1, 0, 0), (0, 1, 0)])


def test_abelian_always_reductive():
    red = reductive_test(LieAlgebra.abelian(3), Matrix([[1], [1], [0]]))
    assert red.reductive and red.complement.dim == 2


def test_canonical_connection_rotation():
    p = rotation_problem()
    phi0 = reductive_test(so3(), E3).phi0
    can = canonical_connection(p, phi0)
    assert can == wang_solve(p).particular()


def test_dphi_zero_case():
    p = WangProblem(so3(), E3, so3(), Matrix.zeros(3, 1))
    red = reductive_test(so3(), E3)
    can = canonical_connection(p, red.phi0)
    assert can.is_zero()
    sol = wang_solve(p)
    assert sol.contains(can)
    assert sol.dim == equivariant_hom_dim(p, red.complement)
    assert wang_dimension_check(p).ok


def test_into_so3_dimension():
    p = WangProblem(so3(), E3, so3(), E3)
    rep = wang_dimension_check(p)
    assert rep.ok and rep.payload["wang_dim"] == 2


def test_returned_solutions_satisfy_constraints():
    p = WangProblem(so3(), E3, so3(), E3)
    sol = wang_solve(p)
    for h in sol.homogeneous():
        assert wang_constraint_violations(p, sol.particular() + h) == []


def test_invalid_problems():
    with pytest.raises(WangError):
        WangProblem(sl2(), Matrix([[0, 0], [1, 0], [0, 1]]), sl2(), Matrix.zeros(3, 2))
    # dphi = id on a 2-dim non-abelian h into abelian k is not a morphism
    with pytest.raises(WangError):
        WangProblem(sl2(), borel_inclusion(), LieAlgebra.abelian(2), Matrix.identity(2))
    with pytest.raises(WangError):
        canonical_connection(rotation_problem(), Matrix([[1, 0, 1]]))
