import random

import pytest
from hypothesis import given, settings, strategies as st

from atiyahkit.atiyah import extend_connection
from atiyahkit.extension import (
    BConnection,
    _intertwiner,
    b_connection_of,
    b_connection_roundtrip,
    build_embedded_extension,
    build_quotient_extension,
    build_split_extension,
    compatibility_flags,
    connection_of,
    extension_report,
    hexagon_diagnostics,
    iso_change_connection,
    iso_change_splitting,
    iso_embedded_split,
    iso_quotient_embedded,
    iso_quotient_split,
)
from atiyahkit.fixtures import (
    degenerate_full_triad,
    fixture_triads,
    random_extending,
    random_matrix,
    sl2_borel_triad,
    sl2_standard_connection,
    two_dim_triad,
    zero_sub_triad,
)
from atiyahkit.lie import LieAlgebra, Representation, commutator_matrix, make_lie_pair
from atiyahkit.atiyah import Triad
from atiyahkit.linalg import Matrix

seeds = st.integers(0, 10_000)
TRIADS = fixture_triads()


def test_quotient_model_spec_cases():
    deg = degenerate_full_triad()
    q = build_quotient_extension(deg)
    assert q.dim == 4
    # End(E) -> quotient is an isomorphism intertwining the commutator action
    iota = q.chart.projection @ Matrix.vstack(Matrix.identity(4), Matrix.zeros(3, 4))
    assert iota.inverse() @ iota == Matrix.identity(4)
    for a, m in enumerate(deg.E_rep.action):
        assert q.bott_action.action[a] @ iota == iota @ commutator_matrix(m)
    z = build_quotient_extension(zero_sub_triad())
    assert z.dim == 4 + 3 and z.bott_action.action == ()
    assert build_quotient_extension(sl2_borel_triad()).dim == 5


def test_embedded_model_eth_correction():
    triad = sl2_borel_triad()
    act_e = build_embedded_extension(triad).bott_action.action[1]
    # column of b = f-bar, End block: nabla_bar(eth_f e) = nabla_bar(-h) = -diag(1, -1)
    col = act_e.col(4)[:4]
    assert col == (-1, 0, 0, 1)


def test_embedded_model_abelian_is_zero():
    L = LieAlgebra.abelian(2)
    pair = make_lie_pair(L, Matrix([[1], [0]]))
    triad = Triad(pair, Representation.trivial(pair.A, 2))
    assert all(m.is_zero() for m in build_embedded_extension(triad).bott_action.action)
    assert build_embedded_extension(zero_sub_triad()).bott_action.action == ()


def test_split_model_spec_cases():
    triad = sl2_borel_triad()
    s = build_split_extension(triad, sl2_standard_connection())
    for m in s.bott_action.action:
        assert m.submatrix(range(4), [4]).is_zero()
    t = two_dim_triad(1)
    s = build_split_extension(t, extend_connection(t, [Matrix([[7]])]))
    assert s.bott_action.action[0] == Matrix([[0, 1], [0, 0]])
    deg = degenerate_full_triad()
    assert build_split_extension(deg, extend_connection(deg, [])).dim == 4


@pytest.mark.parametrize("name", list(TRIADS))
def test_isomorphisms_on_fixtures(name):
    triad = TRIADS[name]
    conn = random_extending(triad, random.Random(7))
    for iso in (iso_quotient_embedded(triad), iso_embedded_split(triad, conn),
                iso_quotient_split(triad, conn)):
        assert iso.report.ok, (iso.name, iso.report.witnesses)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_change_of_splitting_and_connection(seed):
    rng = random.Random(seed)
    triad = sl2_borel_triad("adjoint")
    i_B2 = triad.pair.i_B + triad.pair.i_A @ random_matrix(rng, 2, 1)
    assert iso_change_splitting(triad, triad.pair.i_B, i_B2).report.ok
    c1, c2 = random_extending(triad, rng), random_extending(triad, rng)
    assert iso_change_connection(triad, c1, c2).report.ok
    assert iso_embedded_split(triad, c1, i_B2).report.ok


def test_change_splitting_spec_case():
    triad = sl2_borel_triad()
    iso = iso_change_splitting(triad, triad.pair.i_B, Matrix([[1], [0], [1]]))
    assert iso.report.ok
    assert iso_change_splitting(triad, triad.pair.i_B, triad.pair.i_B).forward == Matrix.identity(5)


def test_wrong_map_is_detected():
    triad = sl2_borel_triad()
    e1 = build_embedded_extension(triad)
    e2 = build_embedded_extension(triad, Matrix([[1], [0], [1]]))
    assert e1.bott_action.action != e2.bott_action.action
    rep = _intertwiner("identity", Matrix.identity(5), Matrix.identity(5),
                       e1.bott_action, e2.bott_action).report
    assert rep.status == "fail"
    assert any(w["kind"] == "not equivariant" for w in rep.witnesses)


@pytest.mark.parametrize("name", list(TRIADS))
def test_b_connection_roundtrip(name):
    assert b_connection_roundtrip(TRIADS[name], seed=3).ok


def test_zero_b_connection_vanishes_on_complement():
    triad = sl2_borel_triad()
    conn = connection_of(triad, BConnection(triad.pair.i_B, (Matrix.zeros(2, 2),)))
    assert conn.at(triad.pair.i_B.col(0)).is_zero()
    assert b_connection_of(triad, conn).assignment == (Matrix.zeros(2, 2),)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_compatibility_flags_agree(seed):
    rng = random.Random(seed)
    for triad in TRIADS.values():
        compatibility_flags(triad, random_extending(triad, rng))


@pytest.mark.parametrize("name", list(TRIADS))
def test_hexagon_on_fixtures(name):
    triad = TRIADS[name]
    rep = hexagon_diagnostics(triad, random_extending(triad, random.Random(1)))
    assert rep.ok, rep.witnesses
    assert len(rep.payload["checks"]) == 26


def test_extension_report_sl2():
    triad = sl2_borel_triad()
    rep = extension_report(triad, sl2_standard_connection(), Matrix([[1], [0], [1]]),
                           random_extending(triad, random.Random(0)))
    assert rep.ok
    assert rep.payload["dims"] == {"quotient": 5, "embedded": 5, "split": 5}
    assert rep.payload["compatible"] is True
