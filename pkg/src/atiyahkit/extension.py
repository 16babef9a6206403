"""The three models of the B-Atiyah extension and the maps between them.

All carriers are coordinate spaces.  ``N = n^2`` is the dimension of
``End(E)``, flattened row-major.

* quotient model: ``(gl(E) x L) / {(nabla_bar_a, i_A a)}`` through a chart;
* embedded model: ``gl(E) x B`` with the action transported along ``i_B``;
* split model: ``End(E) (+) B`` with the curvature-twisted action.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .atiyah import (
    Connection,
    Triad,
    atiyah_cocycle,
    b_part,
    extend_connection,
    require_extending,
    restricted_curvature,
)
from .cohomology import InternalError
from .lie import (
    Representation,
    basis_vector,
    bott_connection,
    commutator_matrix,
    eth,
    splitting_difference,
)
from .linalg import Matrix, QuotientChart, Subspace, quotient_chart, rank
from .report import Report


def _flat_col(m: Matrix) -> tuple:
    return tuple(m.flat())


def _block(tl: Matrix, tr: Matrix, bl: Matrix, br: Matrix) -> Matrix:
    return Matrix.vstack(Matrix.hstack(tl, tr), Matrix.hstack(bl, br))


def _end_to_gl_times(triad: Triad) -> Matrix:
    """``phi -> (phi, 0)`` into ``gl(E) x L``."""
    N = triad.n ** 2
    return Matrix.vstack(Matrix.identity(N), Matrix.zeros(triad.pair.dim_L, N))


def _nabla_bar_matrix(triad: Triad) -> Matrix:
    """``a -> nabla_bar_a`` flattened, shape N x dim A."""
    N = triad.n ** 2
    return Matrix.from_columns([_flat_col(m) for m in triad.E_rep.action], nrows=N)


def _rep_from_blocks(triad: Triad, mats: list[Matrix], dim: int) -> Representation:
    return Representation(triad.pair.A, dim, mats)


# models ----------------------------------------------------------------------
@dataclass(frozen=True)
class QuotientExtension:
    triad: Triad
    chart: QuotientChart
    bott_action: Representation
    ambient_action: tuple

    @property
    def dim(self) -> int:
        return self.chart.quotient_dim

    def well_defined_violations(self) -> list[int]:
        """``a`` such that the ambient action does not preserve the subspace."""
        P = self.chart.projection
        S = self.chart.subspace.basis
        return [i for i, T in enumerate(self.ambient_action) if not (P @ T @ S).is_zero()]


def s_AL(triad: Triad) -> Matrix:
    """``a -> (nabla_bar_a, i_A a)``."""
    return Matrix.vstack(_nabla_bar_matrix(triad), triad.pair.i_A)


def build_quotient_extension(triad: Triad) -> QuotientExtension:
    pair = triad.pair
    n, N = triad.n, triad.n ** 2
    amb = N + pair.dim_L
    sub = Subspace(amb, s_AL(triad))
    chart = quotient_chart(amb, sub)
    T = []
    for i, a in enumerate(pair.i_A.columns()):
        T.append(Matrix.block_diag(commutator_matrix(triad.E_rep.action[i]), pair.L.ad(a)))
    acts = [chart.projection @ t @ chart.section for t in T]
    rep = _rep_from_blocks(triad, acts, chart.quotient_dim)
    q = QuotientExtension(triad, chart, rep, tuple(T))
    bad = q.well_defined_violations()
    if bad:
        raise InternalError(f"quotient action depends on representatives at a{bad[0] + 1}")
    rep.require_flat("quotient extension action")
    return q


@dataclass(frozen=True)
class EmbeddedExtension:
    triad: Triad
    bott_action: Representation

    @property
    def i_B(self) -> Matrix:
        return self.triad.pair.i_B

    @property
    def dim(self) -> int:
        return self.triad.n ** 2 + self.triad.pair.dim_B


def build_embedded_extension(triad: Triad, i_B: Matrix | None = None) -> EmbeddedExtension:
    """``a . (delta, b) = ([nabla_bar_a, delta] + nabla_bar_{eth_b a}, D_a b)``."""
    if i_B is not None:
        triad = triad.with_splitting(i_B)
    pair = triad.pair
    N = triad.n ** 2
    D = bott_connection(pair)
    acts = []
    for i in range(pair.dim_A):
        a = basis_vector(pair.dim_A, i)
        K = Matrix.from_columns(
            [_flat_col(triad.nabla_bar(eth(pair, basis_vector(pair.dim_B, j), a)))
             for j in range(pair.dim_B)], nrows=N)
        acts.append(_block(commutator_matrix(triad.E_rep.action[i]), K,
                           Matrix.zeros(pair.dim_B, N), D.action[i]))
    rep = _rep_from_blocks(triad, acts, N + pair.dim_B)
    rep.require_flat("embedded extension action")
    return EmbeddedExtension(triad, rep)


@dataclass(frozen=True)
class SplitExtension:
    triad: Triad
    connection: Connection
    bott_action: Representation

    @property
    def dim(self) -> int:
        return self.triad.n ** 2 + self.triad.pair.dim_B


def build_split_extension(triad: Triad, conn: Connection) -> SplitExtension:
    """``a . (phi (+) b) = ([nabla_bar_a, phi] + R(a (x) b)) (+) D_a b``."""
    require_extending(triad, conn)
    pair = triad.pair
    N = triad.n ** 2
    D = bott_connection(pair)
    R = atiyah_cocycle(triad, conn)
    acts = []
    for i in range(pair.dim_A):
        K = Matrix.from_columns([_flat_col(R.table[i][j]) for j in range(pair.dim_B)], nrows=N)
        acts.append(_block(commutator_matrix(triad.E_rep.action[i]), K,
                           Matrix.zeros(pair.dim_B, N), D.action[i]))
    rep = _rep_from_blocks(triad, acts, N + pair.dim_B)
    rep.require_flat("split extension action")
    return SplitExtension(triad, conn, rep)


# intertwiners ----------------------------------------------------------------
@dataclass(frozen=True)
class Intertwiner:
    name: str
    forward: Matrix
    backward: Matrix
    report: Report


def _intertwiner(name: str, fwd: Matrix, bwd: Matrix, src: Representation, dst: Representation,
                 extra: list | None = None) -> Intertwiner:
    wit = list(extra or [])
    if fwd @ bwd != Matrix.identity(dst.module_dim):
        wit.append({"kind": "forward o backward is not the identity"})
    if bwd @ fwd != Matrix.identity(src.module_dim):
        wit.append({"kind": "backward o forward is not the identity"})
    for i, (s, d) in enumerate(zip(src.action, dst.action)):
        if fwd @ s != d @ fwd:
            wit.append({"kind": "not equivariant", "a": i})
    rep = Report.check(name, wit, {"dim": src.module_dim})
    return Intertwiner(name, fwd, bwd, rep)


def _gl_times_to_embedded(triad: Triad) -> Matrix:
    """``(delta, l) -> (delta - nabla_bar_{pr_A l}, pr_B l)``; it kills the image of ``s_AL``."""
    pair = triad.pair
    N = triad.n ** 2
    nb = _nabla_bar_matrix(triad)
    return _block(Matrix.identity(N), -(nb @ pair.pr_A),
                  Matrix.zeros(pair.dim_B, N), pair.pr_B)


def iso_quotient_embedded(triad: Triad, i_B: Matrix | None = None) -> Intertwiner:
    if i_B is not None:
        triad = triad.with_splitting(i_B)
    pair = triad.pair
    N = triad.n ** 2
    q = build_quotient_extension(triad)
    e = build_embedded_extension(triad)
    G = _gl_times_to_embedded(triad)
    extra = []
    if not (G @ q.chart.subspace.basis).is_zero():
        extra.append({"kind": "forward map does not descend to the quotient"})
    fwd = G @ q.chart.section
    bwd = q.chart.projection @ Matrix.block_diag(Matrix.identity(N), pair.i_B)
    return _intertwiner("iso-quotient-embedded", fwd, bwd, q.bott_action, e.bott_action, extra)


def _embedded_split_matrices(triad: Triad, conn: Connection) -> tuple[Matrix, Matrix]:
    """``(delta, b) -> (delta - nabla°_b) (+) b`` and its inverse."""
    N = triad.n ** 2
    dB = triad.pair.dim_B
    nc = Matrix.from_columns([_flat_col(m) for m in b_part(triad, conn)], nrows=N)
    fwd = _block(Matrix.identity(N), -nc, Matrix.zeros(dB, N), Matrix.identity(dB))
    bwd = _block(Matrix.identity(N), nc, Matrix.zeros(dB, N), Matrix.identity(dB))
    return fwd, bwd


def iso_embedded_split(triad: Triad, conn: Connection, i_B: Matrix | None = None) -> Intertwiner:
    if i_B is not None:
        triad = triad.with_splitting(i_B)
    require_extending(triad, conn)
    e = build_embedded_extension(triad)
    s = build_split_extension(triad, conn)
    fwd, bwd = _embedded_split_matrices(triad, conn)
    return _intertwiner("iso-embedded-split", fwd, bwd, e.bott_action, s.bott_action)


def iso_quotient_split(triad: Triad, conn: Connection) -> Intertwiner:
    """``((delta, l)) -> (delta - nabla_l) (+) pr_B l`` and ``phi (+) b -> ((phi + nabla°_b, i_B b))``."""
    require_extending(triad, conn)
    pair = triad.pair
    N = triad.n ** 2
    q = build_quotient_extension(triad)
    s = build_split_extension(triad, conn)
    nab = Matrix.from_columns([_flat_col(m) for m in conn.assignment], nrows=N)
    G = _block(Matrix.identity(N), -nab, Matrix.zeros(pair.dim_B, N), pair.pr_B)
    extra = []
    if not (G @ q.chart.subspace.basis).is_zero():
        extra.append({"kind": "forward map does not descend to the quotient"})
    fwd = G @ q.chart.section
    nc = Matrix.from_columns([_flat_col(m) for m in b_part(triad, conn)], nrows=N)
    bwd = q.chart.projection @ _block(Matrix.identity(N), nc,
                                      Matrix.zeros(pair.dim_L, N), pair.i_B)
    return _intertwiner("iso-quotient-split", fwd, bwd, q.bott_action, s.bott_action, extra)


def iso_change_splitting(triad: Triad, i_B: Matrix, i_B2: Matrix) -> Intertwiner:
    """``(delta, b) -> (delta + nabla_bar_{I(b)}, b)`` from the ``i_B`` model to the ``i_B2`` model."""
    t1 = triad.with_splitting(i_B)
    t2 = triad.with_splitting(i_B2)
    I = splitting_difference(t1.pair, i_B2)
    N = triad.n ** 2
    dB = triad.pair.dim_B
    nbI = _nabla_bar_matrix(triad) @ I
    fwd = _block(Matrix.identity(N), nbI, Matrix.zeros(dB, N), Matrix.identity(dB))
    bwd = _block(Matrix.identity(N), -nbI, Matrix.zeros(dB, N), Matrix.identity(dB))
    e1 = build_embedded_extension(t1)
    e2 = build_embedded_extension(t2)
    return _intertwiner("iso-change-splitting", fwd, bwd, e1.bott_action, e2.bott_action)


def iso_change_connection(triad: Triad, conn: Connection, conn2: Connection) -> Intertwiner:
    """``phi (+) b -> (phi + nabla_{i_B b} - nabla'_{i_B b}) (+) b``."""
    require_extending(triad, conn)
    require_extending(triad, conn2)
    N = triad.n ** 2
    dB = triad.pair.dim_B
    diff = Matrix.from_columns(
        [_flat_col(x - y) for x, y in zip(b_part(triad, conn), b_part(triad, conn2))], nrows=N)
    fwd = _block(Matrix.identity(N), diff, Matrix.zeros(dB, N), Matrix.identity(dB))
    bwd = _block(Matrix.identity(N), -diff, Matrix.zeros(dB, N), Matrix.identity(dB))
    s1 = build_split_extension(triad, conn)
    s2 = build_split_extension(triad, conn2)
    return _intertwiner("iso-change-connection", fwd, bwd, s1.bott_action, s2.bott_action)


# B-connections -----------------------------------------------------------------
@dataclass(frozen=True)
class BConnection:
    """``b -> nabla°_b`` relative to the splitting ``i_B``."""

    i_B: Matrix
    assignment: tuple

    def to_json_data(self) -> dict:
        return {"i_B": self.i_B, "assignment": list(self.assignment)}


def b_connection_of(triad: Triad, conn: Connection) -> BConnection:
    return BConnection(triad.pair.i_B, tuple(b_part(triad, conn)))


def connection_of(triad: Triad, bconn: BConnection) -> Connection:
    if bconn.i_B != triad.pair.i_B:
        triad = triad.with_splitting(bconn.i_B)
    return extend_connection(triad, list(bconn.assignment))


def b_connection_roundtrip(triad: Triad, i_B: Matrix | None = None, seed: int = 0,
                           samples: int = 3) -> Report:
    from .fixtures import random_matrix

    if i_B is not None:
        triad = triad.with_splitting(i_B)
    rng = random.Random(seed)
    n = triad.n
    pair = triad.pair
    family = [[Matrix.zeros(n, n)] * pair.dim_B]
    family += [[random_matrix(rng, n, n) for _ in range(pair.dim_B)] for _ in range(samples)]
    wit = []
    for k, mats in enumerate(family):
        bc = BConnection(pair.i_B, tuple(mats))
        conn = connection_of(triad, bc)
        if b_connection_of(triad, conn) != bc:
            wit.append({"kind": "B-connection round trip", "sample": k})
        if connection_of(triad, b_connection_of(triad, conn)) != conn:
            wit.append({"kind": "connection round trip", "sample": k})
    N = n * n
    dims = {"dim_D_L": N + pair.dim_L, "dim_End": N, "dim_A": pair.dim_A, "dim_B": pair.dim_B}
    # decomposition gl(E) x L = s_AL(A) + End + i_B(B)
    decomposition = Matrix.hstack(s_AL(triad), _end_to_gl_times(triad),
                                  Matrix.vstack(Matrix.zeros(N, pair.dim_B), pair.i_B))
    if rank(decomposition) != N + pair.dim_L or decomposition.ncols != N + pair.dim_L:
        wit.append({"kind": "decomposition of D_L(E) fails"})
    return Report.check("b-connection-roundtrip", wit, dims, seed=seed)


# compatibility ---------------------------------------------------------------------
@dataclass(frozen=True)
class CompatibilityFlags:
    curvature_A_L_zero: bool
    cocycle_zero: bool
    split_section_equivariant: bool
    embedded_section_equivariant: bool

    @property
    def value(self) -> bool:
        return self.cocycle_zero


def compatibility_flags(triad: Triad, conn: Connection) -> CompatibilityFlags:
    """Four independent tests of A-compatibility; they must agree."""
    require_extending(triad, conn)
    pair = triad.pair
    N = triad.n ** 2
    D = bott_connection(pair)
    f1 = restricted_curvature(triad, conn, "A", "L").is_zero()
    f2 = atiyah_cocycle(triad, conn).is_zero()
    split = build_split_extension(triad, conn).bott_action
    emb = build_embedded_extension(triad).bott_action
    inc = Matrix.vstack(Matrix.zeros(N, pair.dim_B), Matrix.identity(pair.dim_B))
    f3 = all(split.action[i] @ inc == inc @ D.action[i] for i in range(pair.dim_A))
    nc = Matrix.from_columns([_flat_col(m) for m in b_part(triad, conn)], nrows=N)
    sec = Matrix.vstack(nc, Matrix.identity(pair.dim_B))
    f4 = all(emb.action[i] @ sec == sec @ D.action[i] for i in range(pair.dim_A))
    flags = CompatibilityFlags(f1, f2, f3, f4)
    if len({f1, f2, f3, f4}) != 1:
        raise InternalError(f"compatibility criteria disagree: {flags}")
    return flags


# hexagon ---------------------------------------------------------------------------
@dataclass
class _Diagram:
    entries: list = field(default_factory=list)

    def exact(self, name: str, f: Matrix, g: Matrix) -> None:
        """Short exactness of ``0 -> U -f-> V -g-> W -> 0``."""
        problems = []
        if f.nrows != g.ncols:
            problems.append("shapes do not compose")
        else:
            if not (g @ f).is_zero():
                problems.append("composite is not zero")
            rf, rg = rank(f), rank(g)
            if rf != f.ncols:
                problems.append("first map not injective")
            if rg != g.nrows:
                problems.append("second map not surjective")
            if rf != g.ncols - rg:
                problems.append("image differs from kernel")
        self.entries.append({"kind": "exact", "name": name, "ok": not problems, "problems": problems})

    def commutes(self, name: str, lhs: Matrix, rhs: Matrix) -> None:
        ok = lhs.shape == rhs.shape and lhs == rhs
        self.entries.append({"kind": "commutes", "name": name, "ok": ok, "problems": [] if ok else ["differ"]})

    def equivariant(self, name: str, f: Matrix, src: Representation, dst: Representation) -> None:
        bad = [i for i, (s, d) in enumerate(zip(src.action, dst.action)) if f @ s != d @ f]
        self.entries.append({"kind": "equivariant", "name": name, "ok": not bad,
                             "problems": [f"a{i + 1}" for i in bad]})


def hexagon_diagnostics(triad: Triad, conn: Connection, i_B: Matrix | None = None) -> Report:
    if i_B is not None:
        triad = triad.with_splitting(i_B)
    require_extending(triad, conn)
    pair = triad.pair
    N = triad.n ** 2
    dA, dB, dL = pair.dim_A, pair.dim_B, pair.dim_L
    nb = _nabla_bar_matrix(triad)
    I_N = Matrix.identity(N)

    # D_A(E) = gl(E) x A and D_L(E) = gl(E) x L
    iota_A = Matrix.vstack(I_N, Matrix.zeros(dA, N))
    iota_L = _end_to_gl_times(triad)
    sigma_A = Matrix.hstack(Matrix.zeros(dA, N), Matrix.identity(dA))
    sigma_L = Matrix.hstack(Matrix.zeros(dL, N), Matrix.identity(dL))
    s_A = Matrix.vstack(nb, Matrix.identity(dA))
    theta_A = Matrix.hstack(I_N, -nb)
    f_AL = Matrix.block_diag(I_N, pair.i_A)
    sAL = s_AL(triad)
    q = build_quotient_extension(triad)
    P_B = q.chart.projection
    iota_B = P_B @ iota_L
    sigma_B = Matrix.hstack(Matrix.zeros(dB, N), pair.pr_B) @ q.chart.section

    dg = _Diagram()
    dg.exact("A -> D_A(E) -> End(E)", s_A, theta_A)
    dg.exact("A -> D_L(E) -> D_B(E)", sAL, P_B)
    dg.exact("A -> L -> B", pair.i_A, pair.pr_B)
    dg.exact("End(E) -> D_A(E) -> A", iota_A, sigma_A)
    dg.exact("End(E) -> D_L(E) -> L", iota_L, sigma_L)
    dg.exact("End(E) -> D_B(E) -> B", iota_B, sigma_B)
    dg.exact("D_A(E) -> D_L(E) -> B", f_AL, pair.pr_B @ sigma_L)

    dg.commutes("f_AL s_A = s_AL", f_AL @ s_A, sAL)
    dg.commutes("iota_B theta_A = P_B f_AL", iota_B @ theta_A, P_B @ f_AL)
    dg.commutes("sigma_L s_AL = i_A", sigma_L @ sAL, pair.i_A)
    dg.commutes("sigma_B P_B = pr_B sigma_L", sigma_B @ P_B, pair.pr_B @ sigma_L)
    dg.commutes("f_AL iota = iota", f_AL @ iota_A, iota_L)
    dg.commutes("i_A sigma_A = sigma_L f_AL", pair.i_A @ sigma_A, sigma_L @ f_AL)
    dg.commutes("P_B iota = iota_B", P_B @ iota_L, iota_B)

    # the other two models of the B-row, and the vertical isomorphisms
    e = build_embedded_extension(triad)
    s = build_split_extension(triad, conn)
    D = bott_connection(pair)
    end_rep = triad.E_rep.end_commutator()
    iota_row = Matrix.vstack(I_N, Matrix.zeros(dB, N))
    sigma_row = Matrix.hstack(Matrix.zeros(dB, N), Matrix.identity(dB))
    dg.exact("End(E) -> D_iB(E) -> B", iota_row, sigma_row)
    dg.exact("End(E) -> End(E)+B -> B", iota_row, sigma_row)
    qe = iso_quotient_embedded(triad)
    es = iso_embedded_split(triad, conn)
    dg.commutes("F iota_B = iota (quotient to embedded)", qe.forward @ iota_B, iota_row)
    dg.commutes("sigma F = sigma_B (quotient to embedded)", sigma_row @ qe.forward, sigma_B)
    dg.commutes("Psi iota = iota (embedded to split)", es.forward @ iota_row, iota_row)
    dg.commutes("sigma Psi = sigma (embedded to split)", sigma_row @ es.forward, sigma_row)
    dg.equivariant("iota_B", iota_B, end_rep, q.bott_action)
    dg.equivariant("sigma_B", sigma_B, q.bott_action, D)
    dg.equivariant("iota (embedded)", iota_row, end_rep, e.bott_action)
    dg.equivariant("sigma (embedded)", sigma_row, e.bott_action, D)
    dg.equivariant("iota (split)", iota_row, end_rep, s.bott_action)
    dg.equivariant("sigma (split)", sigma_row, s.bott_action, D)

    wit = [x for x in dg.entries if not x["ok"]]
    payload = {"checks": [{"name": x["name"], "kind": x["kind"], "ok": x["ok"]} for x in dg.entries],
               "dims": {"End": N, "A": dA, "B": dB, "L": dL, "D_B": q.dim}}
    return Report.check("hexagon", wit, payload)


def extension_report(triad: Triad, conn: Connection, i_B2: Matrix | None = None,
                     conn2: Connection | None = None) -> Report:
    """Build all three models and run every isomorphism check."""
    q = build_quotient_extension(triad)
    e = build_embedded_extension(triad)
    s = build_split_extension(triad, conn)
    checks = [iso_quotient_embedded(triad), iso_embedded_split(triad, conn),
              iso_quotient_split(triad, conn)]
    if i_B2 is not None:
        checks.append(iso_change_splitting(triad, triad.pair.i_B, i_B2))
    if conn2 is not None:
        checks.append(iso_change_connection(triad, conn, conn2))
    wit = []
    for c in checks:
        wit += [dict(w, iso=c.name) for w in c.report.witnesses]
    payload = {
        "dims": {"quotient": q.dim, "embedded": e.dim, "split": s.dim},
        "flat": {"quotient": q.bott_action.is_flat(), "embedded": e.bott_action.is_flat(),
                 "split": s.bott_action.is_flat()},
        "isomorphisms": {c.name: c.report.status for c in checks},
        "compatible": compatibility_flags(triad, conn).value,
    }
    return Report.check("extensions", wit, payload)
