"""Matched pairs, derivations and equivariant structures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atiyah import (
    Connection,
    Triad,
    b_part,
    build_split_atiyah,
    curvature,
    is_a_compatible,
    require_extending,
    restricted_curvature,
)
from .cohomology import InternalError
from .extension import build_split_extension
from .lie import (
    LieAlgebra,
    Representation,
    basis_vector,
    complement_check,
    make_lie_pair,
    morphism_violations,
    pullback_algebra,
)
from .linalg import DimensionError, Matrix, Subspace, kernel, solve_affine
from .report import Report

VACUOUS_NOTE = "anchor condition holds vacuously: all anchors are zero over a point"


class MatchedError(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class MatchedPair:
    A: LieAlgebra
    B: LieAlgebra
    D_A_on_B: Representation
    D_B_on_A: Representation

    def __post_init__(self):
        if self.D_A_on_B.algebra.dim != self.A.dim or self.D_A_on_B.module_dim != self.B.dim:
            raise DimensionError("A must act on B")
        if self.D_B_on_A.algebra.dim != self.B.dim or self.D_B_on_A.module_dim != self.A.dim:
            raise DimensionError("B must act on A")


def _matched_condition(X: LieAlgebra, Y: LieAlgebra, D_X: Representation, D_Y: Representation,
                       label: str) -> list[dict]:
    """``D_x[y,y'] = [D_x y, y'] + [y, D_x y'] - D_{D_y x} y' + D_{D_y' x} y``."""
    out = []
    for i in range(X.dim):
        Dx = D_X.action[i]
        x = basis_vector(X.dim, i)
        for j in range(Y.dim):
            for k in range(j + 1, Y.dim):
                y, y2 = basis_vector(Y.dim, j), basis_vector(Y.dim, k)
                lhs = Dx.apply(Y.consts[j][k])
                t1 = Y.bracket(Dx.apply(y), y2)
                t2 = Y.bracket(y, Dx.apply(y2))
                t3 = D_X.act(D_Y.action[j].apply(x)).apply(y2)
                t4 = D_X.act(D_Y.action[k].apply(x)).apply(y)
                rhs = tuple(a + b - c + d for a, b, c, d in zip(t1, t2, t3, t4))
                if lhs != rhs:
                    out.append({"condition": label, "triple": [i, j, k]})
    return out


def check_matched(mp: MatchedPair) -> Report:
    wit = [{"condition": "flatness A on B", "pair": list(p)} for p in mp.D_A_on_B.flatness_violations()]
    wit += [{"condition": "flatness B on A", "pair": list(p)} for p in mp.D_B_on_A.flatness_violations()]
    wit += [{"condition": "structure A", "kind": w["kind"]} for w in mp.A.validate().witnesses]
    wit += [{"condition": "structure B", "kind": w["kind"]} for w in mp.B.validate().witnesses]
    wit += _matched_condition(mp.A, mp.B, mp.D_A_on_B, mp.D_B_on_A, "i")
    wit += _matched_condition(mp.B, mp.A, mp.D_B_on_A, mp.D_A_on_B, "ii")
    return Report.check("matched-check", wit, {"dim_A": mp.A.dim, "dim_B": mp.B.dim,
                                               "condition_iii": VACUOUS_NOTE})


def build_matched_sum(mp: MatchedPair) -> LieAlgebra:
    """``A (+) B`` with ``[a, b] = D_a b - D_b a``; basis A then B."""
    rep = check_matched(mp)
    if not rep.ok:
        raise MatchedError("matched-pair conditions fail", rep.witnesses[0])
    m, k = mp.A.dim, mp.B.dim
    n = m + k
    zero = Fraction(0)
    table = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(m):
        for j in range(m):
            table[i][j][:m] = mp.A.consts[i][j]
    for i in range(k):
        for j in range(k):
            table[m + i][m + j][m:] = mp.B.consts[i][j]
    for i in range(m):
        for j in range(k):
            Dab = mp.D_A_on_B.action[i].col(j)
            Dba = mp.D_B_on_A.action[j].col(i)
            v = [-x for x in Dba] + list(Dab)
            table[i][m + j] = v
            table[m + j][i] = [-x for x in v]
    return LieAlgebra(table, list(mp.A.names) + list(mp.B.names))


@dataclass(frozen=True)
class RecognizedMatched:
    matched: MatchedPair
    adapted_basis: Matrix
    roundtrip_ok: bool


def recognize_matched(L: LieAlgebra, inc_A: Matrix, inc_B: Matrix) -> RecognizedMatched:
    """Read off mutual actions from ``[a, b] = D_a b - D_b a``."""
    complement_check(L, inc_A, inc_B)
    for label, inc in (("A", inc_A), ("B", inc_B)):
        bad = L.is_subalgebra(inc)
        if bad is not None:
            raise MatchedError(f"{label} is not a subalgebra", {"subspace": label, "pair": list(bad)})
    pair = make_lie_pair(L, inc_A, inc_B)
    A = pair.A
    B = pullback_algebra(L, inc_B, pair.pr_B, "b")
    ia, ib = inc_A.columns(), inc_B.columns()
    D_ab = [Matrix.from_columns([pair.pr_B.apply(L.bracket(a, b)) for b in ib], nrows=B.dim) for a in ia]
    D_ba = [Matrix.from_columns([tuple(-x for x in pair.pr_A.apply(L.bracket(a, b))) for a in ia],
                                nrows=A.dim) for b in ib]
    mp = MatchedPair(A, B, Representation(A, B.dim, D_ab), Representation(B, A.dim, D_ba))
    M = Matrix.hstack(inc_A, inc_B)
    total = build_matched_sum(mp)
    ok = not morphism_violations(M, total, L) and total == pullback_algebra(L, M, M.inverse())
    return RecognizedMatched(mp, M, ok)


def matched_sum_reproduces(L: LieAlgebra, rec: RecognizedMatched) -> bool:
    return build_matched_sum(rec.matched) == pullback_algebra(L, rec.adapted_basis, rec.adapted_basis.inverse())


def matched_atiyah_decomposition(triad: Triad, conn: Connection) -> Report:
    """Check ``End(E) (+) L  ~  A |><| (End(E) (+) B)`` for a matched triad.

    The B-part uses the B-connection ``nabla o i_B``; ``A`` acts as in the
    split extension and ``End(E) (+) B`` acts on ``A`` through its B-part.
    """
    require_extending(triad, conn)
    pair = triad.pair
    rec = recognize_matched(pair.L, pair.i_A, pair.i_B)
    mp = rec.matched
    n = triad.n
    N = n * n
    b_conn = Connection(mp.B, n, b_part(triad, conn))
    EB = build_split_atiyah(b_conn).algebra
    a_action = build_split_extension(triad, conn).bott_action
    zeros = [Matrix.zeros(pair.dim_A, pair.dim_A)] * N
    eb_action = Representation(EB, pair.dim_A, zeros + list(mp.D_B_on_A.action))
    big = MatchedPair(mp.A, EB, Representation(mp.A, EB.dim, a_action.action), eb_action)
    wit = [dict(w, stage="matched") for w in check_matched(big).witnesses]
    EL = build_split_atiyah(conn).algebra
    if not wit:
        total = build_matched_sum(big)
        # (a, phi, b) -> phi (+) (i_A a + i_B b)
        dA, dB = pair.dim_A, pair.dim_B
        iso = Matrix.vstack(
            Matrix.hstack(Matrix.zeros(N, dA), Matrix.identity(N), Matrix.zeros(N, dB)),
            Matrix.hstack(pair.i_A, Matrix.zeros(pair.dim_L, N), pair.i_B),
        )
        wit += [{"stage": "isomorphism", "pair": list(p)} for p in morphism_violations(iso, total, EL)]
        try:
            iso.inverse()
        except ValueError:
            wit.append({"stage": "isomorphism", "kind": "not invertible"})
    # square of sequences End -> End+B -> B  over  End -> End+L -> L
    j = Matrix.block_diag(Matrix.identity(N), pair.i_B)
    wit += [{"stage": "square", "pair": list(p)} for p in morphism_violations(j, EB, EL)]
    iota_B = Matrix.vstack(Matrix.identity(N), Matrix.zeros(pair.dim_B, N))
    iota_L = Matrix.vstack(Matrix.identity(N), Matrix.zeros(pair.dim_L, N))
    sig_B = Matrix.hstack(Matrix.zeros(pair.dim_B, N), Matrix.identity(pair.dim_B))
    sig_L = Matrix.hstack(Matrix.zeros(pair.dim_L, N), Matrix.identity(pair.dim_L))
    if j @ iota_B != iota_L or sig_L @ j != pair.i_B @ sig_B:
        wit.append({"stage": "square", "kind": "diagram does not commute"})
    return Report.check("matched-atiyah", wit, {"dim": EL.dim, "dim_End_B": EB.dim})


def matched_curvature_split(triad: Triad, conn: Connection) -> Report:
    require_extending(triad, conn)
    pair = triad.pair
    n = triad.n
    AA = restricted_curvature(triad, conn, "A", "A")
    AB = restricted_curvature(triad, conn, "A", "B")
    BB = restricted_curvature(triad, conn, "B", "B")
    full = curvature(conn)
    wit = []
    for i in range(pair.dim_L):
        x = pair.L.basis(i)
        xa, xb = pair.pr_A.apply(x), pair.pr_B.apply(x)
        for j in range(pair.dim_L):
            y = pair.L.basis(j)
            ya, yb = pair.pr_A.apply(y), pair.pr_B.apply(y)
            acc = Matrix.zeros(n, n)
            for p in range(pair.dim_A):
                for q in range(pair.dim_A):
                    if xa[p] and ya[q]:
                        acc = acc + AA.table[p][q].scale(xa[p] * ya[q])
                for q in range(pair.dim_B):
                    c = xa[p] * yb[q] - ya[p] * xb[q]
                    if c:
                        acc = acc + AB.table[p][q].scale(c)
            for p in range(pair.dim_B):
                for q in range(pair.dim_B):
                    if xb[p] and yb[q]:
                        acc = acc + BB.table[p][q].scale(xb[p] * yb[q])
            if acc != full.table[i][j]:
                wit.append({"kind": "decomposition", "pair": [i, j]})
    flat = full.is_zero()
    blocks = {"A_A": AA.is_zero(), "A_B": AB.is_zero(), "B_B": BB.is_zero()}
    if flat != (blocks["A_B"] and blocks["B_B"]):
        wit.append({"kind": "biconditional"})
    return Report.check("curvature-split", wit, {"flat": flat, "zero_blocks": blocks})


# derivations ---------------------------------------------------------------------
@dataclass(frozen=True)
class DerivationAlgebra:
    base: LieAlgebra
    carrier: Subspace
    algebra: LieAlgebra

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def matrices(self) -> list[Matrix]:
        m = self.base.dim
        return [Matrix.from_flat(v, m, m) for v in self.carrier.vectors()]


def derivation_system(L: LieAlgebra) -> Matrix:
    """Rows: ``delta[e_i, e_j] - [delta e_i, e_j] - [e_i, delta e_j]`` for i < j."""
    m = L.dim
    cols = []
    for u in range(m * m):
        d = Matrix.from_flat(basis_vector(m * m, u), m, m)
        eqs = []
        for i in range(m):
            for j in range(i + 1, m):
                lhs = d.apply(L.consts[i][j])
                r1 = L.bracket(d.col(i), L.basis(j))
                r2 = L.bracket(L.basis(i), d.col(j))
                eqs.extend(a - b - c for a, b, c in zip(lhs, r1, r2))
        cols.append(eqs)
    nrows = m * (m - 1) // 2 * m
    return Matrix.from_columns(cols, nrows=nrows) if nrows else Matrix.zeros(0, m * m)


def is_derivation(L: LieAlgebra, d: Matrix) -> bool:
    return not any(derivation_system(L).apply(d.flat()))


def derivation_algebra(L: LieAlgebra) -> DerivationAlgebra:
    m = L.dim
    carrier = kernel(derivation_system(L))
    mats = [Matrix.from_flat(v, m, m) for v in carrier.vectors()]
    basis = carrier.basis
    table = []
    for x in mats:
        row = []
        for y in mats:
            c = x.commutator(y).flat()
            sol = solve_affine(basis, c)
            if sol.empty:
                raise InternalError("derivations are not closed under the commutator")
            row.append(sol.particular)
        table.append(row)
    return DerivationAlgebra(L, carrier, LieAlgebra(table) if mats else LieAlgebra([]))


# equivariance ---------------------------------------------------------------------
def equivariant_structure(g: LieAlgebra, L: LieAlgebra, action: Sequence[Matrix]) -> MatchedPair:
    """``g`` acting on ``L`` by derivations; ``L`` acts on ``g`` by zero."""
    action = list(action)
    if len(action) != g.dim or any(m.shape != (L.dim, L.dim) for m in action):
        raise DimensionError("need one dim L x dim L matrix per basis vector of g")
    system = derivation_system(L)
    for i, m in enumerate(action):
        if any(system.apply(m.flat())):
            raise MatchedError(f"action of basis vector {i} is not a derivation", {"generator": i})
    rep = Representation(g, L.dim, action)
    bad = rep.flatness_violations()
    if bad:
        raise MatchedError("action is not a Lie algebra morphism", {"pair": list(bad[0])})
    mp = MatchedPair(g, L, rep, Representation.trivial(L, g.dim))
    if not check_matched(mp).ok:
        raise InternalError("equivariant structure fails the matched-pair conditions")
    return mp


def g_invariance_defect(mp: MatchedPair, X_E: Sequence[Matrix], conn: Connection) -> dict:
    """Nonzero values of ``X_v nabla_l - nabla_l X_v - nabla_{X^L_v l}`` by (v, l)."""
    out = {}
    for v, Xv in enumerate(X_E):
        for l in range(mp.B.dim):
            nl = conn.assignment[l]
            val = Xv @ nl - nl @ Xv - conn.at(mp.D_A_on_B.action[v].col(l))
            if not val.is_zero():
                out[(v, l)] = val
    return out


def is_g_invariant(mp: MatchedPair, X_E: Sequence[Matrix], conn: Connection) -> tuple[bool, list]:
    """Invariance flag with witness pairs; cross-checked as compatibility on ``g |><| L``."""
    X_E = list(X_E)
    g, L = mp.A, mp.B
    n = conn.module_dim
    if len(X_E) != g.dim or conn.algebra.dim != L.dim or any(m.shape != (n, n) for m in X_E):
        raise DimensionError("X_E and the connection do not fit the equivariant structure")
    E_rep = Representation(g, n, X_E)
    E_rep.require_flat("g-action on E")
    defect = g_invariance_defect(mp, X_E, conn)
    total = build_matched_sum(mp)
    inc_g = Matrix.vstack(Matrix.identity(g.dim), Matrix.zeros(L.dim, g.dim))
    inc_L = Matrix.vstack(Matrix.zeros(g.dim, L.dim), Matrix.identity(L.dim))
    pair = make_lie_pair(total, inc_g, inc_L)
    triad = Triad(pair, E_rep.restrict(pair.i_A, pair.A))
    big = Connection(total, n, X_E + list(conn.assignment))
    if is_a_compatible(triad, big) != (not defect):
        raise InternalError("g-invariance and compatibility on the matched sum disagree")
    return not defect, [list(k) for k in sorted(defect)]
