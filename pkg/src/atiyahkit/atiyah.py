"""Connections, curvature, Atiyah cocycles and the curvature-twisted algebra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cochains import ce_differential, cochain_from_table, multi_indices
from .lie import (
    LieAlgebra,
    LiePair,
    Representation,
    algebra_from_bracket,
    basis_vector,
    direct_product,
    lin_comb,
    morphism_violations,
    commutator_matrix,
)
from .linalg import DimensionError, Matrix
from .report import Report


class NotExtendingError(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class Connection:
    """Linear map ``L -> End(Q^n)``, one matrix per basis vector of ``L``."""

    algebra: LieAlgebra
    module_dim: int
    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(self.assignment) != self.algebra.dim:
            raise DimensionError("one matrix per basis vector of L is required")
        for m in self.assignment:
            if m.shape != (self.module_dim, self.module_dim):
                raise DimensionError("connection matrix has the wrong shape")

    @classmethod
    def from_representation(cls, rep: Representation) -> "Connection":
        return cls(rep.algebra, rep.module_dim, rep.action)

    def at(self, x: Sequence) -> Matrix:
        n = self.module_dim
        return lin_comb(x, self.assignment, (n, n))

    def compose(self, m: Matrix) -> list[Matrix]:
        """``nabla o m`` for a linear map ``m`` into ``L``, as a list of matrices."""
        return [self.at(c) for c in m.columns()]

    def as_representation(self) -> Representation:
        return Representation(self.algebra, self.module_dim, self.assignment)

    def __sub__(self, other: "Connection") -> tuple:
        return tuple(a - b for a, b in zip(self.assignment, other.assignment))


@dataclass(frozen=True)
class Triad:
    """Lie pair together with a flat A-module ``E``."""

    pair: LiePair
    E_rep: Representation

    def __post_init__(self):
        if self.E_rep.algebra.dim != self.pair.dim_A:
            raise DimensionError("E must be a representation of A")
        self.E_rep.require_flat("A-action on E")

    @property
    def n(self) -> int:
        return self.E_rep.module_dim

    def nabla_bar(self, a: Sequence) -> Matrix:
        return self.E_rep.act(a)

    def with_splitting(self, i_B: Matrix) -> "Triad":
        return Triad(self.pair.with_splitting(i_B), self.E_rep)


@dataclass(frozen=True)
class CurvatureForm:
    """End(E)-valued bilinear table ``table[i][j] = R(x_i, y_j)``."""

    domain: tuple[str, str]
    table: tuple

    def is_zero(self) -> bool:
        return all(m.is_zero() for row in self.table for m in row)

    def nonzero_entries(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.table) for j, m in enumerate(row) if not m.is_zero()]

    def as_cochain(self) -> tuple[Fraction, ...]:
        """Flatten as ``i * (len(row) * n^2) + j * n^2 + p * n + q``."""
        return tuple(x for row in self.table for m in row for x in m.flat())

    def __sub__(self, other: "CurvatureForm") -> "CurvatureForm":
        return CurvatureForm(self.domain, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.table, other.table)))

    def to_json_data(self) -> dict:
        return {"domain": list(self.domain),
                "entries": [[i, j, self.table[i][j]] for i, j in self.nonzero_entries()]}


def curvature_value(conn: Connection, x: Sequence, y: Sequence) -> Matrix:
    L = conn.algebra
    nx, ny = conn.at(x), conn.at(y)
    return nx @ ny - ny @ nx - conn.at(L.bracket(x, y))


def curvature(conn: Connection) -> CurvatureForm:
    L = conn.algebra
    e = [L.basis(i) for i in range(L.dim)]
    return CurvatureForm(("L", "L"), tuple(
        tuple(curvature_value(conn, e[i], e[j]) for j in range(L.dim)) for i in range(L.dim)))


def extend_connection(triad: Triad, b_assignment: Sequence[Matrix]) -> Connection:
    """``nabla_l = nabla_bar(pr_A l) + sum_j (pr_B l)_j b_j``."""
    pair = triad.pair
    n = triad.n
    b_assignment = list(b_assignment)
    if len(b_assignment) != pair.dim_B or any(m.shape != (n, n) for m in b_assignment):
        raise DimensionError("b_assignment must hold dim B matrices of size n x n")
    mats = []
    for k in range(pair.dim_L):
        m = triad.nabla_bar(pair.pr_A.col(k))
        mats.append(m + lin_comb(pair.pr_B.col(k), b_assignment, (n, n)))
    return Connection(pair.L, n, mats)


def b_part(triad: Triad, conn: Connection) -> list[Matrix]:
    """``nabla o i_B``."""
    return conn.compose(triad.pair.i_B)


def extending_violation(triad: Triad, conn: Connection) -> int | None:
    if conn.algebra.dim != triad.pair.dim_L or conn.module_dim != triad.n:
        raise DimensionError("connection does not match the triad")
    for i, c in enumerate(triad.pair.i_A.columns()):
        if conn.at(c) != triad.E_rep.action[i]:
            return i
    return None


def require_extending(triad: Triad, conn: Connection) -> None:
    bad = extending_violation(triad, conn)
    if bad is not None:
        raise NotExtendingError(f"connection does not restrict to the A-action at a{bad + 1}", bad)


def atiyah_cocycle(triad: Triad, conn: Connection) -> CurvatureForm:
    """``R(a (x) b) = [nabla_a, nabla_{i_B b}] - nabla_{[a, i_B b]}`` on basis pairs."""
    require_extending(triad, conn)
    pair = triad.pair
    ia, ib = pair.i_A.columns(), pair.i_B.columns()
    return CurvatureForm(("A", "B"), tuple(
        tuple(curvature_value(conn, a, b) for b in ib) for a in ia))


def restricted_curvature(triad: Triad, conn: Connection, left: str, right: str) -> CurvatureForm:
    """Curvature on pairs drawn from the images of ``i_A``, ``i_B`` or all of L."""
    pair = triad.pair
    src = {"A": pair.i_A.columns(), "B": pair.i_B.columns(),
           "L": [pair.L.basis(i) for i in range(pair.dim_L)]}
    return CurvatureForm((left, right), tuple(
        tuple(curvature_value(conn, x, y) for y in src[right]) for x in src[left]))


def is_a_compatible(triad: Triad, conn: Connection) -> bool:
    return atiyah_cocycle(triad, conn).is_zero()


# the curvature-twisted algebra End(E) + L ------------------------------------
@dataclass(frozen=True)
class SplitAlgebroid:
    """``End(E) (+) L`` with the twisted bracket; basis E_pq row-major then L."""

    algebra: LieAlgebra
    connection: Connection

    @property
    def end_dim(self) -> int:
        return self.connection.module_dim ** 2

    def split(self, x: Sequence) -> tuple[Matrix, tuple]:
        n = self.connection.module_dim
        N = n * n
        return Matrix.from_flat(x[:N], n, n), tuple(x[N:])

    def join(self, phi: Matrix, l: Sequence) -> tuple:
        return tuple(phi.flat()) + tuple(l)


def twisted_bracket(conn: Connection, x: Sequence, y: Sequence, omega=None) -> tuple:
    """Bracket of ``phi1 (+) l1`` and ``phi2 (+) l2``.

    ``omega(l1, l2)`` replaces the curvature when given.  Any 2-form gives
    a skew bracket, and on triples from L its Jacobiator is minus the
    covariant derivative of ``omega``.
    """
    n = conn.module_dim
    N = n * n
    L = conn.algebra
    p1, l1 = Matrix.from_flat(x[:N], n, n), tuple(x[N:])
    p2, l2 = Matrix.from_flat(y[:N], n, n), tuple(y[N:])
    n1, n2 = conn.at(l1), conn.at(l2)
    w = curvature_value(conn, l1, l2) if omega is None else omega(l1, l2)
    phi = p1.commutator(p2) + n1.commutator(p2) - n2.commutator(p1) + w
    return tuple(phi.flat()) + L.bracket(l1, l2)


def build_split_atiyah(conn: Connection, omega=None) -> SplitAlgebroid:
    n = conn.module_dim
    dim = n * n + conn.algebra.dim
    names = [f"E{p + 1}{q + 1}" for p in range(n) for q in range(n)] + list(conn.algebra.names)
    alg = algebra_from_bracket(dim, lambda x, y: twisted_bracket(conn, x, y, omega), names)
    return SplitAlgebroid(alg, conn)


def jacobiator_table(alg: LieAlgebra) -> dict:
    """Nonzero Jacobiators on increasing basis triples."""
    out = {}
    n = alg.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                v = alg.jacobiator(alg.basis(i), alg.basis(j), alg.basis(k))
                if any(v):
                    out[(i, j, k)] = v
    return out


def end_action(conn: Connection) -> list[Matrix]:
    """``phi -> [nabla_l, phi]`` on flattened End(E), per basis vector."""
    return [commutator_matrix(m) for m in conn.assignment]


def two_form_cochain(conn: Connection, omega=None) -> tuple:
    L = conn.algebra
    n = conn.module_dim
    if omega is None:
        def omega(x, y):
            return curvature_value(conn, x, y)
    return cochain_from_table(L.dim, 2, n * n, lambda I: omega(L.basis(I[0]), L.basis(I[1])).flat())


def covariant_derivative_2form(conn: Connection, omega=None) -> dict:
    """``d^nabla omega`` on increasing triples, as End(E) matrices (default omega = R)."""
    L = conn.algebra
    n = conn.module_dim
    N = n * n
    if L.dim < 3:
        return {}
    d2 = ce_differential(L, end_action(conn), 2, N)
    vals = d2.apply(two_form_cochain(conn, omega))
    return {I: Matrix.from_flat(vals[t * N:(t + 1) * N], n, n)
            for t, I in enumerate(multi_indices(L.dim, 3))}


def bianchi(conn: Connection) -> dict:
    """The End(E)-valued 3-form ``d^nabla R`` on increasing triples."""
    return covariant_derivative_2form(conn)


def jacobi_bianchi_comparison(conn: Connection, omega=None) -> Report:
    """Compare the Jacobiator on pure L-triples with ``-d^nabla omega``.

    The two are computed independently; they must agree componentwise.
    With ``omega`` the curvature both sides vanish.
    """
    sa = build_split_atiyah(conn, omega)
    L = conn.algebra
    n = conn.module_dim
    N = n * n
    jac = jacobiator_table(sa.algebra)
    dw = covariant_derivative_2form(conn, omega)
    wit = []
    for I in multi_indices(L.dim, 3):
        key = tuple(N + i for i in I)
        j_end = Matrix.from_flat(jac.get(key, (Fraction(0),) * sa.algebra.dim)[:N], n, n)
        if j_end != -dw[I]:
            wit.append({"triple": list(I)})
    jacobi_zero = not jac
    bianchi_zero = all(m.is_zero() for m in dw.values())
    if omega is None:
        if not jacobi_zero:
            wit += [{"jacobi_triple": list(k)} for k in jac]
        if not bianchi_zero:
            wit += [{"bianchi_triple": list(I)} for I, m in dw.items() if not m.is_zero()]
    payload = {
        "jacobi_zero": jacobi_zero,
        "bianchi_zero": bianchi_zero,
        "componentwise_agree": not any("triple" in w for w in wit),
    }
    return Report.check("jacobi-bianchi", wit, payload)


def gl_times(conn: Connection) -> LieAlgebra:
    """The direct product ``gl(E) x L``."""
    return direct_product(LieAlgebra.gl(conn.module_dim), conn.algebra)


def split_iso_matrix(conn: Connection) -> Matrix:
    """``phi (+) l -> (phi + nabla_l, l)``."""
    n = conn.module_dim
    N = n * n
    m = conn.algebra.dim
    cols = []
    for k in range(N + m):
        x = basis_vector(N + m, k)
        phi, l = Matrix.from_flat(x[:N], n, n), x[N:]
        cols.append(tuple((phi + conn.at(l)).flat()) + l)
    return Matrix.from_columns(cols, nrows=N + m)


def split_iso_check(conn: Connection) -> Report:
    sa = build_split_atiyah(conn)
    f = split_iso_matrix(conn)
    bad = morphism_violations(f, sa.algebra, gl_times(conn))
    try:
        f.inverse()
        invertible = True
    except ValueError:
        invertible = False
    wit = [{"pair": list(p)} for p in bad]
    if not invertible:
        wit.append({"kind": "not invertible"})
    return Report.check("split-iso", wit, {"dim": sa.algebra.dim})


@dataclass(frozen=True)
class UniversalConstruction:
    split: SplitAlgebroid
    universal: Representation
    report: Report


def universal_construction(conn: Connection) -> UniversalConstruction:
    """Canonical flat action of ``End(E) (+) L`` on ``E`` and its pullback."""
    sa = build_split_atiyah(conn)
    n = conn.module_dim
    units = [Matrix.unit(n, n, p, q) for p in range(n) for q in range(n)]
    rep = Representation(sa.algebra, n, units + list(conn.assignment))
    wit = [{"kind": "flatness", "pair": list(p)} for p in rep.flatness_violations()]
    N = n * n
    for i in range(conn.algebra.dim):
        s_l = (Fraction(0),) * N + conn.algebra.basis(i)
        if rep.act(s_l) != conn.assignment[i]:
            wit.append({"kind": "naturality", "l": i})
    report = Report.check("universal", wit, {"dim": sa.algebra.dim, "flat": rep.is_flat()})
    return UniversalConstruction(sa, rep, report)
