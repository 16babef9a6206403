"""Chevalley-Eilenberg cohomology and the Atiyah class of a triad.

The class lives in degree one with coefficients in ``B^* (x) End(E)``.
That module is the dual Bott action tensored with the commutator action
on ``End(E)``, so ``(a . theta)(b) = [nabla_bar_a, theta(b)] - theta(D_a b)``.
A 0-cochain ``theta`` is flattened as ``j * n^2 + p * n + q``; a 1-cochain
adds the A-index in front, matching :meth:`CurvatureForm.as_cochain`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atiyah import (
    Connection,
    CurvatureForm,
    Triad,
    atiyah_cocycle,
    b_part,
    extend_connection,
    is_a_compatible,
    require_extending,
)
from .cochains import ce_differential, cochain_dim
from .lie import Representation, bott_connection
from .linalg import AffineSolutionSet, Matrix, rank, solve_affine
from .report import Report

MAX_DEGREE = 3


class InternalError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class CEComplex:
    rep: Representation
    cochain_dims: tuple[int, ...]
    differentials: tuple[Matrix, ...]

    def d(self, k: int) -> Matrix:
        return self.differentials[k]


def ce_complex(rep: Representation) -> CEComplex:
    """Cochains in degrees 0..3 and differentials ``d_0 .. d_3``.

    ``d_3`` lands in degree 4 and exists only so that ``d_3 d_2 = 0`` can be
    checked.  A non-flat action is refused.
    """
    rep.require_flat()
    m, v = rep.algebra.dim, rep.module_dim
    dims = tuple(cochain_dim(m, k, v) for k in range(MAX_DEGREE + 1))
    ds = tuple(ce_differential(rep.algebra, rep.action, k, v) for k in range(MAX_DEGREE + 1))
    return CEComplex(rep, dims, ds)


def d_squared_violations(cx: CEComplex) -> list[int]:
    return [k for k in range(MAX_DEGREE) if not (cx.d(k + 1) @ cx.d(k)).is_zero()]


def _check_degree(k: int) -> None:
    if not 0 <= k <= 2:
        raise ValueError("degree must be 0, 1 or 2")


def cohomology_dim(cx: CEComplex, k: int) -> int:
    _check_degree(k)
    ker = cx.cochain_dims[k] - rank(cx.d(k))
    im = rank(cx.d(k - 1)) if k else 0
    return ker - im


def is_cocycle(cx: CEComplex, k: int, omega: Sequence) -> bool:
    _check_degree(k)
    return not any(cx.d(k).apply(tuple(omega)))


def coboundary_witness(cx: CEComplex, k: int, omega: Sequence) -> AffineSolutionSet:
    """All ``s`` with ``d_{k-1} s = omega``; in degree 0 only ``omega = 0`` qualifies."""
    _check_degree(k)
    if not is_cocycle(cx, k, omega):
        raise ValueError(f"not a {k}-cocycle")
    if k == 0:
        return solve_affine(Matrix.zeros(cx.cochain_dims[0], 0), tuple(omega))
    return solve_affine(cx.d(k - 1), tuple(omega))


def coefficient_module(triad: Triad) -> Representation:
    """``B^* (x) End(E)`` as an A-module."""
    bott = bott_connection(triad.pair)
    rep = bott.dual().tensor(triad.E_rep.end_commutator())
    rep.require_flat("coefficient module")
    return rep


def b_assignment_vector(mats: Sequence[Matrix]) -> tuple[Fraction, ...]:
    return tuple(x for m in mats for x in m.flat())


def b_assignment_from_vector(vec: Sequence, dim_B: int, n: int) -> list[Matrix]:
    N = n * n
    return [Matrix.from_flat(vec[j * N:(j + 1) * N], n, n) for j in range(dim_B)]


@dataclass(frozen=True)
class AtiyahClassResult:
    cocycle: CurvatureForm
    is_cocycle: bool
    vanishes: bool
    witness: AffineSolutionSet
    h0_dim: int
    h1_dim: int
    ranks: dict

    def compatible_b_assignment(self, dim_B: int, n: int) -> list[Matrix] | None:
        """``-s`` for the particular witness ``s``; it gives an A-compatible extension."""
        if not self.vanishes:
            return None
        return b_assignment_from_vector([-x for x in self.witness.particular], dim_B, n)


def atiyah_class(triad: Triad) -> AtiyahClassResult:
    pair = triad.pair
    n = triad.n
    conn = extend_connection(triad, [Matrix.zeros(n, n)] * pair.dim_B)
    form = atiyah_cocycle(triad, conn)
    cx = ce_complex(coefficient_module(triad))
    omega = form.as_cochain()
    closed = is_cocycle(cx, 1, omega)
    if not closed:
        raise InternalError("Atiyah cocycle is not closed")
    sol = solve_affine(cx.d(0), omega)
    ranks = {
        "rank_d0": rank(cx.d(0)),
        "rank_d0_augmented": rank(Matrix.hstack(cx.d(0), Matrix.column(omega))) if omega else 0,
    }
    return AtiyahClassResult(form, closed, not sol.empty, sol,
                             cohomology_dim(cx, 0), cohomology_dim(cx, 1), ranks)


def connection_shift_check(triad: Triad, conn: Connection, conn2: Connection) -> Report:
    """``R'_{A(x)B} - R_{A(x)B} = d_A((nabla' - nabla) o i_B)``."""
    require_extending(triad, conn)
    require_extending(triad, conn2)
    lhs = atiyah_cocycle(triad, conn2).as_cochain()
    base = atiyah_cocycle(triad, conn).as_cochain()
    diff = tuple(x - y for x, y in zip(lhs, base))
    theta = tuple(x - y for x, y in zip(b_assignment_vector(b_part(triad, conn2)),
                                         b_assignment_vector(b_part(triad, conn))))
    d0 = ce_complex(coefficient_module(triad)).d(0)
    rhs = d0.apply(theta)
    wit = [{"index": i} for i, (a, b) in enumerate(zip(diff, rhs)) if a != b]
    return Report.check("connection-shift", wit, {"cochain_dim": len(diff)})


def compatible_connection_solve(triad: Triad) -> AffineSolutionSet:
    """All b_assignments whose extension has vanishing Atiyah cocycle.

    The system is assembled by evaluating the (affine) cocycle map at zero
    and at each unit vector, independently of the coefficient complex.
    The results are then cross-checked against that complex.
    """
    pair = triad.pair
    n = triad.n
    unknowns = pair.dim_B * n * n

    def cocycle_of(vec):
        conn = extend_connection(triad, b_assignment_from_vector(vec, pair.dim_B, n))
        return atiyah_cocycle(triad, conn).as_cochain()

    c0 = cocycle_of((Fraction(0),) * unknowns)
    cols = []
    for k in range(unknowns):
        e = tuple(Fraction(int(i == k)) for i in range(unknowns))
        cols.append(tuple(x - y for x, y in zip(cocycle_of(e), c0)))
    M = Matrix.from_columns(cols, nrows=len(c0)) if cols else Matrix.zeros(len(c0), 0)
    sol = solve_affine(M, tuple(-x for x in c0))
    cls = atiyah_class(triad)
    if sol.empty == cls.vanishes:
        raise InternalError("solver and Atiyah class disagree on solvability")
    if not sol.empty:
        if sol.dim != cls.h0_dim:
            raise InternalError("solution dimension differs from dim H^0 of the coefficient module")
        for vec in [sol.particular] + [sol.element([int(i == k) for i in range(sol.dim)])
                                        for k in range(sol.dim)]:
            conn = extend_connection(triad, b_assignment_from_vector(vec, pair.dim_B, n))
            if not is_a_compatible(triad, conn):
                raise InternalError("solver returned an incompatible connection")
    return sol
