"""Invariant connections on homogeneous bundles via equivariant linear maps.

An invariant connection corresponds to a linear map ``phi: g -> k`` that
restricts to ``dphi`` on ``h`` and is ``h``-equivariant, with ``h`` acting on
``k`` through ``ad o dphi``.  Equivariance is infinitesimal, which matches
the group condition only for connected isotropy; every result says so.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lie import LieAlgebra, PairError, basis_vector, morphism_violations, pullback_algebra
from .linalg import AffineSolutionSet, DimensionError, Matrix, Subspace, kernel, rank, solve_affine
from .report import Report

CONNECTED_ISOTROPY = True


class WangError(ValueError):
    pass


@dataclass(frozen=True)
class WangProblem:
    g: LieAlgebra
    inclusion_h: Matrix
    k: LieAlgebra
    dphi: Matrix

    def __post_init__(self):
        if self.inclusion_h.nrows != self.g.dim:
            raise DimensionError("inclusion of h must land in g")
        if rank(self.inclusion_h) != self.inclusion_h.ncols:
            raise WangError("inclusion of h is not injective")
        if self.dphi.shape != (self.k.dim, self.inclusion_h.ncols):
            raise DimensionError("dphi must map h to k")
        bad = self.g.is_subalgebra(self.inclusion_h)
        if bad is not None:
            raise WangError(f"h is not a subalgebra of g: basis pair {bad}")
        bad = morphism_violations(self.dphi, self.h, self.k)
        if bad:
            raise WangError(f"dphi is not a Lie algebra morphism: basis pair {bad[0]}")

    @property
    def h(self) -> LieAlgebra:
        inc = self.inclusion_h
        left = _left_inverse(inc)
        return pullback_algebra(self.g, inc, left)


def _left_inverse(inc: Matrix) -> Matrix:
    """A matrix ``P`` with ``P inc = id`` (rows picked from a completion to a basis)."""
    n, m = inc.shape
    if m == 0:
        return Matrix.zeros(0, n)
    from .linalg import quotient_chart

    chart = quotient_chart(n, Subspace(n, inc))
    return Matrix.hstack(inc, chart.section).inverse().rows_slice(0, m)


@dataclass(frozen=True)
class WangSolution:
    problem: WangProblem
    solutions: AffineSolutionSet
    connected_isotropy_assumption: bool = CONNECTED_ISOTROPY

    @property
    def empty(self) -> bool:
        return self.solutions.empty

    @property
    def dim(self) -> int | None:
        return self.solutions.dim

    def as_matrix(self, vec) -> Matrix:
        return Matrix.from_flat(vec, self.problem.k.dim, self.problem.g.dim)

    def particular(self) -> Matrix | None:
        return None if self.empty else self.as_matrix(self.solutions.particular)

    def homogeneous(self) -> list[Matrix]:
        return [self.as_matrix(v) for v in self.solutions.homogeneous.vectors()]

    def contains(self, phi: Matrix) -> bool:
        return self.solutions.contains(phi.flat())


def wang_constraint_violations(p: WangProblem, phi: Matrix) -> list[dict]:
    """Re-check both constraint families on a candidate map."""
    out = []
    if phi @ p.inclusion_h != p.dphi:
        out.append({"kind": "restriction"})
    for y, Y in enumerate(p.inclusion_h.columns()):
        adk = p.k.ad(p.dphi.col(y))
        for x in range(p.g.dim):
            X = p.g.basis(x)
            if phi.apply(p.g.bracket(Y, X)) != adk.apply(phi.col(x)):
                out.append({"kind": "equivariance", "h": y, "g": x})
    return out


def wang_system(p: WangProblem) -> tuple[Matrix, tuple]:
    """Linear system in the row-major entries of ``phi``."""
    g, k = p.g, p.k
    unknowns = k.dim * g.dim
    rows_per = []
    rhs = []
    units = [Matrix.from_flat(basis_vector(unknowns, u), k.dim, g.dim) for u in range(unknowns)]
    hcols = p.inclusion_h.columns()
    for y, Y in enumerate(hcols):
        for r in range(k.dim):
            rows_per.append([u.apply(Y)[r] for u in units])
            rhs.append(p.dphi[r, y])
    for y, Y in enumerate(hcols):
        adk = p.k.ad(p.dphi.col(y))
        for x in range(g.dim):
            bx = g.bracket(Y, g.basis(x))
            for r in range(k.dim):
                rows_per.append([u.apply(bx)[r] - adk.apply(u.col(x))[r] for u in units])
                rhs.append(Fraction(0))
    M = Matrix(rows_per, ncols=unknowns) if rows_per else Matrix.zeros(0, unknowns)
    return M, tuple(rhs)


def wang_solve(p: WangProblem) -> WangSolution:
    M, rhs = wang_system(p)
    sol = WangSolution(p, solve_affine(M, rhs))
    if not sol.empty:
        for phi in [sol.particular()] + [sol.particular() + h for h in sol.homogeneous()]:
            if wang_constraint_violations(p, phi):
                raise WangError("solver returned a map violating the constraints")
    return sol


def reductive_problem(g: LieAlgebra, inclusion_h: Matrix) -> WangProblem:
    m = inclusion_h.ncols
    h = pullback_algebra(g, inclusion_h, _left_inverse(inclusion_h))
    return WangProblem(g, inclusion_h, h, Matrix.identity(m))


@dataclass(frozen=True)
class ReductiveResult:
    solution: WangSolution
    phi0: Matrix | None
    complement: Subspace | None
    invariant: bool | None

    @property
    def reductive(self) -> bool:
        return not self.solution.empty


def reductive_test(g: LieAlgebra, inclusion_h: Matrix) -> ReductiveResult:
    """Projections ``g -> h`` fixing ``h``; a particular one yields ``m = ker``."""
    sol = wang_solve(reductive_problem(g, inclusion_h))
    if sol.empty:
        return ReductiveResult(sol, None, None, None)
    phi0 = sol.particular()
    m = kernel(phi0)
    invariant = all(m.contains(g.bracket(Y, X)) for Y in inclusion_h.columns() for X in m.vectors())
    if not invariant:
        raise WangError("kernel of an equivariant projection is not h-invariant")
    return ReductiveResult(sol, phi0, m, invariant)


def canonical_connection(p: WangProblem, phi0: Matrix) -> Matrix:
    """``dphi o phi0`` for an equivariant projection ``phi0: g -> h``."""
    base = wang_solve(reductive_problem(p.g, p.inclusion_h))
    if base.empty or phi0.shape != (p.inclusion_h.ncols, p.g.dim) or not base.contains(phi0):
        raise WangError("phi0 is not an equivariant projection onto h")
    can = p.dphi @ phi0
    if wang_constraint_violations(p, can):
        raise WangError("canonical connection violates the constraints")
    return can


def equivariant_hom_dim(p: WangProblem, m: Subspace) -> int:
    """Dimension of h-equivariant maps ``m -> k``, solved in m-coordinates."""
    g, k = p.g, p.k
    d = m.dim
    mb = m.basis
    unknowns = k.dim * d
    units = [Matrix.from_flat(basis_vector(unknowns, u), k.dim, d) for u in range(unknowns)]
    rows = []
    for y, Y in enumerate(p.inclusion_h.columns()):
        adk = k.ad(p.dphi.col(y))
        for x, X in enumerate(mb.columns()):
            coords = solve_affine(mb, g.bracket(Y, X))
            if coords.empty:
                raise WangError("complement is not h-invariant")
            for r in range(k.dim):
                rows.append([u.apply(coords.particular)[r] - adk.apply(u.col(x))[r] for u in units])
    M = Matrix(rows, ncols=unknowns) if rows else Matrix.zeros(0, unknowns)
    return unknowns - rank(M)


def wang_dimension_check(p: WangProblem) -> Report:
    red = reductive_test(p.g, p.inclusion_h)
    if not red.reductive:
        return Report("wang-dimension", "obstruction",
                      {"reductive": False, "connected_isotropy_assumption": CONNECTED_ISOTROPY})
    sol = wang_solve(p)
    hom = equivariant_hom_dim(p, red.complement)
    wit = []
    if sol.empty or sol.dim != hom:
        wit.append({"wang_dim": sol.dim, "equivariant_hom_dim": hom})
    return Report.check("wang-dimension", wit, {
        "reductive": True, "wang_dim": sol.dim, "equivariant_hom_dim": hom,
        "connected_isotropy_assumption": CONNECTED_ISOTROPY})


__all__ = [
    "WangProblem", "WangSolution", "WangError", "ReductiveResult", "wang_solve", "reductive_test",
    "reductive_problem", "canonical_connection", "wang_dimension_check", "equivariant_hom_dim",
    "wang_constraint_violations", "PairError",
]
