"""Lie algebras as Lie algebroids over a point.

Over a point the anchor is the zero map, sections are vectors and the
Leibniz rule is empty, so a Lie algebroid is just a Lie algebra given by
structure constants.  This module holds algebras, representations, Lie
pairs and the Bott connection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import (
    DimensionError,
    Matrix,
    QuotientChart,
    kernel,
    quotient_chart,
    rank,
    to_scalar,
    Subspace,
)
from .report import Report

Vector = tuple

ZERO = Fraction(0)


def _vec(values, n: int) -> tuple[Fraction, ...]:
    v = tuple(to_scalar(x) for x in values)
    if len(v) != n:
        raise DimensionError(f"expected a vector of length {n}, got {len(v)}")
    return v


def basis_vector(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1) if k == i else ZERO for k in range(n))


def lin_comb(coeffs: Sequence[Fraction], mats: Sequence[Matrix], shape: tuple[int, int]) -> Matrix:
    """``sum_i coeffs[i] * mats[i]`` with an explicit result shape."""
    out = Matrix.zeros(*shape)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


def map_matrix(fn, dom_dim: int, cod_dim: int) -> Matrix:
    """Matrix of a linear map given as a function on coordinate tuples."""
    cols = [fn(basis_vector(dom_dim, i)) for i in range(dom_dim)]
    return Matrix.from_columns(cols, nrows=cod_dim)


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants.

    ``consts[i][j]`` is the coordinate vector of ``[e_i, e_j]``.  The anchor
    is recorded as zero; construction checks only shapes, use
    :meth:`validate` for antisymmetry and Jacobi.
    """

    anchor = "zero"

    def __init__(self, consts, names: Sequence[str] | None = None):
        n = len(consts)
        table = []
        for i, row in enumerate(consts):
            if len(row) != n:
                raise DimensionError(f"structure constant row {i} has length {len(row)}, expected {n}")
            table.append(tuple(_vec(v, n) for v in row))
        self.dim = n
        self.consts: tuple[tuple[tuple[Fraction, ...], ...], ...] = tuple(table)
        if names is None:
            names = [f"e{i + 1}" for i in range(n)]
        if len(names) != n:
            raise DimensionError("wrong number of basis names")
        self.names = tuple(names)
        self._ad = None

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, names=None, antisymmetrize: bool = True) -> "LieAlgebra":
        """Build from ``{(i, j): vector}``; missing entries are zero.

        With ``antisymmetrize`` the entry for ``(j, i)`` is filled in as the
        negative of ``(i, j)`` whenever it is not given explicitly.
        """
        table = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        given = set()
        for (i, j), v in brackets.items():
            table[i][j] = list(_vec(v, dim))
            given.add((i, j))
        if antisymmetrize:
            for (i, j) in list(given):
                if (j, i) not in given:
                    table[j][i] = [-x for x in table[i][j]]
        return cls(table, names)

    @classmethod
    def abelian(cls, dim: int, names=None) -> "LieAlgebra":
        return cls([[[ZERO] * dim for _ in range(dim)] for _ in range(dim)], names)

    @classmethod
    def gl(cls, n: int) -> "LieAlgebra":
        """gl(n) in the basis of matrix units E_pq, row-major."""
        N = n * n
        table = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
        for p in range(n):
            for q in range(n):
                for r in range(n):
                    for s in range(n):
                        v = table[p * n + q][r * n + s]
                        if q == r:
                            v[p * n + s] += 1
                        if s == p:
                            v[r * n + q] -= 1
        names = [f"E{p + 1}{q + 1}" for p in range(n) for q in range(n)]
        return cls(table, names)

    # brackets -----------------------------------------------------------
    def bracket(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        n = self.dim
        out = [ZERO] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.consts[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, v in enumerate(row[j]):
                    if v:
                        out[k] += c * v
        return tuple(out)

    def ad_basis(self, i: int) -> Matrix:
        if self._ad is None:
            self._ad = tuple(
                Matrix.from_columns([self.consts[a][b] for b in range(self.dim)], nrows=self.dim)
                for a in range(self.dim)
            )
        return self._ad[i]

    def ad(self, x: Sequence) -> Matrix:
        return lin_comb(x, [self.ad_basis(i) for i in range(self.dim)], (self.dim, self.dim))

    def basis(self, i: int) -> tuple[Fraction, ...]:
        return basis_vector(self.dim, i)

    # checks -------------------------------------------------------------
    def antisymmetry_violations(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.dim)
            for j in range(i, self.dim)
            if any(a + b for a, b in zip(self.consts[i][j], self.consts[j][i]))
        ]

    def jacobiator(self, x, y, z) -> tuple[Fraction, ...]:
        b = self.bracket
        t1, t2, t3 = b(b(x, y), z), b(b(y, z), x), b(b(z, x), y)
        return tuple(p + q + r for p, q, r in zip(t1, t2, t3))

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        out = []
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if any(self.jacobiator(self.basis(i), self.basis(j), self.basis(k))):
                        out.append((i, j, k))
        return out

    def validate(self) -> Report:
        anti = self.antisymmetry_violations()
        # Jacobi over i<j<k suffices only once antisymmetry holds
        if anti:
            jac = [
                (i, j, k)
                for i in range(self.dim) for j in range(self.dim) for k in range(self.dim)
                if any(self.jacobiator(self.basis(i), self.basis(j), self.basis(k)))
            ]
        else:
            jac = self.jacobi_violations()
        witnesses = [{"kind": "antisymmetry", "pair": list(p)} for p in anti]
        witnesses += [{"kind": "jacobi", "triple": list(t)} for t in jac]
        return Report.check("validate", witnesses, {"dim": self.dim, "anchor": "zero",
                                                    "leibniz": "vacuous over a point"})

    def is_valid(self) -> bool:
        return self.validate().ok

    def is_subalgebra(self, inclusion: Matrix) -> tuple[int, int] | None:
        """``None`` if the column span is bracket-closed, else a witness pair."""
        sub = Subspace(self.dim, inclusion) if rank(inclusion) == inclusion.ncols else None
        if sub is None:
            raise ValueError("inclusion is not injective")
        cols = inclusion.columns()
        for i in range(len(cols)):
            for j in range(i + 1, len(cols)):
                if not sub.contains(self.bracket(cols[i], cols[j])):
                    return (i, j)
        return None

    def structure_tensor(self) -> list:
        return [[list(v) for v in row] for row in self.consts]

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.consts == other.consts

    __hash__ = None

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, names={list(self.names)})"

    def to_json_data(self) -> dict:
        triples = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k, v in enumerate(self.consts[i][j]):
                    if v:
                        triples.append([i, j, k, str(v)])
        return {"dim": self.dim, "names": list(self.names), "brackets": triples}


def direct_product(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    n = g.dim + h.dim
    table = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(g.dim):
        for j in range(g.dim):
            table[i][j][: g.dim] = g.consts[i][j]
    for i in range(h.dim):
        for j in range(h.dim):
            table[g.dim + i][g.dim + j][g.dim:] = h.consts[i][j]
    return LieAlgebra(table, list(g.names) + list(h.names))


def algebra_from_bracket(dim: int, bracket, names=None) -> LieAlgebra:
    """Structure constants of a bilinear bracket given as a function."""
    return LieAlgebra(
        [[bracket(basis_vector(dim, i), basis_vector(dim, j)) for j in range(dim)] for i in range(dim)],
        names,
    )


def morphism_violations(f: Matrix, src: LieAlgebra, dst: LieAlgebra) -> list[tuple[int, int]]:
    """Basis pairs where ``f[x, y] != [f x, f y]``."""
    if f.shape != (dst.dim, src.dim):
        raise DimensionError("morphism matrix has the wrong shape")
    out = []
    for i in range(src.dim):
        for j in range(i + 1, src.dim):
            lhs = f.apply(src.consts[i][j])
            rhs = dst.bracket(f.col(i), f.col(j))
            if lhs != rhs:
                out.append((i, j))
    return out


def is_lie_morphism(f: Matrix, src: LieAlgebra, dst: LieAlgebra) -> bool:
    return not morphism_violations(f, src, dst)


def pullback_algebra(L: LieAlgebra, inclusion: Matrix, left_inverse: Matrix,
                     prefix: str = "e") -> LieAlgebra:
    """Induced structure on the column span of ``inclusion``."""
    m = inclusion.ncols
    cols = inclusion.columns()
    table = [[left_inverse.apply(L.bracket(cols[i], cols[j])) for j in range(m)] for i in range(m)]
    return LieAlgebra(table, [f"{prefix}{i + 1}" for i in range(m)])


# representations -----------------------------------------------------------
class Representation:
    """A Lie algebra acting on ``Q^module_dim`` via one matrix per basis vector.

    Construction does not demand flatness; :meth:`flatness_violations`
    reports it, and :meth:`require_flat` raises.
    """

    def __init__(self, algebra: LieAlgebra, module_dim: int, action: Sequence[Matrix]):
        action = tuple(action)
        if len(action) != algebra.dim:
            raise DimensionError(f"{len(action)} action matrices for a {algebra.dim}-dim algebra")
        for m in action:
            if m.shape != (module_dim, module_dim):
                raise DimensionError("action matrix has the wrong shape")
        self.algebra = algebra
        self.module_dim = module_dim
        self.action = action

    def act(self, x: Sequence) -> Matrix:
        n = self.module_dim
        return lin_comb(x, self.action, (n, n))

    def flatness_violations(self) -> list[tuple[int, int]]:
        out = []
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self.act(g.consts[i][j])
                rhs = self.action[i].commutator(self.action[j])
                if lhs != rhs:
                    out.append((i, j))
        return out

    def is_flat(self) -> bool:
        return not self.flatness_violations()

    def require_flat(self, what: str = "representation") -> None:
        bad = self.flatness_violations()
        if bad:
            raise NotFlatError(f"{what} is not flat; first failing basis pair {bad[0]}", bad)

    # constructions ---------------------------------------------------------
    @classmethod
    def trivial(cls, algebra: LieAlgebra, module_dim: int) -> "Representation":
        return cls(algebra, module_dim, [Matrix.zeros(module_dim, module_dim)] * algebra.dim)

    @classmethod
    def adjoint(cls, algebra: LieAlgebra) -> "Representation":
        return cls(algebra, algebra.dim, [algebra.ad_basis(i) for i in range(algebra.dim)])

    def dual(self) -> "Representation":
        return Representation(self.algebra, self.module_dim, [-m.T for m in self.action])

    def tensor(self, other: "Representation") -> "Representation":
        """``V (x) W`` with coordinate index ``i * dim W + j``."""
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ValueError("tensor factors must represent the same algebra")
        iv, iw = Matrix.identity(self.module_dim), Matrix.identity(other.module_dim)
        return Representation(
            self.algebra,
            self.module_dim * other.module_dim,
            [kron(a, iw) + kron(iv, b) for a, b in zip(self.action, other.action)],
        )

    def end_commutator(self) -> "Representation":
        """``End(V)`` with ``x . phi = [rho(x), phi]``, matrix units row-major."""
        n = self.module_dim
        return Representation(self.algebra, n * n, [commutator_matrix(m) for m in self.action])

    def restrict(self, inclusion: Matrix, sub: LieAlgebra) -> "Representation":
        return Representation(sub, self.module_dim, [self.act(c) for c in inclusion.columns()])

    def __repr__(self) -> str:
        return f"Representation(algebra dim={self.algebra.dim}, module_dim={self.module_dim})"


class NotFlatError(ValueError):
    def __init__(self, msg: str, witnesses=()):
        super().__init__(msg)
        self.witnesses = list(witnesses)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([x * y for x in ra for y in rb])
    return Matrix(rows, ncols=a.ncols * b.ncols)


def flatten_matrix(m: Matrix) -> tuple[Fraction, ...]:
    return m.flat()


def unflatten(v: Sequence, n: int) -> Matrix:
    return Matrix.from_flat(v, n, n)


def commutator_matrix(x: Matrix) -> Matrix:
    """Matrix of ``phi -> [x, phi]`` on row-major flattened ``phi``."""
    n = x.nrows
    ident = Matrix.identity(n)
    # vec_row(x phi) = (x kron I) vec, vec_row(phi x) = (I kron x^T) vec
    return kron(x, ident) - kron(ident, x.T)


# Lie pairs -------------------------------------------------------------------
class PairError(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class LiePair:
    """A Lie algebra ``L`` with a subalgebra ``A`` and a splitting of ``L -> B``.

    ``i_A`` (dim L x dim A), ``i_B = chart.section``, ``pr_B = chart.projection``
    and ``pr_A`` satisfy ``i_A pr_A + i_B pr_B = id``.
    """

    L: LieAlgebra
    i_A: Matrix
    chart: QuotientChart
    pr_A: Matrix
    A: LieAlgebra = field(compare=False)

    @property
    def i_B(self) -> Matrix:
        return self.chart.section

    @property
    def pr_B(self) -> Matrix:
        return self.chart.projection

    @property
    def dim_A(self) -> int:
        return self.i_A.ncols

    @property
    def dim_B(self) -> int:
        return self.chart.quotient_dim

    @property
    def dim_L(self) -> int:
        return self.L.dim

    def with_splitting(self, i_B: Matrix) -> "LiePair":
        """Same pair with another right splitting ``i_B`` of ``pr_B``."""
        if i_B.shape != (self.dim_L, self.dim_B):
            raise DimensionError("splitting has the wrong shape")
        if self.pr_B @ i_B != Matrix.identity(self.dim_B):
            raise PairError("pr_B o i_B is not the identity: not a splitting")
        return make_lie_pair(self.L, self.i_A, i_B)

    def splitting_identity_holds(self) -> bool:
        return self.i_A @ self.pr_A + self.i_B @ self.pr_B == Matrix.identity(self.dim_L)


def make_lie_pair(L: LieAlgebra, inclusion_A: Matrix, i_B: Matrix | None = None) -> LiePair:
    """Lie pair ``(L, A)`` with ``A`` the column span of ``inclusion_A``.

    ``i_B`` defaults to the deterministic complement of :func:`quotient_chart`.
    """
    if inclusion_A.nrows != L.dim:
        raise DimensionError("inclusion does not land in L")
    if rank(inclusion_A) != inclusion_A.ncols:
        raise PairError("inclusion_A is not injective")
    sub = Subspace(L.dim, inclusion_A)
    cols = inclusion_A.columns()
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            if not sub.contains(L.bracket(cols[i], cols[j])):
                raise PairError(
                    f"A is not closed under the bracket: [a{i + 1}, a{j + 1}] leaves A", (i, j)
                )
    chart = quotient_chart(L.dim, sub, i_B)
    full_inv = Matrix.hstack(inclusion_A, chart.section).inverse()
    pr_A = full_inv.rows_slice(0, inclusion_A.ncols)
    A = pullback_algebra(L, inclusion_A, pr_A, "a")
    pair = LiePair(L, inclusion_A, chart, pr_A, A)
    return pair


def bott_connection(pair: LiePair) -> Representation:
    """Flat A-action on B: ``D_a b = pr_B [i_A a, i_B b]``."""
    L = pair.L
    acts = []
    for a in pair.i_A.columns():
        acts.append(pair.pr_B @ L.ad(a) @ pair.i_B)
    rep = Representation(pair.A, pair.dim_B, acts)
    rep.require_flat("Bott connection")
    return rep


def eth(pair: LiePair, b: Sequence, a: Sequence) -> tuple[Fraction, ...]:
    """``pr_A [i_B b, i_A a]``."""
    b = _vec(b, pair.dim_B)
    a = _vec(a, pair.dim_A)
    return pair.pr_A.apply(pair.L.bracket(pair.i_B.apply(b), pair.i_A.apply(a)))


def eth_matrix(pair: LiePair, j: int) -> Matrix:
    """Matrix of ``a -> eth(b_j, a)`` on A."""
    return map_matrix(lambda a: eth(pair, basis_vector(pair.dim_B, j), a), pair.dim_A, pair.dim_A)


def bracket_decomposition_check(pair: LiePair) -> Report:
    D = bott_connection(pair)
    wit = []
    for i in range(pair.dim_A):
        a = basis_vector(pair.dim_A, i)
        for j in range(pair.dim_B):
            b = basis_vector(pair.dim_B, j)
            lhs = pair.L.bracket(pair.i_A.col(i), pair.i_B.col(j))
            Dab = D.action[i].apply(b)
            rhs_b = pair.i_B.apply(Dab)
            rhs_a = pair.i_A.apply(eth(pair, b, a))
            rhs = tuple(x - y for x, y in zip(rhs_b, rhs_a))
            if lhs != rhs:
                wit.append({"a": i, "b": j})
    return Report.check("bracket-decomposition", wit, {"dim_A": pair.dim_A, "dim_B": pair.dim_B})


def splitting_difference(pair: LiePair, alternative_i_B: Matrix) -> Matrix:
    """``I`` with ``alternative = i_B + i_A I``."""
    if alternative_i_B.shape != pair.i_B.shape:
        raise DimensionError("alternative splitting has the wrong shape")
    if pair.pr_B @ alternative_i_B != Matrix.identity(pair.dim_B):
        raise PairError("alternative is not a right splitting of pr_B")
    diff = alternative_i_B - pair.i_B
    I = pair.pr_A @ diff
    assert pair.i_A @ I == diff
    return I


def complement_check(L: LieAlgebra, inc_A: Matrix, inc_B: Matrix) -> None:
    """Raise unless the two column spans are complementary subspaces."""
    if inc_A.ncols + inc_B.ncols != L.dim or rank(Matrix.hstack(inc_A, inc_B)) != L.dim:
        raise PairError("subspaces are not complementary")


__all__ = [
    "LieAlgebra",
    "Representation",
    "LiePair",
    "PairError",
    "NotFlatError",
    "make_lie_pair",
    "bott_connection",
    "eth",
    "eth_matrix",
    "bracket_decomposition_check",
    "splitting_difference",
    "direct_product",
    "algebra_from_bracket",
    "is_lie_morphism",
    "morphism_violations",
    "kron",
    "commutator_matrix",
    "basis_vector",
    "lin_comb",
    "map_matrix",
    "kernel",
]
