"""Standard algebras, triads and random draws used by tests and selftest."""

from __future__ import annotations

import random
from fractions import Fraction

from .atiyah import Connection, Triad, extend_connection
from .lie import LieAlgebra, Representation, make_lie_pair
from .linalg import Matrix

NUMERATORS = range(-3, 4)
DENOMINATORS = (1, 2)


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(NUMERATORS), rng.choice(DENOMINATORS))


def random_matrix(rng: random.Random, nrows: int, ncols: int) -> Matrix:
    return Matrix([[random_rational(rng) for _ in range(ncols)] for _ in range(nrows)], ncols=ncols)


def sl2() -> LieAlgebra:
    """Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieAlgebra.from_brackets(
        3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}, ["h", "e", "f"]
    )


def sl2_standard() -> list[Matrix]:
    return [Matrix([[1, 0], [0, -1]]), Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])]


def borel_inclusion() -> Matrix:
    return Matrix([[1, 0], [0, 1], [0, 0]])


def two_dim() -> LieAlgebra:
    """Basis (x, y) with [x, y] = y."""
    return LieAlgebra.from_brackets(2, {(0, 1): (0, 1)}, ["x", "y"])


def heisenberg() -> LieAlgebra:
    """Basis (x, y, z) with [x, y] = z."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1)}, ["x", "y", "z"])


def so3() -> LieAlgebra:
    """Basis (e1, e2, e3) with [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2."""
    return LieAlgebra.from_brackets(
        3, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (2, 0): (0, 1, 0)}, ["e1", "e2", "e3"]
    )


def sl2_borel_triad(module: str = "standard") -> Triad:
    L = sl2()
    pair = make_lie_pair(L, borel_inclusion())
    if module == "standard":
        full = Representation(L, 2, sl2_standard())
    elif module == "adjoint":
        full = Representation.adjoint(L)
    else:
        raise ValueError(f"unknown module {module!r}")
    return Triad(pair, full.restrict(pair.i_A, pair.A))


def sl2_standard_connection() -> Connection:
    return Connection(sl2(), 2, sl2_standard())


def two_dim_triad(lam) -> Triad:
    pair = make_lie_pair(two_dim(), Matrix([[0], [1]]))
    return Triad(pair, Representation(pair.A, 1, [Matrix([[lam]])]))


def heisenberg_triad(nabla_z: Matrix) -> Triad:
    pair = make_lie_pair(heisenberg(), Matrix([[0], [0], [1]]))
    return Triad(pair, Representation(pair.A, nabla_z.nrows, [nabla_z]))


def degenerate_full_triad() -> Triad:
    """A = L for sl2 on the standard module; B = 0."""
    L = sl2()
    pair = make_lie_pair(L, Matrix.identity(3))
    return Triad(pair, Representation(L, 2, sl2_standard()).restrict(pair.i_A, pair.A))


def zero_sub_triad(n: int = 2) -> Triad:
    """A = 0 inside sl2; the A-action on E is empty."""
    pair = make_lie_pair(sl2(), Matrix.zeros(3, 0))
    return Triad(pair, Representation(pair.A, n, []))


def fixture_triads() -> dict[str, Triad]:
    """Named triads covering every family, in a fixed order."""
    return {
        "sl2-borel-standard": sl2_borel_triad("standard"),
        "sl2-borel-adjoint": sl2_borel_triad("adjoint"),
        "two-dim-lambda-1": two_dim_triad(1),
        "two-dim-lambda-0": two_dim_triad(0),
        "heisenberg-center": heisenberg_triad(Matrix([[1, 2], [0, -1]])),
        "sl2-full": degenerate_full_triad(),
        "sl2-zero-sub": zero_sub_triad(),
    }


def random_triad(rng: random.Random) -> tuple[str, Triad]:
    """Draw from the four randomized families."""
    kind = rng.randrange(4)
    if kind == 0:
        return "sl2-borel-standard", sl2_borel_triad("standard")
    if kind == 1:
        return "sl2-borel-adjoint", sl2_borel_triad("adjoint")
    if kind == 2:
        lam = rng.randint(-2, 2)
        return f"two-dim-lambda{lam}", two_dim_triad(lam)
    return "heisenberg-center", heisenberg_triad(random_matrix(rng, 2, 2))


def random_extending(triad: Triad, rng: random.Random) -> Connection:
    n = triad.n
    return extend_connection(triad, [random_matrix(rng, n, n) for _ in range(triad.pair.dim_B)])


def random_connection(L: LieAlgebra, n: int, rng: random.Random) -> Connection:
    return Connection(L, n, [random_matrix(rng, n, n) for _ in range(L.dim)])
