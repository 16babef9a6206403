"""Randomized property suites, one per acceptance criterion.

Every function takes a seed and returns a :class:`Report`; nothing here
reads the clock, so equal seeds give byte-identical output.
"""

from __future__ import annotations

import random

from .atiyah import (
    Connection,
    atiyah_cocycle,
    extend_connection,
    is_a_compatible,
    jacobi_bianchi_comparison,
    split_iso_check,
    universal_construction,
)
from .cohomology import (
    atiyah_class,
    b_assignment_from_vector,
    b_assignment_vector,
    ce_complex,
    coefficient_module,
    cohomology_dim,
    compatible_connection_solve,
    connection_shift_check,
    is_cocycle,
)
from .extension import extension_report, hexagon_diagnostics
from .fixtures import (
    borel_inclusion,
    fixture_triads,
    random_connection,
    random_extending,
    random_matrix,
    random_triad,
    sl2,
    sl2_borel_triad,
    sl2_standard,
    so3,
    two_dim,
    two_dim_triad,
)
from .homogeneous import WangProblem, reductive_problem, reductive_test, wang_dimension_check, wang_solve
from .lie import LieAlgebra, Representation, make_lie_pair
from .linalg import Matrix, rank
from .matched import (
    MatchedPair,
    build_matched_sum,
    check_matched,
    derivation_algebra,
    derivation_system,
    matched_atiyah_decomposition,
    matched_curvature_split,
    recognize_matched,
)
from .report import Report
from .atiyah import Triad

TRIALS = 100
MATCHED_TRIALS = 20


def _rng(seed: int, salt: int) -> random.Random:
    return random.Random(seed * 1000 + salt)


def cocycle_closedness(seed: int, trials: int = TRIALS) -> Report:
    rng = _rng(seed, 1)
    wit, families = [], {}
    modules = {}
    for t in range(trials):
        name, triad = random_triad(rng)
        conn = random_extending(triad, rng)
        key = (name, tuple(triad.E_rep.action))
        if key not in modules:
            modules[key] = ce_complex(coefficient_module(triad))
        if not is_cocycle(modules[key], 1, atiyah_cocycle(triad, conn).as_cochain()):
            wit.append({"trial": t, "family": name})
        families[name.split("-lambda")[0]] = families.get(name.split("-lambda")[0], 0) + 1
    return Report.check("1-cocycle-closedness", wit, {"trials": trials, "families": families}, seed=seed)


def connection_independence(seed: int, trials: int = TRIALS) -> Report:
    rng = _rng(seed, 2)
    wit = []
    for t in range(trials):
        name, triad = random_triad(rng)
        r = connection_shift_check(triad, random_extending(triad, rng), random_extending(triad, rng))
        if not r.ok:
            wit.append({"trial": t, "family": name})
    return Report.check("2-connection-independence", wit, {"trials": trials}, seed=seed)


def _omega_2form(rng: random.Random, L: LieAlgebra, n: int):
    vals = {(i, j): random_matrix(rng, n, n) for i in range(L.dim) for j in range(i + 1, L.dim)}

    def omega(x, y):
        out = Matrix.zeros(n, n)
        for (i, j), m in vals.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                out = out + m.scale(c)
        return out
    return omega


def jacobi_bianchi(seed: int, trials: int = TRIALS) -> Report:
    rng = _rng(seed, 3)
    L = sl2()
    wit = []
    generic_ok = 0
    for t in range(trials):
        conn = random_connection(L, 2, rng)
        r = jacobi_bianchi_comparison(conn)
        if not r.ok:
            wit.append({"trial": t})
        # a random 2-form in place of the curvature: the two sides must still agree
        g = jacobi_bianchi_comparison(conn, _omega_2form(rng, L, 2))
        if g.payload["componentwise_agree"]:
            generic_ok += 1
        else:
            wit.append({"trial": t, "generic_form": True})
    return Report.check("3-jacobi-bianchi", wit, {"trials": trials, "generic_forms_agreeing": generic_ok},
                        seed=seed)


def split_isomorphism(seed: int, trials: int = TRIALS) -> Report:
    rng = _rng(seed, 4)
    cases = [("sl2-Q2", sl2(), 2), ("two-dim-Q1", two_dim(), 1), ("so3-Q2", so3(), 2),
             ("one-dim-Q1", LieAlgebra.abelian(1), 1)]
    wit = []
    for t in range(trials):
        name, L, n = cases[t % len(cases)]
        conn = random_connection(L, n, rng)
        if not split_iso_check(conn).ok:
            wit.append({"trial": t, "case": name, "check": "split-iso"})
        if not universal_construction(conn).report.ok:
            wit.append({"trial": t, "case": name, "check": "universal"})
    return Report.check("4-split-isomorphism", wit, {"trials": trials}, seed=seed)


def extension_coherence(seed: int) -> Report:
    rng = _rng(seed, 5)
    wit, statuses = [], {}
    for name, triad in fixture_triads().items():
        pair = triad.pair
        conn = random_extending(triad, rng)
        conn2 = random_extending(triad, rng)
        i_B2 = pair.i_B + pair.i_A @ random_matrix(rng, pair.dim_A, pair.dim_B)
        r = extension_report(triad, conn, i_B2, conn2)
        statuses[name] = r.payload["isomorphisms"]
        if not r.ok or not all(r.payload["flat"].values()):
            wit.append({"triad": name, "witnesses": r.witnesses})
    return Report.check("5-extension-coherence", wit, {"triads": statuses}, seed=seed)


def obstruction_biconditional(seed: int) -> Report:
    wit, rows = [], []
    for lam in range(-2, 3):
        triad = two_dim_triad(lam)
        sol = compatible_connection_solve(triad)
        cls = atiyah_class(triad)
        h0 = cohomology_dim(ce_complex(coefficient_module(triad)), 0)
        rows.append({"lambda": lam, "empty": sol.empty, "h1_dim": cls.h1_dim, "solution_dim": sol.dim,
                     "h0_dim": h0})
        if sol.empty != (lam != 0):
            wit.append({"lambda": lam, "kind": "emptiness"})
        if lam != 0 and cls.h1_dim != 1:
            wit.append({"lambda": lam, "kind": "h1_dim"})
        if lam == 0 and sol.dim != h0:
            wit.append({"lambda": lam, "kind": "H0 dimension"})
    triad = sl2_borel_triad("standard")
    sol = compatible_connection_solve(triad)
    rho_f = b_assignment_vector([sl2_standard()[2]])
    contains = sol.contains(rho_f)
    if not contains:
        wit.append({"kind": "rho(f) missing"})
    rng = _rng(seed, 6)
    members = [sol.particular] + [sol.element([random_matrix(rng, 1, 1)[0, 0] for _ in range(sol.dim)])
                                  for _ in range(5)]
    for v in members:
        conn = extend_connection(triad, b_assignment_from_vector(v, triad.pair.dim_B, triad.n))
        if not is_a_compatible(triad, conn):
            wit.append({"kind": "incompatible solution"})
    return Report.check("6-obstruction-biconditional", wit, {
        "two_dim_family": rows, "sl2_borel_solution_dim": sol.dim, "contains_rho_f": contains}, seed=seed)


def perturbed(mp: MatchedPair) -> MatchedPair:
    """Flip one structure-constant entry of the A-action on B."""
    acts = list(mp.D_A_on_B.action)
    m = acts[0]
    rows = [list(r) for r in m.rows]
    rows[0][0] += 1
    acts[0] = Matrix(rows, ncols=m.ncols)
    return MatchedPair(mp.A, mp.B, Representation(mp.A, mp.B.dim, acts), mp.D_B_on_A)


def matched_roundtrip(seed: int) -> Report:
    L = sl2()
    rec = recognize_matched(L, borel_inclusion(), Matrix([[0], [0], [1]]))
    wit = []
    check = check_matched(rec.matched)
    if not check.ok:
        wit.append({"kind": "matched check"})
    total = build_matched_sum(rec.matched)
    reproduces = total == L  # adapted basis (h, e, f) is the standard one
    if not reproduces or not rec.roundtrip_ok:
        wit.append({"kind": "round trip"})
    bad = check_matched(perturbed(rec.matched))
    if bad.ok:
        wit.append({"kind": "perturbation undetected"})
    return Report.check("7-matched-roundtrip", wit, {
        "reproduces_sl2": reproduces, "perturbation_witness": bad.witnesses[:1]}, seed=seed)


def matched_atiyah(seed: int, trials: int = MATCHED_TRIALS) -> Report:
    rng = _rng(seed, 8)
    triad = sl2_borel_triad("standard")
    wit = []
    for t in range(trials):
        r = matched_atiyah_decomposition(triad, random_extending(triad, rng))
        if not r.ok:
            wit.append({"trial": t, "witnesses": r.witnesses[:3]})
    return Report.check("8-matched-atiyah", wit, {"trials": trials}, seed=seed)


def fiber_curved_triad() -> tuple[Triad, Connection]:
    """A x B with B abelian of dim 2, compatible but with curved B-part."""
    L = LieAlgebra.abelian(3, ["a", "b1", "b2"])
    pair = make_lie_pair(L, Matrix([[1], [0], [0]]))
    triad = Triad(pair, Representation(pair.A, 2, [Matrix.zeros(2, 2)]))
    conn = extend_connection(triad, [Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])])
    return triad, conn


def curvature_split(seed: int) -> Report:
    cases = []
    t = sl2_borel_triad("standard")
    cases.append(("full representation", t, Connection(sl2(), 2, sl2_standard()), True))
    t1 = two_dim_triad(1)
    cases.append(("two-dim lambda=1", t1, extend_connection(t1, [Matrix([[3]])]), False))
    tf, cf = fiber_curved_triad()
    cases.append(("fiber-curved compatible", tf, cf, False))
    rng = _rng(seed, 9)
    for k in range(3):
        cases.append((f"random sl2/Borel {k}", t, random_extending(t, rng), None))
    wit, rows = [], []
    for name, triad, conn, expect in cases:
        r = matched_curvature_split(triad, conn)
        rows.append({"case": name, "flat": r.payload["flat"], "blocks": r.payload["zero_blocks"]})
        if not r.ok or (expect is not None and r.payload["flat"] != expect):
            wit.append({"case": name})
    return Report.check("9-curvature-split", wit, {"cases": rows}, seed=seed)


def derivations(seed: int) -> Report:
    wit, dims = [], {}
    for name, L, expected in (("sl2", sl2(), 3), ("two-dim", two_dim(), 2)):
        d = derivation_algebra(L).dim
        oracle = L.dim ** 2 - rank(derivation_system(L))
        dims[name] = d
        if d != expected or d != oracle:
            wit.append({"algebra": name, "dim": d, "oracle": oracle})
    return Report.check("10-derivations", wit, {"dims": dims}, seed=seed)


def wang_fixtures(seed: int) -> Report:
    wit = []
    g = so3()
    inc = Matrix([[0], [0], [1]])
    sol = wang_solve(reductive_problem(g, inc))
    unique = (not sol.empty) and sol.dim == 0
    if not unique or sol.particular() != Matrix([[0, 0, 1]]):
        wit.append({"kind": "rotation algebra"})
    borel = reductive_test(sl2(), borel_inclusion())
    if borel.reductive:
        wit.append({"kind": "sl2/Borel reported reductive"})
    problems = {
        "rotation": reductive_problem(g, inc),
        "rotation-dphi-zero": WangProblem(g, inc, LieAlgebra.abelian(2), Matrix.zeros(2, 1)),
        "rotation-into-so3": WangProblem(g, inc, so3(), Matrix([[0], [0], [1]])),
        "h-equals-g": WangProblem(g, Matrix.identity(3), so3(), Matrix.identity(3)),
        "abelian": WangProblem(LieAlgebra.abelian(3), Matrix([[1], [0], [0]]),
                               LieAlgebra.abelian(2), Matrix.zeros(2, 1)),
    }
    dims = {}
    for name, p in problems.items():
        r = wang_dimension_check(p)
        dims[name] = r.payload.get("wang_dim")
        if not r.ok:
            wit.append({"problem": name})
    return Report.check("11-wang", wit, {"rotation_unique": unique, "sl2_borel_reductive": borel.reductive,
                                         "dims": dims, "connected_isotropy_assumption": True}, seed=seed)


def hexagon(seed: int) -> Report:
    rng = _rng(seed, 12)
    wit, counts = [], {}
    for name, triad in fixture_triads().items():
        r = hexagon_diagnostics(triad, random_extending(triad, rng))
        counts[name] = len(r.payload["checks"])
        if not r.ok:
            wit.append({"triad": name, "failed": [w["name"] for w in r.witnesses]})
    return Report.check("12-hexagon", wit, {"checks_per_triad": counts}, seed=seed)


CRITERIA = (
    cocycle_closedness,
    connection_independence,
    jacobi_bianchi,
    split_isomorphism,
    extension_coherence,
    obstruction_biconditional,
    matched_roundtrip,
    matched_atiyah,
    curvature_split,
    derivations,
    wang_fixtures,
    hexagon,
)


def run_selftest(seed: int = 0) -> list[Report]:
    return [fn(seed) for fn in CRITERIA]
