"""Command-line entry point: ``atiyahkit run FILE`` and ``atiyahkit selftest``."""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import atiyah, cohomology, extension, homogeneous, matched
from .atiyah import Connection, Triad
from .lie import bott_connection, bracket_decomposition_check, eth, eth_matrix, splitting_difference
from .linalg import Matrix, to_scalar
from .problem import Problem, ProblemError, load_problem
from .report import Report, jsonable
from .selftest import run_selftest

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class TaskError(ValueError):
    pass


def _get(pb: Problem, task: dict, key: str, table: str):
    name = task.get(key)
    objs = getattr(pb, table)
    if name not in objs:
        raise TaskError(f"task '{task['command']}': unresolved {table} reference {name!r}")
    return objs[name]


def _columns(task: dict, key: str, n: int) -> Matrix:
    vecs = task[key]
    return Matrix.from_columns([[_scalar(x) for x in v] for v in vecs], nrows=n)


def _scalar(x):
    if isinstance(x, float):
        raise TaskError("floats are not allowed")
    return to_scalar(x)


def _connection_for(pb: Problem, task: dict, triad: Triad) -> Connection:
    if "connection" in task:
        return _get(pb, task, "connection", "connections")
    n = triad.n
    return atiyah.extend_connection(triad, [Matrix.zeros(n, n)] * triad.pair.dim_B)


# task handlers --------------------------------------------------------------
def t_validate(pb, task, seed):
    return _get(pb, task, "algebra", "algebras").validate()


def t_pair(pb, task, seed):
    pair = _get(pb, task, "pair", "pairs")
    r = bracket_decomposition_check(pair)
    payload = {"dim_L": pair.dim_L, "dim_A": pair.dim_A, "dim_B": pair.dim_B,
               "i_B": pair.i_B, "pr_B": pair.pr_B, "pr_A": pair.pr_A,
               "splitting_identity": pair.splitting_identity_holds(),
               "bracket_decomposition": r.status}
    wit = list(r.witnesses)
    if "alt_i_B" in task:
        payload["I"] = splitting_difference(pair, _columns(task, "alt_i_B", pair.dim_L))
    if not payload["splitting_identity"]:
        wit.append({"kind": "splitting identity"})
    return Report.check("pair", wit, payload)


def t_bott(pb, task, seed):
    pair = _get(pb, task, "pair", "pairs")
    D = bott_connection(pair)
    return Report("bott", "pass", {"action": list(D.action), "flat": D.is_flat()})


def t_eth(pb, task, seed):
    pair = _get(pb, task, "pair", "pairs")
    if "a" in task and "b" in task:
        val = eth(pair, [_scalar(x) for x in task["b"]], [_scalar(x) for x in task["a"]])
        return Report("eth", "pass", {"value": list(val)})
    return Report("eth", "pass", {"matrices": [eth_matrix(pair, j) for j in range(pair.dim_B)]})


def t_cocycle(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    conn = _connection_for(pb, task, triad)
    form = atiyah.atiyah_cocycle(triad, conn)
    return Report("cocycle", "pass", {"cocycle": form, "compatible": form.is_zero()})


def t_class(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    res = cohomology.atiyah_class(triad)
    payload = {"vanishes": res.vanishes, "is_cocycle": res.is_cocycle, "h0_dim": res.h0_dim,
               "h1_dim": res.h1_dim, "cocycle": res.cocycle, "ranks": res.ranks}
    if res.vanishes:
        payload["witness"] = res.witness
        return Report("class", "pass", payload)
    return Report("class", "obstruction", payload)


def t_solve(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    sol = cohomology.compatible_connection_solve(triad)
    status = "obstruction" if sol.empty else "pass"
    return Report("solve-compatible", status, {"solutions": sol, "dim": sol.dim,
                                               "unknown_layout": "j*n^2 + p*n + q"})


def t_extensions(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    conn = _connection_for(pb, task, triad)
    conn2 = _get(pb, task, "connection2", "connections") if "connection2" in task else None
    i_B2 = _columns(task, "alt_i_B", triad.pair.dim_L) if "alt_i_B" in task else None
    return extension.extension_report(triad, conn, i_B2, conn2)


def t_hexagon(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    return extension.hexagon_diagnostics(triad, _connection_for(pb, task, triad))


def t_split_atiyah(pb, task, seed):
    conn = _get(pb, task, "connection", "connections")
    sa = atiyah.build_split_atiyah(conn)
    checks = [atiyah.split_iso_check(conn), atiyah.universal_construction(conn).report,
              atiyah.jacobi_bianchi_comparison(conn)]
    wit = [dict(w, check=c.task) for c in checks for w in c.witnesses]
    return Report.check("split-atiyah", wit, {"algebra": sa.algebra,
                                              "checks": {c.task: c.status for c in checks}})


def t_matched_check(pb, task, seed):
    return matched.check_matched(_get(pb, task, "matched", "matched"))


def t_matched_sum(pb, task, seed):
    total = matched.build_matched_sum(_get(pb, task, "matched", "matched"))
    return Report("matched-sum", "pass", {"algebra": total, "valid": total.is_valid()})


def t_recognize(pb, task, seed):
    L = _get(pb, task, "algebra", "algebras")
    rec = matched.recognize_matched(L, _columns(task, "A", L.dim), _columns(task, "B", L.dim))
    mp = rec.matched
    wit = [] if rec.roundtrip_ok else [{"kind": "round trip"}]
    return Report.check("recognize-matched", wit, {
        "A_on_B": list(mp.D_A_on_B.action), "B_on_A": list(mp.D_B_on_A.action),
        "roundtrip": rec.roundtrip_ok, "matched_check": matched.check_matched(mp).status})


def t_matched_atiyah(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    return matched.matched_atiyah_decomposition(triad, _connection_for(pb, task, triad))


def t_curvature_split(pb, task, seed):
    triad = _get(pb, task, "triad", "triads")
    return matched.matched_curvature_split(triad, _connection_for(pb, task, triad))


def t_derivations(pb, task, seed):
    d = matched.derivation_algebra(_get(pb, task, "algebra", "algebras"))
    return Report("derivations", "pass", {"dim": d.dim, "basis": d.matrices()})


def t_equivariant(pb, task, seed):
    eq = _get(pb, task, "equivariant", "equivariant")
    chk = matched.check_matched(eq.matched)
    payload = {"matched_check": chk.status, "L_on_g": "zero"}
    wit = list(chk.witnesses)
    if eq.X_E is not None:
        inv, pairs = matched.is_g_invariant(eq.matched, eq.X_E, eq.connection)
        payload["g_invariant"] = inv
        payload["defect_pairs"] = pairs
        if not inv:
            return Report("equivariant", "obstruction", payload, wit)
    return Report.check("equivariant", wit, payload)


def _wang_payload(sol: homogeneous.WangSolution) -> dict:
    return {"empty": sol.empty, "dim": sol.dim, "particular": sol.particular(),
            "homogeneous": sol.homogeneous(), "connected_isotropy_assumption": sol.connected_isotropy_assumption}


def t_wang(pb, task, seed):
    sol = homogeneous.wang_solve(_get(pb, task, "wang", "wang"))
    return Report("wang", "obstruction" if sol.empty else "pass", _wang_payload(sol))


def t_reductive(pb, task, seed):
    if "wang" in task:
        p = _get(pb, task, "wang", "wang")
        g, inc = p.g, p.inclusion_h
    else:
        g = _get(pb, task, "algebra", "algebras")
        inc = _columns(task, "h", g.dim)
    red = homogeneous.reductive_test(g, inc)
    payload = _wang_payload(red.solution)
    payload["reductive"] = red.reductive
    if red.reductive:
        payload["complement"] = red.complement
        return Report("reductive", "pass", payload)
    return Report("reductive", "obstruction", payload)


def t_canonical(pb, task, seed):
    p = _get(pb, task, "wang", "wang")
    red = homogeneous.reductive_test(p.g, p.inclusion_h)
    if not red.reductive:
        return Report("canonical-connection", "obstruction", {"reductive": False})
    can = homogeneous.canonical_connection(p, red.phi0)
    dimr = homogeneous.wang_dimension_check(p)
    return Report("canonical-connection", dimr.status,
                  {"phi0": red.phi0, "canonical": can, "dimension_check": dimr.payload}, dimr.witnesses)


def t_selftest(pb, task, seed):
    s = int(task.get("seed", seed))
    reports = run_selftest(s)
    wit = [{"criterion": r.task} for r in reports if not r.ok]
    return Report.check("selftest", wit, {"criteria": {r.task: r.status for r in reports}}, seed=s)


COMMANDS: dict[str, Callable] = {
    "validate": t_validate,
    "pair": t_pair,
    "bott": t_bott,
    "eth": t_eth,
    "cocycle": t_cocycle,
    "class": t_class,
    "solve-compatible": t_solve,
    "extensions": t_extensions,
    "hexagon": t_hexagon,
    "split-atiyah": t_split_atiyah,
    "matched-check": t_matched_check,
    "matched-sum": t_matched_sum,
    "recognize-matched": t_recognize,
    "matched-atiyah": t_matched_atiyah,
    "curvature-split": t_curvature_split,
    "derivations": t_derivations,
    "equivariant": t_equivariant,
    "wang": t_wang,
    "reductive": t_reductive,
    "canonical-connection": t_canonical,
    "selftest": t_selftest,
}


def run_tasks(pb: Problem, seed: int) -> list[Report]:
    out = []
    for idx, task in enumerate(pb.tasks):
        cmd = task["command"]
        echo = {k: (repr(v) if isinstance(v, float) else v) for k, v in task.items()}
        echo["index"] = idx
        try:
            rep = COMMANDS[cmd](pb, task, seed)
        except (ValueError, KeyError) as exc:
            msg = f"missing parameter {exc}" if isinstance(exc, KeyError) else str(exc)
            rep = Report(cmd, "error", {"message": f"task {idx} ({cmd}): {msg}"})
        rep.echo = jsonable(echo)
        out.append(rep)
    return out


def exit_code(reports: list[Report], strict: bool) -> int:
    if any(r.status in ("fail", "error") for r in reports):
        return EXIT_FAIL
    if strict and any(r.status == "obstruction" for r in reports):
        return EXIT_FAIL
    return EXIT_OK


def _emit(reports: list[Report], text: bool) -> None:
    for r in reports:
        print(r.to_text() if text else r.to_json())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="atiyahkit", description="Exact Atiyah-class computations for Lie algebra triads.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", help="execute the tasks of a problem file")
    run.add_argument("file")
    run.add_argument("--strict", action="store_true", help="treat obstructions as failures")
    run.add_argument("--seed", type=int, default=0)
    fmt = run.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", help="one JSON object per task (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="human-readable output")
    run.set_defaults(text=False)
    st = sub.add_parser("selftest", help="run the randomized property suites")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--text", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "selftest":
        reports = run_selftest(args.seed)
        _emit(reports, args.text)
        return exit_code(reports, strict=True)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        pb = load_problem(text, commands=set(COMMANDS))
    except ProblemError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    reports = run_tasks(pb, args.seed)
    _emit(reports, args.text)
    return exit_code(reports, args.strict)


if __name__ == "__main__":
    sys.exit(main())
