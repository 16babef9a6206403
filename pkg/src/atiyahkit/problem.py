"""Problem files: named algebraic objects plus an ordered task list.

The format is TOML.  Rationals are strings such as ``"3/4"`` (integers
are also accepted), floats are refused.  Structure constants are sparse
``[i, j, k, value]`` entries meaning ``[e_i, e_j]`` has ``value`` on
``e_k``; indices are basis names or 0-based integers.  With
``antisymmetric_completion = true`` in the header, the entry for
``[e_j, e_i]`` is filled in automatically.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .atiyah import Connection, Triad, extend_connection
from .homogeneous import WangProblem, reductive_problem
from .lie import LieAlgebra, LiePair, Representation, make_lie_pair
from .linalg import Matrix, to_scalar
from .matched import MatchedPair, equivariant_structure, recognize_matched

FORMAT_VERSION = "1"
SECTIONS = ("algebra", "representation", "pair", "triad", "connection", "matched", "wang", "equivariant")


class ProblemError(ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + msg)


_TOML_POS = re.compile(r"\(at line (\d+), column (\d+)\)")


def _locate(text: str, token: str) -> tuple[int | None, int | None]:
    idx = text.find(token)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


@dataclass
class Problem:
    format_version: str
    antisymmetric_completion: bool
    algebras: dict = field(default_factory=dict)
    representations: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    triads: dict = field(default_factory=dict)
    connections: dict = field(default_factory=dict)
    matched: dict = field(default_factory=dict)
    wang: dict = field(default_factory=dict)
    equivariant: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)


@dataclass(frozen=True)
class EquivariantData:
    matched: MatchedPair
    X_E: tuple | None
    connection: Connection | None


class _Loader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, msg: str, token: str | None = None) -> ProblemError:
        line = col = None
        if token is not None:
            line, col = _locate(self.text, token)
        return ProblemError(msg, line, col)

    def scalar(self, value, where: str) -> Fraction:
        if isinstance(value, float):
            raise self.fail(f"{where}: floats are not allowed, write rationals as strings like \"1/3\"",
                            repr(value))
        if isinstance(value, bool):
            raise self.fail(f"{where}: expected a rational, got a boolean")
        try:
            return to_scalar(value)
        except (ValueError, TypeError) as exc:
            raise self.fail(f"{where}: {exc}", f'"{value}"' if isinstance(value, str) else None) from None

    def vector(self, value, n: int, where: str) -> tuple:
        if not isinstance(value, list) or len(value) != n:
            raise self.fail(f"{where}: expected a list of {n} rationals")
        return tuple(self.scalar(x, where) for x in value)

    def matrix(self, value, nrows: int, ncols: int, where: str) -> Matrix:
        if not isinstance(value, list) or len(value) != nrows:
            raise self.fail(f"{where}: expected {nrows} rows")
        return Matrix([self.vector(r, ncols, where) for r in value], ncols=ncols)

    def columns(self, value, n: int, where: str) -> Matrix:
        """A list of vectors in ``Q^n`` becomes the matrix with those columns."""
        if not isinstance(value, list):
            raise self.fail(f"{where}: expected a list of vectors")
        return Matrix.from_columns([self.vector(v, n, where) for v in value], nrows=n)

    def ref(self, table: dict, name, kind: str, where: str):
        if not isinstance(name, str) or name not in table:
            raise self.fail(f"{where}: unresolved {kind} reference {name!r}",
                            f'"{name}"' if isinstance(name, str) else None)
        return table[name]

    def require(self, sec: dict, key: str, where: str):
        if key not in sec:
            raise self.fail(f"{where}: missing key '{key}'")
        return sec[key]


def _basis_index(ld: _Loader, names: list, idx, where: str) -> int:
    if isinstance(idx, bool):
        raise ld.fail(f"{where}: bad basis index {idx!r}")
    if isinstance(idx, int):
        if not 0 <= idx < len(names):
            raise ld.fail(f"{where}: basis index {idx} out of range")
        return idx
    if isinstance(idx, str) and idx in names:
        return names.index(idx)
    raise ld.fail(f"{where}: unknown basis element {idx!r}", f'"{idx}"' if isinstance(idx, str) else None)


def _load_algebra(ld: _Loader, name: str, sec: dict, complete: bool) -> LieAlgebra:
    where = f"algebra.{name}"
    if "basis" in sec:
        names = sec["basis"]
        if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
            raise ld.fail(f"{where}: basis must be a list of names")
        if len(set(names)) != len(names):
            raise ld.fail(f"{where}: repeated basis names")
    elif "dim" in sec:
        names = [f"e{i + 1}" for i in range(int(sec["dim"]))]
    else:
        raise ld.fail(f"{where}: needs 'basis' or 'dim'")
    n = len(names)
    brackets = {}
    for entry in sec.get("brackets", []):
        if not isinstance(entry, list) or len(entry) != 4:
            raise ld.fail(f"{where}: bracket entries are [i, j, k, value]")
        i, j, k = (_basis_index(ld, names, x, where) for x in entry[:3])
        v = brackets.setdefault((i, j), [Fraction(0)] * n)
        v[k] += ld.scalar(entry[3], where)
    if complete:
        for (i, j) in list(brackets):
            if (j, i) in brackets:
                continue
            brackets[(j, i)] = [-x for x in brackets[(i, j)]]
    return LieAlgebra.from_brackets(n, brackets, names, antisymmetrize=False)


def _action_list(ld: _Loader, value, L_names: list, n: int, where: str) -> list[Matrix]:
    """Either a list of matrices in basis order or a table keyed by basis name."""
    if isinstance(value, list):
        if len(value) != len(L_names):
            raise ld.fail(f"{where}: expected {len(L_names)} matrices")
        return [ld.matrix(m, n, n, where) for m in value]
    if isinstance(value, dict):
        out = [Matrix.zeros(n, n) for _ in L_names]
        for key, m in value.items():
            out[_basis_index(ld, L_names, key, where)] = ld.matrix(m, n, n, where)
        return out
    raise ld.fail(f"{where}: action must be a list or a table")


TASK_REFERENCES = {
    "algebra": "algebras", "pair": "pairs", "triad": "triads", "connection": "connections",
    "connection2": "connections", "matched": "matched", "wang": "wang", "equivariant": "equivariant",
}


def load_problem(text: str, commands: set | None = None) -> Problem:
    """Parse and build every object; with ``commands`` also vet the task list."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = _TOML_POS.search(str(exc))
        if m:
            raise ProblemError(_TOML_POS.sub("", str(exc)).strip(), int(m.group(1)), int(m.group(2))) from None
        raise ProblemError(str(exc)) from None
    ld = _Loader(text)
    version = str(data.get("format_version", ""))
    if version != FORMAT_VERSION:
        raise ld.fail(f"unsupported format_version {version!r}, expected {FORMAT_VERSION!r}")
    complete = data.get("antisymmetric_completion")
    if not isinstance(complete, bool):
        raise ld.fail("header must declare antisymmetric_completion = true or false")
    unknown = set(data) - set(SECTIONS) - {"format_version", "antisymmetric_completion", "task"}
    if unknown:
        key = sorted(unknown)[0]
        raise ld.fail(f"unknown top-level key {key!r}", key)
    pb = Problem(version, complete)
    try:
        _build(ld, data, pb)
    except ProblemError:
        raise
    except ValueError as exc:
        raise ld.fail(str(exc)) from None
    tasks = data.get("task", [])
    if not isinstance(tasks, list):
        raise ld.fail("'task' must be an array of tables ([[task]])")
    for n, t in enumerate(tasks):
        if not isinstance(t, dict) or "command" not in t:
            raise ld.fail(f"task {n}: every task needs a 'command'")
        cmd = t["command"]
        if commands is not None and cmd not in commands:
            raise ld.fail(f"task {n}: unknown command {cmd!r}", f'"{cmd}"')
        for key, table in TASK_REFERENCES.items():
            if key in t and t[key] not in getattr(pb, table):
                raise ld.fail(f"task {n} ({cmd}): unresolved {key} reference {t[key]!r}",
                              f'"{t[key]}"' if isinstance(t[key], str) else None)
        pb.tasks.append(dict(t))
    return pb


def _build(ld: _Loader, data: dict, pb: Problem) -> None:
    for name, sec in data.get("algebra", {}).items():
        pb.algebras[name] = _load_algebra(ld, name, sec, pb.antisymmetric_completion)

    for name, sec in data.get("representation", {}).items():
        where = f"representation.{name}"
        L = ld.ref(pb.algebras, ld.require(sec, "algebra", where), "algebra", where)
        n = int(ld.require(sec, "dim", where))
        acts = _action_list(ld, sec.get("action", {}), list(L.names), n, where)
        pb.representations[name] = Representation(L, n, acts)

    for name, sec in data.get("pair", {}).items():
        where = f"pair.{name}"
        L = ld.ref(pb.algebras, ld.require(sec, "algebra", where), "algebra", where)
        inc = ld.columns(ld.require(sec, "A", where), L.dim, where)
        i_B = None
        if "i_B" in sec:
            i_B = ld.columns(sec["i_B"], L.dim, where)
        pb.pairs[name] = make_lie_pair(L, inc, i_B)

    for name, sec in data.get("triad", {}).items():
        where = f"triad.{name}"
        pair: LiePair = ld.ref(pb.pairs, ld.require(sec, "pair", where), "pair", where)
        if "restrict" in sec:
            rep = ld.ref(pb.representations, sec["restrict"], "representation", where)
            if rep.algebra != pair.L:
                raise ld.fail(f"{where}: restricted representation is not of the pair's algebra")
            E = rep.restrict(pair.i_A, pair.A)
        else:
            n = int(ld.require(sec, "dim", where))
            E = Representation(pair.A, n, _action_list(ld, ld.require(sec, "action", where),
                                                       [f"a{i + 1}" for i in range(pair.dim_A)], n, where))
        pb.triads[name] = Triad(pair, E)

    for name, sec in data.get("connection", {}).items():
        where = f"connection.{name}"
        if "triad" in sec:
            triad = ld.ref(pb.triads, sec["triad"], "triad", where)
            n = triad.n
            b = ld.require(sec, "b_assignment", where)
            if not isinstance(b, list) or len(b) != triad.pair.dim_B:
                raise ld.fail(f"{where}: b_assignment needs {triad.pair.dim_B} matrices")
            pb.connections[name] = extend_connection(triad, [ld.matrix(m, n, n, where) for m in b])
        else:
            L = ld.ref(pb.algebras, ld.require(sec, "algebra", where), "algebra", where)
            n = int(ld.require(sec, "dim", where))
            acts = _action_list(ld, ld.require(sec, "assignment", where), list(L.names), n, where)
            pb.connections[name] = Connection(L, n, acts)

    for name, sec in data.get("matched", {}).items():
        where = f"matched.{name}"
        if "algebra" in sec:
            L = ld.ref(pb.algebras, sec["algebra"], "algebra", where)
            inc_A = ld.columns(ld.require(sec, "A", where), L.dim, where)
            inc_B = ld.columns(ld.require(sec, "B", where), L.dim, where)
            pb.matched[name] = recognize_matched(L, inc_A, inc_B).matched
        else:
            A = ld.ref(pb.algebras, ld.require(sec, "A", where), "algebra", where)
            B = ld.ref(pb.algebras, ld.require(sec, "B", where), "algebra", where)
            ab = _action_list(ld, ld.require(sec, "A_on_B", where), list(A.names), B.dim, where)
            ba = _action_list(ld, ld.require(sec, "B_on_A", where), list(B.names), A.dim, where)
            pb.matched[name] = MatchedPair(A, B, Representation(A, B.dim, ab), Representation(B, A.dim, ba))

    for name, sec in data.get("wang", {}).items():
        where = f"wang.{name}"
        g = ld.ref(pb.algebras, ld.require(sec, "g", where), "algebra", where)
        inc = ld.columns(ld.require(sec, "h", where), g.dim, where)
        k = sec.get("k", "h")
        if k == "h":
            if "dphi" in sec:
                raise ld.fail(f"{where}: with k = \"h\" the isotropy map is the identity; drop dphi")
            pb.wang[name] = reductive_problem(g, inc)
        else:
            kalg = ld.ref(pb.algebras, k, "algebra", where)
            dphi = ld.matrix(ld.require(sec, "dphi", where), kalg.dim, inc.ncols, where)
            pb.wang[name] = WangProblem(g, inc, kalg, dphi)

    for name, sec in data.get("equivariant", {}).items():
        where = f"equivariant.{name}"
        g = ld.ref(pb.algebras, ld.require(sec, "g", where), "algebra", where)
        L = ld.ref(pb.algebras, ld.require(sec, "L", where), "algebra", where)
        acts = _action_list(ld, ld.require(sec, "action", where), list(g.names), L.dim, where)
        mp = equivariant_structure(g, L, acts)
        X_E = conn = None
        if "X_E" in sec:
            n = int(ld.require(sec, "dim", where))
            X_E = tuple(_action_list(ld, sec["X_E"], list(g.names), n, where))
            conn = Connection(L, n, _action_list(ld, ld.require(sec, "connection", where),
                                                 list(L.names), n, where))
        pb.equivariant[name] = EquivariantData(mp, X_E, conn)
