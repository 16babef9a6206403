"""Machine-readable reports with a float-free, byte-stable JSON encoding."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .linalg import Matrix, Subspace, AffineSolutionSet

STATUSES = ("pass", "fail", "obstruction", "error")


def jsonable(obj: Any) -> Any:
    """Normalise library values into JSON-safe data.

    Rationals become strings, matrices become nested lists of strings and
    counts stay integers.  A float anywhere is a bug and is refused.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, Matrix):
        return obj.to_strings()
    if isinstance(obj, Subspace):
        return {"dim": obj.dim, "basis": [[str(x) for x in v] for v in obj.vectors()]}
    if isinstance(obj, AffineSolutionSet):
        if obj.empty:
            return {"empty": True}
        return {
            "empty": False,
            "dim": obj.dim,
            "particular": [str(x) for x in obj.particular],
            "homogeneous_basis": [[str(x) for x in v] for v in obj.homogeneous.vectors()],
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_json_data"):
        return jsonable(obj.to_json_data())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class Report:
    task: str
    status: str
    payload: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    seed: int | None = None
    echo: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        self.payload = jsonable(self.payload)
        self.witnesses = jsonable(self.witnesses)
        self.echo = jsonable(self.echo)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    @classmethod
    def check(cls, task: str, witnesses: list, payload: dict | None = None, **kw) -> "Report":
        """Pass iff there are no witnesses of failure."""
        return cls(task, "fail" if witnesses else "pass", payload or {}, list(witnesses), **kw)

    def to_dict(self) -> dict:
        d = {"task": self.task, "status": self.status, "payload": self.payload,
             "witnesses": self.witnesses}
        if self.seed is not None:
            d["seed"] = self.seed
        if self.echo:
            d["echo"] = self.echo
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            task=data["task"],
            status=data["status"],
            payload=data.get("payload", {}),
            witnesses=data.get("witnesses", []),
            seed=data.get("seed"),
            echo=data.get("echo", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"[{self.status.upper()}] {self.task}"]
        for key in sorted(self.payload):
            lines.append(f"  {key}: {json.dumps(self.payload[key], sort_keys=True)}")
        for w in self.witnesses[:10]:
            lines.append(f"  witness: {json.dumps(w, sort_keys=True)}")
        if len(self.witnesses) > 10:
            lines.append(f"  ... {len(self.witnesses) - 10} more witnesses")
        if self.seed is not None:
            lines.append(f"  seed: {self.seed}")
        return "\n".join(lines)
