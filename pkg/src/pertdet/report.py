"""Verification records and their CSV/JSON emission.

A :class:`BoundReport` is one verified inequality or identity: the bound
value, the observed quantity, their margin, and the pass flag.  Emission is
deterministic: floats are rendered with ``repr`` (shortest round-trip form),
dict order is insertion order, line endings are LF.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

PASS_RTOL = 1e-9


def _scalar(v):
    """Normalize a report input value; complex becomes an [re, im] pair."""
    if type(v).__module__ == "numpy" and getattr(v, "ndim", None) == 0:
        v = v.item()
    if isinstance(v, complex):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, float):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [_scalar(x) for x in v]
    try:
        c = complex(v)
    except (TypeError, ValueError):
        return str(v)
    if c.imag == 0.0 and not isinstance(v, complex):
        return float(c.real)
    return [float(c.real), float(c.imag)]


@dataclass
class BoundReport:
    bound_id: str
    inputs: dict
    bound_value: float
    observed: float
    margin: float
    passed: bool
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not math.isfinite(self.margin):
            raise ValueError(f"report {self.bound_id!r} has non-finite margin {self.margin}")

    @classmethod
    def from_values(cls, bound_id: str, inputs: dict, bound_value: float, observed: float,
                    warnings: list[str] | None = None) -> "BoundReport":
        bound_value = float(bound_value)
        observed = float(observed)
        return cls(
            bound_id=bound_id,
            inputs={k: _scalar(v) for k, v in inputs.items()},
            bound_value=bound_value,
            observed=observed,
            margin=bound_value - observed,
            passed=observed <= bound_value * (1.0 + PASS_RTOL),
            warnings=list(warnings or []),
        )

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "inputs": self.inputs,
            "bound_value": self.bound_value,
            "observed": self.observed,
            "margin": self.margin,
            "pass": self.passed,
            "warnings": self.warnings,
        }


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    return str(v)


def _flat_inputs(inputs: dict) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in inputs.items())


def render_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bound_id", "inputs", "bound_value", "observed", "margin", "pass"])
    for r in reports:
        writer.writerow(
            [r.bound_id, _flat_inputs(r.inputs), repr(r.bound_value), repr(r.observed),
             repr(r.margin), str(r.passed).lower()]
        )
    return buf.getvalue()


def render_json(reports: list[BoundReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=1) + "\n"


def emit_report(reports: list[BoundReport], path: str, fmt: str = "csv") -> str:
    """Write reports to `path` as CSV or JSON (UTF-8, LF); returns the path."""
    if fmt == "csv":
        text = render_csv(reports)
    elif fmt == "json":
        text = render_json(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
