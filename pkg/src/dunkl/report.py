"""Structured pass/fail records for identity and norm verifications."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["OperatorReport", "render_table", "reports_to_json"]

SCHEMA_VERSION = 1


def _fmt(v):
    """Canonical 17-significant-digit float round-trip, for stable reports."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, complex):
        return {"re": _fmt(v.real), "im": _fmt(v.imag)}
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.17g}")
    if isinstance(v, np.ndarray):
        return [_fmt(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if isinstance(v, dict):
        return {k: _fmt(v[k]) for k in v}
    return v


@dataclass
class OperatorReport:
    """One verified identity: computed vs reference at a stated tolerance."""

    name: str
    computed: object
    reference: object
    tolerance: float
    abs_error: float
    rel_error: float
    passed: bool
    provenance: str = ""
    inputs: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    @classmethod
    def from_comparison(
        cls,
        name,
        computed,
        reference,
        tolerance,
        scale=None,
        provenance="",
        inputs=None,
        runtime_s=0.0,
    ):
        """Build a report; pass iff |computed - reference| <= tol * scale."""
        c = np.asarray(computed)
        r = np.asarray(reference)
        abs_err = float(np.max(np.abs(c - r)))
        if scale is None:
            scale = float(np.max(np.abs(r)))
        scale = max(float(scale), 1e-300)
        rel_err = abs_err / scale
        return cls(
            name=name,
            computed=_fmt(computed),
            reference=_fmt(reference),
            tolerance=float(tolerance),
            abs_error=abs_err,
            rel_error=rel_err,
            passed=bool(rel_err <= tolerance),
            provenance=provenance,
            inputs=dict(inputs or {}),
            runtime_s=float(runtime_s),
        )

    @classmethod
    def from_bound(
        cls, name, value, bound, provenance="", inputs=None, runtime_s=0.0
    ):
        """Pass iff value <= bound (norm-ratio style checks)."""
        value = float(value)
        bound = float(bound)
        return cls(
            name=name,
            computed=value,
            reference=bound,
            tolerance=bound,
            abs_error=max(value - bound, 0.0),
            rel_error=value / max(bound, 1e-300),
            passed=bool(value <= bound),
            provenance=provenance,
            inputs=dict(inputs or {}),
            runtime_s=float(runtime_s),
        )

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "inputs": _fmt(self.inputs),
            "computed": _fmt(self.computed),
            "reference": _fmt(self.reference),
            "abs_error": _fmt(self.abs_error),
            "rel_error": _fmt(self.rel_error),
            "tolerance": _fmt(self.tolerance),
            "pass": bool(self.passed),
            "provenance": self.provenance,
            "runtime_s": _fmt(self.runtime_s),
        }


def reports_to_json(reports):
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=False)


def render_table(reports, stream=None):
    """Human-readable one-line-per-check summary; returns the text."""
    lines = []
    width = max((len(r.name) for r in reports), default=4)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status}  {r.name:<{width}}  rel_err={r.rel_error:.3e}  "
            f"tol={r.tolerance:.1e}"
        )
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} checks passed")
    text = "\n".join(lines)
    if stream is not None:
        print(text, file=stream)
    return text
