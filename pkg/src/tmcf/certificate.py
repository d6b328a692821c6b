"""Verification certificates and machine-readable reports.

A Certificate records one checked claim: a name, the parameters it was
instantiated at, whether the residual vanished, and a digest of the
residual (always "0" on success, a compact description of the offending
terms otherwise).  Wall-clock time is carried on the object but kept out
of the serialized payload so reports stay byte-identical across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .bipoly import BiPoly, TauLaurent
from .gf2 import LaurentZ, PolyZ

REPORT_SCHEMA = "tmcf.report/1"
CERTIFICATE_SCHEMA = "tmcf.certificate/1"


def residual_digest(r: Any) -> str:
    """Compact, deterministic description of a residual object."""
    if r is None:
        return "0"
    if isinstance(r, TauLaurent):
        if r.is_zero():
            return "0"
        return f"tau^{r.exp}*({residual_digest(r.num)})"
    if isinstance(r, BiPoly):
        if r.is_zero():
            return "0"
        lead = ", ".join(f"a^{i}*b^{j}" for i, j in r.to_pairs()[:3])
        return f"{r.n_terms()} terms (leading {lead})"
    if isinstance(r, PolyZ):
        return "0" if not r else f"deg {r.degree}: {r}"
    if isinstance(r, LaurentZ):
        if r.is_zero_within():
            return f"0 (trusted down to z^{r.horizon})" if not r.exact else "0"
        return f"leading term z^{r.top} (trusted down to z^{r.horizon})"
    if isinstance(r, bool):
        return "0" if r else "failed"
    return str(r)


def residual_is_zero(r: Any) -> bool:
    if r is None:
        return True
    if isinstance(r, TauLaurent):
        return r.is_zero()
    if isinstance(r, BiPoly):
        return r.is_zero()
    if isinstance(r, PolyZ):
        return not r
    if isinstance(r, LaurentZ):
        return r.is_zero_within()
    if isinstance(r, bool):
        return r  # a check that already reduced itself to pass/fail
    raise TypeError(f"unsupported residual type {type(r)!r}")


def recheck(build) -> Any:
    """Evaluate a residual twice with permuted operand order; they must agree.

    `build` takes reverse: bool and routes its ring products through the
    opposite operand order when set, exercising both packing paths of the
    multiply kernel.  A disagreement is an arithmetic bug, not a failed
    identity, so it raises instead of failing the certificate.
    """
    first = build(False)
    second = build(True)
    if first != second:
        raise ArithmeticError("operand-order recomputation disagrees; kernel fault")
    return first


@dataclass
class Certificate:
    name: str
    params: dict[str, Any]
    passed: bool
    residual: str
    details: dict[str, Any] = field(default_factory=dict)
    wall_time_s: float = 0.0

    @classmethod
    def from_residuals(
        cls,
        name: str,
        params: dict[str, Any],
        residuals: dict[str, Any],
        details: dict[str, Any] | None = None,
        wall_time_s: float = 0.0,
    ) -> "Certificate":
        bad = {k: r for k, r in residuals.items() if not residual_is_zero(r)}
        if bad:
            digest = "; ".join(f"{k}: {residual_digest(r)}" for k, r in bad.items())
        else:
            digest = "0"
        return cls(
            name=name,
            params=params,
            passed=not bad,
            residual=digest,
            details=details or {},
            wall_time_s=wall_time_s,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": CERTIFICATE_SCHEMA,
            "name": self.name,
            "params": self.params,
            "pass": self.passed,
            "residual": self.residual,
            "details": self.details,
        }


@dataclass
class Report:
    """One CLI invocation's worth of certificates."""

    command: str
    params: dict[str, Any]
    certificates: list[Certificate]

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.certificates)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "tool_version": __version__,
            "command": self.command,
            "params": self.params,
            "overall_pass": self.overall_pass,
            "certificates": [c.to_dict() for c in self.certificates],
            "timings_s": {c.name: round(c.wall_time_s, 3) for c in self.certificates},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def payload_json(self) -> str:
        """Serialization with timings stripped (deterministic for fixed inputs)."""
        d = self.to_dict()
        del d["timings_s"]
        return json.dumps(d, sort_keys=True, indent=2)
