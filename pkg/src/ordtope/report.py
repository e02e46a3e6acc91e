"""Machine-readable audit verdicts and their JSON schema."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
import numpy as np

VERDICTS = ("verified", "falsified", "ambiguous", "budget-exceeded")


def jsonable(v):
    """Recursively convert to plain JSON types (inf -> "inf", Fraction -> str)."""
    if isinstance(v, dict):
        return {str(k): jsonable(w) for k, w in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(w) for w in v]
    if isinstance(v, np.ndarray):
        return jsonable(v.tolist())
    if isinstance(v, np.generic):
        return jsonable(v.item())
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and (math.isinf(v) or math.isnan(v)):
        return str(v)
    return v


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("ordtope").joinpath("schemas/audit_report.schema.json").read_text()
    return json.loads(text)


def compare(paper, computed, tolerance=0) -> str:
    """verified iff ``paper`` is defined and within ``tolerance`` of ``computed``."""
    if paper is None:
        return "ambiguous"
    if isinstance(paper, (list, tuple)):
        ok = len(paper) == len(computed) and all(
            compare(a, b, tolerance) == "verified" for a, b in zip(paper, computed))
        return "verified" if ok else "falsified"
    return "verified" if abs(paper - computed) <= tolerance else "falsified"


@dataclass
class AuditReport:
    claim: str
    parameters: dict
    paper_value: Any
    computed_value: Any
    verdict: str
    runtime_ms: float | None = None
    seed: int = 0
    digits: int | None = None
    notes: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")

    def to_json(self) -> dict:
        out = jsonable(asdict(self))
        jsonschema.validate(out, schema())
        return out
