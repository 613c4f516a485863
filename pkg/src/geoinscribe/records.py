"""Machine-readable result records (schema-versioned JSON).

Floats are written with Python's shortest round-trip repr, so
``ResultRecord.from_json(rec.to_json()) == rec`` holds bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import charts
from .curve import SampledCurve
from .engine import Inscription
from .errors import SchemaError
from .geometry import Surface
from .quad import AngleTriple, CirclePair

RECORD_VERSION = 1


def _floats(x):
    return [float(v) for v in np.asarray(x, dtype=float).ravel()]


@dataclass(frozen=True)
class InscriptionRecord:
    s: list
    center: list
    radial: list
    center_chart: list
    triple: list
    residual: float
    iterations: int = 0

    @classmethod
    def from_inscription(cls, ins: Inscription, chart):
        center = ins.circle.center
        return cls(_floats(ins.s), _floats(center), _floats(ins.circle.radial),
                   _floats(charts.to_chart(chart, center)), _floats(ins.triple.as_tuple()),
                   float(ins.residual), int(ins.iterations))

    def to_inscription(self, surface) -> Inscription:
        circle = CirclePair(Surface(surface), np.array(self.center), np.array(self.radial))
        return Inscription(tuple(self.s), circle, AngleTriple(*self.triple),
                           self.residual, self.iterations)


@dataclass(frozen=True)
class ResultRecord:
    surface: str
    chart: str
    inscriptions: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    schema_version: int = RECORD_VERSION

    @classmethod
    def from_results(cls, sc: SampledCurve, found, diagnostics=None, provenance=None):
        return cls(sc.surface.value, sc.chart,
                   [InscriptionRecord.from_inscription(i, sc.chart) for i in found],
                   dict(diagnostics or {}), dict(provenance or {}))

    def to_inscriptions(self):
        return [r.to_inscription(self.surface) for r in self.inscriptions]

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, doc):
        try:
            if doc["schema_version"] != RECORD_VERSION:
                raise SchemaError(f"unsupported record version {doc['schema_version']!r}")
            ins = [InscriptionRecord(**r) for r in doc["inscriptions"]]
            return cls(doc["surface"], doc["chart"], ins, doc["diagnostics"],
                       doc["provenance"], doc["schema_version"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed result record: {exc}") from None

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"result record is not valid JSON: {exc}") from None
        return cls.from_dict(doc)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def clean_diagnostics(stats):
    """Plain JSON-safe copy of solver statistics."""
    out = {}
    for k, v in stats.items():
        if isinstance(v, (np.integer, int)):
            out[k] = int(v)
        elif isinstance(v, (np.floating, float)):
            out[k] = float(v) if math.isfinite(v) else None
        else:
            out[k] = v
    return out
