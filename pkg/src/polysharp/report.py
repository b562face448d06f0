"""Run reports: deterministic JSON text with 17-significant-digit floats."""

from __future__ import annotations

import json
import math
import os
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

SCHEMA_ID = "polysharp-report/1"
SCHEMA_PATH = Path(__file__).resolve().parent / "report_schema.json"


def _scalar(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return "%.17g" % x


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text; floats as %.17g, keys in insertion order, non-finite floats as strings."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (bool, int, float, np.bool_, np.integer, np.floating)):
        return _scalar(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text())


def summarize(records: list[dict]) -> dict:
    # only gap records carry a verdict; norm, search and factorization records count as other
    verdicts = Counter(r.get("verdict") for r in records if r.get("kind") == "gap")
    return {
        "records": len(records),
        "holds": verdicts.get("holds", 0),
        "equality": verdicts.get("equality", 0),
        "violated": verdicts.get("violated", 0),
        "other": len(records) - sum(verdicts.get(k, 0) for k in ("holds", "equality", "violated")),
    }


@dataclass
class RunReport:
    config: dict
    records: list[dict] = field(default_factory=list)
    wall_clock: float | None = None

    @property
    def summary(self) -> dict:
        return summarize(self.records)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "version": __version__,
            "config": self.config,
            "summary": self.summary,
            "records": self.records,
            "wall_clock": self.wall_clock,
        }

    def text(self) -> str:
        return dumps(self.as_dict()) + "\n"

    def write(self, path: str | Path | None) -> str:
        """Write atomically (temp file then rename); '-' or None prints nothing and returns the text."""
        text = self.text()
        if path in (None, "-"):
            return text
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=".report-", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
        return text
