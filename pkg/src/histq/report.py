"""Deterministic JSON/CSV report serialization.

Reports never contain timestamps or environment data; for a fixed scenario
and seed two runs emit byte-identical files.  Keys appear in the order they
are documented in the README.  Complex values are written as ``{"re": ...,
"im": ...}`` pairs and matrices as parallel real/imag arrays, so no format
relies on complex literals.

Every value row carries a ``representation`` tag naming the producing form:
``decf1`` (chain trace), ``decf`` (basis sum), ``ILS2`` (doubled-space
reconstruction), ``propa`` (sector quadratic form), ``ent`` (entropy).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "TAG_CHAIN",
    "TAG_BASIS_SUM",
    "TAG_ILS",
    "TAG_QUADRATIC",
    "TAG_ENTROPY",
    "complex_entry",
    "matrix_entry",
    "write_json",
    "write_csv",
]

TAG_CHAIN = "decf1"
TAG_BASIS_SUM = "decf"
TAG_ILS = "ILS2"
TAG_QUADRATIC = "propa"
TAG_ENTROPY = "ent"


def _clean(x: float) -> float:
    # -0.0 and 0.0 are equal but serialize differently
    return float(x) + 0.0


def complex_entry(z: complex) -> dict:
    z = complex(z)
    return {"re": _clean(z.real), "im": _clean(z.imag)}


def matrix_entry(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "real": [[_clean(v) for v in row] for row in m.real],
        "imag": [[_clean(v) for v in row] for row in m.imag],
    }


def write_json(path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(_clean(v)) if isinstance(v, float) else str(v)
                              for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
