"""Scenario files: JSON in, validated model + histories + decompositions out.

A scenario file is a JSON object with the fields

* ``dim``: single-time dimension (positive integer);
* ``hamiltonian``: matrix as parallel ``real``/``imag`` 2-D arrays;
* ``rho``: either ``{"matrix": {...}}`` or ``{"spectral": [{"weight": w,
  "vector": {"real": [...], "imag": [...]}}, ...]}``;
* ``t0``: evolution origin (optional, default 0);
* ``times``: strictly increasing list of reals;
* ``histories``: list of ``{"label": str, "projectors": [spec, ...]}`` with
  one projector spec per time;
* ``pvms``: per-time lists of alternative projective decompositions, aligned
  with the first ``len(pvms)`` times;
* ``entropy_p``: list of norm parameters >= 1;
* ``seed``: integer driving all randomized verification.

A projector spec is one of ``{"identity": true}``, ``{"matrix": {"real":
[[...]], "imag": [[...]]}}``, or ``{"basis": "computational"|"hadamard",
"index": i}`` / ``{"basis": ..., "indices": [i, j, ...]}`` for rank-k
projectors onto named basis vectors.  A decomposition spec is either
``{"basis": name}`` (all rank-1 projectors of that basis) or
``{"projectors": [spec, ...]}``.

Validation failures raise :class:`ScenarioError` carrying the JSON path of
the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import SystemModel, TimeGrid, active_tolerances, is_projector, named_basis, projector_onto
from .histories import HomogeneousHistory, history

__all__ = ["Scenario", "ScenarioError", "load_scenario", "parse_scenario"]


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


@dataclass
class Scenario:
    dim: int
    model: SystemModel
    grid: TimeGrid
    histories: list[tuple[str, HomogeneousHistory]]
    pvms: list[list[list[np.ndarray]]]
    entropy_p: list[float]
    seed: int


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise ScenarioError(f"{path}{key}", "missing field")
    return data[key]


def _matrix(node, dim: int, path: str) -> np.ndarray:
    if not isinstance(node, dict) or "real" not in node:
        raise ScenarioError(path, "expected an object with 'real' (and optional 'imag') arrays")
    try:
        real = np.asarray(node["real"], dtype=float)
        imag = np.asarray(node.get("imag", np.zeros_like(real)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(path, f"not numeric arrays: {exc}") from None
    if real.shape != imag.shape:
        raise ScenarioError(path, "'real' and 'imag' shapes differ")
    m = real + 1j * imag
    if m.shape != (dim, dim):
        raise ScenarioError(path, f"expected shape {(dim, dim)}, got {m.shape}")
    return m


def _vector(node, dim: int, path: str) -> np.ndarray:
    if not isinstance(node, dict) or "real" not in node:
        raise ScenarioError(path, "expected an object with 'real' (and optional 'imag') arrays")
    real = np.asarray(node["real"], dtype=float)
    imag = np.asarray(node.get("imag", np.zeros_like(real)), dtype=float)
    v = real + 1j * imag
    if v.shape != (dim,):
        raise ScenarioError(path, f"expected a length-{dim} vector, got shape {v.shape}")
    return v


def _rho(node, dim: int, path: str) -> SystemModel | tuple:
    if not isinstance(node, dict):
        raise ScenarioError(path, "expected an object with 'matrix' or 'spectral'")
    if "matrix" in node:
        return ("matrix", _matrix(node["matrix"], dim, f"{path}.matrix"))
    if "spectral" in node:
        entries = node["spectral"]
        if not isinstance(entries, list) or not entries:
            raise ScenarioError(f"{path}.spectral", "expected a nonempty list")
        weights, vectors = [], []
        for i, entry in enumerate(entries):
            epath = f"{path}.spectral[{i}]"
            if not isinstance(entry, dict):
                raise ScenarioError(epath, "expected an object")
            weights.append(float(_require(entry, "weight", f"{epath}.")))
            vectors.append(_vector(_require(entry, "vector", f"{epath}."), dim, f"{epath}.vector"))
        if len(entries) != dim:
            raise ScenarioError(f"{path}.spectral",
                                f"need exactly dim={dim} entries (pad with zero weights)")
        return ("spectral", np.asarray(weights), np.column_stack(vectors))
    raise ScenarioError(path, "expected 'matrix' or 'spectral'")


def _projector(node, dim: int, path: str) -> np.ndarray:
    tol = active_tolerances()
    if not isinstance(node, dict):
        raise ScenarioError(path, "expected an object")
    if node.get("identity"):
        return np.eye(dim, dtype=complex)
    if "matrix" in node:
        p = _matrix(node["matrix"], dim, f"{path}.matrix")
        if not is_projector(p, tol):
            raise ScenarioError(f"{path}.matrix", "not a projector")
        return p
    if "basis" in node:
        try:
            basis = named_basis(node["basis"], dim)
        except ValueError as exc:
            raise ScenarioError(f"{path}.basis", str(exc)) from None
        if "index" in node:
            indices = [node["index"]]
        elif "indices" in node:
            indices = list(node["indices"])
        else:
            raise ScenarioError(path, "basis projector needs 'index' or 'indices'")
        for i in indices:
            if not isinstance(i, int) or not 0 <= i < dim:
                raise ScenarioError(path, f"basis index {i!r} out of range for dim {dim}")
        return projector_onto(basis[:, indices])
    raise ScenarioError(path, "unknown projector spec (need identity/matrix/basis)")


def _pvm(node, dim: int, path: str) -> list[np.ndarray]:
    tol = active_tolerances()
    if not isinstance(node, dict):
        raise ScenarioError(path, "expected an object")
    if "basis" in node and "projectors" not in node:
        try:
            basis = named_basis(node["basis"], dim)
        except ValueError as exc:
            raise ScenarioError(f"{path}.basis", str(exc)) from None
        return [projector_onto(basis[:, [i]]) for i in range(dim)]
    if "projectors" in node:
        elements = [
            _projector(sub, dim, f"{path}.projectors[{i}]")
            for i, sub in enumerate(node["projectors"])
        ]
        total = sum(elements)
        if np.max(np.abs(total - np.eye(dim))) > tol.consistency:
            raise ScenarioError(f"{path}.projectors", "elements must sum to the identity")
        return elements
    raise ScenarioError(path, "unknown decomposition spec (need basis/projectors)")


def parse_scenario(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("$", "scenario must be a JSON object")

    dim = _require(data, "dim", "")
    if not isinstance(dim, int) or dim < 1:
        raise ScenarioError("dim", "must be a positive integer")

    hmat = _matrix(_require(data, "hamiltonian", ""), dim, "hamiltonian")
    rho_spec = _rho(_require(data, "rho", ""), dim, "rho")

    try:
        if rho_spec[0] == "matrix":
            model = SystemModel.from_matrices(hmat, rho_spec[1])
        else:
            model = SystemModel.from_spectral(hmat, rho_spec[1], rho_spec[2])
    except ValueError as exc:
        text = str(exc)
        field = "hamiltonian" if "hamiltonian" in text else "rho"
        raise ScenarioError(field, text) from None

    times = _require(data, "times", "")
    if not isinstance(times, list) or not times:
        raise ScenarioError("times", "expected a nonempty list of reals")
    try:
        grid = TimeGrid(times=tuple(float(t) for t in times), t0=float(data.get("t0", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ScenarioError("times", str(exc)) from None

    histories: list[tuple[str, HomogeneousHistory]] = []
    for i, node in enumerate(data.get("histories", [])):
        hpath = f"histories[{i}]"
        if not isinstance(node, dict):
            raise ScenarioError(hpath, "expected an object")
        label = node.get("label", f"h{i}")
        specs = _require(node, "projectors", f"{hpath}.")
        if not isinstance(specs, list) or len(specs) != len(grid.times):
            raise ScenarioError(f"{hpath}.projectors",
                                f"need one projector spec per time ({len(grid.times)})")
        entries = {}
        for k, spec in enumerate(specs):
            entries[grid.times[k]] = _projector(spec, dim, f"{hpath}.projectors[{k}]")
        try:
            histories.append((str(label), history(entries)))
        except ValueError as exc:
            raise ScenarioError(f"{hpath}.projectors", str(exc)) from None

    pvms: list[list[list[np.ndarray]]] = []
    pvm_nodes = data.get("pvms", [])
    if not isinstance(pvm_nodes, list):
        raise ScenarioError("pvms", "expected a list (one entry per leading time)")
    if len(pvm_nodes) > len(grid.times):
        raise ScenarioError("pvms", f"more entries than times ({len(grid.times)})")
    for k, per_time in enumerate(pvm_nodes):
        if not isinstance(per_time, list) or not per_time:
            raise ScenarioError(f"pvms[{k}]", "expected a nonempty list of decompositions")
        pvms.append([_pvm(node, dim, f"pvms[{k}][{j}]") for j, node in enumerate(per_time)])

    entropy_p = data.get("entropy_p", [1.0, 2.0])
    if not isinstance(entropy_p, list) or not entropy_p:
        raise ScenarioError("entropy_p", "expected a nonempty list of reals >= 1")
    try:
        entropy_p = [float(p) for p in entropy_p]
    except (TypeError, ValueError):
        raise ScenarioError("entropy_p", "expected a nonempty list of reals >= 1") from None
    if any(p < 1 for p in entropy_p):
        raise ScenarioError("entropy_p", "norm parameters must be >= 1")

    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise ScenarioError("seed", "must be an integer")

    return Scenario(dim=dim, model=model, grid=grid, histories=histories,
                    pvms=pvms, entropy_p=entropy_p, seed=seed)


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioError(str(path), f"unreadable scenario file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(str(path), f"invalid JSON: {exc}") from None
    return parse_scenario(data)
