"""Dense complex linear algebra and single-time quantum models.

Conventions used throughout the package: hbar = 1, all operators are dense
``numpy`` arrays with ``complex`` dtype, and in every tensor product the
leftmost factor belongs to the earliest time.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from functools import reduce
from typing import Sequence

import numpy as np

__all__ = [
    "Tolerances",
    "active_tolerances",
    "as_operator",
    "max_abs",
    "is_hermitian",
    "is_unitary",
    "is_projector",
    "projector_onto",
    "named_basis",
    "tensor_product",
    "SystemModel",
    "TimeGrid",
    "evolve",
    "heisenberg",
]


@dataclass(frozen=True)
class Tolerances:
    """Central numeric policy; every residual threshold lives here.

    ``hermitian`` and ``equality`` are relative to the largest matrix entry,
    the rest are absolute.  The environment variable ``HISTQ_TOL`` may hold a
    JSON object overriding individual fields (off by default).
    """

    equality: float = 1e-10
    hermitian: float = 1e-12
    unitary: float = 1e-12
    projector: float = 1e-10
    trace_one: float = 1e-12
    orthonormal: float = 1e-12
    reconstruction: float = 1e-10
    agreement: float = 1e-9
    consistency: float = 1e-9
    strict_positive: float = 1e-12


_DEFAULT = Tolerances()


def active_tolerances() -> Tolerances:
    """The default :class:`Tolerances`, with ``HISTQ_TOL`` overrides applied."""
    raw = os.environ.get("HISTQ_TOL")
    if not raw:
        return _DEFAULT
    overrides = json.loads(raw)
    if not isinstance(overrides, dict):
        raise ValueError("HISTQ_TOL must be a JSON object of field overrides")
    return replace(_DEFAULT, **overrides)


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a, tol: Tolerances | None = None) -> bool:
    tol = tol or active_tolerances()
    a = as_operator(a)
    scale = max(max_abs(a), 1.0)
    return max_abs(a - a.conj().T) <= tol.hermitian * scale


def is_unitary(u, tol: Tolerances | None = None) -> bool:
    tol = tol or active_tolerances()
    u = as_operator(u)
    eye = np.eye(u.shape[0])
    return max_abs(u.conj().T @ u - eye) <= max(tol.unitary, 1e-10)


def is_projector(p, tol: Tolerances | None = None) -> bool:
    tol = tol or active_tolerances()
    p = as_operator(p)
    return is_hermitian(p, tol) and max_abs(p @ p - p) <= tol.projector


def projector_onto(vectors) -> np.ndarray:
    """Orthogonal projector onto the span of the given orthonormal columns."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    return v @ v.conj().T


def named_basis(name: str, dim: int) -> np.ndarray:
    """Unitary whose columns form a named basis of C^dim.

    ``computational`` is the standard basis; ``hadamard`` is the discrete
    Fourier basis, which for dim 2 is the usual {|+>, |->} pair.
    """
    if name == "computational":
        return np.eye(dim, dtype=complex)
    if name == "hadamard":
        j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
        return np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)
    raise ValueError(f"unknown basis name: {name!r}")


def tensor_product(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of the operators in listed (time) order."""
    if len(ops) == 0:
        raise ValueError("empty tensor factor list")
    mats = [as_operator(op) for op in ops]
    return reduce(np.kron, mats)


@dataclass(frozen=True)
class SystemModel:
    """Single-time Hilbert space: dimension, Hamiltonian and initial state.

    ``weights``/``vectors`` hold a spectral resolution of ``rho``: the columns
    of ``vectors`` are an orthonormal basis extending rho's eigenvectors, and
    ``rho = sum_i weights[i] |v_i><v_i|``.
    """

    dim: int
    hamiltonian: np.ndarray
    rho: np.ndarray
    weights: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        tol = active_tolerances()
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        h = as_operator(self.hamiltonian)
        if h.shape[0] != self.dim:
            raise ValueError("hamiltonian dimension mismatch")
        if not is_hermitian(h, tol):
            raise ValueError("hamiltonian must be Hermitian")
        r = as_operator(self.rho)
        if r.shape[0] != self.dim:
            raise ValueError("rho dimension mismatch")
        if not is_hermitian(r, tol):
            raise ValueError("rho must be Hermitian")
        if abs(np.trace(r).real - 1.0) > tol.trace_one or abs(np.trace(r).imag) > tol.trace_one:
            raise ValueError(f"rho must have unit trace, got {np.trace(r).real!r}")
        w = np.asarray(self.weights, dtype=float)
        v = np.asarray(self.vectors, dtype=complex)
        if w.shape != (self.dim,) or v.shape != (self.dim, self.dim):
            raise ValueError("spectral resolution must cover the full basis")
        if np.any(w < -tol.orthonormal):
            raise ValueError("spectral weights must be nonnegative")
        if abs(w.sum() - 1.0) > tol.trace_one:
            raise ValueError(f"spectral weights must sum to 1, got {w.sum()!r}")
        if max_abs(v.conj().T @ v - np.eye(self.dim)) > 10 * tol.orthonormal:
            raise ValueError("spectral vectors must be orthonormal")
        if max_abs((v * w) @ v.conj().T - r) > tol.reconstruction:
            raise ValueError("spectral resolution does not reconstruct rho")

    @classmethod
    def from_matrices(cls, hamiltonian, rho) -> "SystemModel":
        """Build a model from H and rho, diagonalizing rho for the resolution."""
        r = as_operator(rho)
        w, v = np.linalg.eigh(0.5 * (r + r.conj().T))
        w = np.clip(w, 0.0, None)
        return cls(dim=r.shape[0], hamiltonian=as_operator(hamiltonian),
                   rho=r, weights=w, vectors=v)

    @classmethod
    def from_spectral(cls, hamiltonian, weights, vectors) -> "SystemModel":
        """Build a model from an explicit spectral resolution of rho."""
        w = np.asarray(weights, dtype=float)
        v = np.asarray(vectors, dtype=complex)
        rho = (v * w) @ v.conj().T
        return cls(dim=v.shape[0], hamiltonian=as_operator(hamiltonian),
                   rho=rho, weights=w, vectors=v)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing finite time points with an evolution origin t0."""

    times: tuple[float, ...]
    t0: float = 0.0

    def __post_init__(self):
        ts = tuple(float(t) for t in self.times)
        object.__setattr__(self, "times", ts)
        if not all(np.isfinite(ts)) or not np.isfinite(self.t0):
            raise ValueError("times must be finite")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("times must be strictly increasing")

    def require(self, t: float) -> float:
        if t not in self.times:
            raise ValueError(f"time {t!r} is not on the grid {self.times!r}")
        return t


def evolve(model: SystemModel, t: float, t0: float = 0.0) -> np.ndarray:
    """Unitary U(t, t0) = exp(-i H (t - t0)) via Hermitian eigendecomposition."""
    tol = active_tolerances()
    if not is_hermitian(model.hamiltonian, tol):
        raise ValueError("hamiltonian must be Hermitian")
    energies, basis = np.linalg.eigh(model.hamiltonian)
    phases = np.exp(-1j * energies * (t - t0))
    return (basis * phases) @ basis.conj().T


def heisenberg(model: SystemModel, p: np.ndarray, t: float, t0: float = 0.0) -> np.ndarray:
    """Heisenberg-picture transport U(t,t0)^dag P U(t,t0) of a projector."""
    tol = active_tolerances()
    p = as_operator(p)
    if not is_projector(p, tol):
        raise ValueError("operator is not a projector")
    u = evolve(model, t, t0)
    return u.conj().T @ p @ u
