"""Truncated reproductions of the two singular-history constructions.

Both series evaluate the decoherence functional on a family that has no
finite value in the untruncated infinite-dimensional theory; at truncation N
all basis sums are restricted to indices <= N (weights are not renormalized,
the defect 2^-N is far below fitting tolerance).

* Series ``b1``: the projector P_N = sum_{i=2..N} |phi_i><phi_i| with
  phi_i = (|psi_i psi_1> + |psi_1 psi_i>)/sqrt(2), evaluated against a fixed
  second argument q.  For q = identity the value is
  ((N-1) w_1 + sum_{i=2..N} w_i)/2, growing linearly with slope w_1/2.
* Series ``b2``: the two-time basis sum for the compact operator
  h = sum_{k1,k4} (k1+k4)^{-1} |e_k4 psi_k1><psi_k1 e_k4| against the unit,
  equal to sum_{k1,k4<=N} w_k1/(k1+k4), growing like ln N.

:func:`growth_fit` classifies a truncation series as bounded, logarithmic,
or linear from least-squares fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "TruncationSeries",
    "GrowthVerdict",
    "geometric_weights",
    "b1_series",
    "b1_direct_value",
    "b2_series",
    "shell_operator",
    "growth_fit",
]

FIT_RESIDUAL_THRESHOLD = 0.05


@dataclass(frozen=True)
class TruncationSeries:
    label: str  # "b1" | "b2"
    points: tuple[tuple[int, float], ...]
    omega_rule: str

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("truncation points must be strictly increasing")
        if not all(math.isfinite(v) for _, v in self.points):
            raise ValueError("series values must be finite")


@dataclass(frozen=True)
class GrowthVerdict:
    classification: str  # "bounded" | "logarithmic" | "linear"
    slope: float
    residual: float


def geometric_weights(n: int) -> np.ndarray:
    """Default spectral weights w_k = 2^-k for k = 1..n (summable, tail 2^-n)."""
    return 0.5 ** np.arange(1, n + 1)


def _resolve_weights(omega, n: int) -> tuple[np.ndarray, str]:
    if omega is None or omega == "geometric":
        return geometric_weights(n), "geometric"
    w = np.asarray(omega, dtype=float)
    if w.size < n:
        raise ValueError(f"need at least {n} weights, got {w.size}")
    return w[:n], "explicit"


def b1_series(n_values: Sequence[int], q: np.ndarray | None = None,
              omega="geometric") -> TruncationSeries:
    """Values of the symmetrized-pair projector sum against q at each truncation.

    ``q = None`` means the identity, the only case with a certified growth
    law; explicit q matrices (on the truncated two-slot space) are accepted
    for exploration.
    """
    n_values = sorted(int(n) for n in n_values)
    if n_values and n_values[0] < 2:
        raise ValueError("b1 truncations start at N = 2")
    n_max = n_values[-1] if n_values else 2
    weights, rule = _resolve_weights(omega, n_max)
    points = []
    for n in n_values:
        w = weights[:n]
        if q is None:
            value = 0.5 * ((n - 1) * w[0] + float(np.sum(w[1:])))
        else:
            value = _b1_reduced(w, np.asarray(q, dtype=complex), n)
        points.append((n, float(value)))
    return TruncationSeries(label="b1", points=tuple(points), omega_rule=rule)


def _b1_reduced(weights: np.ndarray, q: np.ndarray, n: int) -> float:
    """Reduced formula sum_{i=2..N} (w_1 f(1,j2,1) + w_i f(i,j2,i))/2 over j2."""
    if q.shape != (n * n, n * n):
        raise ValueError(f"q must act on the truncated two-slot space, shape {(n * n,) * 2}")

    def f(a: int, b: int, c: int) -> complex:
        # <psi_a psi_b | q | psi_b psi_c> with 1-based indices
        return q[(a - 1) * n + (b - 1), (b - 1) * n + (c - 1)]

    total = 0.0 + 0.0j
    for i in range(2, n + 1):
        for j2 in range(1, n + 1):
            total += 0.5 * (weights[0] * f(1, j2, 1) + weights[i - 1] * f(i, j2, i))
    return float(total.real)


def b1_direct_value(n: int, omega="geometric") -> float:
    """Four-index basis-sum evaluation of the b1 value on the truncated space.

    Builds P_N explicitly from the symmetrized pair vectors and sums the
    two-time expansion term by term; small n only, used to corroborate the
    reduced formula.
    """
    if n < 2:
        raise ValueError("b1 truncations start at N = 2")
    weights, _ = _resolve_weights(omega, n)
    p = np.zeros((n * n, n * n), dtype=complex)
    for i in range(2, n + 1):
        phi = np.zeros(n * n, dtype=complex)
        phi[(i - 1) * n + 0] = 1.0 / math.sqrt(2.0)
        phi[0 * n + (i - 1)] = 1.0 / math.sqrt(2.0)
        p += np.outer(phi, phi.conj())
    q = np.eye(n * n, dtype=complex)
    total = 0.0 + 0.0j
    for j1 in range(n):
        for j2 in range(n):
            for j3 in range(n):
                for j4 in range(n):
                    term_p = p[j4 * n + j3, j1 * n + j4]
                    if term_p == 0.0:
                        continue
                    term_q = q[j1 * n + j2, j2 * n + j3]
                    total += weights[j1] * term_p * term_q
    return float(total.real)


def b2_series(n_values: Sequence[int], omega="geometric") -> TruncationSeries:
    """S(N) = sum_{k1,k4 <= N} w_k1 / (k1 + k4) via harmonic partial sums."""
    n_values = sorted(int(n) for n in n_values)
    if n_values and n_values[0] < 1:
        raise ValueError("b2 truncations start at N = 1")
    n_max = n_values[-1] if n_values else 1
    weights, rule = _resolve_weights(omega, n_max)
    harmonic = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, 2 * n_max + 1))])
    points = []
    for n in n_values:
        k = np.arange(1, n + 1)
        value = float(np.sum(weights[:n] * (harmonic[n + k] - harmonic[k])))
        points.append((n, value))
    return TruncationSeries(label="b2", points=tuple(points), omega_rule=rule)


def shell_operator(shell_max: int, dim: int) -> np.ndarray:
    """Partial sum over index shells k1 + k4 <= shell_max of the b2 operator.

    Lives on the dim^2-dimensional two-slot truncation; successive partial
    sums are Cauchy in operator norm with ||h_n - h_m|| <= max(1/n, 1/m).
    """
    if dim < shell_max - 1:
        raise ValueError("truncated dimension too small for the requested shells")
    h = np.zeros((dim * dim, dim * dim), dtype=complex)
    for total in range(2, shell_max + 1):
        for k1 in range(1, total):
            k4 = total - k1
            row = (k4 - 1) * dim + (k1 - 1)
            col = (k1 - 1) * dim + (k4 - 1)
            h[row, col] += 1.0 / total
    return h


def growth_fit(series: TruncationSeries) -> GrowthVerdict:
    """Classify a truncation series as bounded, logarithmic, or linear.

    Needs at least 5 points spanning two decades.  A series is bounded when
    its spread is small relative to its mean; otherwise the log and linear
    models compete on normalized RMS residual.
    """
    ns = np.array([n for n, _ in series.points], dtype=float)
    vs = np.array([v for _, v in series.points], dtype=float)
    if len(ns) < 5 or ns.max() < 100 * ns.min():
        raise ValueError("too few points: need >= 5 spanning >= 2 decades")

    mean = float(vs.mean())
    spread = float(np.sqrt(np.mean((vs - mean) ** 2)))
    flat_residual = spread / max(abs(mean), np.finfo(float).tiny)
    if flat_residual <= FIT_RESIDUAL_THRESHOLD:
        return GrowthVerdict(classification="bounded", slope=0.0,
                             residual=flat_residual)

    def fitted(x: np.ndarray) -> tuple[float, float]:
        design = np.column_stack([np.ones_like(x), x])
        coef, *_ = np.linalg.lstsq(design, vs, rcond=None)
        rms = float(np.sqrt(np.mean((vs - design @ coef) ** 2)))
        return float(coef[1]), rms / spread

    slope_log, res_log = fitted(np.log(ns))
    slope_lin, res_lin = fitted(ns)
    if res_log <= res_lin:
        return GrowthVerdict(classification="logarithmic", slope=slope_log,
                             residual=res_log)
    return GrowthVerdict(classification="linear", slope=slope_lin, residual=res_lin)
