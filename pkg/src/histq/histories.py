"""Homogeneous histories, their canonical support, and the class-operator map.

A homogeneous history assigns one projector to each of finitely many times.
Its canonical representative drops every identity entry (inserting or removing
identities does not change the physics), and the remaining times form the
history's support.  Two maps take histories to operators:

* :func:`embed` produces the projector on the tensor-product space over the
  support, with each factor transported to the Heisenberg picture;
* :func:`class_operator` produces the time-ordered product of the transported
  projectors on the single-time space (earliest factor leftmost).

:func:`chain_map` is the linear extension of the second map to arbitrary
operators on the tensor space, obtained by expanding in matrix-unit dyads and
multiplying the slots out in time order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (
    SystemModel,
    Tolerances,
    active_tolerances,
    as_operator,
    heisenberg,
    is_projector,
    max_abs,
    tensor_product,
)

__all__ = [
    "HomogeneousHistory",
    "HistoryOperator",
    "history",
    "support_reduce",
    "embed",
    "class_operator",
    "class_operator_sum",
    "chain_map",
]


@dataclass(frozen=True)
class HomogeneousHistory:
    """Ordered (time, projector) pairs; empty items mean the unit proposition."""

    items: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self):
        tol = active_tolerances()
        seen = set()
        for t, p in self.items:
            if t in seen:
                raise ValueError(f"duplicate time {t!r} in history")
            seen.add(t)
            if not is_projector(p, tol):
                raise ValueError(f"history entry at time {t!r} is not a projector")
        if any(b <= a for (a, _), (b, _) in zip(self.items, self.items[1:])):
            raise ValueError("history times must be strictly increasing")

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.items)

    def operator_at(self, t: float) -> np.ndarray:
        for s, p in self.items:
            if s == t:
                return p
        raise KeyError(t)


def history(entries: Mapping[float, np.ndarray]) -> HomogeneousHistory:
    """Build a history from a time -> projector mapping."""
    items = tuple(sorted(((float(t), as_operator(p)) for t, p in entries.items()),
                         key=lambda tp: tp[0]))
    return HomogeneousHistory(items)


def support_reduce(h: HomogeneousHistory, tol: Tolerances | None = None) -> HomogeneousHistory:
    """Canonical representative: drop every time whose entry is the identity."""
    tol = tol or active_tolerances()
    kept = []
    for t, p in h.items:
        eye = np.eye(p.shape[0])
        if max_abs(p - eye) > tol.equality * max(max_abs(p), 1.0):
            kept.append((t, p))
    return HomogeneousHistory(tuple(kept))


@dataclass(frozen=True)
class HistoryOperator:
    """Operator on the tensor space over an explicit temporal support."""

    support: tuple[float, ...]
    dim: int
    op: np.ndarray

    def __post_init__(self):
        n = len(self.support)
        expected = self.dim ** n
        m = as_operator(self.op)
        if m.shape[0] != expected:
            raise ValueError(
                f"operator dimension {m.shape[0]} does not match "
                f"(dim {self.dim})^{n} = {expected}")

    @property
    def n_times(self) -> int:
        return len(self.support)

    def is_projection(self, tol: Tolerances | None = None) -> bool:
        return is_projector(self.op, tol)


def embed(model: SystemModel, h: HomogeneousHistory,
          support: Sequence[float] | None = None, t0: float = 0.0) -> HistoryOperator:
    """Tensor product of the Heisenberg-transported projectors in time order.

    If ``support`` is given it must contain the history's times; missing times
    are padded with identities, so the empty history embeds as the identity on
    any support.
    """
    times = h.times
    if support is None:
        support = times
    support = tuple(float(t) for t in support)
    if any(b <= a for a, b in zip(support, support[1:])):
        raise ValueError("support times must be strictly increasing")
    if not set(times) <= set(support):
        raise ValueError("support does not contain the history's times")
    if len(support) == 0:
        raise ValueError("cannot embed on an empty support")
    factors = []
    for t in support:
        if t in times:
            factors.append(heisenberg(model, h.operator_at(t), t, t0))
        else:
            factors.append(np.eye(model.dim, dtype=complex))
    return HistoryOperator(support=support, dim=model.dim, op=tensor_product(factors))


def class_operator(model: SystemModel, h: HomogeneousHistory, t0: float = 0.0) -> np.ndarray:
    """Time-ordered product of the Heisenberg projectors on the single-time space.

    The map is not injective: repeating a projector at a second time yields
    the same operator by idempotence.  The result has operator norm <= 1.
    """
    out = np.eye(model.dim, dtype=complex)
    for t, p in h.items:
        out = out @ heisenberg(model, p, t, t0)
    return out


def class_operator_sum(model: SystemModel,
                       terms: Sequence[tuple[complex, HomogeneousHistory]],
                       t0: float = 0.0) -> np.ndarray:
    """Linear extension over weighted histories sharing one temporal support."""
    if len(terms) == 0:
        raise ValueError("empty linear combination")
    supports = {h.times for _, h in terms}
    if len(supports) != 1:
        raise ValueError("mixed temporal support")
    out = np.zeros((model.dim, model.dim), dtype=complex)
    for c, h in terms:
        out = out + complex(c) * class_operator(model, h, t0)
    return out


def chain_map(op: np.ndarray, dim: int, n_times: int | None = None) -> np.ndarray:
    """Collapse an operator on dim^n tensor space to the ordered single-time product.

    On a homogeneous element b_1 (x) ... (x) b_n the result is b_1 b_2 ... b_n;
    general operators are handled by linearity over matrix-unit dyads, which
    here reduces to one tensor contraction.
    """
    op = as_operator(op)
    if n_times is None:
        n_times = int(round(np.log(op.shape[0]) / np.log(dim))) if dim > 1 else 1
    if dim ** n_times != op.shape[0]:
        raise ValueError("operator dimension is not a power of dim")
    if n_times == 1:
        return op.copy()
    tensor = op.reshape([dim] * (2 * n_times))
    # row slots i_1..i_n, column slots j_1..j_n; the dyad product forces
    # j_k = i_{k+1}, leaving indices (i_1, j_n).
    subscripts = list(range(n_times)) + list(range(1, n_times + 1))
    return np.einsum(tensor, subscripts, [0, n_times])
