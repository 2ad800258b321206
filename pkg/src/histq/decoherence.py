"""The standard decoherence functional in three equivalent representations.

For histories h ~ {P_t1, ..., P_tn} and k ~ {Q_t1, ..., Q_tn} (Heisenberg
picture, earliest time leftmost) the functional is

    d(h, k) = tr( C(h)^dag rho C(k) ),     C(h) = P_t1 P_t2 ... P_tn,

conjugate linear in the first slot.  :func:`d_trace` evaluates this chain
form, :func:`d_basis_sum` the expansion over products of orthonormal bases,
and :class:`IlsOperator` the reconstruction d(p, q) = tr((p (x) q) X) from a
single operator X on the doubled tensor space.  :func:`d_form` is the
sesquilinear extension to arbitrary operators on one support sector via the
chain map.

The reconstruction is performed on a Hermitian operator basis, where the
bilinear and sesquilinear extensions agree; values of ``pair_value`` are
therefore only claimed for self-adjoint arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import SystemModel, TimeGrid, as_operator, tensor_product
from .histories import (
    HistoryOperator,
    HomogeneousHistory,
    chain_map,
    class_operator,
    embed,
    support_reduce,
)

__all__ = [
    "DecoherenceState",
    "SECTOR_CAP",
    "d_trace",
    "d_form",
    "d_basis_sum",
    "density",
    "hermitian_basis",
    "IlsOperator",
    "ils_reconstruct",
]

# Largest admitted operator-space dimension dim^(2n) for the X / T solvers.
SECTOR_CAP = 81

Extended = Union[HistoryOperator, Sequence[tuple[complex, HomogeneousHistory]]]


@dataclass(frozen=True)
class DecoherenceState:
    """An initial state rho together with the admissible time grid."""

    model: SystemModel
    grid: TimeGrid

    def sector_operator(self, b: Extended) -> HistoryOperator:
        """Coerce a history operator or weighted-history combination."""
        if isinstance(b, HistoryOperator):
            return b
        terms = list(b)
        if not terms:
            raise ValueError("empty linear combination")
        supports = {h.times for _, h in terms}
        if len(supports) != 1:
            raise ValueError("mixed temporal support")
        support = terms[0][1].times
        if len(support) == 0:
            raise ValueError("cannot embed on an empty support")
        op = np.zeros((self.model.dim ** len(support),) * 2, dtype=complex)
        for c, h in terms:
            op = op + complex(c) * embed(self.model, h, support, self.grid.t0).op
        return HistoryOperator(support=support, dim=self.model.dim, op=op)


def _chain(ds: DecoherenceState, h: HomogeneousHistory) -> np.ndarray:
    h = support_reduce(h)
    for t in h.times:
        ds.grid.require(t)
    return class_operator(ds.model, h, ds.grid.t0)


def d_trace(ds: DecoherenceState, h: HomogeneousHistory, k: HomogeneousHistory) -> complex:
    """Chain form of the decoherence functional on two homogeneous histories.

    Histories are canonicalized first; distinct supports are fine because
    identity padding never changes the chains.
    """
    ch = _chain(ds, h)
    ck = _chain(ds, k)
    return complex(np.trace(ch.conj().T @ ds.model.rho @ ck))


def d_form(ds: DecoherenceState, b1: Extended, b2: Extended) -> complex:
    """Sesquilinear extension tr(pi(b1)^dag rho pi(b2)) on a common support."""
    x = ds.sector_operator(b1)
    y = ds.sector_operator(b2)
    if x.support != y.support:
        raise ValueError("mixed temporal support")
    cx = chain_map(x.op, x.dim, x.n_times)
    cy = chain_map(y.op, y.dim, y.n_times)
    return complex(np.trace(cx.conj().T @ ds.model.rho @ cy))


def _flat(index: tuple[int, ...], dim: int) -> int:
    out = 0
    for i in index:
        out = out * dim + i
    return out


def d_basis_sum(ds: DecoherenceState, p: Extended, q: Extended,
                bases: Sequence[np.ndarray] | None = None) -> complex:
    """Basis-expansion form of the functional on an n-time support.

    Sums over 2n basis indices: one running over the spectral resolution of
    rho and 2n-1 auxiliary orthonormal bases.  By default every auxiliary
    basis is the rho eigenbasis; any list of 2n-1 unitaries (columns = basis
    vectors) may be supplied instead, and the value must not depend on the
    choice.
    """
    x = ds.sector_operator(p)
    y = ds.sector_operator(q)
    if x.support != y.support:
        raise ValueError("mixed temporal support")
    dim = ds.model.dim
    n = x.n_times
    psi = ds.model.vectors
    if bases is None:
        aux = {kk: psi for kk in range(2, 2 * n + 1)}
    else:
        if len(bases) != 2 * n - 1:
            raise ValueError(f"expected {2 * n - 1} auxiliary bases")
        aux = {kk: as_operator(b) for kk, b in zip(range(2, 2 * n + 1), bases)}

    # Slot bases of the four index groups appearing in the expansion.
    left_p = [aux[kk] for kk in range(2 * n, n, -1)]
    right_p = [psi] + [aux[kk] for kk in range(2 * n, n + 1, -1)]
    left_q = [psi] + [aux[kk] for kk in range(2, n + 1)]
    right_q = [aux[kk] for kk in range(2, n + 2)]

    pt = tensor_product(left_p).conj().T @ x.op @ tensor_product(right_p)
    qt = tensor_product(left_q).conj().T @ y.op @ tensor_product(right_q)

    weights = ds.model.weights
    total = 0.0 + 0.0j
    for j in np.ndindex(*([dim] * (2 * n))):
        # j[k] carries basis index number k+1.
        w = weights[j[0]]
        if w == 0.0:
            continue
        row_p = _flat(tuple(j[m] for m in range(2 * n - 1, n - 1, -1)), dim)
        col_p = _flat((j[0],) + tuple(j[m] for m in range(2 * n - 1, n, -1)), dim)
        row_q = _flat(tuple(j[m] for m in range(0, n)), dim)
        col_q = _flat(tuple(j[m] for m in range(1, n + 1)), dim)
        total += w * pt[row_p, col_p] * qt[row_q, col_q]
    return complex(total)


def density(ds: DecoherenceState, p: Extended, q: Extended) -> complex:
    """Decoherence value per quantum degree of freedom on the support sector."""
    x = ds.sector_operator(p)
    return d_form(ds, x, q) / (ds.model.dim ** x.n_times)


def hermitian_basis(k: int) -> np.ndarray:
    """Stack of k^2 Hermitian matrices, orthonormal under tr(A B).

    Order: diagonal units, then for each pair i < j the symmetric and the
    antisymmetric combination.
    """
    mats = []
    for i in range(k):
        m = np.zeros((k, k), dtype=complex)
        m[i, i] = 1.0
        mats.append(m)
    for i in range(k):
        for j in range(i + 1, k):
            m = np.zeros((k, k), dtype=complex)
            m[i, j] = m[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(m)
            m = np.zeros((k, k), dtype=complex)
            m[i, j] = -1j / np.sqrt(2.0)
            m[j, i] = 1j / np.sqrt(2.0)
            mats.append(m)
    return np.stack(mats)


@dataclass(frozen=True)
class IlsOperator:
    """Operator X on the doubled tensor space with tr((p (x) q) X) = d(p, q)."""

    support: tuple[float, ...]
    dim: int
    xd: np.ndarray

    def pair_value(self, p: np.ndarray, q: np.ndarray) -> complex:
        """Reconstructed d(p, q); exact only for self-adjoint p, q."""
        return complex(np.trace(tensor_product([p, q]) @ self.xd))


def ils_reconstruct(ds: DecoherenceState, support: Sequence[float]) -> IlsOperator:
    """Solve for the doubled-space operator reproducing the functional.

    Expands over the Hermitian basis {G_a} of the support sector:
    X = sum_ab d(G_a, G_b) G_a (x) G_b, which is the unique operator matching
    the functional on all Hermitian pairs.  Its trace is d(1, 1) = 1.
    """
    support = tuple(float(t) for t in support)
    for t in support:
        ds.grid.require(t)
    dim = ds.model.dim
    n = len(support)
    if dim ** (2 * n) > SECTOR_CAP:
        raise ValueError("support too large for ILS reconstruction")
    k = dim ** n
    basis = hermitian_basis(k)
    chains = np.stack([chain_map(g, dim, n) for g in basis])
    # values[a, b] = tr( chain(G_a)^dag rho chain(G_b) )
    values = np.einsum("aji,jk,bki->ab", chains.conj(), ds.model.rho, chains,
                       optimize=True)
    mixed = np.einsum("ab,aij,bkl->ikjl", values, basis, basis, optimize=True)
    xd = mixed.reshape(k * k, k * k)
    return IlsOperator(support=support, dim=dim, xd=xd)
