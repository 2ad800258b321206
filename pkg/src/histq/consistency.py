"""Consistent windows in both pictures, refinement, and window search.

A window is a finite family of propositions on one sector.  In the sector
picture it is consistent for a state T when the members are mutually
orthogonal, sum to e, carry strictly positive probabilities <= 1, and the
probabilities add up to 1.  In the operator picture a projector family is
consistent when the projections are mutually orthogonal, complete, and all
off-diagonal decoherence values have vanishing real part.

The search enumerates coarse grainings of product-history families built from
per-time projective decompositions; set partitions are generated as
restricted-growth strings so that ordering is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import Tolerances, active_tolerances, as_operator, heisenberg, is_projector, max_abs
from .decoherence import DecoherenceState, d_form
from .propositions import (
    Proposition,
    PropositionSpace,
    WrightOperator,
    hs_inner,
    probability,
    proposition,
    unit_proposition,
)

__all__ = [
    "ConsistencyReport",
    "Window",
    "window",
    "check_window",
    "check_window_operators",
    "is_refinement",
    "search_windows",
    "is_maximally_refined",
    "restricted_growth_strings",
    "set_partitions",
    "MAX_BASE_FAMILY",
]

MAX_BASE_FAMILY = 12


@dataclass
class ConsistencyReport:
    verdict: str  # "consistent" | "inconsistent"
    violated: tuple[str, ...]
    max_residual: float

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"


@dataclass(eq=False)
class Window:
    """Finite family of propositions; probabilities are filled by the checks."""

    space: PropositionSpace
    members: tuple[Proposition, ...]
    probabilities: tuple[float, ...] | None = None
    kreport: ConsistencyReport | None = None
    opreport: ConsistencyReport | None = None
    label: str = ""

    def __post_init__(self):
        if len(self.members) == 0:
            raise ValueError("window must have at least one member")
        for x in self.members:
            if x.space != self.space:
                raise ValueError("sector mismatch")


def window(space: PropositionSpace, ops: Sequence[np.ndarray], label: str = "") -> Window:
    members = tuple(proposition(space, op) for op in ops)
    return Window(space=space, members=members, label=label)


def _verdict(violated: list[str], residuals: list[float]) -> ConsistencyReport:
    return ConsistencyReport(
        verdict="consistent" if not violated else "inconsistent",
        violated=tuple(violated),
        max_residual=max(residuals) if residuals else 0.0,
    )


def check_window(w: Window, t: WrightOperator, tol: Tolerances | None = None) -> ConsistencyReport:
    """Sector-picture consistency of ``w`` for the state ``t``.

    Conditions: pairwise orthogonality, completeness (sum = e), strict
    positivity 0 < p <= 1, and additivity of the probabilities as a measure
    on the Boolean algebra the members generate, i.e. Re <x_i, T x_j> = 0 for
    i != j together with sum p = 1.  (The total sum alone is too weak: for a
    complete product family it equals 1 identically even with interference
    between the members.)  Fills ``w.probabilities`` as a side effect.
    """
    tol = tol or active_tolerances()
    if w.space != t.space:
        raise ValueError("sector mismatch")
    violated: list[str] = []
    residuals: list[float] = []

    orth = 0.0
    for i, j in itertools.combinations(range(len(w.members)), 2):
        orth = max(orth, abs(hs_inner(w.members[i], w.members[j])))
    residuals.append(orth)
    if orth > tol.consistency:
        violated.append("orthogonality")

    total = sum(x.op for x in w.members)
    comp = max_abs(total - np.eye(w.space.op_dim))
    residuals.append(comp)
    if comp > tol.consistency:
        violated.append("completeness")

    probs = tuple(probability(t, x) for x in w.members)
    w.probabilities = probs
    if any(p <= tol.strict_positive or p > 1.0 + tol.consistency for p in probs):
        violated.append("positivity")
    residuals.append(max([p - 1.0 for p in probs if p > 1.0], default=0.0))

    images = [t.apply(x) for x in w.members]
    add = abs(sum(probs) - 1.0)
    for i, j in itertools.combinations(range(len(w.members)), 2):
        add = max(add, abs(hs_inner(w.members[i], images[j]).real))
    residuals.append(add)
    if add > tol.consistency:
        violated.append("additivity")

    report = _verdict(violated, residuals)
    w.kreport = report
    return report


def check_window_operators(ds: DecoherenceState, w: Window,
                           tol: Tolerances | None = None) -> ConsistencyReport:
    """Operator-picture consistency: orthogonal complete projections with
    vanishing real off-diagonal decoherence values."""
    tol = tol or active_tolerances()
    for x in w.members:
        if not is_projector(x.op, tol):
            raise ValueError("non-projector member")
    violated: list[str] = []
    residuals: list[float] = []

    orth = 0.0
    for i, j in itertools.combinations(range(len(w.members)), 2):
        orth = max(orth, max_abs(w.members[i].op @ w.members[j].op))
    residuals.append(orth)
    if orth > tol.consistency:
        violated.append("orthogonality")

    total = sum(x.op for x in w.members)
    comp = max_abs(total - np.eye(w.space.op_dim))
    residuals.append(comp)
    if comp > tol.consistency:
        violated.append("completeness")

    cross = 0.0
    hops = [x.as_history_operator() for x in w.members]
    for i, j in itertools.combinations(range(len(hops)), 2):
        cross = max(cross, abs(d_form(ds, hops[i], hops[j]).real))
    residuals.append(cross)
    if cross > tol.consistency:
        violated.append("re-cross-term")

    report = _verdict(violated, residuals)
    w.opreport = report
    return report


def is_refinement(fine: Window, coarse: Window, tol: Tolerances | None = None) -> bool:
    """True when every coarse member is the sum of a block of fine members,
    the blocks partitioning ``fine``.

    Assignment uses the overlap <y, x>/<y, y>, which determines the owning
    block for orthogonal families; the explicit sum check makes the answer
    sound either way.
    """
    tol = tol or active_tolerances()
    if fine.space != coarse.space:
        raise ValueError("sector mismatch")
    blocks: dict[int, list[Proposition]] = {i: [] for i in range(len(coarse.members))}
    for y in fine.members:
        normsq = hs_inner(y, y).real
        if normsq <= tol.strict_positive:
            return False
        scores = [hs_inner(y, x).real / normsq for x in coarse.members]
        owner = int(np.argmax(scores))
        if scores[owner] < 0.5:
            return False
        blocks[owner].append(y)
    for i, x in enumerate(coarse.members):
        total = sum((y.op for y in blocks[i]), np.zeros_like(x.op))
        if max_abs(total - x.op) > tol.consistency:
            return False
    return True


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted-growth strings of length n in lexicographic order.

    String a encodes the set partition with blocks {i : a[i] = v}.
    """
    if n == 0:
        yield ()
        return
    a = [0] * n
    b = [0] + [1] * (n - 1)  # b[j] = 1 + max(a[:j]); position 0 never increments
    while True:
        yield tuple(a)
        j = n - 1
        while j >= 0 and a[j] == b[j]:
            j -= 1
        if j < 1:
            return
        a[j] += 1
        for i in range(j + 1, n):
            a[i] = 0
            b[i] = max(b[j], a[j] + 1)


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """Set partitions of ``items`` in restricted-growth-string order."""
    items = list(items)
    for rgs in restricted_growth_strings(len(items)):
        nblocks = max(rgs) + 1 if rgs else 0
        blocks: list[list] = [[] for _ in range(nblocks)]
        for idx, value in enumerate(rgs):
            blocks[value].append(items[idx])
        yield blocks


def _member_key(op: np.ndarray) -> bytes:
    rounded = np.round(np.asarray(op, dtype=complex), 9) + 0.0
    return rounded.tobytes()


def _window_key(w: Window) -> tuple[bytes, ...]:
    return tuple(sorted(_member_key(x.op) for x in w.members))


def search_windows(ds: DecoherenceState, t: WrightOperator,
                   pvms: Sequence[Sequence[Sequence[np.ndarray]]],
                   budget: int | None = None,
                   tol: Tolerances | None = None) -> list[Window]:
    """Enumerate consistent coarse grainings of product-history families.

    ``pvms[k]`` lists the alternative projective decompositions offered at
    the k-th support time of ``t``.  For every choice of one decomposition
    per time, the Cartesian product of their elements (transported to the
    Heisenberg picture and tensored in time order) forms a base family of at
    most ``MAX_BASE_FAMILY`` orthogonal projectors; all set partitions of the
    base family are tested, up to ``budget`` partitions per family.

    Returns the consistent windows, deduplicated, largest first, with ties
    broken by a canonical byte key, so the output does not depend on the
    ordering of the supplied decomposition elements.
    """
    tol = tol or active_tolerances()
    space = t.space
    results: dict[tuple[bytes, ...], Window] = {}

    if len(pvms) == 0:
        w = Window(space=space, members=(unit_proposition(space),))
        check_window(w, t, tol)
        check_window_operators(ds, w, tol)
        return [w]

    if len(pvms) != space.n_times:
        raise ValueError("need one decomposition list per support time")
    for klists in pvms:
        if len(klists) == 0:
            raise ValueError("each time needs at least one decomposition")

    eye = np.eye(ds.model.dim)
    transported: list[list[list[np.ndarray]]] = []
    for time, klists in zip(space.support, pvms):
        per_time = []
        for pvm in klists:
            elements = [as_operator(p) for p in pvm]
            if max_abs(sum(elements) - eye) > tol.consistency:
                raise ValueError("decomposition elements must sum to the identity")
            per_time.append([heisenberg(ds.model, p, time, ds.grid.t0) for p in elements])
        transported.append(per_time)

    for choice in itertools.product(*transported):
        combos = list(itertools.product(*choice))
        if len(combos) > MAX_BASE_FAMILY:
            raise ValueError(
                f"base family too large: {len(combos)} > {MAX_BASE_FAMILY}")
        base = []
        for combo in combos:
            op = combo[0]
            for factor in combo[1:]:
                op = np.kron(op, factor)
            base.append(op)
        examined = 0
        for blocks in set_partitions(base):
            if budget is not None and examined >= budget:
                break
            examined += 1
            ops = [np.sum(block, axis=0) for block in blocks]
            cand = window(space, ops)
            krep = check_window(cand, t, tol)
            if not krep.consistent:
                continue
            if all(is_projector(x.op, tol) for x in cand.members):
                check_window_operators(ds, cand, tol)
            key = _window_key(cand)
            if key not in results:
                results[key] = cand

    ordered = sorted(results.items(), key=lambda kv: (-len(kv[1].members), kv[0]))
    return [w for _, w in ordered]


def is_maximally_refined(w: Window, candidates: Sequence[Window],
                         tol: Tolerances | None = None) -> bool:
    """True when no candidate is a strictly finer consistent refinement."""
    tol = tol or active_tolerances()
    for cand in candidates:
        if len(cand.members) > len(w.members) and is_refinement(cand, w, tol):
            return False
    return True
