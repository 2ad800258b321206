"""Information entropies of consistent windows.

For a sector state T and a consistent window W = {x_i} the entropy is

    I(T, W) = - sum_i p_i ln( p_i / <x_i, x_i> ),      p_i = <x_i, T x_i>,

in nats.  Each term subtracts the structural information carried by the
member's squared norm from the information of the probability, so the value
may be negative.  The p-norm family replaces <x, x> with ||x||_p^2; p = 2
recovers I(T, W) and p = 1 the original projector-dimension weighting.  The
family is monotone non-increasing under consistent refinement exactly for
1 <= p <= 2, which :func:`refinement_gap` quantifies for a single split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Tolerances, active_tolerances
from .consistency import Window, check_window, check_window_operators, is_refinement
from .decoherence import DecoherenceState, d_form
from .propositions import WrightOperator, hs_inner, p_norm

__all__ = [
    "EntropyTerm",
    "EntropyReport",
    "window_entropy",
    "window_entropy_pnorm",
    "refinement_gap",
    "min_entropy",
    "sup_refinement_entropy",
]


@dataclass(frozen=True)
class EntropyTerm:
    probability: float
    squared_norm: float
    contribution: float


@dataclass(frozen=True)
class EntropyReport:
    window_label: str
    p: float
    value: float
    terms: tuple[EntropyTerm, ...]


def _report(label: str, p: float, pairs: Sequence[tuple[float, float]],
            tol: Tolerances) -> EntropyReport:
    terms = []
    for prob, normsq in pairs:
        if prob <= tol.strict_positive:
            contribution = 0.0  # x ln x -> 0 limit
        else:
            contribution = -prob * math.log(prob / normsq)
        terms.append(EntropyTerm(prob, normsq, contribution))
    value = float(sum(t.contribution for t in terms))
    return EntropyReport(window_label=label, p=p, value=value, terms=tuple(terms))


def window_entropy(t: WrightOperator, w: Window,
                   tol: Tolerances | None = None) -> EntropyReport:
    """Entropy of a sector-consistent window for the state ``t``."""
    tol = tol or active_tolerances()
    report = check_window(w, t, tol)
    if not report.consistent:
        raise ValueError("entropy undefined for inconsistent window")
    pairs = [(p, hs_inner(x, x).real)
             for p, x in zip(w.probabilities, w.members)]
    return _report(w.label, 2.0, pairs, tol)


def window_entropy_pnorm(ds: DecoherenceState, w: Window, p: float,
                         tol: Tolerances | None = None) -> EntropyReport:
    """p-norm entropy of an operator-consistent projector window.

    p = 2 coincides with :func:`window_entropy`; p = 1 weighs each member by
    its squared normalized trace norm (rank over dimension for projectors).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    tol = tol or active_tolerances()
    report = check_window_operators(ds, w, tol)
    if not report.consistent:
        raise ValueError("entropy undefined for inconsistent window")
    pairs = []
    for x in w.members:
        b = x.as_history_operator()
        diag = d_form(ds, b, b).real
        pairs.append((diag, p_norm(x, p) ** 2))
    return _report(w.label, float(p), pairs, tol)


def refinement_gap(a: float, b: float, q: float) -> float:
    """a ln(a/b^q) - (1+a) ln((1+a)/(1+b)^q); nonnegative for q >= 1.

    This is the entropy drop caused by splitting one window member whose
    probability and squared-norm ratios between the parts are a and b.  The
    a = 0 limit uses x ln x -> 0.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    if a < 0:
        raise ValueError("a must be nonnegative")
    if q < 1:
        raise ValueError("q must be >= 1")
    first = 0.0 if a == 0 else a * (math.log(a) - q * math.log(b))
    second = (1.0 + a) * (math.log(1.0 + a) - q * math.log(1.0 + b))
    return first - second


def min_entropy(t: WrightOperator, family: Sequence[Window],
                tol: Tolerances | None = None) -> tuple[float, Window]:
    """Minimum window entropy over the consistent members of a family.

    An upper bound on the theory's entropy, since no finite family exhausts
    all consistent sets.  Ties break toward the lowest family index.
    """
    tol = tol or active_tolerances()
    best: tuple[float, int, Window] | None = None
    for idx, w in enumerate(family):
        if not check_window(w, t, tol).consistent:
            continue
        value = window_entropy(t, w, tol).value
        if best is None or (value, idx) < (best[0], best[1]):
            best = (value, idx, w)
    if best is None:
        raise ValueError("no consistent window in family")
    return best[0], best[2]


def sup_refinement_entropy(t: WrightOperator, w: Window, family: Sequence[Window],
                           tol: Tolerances | None = None) -> float:
    """Supremum of the entropy over consistent refinements of ``w`` in the family.

    ``w`` itself counts as a refinement; in finite dimension every value is
    finite, so the supremum is a maximum.
    """
    tol = tol or active_tolerances()
    values = [window_entropy(t, w, tol).value]
    for cand in family:
        if cand is w:
            continue
        if not check_window(cand, t, tol).consistent:
            continue
        if is_refinement(cand, w, tol):
            values.append(window_entropy(t, cand, tol).value)
    return max(values)
