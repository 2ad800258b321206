"""The built-in property suite behind the ``verify`` subcommand.

Each check exercises one contract of the engine on the supplied scenario plus
seeded random side scenarios, and records the worst residual it saw together
with the threshold it was held to.  All randomness is drawn from one
generator seeded by the scenario, so two runs produce identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .consistency import (
    check_window,
    check_window_operators,
    is_refinement,
    search_windows,
    set_partitions,
    window,
)
from .core import SystemModel, TimeGrid, active_tolerances
from .decoherence import DecoherenceState, d_basis_sum, d_form, d_trace, ils_reconstruct
from .divergence import b1_direct_value, b1_series, b2_series, growth_fit
from .entropy import refinement_gap, window_entropy, window_entropy_pnorm
from .histories import embed, history
from .propositions import hs_inner, probability, proposition, unit_proposition, wright_operator
from .sampling import random_model, random_operator, random_projector, random_pvm
from .scenario import Scenario

__all__ = ["CheckResult", "run_suite"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str


def _side_states(rng, dims=(2, 3), times=(0.0, 1.0)) -> list[DecoherenceState]:
    grid = TimeGrid(times=times)
    out = []
    for dim in dims:
        out.append(DecoherenceState(model=random_model(rng, dim), grid=grid))
    return out


def _product_history(rng, ds: DecoherenceState, n_times: int):
    entries = {}
    for t in ds.grid.times[:n_times]:
        entries[t] = random_projector(rng, ds.model.dim)
    return history(entries)


def _check_axioms(scn: Scenario, rng) -> CheckResult:
    worst = 0.0
    states = _side_states(rng) + [DecoherenceState(model=scn.model, grid=scn.grid)]
    unit = history({})
    for ds in states:
        worst = max(worst, abs(d_trace(ds, unit, unit) - 1.0))
        for _ in range(10):
            n = int(rng.integers(1, min(2, len(ds.grid.times)) + 1))
            h = _product_history(rng, ds, n)
            k = _product_history(rng, ds, n)
            hk = d_trace(ds, h, k)
            worst = max(worst, abs(hk - d_trace(ds, k, h).conjugate()))
            worst = max(worst, max(0.0, -d_trace(ds, h, h).real))
    return CheckResult("decoherence-axioms", worst <= 1e-12, worst, 1e-12,
                       "unit norm, Hermiticity, diagonal positivity")


def _check_representations(scn: Scenario, rng) -> CheckResult:
    worst = 0.0
    states = _side_states(rng)
    if scn.dim ** (2 * min(2, len(scn.grid.times))) <= 81:
        states.append(DecoherenceState(model=scn.model, grid=scn.grid))
    for ds in states:
        for n in (1, 2):
            if n > len(ds.grid.times) or ds.model.dim ** (2 * n) > 81:
                continue
            support = ds.grid.times[:n]
            ils = ils_reconstruct(ds, support)
            for _ in range(8):
                h = _product_history(rng, ds, n)
                k = _product_history(rng, ds, n)
                ref = d_trace(ds, h, k)
                hb = embed(ds.model, h, support, ds.grid.t0)
                kb = embed(ds.model, k, support, ds.grid.t0)
                worst = max(worst, abs(ref - d_basis_sum(ds, hb, kb)))
                worst = max(worst, abs(ref - ils.pair_value(hb.op, kb.op)))
    return CheckResult("representation-agreement", worst <= 1e-9, worst, 1e-9,
                       "chain form vs basis sum vs doubled-space reconstruction")


def _check_wright(scn: Scenario, rng) -> CheckResult:
    worst_state = 0.0
    worst_agree = 0.0
    worst_selfadj = 0.0
    states = _side_states(rng)
    for ds in states:
        for n in (1, 2):
            if ds.model.dim ** (2 * n) > 81:
                continue
            support = ds.grid.times[:n]
            t = wright_operator(ds, support)
            e = unit_proposition(t.space)
            worst_state = max(worst_state, abs(probability(t, e) - 1.0))
            worst_selfadj = max(worst_selfadj,
                                float(np.max(np.abs(t.matrix - t.matrix.conj().T)))
                                / t.space.op_dim)
            for _ in range(10):
                b = proposition(t.space, random_operator(rng, t.space.op_dim))
                hb = b.as_history_operator()
                worst_agree = max(worst_agree,
                                  abs(probability(t, b) - d_form(ds, hb, hb).real))
    worst = max(worst_state, worst_agree, worst_selfadj)
    passed = worst_state <= 1e-12 and worst_agree <= 1e-9 and worst_selfadj <= 1e-10
    return CheckResult("wright-state", passed, worst, 1e-9,
                       "unit expectation, quadratic-form agreement, self-adjointness")


def _scenario_windows(scn: Scenario, ds: DecoherenceState):
    if not scn.pvms:
        return None, []
    support = scn.grid.times[:len(scn.pvms)]
    if scn.dim ** (2 * len(support)) > 81:
        return None, []
    t = wright_operator(ds, support)
    return t, search_windows(ds, t, scn.pvms)


def _bridge_candidates(ds: DecoherenceState, t, rng, two_time: bool):
    """All coarse grainings of one random product family, unfiltered."""
    dim = ds.model.dim
    base = random_pvm(rng, dim)
    if two_time:
        second = random_pvm(rng, dim)
        base = [np.kron(a, b) for a in base for b in second]
    for blocks in set_partitions(base):
        yield window(t.space, [np.sum(block, axis=0) for block in blocks])


def _check_bridge(scn: Scenario, rng) -> CheckResult:
    tol = active_tolerances()
    mismatches = 0
    checked = 0
    states = _side_states(rng, dims=(2, 2, 3))
    for ds in states:
        for two_time in (False, True):
            if two_time and ds.model.dim > 2:
                continue  # keeps the partition count desk scale
            n = 2 if two_time else 1
            t = wright_operator(ds, ds.grid.times[:n])
            for w in _bridge_candidates(ds, t, rng, two_time):
                krep = check_window(w, t)
                if any(p <= tol.strict_positive for p in w.probabilities):
                    continue
                checked += 1
                oprep = check_window_operators(ds, w)
                if krep.consistent != oprep.consistent:
                    mismatches += 1
    ds_scn = DecoherenceState(model=scn.model, grid=scn.grid)
    t, found = _scenario_windows(scn, ds_scn)
    for w in found:
        if w.probabilities and all(p > tol.strict_positive for p in w.probabilities):
            checked += 1
            if check_window(w, t).consistent != check_window_operators(ds_scn, w).consistent:
                mismatches += 1
    return CheckResult("picture-bridge", mismatches == 0, float(mismatches), 0.0,
                       f"verdict agreement on {checked} strictly positive windows")


def _check_gap_grid(scn: Scenario, rng) -> CheckResult:
    grid = np.logspace(math.log10(0.1), math.log10(10.0), 60)
    worst = 0.0
    argmin_ok = True
    for q in (1.0, 1.5, 2.0, 3.0):
        for ia, a in enumerate(grid):
            values = [refinement_gap(a, b, q) for b in grid]
            worst = min(worst, min(values))
            if abs(int(np.argmin(values)) - ia) > 1:
                argmin_ok = False
    passed = worst >= -1e-12 and argmin_ok
    return CheckResult("split-gap-grid", passed, abs(min(worst, 0.0)), 1e-12,
                       "nonnegativity and argmin location on the 60x60 grid")


def _check_divergence(scn: Scenario, rng) -> CheckResult:
    ns1 = sorted(set(int(round(x)) for x in np.logspace(1, 4, 12)))
    fit1 = growth_fit(b1_series(ns1))
    s1_ok = fit1.classification == "linear" and abs(fit1.slope - 0.25) <= 0.0025

    ns2 = [2 ** k for k in range(4, 15)]
    s2 = b2_series(ns2)
    fit2 = growth_fit(s2)
    values = dict(s2.points)
    doubling = [values[2 ** (k + 1)] - values[2 ** k] for k in range(10, 14)]
    s2_ok = (fit2.classification == "logarithmic"
             and abs(fit2.slope - 1.0) <= 0.05
             and all(abs(d - math.log(2)) <= 0.05 for d in doubling))

    direct_worst = 0.0
    for n in (2, 4, 6):
        reduced = dict(b1_series([n]).points)[n]
        direct_worst = max(direct_worst, abs(reduced - b1_direct_value(n)))
    passed = s1_ok and s2_ok and direct_worst <= 1e-10
    return CheckResult(
        "divergence-trends", passed, direct_worst, 1e-10,
        f"b1 slope {fit1.slope:.6f} ({fit1.classification}), "
        f"b2 slope {fit2.slope:.4f} ({fit2.classification}), "
        f"reduced-vs-direct residual {direct_worst:.2e}")


def _check_entropy(scn: Scenario, rng) -> CheckResult:
    worst_identity = 0.0
    worst_p2 = 0.0
    monotone_ok = True
    pairs = 0
    states = _side_states(rng, dims=(2, 3, 4), times=(0.0,))
    for ds in states:
        t = wright_operator(ds, (0.0,))
        found = search_windows(ds, t, [[random_pvm(rng, ds.model.dim)]])
        for w in found:
            rep = window_entropy(t, w)
            shannon = -sum(p * math.log(p) for p in w.probabilities)
            regroup = shannon + sum(
                p * math.log(hs_inner(x, x).real)
                for p, x in zip(w.probabilities, w.members))
            worst_identity = max(worst_identity, abs(rep.value - regroup))
            worst_p2 = max(worst_p2,
                           abs(rep.value - window_entropy_pnorm(ds, w, 2.0).value))
        for coarse in found:
            for fine in found:
                if fine is coarse or not is_refinement(fine, coarse):
                    continue
                pairs += 1
                for p in (1.0, 1.5, 2.0):
                    drop = (window_entropy_pnorm(ds, coarse, p).value
                            - window_entropy_pnorm(ds, fine, p).value)
                    if drop < -1e-10:
                        monotone_ok = False

    # p = 3 must fail monotonicity on the maximally mixed qubit split.
    mm = DecoherenceState(
        model=SystemModel.from_matrices(np.zeros((2, 2)), np.eye(2) / 2),
        grid=TimeGrid(times=(0.0,)))
    t = wright_operator(mm, (0.0,))
    coarse_w = window(t.space, [np.eye(2, dtype=complex)])
    fine_w = window(t.space, [np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
    rise = (window_entropy_pnorm(mm, fine_w, 3.0).value
            - window_entropy_pnorm(mm, coarse_w, 3.0).value)
    counterexample_ok = abs(rise - math.log(2) / 3.0) <= 1e-6

    worst = max(worst_identity, worst_p2)
    passed = (worst_identity <= 1e-12 and worst_p2 <= 1e-10
              and monotone_ok and counterexample_ok)
    return CheckResult(
        "entropy-identities", passed, worst, 1e-10,
        f"regrouping and p=2 agreement, monotone on {pairs} refinement pairs, "
        f"p=3 counterexample rise {rise:.6f}")


def run_suite(scn: Scenario, seed: int | None = None) -> list[CheckResult]:
    """Run every property check; deterministic for a fixed scenario and seed."""
    rng = np.random.default_rng(scn.seed if seed is None else seed)
    checks = [
        _check_axioms,
        _check_representations,
        _check_wright,
        _check_bridge,
        _check_gap_grid,
        _check_divergence,
        _check_entropy,
    ]
    return [check(scn, rng) for check in checks]
