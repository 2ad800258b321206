"""Batch front door: scenario files in, deterministic reports and CSV out.

Usage:
    histq <decohere|windows|entropy|diverge|verify>
          [--scenario PATH] [--out DIR] [--seed INT]
          [--max-n INT] [--series b1|b2]

Exit codes: 0 success, 2 scenario validation error, 3 property failure.
Without ``--scenario`` the bundled qubit scenario is used.
"""

from __future__ import annotations

import argparse
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .consistency import is_maximally_refined, search_windows
from .decoherence import DecoherenceState, d_basis_sum, d_trace, ils_reconstruct
from .divergence import b1_series, b2_series, growth_fit
from .entropy import min_entropy, sup_refinement_entropy, window_entropy, window_entropy_pnorm
from .histories import embed
from .propositions import hs_inner, wright_operator
from .report import (
    TAG_BASIS_SUM,
    TAG_CHAIN,
    TAG_ENTROPY,
    TAG_ILS,
    TAG_QUADRATIC,
    complex_entry,
    write_csv,
    write_json,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .verify import run_suite

__all__ = ["main", "bundled_scenario_path"]


def bundled_scenario_path() -> Path:
    return Path(resources.files("histq") / "scenarios" / "qubit.json")


def _scenario_section(scn: Scenario, source: str) -> dict:
    return {
        "source": source,
        "dim": scn.dim,
        "times": list(scn.grid.times),
        "t0": scn.grid.t0,
        "seed": scn.seed,
    }


def _decohere_payload(scn: Scenario) -> dict:
    ds = DecoherenceState(model=scn.model, grid=scn.grid)
    support = scn.grid.times
    rows = []
    residual_sum = 0.0
    residual_ils = 0.0
    labels = [label for label, _ in scn.histories]
    embedded = {label: embed(scn.model, h, support, scn.grid.t0)
                for label, h in scn.histories}
    ils = None
    ils_note = None
    try:
        ils = ils_reconstruct(ds, support)
    except ValueError as exc:
        ils_note = str(exc)
    for label_h, h in scn.histories:
        for label_k, k in scn.histories:
            chain = d_trace(ds, h, k)
            rows.append({"h": label_h, "k": label_k,
                         "representation": TAG_CHAIN,
                         "value": complex_entry(chain)})
            total = d_basis_sum(ds, embedded[label_h], embedded[label_k])
            rows.append({"h": label_h, "k": label_k,
                         "representation": TAG_BASIS_SUM,
                         "value": complex_entry(total)})
            residual_sum = max(residual_sum, abs(chain - total))
            if ils is not None:
                rec = ils.pair_value(embedded[label_h].op, embedded[label_k].op)
                rows.append({"h": label_h, "k": label_k,
                             "representation": TAG_ILS,
                             "value": complex_entry(rec)})
                residual_ils = max(residual_ils, abs(chain - rec))
    agreement = {
        "chain_vs_basis_sum": residual_sum,
        "chain_vs_ils": residual_ils if ils is not None else None,
    }
    if ils_note:
        agreement["ils_skipped"] = ils_note
    return {"histories": labels, "rows": rows, "agreement": agreement}


def _window_sections(scn: Scenario):
    ds = DecoherenceState(model=scn.model, grid=scn.grid)
    if not scn.pvms:
        raise ScenarioError("pvms", "scenario defines no decompositions to search")
    support = scn.grid.times[:len(scn.pvms)]
    t = wright_operator(ds, support)
    found = search_windows(ds, t, scn.pvms)
    for idx, w in enumerate(found):
        w.label = f"w{idx:02d}"
    return ds, t, found


def _report_entry(report) -> dict:
    return {
        "verdict": report.verdict,
        "violated": list(report.violated),
        "max_residual": report.max_residual,
    }


def _windows_payload(scn: Scenario, found=None) -> dict:
    if found is None:
        _, _, found = _window_sections(scn)
    entries = []
    for w in found:
        entries.append({
            "label": w.label,
            "members": len(w.members),
            "representation": TAG_QUADRATIC,
            "probabilities": [float(p) for p in w.probabilities],
            "squared_norms": [hs_inner(x, x).real for x in w.members],
            "sector_check": _report_entry(w.kreport),
            "operator_check": _report_entry(w.opreport) if w.opreport else None,
            "maximally_refined": is_maximally_refined(w, found),
        })
    return {"support": list(scn.grid.times[:len(scn.pvms)]), "windows": entries}


def _entropy_payload(scn: Scenario, sections=None) -> dict:
    ds, t, found = sections if sections is not None else _window_sections(scn)
    table = []
    for w in found:
        for p in scn.entropy_p:
            if p == 2.0:
                rep = window_entropy(t, w)
            else:
                try:
                    rep = window_entropy_pnorm(ds, w, p)
                except ValueError:
                    continue
            table.append({
                "window": w.label,
                "p": float(p),
                "representation": TAG_ENTROPY,
                "value": rep.value,
                "terms": [{"probability": term.probability,
                           "squared_norm": term.squared_norm,
                           "contribution": term.contribution}
                          for term in rep.terms],
            })
    best_value, best_window = min_entropy(t, found)
    sups = [{"window": w.label,
             "representation": TAG_ENTROPY,
             "sup_over_refinements": sup_refinement_entropy(t, w, found)}
            for w in found]
    return {
        "table": table,
        "minimum": {"value": best_value, "window": best_window.label,
                    "note": "upper bound: family is not exhaustive"},
        "suprema": sups,
    }


def _diverge_payload(scn: Scenario, out_dir: Path, series: str, max_n: int | None) -> dict:
    payload = {}
    if series in ("b1", "both"):
        top = max(max_n or 10000, 1000)  # the fit needs two decades of N
        ns = sorted(set(int(round(x)) for x in np.logspace(1, math.log10(top), 12)))
        s1 = b1_series(ns)
        fit = growth_fit(s1)
        write_csv(out_dir / "b1.csv", ["N", "value"], list(s1.points))
        payload["b1"] = {
            "representation": TAG_BASIS_SUM,
            "omega_rule": s1.omega_rule,
            "points": [[n, v] for n, v in s1.points],
            "fit": {"classification": fit.classification,
                    "slope": fit.slope, "residual": fit.residual},
        }
    if series in ("b2", "both"):
        top = max_n or 2 ** 14
        # the growth fit wants two decades of N, so never stop below 2^11
        kmax = max(11, int(math.floor(math.log2(top))))
        ns = [2 ** k for k in range(4, kmax + 1)]
        s2 = b2_series(ns)
        fit = growth_fit(s2)
        values = dict(s2.points)
        doubling = [{"from": 2 ** k, "to": 2 ** (k + 1),
                     "difference": values[2 ** (k + 1)] - values[2 ** k]}
                    for k in range(4, kmax)]
        write_csv(out_dir / "b2.csv", ["N", "value"], list(s2.points))
        payload["b2"] = {
            "representation": TAG_BASIS_SUM,
            "omega_rule": s2.omega_rule,
            "points": [[n, v] for n, v in s2.points],
            "fit": {"classification": fit.classification,
                    "slope": fit.slope, "residual": fit.residual},
            "doubling_differences": doubling,
            "ln2": math.log(2),
        }
    return payload


def _verify_payload(scn: Scenario, seed: int | None) -> tuple[dict, bool]:
    results = run_suite(scn, seed)
    checks = [{
        "name": r.name,
        "passed": r.passed,
        "residual": r.residual,
        "threshold": r.threshold,
        "detail": r.detail,
    } for r in results]
    ok = all(r.passed for r in results)
    return {"checks": checks, "passed": ok}, ok


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="histq",
        description="decoherence functionals, consistent windows, entropies, "
                    "and divergence trends for finite-dimensional history models")
    parser.add_argument("subcommand",
                        choices=["decohere", "windows", "entropy", "diverge", "verify"])
    parser.add_argument("--scenario", default=None,
                        help="scenario JSON path (default: bundled qubit scenario)")
    parser.add_argument("--out", default="histq-report", help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")
    parser.add_argument("--max-n", type=int, default=None,
                        help="largest truncation for diverge")
    parser.add_argument("--series", choices=["b1", "b2", "both"], default="both")
    args = parser.parse_args(argv)

    source = args.scenario or str(bundled_scenario_path())
    try:
        scn = load_scenario(source)
        if args.seed is not None:
            scn.seed = args.seed

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

        payload = {"scenario": _scenario_section(scn, source)}
        exit_code = 0
        if args.subcommand == "decohere":
            payload["decoherence"] = _decohere_payload(scn)
        elif args.subcommand == "windows":
            payload["windows"] = _windows_payload(scn)
        elif args.subcommand == "entropy":
            sections = _window_sections(scn)
            payload["windows"] = _windows_payload(scn, sections[2])
            payload["entropy"] = _entropy_payload(scn, sections)
        elif args.subcommand == "diverge":
            payload["divergence"] = _diverge_payload(scn, out_dir, args.series, args.max_n)
        elif args.subcommand == "verify":
            payload["verify"], ok = _verify_payload(scn, args.seed)
            for check in payload["verify"]["checks"]:
                status = "PASS" if check["passed"] else "FAIL"
                print(f"{status} {check['name']}: {check['detail']} "
                      f"(residual {check['residual']:.3e})")
            if not ok:
                exit_code = 3
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    write_json(out_dir / f"{args.subcommand}.json", payload)
    print(f"wrote {out_dir / (args.subcommand + '.json')}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
