#!/usr/bin/env python3
"""Enumerate the consistent windows of a scenario and tabulate their entropies.

Example:
    python scripts/window_census.py --scenario src/histq/scenarios/qubit.json
"""

import argparse

from histq.cli import bundled_scenario_path
from histq.consistency import is_maximally_refined, search_windows
from histq.decoherence import DecoherenceState
from histq.entropy import min_entropy, window_entropy, window_entropy_pnorm
from histq.propositions import wright_operator
from histq.scenario import load_scenario


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default=str(bundled_scenario_path()))
    args = parser.parse_args()

    scn = load_scenario(args.scenario)
    ds = DecoherenceState(model=scn.model, grid=scn.grid)
    support = scn.grid.times[:len(scn.pvms)]
    t = wright_operator(ds, support)
    found = search_windows(ds, t, scn.pvms)
    print(f"{len(found)} consistent windows on support {support}")
    for idx, w in enumerate(found):
        probs = ", ".join(f"{p:.4f}" for p in w.probabilities)
        flag = " (maximally refined)" if is_maximally_refined(w, found) else ""
        print(f"\nwindow {idx}: {len(w.members)} members{flag}")
        print(f"  probabilities: {probs}")
        for p in scn.entropy_p:
            if p == 2.0:
                value = window_entropy(t, w).value
            else:
                try:
                    value = window_entropy_pnorm(ds, w, p).value
                except ValueError:
                    continue
            print(f"  entropy p={p:<4g} {value:+.6f}")
    value, best = min_entropy(t, found)
    print(f"\nminimum entropy {value:+.6f} "
          f"(upper bound on the sector entropy; family not exhaustive)")


if __name__ == "__main__":
    main()
