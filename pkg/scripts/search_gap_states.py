#!/usr/bin/env python3
"""Search for states where the off-diagonal l1 sum strictly overshoots the
exact robustness value, dimension by dimension.

For qubits the two quantities provably coincide; from dimension 3 upward a
strict gap appears for generic states.  Prints the largest relative gap
found per dimension along with the seed that produced it.
"""
from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from cohrob.linalg import l1_coherence, random_state  # noqa: E402
from cohrob.roc import roc_exact  # noqa: E402


def search(dims=(2, 3, 4, 5), trials: int = 40, seed: int = 0) -> None:
    for d in dims:
        best_gap, best_seed, best_l1 = 0.0, None, 0.0
        for t in range(trials):
            rho = random_state(d, seed=seed + 1000 * d + t)
            l1 = l1_coherence(rho)
            value = roc_exact(rho).value
            gap = l1 - value
            if gap > best_gap:
                best_gap, best_seed, best_l1 = gap, seed + 1000 * d + t, l1
        rel = best_gap / best_l1 if best_l1 else 0.0
        print(f"d={d}: largest gap {best_gap:.6f} ({rel:.1%} of l1), "
              f"state seed {best_seed}")


if __name__ == "__main__":
    search(trials=int(sys.argv[1]) if len(sys.argv) > 1 else 40)
