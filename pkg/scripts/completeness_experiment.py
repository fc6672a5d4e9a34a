"""How often do the local propagation rules miss a relation that the data force?

For random small datasets, compare the saturated reachability with the
relations implied by linear programming over the score constraints, and
count datasets where the exact completion pass (step 7) was needed.
Needs scipy (installed with the ``test`` extra).
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from btsep.datamodel import ModelKind, build_dataset  # noqa: E402
from btsep.separation import STEP_EXACT, saturate  # noqa: E402
from oracles import lp_implied_relations, random_games  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=300)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'model':<13} {'trials':>6} {'step 7 used':>11} {'missing':>8} {'spurious':>9}")
    for model in ModelKind:
        used = missing = spurious = 0
        for _ in range(args.trials):
            t = int(rng.integers(2, 6))
            ds = build_dataset(random_games(rng, model, t, int(rng.integers(1, 11))), model)
            sep = saturate(ds)
            lp = lp_implied_relations(ds)
            used += bool((sep.closure.step == STEP_EXACT).any())
            missing += bool((lp & ~sep.closure.reach).any())
            spurious += bool((sep.closure.reach & ~lp).any())
        print(f"{model.value:<13} {args.trials:>6} {used:>11} {missing:>8} {spurious:>9}")


if __name__ == "__main__":
    main()
