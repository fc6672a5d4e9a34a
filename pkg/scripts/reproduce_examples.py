"""Print the separation tables, fitted probabilities, standings and diagrams for the worked examples."""

from pathlib import Path

from btsep.datamodel import read_dataset
from btsep.diagram import class_diagram, to_dot
from btsep.estimation import fit, probability_matrix
from btsep.separation import format_provenance
from btsep.summary import PointSystem, format_standings, summarize

DATA = Path(__file__).resolve().parent.parent / "data"

RUNS = [
    ("example1.csv", "basic", None),
    ("example2.csv", "single-order", None),
    ("example3.csv", "single-tie", PointSystem(2, 0, 1)),
    ("example3.csv", "team-tie", PointSystem(2, 0, 1)),
]


def main() -> None:
    for name, model, points in RUNS:
        ds = read_dataset(DATA / name, model)
        res = fit(ds)
        pm = probability_matrix(res)
        print(f"=== {name} under {model}: {res.separation.global_class.name.lower()}, {res.iterations} iterations")
        print(format_provenance(res.separation))
        for i, j in pm.pairs():
            if pm.model.has_order or i < j:
                print(f"  {pm.labels[i]} vs {pm.labels[j]}: " + "  ".join(f"p{k}={pm[i, j, k]}" for k in pm.outcomes))
        print()
        summary = summarize(pm, points, ds)
        print(format_standings(summary))
        print(to_dot(class_diagram(res.separation, summary)))


if __name__ == "__main__":
    main()
