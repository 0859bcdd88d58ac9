"""
A small FLOPs-aware search on Iris
==================================

NSGA-II minimizes (1 - accuracy, total FLOPs). The same run is available
from the shell as ``hqnas search``; this goes through the library.
"""

from hqnas import flops, moo
from hqnas.data import load_iris
from hqnas.genotype import FULL_SPACE
from hqnas.hqnn import Evaluator, TrainConfig
from hqnas.moo import SearchConfig

ds = load_iris()
ev = Evaluator(ds, TrainConfig(epochs=15, seed=42))


def objectives(genotypes):
    return [(1.0 - r.test_accuracy, r.flops.total_flops) for r in ev.evaluate_many(genotypes)]


reference = (1.0, 1.1 * flops.max_total_flops(ds.num_features, ds.num_classes))
result = moo.nsga2_run(
    objectives,
    FULL_SPACE,
    SearchConfig(population_size=12, max_generations=4, seed=42),
    reference,
    on_generation=lambda s: print(f"gen {s.generation}: {s.evaluations} evaluated, hv {s.hypervolume:.4g}"),
)

print("\nPareto front (accuracy, total FLOPs):")
for c in sorted(result.pareto_front(), key=lambda c: c.objectives[1]):
    print(f"  {c.key:32s} {1 - c.objectives[0]:.3f} {int(c.objectives[1]):8d}")
