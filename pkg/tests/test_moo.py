import math

import numpy as np
import pytest

from hqnas import moo
from hqnas.moo import EvaluationError, SearchConfig

import oracles
import problems


def test_dominates_examples():
    assert moo.dominates((0.1, 100), (0.2, 200))
    assert not moo.dominates((0.1, 300), (0.2, 200))
    assert not moo.dominates((0.2, 200), (0.1, 300))
    assert not moo.dominates((0.1, 100), (0.1, 100))


def test_sort_example():
    pts = [(1, 3), (2, 2), (3, 1), (3, 3)]
    assert moo.nondominated_sort(pts) == [[0, 1, 2], [3]]


def test_sort_identical():
    assert moo.nondominated_sort([(1, 1)] * 5) == [[0, 1, 2, 3, 4]]


def test_sort_matches_brute_force(rng):
    for _ in range(10):
        pts = rng.integers(0, 30, size=(200, 2)).tolist()
        assert moo.nondominated_sort(pts) == oracles.brute_fronts(pts)


def test_sort_three_objectives(rng):
    pts = rng.random((60, 3)).tolist()
    assert moo.nondominated_sort(pts) == oracles.brute_fronts(pts)


def test_crowding_small_fronts():
    assert np.all(np.isinf(moo.crowding_distance([[0, 1]])))
    assert np.all(np.isinf(moo.crowding_distance([[0, 1], [1, 0]])))


def test_crowding_example():
    d = moo.crowding_distance([[0, 2], [1, 1], [2, 0]])
    assert math.isinf(d[0]) and math.isinf(d[2])
    assert d[1] == pytest.approx(2.0)


def test_crowding_zero_range():
    d = moo.crowding_distance([[0, 5], [1, 5], [2, 5], [3, 5]])
    assert math.isinf(d[0]) and math.isinf(d[3])
    # objective 2 has zero range; objective 1 gives (2-0)/3 and (3-1)/3
    np.testing.assert_allclose(d[1:3], [2 / 3, 2 / 3])


def test_hypervolume_examples():
    assert moo.hypervolume_2d([(0.5, 0.5)], (1, 1)) == pytest.approx(0.25)
    assert moo.hypervolume_2d([(0.2, 0.8), (0.8, 0.2)], (1, 1)) == pytest.approx(0.28)
    assert moo.hypervolume_2d([], (1, 1)) == 0.0
    with pytest.raises(ValueError):
        moo.hypervolume_2d([(1.2, 0.5)], (1, 1))


def test_hypervolume_ignores_dominated():
    a = moo.hypervolume_2d([(0.2, 0.8), (0.8, 0.2)], (1, 1))
    b = moo.hypervolume_2d([(0.2, 0.8), (0.8, 0.2), (0.9, 0.9), (0.5, 0.85)], (1, 1))
    assert a == pytest.approx(b)


def test_hypervolume_monte_carlo(rng):
    for seed in range(3):
        pts = rng.random((12, 2))
        ref = (1.1, 1.1)
        hv = moo.hypervolume_2d(pts, ref)
        mc = oracles.monte_carlo_hv(pts, ref, samples=200_000, seed=seed)
        assert hv == pytest.approx(mc, rel=0.02)


def test_pareto_filter():
    assert moo.pareto_filter([(0.3, 5)]) == [0]
    assert moo.pareto_filter([(0.3, 5), (0.4, 6), (0.5, 7)]) == [0]
    assert moo.pareto_filter([]) == []


def test_pareto_filter_brute(rng):
    for _ in range(5):
        pts = rng.integers(0, 50, size=(300, 2)).tolist()
        assert moo.pareto_filter(pts) == oracles.brute_pareto(pts)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(p_crossover=1.5)
    with pytest.raises(ValueError):
        SearchConfig(population_size=0)


def run_grid(seed, **kw):
    # the stall rule is switched off so the run uses its full 30-generation budget
    kw.setdefault("stall_generations", 31)
    cfg = SearchConfig(population_size=24, max_generations=30, seed=seed, **kw)
    return moo.nsga2_run(problems.evaluate, problems.GridSpace(), cfg, problems.REFERENCE)


def test_grid_problem_recovers_front():
    res = run_grid(0)
    found = {problems.index_of(c.genotype) for c in res.pareto_front()}
    truth = problems.pareto_indices()
    assert len(found & truth) >= 0.9 * len(truth)
    assert len(res.stats) <= 31


def test_grid_problem_stall_rule_stops_early():
    res = run_grid(0, stall_generations=2)
    assert res.stopped_early
    assert len(res.stats) < 31


def test_points_outside_reference_do_not_break_stats():
    cfg = SearchConfig(population_size=8, max_generations=2, seed=0)
    res = moo.nsga2_run(problems.evaluate, problems.GridSpace(), cfg, (4.4, 4.4))
    assert all(s.hypervolume >= 0 for s in res.stats)


def test_determinism():
    a, b = run_grid(3), run_grid(3)
    assert [(c.key, c.objectives, c.generation) for c in a.archive] == [
        (c.key, c.objectives, c.generation) for c in b.archive
    ]
    assert a.stats == b.stats


def test_clones_stop_after_two_stall_generations():
    cfg = SearchConfig(population_size=10, max_generations=20, p_mutation=0.0, seed=1)
    clone = (1, 0, 1, 0, 1, 0)
    res = moo.nsga2_run(problems.evaluate, problems.GridSpace(), cfg, problems.REFERENCE, initial=[clone] * 10)
    assert res.stopped_early
    assert [s.generation for s in res.stats] == [0, 1, 2]
    assert len(res.archive) == 1


def test_archive_hypervolume_non_decreasing():
    for seed in range(5):
        hv = [s.hypervolume for s in run_grid(seed).stats]
        assert all(b >= a for a, b in zip(hv, hv[1:]))


def test_archive_front_undominated():
    res = run_grid(2)
    objs = [c.objectives for c in res.archive]
    for c in res.pareto_front():
        assert not any(oracles.brute_dominates(o, c.objectives) for o in objs)


def test_population_ranks_consistent():
    res = run_grid(4)
    objs = [c.objectives for c in res.population]
    fronts = oracles.brute_fronts(objs)
    for r, front in enumerate(fronts):
        for i in front:
            assert res.population[i].rank == r


def test_evaluator_failure_names_candidate():
    def bad(genotypes):
        raise RuntimeError("boom")

    with pytest.raises(EvaluationError, match="boom") as info:
        moo.nsga2_run(bad, problems.GridSpace(), SearchConfig(population_size=2, seed=0), problems.REFERENCE)
    assert "[" in str(info.value)


def test_generation_callback():
    seen = []
    cfg = SearchConfig(population_size=8, max_generations=3, seed=0)
    moo.nsga2_run(problems.evaluate, problems.GridSpace(), cfg, problems.REFERENCE, on_generation=seen.append)
    assert [s.generation for s in seen] == list(range(len(seen)))
    assert seen[0].evaluations <= 8
