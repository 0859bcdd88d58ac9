"""NSGA-II over a discrete search space, minimizing two objectives.

The search is generic in the space: any object with ``random(rng)``,
``mutate(g, rng)``, ``crossover(a, b, rng)`` and ``key(g)`` works, which is
how the analytic test problems plug in. The evaluator maps a list of
candidates to a list of objective vectors and is expected to be
deterministic per candidate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class EvaluationError(RuntimeError):
    """An evaluator failed; the message names the offending candidate."""


@dataclass(frozen=True)
class SearchConfig:
    population_size: int = 40
    max_generations: int = 50
    p_crossover: float = 0.8
    p_mutation: float = 0.2
    stall_generations: int = 2
    hv_epsilon: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.population_size <= 0 or self.max_generations < 0 or self.stall_generations <= 0:
            raise ValueError("population_size and stall_generations must be positive")
        for p in (self.p_crossover, self.p_mutation):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")


@dataclass
class EvaluatedCandidate:
    genotype: Any
    objectives: tuple[float, ...]
    key: str
    generation: int
    rank: int = 0
    crowding: float = 0.0


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    evaluations: int
    front_size: int
    hypervolume: float
    best_accuracy: float
    flops_at_best: float


@dataclass
class SearchResult:
    archive: list[EvaluatedCandidate]
    population: list[EvaluatedCandidate]
    stats: list[GenerationStats] = field(default_factory=list)
    stopped_early: bool = False

    def pareto_front(self) -> list[EvaluatedCandidate]:
        objs = np.array([c.objectives for c in self.archive])
        return [self.archive[i] for i in pareto_filter(objs)]


# -- dominance machinery ------------------------------------------------------


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return bool(np.all(a <= b) and np.any(a < b))


def _dominance_matrix(objs: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when candidate i dominates candidate j."""
    a = objs[:, None, :]
    b = objs[None, :, :]
    return np.all(a <= b, axis=-1) & np.any(a < b, axis=-1)


def nondominated_sort(objs) -> list[list[int]]:
    """Fast non-dominated sort; returns fronts as lists of indices (ascending)."""
    objs = np.asarray(objs, dtype=float)
    n = len(objs)
    if n == 0:
        return []
    dom = _dominance_matrix(objs)
    counts = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append(current.tolist())
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(objs) -> np.ndarray:
    """Crowding distance within one front; boundary points get +inf."""
    objs = np.asarray(objs, dtype=float)
    n, m = objs.shape
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for k in range(m):
        order = np.argsort(objs[:, k], kind="stable")
        f = objs[order, k]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = f[-1] - f[0]
        if span > 0:
            dist[order[1:-1]] += (f[2:] - f[:-2]) / span
    return dist


def pareto_filter(objs) -> list[int]:
    """Indices of the non-dominated rows, in input order."""
    objs = np.asarray(objs, dtype=float)
    if len(objs) == 0:
        return []
    dom = _dominance_matrix(objs)
    return np.flatnonzero(~dom.any(axis=0)).tolist()


def hypervolume_2d(points, reference: Sequence[float]) -> float:
    """Area dominated by ``points`` and bounded by ``reference`` (minimization)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    ref = np.asarray(reference, dtype=float)
    if pts.size == 0:
        return 0.0
    if np.any(pts > ref):
        bad = pts[np.any(pts > ref, axis=1)][0]
        raise ValueError(f"point {tuple(bad)} lies outside the reference box {tuple(ref)}")
    front = pts[pareto_filter(pts)]
    front = front[np.lexsort((front[:, 1], front[:, 0]))]
    right = np.append(front[1:, 0], ref[0])
    return float(np.sum((right - front[:, 0]) * (ref[1] - front[:, 1])))


# -- search loop --------------------------------------------------------------


def _assign_rank_crowding(pop: list[EvaluatedCandidate]) -> None:
    objs = np.array([c.objectives for c in pop])
    for r, front in enumerate(nondominated_sort(objs)):
        cd = crowding_distance(objs[front])
        for i, d in zip(front, cd):
            pop[i].rank = r
            pop[i].crowding = float(d)


def _environmental_selection(pool: list[EvaluatedCandidate], n: int) -> list[EvaluatedCandidate]:
    # prefer distinct candidates; clones only pad when too few are distinct
    seen, unique, dups = set(), [], []
    for c in pool:
        (dups if c.key in seen else unique).append(c)
        seen.add(c.key)
    if len(unique) < n:
        return unique + dups[: n - len(unique)]
    objs = np.array([c.objectives for c in unique])
    chosen: list[int] = []
    for front in nondominated_sort(objs):
        if len(chosen) + len(front) <= n:
            chosen.extend(front)
            continue
        cd = crowding_distance(objs[front])
        order = sorted(range(len(front)), key=lambda i: (-cd[i], front[i]))
        chosen.extend(front[i] for i in order[: n - len(chosen)])
        break
    return [unique[i] for i in chosen]


def _tournament(pop: list[EvaluatedCandidate], rng: np.random.Generator) -> EvaluatedCandidate:
    i, j = rng.integers(len(pop), size=2)
    a, b = pop[i], pop[j]
    if (b.rank, -b.crowding) < (a.rank, -a.crowding):
        return b
    return a


def _stats(generation: int, archive: list[EvaluatedCandidate], reference) -> GenerationStats:
    objs = np.array([c.objectives for c in archive])
    front = objs[pareto_filter(objs)]
    best = front[:, 0].min()
    inside = front[np.all(front <= np.asarray(reference, dtype=float), axis=1)]
    return GenerationStats(
        generation=generation,
        evaluations=len(archive),
        front_size=len(front),
        hypervolume=hypervolume_2d(inside, reference),
        best_accuracy=float(1.0 - best),
        flops_at_best=float(front[front[:, 0] == best, 1].min()),
    )


def nsga2_run(
    evaluate: Callable[[list], list[Sequence[float]]],
    space,
    config: SearchConfig,
    reference: Sequence[float],
    initial: list | None = None,
    on_generation: Callable[[GenerationStats], None] | None = None,
) -> SearchResult:
    """Run NSGA-II until the archive hypervolume stalls or the generation cap.

    ``reference`` bounds the hypervolume used for the stop rule: the search
    ends once the relative gain of the global archive's hypervolume stays
    below ``config.hv_epsilon`` for ``config.stall_generations`` consecutive
    generations.
    """
    rng = np.random.default_rng(config.seed)
    n = config.population_size
    archive: dict[str, EvaluatedCandidate] = {}

    def evaluate_all(genotypes: list, generation: int) -> list[EvaluatedCandidate]:
        keys = [space.key(g) for g in genotypes]
        new, new_keys = [], []
        for g, k in zip(genotypes, keys):
            if k not in archive and k not in new_keys:
                new.append(g)
                new_keys.append(k)
        if new:
            try:
                objs = evaluate(new)
            except EvaluationError:
                raise
            except Exception as exc:
                names = ", ".join(new_keys)
                raise EvaluationError(f"evaluation failed in generation {generation} for [{names}]: {exc}") from exc
            for g, k, o in zip(new, new_keys, objs):
                archive[k] = EvaluatedCandidate(g, tuple(float(v) for v in o), k, generation)
        return [
            EvaluatedCandidate(g, archive[k].objectives, k, archive[k].generation)
            for g, k in zip(genotypes, keys)
        ]

    genotypes = list(initial) if initial is not None else [space.random(rng) for _ in range(n)]
    pop = evaluate_all(genotypes, 0)
    _assign_rank_crowding(pop)
    stats = [_stats(0, list(archive.values()), reference)]
    if on_generation:
        on_generation(stats[-1])

    stall = 0
    stopped_early = False
    for gen in range(1, config.max_generations + 1):
        children = []
        while len(children) < n:
            a = _tournament(pop, rng).genotype
            b = _tournament(pop, rng).genotype
            if rng.random() < config.p_crossover:
                a, b = space.crossover(a, b, rng)
            for child in (a, b):
                if rng.random() < config.p_mutation:
                    child = space.mutate(child, rng)
                children.append(child)
        offspring = evaluate_all(children[:n], gen)
        pop = _environmental_selection(pop + offspring, n)
        _assign_rank_crowding(pop)

        stats.append(_stats(gen, list(archive.values()), reference))
        if on_generation:
            on_generation(stats[-1])
        prev, cur = stats[-2].hypervolume, stats[-1].hypervolume
        gain = (cur - prev) / prev if prev > 0 else (np.inf if cur > 0 else 0.0)
        stall = stall + 1 if gain < config.hv_epsilon else 0
        log.debug("generation %d: hv=%.6g gain=%.3g stall=%d", gen, cur, gain, stall)
        if stall >= config.stall_generations:
            stopped_early = True
            break

    return SearchResult(list(archive.values()), pop, stats, stopped_early)
