"""Command line front end.

Commands::

    hqnas search     NSGA-II search; writes results/generations/pareto CSVs and SVG scatters
    hqnas enumerate  evaluate a slice of the enumerated space, appending to results.csv
    hqnas eval       train and score one genotype token
    hqnas pareto     extract the global Pareto front from a results.csv
    hqnas flops      print the FLOPs breakdown of one genotype

Settings come from ``--config`` (``key = value`` lines) with command-line
flags taking precedence. Exit codes: 0 ok, 2 config error, 3 data error,
4 evaluation error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import flops as flops_mod
from .data import DataError, Dataset, load_csv, load_iris
from .genotype import FULL_SPACE, GenotypeError, canonicalize, from_token, space_size, to_token
from .hqnn import Evaluator, TrainConfig
from .moo import EvaluationError, SearchConfig, nsga2_run
from .plot import write_scatters
from .results import GenerationLog, ResultsError, ResultsRow, mark_pareto, pareto_rows, read_results, write_results

log = logging.getLogger("hqnas")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_EVAL = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    dataset: str = ""
    seed: int = 0
    population: int = 40
    max_generations: int = 50
    p_crossover: float = 0.8
    p_mutation: float = 0.2
    stall_generations: int = 2
    hv_epsilon: float = 1e-4
    epochs: int = 30
    batch_size: int = 16
    lr: float = 0.01
    test_fraction: float = 0.2
    split_seed: int = 0
    flops_model: str = "dense"
    jobs: int = 1
    out: str = "runs"
    genotype: str = ""
    limit: int = 0
    offset: int = 0

    def validate(self) -> None:
        if self.flops_model not in flops_mod.FLOPS_MODELS:
            raise ConfigError(f"flops_model must be one of {flops_mod.FLOPS_MODELS}")
        for name in ("population", "epochs", "batch_size", "jobs", "stall_generations"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("max_generations", "limit", "offset", "seed", "split_seed"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.offset > space_size():
            raise ConfigError(f"offset must lie in [0, {space_size()}]")
        try:
            self.search_config()
            self.train_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def search_config(self) -> SearchConfig:
        return SearchConfig(
            population_size=self.population,
            max_generations=self.max_generations,
            p_crossover=self.p_crossover,
            p_mutation=self.p_mutation,
            stall_generations=self.stall_generations,
            hv_epsilon=self.hv_epsilon,
            seed=self.seed,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            lr=self.lr,
            seed=self.seed,
            test_fraction=self.test_fraction,
            split_seed=self.split_seed,
        )

    def dump(self) -> str:
        return "".join(f"{f.name} = {getattr(self, f.name)}\n" for f in fields(self))


_FIELD_TYPES = {f.name: type(f.default) for f in fields(RunConfig)}


def _coerce(key: str, value: str):
    typ = _FIELD_TYPES[key]
    try:
        return typ(value)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {value!r} as {typ.__name__}") from None


def read_config_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _coerce(key, value)
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hqnas", description="FLOPs-aware architecture search for hybrid quantum-classical networks")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config")
        sp.add_argument("--dataset")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--epochs", type=int)
        sp.add_argument("--flops-model", choices=flops_mod.FLOPS_MODELS)
        sp.add_argument("--jobs", type=int)
        sp.add_argument("--out")

    sp = sub.add_parser("search", help="run NSGA-II")
    common(sp)
    sp.add_argument("--population", type=int)
    sp.add_argument("--max-generations", type=int)

    sp = sub.add_parser("enumerate", help="evaluate a slice of the enumerated space")
    common(sp)
    sp.add_argument("--limit", type=int)
    sp.add_argument("--offset", type=int)

    sp = sub.add_parser("eval", help="train and score one genotype")
    common(sp)
    sp.add_argument("--genotype", required=True)

    sp = sub.add_parser("pareto", help="extract the Pareto front from results.csv")
    sp.add_argument("results")
    sp.add_argument("--out", help="output file (default: pareto.csv next to the input)")

    sp = sub.add_parser("flops", help="FLOPs breakdown of one genotype")
    sp.add_argument("--config")
    sp.add_argument("--dataset")
    sp.add_argument("--genotype", required=True)
    sp.add_argument("--flops-model", choices=flops_mod.FLOPS_MODELS)
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in _FIELD_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def load_dataset(cfg: RunConfig) -> Dataset:
    return load_csv(cfg.dataset) if cfg.dataset else load_iris()


def _row(result, generation: int, seed: int) -> ResultsRow:
    return ResultsRow(
        genotype=to_token(result.genotype),
        accuracy=result.test_accuracy,
        classical_flops=result.flops.classical_flops,
        quantum_flops=result.flops.quantum_flops,
        total_flops=result.flops.total_flops,
        is_pareto=False,
        generation=generation,
        seed=seed,
    )


def _evaluator(cfg: RunConfig, dataset: Dataset) -> Evaluator:
    return Evaluator(dataset, cfg.train_config(), cfg.flops_model, cfg.jobs)


def cmd_search(cfg: RunConfig) -> list[ResultsRow]:
    dataset = load_dataset(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.dump(), encoding="utf-8")
    ev = _evaluator(cfg, dataset)

    def objectives(genotypes):
        return [(1.0 - r.test_accuracy, r.flops.total_flops) for r in ev.evaluate_many(genotypes)]

    max_flops = flops_mod.max_total_flops(dataset.num_features, dataset.num_classes, cfg.flops_model)
    reference = (1.0, 1.1 * max_flops)
    with GenerationLog(out / "generations.csv") as glog:
        result = nsga2_run(objectives, FULL_SPACE, cfg.search_config(), reference, on_generation=glog)

    rows = [_row(ev(c.genotype), c.generation, cfg.seed) for c in result.archive]
    rows = mark_pareto(rows)
    write_results(out / "results.csv", rows)
    write_results(out / "pareto.csv", pareto_rows(rows))
    write_scatters(rows, out, dataset.name)
    log.info("search finished: %d candidates, %d generations, %d pareto", len(rows), len(result.stats) - 1, sum(r.is_pareto for r in rows))
    return rows


def cmd_enumerate(cfg: RunConfig) -> list[ResultsRow]:
    dataset = load_dataset(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "results.csv"
    existing = read_results(path) if path.exists() else []
    if any(r.seed != cfg.seed for r in existing):
        raise ConfigError(f"{path} holds rows for a different seed; refusing to append")
    seen = {r.genotype for r in existing}
    stop = min(cfg.offset + cfg.limit, space_size())
    todo = []
    for i in range(cfg.offset, stop):
        token = to_token(canonicalize(FULL_SPACE.decode(i)))
        if token not in seen:
            seen.add(token)
            todo.append(from_token(token))
    ev = _evaluator(cfg, dataset)
    rows = existing + [_row(r, 0, cfg.seed) for r in ev.evaluate_many(todo)]
    rows = mark_pareto(rows)
    write_results(path, rows)
    return rows


def cmd_eval(cfg: RunConfig, stream=None) -> ResultsRow:
    stream = stream or sys.stdout
    g = from_token(cfg.genotype)
    dataset = load_dataset(cfg)
    result = _evaluator(cfg, dataset)(g)
    row = _row(result, 0, cfg.seed)
    print("genotype,accuracy,classical_flops,quantum_flops,total_flops,train_loss", file=stream)
    print(
        f"{row.genotype},{row.accuracy!r},{row.classical_flops},{row.quantum_flops},{row.total_flops},{result.train_loss!r}",
        file=stream,
    )
    _print_breakdown(result.flops, stream)
    return row


def cmd_pareto(results_path, out_path=None) -> list[ResultsRow]:
    rows = read_results(results_path)
    front = pareto_rows(rows)
    out_path = Path(out_path) if out_path else Path(results_path).with_name("pareto.csv")
    write_results(out_path, front)
    return front


def cmd_flops(cfg: RunConfig, stream=None) -> flops_mod.FlopsReport:
    stream = stream or sys.stdout
    g = from_token(cfg.genotype)
    dataset = load_dataset(cfg)
    report = flops_mod.flops_report(g, dataset.num_features, dataset.num_classes, cfg.flops_model)
    print(f"genotype {to_token(g)} on {dataset.name} ({cfg.flops_model} model)", file=stream)
    _print_breakdown(report, stream)
    return report


def _print_breakdown(report: flops_mod.FlopsReport, stream) -> None:
    print("stage,flops", file=stream)
    for stage, f in report.breakdown:
        print(f"{stage},{f}", file=stream)
    print(f"classical,{report.classical_flops}", file=stream)
    print(f"quantum,{report.quantum_flops}", file=stream)
    print(f"total,{report.total_flops}", file=stream)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "pareto":
            cmd_pareto(args.results, args.out)
            return EXIT_OK
        cfg = resolve_config(args)
        if args.command == "search":
            cmd_search(cfg)
        elif args.command == "enumerate":
            cmd_enumerate(cfg)
        elif args.command == "eval":
            cmd_eval(cfg)
        elif args.command == "flops":
            cmd_flops(cfg)
    except (ConfigError, GenotypeError) as exc:
        print(f"hqnas: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, ResultsError) as exc:
        print(f"hqnas: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EvaluationError as exc:
        print(f"hqnas: evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
