"""FLOPs-aware multi-objective architecture search for hybrid quantum-classical networks."""

from .genotype import Genotype, SearchSpace, canonicalize, decode, encode, from_token, space_size, to_token
from .flops import FlopsReport, flops_report
from .hqnn import EvalResult, Evaluator, HybridModel, TrainConfig, build, evaluate, train
from .moo import SearchConfig, nsga2_run

__version__ = "0.1.0"
