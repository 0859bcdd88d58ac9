"""Architecture search space for hybrid quantum-classical networks.

A candidate is a fixed-length chromosome of ten genes::

    (num_qubits, encoding, rot_gates[0..3], entangler, topology, depth)

Only the first ``depth`` rotation genes shape the circuit; the trailing ones are
inert but kept so that every chromosome has the same layout for crossover.
The space is enumerable in mixed-radix order with the most significant gene
first, which gives a stable integer index for every chromosome.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import product
from typing import Iterator, Sequence

import numpy as np

QUBITS = tuple(range(2, 11))
ENCODINGS = ("angle", "amplitude")
ROTATIONS = ("Rx", "Ry", "Rz")
ENTANGLERS = ("cnot", "cz")
TOPOLOGIES = ("linear", "circular")
DEPTHS = (1, 2, 3, 4)
MAX_DEPTH = 4

GENE_NAMES = (
    "num_qubits",
    "encoding",
    "rot0",
    "rot1",
    "rot2",
    "rot3",
    "entangler",
    "topology",
    "depth",
)

_ENC_TOKEN = {"angle": "ang", "amplitude": "amp"}
_TOPO_TOKEN = {"linear": "lin", "circular": "circ"}
_TOKEN_RE = re.compile(
    r"^q(?P<q>\d+)-(?P<enc>[a-z]+)-(?P<rot>[A-Za-z]+)-(?P<ent>[a-z]+)-(?P<topo>[a-z]+)-d(?P<d>\d+)$"
)


class GenotypeError(ValueError):
    """Raised for invalid genotypes, indices or tokens."""


@dataclass(frozen=True, order=True)
class Genotype:
    num_qubits: int
    encoding: str
    rot_gates: tuple[str, str, str, str]
    entangler: str
    topology: str
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "rot_gates", tuple(self.rot_gates))
        validate(self)

    @property
    def active_rotations(self) -> tuple[str, ...]:
        return self.rot_gates[: self.depth]

    @property
    def num_params(self) -> int:
        return self.num_qubits * self.depth

    @property
    def encoding_dim(self) -> int:
        """Width of the classical vector fed to the encoder."""
        if self.encoding == "angle":
            return self.num_qubits
        return 2**self.num_qubits

    def token(self) -> str:
        return to_token(self)

    def __str__(self) -> str:
        return to_token(self)


def validate(g: Genotype) -> None:
    if g.num_qubits not in QUBITS:
        raise GenotypeError(f"num_qubits must be in 2..10, got {g.num_qubits!r}")
    if g.encoding not in ENCODINGS:
        raise GenotypeError(f"unknown encoding {g.encoding!r}")
    if len(g.rot_gates) != MAX_DEPTH:
        raise GenotypeError(f"expected {MAX_DEPTH} rotation genes, got {len(g.rot_gates)}")
    for r in g.rot_gates:
        if r not in ROTATIONS:
            raise GenotypeError(f"unknown rotation gate {r!r}")
    if g.entangler not in ENTANGLERS:
        raise GenotypeError(f"unknown entangler {g.entangler!r}")
    if g.topology not in TOPOLOGIES:
        raise GenotypeError(f"unknown topology {g.topology!r}")
    if g.depth not in DEPTHS:
        raise GenotypeError(f"depth must be in 1..4, got {g.depth!r}")


# -- token form ---------------------------------------------------------------


def to_token(g: Genotype) -> str:
    """Serialize as e.g. ``q4-amp-RyRzRxRx-cz-circ-d2``."""
    return "q{}-{}-{}-{}-{}-d{}".format(
        g.num_qubits,
        _ENC_TOKEN[g.encoding],
        "".join(g.rot_gates),
        g.entangler,
        _TOPO_TOKEN[g.topology],
        g.depth,
    )


def from_token(token: str) -> Genotype:
    """Parse a genotype token; errors name the offending field."""
    m = _TOKEN_RE.match(token.strip())
    if m is None:
        raise GenotypeError(
            f"malformed genotype token {token!r}; expected "
            "q<2-10>-(ang|amp)-(Rx|Ry|Rz){4}-(cnot|cz)-(lin|circ)-d<1-4>"
        )
    q = int(m["q"])
    if q not in QUBITS:
        raise GenotypeError(f"field num_qubits: q{q} not in 2..10")
    enc = {v: k for k, v in _ENC_TOKEN.items()}.get(m["enc"])
    if enc is None:
        raise GenotypeError(f"field encoding: {m['enc']!r} not in (ang, amp)")
    rots = re.findall(r"R[xyz]", m["rot"])
    if len(rots) != MAX_DEPTH or "".join(rots) != m["rot"]:
        raise GenotypeError(f"field rot_gates: {m['rot']!r} is not four of Rx/Ry/Rz")
    if m["ent"] not in ENTANGLERS:
        raise GenotypeError(f"field entangler: {m['ent']!r} not in (cnot, cz)")
    topo = {v: k for k, v in _TOPO_TOKEN.items()}.get(m["topo"])
    if topo is None:
        raise GenotypeError(f"field topology: {m['topo']!r} not in (lin, circ)")
    d = int(m["d"])
    if d not in DEPTHS:
        raise GenotypeError(f"field depth: d{d} not in 1..4")
    return Genotype(q, enc, tuple(rots), m["ent"], topo, d)


# -- enumeration --------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    """Gene ranges of the search space.

    Ranges may be narrowed (e.g. ``SearchSpace(depths=(1,))``) for small
    experiments; the defaults give the full 23,328-chromosome space.
    """

    qubits: tuple[int, ...] = QUBITS
    encodings: tuple[str, ...] = ENCODINGS
    rotations: tuple[str, ...] = ROTATIONS
    entanglers: tuple[str, ...] = ENTANGLERS
    topologies: tuple[str, ...] = TOPOLOGIES
    depths: tuple[int, ...] = DEPTHS

    @property
    def radices(self) -> tuple[int, ...]:
        r = len(self.rotations)
        return (
            len(self.qubits),
            len(self.encodings),
            r,
            r,
            r,
            r,
            len(self.entanglers),
            len(self.topologies),
            len(self.depths),
        )

    @property
    def cardinality(self) -> int:
        return int(np.prod(self.radices))

    def _choices(self) -> tuple[tuple, ...]:
        rot = self.rotations
        return (
            self.qubits,
            self.encodings,
            rot,
            rot,
            rot,
            rot,
            self.entanglers,
            self.topologies,
            self.depths,
        )

    def decode(self, index: int) -> Genotype:
        n = self.cardinality
        if not 0 <= index < n:
            raise GenotypeError(f"index {index} out of range [0, {n})")
        digits = []
        for radix in reversed(self.radices):
            index, d = divmod(index, radix)
            digits.append(d)
        genes = [c[d] for c, d in zip(self._choices(), reversed(digits))]
        return _from_genes(genes)

    def encode(self, g: Genotype) -> int:
        index = 0
        for choices, radix, value in zip(self._choices(), self.radices, _genes(g)):
            try:
                d = choices.index(value)
            except ValueError:
                raise GenotypeError(f"gene value {value!r} not in this space") from None
            index = index * radix + d
        return index

    def __iter__(self) -> Iterator[Genotype]:
        for genes in product(*self._choices()):
            yield _from_genes(list(genes))

    # -- variation ------------------------------------------------------------

    def random(self, rng: np.random.Generator) -> Genotype:
        genes = [c[rng.integers(len(c))] for c in self._choices()]
        return _from_genes(genes)

    def mutate(self, g: Genotype, rng: np.random.Generator) -> Genotype:
        """Resample one uniformly chosen gene to a different value.

        Genes whose range has a single value cannot change and are skipped
        when choosing which gene to mutate.
        """
        genes = _genes(g)
        choices = self._choices()
        mutable = [i for i, c in enumerate(choices) if len(c) > 1]
        if not mutable:
            return g
        i = mutable[rng.integers(len(mutable))]
        others = [v for v in choices[i] if v != genes[i]]
        genes[i] = others[rng.integers(len(others))]
        return _from_genes(genes)

    def crossover(
        self, a: Genotype, b: Genotype, rng: np.random.Generator
    ) -> tuple[Genotype, Genotype]:
        """Uniform crossover: each gene swapped independently with p = 0.5."""
        ga, gb = _genes(a), _genes(b)
        swap = rng.random(len(ga)) < 0.5
        ca = [y if s else x for x, y, s in zip(ga, gb, swap)]
        cb = [x if s else y for x, y, s in zip(ga, gb, swap)]
        return _from_genes(ca), _from_genes(cb)

    def key(self, g: Genotype) -> str:
        return to_token(canonicalize(g))


def _genes(g: Genotype) -> list:
    return [g.num_qubits, g.encoding, *g.rot_gates, g.entangler, g.topology, g.depth]


def _from_genes(genes: Sequence) -> Genotype:
    q, enc, r0, r1, r2, r3, ent, topo, d = genes
    return Genotype(int(q), enc, (r0, r1, r2, r3), ent, topo, int(d))


FULL_SPACE = SearchSpace()


def space_size(space: SearchSpace = FULL_SPACE) -> int:
    return space.cardinality


def decode(index: int) -> Genotype:
    return FULL_SPACE.decode(index)


def encode(g: Genotype) -> int:
    return FULL_SPACE.encode(g)


def canonicalize(g: Genotype) -> Genotype:
    """Reset inert rotation genes (beyond ``depth``) to ``Rx``."""
    rots = g.rot_gates[: g.depth] + ("Rx",) * (MAX_DEPTH - g.depth)
    if rots == g.rot_gates:
        return g
    return replace(g, rot_gates=rots)


def random_genotype(rng: np.random.Generator | int | None = None) -> Genotype:
    return FULL_SPACE.random(np.random.default_rng(rng))


def mutate(g: Genotype, rng: np.random.Generator) -> Genotype:
    return FULL_SPACE.mutate(g, rng)


def crossover(a: Genotype, b: Genotype, rng: np.random.Generator) -> tuple[Genotype, Genotype]:
    return FULL_SPACE.crossover(a, b, rng)
