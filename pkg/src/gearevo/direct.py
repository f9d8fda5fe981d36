"""Direct genome: an explicit list of (gear_id, placement) genes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gearevo.geometry import MAX_GEARS, MIN_GEARS, InvalidGenomeError, Placement

_FLAGS = (Placement.LINEAR, Placement.COAXIAL)
CROSSOVER_ATTEMPTS = 8


@dataclass(frozen=True)
class DirectRates:
    point: float = 0.15
    insert: float = 0.1
    delete: float = 0.1


@dataclass(frozen=True)
class DirectGenome:
    genes: tuple

    def __post_init__(self):
        genes = tuple((int(g), Placement.parse(f)) for g, f in self.genes)
        if not MIN_GEARS <= len(genes) <= MAX_GEARS:
            raise InvalidGenomeError(f"direct genome needs 2..6 genes, got {len(genes)}")
        for g, f in genes:
            if not 1 <= g <= 6:
                raise InvalidGenomeError(f"gear id {g} outside 1..6")
            if f not in _FLAGS:
                raise InvalidGenomeError(f"gene placement must be Linear or Coaxial, got {f}")
        object.__setattr__(self, "genes", genes)

    def __len__(self):
        return len(self.genes)

    def to_record(self) -> list:
        return [[g, f.value] for g, f in self.genes]

    @classmethod
    def from_record(cls, rec: list) -> "DirectGenome":
        return cls(tuple((g, f) for g, f in rec))


def _random_gene(rng: np.random.Generator) -> tuple:
    return int(rng.integers(1, 7)), _FLAGS[int(rng.integers(0, 2))]


def random_direct(rng: np.random.Generator) -> DirectGenome:
    n = int(rng.integers(MIN_GEARS, MAX_GEARS + 1))
    return DirectGenome(tuple(_random_gene(rng) for _ in range(n)))


def decode_direct(genome: DirectGenome) -> list:
    return list(genome.genes)


def mutate_direct(genome: DirectGenome, rng: np.random.Generator,
                  rates: DirectRates = DirectRates()) -> DirectGenome:
    """Point mutation per gene, then at most one insertion and one deletion."""
    genes = list(genome.genes)
    for i, (g, f) in enumerate(genes):
        if rng.random() < rates.point:
            if rng.random() < 0.5:
                genes[i] = (int(rng.integers(1, 7)), f)
            else:
                genes[i] = (g, Placement.LINEAR if f is Placement.COAXIAL else Placement.COAXIAL)
    if rng.random() < rates.insert and len(genes) < MAX_GEARS:
        genes.insert(int(rng.integers(0, len(genes) + 1)), _random_gene(rng))
    if rng.random() < rates.delete and len(genes) > MIN_GEARS:
        del genes[int(rng.integers(0, len(genes)))]
    return DirectGenome(tuple(genes))


def crossover_direct(a: DirectGenome, b: DirectGenome, rng: np.random.Generator):
    """One-point crossover with an independent cut in each parent.

    Cuts are redrawn until both children have 2..6 genes; after
    ``CROSSOVER_ATTEMPTS`` failures the parents are returned unchanged.
    Identical parents are returned as is; unaligned cuts would otherwise
    duplicate or drop genes.
    """
    ga, gb = a.genes, b.genes
    if ga == gb:
        return a, b
    for _ in range(CROSSOVER_ATTEMPTS):
        i = int(rng.integers(0, len(ga) + 1))
        j = int(rng.integers(0, len(gb) + 1))
        n1 = i + len(gb) - j
        n2 = j + len(ga) - i
        if MIN_GEARS <= n1 <= MAX_GEARS and MIN_GEARS <= n2 <= MAX_GEARS:
            return DirectGenome(ga[:i] + gb[j:]), DirectGenome(gb[:j] + ga[i:])
    return a, b
