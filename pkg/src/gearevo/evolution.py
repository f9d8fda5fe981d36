"""Novelty-search evolution loop shared by both genome encodings."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from gearevo import direct, rnn
from gearevo.geometry import (DEFAULT_AXLE_RADIUS, DEFAULT_BOX_LENGTH, GearCatalog,
                              Placement, place_sequence)
from gearevo.novelty import (Archive, ArchiveEntry, archive_append, best_index,
                             fitness_from, novelty_vector, population_novelty)

ENCODINGS = ("rnn", "direct")

# rng stream tags; one independent stream per purpose
_INIT, _SELECT, _VARY = 1, 2, 3


class ConfigError(ValueError):
    """An EvolutionConfig failed validation."""


@dataclass(frozen=True)
class GeometryConfig:
    box_length: float = DEFAULT_BOX_LENGTH
    axle_radius: float = DEFAULT_AXLE_RADIUS
    catalog: tuple = GearCatalog().radii


@dataclass(frozen=True)
class EvolutionConfig:
    encoding: str = "rnn"
    pop_size: int = 150
    generations: int = 40
    tournament_size: int = 3
    crossover_rate: float = 0.75
    rnn_mutation_rate: float = 0.1
    rnn_mutation_sigma: float = 0.1
    direct_point_rate: float = 0.15
    direct_insert_rate: float = 0.1
    direct_delete_rate: float = 0.1
    elitism: int = 1
    seed: int = 0
    normalize_novelty: bool = False
    geometry: GeometryConfig = field(default_factory=GeometryConfig)

    def validate(self) -> "EvolutionConfig":
        if self.encoding not in ENCODINGS:
            raise ConfigError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")
        if self.pop_size < 2:
            raise ConfigError("pop_size must be >= 2")
        if self.generations < 1:
            raise ConfigError("generations must be >= 1")
        if not 1 <= self.tournament_size <= self.pop_size:
            raise ConfigError("tournament_size must lie in [1, pop_size]")
        if not 0 <= self.elitism < self.pop_size:
            raise ConfigError("elitism must lie in [0, pop_size)")
        for name in ("crossover_rate", "rnn_mutation_rate", "direct_point_rate",
                     "direct_insert_rate", "direct_delete_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must be a probability")
        if self.rnn_mutation_sigma < 0:
            raise ConfigError("rnn_mutation_sigma must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        g = self.geometry
        if g.box_length <= 0 or g.axle_radius < 0:
            raise ConfigError("box_length must be > 0 and axle_radius >= 0")
        try:
            GearCatalog(g.catalog)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["geometry"]["catalog"] = list(self.geometry.catalog)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "EvolutionConfig":
        data = dict(data or {})
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        geo = dict(data.pop("geometry", None) or {})
        geo_known = {f.name for f in dataclasses.fields(GeometryConfig)}
        if set(geo) - geo_known:
            raise ConfigError(f"unknown geometry keys: {sorted(set(geo) - geo_known)}")
        if "catalog" in geo:
            geo["catalog"] = tuple(float(r) for r in geo["catalog"])
        try:
            return cls(geometry=GeometryConfig(**geo), **data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


@dataclass
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    feasible_fraction: float
    elite_coaxial_gears: int


@dataclass
class RunReport:
    config: dict
    seed: int
    stats: list
    archive: Archive

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "config": self.config,
            "generations": [dataclasses.asdict(s) for s in self.stats],
        }


def select_tournament(pop_fitness, k: int, rng: np.random.Generator, n: int | None = None):
    """Tournament selection; returns ``n`` parent indices (default: population size).

    Each slot samples ``k`` distinct indices and keeps the fittest, lowest
    index on ties.
    """
    fit = np.asarray(pop_fitness, dtype=np.float64)
    size = fit.shape[0]
    if size == 0 or not 1 <= k <= size:
        raise ValueError("need a nonempty population and 1 <= k <= population size")
    n = size if n is None else n
    out = np.empty(n, dtype=np.int64)
    for s in range(n):
        cand = np.sort(rng.choice(size, size=k, replace=False))
        out[s] = cand[np.argmax(fit[cand])]
    return out


def mutate_rnn(genome: rnn.RnnGenome, rng: np.random.Generator, rate: float,
               sigma: float) -> rnn.RnnGenome:
    """Gaussian perturbation of each weight with probability ``rate``; no clamping."""
    p = genome.params
    mask = rng.random(p.shape[0]) < rate
    noise = rng.normal(0.0, sigma, p.shape[0])
    return rnn.RnnGenome(np.where(mask, p + noise, p))


def crossover_rnn(a: rnn.RnnGenome, b: rnn.RnnGenome, rng: np.random.Generator):
    """Uniform crossover over the flat weight vectors."""
    swap = rng.random(a.params.shape[0]) < 0.5
    return (rnn.RnnGenome(np.where(swap, b.params, a.params)),
            rnn.RnnGenome(np.where(swap, a.params, b.params)))


class _RnnEncoding:
    name = "rnn"

    def __init__(self, config: EvolutionConfig):
        self.rate = config.rnn_mutation_rate
        self.sigma = config.rnn_mutation_sigma

    def init(self, rng):
        return rnn.random_genome(rng)

    def decode_all(self, pop):
        return rnn.decode_population(np.stack([g.params for g in pop]))

    def trace(self, genome):
        return rnn.decode(genome)[1]

    def crossover(self, a, b, rng):
        return crossover_rnn(a, b, rng)

    def mutate(self, g, rng):
        return mutate_rnn(g, rng, self.rate, self.sigma)


class _DirectEncoding:
    name = "direct"

    def __init__(self, config: EvolutionConfig):
        self.rates = direct.DirectRates(config.direct_point_rate, config.direct_insert_rate,
                                        config.direct_delete_rate)

    def init(self, rng):
        return direct.random_direct(rng)

    def decode_all(self, pop):
        return [direct.decode_direct(g) for g in pop]

    def trace(self, genome):
        return None

    def crossover(self, a, b, rng):
        return direct.crossover_direct(a, b, rng)

    def mutate(self, g, rng):
        return direct.mutate_direct(g, rng, self.rates)


def make_encoding(config: EvolutionConfig):
    return {"rnn": _RnnEncoding, "direct": _DirectEncoding}[config.encoding](config)


def _stream(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *tags]))


def evaluate(pop: list, encoding, config: EvolutionConfig, archive: Archive):
    """Decode, place and score a population against the archive.

    Returns ``(mechanisms, vectors, novelty_scores, fitness)``.
    """
    geo = config.geometry
    catalog = GearCatalog(geo.catalog)
    mechs = [place_sequence(steps, catalog, geo.box_length, geo.axle_radius)
             for steps in encoding.decode_all(pop)]
    vectors = np.array([novelty_vector(m) for m in mechs], dtype=np.float64)
    scores = population_novelty(vectors, archive.vectors(), config.normalize_novelty)
    fitness = fitness_from(scores, [m.feasibility for m in mechs])
    return mechs, vectors, scores, fitness


def _next_generation(pop, fitness, encoding, config, generation):
    order = sorted(range(len(pop)), key=lambda i: (-fitness[i], i))
    elites = [pop[i] for i in order[:config.elitism]]
    n_children = config.pop_size - config.elitism
    n_parents = n_children + (n_children % 2)
    parents = select_tournament(fitness, config.tournament_size,
                                _stream(config.seed, _SELECT, generation), n_parents)
    children = []
    for pair in range(n_parents // 2):
        rng = _stream(config.seed, _VARY, generation, pair)
        a, b = pop[parents[2 * pair]], pop[parents[2 * pair + 1]]
        if rng.random() < config.crossover_rate:
            a, b = encoding.crossover(a, b, rng)
        children.append(encoding.mutate(a, rng))
        children.append(encoding.mutate(b, rng))
    return elites + children[:n_children]


def evolve(config: EvolutionConfig, observer=None):
    """Run novelty search; returns ``(archive, report)``.

    Each generation: decode every genome, build novelty vectors, assign
    fitness, archive the best individual, then tournament-select parents,
    cross over and mutate them, and carry the elites over unchanged.

    ``observer(generation, population, fitness)`` is called once per
    generation after evaluation; it cannot influence the run.
    """
    config.validate()
    encoding = make_encoding(config)
    init_rng = _stream(config.seed, _INIT)
    pop = [encoding.init(init_rng) for _ in range(config.pop_size)]
    archive = Archive()
    stats = []
    for gen in range(config.generations):
        mechs, vectors, scores, fitness = evaluate(pop, encoding, config, archive)
        b = best_index(fitness)
        elite = mechs[b]
        archive = archive_append(archive, ArchiveEntry(
            generation=gen,
            encoding=encoding.name,
            genome=pop[b],
            mechanism=elite,
            novelty_vector=tuple(float(v) for v in vectors[b]),
            novelty_score=float(scores[b]),
            fitness=float(fitness[b]),
            trace=encoding.trace(pop[b]),
        ))
        stats.append(GenerationStats(
            generation=gen,
            best_fitness=float(fitness[b]),
            mean_fitness=float(np.mean(fitness)),
            feasible_fraction=float(np.mean([m.feasibility.feasible for m in mechs])),
            elite_coaxial_gears=sum(g.placement is Placement.COAXIAL for g in elite.gears),
        ))
        if observer is not None:
            observer(gen, list(pop), fitness.copy())
        if gen + 1 < config.generations:
            pop = _next_generation(pop, fitness, encoding, config, gen)
    report = RunReport(config=config.to_dict(), seed=config.seed, stats=stats, archive=archive)
    return archive, report
