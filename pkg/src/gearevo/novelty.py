"""Structural novelty vectors, the elite archive and constraint-aware fitness."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from gearevo import kernels
from gearevo.geometry import FeasibilityReport, Mechanism

FEATURES = ("var_x", "mean_ratio", "var_ratio", "mean_radius", "var_radius", "gear_count")


class ArchiveContractError(RuntimeError):
    """The archive was asked to do something its append-only contract forbids."""


def _pvar(values: Sequence[float]) -> float:
    m = sum(values) / len(values)
    return sum((v - m) ** 2 for v in values) / len(values)


def novelty_vector(mech: Mechanism) -> tuple:
    """Six-feature structural descriptor of a mechanism.

    ``(var(x), mean(ratio), var(ratio), mean(radius), var(radius), n)`` with
    population variances and ratios taken as current radius over previous
    radius for every consecutive pair.
    """
    xs = mech.centers
    radii = mech.radii
    ratios = [radii[t] / radii[t - 1] for t in range(1, len(radii))]
    return (
        _pvar(xs),
        sum(ratios) / len(ratios),
        _pvar(ratios),
        sum(radii) / len(radii),
        _pvar(radii),
        float(len(radii)),
    )


@dataclass(frozen=True)
class ArchiveEntry:
    generation: int
    encoding: str
    genome: Any
    mechanism: Mechanism
    novelty_vector: tuple
    novelty_score: float
    fitness: float
    distance_in: Optional[float] = None
    trials_in: Optional[tuple] = None
    score_source: Optional[str] = None
    trace: Any = None

    @property
    def scored(self) -> bool:
        return self.distance_in is not None


class Archive:
    """Append-only sequence of per-generation elites."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Sequence[ArchiveEntry] = ()):
        self._entries = tuple(entries)

    @property
    def entries(self) -> tuple:
        return self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __getitem__(self, k):
        return self._entries[k]

    def __eq__(self, other):
        return isinstance(other, Archive) and self._entries == other._entries

    def vectors(self) -> np.ndarray:
        if not self._entries:
            return np.zeros((0, len(FEATURES)))
        return np.array([e.novelty_vector for e in self._entries], dtype=np.float64)


def archive_append(archive: Archive, entry: ArchiveEntry) -> Archive:
    """Return a new archive with one more generation's elite."""
    if entry.generation != len(archive):
        raise ArchiveContractError(
            f"expected an entry for generation {len(archive)}, got generation {entry.generation}"
        )
    return Archive(archive.entries + (entry,))


def _zscore(queries: np.ndarray, refs: np.ndarray):
    mu = queries.mean(axis=0)
    sd = queries.std(axis=0)
    sd[sd == 0] = 1.0
    return (queries - mu) / sd, (refs - mu) / sd


def population_novelty(vectors: np.ndarray, archive_vectors: np.ndarray,
                       normalize: bool = False) -> np.ndarray:
    """Novelty score of every population member.

    Distance to the nearest archived vector, or to the nearest other
    population member while the archive is still empty.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    archive_vectors = np.asarray(archive_vectors, dtype=np.float64)
    empty = archive_vectors.shape[0] == 0
    refs = vectors if empty else archive_vectors
    if normalize:
        vectors, refs = _zscore(vectors, refs)
        if empty:
            refs = vectors
    scores = kernels.min_distances(vectors, refs, empty)
    # a lone individual with an empty archive has no neighbour at all
    scores[~np.isfinite(scores)] = 0.0
    return scores


def novelty_score(v: Sequence[float], archive: Archive,
                  population_vectors: Sequence[Sequence[float]]) -> float:
    """Novelty of one vector.

    ``population_vectors`` is only consulted while the archive is empty; ``v``
    itself is excluded from it by identity of position, so pass ``v`` as one
    of the rows and equal neighbours still score 0.
    """
    v = np.asarray(v, dtype=np.float64)[None, :]
    if len(archive):
        return float(kernels.min_distances(v, archive.vectors(), False)[0])
    pop = np.asarray(population_vectors, dtype=np.float64)
    if pop.ndim != 2 or pop.shape[0] == 0:
        raise ValueError("population_vectors must be a nonempty list of vectors")
    # drop one copy of v (itself); any remaining copy is a genuine neighbour
    same = np.flatnonzero(np.all(pop == v, axis=1))
    if same.size:
        pop = np.delete(pop, same[0], axis=0)
    if pop.shape[0] == 0:
        return 0.0
    return float(kernels.min_distances(v, pop, False)[0])


def fitness_from(scores: Sequence[float], reports: Sequence[FeasibilityReport]) -> np.ndarray:
    """Feasible individuals keep their novelty; infeasible ones get ``-violation``."""
    return np.array([s if r.feasible else -r.violation for s, r in zip(scores, reports)],
                    dtype=np.float64)


def assign_fitness(pop_reports: Sequence, archive: Archive, normalize: bool = False):
    """Fitness for a population given ``(novelty_vector, FeasibilityReport)`` pairs.

    Returns ``(fitness, novelty_scores)``; every infeasible fitness is strictly
    below every feasible one.
    """
    vectors = np.array([v for v, _ in pop_reports], dtype=np.float64)
    scores = population_novelty(vectors, archive.vectors(), normalize)
    return fitness_from(scores, [r for _, r in pop_reports]), scores


def best_index(fitness: Sequence[float]) -> int:
    """Index of the fittest individual, lowest index on ties."""
    return int(np.argmax(np.asarray(fitness)))
