"""Post-hoc statistics over persisted archives."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from gearevo.novelty import Archive


class AnalysisError(ValueError):
    pass


def coaxial_count(archive: Archive) -> int:
    """Number of archived mechanisms containing at least one coaxial gear."""
    if not len(archive):
        raise AnalysisError("coaxial_count needs a nonempty archive")
    return sum(e.mechanism.has_coaxial() for e in archive)


def _dist(a, b) -> float:
    return math.sqrt(sum((p - q) ** 2 for p, q in zip(a, b)))


def diversity(archive: Archive) -> float:
    """Mean pairwise Euclidean distance between archived novelty vectors."""
    if len(archive) < 2:
        raise AnalysisError("diversity needs at least 2 archive entries")
    vecs = [e.novelty_vector for e in archive]
    pairs = [_dist(a, b) for a, b in combinations(vecs, 2)]
    return sum(pairs) / len(pairs)


def score_dispersion(archive: Archive) -> tuple:
    """Mean and population standard deviation of the scored entries."""
    scores = [e.distance_in for e in archive if e.distance_in is not None]
    if len(scores) < 2:
        raise AnalysisError("score_dispersion needs at least 2 scored entries")
    mean = sum(scores) / len(scores)
    return mean, math.sqrt(sum((s - mean) ** 2 for s in scores) / len(scores))


def score_table(archive: Archive) -> list:
    """Rows of (index, avg, min, max) over scored entries, ready for an error-bar plot."""
    rows = []
    for e in archive:
        if e.distance_in is None:
            continue
        trials = e.trials_in or (e.distance_in,)
        rows.append((e.generation, e.distance_in, min(trials), max(trials)))
    return rows


def is_alternating(radii: Sequence[float]) -> bool:
    """Radii strictly alternate up/down over at least three gears."""
    if len(radii) < 3:
        return False
    diffs = [b - a for a, b in zip(radii, radii[1:])]
    if any(d == 0 for d in diffs):
        return False
    return all((d1 > 0) != (d2 > 0) for d1, d2 in zip(diffs, diffs[1:]))


def trace_summary(archive: Archive) -> list:
    """Per-elite gear sequence, hidden-state sign patterns and alternation flag."""
    rows = []
    for e in archive:
        if e.trace is None:
            raise AnalysisError(
                f"entry {e.generation} ({e.encoding}) has no activation trace")
        rows.append({
            "generation": e.generation,
            "sequence": [(s.gear_id, s.placement.value) for s in e.trace.steps],
            "hidden_signs": ["".join("+" if v >= 0 else "-" for v in s.hidden)
                             for s in e.trace.steps],
            "alternating": is_alternating(e.mechanism.radii),
        })
    return rows


@dataclass
class RunSummary:
    name: str
    encoding: str
    seed: Optional[int]
    archive_size: int
    coaxial_count: int
    diversity: float
    score_mean: Optional[float] = None
    score_std: Optional[float] = None
    alternating_count: Optional[int] = None


@dataclass
class ComparisonReport:
    runs: list
    pairs: list = field(default_factory=list)

    def by_encoding(self) -> dict:
        out = defaultdict(list)
        for r in self.runs:
            out[r.encoding].append(r)
        return dict(out)

    def majority(self) -> dict:
        """Share of paired seeds where the recurrent encoding leads."""
        n = len(self.pairs)
        div = sum(p["more_diverse"] == "rnn" for p in self.pairs)
        coax = sum(p["rnn_coaxial"] >= p["direct_coaxial"] for p in self.pairs)
        return {
            "pairs": n,
            "rnn_more_diverse": div,
            "rnn_coaxial_at_least_direct": coax,
            "rnn_diversity_majority": n > 0 and div * 2 > n,
            "rnn_coaxial_majority": n > 0 and coax * 2 > n,
        }

    def to_dict(self) -> dict:
        enc = {}
        for name, runs in sorted(self.by_encoding().items()):
            enc[name] = {
                "runs": len(runs),
                "seeds": [r.seed for r in runs],
                "archive_size": [r.archive_size for r in runs],
                "coaxial_count": [r.coaxial_count for r in runs],
                "diversity": [r.diversity for r in runs],
                "mean_diversity": sum(r.diversity for r in runs) / len(runs),
                "mean_coaxial_count": sum(r.coaxial_count for r in runs) / len(runs),
                "score_mean": [r.score_mean for r in runs],
                "score_std": [r.score_std for r in runs],
            }
        return {
            "encodings": enc,
            "runs": [vars(r) for r in self.runs],
            "pairs": self.pairs,
            "majority": self.majority(),
        }

    def to_text(self) -> str:
        lines = ["run                  encoding  seed  size  coaxial  diversity   score(mean/std)"]
        for r in self.runs:
            score = ("-" if r.score_mean is None
                     else f"{r.score_mean:.2f}/{r.score_std:.2f}")
            seed = "-" if r.seed is None else str(r.seed)
            lines.append(f"{r.name[:20]:<20} {r.encoding:<9} {seed:>4} {r.archive_size:>5} "
                         f"{r.coaxial_count:>8} {r.diversity:>10.2f}   {score}")
        if self.pairs:
            lines.append("")
            lines.append("seed  more_diverse  coaxial(rnn/direct)")
            for p in self.pairs:
                lines.append(f"{p['seed']!s:>4}  {p['more_diverse']:<12}  "
                             f"{p['rnn_coaxial']}/{p['direct_coaxial']}")
            m = self.majority()
            lines.append("")
            lines.append(f"rnn more diverse in {m['rnn_more_diverse']}/{m['pairs']} pairs; "
                         f"rnn coaxial >= direct in {m['rnn_coaxial_at_least_direct']}/"
                         f"{m['pairs']} pairs")
        return "\n".join(lines) + "\n"


def summarize(name: str, archive: Archive, seed: Optional[int] = None) -> RunSummary:
    if not len(archive):
        raise AnalysisError(f"run {name!r} has an empty archive")
    s = RunSummary(name=name, encoding=archive[0].encoding, seed=seed,
                   archive_size=len(archive), coaxial_count=coaxial_count(archive),
                   diversity=diversity(archive))
    if sum(e.distance_in is not None for e in archive) >= 2:
        s.score_mean, s.score_std = score_dispersion(archive)
    if all(e.trace is not None for e in archive):
        s.alternating_count = sum(r["alternating"] for r in trace_summary(archive))
    return s


def _leader(a: float, b: float) -> str:
    return "rnn" if a > b else "direct" if b > a else "tie"


def compare(runs: Sequence) -> ComparisonReport:
    """Compare ``(name, archive, seed)`` runs; rnn/direct runs sharing a seed are paired.

    Runs without a seed are paired in the order given within each encoding.
    """
    if len(runs) < 2:
        raise AnalysisError("compare needs at least 2 archives")
    summaries = [summarize(name, arch, seed) for name, arch, seed in runs]
    rnn_runs = [s for s in summaries if s.encoding == "rnn"]
    direct_runs = [s for s in summaries if s.encoding == "direct"]
    pairs = []
    used = set()
    for k, r in enumerate(rnn_runs):
        match = None
        for j, d in enumerate(direct_runs):
            if j in used:
                continue
            if (r.seed is not None and d.seed == r.seed) or (r.seed is None and d.seed is None):
                match = j
                break
        if match is None:
            continue
        used.add(match)
        d = direct_runs[match]
        pairs.append({
            "seed": r.seed if r.seed is not None else k,
            "rnn": r.name,
            "direct": d.name,
            "rnn_diversity": r.diversity,
            "direct_diversity": d.diversity,
            "more_diverse": _leader(r.diversity, d.diversity),
            "rnn_coaxial": r.coaxial_count,
            "direct_coaxial": d.coaxial_count,
            "more_coaxial": _leader(r.coaxial_count, d.coaxial_count),
        })
    return ComparisonReport(runs=summaries, pairs=pairs)

