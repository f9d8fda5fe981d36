import itertools
import math

import numpy as np
import pytest

from gearevo.analysis import (AnalysisError, coaxial_count, compare, diversity, is_alternating,
                              score_dispersion, score_table, trace_summary)
from gearevo.direct import DirectGenome
from gearevo.evolution import EvolutionConfig, evolve
from gearevo.geometry import place_sequence
from gearevo.novelty import Archive, ArchiveEntry, novelty_vector


def _archive(step_lists, scores=None, encoding="direct"):
    entries = []
    for k, steps in enumerate(step_lists):
        m = place_sequence(steps)
        d = None if scores is None else scores[k]
        entries.append(ArchiveEntry(k, encoding, DirectGenome(tuple(steps)), m,
                                    novelty_vector(m), 0.0, 0.0, distance_in=d,
                                    trials_in=None if d is None else (d,)))
    return Archive(entries)


MIXED = [
    [(1, "L"), (1, "L")],
    [(2, "L"), (3, "C")],
    [(4, "L"), (5, "L"), (6, "L")],
    [(1, "L"), (2, "L"), (3, "C"), (4, "L")],
    [(6, "C"), (5, "L")],
]


def test_coaxial_count():
    assert coaxial_count(_archive([[(1, "L"), (2, "L")]] * 3)) == 0
    assert coaxial_count(_archive([[(1, "L"), (2, "L")], [(1, "L"), (2, "C")]])) == 1
    # the first gene's flag is ignored, so entry 4 is linear only
    assert coaxial_count(_archive(MIXED)) == 2
    with pytest.raises(AnalysisError):
        coaxial_count(Archive())


def test_diversity():
    same = _archive([[(3, "L"), (3, "L")]] * 4)
    assert diversity(same) == 0
    two = _archive(MIXED[:2])
    assert diversity(two) == pytest.approx(
        math.dist(two[0].novelty_vector, two[1].novelty_vector), rel=1e-15)
    three = _archive(MIXED[:3])
    vecs = [e.novelty_vector for e in three]
    expected = sum(math.dist(a, b) for a, b in itertools.combinations(vecs, 2)) / 3
    assert diversity(three) == pytest.approx(expected, rel=1e-12)
    reordered = Archive(list(reversed(three.entries)))
    assert diversity(reordered) == pytest.approx(diversity(three), rel=1e-12)
    with pytest.raises(AnalysisError):
        diversity(_archive(MIXED[:1]))


def test_score_dispersion():
    assert score_dispersion(_archive(MIXED[:3], [7.0, 7.0, 7.0]))[1] == 0
    assert score_dispersion(_archive(MIXED[:2], [10.0, 20.0])) == (15.0, 5.0)
    assert score_dispersion(_archive(MIXED[:3], [10.0, None, 20.0])) == (15.0, 5.0)
    with pytest.raises(AnalysisError):
        score_dispersion(_archive(MIXED[:3], [10.0, None, None]))


def test_score_table():
    a = _archive(MIXED[:3], [10.0, None, 20.0])
    assert score_table(a) == [(0, 10.0, 10.0, 10.0), (2, 20.0, 20.0, 20.0)]


@pytest.mark.parametrize("sizes,flag", [
    ([1, 6, 1, 6], True), ([3, 3, 3], False), ([2, 5, 1, 6], True), ([1, 6], False),
    ([1, 2, 3], False), ([6, 1, 6, 6], False),
])
def test_alternation_rule(sizes, flag):
    assert is_alternating([5.0 * s for s in sizes]) is flag


def test_trace_summary():
    archive, _ = evolve(EvolutionConfig(encoding="rnn", pop_size=20, generations=3, seed=1))
    rows = trace_summary(archive)
    assert len(rows) == 3
    for row, e in zip(rows, archive):
        assert len(row["hidden_signs"]) == len(e.mechanism)
        assert all(len(s) == 8 and set(s) <= {"+", "-"} for s in row["hidden_signs"])
        assert [g for g, _ in row["sequence"]] == e.mechanism.gear_ids
    with pytest.raises(AnalysisError):
        trace_summary(_archive(MIXED))


def test_compare_pairs_by_seed():
    runs = []
    for seed in (1, 2):
        for enc in ("rnn", "direct"):
            a, _ = evolve(EvolutionConfig(encoding=enc, pop_size=20, generations=5, seed=seed))
            runs.append((f"{enc}{seed}", a, seed))
    report = compare(runs)
    assert len(report.pairs) == 2
    for p in report.pairs:
        assert p["rnn"] == f"rnn{p['seed']}" and p["direct"] == f"direct{p['seed']}"
        expected = ("rnn" if p["rnn_diversity"] > p["direct_diversity"] else "direct")
        assert p["more_diverse"] == expected
    m = report.majority()
    assert m["pairs"] == 2
    assert m["rnn_more_diverse"] == sum(p["more_diverse"] == "rnn" for p in report.pairs)
    d = report.to_dict()
    assert set(d["encodings"]) == {"rnn", "direct"}
    assert "seed" in report.to_text()
    with pytest.raises(AnalysisError):
        compare(runs[:1])


def test_compare_majority_recomputed():
    rng = np.random.default_rng(0)
    runs = []
    for seed in range(5):
        for enc in ("rnn", "direct"):
            a, _ = evolve(EvolutionConfig(encoding=enc, pop_size=15, generations=4, seed=seed))
            runs.append((f"{enc}-{seed}", a, seed))
    rng.shuffle(runs)
    report = compare(runs)
    wins = 0
    for seed in range(5):
        r = next(a for n, a, s in runs if s == seed and n.startswith("rnn"))
        d = next(a for n, a, s in runs if s == seed and n.startswith("direct"))
        wins += diversity(r) > diversity(d)
    assert report.majority()["rnn_more_diverse"] == wins
    assert report.majority()["rnn_diversity_majority"] == (wins >= 3)
