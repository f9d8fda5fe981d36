"""Kinematic stand-in for the physical pull-test rig.

A rubber band twisted once drives the input axle; the output axle winds a
rope onto a spool and pulls a car along a 35 in track. Faster trains (large
speed ratio) travel further per input turn but deliver less torque, and each
linear mesh loses a fixed fraction to friction. Below the required rope
tension the car does not move.

Scores are annotations for reports only and never feed back into evolution.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from gearevo.geometry import Mechanism, linear_mesh_count, speed_ratio
from gearevo.novelty import Archive

MM_PER_INCH = 25.4


class InfeasibleMechanismError(ValueError):
    """The rig cannot be assembled for an infeasible mechanism."""


class ScoreImportError(ValueError):
    pass


@dataclass(frozen=True)
class RigModel:
    track_length: float = 35.0
    input_turns: float = 1.0
    band_torque: float = 1.0
    spool_radius: float = 25.0
    required_tension: float = 0.008
    friction_loss_per_mesh: float = 0.08

    def __post_init__(self):
        for name in ("track_length", "input_turns", "band_torque", "spool_radius",
                     "required_tension"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.friction_loss_per_mesh < 1.0:
            raise ValueError("friction_loss_per_mesh must lie in [0, 1)")

    @classmethod
    def from_dict(cls, data: dict) -> "RigModel":
        return cls(**{k: float(v) for k, v in (data or {}).items()})

    def stall_ratio(self, meshes: int) -> float:
        """Largest speed ratio that still delivers the required tension."""
        return (self.band_torque * (1.0 - self.friction_loss_per_mesh) ** meshes
                / (self.required_tension * self.spool_radius))


def distance_for_ratio(ratio: float, meshes: int, rig: RigModel = RigModel()) -> float:
    """Predicted travel in inches for a train with speed ratio ``ratio``."""
    torque_out = rig.band_torque * (1.0 - rig.friction_loss_per_mesh) ** meshes / ratio
    if torque_out < rig.required_tension * rig.spool_radius:
        return 0.0
    rope_mm = rig.input_turns * ratio * 2.0 * math.pi * rig.spool_radius
    return min(rig.track_length, rope_mm / MM_PER_INCH)


def distance_score(mech: Mechanism, rig: RigModel = RigModel()) -> float:
    if not mech.feasibility.feasible:
        raise InfeasibleMechanismError(
            f"mechanism violates constraints by {mech.feasibility.violation} mm")
    return distance_for_ratio(speed_ratio(mech), linear_mesh_count(mech), rig)


def attach_scores(archive: Archive, rig: RigModel = RigModel()) -> Archive:
    """Copy of ``archive`` with surrogate scores; infeasible entries are marked unscored."""
    entries = []
    for e in archive:
        if e.mechanism.feasibility.feasible:
            d = distance_score(e.mechanism, rig)
            e = replace(e, distance_in=d, trials_in=(d,), score_source="surrogate")
        else:
            e = replace(e, distance_in=None, trials_in=None, score_source="unscored")
        entries.append(e)
    return Archive(entries)


def read_measurements(text: str) -> list:
    """Parse ``generation, trial1_in, trial2_in, ...`` rows; a header line is optional."""
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        row = [c.strip() for c in row]
        if not row or not any(row) or row[0].startswith("#"):
            continue
        try:
            gen = int(row[0])
        except ValueError:
            if lineno == 1:
                continue
            raise ScoreImportError(f"line {lineno}: bad generation {row[0]!r}") from None
        try:
            trials = tuple(float(c) for c in row[1:] if c != "")
        except ValueError:
            raise ScoreImportError(f"line {lineno}: non-numeric trial value") from None
        if not trials:
            raise ScoreImportError(f"line {lineno}: no trial values")
        rows.append((gen, trials))
    return rows


def import_scores(archive: Archive, rows: Iterable) -> Archive:
    """Apply measured ``(generation, trials)`` rows; the mean trial becomes the score.

    Imported rows override any earlier annotation for the same entry.
    """
    rows = list(rows)
    known = {e.generation for e in archive}
    unknown = sorted({g for g, _ in rows if g not in known})
    if unknown:
        raise ScoreImportError(f"rows reference unknown generations: {unknown}")
    by_gen = {g: tuple(float(t) for t in trials) for g, trials in rows}
    entries = []
    for e in archive:
        if e.generation in by_gen:
            trials = by_gen[e.generation]
            e = replace(e, distance_in=sum(trials) / len(trials), trials_in=trials,
                        score_source="measured")
        entries.append(e)
    return Archive(entries)


def achievable_ratios(catalog: Sequence[float], meshes: int) -> list:
    """Every speed ratio reachable with exactly ``meshes`` linear meshes."""
    pair = {a / b for a in catalog for b in catalog}
    out = {1.0}
    for _ in range(meshes):
        out = {r * p for r in out for p in pair}
    return sorted(out)


def calibration_sweep(rig: RigModel = RigModel(), meshes: int = 1, lo: float = 1 / 9,
                      hi: float = 9.0, points: int = 201) -> tuple:
    """Distances over a log-spaced grid of speed ratios at a fixed mesh count."""
    ratios = np.geomspace(lo, hi, points)
    return ratios, np.array([distance_for_ratio(r, meshes, rig) for r in ratios])


def is_unimodal(values: Sequence[float]) -> bool:
    """True when the sequence never rises again after it starts to fall."""
    falling = False
    for a, b in zip(values, values[1:]):
        if b < a:
            falling = True
        elif b > a and falling:
            return False
    return True


def check_calibration(rig: RigModel = RigModel(), max_meshes: int = 5) -> dict:
    """Calibration verdict per mesh count: unimodal, interior peak, stalled at 9x."""
    out = {}
    for m in range(max_meshes + 1):
        ratios, dist = calibration_sweep(rig, m)
        peak = int(np.argmax(dist))
        out[m] = {
            "unimodal": is_unimodal(dist.tolist()),
            "interior_peak": 0 < peak < len(dist) - 1,
            "peak_ratio": float(ratios[peak]),
            "peak_in": float(dist[peak]),
            "stalls_at_max_ratio": bool(dist[-1] == 0.0),
            "in_range": bool(np.all((dist >= 0) & (dist <= rig.track_length))),
        }
    return out

