"""Gear catalog, chain placement and geometric feasibility."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from gearevo import kernels

MIN_GEARS = 2
MAX_GEARS = 6
DEFAULT_BOX_LENGTH = 150.0
DEFAULT_AXLE_RADIUS = 2.5


class InvalidGenomeError(ValueError):
    """A step list cannot be turned into a mechanism."""


class Placement(str, Enum):
    FIRST = "First"
    LINEAR = "Linear"
    COAXIAL = "Coaxial"

    @classmethod
    def parse(cls, value) -> "Placement":
        if isinstance(value, Placement):
            return value
        aliases = {"L": cls.LINEAR, "C": cls.COAXIAL, "F": cls.FIRST}
        if value in aliases:
            return aliases[value]
        return cls(value)


class BreachKind(str, Enum):
    DISC_OVERLAP = "DiscOverlap"
    AXLE_CLASH = "AxleClash"
    OUT_OF_BOUNDS = "OutOfBounds"


# Integer codes shared with the kernels.
_PLACEMENT_CODE = {Placement.FIRST: 0, Placement.LINEAR: 1, Placement.COAXIAL: 2}
_BREACH_FROM_CODE = {
    kernels.OUT_OF_BOUNDS: BreachKind.OUT_OF_BOUNDS,
    kernels.DISC_OVERLAP: BreachKind.DISC_OVERLAP,
    kernels.AXLE_CLASH: BreachKind.AXLE_CLASH,
}


@dataclass(frozen=True)
class GearType:
    id: int
    pitch_radius: float


@dataclass(frozen=True)
class GearCatalog:
    """The six gear sizes a design may draw from, indexed by id 1..6."""

    radii: tuple = (5.0, 10.0, 15.0, 20.0, 25.0, 30.0)

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if len(radii) != 6:
            raise ValueError("catalog must hold exactly 6 gear sizes")
        if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("catalog radii must be positive and strictly increasing")
        object.__setattr__(self, "radii", radii)

    def __getitem__(self, gear_id: int) -> GearType:
        if not 1 <= gear_id <= 6:
            raise InvalidGenomeError(f"gear id {gear_id} outside 1..6")
        return GearType(gear_id, self.radii[gear_id - 1])

    def __iter__(self):
        return (self[k] for k in range(1, 7))

    def __len__(self):
        return 6


DEFAULT_CATALOG = GearCatalog()


@dataclass(frozen=True)
class PlacedGear:
    gear: GearType
    center_x: float
    plane: int
    axle_id: int
    placement: Placement

    @property
    def radius(self) -> float:
        return self.gear.pitch_radius


@dataclass(frozen=True)
class Breach:
    kind: BreachKind
    depth: float
    indices: tuple


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violation: float
    breaches: tuple = ()


@dataclass(frozen=True)
class Mechanism:
    gears: tuple
    feasibility: FeasibilityReport = field(
        default_factory=lambda: FeasibilityReport(True, 0.0, ())
    )

    def __len__(self):
        return len(self.gears)

    @property
    def gear_ids(self) -> list:
        return [g.gear.id for g in self.gears]

    @property
    def radii(self) -> list:
        return [g.radius for g in self.gears]

    @property
    def centers(self) -> list:
        return [g.center_x for g in self.gears]

    def has_coaxial(self) -> bool:
        return any(g.placement is Placement.COAXIAL for g in self.gears)

    def steps(self) -> list:
        """Recover the (gear_id, placement) list this mechanism was built from."""
        return [(g.gear.id, g.placement) for g in self.gears]


def _layout(steps: Sequence, catalog: GearCatalog) -> tuple:
    gears = []
    next_axle = 0
    for n, (gear_id, flag) in enumerate(steps):
        gear = catalog[int(gear_id)]
        if n == 0:
            gears.append(PlacedGear(gear, gear.pitch_radius, 0, 0, Placement.FIRST))
            next_axle = 1
            continue
        prev = gears[-1]
        flag = Placement.parse(flag)
        if flag is Placement.COAXIAL:
            gears.append(PlacedGear(gear, prev.center_x, prev.plane + 1, prev.axle_id,
                                    Placement.COAXIAL))
        elif flag is Placement.LINEAR:
            gears.append(PlacedGear(gear, prev.center_x + prev.radius + gear.pitch_radius,
                                    prev.plane, next_axle, Placement.LINEAR))
            next_axle += 1
        else:
            raise InvalidGenomeError(f"step {n}: placement must be Linear or Coaxial")
    return tuple(gears)


def place_sequence(steps: Sequence, catalog: GearCatalog = DEFAULT_CATALOG,
                   box_length: float = DEFAULT_BOX_LENGTH,
                   axle_radius: float = DEFAULT_AXLE_RADIUS) -> Mechanism:
    """Lay out a chain of gears from ``(gear_id, placement)`` steps.

    The first step's placement flag is ignored. Linear gears mesh exactly with
    their predecessor in the +x direction; coaxial gears share the
    predecessor's axle one plane further back.
    """
    if not MIN_GEARS <= len(steps) <= MAX_GEARS:
        raise InvalidGenomeError(f"mechanism needs 2..6 gears, got {len(steps)}")
    mech = Mechanism(_layout(steps, catalog))
    return Mechanism(mech.gears, check_feasibility(mech, box_length, axle_radius))


def _as_arrays(gears: Iterable[PlacedGear]):
    gears = list(gears)
    return (
        np.array([g.radius for g in gears], dtype=np.float64),
        np.array([g.center_x for g in gears], dtype=np.float64),
        np.array([g.plane for g in gears], dtype=np.int64),
        np.array([g.axle_id for g in gears], dtype=np.int64),
        np.array([_PLACEMENT_CODE[g.placement] for g in gears], dtype=np.int64),
    )


def check_feasibility(mech: Mechanism, box_length: float = DEFAULT_BOX_LENGTH,
                      axle_radius: float = DEFAULT_AXLE_RADIUS) -> FeasibilityReport:
    """Enumerate every constraint breach of an already placed mechanism.

    Three breach kinds are reported, each with a penetration depth in mm:

    * ``OutOfBounds``: a disc extends below 0 or past ``box_length``.
    * ``DiscOverlap``: two non-consecutive gears in one plane intersect.
    * ``AxleClash``: a disc reaches a foreign axle. Axles run through every
      plane; a gear's own axle and its meshing partners' axles are exempt.

    ``violation`` is the sum of all depths.
    """
    raw = kernels.feasibility_breaches(*_as_arrays(mech.gears), float(box_length),
                                       float(axle_radius))
    breaches = tuple(
        Breach(_BREACH_FROM_CODE[kind], depth, (i,) if j < 0 else (i, j))
        for kind, depth, i, j in raw
    )
    violation = float(sum(b.depth for b in breaches))
    return FeasibilityReport(not breaches, violation, breaches)


def speed_ratio(mech: Mechanism) -> float:
    """Output-axle speed per unit input-axle speed."""
    ratio = 1.0
    for prev, cur in zip(mech.gears, mech.gears[1:]):
        if cur.placement is Placement.LINEAR:
            ratio *= prev.radius / cur.radius
    return ratio


def linear_mesh_count(mech: Mechanism) -> int:
    return sum(g.placement is Placement.LINEAR for g in mech.gears)


def mechanism_record(mech: Mechanism) -> dict:
    """Plain-data form of a mechanism for serialization."""
    return {
        "gears": [
            {
                "gear_id": g.gear.id,
                "radius_mm": g.radius,
                "center_x_mm": g.center_x,
                "plane": g.plane,
                "axle_id": g.axle_id,
                "placement": g.placement.value,
            }
            for g in mech.gears
        ],
        "feasibility": {
            "feasible": mech.feasibility.feasible,
            "violation_mm": mech.feasibility.violation,
            "breaches": [
                {"kind": b.kind.value, "depth_mm": b.depth, "indices": list(b.indices)}
                for b in mech.feasibility.breaches
            ],
        },
    }


def mechanism_from_record(rec: dict) -> Mechanism:
    gears = tuple(
        PlacedGear(GearType(int(g["gear_id"]), float(g["radius_mm"])), float(g["center_x_mm"]),
                   int(g["plane"]), int(g["axle_id"]), Placement(g["placement"]))
        for g in rec["gears"]
    )
    fz = rec["feasibility"]
    breaches = tuple(
        Breach(BreachKind(b["kind"]), float(b["depth_mm"]), tuple(int(i) for i in b["indices"]))
        for b in fz["breaches"]
    )
    return Mechanism(gears, FeasibilityReport(bool(fz["feasible"]), float(fz["violation_mm"]),
                                              breaches))
