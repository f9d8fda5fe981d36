"""Recurrent-network genome: forward step and decoding into gear steps.

Flat parameter layout (208 floats, row-major blocks in this order)::

    W   8x8  input -> hidden          [0:64]
    R   8x8  hidden -> hidden         [64:128]
    b_w 8    hidden bias              [128:136]
    Z   2x8  hidden -> (place, stop)  [136:152]
    b_z 2                             [152:154]
    Y   6x8  hidden -> gear size      [154:202]
    b_y 6                             [202:208]
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gearevo import kernels
from gearevo.geometry import Placement

N_PARAMS = 208
HIDDEN = 8

_BLOCKS = {
    "W": (0, 64, (8, 8)),
    "R": (64, 128, (8, 8)),
    "b_w": (128, 136, (8,)),
    "Z": (136, 152, (2, 8)),
    "b_z": (152, 154, (2,)),
    "Y": (154, 202, (6, 8)),
    "b_y": (202, 208, (6,)),
}


@dataclass(frozen=True, eq=False)
class RnnGenome:
    """Immutable wrapper around the 208 network parameters."""

    params: np.ndarray

    def __post_init__(self):
        p = np.array(self.params, dtype=np.float64).reshape(-1)
        if p.shape != (N_PARAMS,):
            raise ValueError(f"expected {N_PARAMS} parameters, got {p.size}")
        if not np.all(np.isfinite(p)):
            raise ValueError("genome weights must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "params", p)

    @classmethod
    def from_blocks(cls, W, R, b_w, Z, b_z, Y, b_y) -> "RnnGenome":
        parts = [W, R, b_w, Z, b_z, Y, b_y]
        return cls(np.concatenate([np.asarray(a, dtype=np.float64).ravel() for a in parts]))

    @classmethod
    def zeros(cls) -> "RnnGenome":
        return cls(np.zeros(N_PARAMS))

    def block(self, name: str) -> np.ndarray:
        lo, hi, shape = _BLOCKS[name]
        return self.params[lo:hi].reshape(shape)

    W = property(lambda self: self.block("W"))
    R = property(lambda self: self.block("R"))
    b_w = property(lambda self: self.block("b_w"))
    Z = property(lambda self: self.block("Z"))
    b_z = property(lambda self: self.block("b_z"))
    Y = property(lambda self: self.block("Y"))
    b_y = property(lambda self: self.block("b_y"))

    def flat(self) -> list:
        return self.params.tolist()

    def __eq__(self, other):
        return isinstance(other, RnnGenome) and np.array_equal(self.params, other.params)

    def __hash__(self):
        return hash(self.params.tobytes())


@dataclass(frozen=True)
class RnnState:
    h: tuple
    o: tuple

    @classmethod
    def initial(cls) -> "RnnState":
        return cls((1.0,) * HIDDEN, (1.0,) * HIDDEN)


@dataclass(frozen=True)
class TraceStep:
    input: tuple
    hidden: tuple
    output: tuple
    gear_id: int
    placement: Placement


@dataclass(frozen=True)
class ActivationTrace:
    steps: tuple

    def __len__(self):
        return len(self.steps)

    def to_record(self) -> list:
        return [
            {
                "step": t,
                "input": list(s.input),
                "hidden": list(s.hidden),
                "output": list(s.output),
                "gear_id": s.gear_id,
                "placement": s.placement.value,
            }
            for t, s in enumerate(self.steps)
        ]

    @classmethod
    def from_record(cls, rec: list) -> "ActivationTrace":
        return cls(tuple(
            TraceStep(tuple(s["input"]), tuple(s["hidden"]), tuple(s["output"]),
                      int(s["gear_id"]), Placement(s["placement"]))
            for s in rec
        ))


def rnn_step(genome: RnnGenome, state: RnnState):
    """Advance the network one step.

    The previous output is the input. Returns ``(new_state, output)`` where
    output nodes 0..5 are a softmax over gear sizes and nodes 6..7 are the
    tanh placement and stop signals.
    """
    h, o = kernels.rnn_forward(genome.params, state.h, state.o)
    return RnnState(tuple(h), tuple(o)), np.array(o)


def _flag(code: int) -> Placement:
    return Placement.COAXIAL if code == 2 else Placement.LINEAR


def decode(genome: RnnGenome):
    """Decode a genome into ``(steps, trace)``.

    Gear size is the argmax of the softmax block (lowest id on ties),
    placement is coaxial when node 7 is >= 0, and generation continues while
    node 8 is >= 0. Stop signals before the second gear are ignored and
    generation always halts after six gears.
    """
    n, ids, flags, hidden, outputs = kernels.decode_rnn(genome.params)
    steps = [(int(ids[t]), _flag(int(flags[t]))) for t in range(n)]
    trace = []
    prev = (1.0,) * HIDDEN
    for t in range(n):
        out = tuple(outputs[t].tolist())
        trace.append(TraceStep(prev, tuple(hidden[t].tolist()), out, steps[t][0], steps[t][1]))
        prev = out
    return steps, ActivationTrace(tuple(trace))


def decode_population(params: np.ndarray) -> list:
    """Decode a (N, 208) parameter matrix into N step lists without traces."""
    counts, ids, flags = kernels.decode_rnn_batch(params)
    return [
        [(int(ids[k, t]), _flag(int(flags[k, t]))) for t in range(int(counts[k]))]
        for k in range(len(counts))
    ]


def random_genome(rng: np.random.Generator) -> RnnGenome:
    return RnnGenome(rng.uniform(-1.0, 1.0, N_PARAMS))
