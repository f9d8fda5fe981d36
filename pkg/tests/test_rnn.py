import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gearevo.geometry import Placement
from gearevo.rnn import (N_PARAMS, ActivationTrace, RnnGenome, RnnState, decode,
                         decode_population, random_genome, rnn_step)

genome_st = arrays(np.float64, N_PARAMS, elements=st.floats(-5, 5))


def test_flat_layout_round_trip():
    rng = np.random.default_rng(3)
    blocks = dict(W=rng.normal(size=(8, 8)), R=rng.normal(size=(8, 8)), b_w=rng.normal(size=8),
                  Z=rng.normal(size=(2, 8)), b_z=rng.normal(size=2), Y=rng.normal(size=(6, 8)),
                  b_y=rng.normal(size=6))
    g = RnnGenome.from_blocks(**blocks)
    assert g.params.shape == (208,)
    for name, value in blocks.items():
        np.testing.assert_array_equal(getattr(g, name), value)
    np.testing.assert_array_equal(g.params[:64], blocks["W"].ravel())
    np.testing.assert_array_equal(g.params[202:], blocks["b_y"])


@pytest.mark.parametrize("bad", [np.zeros(207), np.full(208, np.nan)])
def test_rejects_bad_params(bad):
    with pytest.raises(ValueError):
        RnnGenome(bad)


def test_genome_is_immutable():
    g = RnnGenome.zeros()
    with pytest.raises(ValueError):
        g.params[0] = 1.0


def test_zero_genome_step(backend):
    state, out = rnn_step(RnnGenome.zeros(), RnnState.initial())
    assert state.h == (0.0,) * 8
    assert list(out[:6]) == [1 / 6] * 6
    assert list(out[6:]) == [0.0, 0.0]


def test_hand_sized_step(backend):
    g = RnnGenome.from_blocks(
        W=np.zeros((8, 8)), R=np.zeros((8, 8)), b_w=np.full(8, math.atanh(0.5)),
        Z=np.zeros((2, 8)), b_z=[0.3, -0.2], Y=np.zeros((6, 8)), b_y=[1, 0, 0, 0, 0, 0])
    state, out = rnn_step(g, RnnState.initial())
    np.testing.assert_allclose(state.h, 0.5, rtol=0, atol=1e-15)
    assert out[6] == pytest.approx(0.2913126124515909, abs=1e-12)
    assert out[7] == pytest.approx(-0.197375320224904, abs=1e-12)
    assert out[0] == pytest.approx(math.e / (math.e + 5), abs=1e-12)
    assert out[1] == pytest.approx(1 / (math.e + 5), abs=1e-12)


def test_step_matches_matrix_form(backend):
    rng = np.random.default_rng(11)
    g = random_genome(rng)
    h0, o0 = rng.uniform(-1, 1, 8), rng.uniform(-1, 1, 8)
    state, out = rnn_step(g, RnnState(tuple(h0), tuple(o0)))
    h = np.tanh(g.W @ o0 + g.R @ h0 + g.b_w)
    logits = g.Y @ h + g.b_y
    soft = np.exp(logits) / np.exp(logits).sum()
    np.testing.assert_allclose(state.h, h, atol=1e-12)
    np.testing.assert_allclose(out[:6], soft, atol=1e-12)
    np.testing.assert_allclose(out[6:], np.tanh(g.Z @ h + g.b_z), atol=1e-12)


def test_zero_genome_decode(backend):
    steps, trace = decode(RnnGenome.zeros())
    assert steps == [(1, Placement.COAXIAL)] * 6
    assert len(trace) == 6


def test_forced_minimum_of_two():
    # stop node strongly negative from the first step
    p = np.zeros(208)
    p[152 + 1] = -5.0
    steps, _ = decode(RnnGenome(p))
    assert len(steps) == 2


def test_decode_follows_repeated_steps(backend):
    g = random_genome(np.random.default_rng(5))
    steps, trace = decode(g)
    state = RnnState.initial()
    for t, (gear_id, flag) in enumerate(steps):
        prev_out = state.o
        state, out = rnn_step(g, state)
        assert trace.steps[t].input == tuple(prev_out)
        assert trace.steps[t].hidden == state.h
        assert trace.steps[t].output == tuple(out)
        assert gear_id == int(np.argmax(out[:6])) + 1
        assert flag is (Placement.COAXIAL if out[6] >= 0 else Placement.LINEAR)
        if t + 1 < len(steps):
            assert t + 1 < 2 or out[7] >= 0
    assert len(steps) == 6 or out[7] < 0


def test_argmax_ties_pick_lowest_id():
    p = np.zeros(208)
    p[202 + 2] = 1.0
    p[202 + 4] = 1.0
    steps, _ = decode(RnnGenome(p))
    assert {gid for gid, _ in steps} == {3}


@settings(max_examples=300)
@given(genome_st)
def test_decode_is_total_and_bounded(params):
    g = RnnGenome(params)
    steps, trace = decode(g)
    assert 2 <= len(steps) <= 6
    assert all(1 <= gid <= 6 for gid, _ in steps)
    assert len(trace) == len(steps)
    assert decode(g) == (steps, trace)


def test_output_feeds_next_input():
    steps, trace = decode(random_genome(np.random.default_rng(8)))
    assert trace.steps[0].input == (1.0,) * 8
    for a, b in zip(trace.steps, trace.steps[1:]):
        assert b.input == a.output


def test_population_decode_matches_single(backend):
    rng = np.random.default_rng(2)
    pop = [random_genome(rng) for _ in range(200)]
    batch = decode_population(np.stack([g.params for g in pop]))
    assert batch == [decode(g)[0] for g in pop]


def test_random_genome_reproducible_and_bounded():
    a = random_genome(np.random.default_rng(42))
    b = random_genome(np.random.default_rng(42))
    assert a == b
    assert np.all(np.abs(a.params) <= 1.0)


def test_random_genome_is_centered():
    rng = np.random.default_rng(123)
    samples = np.stack([random_genome(rng).params for _ in range(10_000)])
    assert np.all(np.abs(samples.mean(axis=0)) <= 0.05)
    assert samples.min() >= -1.0 and samples.max() <= 1.0


def test_trace_record_round_trip():
    _, trace = decode(random_genome(np.random.default_rng(1)))
    assert ActivationTrace.from_record(trace.to_record()) == trace
