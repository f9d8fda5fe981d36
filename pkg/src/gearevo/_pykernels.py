"""Pure Python / numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` signature for signature and are used when the
compiled extension is unavailable or ``GEAREVO_PURE_PYTHON`` is set.
"""
import math

import numpy as np

OUT_OF_BOUNDS = 0
DISC_OVERLAP = 1
AXLE_CLASH = 2

_LINEAR = 1
_COAXIAL = 2

N_PARAMS = 208
MAX_STEPS = 6
MIN_STEPS = 2


def rnn_forward(params, h, o):
    """One recurrent step; returns (new_hidden, output) as lists of floats.

    Sums run left to right in scalar arithmetic so results match the
    compiled kernel bit for bit.
    """
    return _forward([float(v) for v in params], [float(v) for v in h], [float(v) for v in o])


def _forward(p, h, o):
    h_new = []
    for i in range(8):
        acc = p[128 + i]
        for j in range(8):
            acc += p[8 * i + j] * o[j]
        for j in range(8):
            acc += p[64 + 8 * i + j] * h[j]
        h_new.append(math.tanh(acc))
    logits = []
    for i in range(6):
        acc = p[202 + i]
        for j in range(8):
            acc += p[154 + 8 * i + j] * h_new[j]
        logits.append(acc)
    top = max(logits)
    e = [math.exp(v - top) for v in logits]
    total = 0.0
    for v in e:
        total += v
    out = [v / total for v in e]
    for i in range(2):
        acc = p[152 + i]
        for j in range(8):
            acc += p[136 + 8 * i + j] * h_new[j]
        out.append(math.tanh(acc))
    return h_new, out


def decode_rnn(params):
    """Run the generative network until it stops.

    Returns (n, gear_ids[6], flags[6], hidden[6, 8], outputs[6, 8]); only the
    first ``n`` rows are meaningful. Flags use 2 for coaxial, 1 for linear.
    """
    params = np.ascontiguousarray(params, dtype=np.float64)
    ids = np.zeros(MAX_STEPS, dtype=np.int64)
    flags = np.zeros(MAX_STEPS, dtype=np.int64)
    hidden = np.zeros((MAX_STEPS, 8))
    outputs = np.zeros((MAX_STEPS, 8))
    params = params.tolist()
    h = [1.0] * 8
    o = [1.0] * 8
    n = 0
    for t in range(MAX_STEPS):
        h, o = _forward(params, h, o)
        best = 0
        for i in range(1, 6):
            if o[i] > o[best]:
                best = i
        ids[t] = best + 1
        flags[t] = _COAXIAL if o[6] >= 0.0 else _LINEAR
        hidden[t] = h
        outputs[t] = o
        n = t + 1
        if o[7] < 0.0 and n >= MIN_STEPS:
            break
    return n, ids, flags, hidden, outputs


def decode_rnn_batch(population):
    population = np.ascontiguousarray(population, dtype=np.float64)
    count = population.shape[0]
    counts = np.zeros(count, dtype=np.int64)
    ids = np.zeros((count, MAX_STEPS), dtype=np.int64)
    flags = np.zeros((count, MAX_STEPS), dtype=np.int64)
    for k in range(count):
        n, gid, fl, _, _ = decode_rnn(population[k])
        counts[k] = n
        ids[k] = gid
        flags[k] = fl
    return counts, ids, flags


def feasibility_breaches(radius, x, plane, axle, placement, box_length, axle_radius):
    """Incremental breach scan: each gear is checked as it joins the chain.

    Returns a list of (kind, depth, i, j) with j = -1 for single-gear breaches.
    """
    n = len(radius)
    radius = [float(v) for v in radius]
    x = [float(v) for v in x]
    plane = [int(v) for v in plane]
    axle = [int(v) for v in axle]
    placement = [int(v) for v in placement]
    out = []
    axle_first = {}
    for k in range(n):
        r, xk = radius[k], x[k]
        if xk - r < 0.0:
            out.append((OUT_OF_BOUNDS, r - xk, k, -1))
        if xk + r > box_length:
            out.append((OUT_OF_BOUNDS, xk + r - box_length, k, -1))
        for i in range(k - 1):
            if plane[i] == plane[k]:
                d = abs(x[i] - xk)
                if d < radius[i] + r:
                    out.append((DISC_OVERLAP, radius[i] + r - d, i, k))
        partner_axle = axle[k - 1] if k > 0 and placement[k] == _LINEAR else -1
        for a, first in sorted(axle_first.items(), key=lambda kv: kv[1]):
            if a == axle[k] or a == partner_axle:
                continue
            d = abs(x[first] - xk)
            if d < r + axle_radius:
                out.append((AXLE_CLASH, r + axle_radius - d, k, first))
        if axle[k] not in axle_first:
            for i in range(k):
                if axle[i] == axle[k]:
                    continue
                if i == k - 1 and placement[k] == _LINEAR:
                    continue
                d = abs(x[i] - xk)
                if d < radius[i] + axle_radius:
                    out.append((AXLE_CLASH, radius[i] + axle_radius - d, i, k))
            axle_first[axle[k]] = k
    return out


def min_distances(queries, refs, exclude_self):
    """Nearest Euclidean distance from each query row to any reference row.

    With ``exclude_self`` the reference set is the query set and row i is not
    compared against itself. Rows with no candidates get ``inf``.
    """
    q = np.ascontiguousarray(queries, dtype=np.float64).tolist()
    r = np.ascontiguousarray(refs, dtype=np.float64).tolist()
    out = np.full(len(q), np.inf)
    for i, a in enumerate(q):
        best = math.inf
        for j, b in enumerate(r):
            if exclude_self and i == j:
                continue
            acc = 0.0
            for u, v in zip(a, b):
                acc += (u - v) * (u - v)
            d = math.sqrt(acc)
            if d < best:
                best = d
        out[i] = best
    return out
