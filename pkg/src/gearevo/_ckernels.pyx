# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport tanh, exp, sqrt, fabs, INFINITY

cnp.import_array()

OUT_OF_BOUNDS = 0
DISC_OVERLAP = 1
AXLE_CLASH = 2

cdef enum:
    LINEAR = 1
    COAXIAL = 2
    MAX_STEPS = 6
    MIN_STEPS = 2


cdef inline void _forward(const double[::1] p, double* h, double* o,
                          double* h_new, double* out) noexcept nogil:
    cdef int i, j
    cdef double acc, top, total
    cdef double logits[6]
    for i in range(8):
        acc = p[128 + i]
        for j in range(8):
            acc += p[8 * i + j] * o[j]
        for j in range(8):
            acc += p[64 + 8 * i + j] * h[j]
        h_new[i] = tanh(acc)
    for i in range(6):
        acc = p[202 + i]
        for j in range(8):
            acc += p[154 + 8 * i + j] * h_new[j]
        logits[i] = acc
    top = logits[0]
    for i in range(1, 6):
        if logits[i] > top:
            top = logits[i]
    for i in range(6):
        out[i] = exp(logits[i] - top)
    total = 0.0
    for i in range(6):
        total += out[i]
    for i in range(6):
        out[i] = out[i] / total
    for i in range(2):
        acc = p[152 + i]
        for j in range(8):
            acc += p[136 + 8 * i + j] * h_new[j]
        out[6 + i] = tanh(acc)


def rnn_forward(params, h, o):
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    cdef double hh[8]
    cdef double oo[8]
    cdef double h_new[8]
    cdef double out[8]
    cdef int i
    for i in range(8):
        hh[i] = h[i]
        oo[i] = o[i]
    _forward(p, hh, oo, h_new, out)
    return [h_new[i] for i in range(8)], [out[i] for i in range(8)]


cdef int _decode(const double[::1] p, long long[::1] ids, long long[::1] flags,
                 double[:, ::1] hidden, double[:, ::1] outputs, bint record) noexcept nogil:
    cdef double h[8]
    cdef double o[8]
    cdef double h_new[8]
    cdef double out[8]
    cdef int t, i, best, n = 0
    for i in range(8):
        h[i] = 1.0
        o[i] = 1.0
    for t in range(MAX_STEPS):
        _forward(p, h, o, h_new, out)
        best = 0
        for i in range(1, 6):
            if out[i] > out[best]:
                best = i
        ids[t] = best + 1
        flags[t] = COAXIAL if out[6] >= 0.0 else LINEAR
        for i in range(8):
            h[i] = h_new[i]
            o[i] = out[i]
            if record:
                hidden[t, i] = h_new[i]
                outputs[t, i] = out[i]
        n = t + 1
        if out[7] < 0.0 and n >= MIN_STEPS:
            break
    return n


def decode_rnn(params):
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    ids = np.zeros(MAX_STEPS, dtype=np.int64)
    flags = np.zeros(MAX_STEPS, dtype=np.int64)
    hidden = np.zeros((MAX_STEPS, 8))
    outputs = np.zeros((MAX_STEPS, 8))
    n = _decode(p, ids, flags, hidden, outputs, True)
    return n, ids, flags, hidden, outputs


def decode_rnn_batch(population):
    cdef const double[:, ::1] pop = np.ascontiguousarray(population, dtype=np.float64)
    cdef Py_ssize_t k, count = pop.shape[0]
    counts_arr = np.zeros(count, dtype=np.int64)
    ids_arr = np.zeros((count, MAX_STEPS), dtype=np.int64)
    flags_arr = np.zeros((count, MAX_STEPS), dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef long long[:, ::1] ids = ids_arr
    cdef long long[:, ::1] flags = flags_arr
    cdef double[:, ::1] scratch = np.zeros((MAX_STEPS, 8))
    with nogil:
        for k in range(count):
            counts[k] = _decode(pop[k], ids[k], flags[k], scratch, scratch, False)
    return counts_arr, ids_arr, flags_arr


def feasibility_breaches(radius, x, plane, axle, placement, double box_length,
                         double axle_radius):
    cdef const double[::1] r = np.ascontiguousarray(radius, dtype=np.float64)
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef const long long[::1] pl = np.ascontiguousarray(plane, dtype=np.int64)
    cdef const long long[::1] ax = np.ascontiguousarray(axle, dtype=np.int64)
    cdef const long long[::1] pm = np.ascontiguousarray(placement, dtype=np.int64)
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t i, k, a
    cdef long long partner_axle
    cdef double d
    # first gear index per axle in order of appearance
    cdef long long[::1] first_of = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] axle_of = np.full(n, -1, dtype=np.int64)
    cdef Py_ssize_t n_axles = 0
    cdef bint seen
    out = []
    for k in range(n):
        if xs[k] - r[k] < 0.0:
            out.append((OUT_OF_BOUNDS, r[k] - xs[k], k, -1))
        if xs[k] + r[k] > box_length:
            out.append((OUT_OF_BOUNDS, xs[k] + r[k] - box_length, k, -1))
        for i in range(k - 1):
            if pl[i] == pl[k]:
                d = fabs(xs[i] - xs[k])
                if d < r[i] + r[k]:
                    out.append((DISC_OVERLAP, r[i] + r[k] - d, i, k))
        partner_axle = ax[k - 1] if (k > 0 and pm[k] == LINEAR) else -1
        seen = False
        for a in range(n_axles):
            if axle_of[a] == ax[k]:
                seen = True
            if axle_of[a] == ax[k] or axle_of[a] == partner_axle:
                continue
            d = fabs(xs[first_of[a]] - xs[k])
            if d < r[k] + axle_radius:
                out.append((AXLE_CLASH, r[k] + axle_radius - d, k, first_of[a]))
        if not seen:
            for i in range(k):
                if ax[i] == ax[k]:
                    continue
                if i == k - 1 and pm[k] == LINEAR:
                    continue
                d = fabs(xs[i] - xs[k])
                if d < r[i] + axle_radius:
                    out.append((AXLE_CLASH, r[i] + axle_radius - d, i, k))
            axle_of[n_axles] = ax[k]
            first_of[n_axles] = k
            n_axles += 1
    return out


def min_distances(queries, refs, bint exclude_self):
    cdef const double[:, ::1] q = np.ascontiguousarray(queries, dtype=np.float64)
    cdef const double[:, ::1] rf = np.ascontiguousarray(refs, dtype=np.float64)
    cdef Py_ssize_t i, j, c, nq = q.shape[0], nr = rf.shape[0], dim = q.shape[1]
    cdef double acc, diff, best, d
    result = np.empty(nq)
    cdef double[::1] res = result
    with nogil:
        for i in range(nq):
            best = INFINITY
            for j in range(nr):
                if exclude_self and i == j:
                    continue
                acc = 0.0
                for c in range(dim):
                    diff = q[i, c] - rf[j, c]
                    acc += diff * diff
                d = sqrt(acc)
                if d < best:
                    best = d
            res[i] = best
    return result
