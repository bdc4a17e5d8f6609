# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: mechanism evaluation and misreport scans in C.

Semantics are kept in lockstep with mechlab._kernels._py; the parity
test suite pins the two together.
"""

from libc.math cimport HUGE_VAL, fabs, pow
from libc.stdlib cimport free, malloc

import numpy as np

BACKEND_NAME = "compiled"

cdef int MOVE_CAP_PER_LEVEL = 100
cdef double MIN_STEP = 1e-12


cdef inline const double* _row(const double* pts, Py_ssize_t m, Py_ssize_t i,
                               Py_ssize_t agent, const double* cand) noexcept nogil:
    if i == agent:
        return cand
    return pts + i * m


cdef void _eval_sub(int code, double p1, double p2, const double* pts,
                    Py_ssize_t n, Py_ssize_t m, Py_ssize_t agent,
                    const double* cand, double* out, double* scratch) noexcept nogil:
    """Facility for the profile with row ``agent`` replaced by ``cand`` (agent=-1: none)."""
    cdef const double* a
    cdef const double* b
    cdef Py_ssize_t i, d, j
    cdef double ax, ay, bx, by, r, s, xw, yw, u, v, key, tmp

    if code == 0:  # dictator
        a = _row(pts, m, <Py_ssize_t>p1, agent, cand)
        for i in range(m):
            out[i] = a[i]
        return
    if code == 4:  # general median: per-dim sort, take the larger middle value
        for d in range(m):
            for i in range(n):
                scratch[i] = _row(pts, m, i, agent, cand)[d]
            for i in range(1, n):
                key = scratch[i]
                j = i - 1
                while j >= 0 and scratch[j] > key:
                    scratch[j + 1] = scratch[j]
                    j -= 1
                scratch[j + 1] = key
            out[d] = scratch[n // 2]
        return

    a = _row(pts, m, 0, agent, cand)
    b = _row(pts, m, 1, agent, cand)
    if code == 5:  # midpoint
        for i in range(m):
            out[i] = (a[i] + b[i]) * 0.5
        return

    ax = a[0]; ay = a[1]; bx = b[0]; by = b[1]
    if code == 1:  # c1: coordinatewise extremum
        if p1 != 0.0:
            out[0] = ax if ax > bx else bx
        else:
            out[0] = ax if ax < bx else bx
        if p2 != 0.0:
            out[1] = ay if ay > by else by
        else:
            out[1] = ay if ay < by else by
        return

    if code == 2:  # c2, keyed on x-ordering
        u = p1
        if ax > bx or (ax == bx and ay > by):
            tmp = ax; ax = bx; bx = tmp
            tmp = ay; ay = by; by = tmp
        if ax == bx:
            out[0] = ax
            if u > 0:
                out[1] = ay if ay > by else by
            else:
                out[1] = ay if ay < by else by
            return
        r = (by - ay) / (bx - ax)
        if u > 0:
            if r > u:
                out[0] = bx; out[1] = by
                return
            if r < -1.0 / u:
                out[0] = ax; out[1] = ay
                return
        else:
            if r > -1.0 / u:
                out[0] = ax; out[1] = ay
                return
            if r < u:
                out[0] = bx; out[1] = by
                return
        xw = (u * (by - ay) + u * u * ax + bx) / (u * u + 1.0)
        yw = u * (xw - ax) + ay
        out[0] = xw; out[1] = yw
        return

    # code == 3: c3, keyed on y-ordering
    v = p1
    if ay > by or (ay == by and ax > bx):
        tmp = ax; ax = bx; bx = tmp
        tmp = ay; ay = by; by = tmp
    if ay == by:
        out[1] = ay
        if v > 0:
            out[0] = ax if ax > bx else bx
        else:
            out[0] = ax if ax < bx else bx
        return
    s = (bx - ax) / (by - ay)
    if v > 0:
        if s > v:
            out[0] = bx; out[1] = by
            return
        if s < -1.0 / v:
            out[0] = ax; out[1] = ay
            return
    else:
        if s > -1.0 / v:
            out[0] = ax; out[1] = ay
            return
        if s < v:
            out[0] = bx; out[1] = by
            return
    yw = (v * (bx - ax) + v * v * ay + by) / (v * v + 1.0)
    xw = v * (yw - ay) + ax
    out[0] = xw; out[1] = yw


cdef inline double _lp_cost(const double* w, const double* t, Py_ssize_t m,
                            double p) noexcept nogil:
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(m):
        total += pow(fabs(w[i] - t[i]), p)
    return pow(total, 1.0 / p)


def eval_mechanism(int code, double p1, double p2, pts_in):
    """Facility for the profile as reported (no substitution)."""
    pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef double[:, ::1] mv = pts
    cdef Py_ssize_t n = mv.shape[0], m = mv.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] out_mv = out
    cdef double* scratch = <double*>malloc(n * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    try:
        _eval_sub(code, p1, p2, &mv[0, 0], n, m, -1, NULL, &out_mv[0], scratch)
    finally:
        free(scratch)
    return out


def misreport_scan(int code, double p1, double p2, pts_in, Py_ssize_t agent,
                   double p, double lo, double hi, Py_ssize_t grid,
                   int refine_iters):
    """Best misreport for one agent: full grid scan then compass refinement.

    Returns (true_cost, best_cost, best_misreport); costs are distances
    from the agent's true location to the facility.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef double[:, ::1] mv = pts
    cdef Py_ssize_t n = mv.shape[0], m = mv.shape[1]
    cdef const double* P = &mv[0, 0]
    cdef const double* true_pt = P + agent * m

    best_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] best_mv = best_arr

    cdef double* buf = <double*>malloc((4 * m + n) * sizeof(double))
    cdef Py_ssize_t* digits = <Py_ssize_t*>malloc(m * sizeof(Py_ssize_t))
    if buf == NULL or digits == NULL:
        free(buf); free(digits)
        raise MemoryError()
    cdef double* cand = buf
    cdef double* out = buf + m
    cdef double* cur = buf + 2 * m
    cdef double* w0 = buf + 3 * m
    cdef double* scratch = buf + 4 * m

    cdef double true_cost, best_cost, cur_cost, step, s, cost, val
    cdef double poll_cost, best_poll_cost, best_poll_val, saved
    cdef Py_ssize_t i, d, sign_idx, best_poll_axis
    cdef long long K, kk
    cdef int halvings, moves, improved

    try:
        with nogil:
            _eval_sub(code, p1, p2, P, n, m, -1, NULL, w0, scratch)
            true_cost = _lp_cost(w0, true_pt, m, p)

            step = (hi - lo) / (grid - 1)
            K = 1
            for i in range(m):
                K *= grid
                digits[i] = 0
            best_cost = HUGE_VAL
            for i in range(m):
                cand[i] = lo
            kk = 0
            while kk < K:
                _eval_sub(code, p1, p2, P, n, m, agent, cand, out, scratch)
                cost = _lp_cost(out, true_pt, m, p)
                if cost < best_cost:
                    best_cost = cost
                    for i in range(m):
                        cur[i] = cand[i]
                # odometer: last axis varies fastest (C order)
                d = m - 1
                while d >= 0:
                    digits[d] += 1
                    if digits[d] == grid:
                        digits[d] = 0
                        cand[d] = lo
                        d -= 1
                    else:
                        cand[d] = lo + digits[d] * step
                        break
                kk += 1

            cur_cost = best_cost
            s = step
            halvings = 0
            moves = 0
            for i in range(m):
                cand[i] = cur[i]
            while halvings < refine_iters and s >= MIN_STEP:
                best_poll_cost = cur_cost
                best_poll_axis = -1
                best_poll_val = 0.0
                for i in range(m):
                    saved = cand[i]
                    for sign_idx in range(2):
                        val = saved + s if sign_idx == 0 else saved - s
                        if val > hi:
                            val = hi
                        elif val < lo:
                            val = lo
                        cand[i] = val
                        _eval_sub(code, p1, p2, P, n, m, agent, cand, out, scratch)
                        poll_cost = _lp_cost(out, true_pt, m, p)
                        if poll_cost < best_poll_cost:
                            best_poll_cost = poll_cost
                            best_poll_axis = i
                            best_poll_val = val
                    cand[i] = saved
                if best_poll_axis >= 0 and moves < MOVE_CAP_PER_LEVEL:
                    cur[best_poll_axis] = best_poll_val
                    cand[best_poll_axis] = best_poll_val
                    cur_cost = best_poll_cost
                    moves += 1
                else:
                    s *= 0.5
                    halvings += 1
                    moves = 0
        for i in range(m):
            best_mv[i] = cur[i]
    finally:
        free(buf)
        free(digits)
    return true_cost, cur_cost, best_arr
