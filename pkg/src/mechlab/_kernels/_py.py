"""Pure-Python (NumPy) kernel backend.

Mirrors the compiled core operation for operation: the grid stage is
vectorized over all candidate misreports, the compass refinement runs
the same poll order, move rule and step schedule as the C loop, so both
backends return the same results up to floating-point rounding.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "fallback"

# family codes (kept in sync with mechanisms.FAMILY_CODES and the .pyx core)
_DICTATOR, _C1, _C2, _C3, _MEDIAN, _MIDPOINT = range(6)

_MOVE_CAP_PER_LEVEL = 100
_MIN_STEP = 1e-12


def _facilities(code: int, p1: float, p2: float, pts: np.ndarray, agent: int,
                cands: np.ndarray) -> np.ndarray:
    """Facility for every candidate report of ``agent``; cands has shape (K, m)."""
    n, m = pts.shape
    k = cands.shape[0]
    if code == _DICTATOR:
        d = int(p1)
        if d == agent:
            return cands
        return np.broadcast_to(pts[d], (k, m))
    if code == _MEDIAN:
        stacked = np.broadcast_to(pts, (k, n, m)).copy()
        stacked[:, agent, :] = cands
        stacked.sort(axis=1)
        return stacked[:, n // 2, :]
    # two-agent families
    other = pts[1 - agent]
    first = cands if agent == 0 else np.broadcast_to(other, (k, m))
    second = np.broadcast_to(other, (k, m)) if agent == 0 else cands
    if code == _MIDPOINT:
        return (first + second) * 0.5
    if code == _C1:
        out = np.empty((k, 2))
        out[:, 0] = np.maximum(first[:, 0], second[:, 0]) if p1 else np.minimum(first[:, 0], second[:, 0])
        out[:, 1] = np.maximum(first[:, 1], second[:, 1]) if p2 else np.minimum(first[:, 1], second[:, 1])
        return out
    if code == _C2:
        return _c2_batch(p1, first, second)
    if code == _C3:
        return _c3_batch(p1, first, second)
    raise ValueError(f"unknown family code {code}")


def _c2_batch(u: float, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    swap = (p[:, 0] > q[:, 0]) | ((p[:, 0] == q[:, 0]) & (p[:, 1] > q[:, 1]))
    a = np.where(swap[:, None], q, p)
    b = np.where(swap[:, None], p, q)
    xa, ya = a[:, 0], a[:, 1]
    xb, yb = b[:, 0], b[:, 1]
    tie = xa == xb
    y_tie = np.maximum(ya, yb) if u > 0 else np.minimum(ya, yb)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (yb - ya) / (xb - xa)
    if u > 0:
        take_b = r > u
        take_a = r < -1.0 / u
    else:
        take_a = r > -1.0 / u
        take_b = r < u
    xw = (u * (yb - ya) + u * u * xa + xb) / (u * u + 1.0)
    yw = u * (xw - xa) + ya
    out = np.empty_like(a)
    out[:, 0] = np.where(tie, xa, np.where(take_b, xb, np.where(take_a, xa, xw)))
    out[:, 1] = np.where(tie, y_tie, np.where(take_b, yb, np.where(take_a, ya, yw)))
    return out


def _c3_batch(v: float, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    swap = (p[:, 1] > q[:, 1]) | ((p[:, 1] == q[:, 1]) & (p[:, 0] > q[:, 0]))
    a = np.where(swap[:, None], q, p)
    b = np.where(swap[:, None], p, q)
    xa, ya = a[:, 0], a[:, 1]
    xb, yb = b[:, 0], b[:, 1]
    tie = ya == yb
    x_tie = np.maximum(xa, xb) if v > 0 else np.minimum(xa, xb)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (xb - xa) / (yb - ya)
    if v > 0:
        take_b = s > v
        take_a = s < -1.0 / v
    else:
        take_a = s > -1.0 / v
        take_b = s < v
    yw = (v * (xb - xa) + v * v * ya + yb) / (v * v + 1.0)
    xw = v * (yw - ya) + xa
    out = np.empty_like(a)
    out[:, 0] = np.where(tie, x_tie, np.where(take_b, xb, np.where(take_a, xa, xw)))
    out[:, 1] = np.where(tie, ya, np.where(take_b, yb, np.where(take_a, ya, yw)))
    return out


def eval_mechanism(code: int, p1: float, p2: float, pts: np.ndarray) -> np.ndarray:
    """Facility for the profile as reported (no substitution)."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    return _facilities(code, p1, p2, pts, 0, pts[0:1].copy())[0]


def _costs(w: np.ndarray, true_pt: np.ndarray, p: float) -> np.ndarray:
    return np.sum(np.abs(w - true_pt) ** p, axis=1) ** (1.0 / p)


def misreport_scan(code: int, p1: float, p2: float, pts: np.ndarray, agent: int,
                   p: float, lo: float, hi: float, grid: int,
                   refine_iters: int) -> tuple[float, float, np.ndarray]:
    """Best misreport for one agent: full grid scan then compass refinement.

    Returns (true_cost, best_cost, best_misreport); costs are distances
    from the agent's true location to the facility.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    n, m = pts.shape
    true_pt = pts[agent].copy()

    w0 = eval_mechanism(code, p1, p2, pts)
    true_cost = float(np.sum(np.abs(w0 - true_pt) ** p) ** (1.0 / p))

    step = (hi - lo) / (grid - 1)
    axis = lo + np.arange(grid) * step
    mesh = np.meshgrid(*([axis] * m), indexing="ij")
    cands = np.stack(mesh, axis=-1).reshape(-1, m)
    costs = _costs(_facilities(code, p1, p2, pts, agent, cands), true_pt, p)
    k = int(np.argmin(costs))
    best = cands[k].copy()
    best_cost = float(costs[k])

    # compass refinement: poll +/- step on each axis, move to the best
    # strictly-improving poll, halve the step when no poll improves
    cur = best
    cur_cost = best_cost
    s = step
    halvings = 0
    moves = 0
    polls = np.empty((2 * m, m))
    while halvings < refine_iters and s >= _MIN_STEP:
        polls[:] = cur
        for i in range(m):
            polls[2 * i, i] = min(hi, max(lo, cur[i] + s))
            polls[2 * i + 1, i] = min(hi, max(lo, cur[i] - s))
        pcosts = _costs(_facilities(code, p1, p2, pts, agent, polls), true_pt, p)
        j = int(np.argmin(pcosts))
        if pcosts[j] < cur_cost and moves < _MOVE_CAP_PER_LEVEL:
            cur = polls[j].copy()
            cur_cost = float(pcosts[j])
            moves += 1
        else:
            s *= 0.5
            halvings += 1
            moves = 0
    return true_cost, cur_cost, cur
