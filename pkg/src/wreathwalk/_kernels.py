"""Compiled inner loops: lattice paths, visit counts, greedy tours."""

from __future__ import annotations

import numpy as np
from numba import njit

# Above this many cells the bounding-box grid is skipped for a sort.
MAX_GRID_CELLS = 1 << 26

STEP_X = np.array([1, -1, 0, 0], dtype=np.int64)
STEP_Y = np.array([0, 0, 1, -1], dtype=np.int64)


@njit(cache=True)
def walk_positions(dirs):
    n = dirs.shape[0]
    xs = np.zeros(n + 1, dtype=np.int64)
    ys = np.zeros(n + 1, dtype=np.int64)
    x = 0
    y = 0
    for t in range(n):
        d = dirs[t]
        if d == 0:
            x += 1
        elif d == 1:
            x -= 1
        elif d == 2:
            y += 1
        else:
            y -= 1
        xs[t + 1] = x
        ys[t + 1] = y
    return xs, ys


@njit(cache=True)
def _bounds(xs, ys):
    x0 = xs.min()
    x1 = xs.max()
    y0 = ys.min()
    y1 = ys.max()
    return x0, x1, y0, y1


@njit(cache=True)
def grid_local_times(xs, ys, x0, y0, width, height):
    """Visit counts per distinct site, in order of first visit."""
    grid = np.zeros(width * height, dtype=np.int64)
    n1 = xs.shape[0]
    for t in range(n1):
        grid[(xs[t] - x0) * height + (ys[t] - y0)] += 1
    out = np.empty(n1, dtype=np.int64)
    r = 0
    for t in range(n1):
        idx = (xs[t] - x0) * height + (ys[t] - y0)
        c = grid[idx]
        if c > 0:
            out[r] = c
            r += 1
            grid[idx] = 0
    return out[:r]


def local_time_counts(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Visit counts of each distinct site of a path, first site first."""
    x0, x1, y0, y1 = _bounds(xs, ys)
    width, height = int(x1 - x0 + 1), int(y1 - y0 + 1)
    if width * height <= MAX_GRID_CELLS:
        return grid_local_times(xs, ys, x0, y0, width, height)
    keys = (xs - x0) * height + (ys - y0)
    _, first, counts = np.unique(keys, return_index=True, return_counts=True)
    return counts[np.argsort(first, kind="stable")]


@njit(cache=True)
def lamplighter_endpoint(dirs, before, after, modulus):
    """Endpoint of a depth-one lamplighter walk.

    Step ``t`` adds ``before[t]`` to the lamp at the current site, moves in
    direction ``dirs[t]``, then adds ``after[t]`` at the new site.  Returns
    the base point and the nonzero lamps in order of first visit.
    """
    xs, ys = walk_positions(dirs)
    x0, x1, y0, y1 = _bounds(xs, ys)
    height = y1 - y0 + 1
    grid = np.zeros((x1 - x0 + 1) * height, dtype=np.int64)
    n = dirs.shape[0]
    for t in range(n):
        i = (xs[t] - x0) * height + (ys[t] - y0)
        j = (xs[t + 1] - x0) * height + (ys[t + 1] - y0)
        grid[i] += before[t]
        grid[j] += after[t]
    out_x = np.empty(n + 1, dtype=np.int64)
    out_y = np.empty(n + 1, dtype=np.int64)
    out_v = np.empty(n + 1, dtype=np.int64)
    r = 0
    for t in range(n + 1):
        i = (xs[t] - x0) * height + (ys[t] - y0)
        v = grid[i]
        if modulus > 0:
            v = v % modulus
        if v != 0:
            out_x[r] = xs[t]
            out_y[r] = ys[t]
            out_v[r] = v
            r += 1
        grid[i] = 0
    return xs[n], ys[n], out_x[:r], out_y[:r], out_v[:r]


@njit(cache=True)
def nn_tour_length(px, py, end_x, end_y):
    """Greedy L1 tour from the origin through all points, then to the end.

    The nearest remaining point is taken each time; ties go to the
    lexicographically smallest ``(x, y)``.
    """
    m = px.shape[0]
    if m == 0:
        return abs(end_x) + abs(end_y)
    x0 = min(px.min(), 0)
    x1 = max(px.max(), 0)
    y0 = min(py.min(), 0)
    y1 = max(py.max(), 0)
    height = y1 - y0 + 1
    flags = np.zeros((x1 - x0 + 1) * height, dtype=np.uint8)
    for i in range(m):
        flags[(px[i] - x0) * height + (py[i] - y0)] = 1
    max_d = (x1 - x0) + (y1 - y0)
    cx = 0
    cy = 0
    total = 0
    remaining = m
    while remaining > 0:
        found = False
        bx = 0
        by = 0
        d = 0
        while not found and d <= max_d:
            lo_i = max(-d, x0 - cx)
            hi_i = min(d, x1 - cx)
            for i in range(lo_i, hi_i + 1):
                x = cx + i
                r = d - abs(i)
                y = cy - r
                if y >= y0 and y <= y1 and flags[(x - x0) * height + (y - y0)]:
                    bx = x
                    by = y
                    found = True
                    break
                if r > 0:
                    y = cy + r
                    if y >= y0 and y <= y1 and flags[(x - x0) * height + (y - y0)]:
                        bx = x
                        by = y
                        found = True
                        break
            if not found:
                d += 1
        flags[(bx - x0) * height + (by - y0)] = 0
        total += d
        cx = bx
        cy = by
        remaining -= 1
    return total + abs(end_x - cx) + abs(end_y - cy)
