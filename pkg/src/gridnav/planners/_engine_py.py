"""Pure numpy/heapq search engine; the fallback when numba is disabled."""

from __future__ import annotations

import heapq
import math

import numpy as np

from ._common import DCOL, DROW, H_DIAGONAL, H_EUCLIDEAN, H_MANHATTAN, H_ZERO, SQRT2


def _heur(hid: int, r: int, c: int, gr: int, gc: int) -> float:
    dx = float(abs(c - gc))
    dy = float(abs(r - gr))
    if hid == H_ZERO:
        return 0.0
    if hid == H_MANHATTAN:
        return dx + dy
    if hid == H_DIAGONAL:
        return (dx + dy) + (SQRT2 - 2.0) * min(dx, dy)
    return math.sqrt(dx * dx + dy * dy)


def search(free, sr, sc, gr, gc, hid, card_cost, diag_cost):
    """Best-first search on the 8-connected grid.

    Open list keyed on f=g+h, ties broken by smaller h then FIFO; closed nodes
    are never reopened; rediscovery with lower-or-equal open f is skipped.
    Returns (found, parent, g, expansion_order, n_expanded).
    """
    height, width = free.shape
    n = height * width
    g = np.full(n, np.inf)
    open_f = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    closed = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)
    count = 0

    start = sr * width + sc
    goal = gr * width + gc
    g[start] = 0.0
    h0 = _heur(hid, sr, sc, gr, gc)
    open_f[start] = h0
    heap = [(h0, h0, 0, start)]
    tie = 1
    found = False

    while heap:
        _, _, _, node = heapq.heappop(heap)
        if closed[node]:
            continue  # stale lazy-reinsertion entry
        closed[node] = True
        order[count] = node
        count += 1
        if node == goal:
            found = True
            break
        r, c = node // width, node % width
        for k in range(8):
            nr = r + DROW[k]
            nc = c + DCOL[k]
            if not (0 <= nr < height and 0 <= nc < width):
                continue
            if free[nr, nc] == 0:
                continue
            if DROW[k] != 0 and DCOL[k] != 0:
                if free[r + DROW[k], c] == 0 or free[r, c + DCOL[k]] == 0:
                    continue
                step = diag_cost
            else:
                step = card_cost
            m = nr * width + nc
            if closed[m]:
                continue
            g2 = g[node] + step
            h2 = _heur(hid, nr, nc, gr, gc)
            f2 = g2 + h2
            if open_f[m] <= f2:
                continue
            g[m] = g2
            parent[m] = node
            open_f[m] = f2
            heapq.heappush(heap, (f2, h2, tie, m))
            tie += 1

    return found, parent, g, order[:count].copy(), count
