"""numba-jitted search engine: same algorithm as _engine_py, manual binary heap.

The heap orders entries by (f, h, insertion tick) so pop order, and therefore
every result array, is bit-identical to the heapq-based fallback.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._common import SQRT2

_DROW = np.array([1, 1, 0, -1, -1, -1, 0, 1], dtype=np.int64)
_DCOL = np.array([0, 1, 1, 1, 0, -1, -1, -1], dtype=np.int64)


@njit(cache=True, inline="always")
def _heur(hid, r, c, gr, gc):
    dx = float(abs(c - gc))
    dy = float(abs(r - gr))
    if hid == 0:
        return 0.0
    if hid == 1:
        return dx + dy
    if hid == 2:
        return (dx + dy) + (SQRT2 - 2.0) * min(dx, dy)
    return np.sqrt(dx * dx + dy * dy)


@njit(cache=True, inline="always")
def _less(hf, hh, ht, i, j):
    if hf[i] != hf[j]:
        return hf[i] < hf[j]
    if hh[i] != hh[j]:
        return hh[i] < hh[j]
    return ht[i] < ht[j]


@njit(cache=True)
def _heap_push(hf, hh, ht, hn, size, f, h, t, node):
    i = size
    hf[i] = f
    hh[i] = h
    ht[i] = t
    hn[i] = node
    while i > 0:
        p = (i - 1) // 2
        if _less(hf, hh, ht, i, p):
            hf[i], hf[p] = hf[p], hf[i]
            hh[i], hh[p] = hh[p], hh[i]
            ht[i], ht[p] = ht[p], ht[i]
            hn[i], hn[p] = hn[p], hn[i]
            i = p
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(hf, hh, ht, hn, size):
    top = hn[0]
    size -= 1
    if size > 0:
        hf[0] = hf[size]
        hh[0] = hh[size]
        ht[0] = ht[size]
        hn[0] = hn[size]
        i = 0
        while True:
            l = 2 * i + 1
            r = 2 * i + 2
            smallest = i
            if l < size and _less(hf, hh, ht, l, smallest):
                smallest = l
            if r < size and _less(hf, hh, ht, r, smallest):
                smallest = r
            if smallest == i:
                break
            hf[i], hf[smallest] = hf[smallest], hf[i]
            hh[i], hh[smallest] = hh[smallest], hh[i]
            ht[i], ht[smallest] = ht[smallest], ht[i]
            hn[i], hn[smallest] = hn[smallest], hn[i]
            i = smallest
    return top, size


@njit(cache=True)
def _search_kernel(free, sr, sc, gr, gc, hid, card_cost, diag_cost):
    height, width = free.shape
    n = height * width
    g = np.full(n, np.inf)
    open_f = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    closed = np.zeros(n, dtype=np.uint8)
    order = np.empty(n, dtype=np.int64)
    count = 0

    cap = 8 * n + 8  # each node is pushed at most once per distinct predecessor
    hf = np.empty(cap)
    hh = np.empty(cap)
    ht = np.empty(cap, dtype=np.int64)
    hn = np.empty(cap, dtype=np.int64)
    size = 0

    start = sr * width + sc
    goal = gr * width + gc
    g[start] = 0.0
    h0 = _heur(hid, sr, sc, gr, gc)
    open_f[start] = h0
    size = _heap_push(hf, hh, ht, hn, size, h0, h0, 0, start)
    tie = 1
    found = False

    while size > 0:
        node, size = _heap_pop(hf, hh, ht, hn, size)
        if closed[node]:
            continue
        closed[node] = 1
        order[count] = node
        count += 1
        if node == goal:
            found = True
            break
        r = node // width
        c = node % width
        for k in range(8):
            nr = r + _DROW[k]
            nc = c + _DCOL[k]
            if nr < 0 or nr >= height or nc < 0 or nc >= width:
                continue
            if free[nr, nc] == 0:
                continue
            if _DROW[k] != 0 and _DCOL[k] != 0:
                if free[r + _DROW[k], c] == 0 or free[r, c + _DCOL[k]] == 0:
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
            size = _heap_push(hf, hh, ht, hn, size, f2, h2, tie, m)
            tie += 1

    return found, parent, g, order[:count].copy(), count


def search(free, sr, sc, gr, gc, hid, card_cost, diag_cost):
    return _search_kernel(free, sr, sc, gr, gc, hid, card_cost, diag_cost)
