"""Compiled twin of the reference subproblem search.

Same branching order, bounds, prunes, and leaf evaluation as
``bnb._search_py`` - results and node counts are identical, just faster.
The repair step for uncovered cells is the same shortest-augmenting-path
assignment. Everything stays int64. When numba is missing, available()
returns False and callers use the Python engine.
"""

from __future__ import annotations

import time

import numpy as np

try:
    from numba import njit, objmode

    _NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _NUMBA = False


def available() -> bool:
    return _NUMBA


def run(a, w, order, c_max, no_res, const, void_cap, best_F0, node_limit,
        deadline, prune):
    order_arr = np.asarray(order, dtype=np.int64)
    wo = np.ascontiguousarray(w[order_arr])
    zo = np.ascontiguousarray((1 - a[order_arr]).astype(np.int64))
    m, p = wo.shape
    pos_row = np.maximum(wo, 0).sum(axis=1)
    suffix = np.zeros(m + 1, dtype=np.int64)
    for d in range(m - 1, -1, -1):
        suffix[d] = suffix[d + 1] + pos_row[d]

    (best_F, found, best_trying, best_parts, nodes, leaves, pruned_b,
     pruned_v, max_depth, max_cells, truncated) = _kernel(
        wo, zo, suffix, c_max, 1 if no_res else 0, const, void_cap,
        best_F0, node_limit, deadline, 1 if prune else 0,
    )

    best_m = best_p = None
    if found:
        best_m = np.empty(m, dtype=np.int64)
        best_m[order_arr] = best_trying + 1
        best_p = best_parts
    raw = (nodes, leaves, pruned_b, pruned_v, max_depth, max_cells, 0)
    return int(best_F), best_m, best_p, raw, bool(truncated)


if _NUMBA:

    @njit(cache=True)
    def _cover_loss(cell_sums, bestcol, labels, k, p, u, v, cell_at, way,
                    minv, used):
        """Repair uncovered cells: min-total-loss distinct representatives.

        loss[c][j] = bestcol[j] - cell_sums[c][j]. Overwrites labels for the
        matched parts and returns the total loss.
        """
        INF = np.int64(1) << 60
        for c in range(k + 1):
            u[c] = 0
        for j in range(p + 1):
            v[j] = 0
            cell_at[j] = 0
        for c in range(1, k + 1):
            cell_at[0] = c
            j0 = 0
            for j in range(p + 1):
                minv[j] = INF
                used[j] = False
            while True:
                used[j0] = True
                c0 = cell_at[j0]
                delta = INF
                j_next = 0
                for j in range(1, p + 1):
                    if used[j]:
                        continue
                    cur = bestcol[j - 1] - cell_sums[c0 - 1, j - 1] - u[c0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j_next = j
                for j in range(p + 1):
                    if used[j]:
                        u[cell_at[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
                j0 = j_next
                if cell_at[j0] == 0:
                    break
            while j0 != 0:
                j_prev = way[j0]
                cell_at[j0] = cell_at[j_prev]
                j0 = j_prev
        total = np.int64(0)
        for j in range(1, p + 1):
            c = cell_at[j]
            if c != 0:
                labels[j - 1] = c
                total += bestcol[j - 1] - cell_sums[c - 1, j - 1]
        return total

    @njit(cache=True)
    def _kernel(wo, zo, suffix, c_max, no_res, const, void_cap, best_F0,
                node_limit, deadline, prune):
        m, p = wo.shape
        cell_sums = np.zeros((c_max, p), dtype=np.int64)
        cell_zero = np.zeros((c_max, p), dtype=np.int64)
        cell_count = np.zeros(c_max, dtype=np.int64)
        trying = np.full(m, -1, dtype=np.int64)

        best_F = best_F0
        found = False
        best_trying = np.full(m, -1, dtype=np.int64)
        best_parts = np.zeros(p, dtype=np.int64)

        labels = np.zeros(p, dtype=np.int64)
        bestcol = np.zeros(p, dtype=np.int64)
        covered = np.zeros(c_max + 1, dtype=np.bool_)
        u = np.zeros(c_max + 1, dtype=np.int64)
        v = np.zeros(p + 1, dtype=np.int64)
        cell_at = np.zeros(p + 1, dtype=np.int64)
        way = np.zeros(p + 1, dtype=np.int64)
        minv = np.zeros(p + 1, dtype=np.int64)
        used = np.zeros(p + 1, dtype=np.bool_)

        nodes = 0
        leaves = 0
        pruned_b = 0
        pruned_v = 0
        max_depth = 0
        max_cells = 0
        truncated = False
        k = 0
        d = 0
        tick = 0

        while d >= 0:
            prev = trying[d]
            if prev >= 0:
                for j in range(p):
                    cell_sums[prev, j] -= wo[d, j]
                    cell_zero[prev, j] -= zo[d, j]
                cell_count[prev] -= 1
                if cell_count[prev] == 0:
                    k -= 1
            nxt = prev + 1
            cap = k + 1
            if cap > c_max:
                cap = c_max
            if nxt >= cap:
                trying[d] = -1
                d -= 1
                continue
            trying[d] = nxt
            for j in range(p):
                cell_sums[nxt, j] += wo[d, j]
                cell_zero[nxt, j] += zo[d, j]
            cell_count[nxt] += 1
            if cell_count[nxt] == 1:
                k += 1

            depth = d + 1
            nodes += 1
            if depth > max_depth:
                max_depth = depth
            if k > max_cells:
                max_cells = k

            if node_limit >= 0 and nodes >= node_limit:
                truncated = True
                break
            tick += 1
            if deadline > 0.0 and tick >= 1024:
                tick = 0
                with objmode(now="f8"):
                    now = time.time()
                if now > deadline:
                    truncated = True
                    break

            if prune != 0:
                acc = np.int64(0)
                for j in range(p):
                    cm = cell_sums[0, j]
                    for c in range(1, k):
                        if cell_sums[c, j] > cm:
                            cm = cell_sums[c, j]
                    if cm > 0:
                        acc += cm
                bound = acc + suffix[depth] - const
                if bound <= best_F:
                    pruned_b += 1
                    continue
                # Void prune: sound only while best_F >= 0 (solutions with
                # F >= 0 always respect the void cap).
                if void_cap >= 0 and no_res != 0 and best_F >= 0:
                    lb = np.int64(0)
                    for c in range(k):
                        mn = cell_zero[c, 0]
                        for j in range(1, p):
                            if cell_zero[c, j] < mn:
                                mn = cell_zero[c, j]
                        lb += mn
                    if k == c_max:
                        lb2 = np.int64(0)
                        for j in range(p):
                            mn = cell_zero[0, j]
                            for c in range(1, k):
                                if cell_zero[c, j] < mn:
                                    mn = cell_zero[c, j]
                            lb2 += mn
                        if lb2 > lb:
                            lb = lb2
                    if lb > void_cap:
                        pruned_v += 1
                        continue

            if depth == m:
                leaves += 1
                total = np.int64(0)
                if no_res == 0:
                    for j in range(p):
                        cm = cell_sums[0, j]
                        ci = 0
                        for c in range(1, k):
                            if cell_sums[c, j] > cm:
                                cm = cell_sums[c, j]
                                ci = c
                        if cm > 0:
                            labels[j] = ci + 1
                            total += cm
                        else:
                            labels[j] = 0
                else:
                    for c in range(k + 1):
                        covered[c] = False
                    for j in range(p):
                        cm = cell_sums[0, j]
                        ci = 0
                        for c in range(1, k):
                            if cell_sums[c, j] > cm:
                                cm = cell_sums[c, j]
                                ci = c
                        labels[j] = ci + 1
                        bestcol[j] = cm
                        covered[ci + 1] = True
                        total += cm
                    allcov = True
                    for c in range(1, k + 1):
                        if not covered[c]:
                            allcov = False
                            break
                    if not allcov:
                        total -= _cover_loss(cell_sums, bestcol, labels, k, p,
                                             u, v, cell_at, way, minv, used)
                F = total - const
                if F > best_F:
                    best_F = F
                    found = True
                    for t in range(m):
                        best_trying[t] = trying[t]
                    for j in range(p):
                        best_parts[j] = labels[j]
                continue
            d += 1

        return (best_F, found, best_trying, best_parts, nodes, leaves,
                pruned_b, pruned_v, max_depth, max_cells, truncated)
