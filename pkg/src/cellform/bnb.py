"""Branch-and-bound over machine partitions for the parametric subproblem.

For a fixed lambda = p_num/q_den the parametric objective

    F = q_den * n1_in - p_num * (n0_in + n1)

is additive over (cell, part) pairs, so once the machine partition is fixed
each part independently takes the cell with the best weight-column sum (or
residual, when the regime allows it). The search therefore only branches on
machine partitions, encoded as restricted-growth strings with machines
ordered densest-first, and bounds each prefix by letting every part pick its
best existing cell while every unassigned machine contributes all of its
positive weights.

Two engines share this logic: the plain-Python one below (the reference) and
a compiled twin in bnb_fast. They return identical values and node counts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .instances import Instance
from .rational import Ratio
from .solutions import Regime, Solution, canonicalize, efficacy, void_upper_bound

_NEG_INF = -(1 << 62)


@dataclass(frozen=True)
class WeightMatrix:
    """Per-(machine, part) weights q_den*a - p_num*(1-a) for lambda = p_num/q_den."""

    p_num: int
    q_den: int
    n1: int
    w: np.ndarray             # (m, p) int64
    pos_col_sums: np.ndarray  # (p,) int64: per-part sum of positive weights

    @property
    def constant(self) -> int:
        return self.p_num * self.n1


def make_weights(inst: Instance, lam: Ratio) -> WeightMatrix:
    a = np.asarray(inst.a, dtype=np.int64)
    w = lam.den * a - lam.num * (1 - a)
    return WeightMatrix(lam.num, lam.den, inst.n1, w, np.maximum(w, 0).sum(axis=0))


@dataclass
class SearchNode:
    """A partial machine assignment: labels[i] is the 0-based cell of machine
    i, or -1 while unassigned."""

    labels: tuple[int, ...]

    @property
    def depth(self) -> int:
        return sum(1 for lab in self.labels if lab >= 0)

    def cell_col_sums(self, weights: WeightMatrix) -> np.ndarray:
        k = max((lab for lab in self.labels if lab >= 0), default=-1) + 1
        sums = np.zeros((k, weights.w.shape[1]), dtype=np.int64)
        for i, lab in enumerate(self.labels):
            if lab >= 0:
                sums[lab] += weights.w[i]
        return sums


def node_bound(weights: WeightMatrix, node: SearchNode) -> int:
    """Optimistic value of the best completion of a partial assignment.

    Each part takes max(best existing cell column sum, 0) - it may also open
    a fresh cell or go residual, both worth at least 0 - and every unassigned
    machine contributes all of its positive weights. Admissible for both
    regimes (the no-residual feasible set is a subset of allow-residual's).
    """
    sums = node.cell_col_sums(weights)
    if sums.shape[0]:
        placed = int(np.maximum(sums.max(axis=0), 0).sum())
    else:
        placed = 0
    unassigned = [i for i, lab in enumerate(node.labels) if lab < 0]
    future = int(np.maximum(weights.w[unassigned], 0).sum()) if unassigned else 0
    return placed + future - weights.constant


def optimal_parts(S: np.ndarray, no_residual: bool) -> tuple[np.ndarray, int]:
    """Best part labels for fixed per-cell column sums S (k x p).

    Returns labels in 1..k (0 = residual) and the total contribution (the
    parametric value without the -p_num*n1 constant). Allow-residual: each
    part takes its best positive cell, ties to the lowest label, exact zeros
    go residual. No-residual: every part must take a cell and every cell
    needs a part; when the per-part greedy leaves cells empty, an exact
    minimum-loss assignment of distinct representative parts repairs the
    cover.
    """
    k, p = S.shape
    best = S.max(axis=0)
    arg = S.argmax(axis=0)  # first maximum = lowest cell label
    if not no_residual:
        labels = np.where(best > 0, arg + 1, 0)
        return labels, int(np.maximum(best, 0).sum())
    if k > p:
        raise ValueError(f"no feasible cover: {k} cells, {p} parts")
    labels = arg + 1
    covered = np.zeros(k + 1, dtype=bool)
    covered[labels] = True
    if bool(covered[1:].all()):
        return labels, int(best.sum())
    loss = best[None, :] - S  # loss[c, j] >= 0 of forcing part j into cell c
    pick, loss_total = _min_loss_cover(loss.tolist())
    for cell0, j in enumerate(pick):
        labels[j] = cell0 + 1
    return labels, int(best.sum()) - loss_total


def _min_loss_cover(loss) -> tuple[list[int], int]:
    """Pick one distinct part per cell minimizing total loss.

    Shortest-augmenting-path assignment on the rectangular loss matrix
    (cells x parts, cells <= parts), exact for integer losses. Cell and part
    indices are shifted by one internally; column 0 is the dummy start.
    """
    k = len(loss)
    p = len(loss[0])
    INF = 1 << 60
    u = [0] * (k + 1)
    v = [0] * (p + 1)
    cell_at = [0] * (p + 1)  # cell matched to each part, 0 = free
    way = [0] * (p + 1)
    for c in range(1, k + 1):
        cell_at[0] = c
        j0 = 0
        minv = [INF] * (p + 1)
        used = [False] * (p + 1)
        while True:
            used[j0] = True
            c0 = cell_at[j0]
            delta = INF
            j_next = 0
            row = loss[c0 - 1]
            for j in range(1, p + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[c0] - v[j]
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
        while j0:
            j_prev = way[j0]
            cell_at[j0] = cell_at[j_prev]
            j0 = j_prev
    pick = [-1] * k
    total = 0
    for j in range(1, p + 1):
        if cell_at[j]:
            pick[cell_at[j] - 1] = j - 1
            total += loss[cell_at[j] - 1][j - 1]
    return pick, total


def best_part_assignment(
    weights: WeightMatrix, machine_cell, regime: Regime
) -> tuple[list[int], int]:
    """Optimal part labels for a complete machine partition (labels 1..k)."""
    k = max(machine_cell)
    sums = np.zeros((k, weights.w.shape[1]), dtype=np.int64)
    for i, lab in enumerate(machine_cell):
        sums[lab - 1] += weights.w[i]
    labels, total = optimal_parts(sums, regime is Regime.NO_RESIDUAL)
    return [int(v) for v in labels], total


@dataclass
class SubproblemStats:
    nodes: int = 0
    leaves: int = 0
    pruned_bound: int = 0
    pruned_void: int = 0
    max_depth: int = 0
    max_cells: int = 0
    time_ms: int = 0
    engine: str = "python"


@dataclass
class SubproblemResult:
    best_F: int | None        # None only when nothing was found at all
    solution: Solution | None  # None when the incumbent baseline stands
    truncated: bool
    stats: SubproblemStats


def label_cap(inst: Instance, regime: Regime) -> int:
    """Most cells any optimal grouping needs. No-residual: min(m, p) since a
    cell needs a machine and a part. Allow-residual: min(m, p+1) - at most p
    part-bearing cells plus one pooled machine-only cell."""
    if regime is Regime.NO_RESIDUAL:
        return min(inst.m, inst.p)
    return min(inst.m, inst.p + 1)


def solve_subproblem(
    inst: Instance,
    lam: Ratio,
    regime: Regime,
    incumbent_F: int | None = None,
    time_limit: float | None = None,
    node_limit: int | None = None,
    engine: str = "auto",
    prune: bool = True,
) -> SubproblemResult:
    """Maximize F = q_den*n1_in - p_num*(n0_in + n1) over feasible groupings.

    incumbent_F, when given, is the value of a solution the caller already
    holds; only strictly better solutions are returned (solution=None means
    the incumbent stands and best_F == incumbent_F is the exact maximum,
    budget permitting). The void prune from the optimal-void bound activates
    only while the running best is >= 0, which provably never cuts a
    solution with F >= 0, so returned maxima are exact whenever they are
    nonnegative; `prune=False` disables all pruning (full enumeration).
    """
    t0 = time.time()
    a = np.asarray(inst.a, dtype=np.int64)
    weights = make_weights(inst, lam)
    no_res = regime is Regime.NO_RESIDUAL
    c_max = label_cap(inst, regime)
    order = sorted(range(inst.m), key=lambda i: (-int(a[i].sum()), i))
    void_cap = -1
    if prune and lam.num > 0 and inst.n1 >= 1:
        void_cap = void_upper_bound(inst.n1, lam)
    deadline = t0 + time_limit if time_limit is not None else None

    if engine == "auto":
        from . import bnb_fast

        engine = "fast" if bnb_fast.available() else "python"

    if engine == "fast":
        from . import bnb_fast

        best_F, best_m, best_p, raw, truncated = bnb_fast.run(
            a, weights.w, order, c_max, no_res, weights.constant, void_cap,
            _NEG_INF if incumbent_F is None else incumbent_F,
            -1 if node_limit is None else node_limit,
            -1.0 if deadline is None else deadline,
            prune,
        )
        stats = SubproblemStats(*map(int, raw), engine="fast")
    elif engine == "python":
        best_F, best_m, best_p, stats, truncated = _search_py(
            a, weights.w, order, c_max, no_res, weights.constant, void_cap,
            _NEG_INF if incumbent_F is None else incumbent_F,
            node_limit, deadline, prune,
        )
    else:
        raise ValueError(f"unknown engine {engine!r}")

    stats.time_ms = int((time.time() - t0) * 1000)
    solution = None
    if best_m is not None:
        machine_cell = [int(v) for v in best_m]
        part_cell = [int(v) for v in best_p]
        solution = canonicalize(Solution(max(machine_cell), machine_cell, part_cell))
        efficacy(inst, solution)
    if best_F <= _NEG_INF:
        return SubproblemResult(None, None, truncated, stats)
    return SubproblemResult(int(best_F), solution, truncated, stats)


def _search_py(a, w, order, c_max, no_res, const, void_cap, best_F0,
               node_limit, deadline, prune):
    m, p = w.shape
    wo = w[order]
    zo = 1 - a[order]
    pos_row = np.maximum(wo, 0).sum(axis=1)
    suffix = np.zeros(m + 1, dtype=np.int64)
    for d in range(m - 1, -1, -1):
        suffix[d] = suffix[d + 1] + pos_row[d]

    cell_sums = np.zeros((c_max, p), dtype=np.int64)
    cell_zero = np.zeros((c_max, p), dtype=np.int64)
    cell_count = np.zeros(c_max, dtype=np.int64)
    trying = np.full(m, -1, dtype=np.int64)

    best_F = best_F0
    best_m = best_p = None
    stats = SubproblemStats()
    truncated = False
    k = 0
    d = 0
    tick = 0

    while d >= 0:
        prev = trying[d]
        if prev >= 0:
            cell_sums[prev] -= wo[d]
            cell_zero[prev] -= zo[d]
            cell_count[prev] -= 1
            if cell_count[prev] == 0:
                k -= 1
        nxt = prev + 1
        if nxt >= min(k + 1, c_max):
            trying[d] = -1
            d -= 1
            continue
        trying[d] = nxt
        cell_sums[nxt] += wo[d]
        cell_zero[nxt] += zo[d]
        cell_count[nxt] += 1
        if cell_count[nxt] == 1:
            k += 1

        depth = d + 1
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, depth)
        stats.max_cells = max(stats.max_cells, k)

        if node_limit is not None and stats.nodes >= node_limit:
            truncated = True
            break
        tick += 1
        if deadline is not None and tick >= 1024:
            tick = 0
            if time.time() > deadline:
                truncated = True
                break

        if prune:
            colmax = cell_sums[:k].max(axis=0)
            bound = int(np.maximum(colmax, 0).sum()) + int(suffix[depth]) - const
            if bound <= best_F:
                stats.pruned_bound += 1
                continue
            # Void prune: only while best_F >= 0, where it cannot cut any
            # solution with F >= 0 (their void counts obey the cap).
            if void_cap >= 0 and no_res and best_F >= 0:
                lb = int(cell_zero[:k].min(axis=1).sum())
                if k == c_max:
                    lb = max(lb, int(cell_zero[:k].min(axis=0).sum()))
                if lb > void_cap:
                    stats.pruned_void += 1
                    continue

        if depth == m:
            stats.leaves += 1
            plabels, total = optimal_parts(cell_sums[:k], no_res)
            F = total - const
            if F > best_F:
                best_F = F
                best_m = np.empty(m, dtype=np.int64)
                for t in range(m):
                    best_m[order[t]] = trying[t] + 1
                best_p = plabels.copy()
            continue
        d += 1

    return best_F, best_m, best_p, stats, truncated
