"""Multi-start local search over machine partitions, used to seed the
parametric solver with a good starting ratio.

Part placement is always kept optimal for the machine grouping at hand
(the part side separates once machines are fixed), so the neighborhood
effectively lives on machine partitions: relocate one machine, relocate
one part, merge two cells, or split one cell in two. Acceptance is strict
efficacy increase under exact rational comparison, so every climb
terminates; restarts supply the diversification.

Determinism: the same rng_seed gives the same answer as long as the time
budget does not cut a run short.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .bnb import best_part_assignment, label_cap, make_weights
from .instances import Instance
from .rational import Ratio
from .solutions import Regime, Solution, canonicalize, efficacy

_FIT_ROUNDS = 64       # ratio strictly increases each round; never reached
_SPLIT_ENUM_MAX = 10   # cells up to this size get exact best two-partitions


def _renumber(labels) -> list[int]:
    """First-occurrence relabeling to 1..k (cell labels, not a 0-based RGS)."""
    mapping: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in mapping:
            mapping[lab] = len(mapping) + 1
        out.append(mapping[lab])
    return out


@dataclass
class SearchConfig:
    regime: Regime = Regime.NO_RESIDUAL
    restarts: int = 8
    time_budget: float | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


def fit_parts(inst: Instance, machine_cell: list[int], regime: Regime,
              lam: Ratio | None = None) -> Solution:
    """Best part labels for a fixed machine grouping, by the small
    parametric loop: place parts greedily at the current ratio, take the
    new grouping's efficacy as the next ratio, stop at the fixpoint. At
    the fixpoint no part placement beats the one found, so the returned
    solution is exactly optimal for this machine partition."""
    if lam is None:
        lam = Ratio(0, 1)
    best: Solution | None = None
    for _ in range(_FIT_ROUNDS):
        weights = make_weights(inst, lam)
        labels, _total = best_part_assignment(weights, machine_cell, regime)
        sol = Solution(max(machine_cell), list(machine_cell), labels)
        tau = efficacy(inst, sol)
        if best is not None and not tau > best.efficacy:
            return best
        best = sol
        if tau == lam:
            return best
        lam = tau
    return best


def _counts(inst: Instance, machine_cell: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell ones/zeros each part would contribute, k x p."""
    a = np.asarray(inst.a, dtype=np.int64)
    k = max(machine_cell)
    ones = np.zeros((k, inst.p), dtype=np.int64)
    sizes = np.zeros(k, dtype=np.int64)
    for i, lab in enumerate(machine_cell):
        ones[lab - 1] += a[i]
        sizes[lab - 1] += 1
    zeros = sizes[:, None] - ones
    return ones, zeros


def _try_part_moves(inst: Instance, sol: Solution, regime: Regime) -> Solution | None:
    """Relocate one part to another cell (or to residual when allowed).
    Evaluated by exact count deltas; accepted on strict efficacy increase."""
    ones, zeros = _counts(inst, sol.machine_cell)
    k = ones.shape[0]
    no_res = regime is Regime.NO_RESIDUAL
    cell_load = [0] * (k + 1)
    for lab in sol.part_cell:
        cell_load[lab] += 1
    for j in range(inst.p):
        src = sol.part_cell[j]
        if no_res and cell_load[src] == 1:
            continue  # would leave a cell without parts
        targets = range(1, k + 1) if no_res else range(0, k + 1)
        for dst in targets:
            if dst == src:
                continue
            d_ones = (ones[dst - 1, j] if dst else 0) - (ones[src - 1, j] if src else 0)
            d_zeros = (zeros[dst - 1, j] if dst else 0) - (zeros[src - 1, j] if src else 0)
            n1_in = sol.n1_in + int(d_ones)
            n0_in = sol.n0_in + int(d_zeros)
            den = inst.n1 + n0_in
            if den <= 0:
                continue
            if Ratio(n1_in, den) > sol.efficacy:
                cand = sol.copy()
                cand.part_cell[j] = dst
                efficacy(inst, cand)
                return cand
    return None


def _split_candidates(rows: list[int], a: np.ndarray
                      ) -> list[tuple[list[int], list[int]]]:
    """Two-partitions of a cell's machines: all of them for small cells,
    else one pole-based split (the two most dissimilar rows seed the
    halves, everyone else joins the nearer pole)."""
    s = len(rows)
    if s < 2:
        return []
    if s <= _SPLIT_ENUM_MAX:
        # mask < 2^(s-1) keeps the last row on the left, so each
        # unordered split appears exactly once
        out = []
        for mask in range(1, 1 << (s - 1)):
            left = [rows[t] for t in range(s) if not ((mask >> t) & 1)]
            right = [rows[t] for t in range(s) if (mask >> t) & 1]
            out.append((left, right))
        return out
    dists = {}
    poles = (rows[0], rows[1])
    worst = -1
    for x in range(s):
        for y in range(x + 1, s):
            d = int(np.sum(a[rows[x]] != a[rows[y]]))
            if d > worst:
                worst = d
                poles = (rows[x], rows[y])
    left, right = [poles[0]], [poles[1]]
    for r in rows:
        if r in poles:
            continue
        dl = int(np.sum(a[r] != a[poles[0]]))
        dr = int(np.sum(a[r] != a[poles[1]]))
        (left if dl <= dr else right).append(r)
    return [(left, right)]


def _climb(inst: Instance, machine_cell: list[int], regime: Regime,
           deadline: float | None) -> Solution:
    a = np.asarray(inst.a, dtype=np.int64)
    cap = label_cap(inst, regime)
    sol = fit_parts(inst, machine_cell, regime)
    while True:
        if deadline is not None and time.time() > deadline:
            return sol
        k = max(sol.machine_cell)
        improved = None

        # relocate one machine to another cell, or open a new one
        for i in range(inst.m):
            src = sol.machine_cell[i]
            top = k if sum(1 for v in sol.machine_cell if v == src) == 1 else min(k + 1, cap)
            for dst in range(1, top + 1):
                if dst == src:
                    continue
                cells = list(sol.machine_cell)
                cells[i] = dst
                cells = _renumber(cells)
                if regime is Regime.NO_RESIDUAL and max(cells) > inst.p:
                    continue
                cand = fit_parts(inst, cells, regime, sol.efficacy)
                if cand.efficacy > sol.efficacy:
                    improved = cand
                    break
            if improved:
                break

        if improved is None:
            improved = _try_part_moves(inst, sol, regime)

        if improved is None and k >= 2:  # merge two cells
            for c in range(1, k + 1):
                for d in range(c + 1, k + 1):
                    cells = [c if v == d else v for v in sol.machine_cell]
                    cand = fit_parts(inst, _renumber(cells), regime,
                                     sol.efficacy)
                    if cand.efficacy > sol.efficacy:
                        improved = cand
                        break
                if improved:
                    break

        if improved is None and k < cap and not (
                regime is Regime.NO_RESIDUAL and k + 1 > inst.p):
            # split one cell by its best two-partition
            for c in range(1, k + 1):
                rows = [i for i, v in enumerate(sol.machine_cell) if v == c]
                best_cand = None
                for _left, right in _split_candidates(rows, a):
                    cells = list(sol.machine_cell)
                    for r in right:
                        cells[r] = k + 1
                    cand = fit_parts(inst, _renumber(cells), regime,
                                     sol.efficacy)
                    if cand.efficacy > sol.efficacy and (
                            best_cand is None or cand.efficacy > best_cand.efficacy):
                        best_cand = cand
                if best_cand is not None:
                    improved = best_cand
                    break

        if improved is None:
            return sol
        sol = improved


def _random_machine_cells(m: int, k: int, rng: random.Random) -> list[int]:
    """Random grouping with exactly k nonempty cells, then normalized."""
    labels = [0] * m
    firsts = rng.sample(range(m), k)
    for c, i in enumerate(firsts, start=1):
        labels[i] = c
    for i in range(m):
        if labels[i] == 0:
            labels[i] = rng.randint(1, k)
    return _renumber(labels)


def heuristic_solve(inst: Instance, cfg: SearchConfig) -> Solution:
    """Best feasible grouping found across cfg.restarts climbs."""
    regime = cfg.regime
    deadline = time.time() + cfg.time_budget if cfg.time_budget is not None else None
    if regime is Regime.NO_RESIDUAL and (inst.m == 1 or inst.p == 1):
        sol = Solution(1, [1] * inst.m, [1] * inst.p)
        efficacy(inst, sol)
        return sol
    rng = random.Random(cfg.rng_seed)
    kmax = min(inst.m, inst.p)
    best: Solution | None = None
    for _ in range(cfg.restarts):
        if deadline is not None and time.time() > deadline and best is not None:
            break
        k = rng.randint(1, kmax)
        cells = _random_machine_cells(inst.m, k, rng)
        sol = _climb(inst, cells, regime, deadline)
        if best is None or sol.efficacy > best.efficacy:
            best = sol
    best = canonicalize(best)
    efficacy(inst, best)
    return best
