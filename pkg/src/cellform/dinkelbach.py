"""Parametric outer loop: exact efficacy maximization via repeated subproblems.

Each round solves max F(lambda) = q*n1_in - p*(n0_in + n1) at the current
ratio lambda = p/q. A positive maximum yields a strictly better grouping
whose efficacy becomes the next lambda (kept as the unreduced pair straight
from the counts); a zero maximum certifies the incumbent optimal. Seeding
above the optimum makes the first maximum negative, in which case the
argmax ratio restarts the loop from below. Every lambda after the first
improvement step is the efficacy of a real grouping, so the sequence is
strictly increasing and finite.

Once an incumbent exists its value 0 is passed down as the baseline, so the
subproblem only has to look for strict improvements - that is where the
bound prune gets its teeth.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum

from .bnb import SubproblemResult, solve_subproblem
from .instances import Instance
from .rational import Ratio, parse_ratio
from .solutions import Regime, Solution, canonicalize, efficacy

log = logging.getLogger(__name__)

_MAX_ROUNDS = 10_000  # safety valve; the ratio sequence is finite


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    TIME_LIMIT = "TimeLimit"
    # Unreachable for m, p >= 1 (one cell holding everything is always
    # feasible) but part of the outcome vocabulary.
    INFEASIBLE = "Infeasible"


@dataclass
class IterationRecord:
    index: int
    lam: Ratio
    F: int
    nodes: int
    time_ms: int


@dataclass
class SolveOutcome:
    status: SolveStatus
    solution: Solution
    lambda_final: Ratio
    iterations: int
    history: list[IterationRecord] = field(default_factory=list)
    nodes: int = 0
    time_ms: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    @property
    def subproblem_stats(self) -> list[int]:
        """Nodes expanded per iteration."""
        return [rec.nodes for rec in self.history]


def seed_from(inst: Instance, regime: Regime, source,
              heuristic_cfg=None) -> Ratio:
    """Starting ratio from one of: "zero", "heuristic", a Ratio, or a
    literature value given as a rational/decimal string (decimals become
    over-10000 rationals, e.g. "0.6957" -> 6957/10000). The heuristic
    source returns the incumbent's efficacy as the unreduced pair
    n1_in / (n1 + n0_in)."""
    if isinstance(source, Ratio):
        return source
    if source == "zero":
        return Ratio(0, 1)
    if source == "heuristic":
        from .heuristic import SearchConfig, heuristic_solve

        cfg = heuristic_cfg or SearchConfig(regime=regime)
        return raw_ratio(inst, heuristic_solve(inst, cfg))
    return parse_ratio(str(source))


def trivial_solution(inst: Instance) -> Solution:
    """Everything in one cell. Feasible in both regimes."""
    sol = Solution(1, [1] * inst.m, [1] * inst.p)
    efficacy(inst, sol)
    return sol


def raw_ratio(inst: Instance, sol: Solution) -> Ratio:
    """The efficacy of sol as the unreduced pair n1_in / (n1 + n0_in)."""
    efficacy(inst, sol)
    den = inst.n1 + sol.n0_in
    if den == 0:
        return Ratio(0, 1)
    return Ratio(sol.n1_in, den)


def _default_subsolver(engine: str):
    def run(inst, lam, regime, incumbent_F, time_limit, node_limit
            ) -> SubproblemResult:
        return solve_subproblem(inst, lam, regime, incumbent_F=incumbent_F,
                                time_limit=time_limit, node_limit=node_limit,
                                engine=engine)

    return run


def solve(
    inst: Instance,
    regime: Regime,
    seed_lambda: Ratio | None = None,
    seed_solution: Solution | None = None,
    subsolver=None,
    time_limit: float | None = None,
    node_limit: int | None = None,
    engine: str = "auto",
) -> SolveOutcome:
    """Maximize grouping efficacy exactly, or return the best grouping found
    within the budget.

    Seeds: a seed_solution supplies both the starting ratio (its unreduced
    efficacy pair) and the incumbent; a bare seed_lambda only shifts the
    first round's ratio. With neither, the loop starts at 0/1. time_limit
    is a shared wall-clock budget in seconds; node_limit applies per round.
    """
    t0 = time.time()
    deadline = t0 + time_limit if time_limit is not None else None
    if subsolver is None:
        subsolver = _default_subsolver(engine)

    incumbent: Solution | None = None
    if seed_solution is not None:
        incumbent = canonicalize(seed_solution.copy())
        lam = raw_ratio(inst, incumbent)
    elif seed_lambda is not None:
        lam = seed_lambda
    else:
        lam = Ratio(0, 1)

    history: list[IterationRecord] = []
    total_nodes = 0
    status = SolveStatus.TIME_LIMIT
    rounds = 0

    while rounds < _MAX_ROUNDS:
        remaining = None
        if deadline is not None:
            remaining = deadline - time.time()
            if remaining <= 0:
                break
        rounds += 1
        it_t0 = time.time()
        res = subsolver(inst, lam, regime,
                        0 if incumbent is not None else None,
                        remaining, node_limit)
        it_ms = int(round((time.time() - it_t0) * 1000))
        total_nodes += res.stats.nodes
        F = res.best_F if res.best_F is not None else 0
        history.append(IterationRecord(rounds, lam, F, res.stats.nodes, it_ms))
        log.info("iter=%d lambda=%s F=%d nodes=%d time_ms=%d",
                 rounds, lam, F, res.stats.nodes, it_ms)

        if res.solution is not None:
            incumbent = res.solution
            next_lam = raw_ratio(inst, incumbent)
        if res.truncated:
            break
        if res.solution is None:
            # Exact maximum equals the baseline: either the incumbent's 0
            # (optimality certificate) or, with no incumbent, an empty
            # search on a degenerate budget - handled below.
            if incumbent is not None:
                status = SolveStatus.OPTIMAL
            break
        if F == 0:
            # Seeded exactly at the optimum: the argmax attains lambda.
            status = SolveStatus.OPTIMAL
            break
        # F > 0 improves; F < 0 (seed above optimum) restarts from the
        # argmax ratio. Both continue from the new incumbent's pair.
        lam = next_lam

    if incumbent is None:
        incumbent = trivial_solution(inst)
    efficacy(inst, incumbent)
    return SolveOutcome(
        status=status,
        solution=incumbent,
        lambda_final=lam,
        iterations=rounds,
        history=history,
        nodes=total_nodes,
        time_ms=int(round((time.time() - t0) * 1000)),
    )
