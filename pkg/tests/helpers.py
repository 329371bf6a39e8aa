"""Independent reference implementations used to cross-check the library.

Everything here is written the slow, obvious way on purpose: plain loops,
Fraction arithmetic, and a partition enumerator that shares no code with
cellform.partitions. Only sane for tiny instances.
"""

import itertools
import random
from fractions import Fraction

from cellform.instances import Instance
from cellform.solutions import Regime


def random_instance(rng: random.Random, m: int, p: int, density: float,
                    name: str = "") -> Instance:
    """Random binary matrix at the given density, guaranteed n1 >= 1."""
    while True:
        a = tuple(
            tuple(1 if rng.random() < density else 0 for _ in range(p))
            for _ in range(m)
        )
        if any(any(row) for row in a):
            return Instance(name=name, m=m, p=p, a=a)


def machine_partitions(m):
    """All set partitions of m machines as 1-based label tuples."""

    def rec(i, labels, k):
        if i == m:
            yield tuple(labels)
            return
        for lab in range(1, k + 2):
            labels.append(lab)
            yield from rec(i + 1, labels, max(k, lab))
            labels.pop()

    yield from rec(0, [], 0)


def part_vectors(k, p, regime):
    if regime is Regime.NO_RESIDUAL:
        # every part in a cell, every cell gets at least one part
        want = set(range(1, k + 1))
        for v in itertools.product(range(1, k + 1), repeat=p):
            if set(v) == want:
                yield v
    else:
        # label 0 pools the leftover parts; machine-only cells are fine
        yield from itertools.product(range(0, k + 1), repeat=p)


def pair_counts(inst, machine_cell, part_cell):
    n1_in = 0
    pairs = 0
    for i in range(inst.m):
        ci = machine_cell[i]
        if ci == 0:
            continue
        for j in range(inst.p):
            if part_cell[j] == ci:
                pairs += 1
                n1_in += inst.a[i][j]
    return n1_in, pairs - n1_in


def naive_best(inst, regime) -> Fraction:
    """Exhaustive double enumeration of machine and part labelings."""
    best = Fraction(0)
    for mcell in machine_partitions(inst.m):
        k = max(mcell)
        for pcell in part_vectors(k, inst.p, regime):
            n1_in, n0_in = pair_counts(inst, mcell, pcell)
            den = inst.n1 + n0_in
            if den == 0:
                continue
            val = Fraction(n1_in, den)
            if val > best:
                best = val
    return best
