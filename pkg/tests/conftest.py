import pytest

from cellform.instances import Instance
from cellform.solutions import Solution, efficacy

# 5x7 reference matrix with 20 operations; optimum 16/23 in both regimes.
REF_MATRIX = (
    (1, 0, 0, 0, 1, 1, 1),
    (0, 1, 1, 1, 1, 0, 0),
    (0, 0, 1, 1, 1, 1, 0),
    (1, 1, 1, 1, 0, 0, 0),
    (0, 1, 0, 1, 1, 1, 0),
)


@pytest.fixture
def ref_instance():
    return Instance(name="ref57", m=5, p=7, a=REF_MATRIX)


@pytest.fixture
def two_cell(ref_instance):
    """Two-cell grouping of the reference matrix with efficacy 15/24."""
    sol = Solution(c=2, machine_cell=[1, 2, 2, 1, 2],
                   part_cell=[1, 2, 2, 2, 2, 2, 1])
    efficacy(ref_instance, sol)
    return sol
