import pytest

from dcopex.core import Constraint, DcopInstance


@pytest.fixture
def triangle():
    """Three binary variables on a triangle of cost tables.

    Optimal complete assignment is {0: 1, 1: 1, 2: 0} at cost 3 (one unit
    from each constraint); used as the running example across the suite.
    """
    f1 = Constraint(id=0, scope=(0, 1), table={(0, 0): 1, (0, 1): 2, (1, 0): 1, (1, 1): 1})
    f2 = Constraint(id=1, scope=(0, 2), table={(0, 0): 3, (0, 1): 3, (1, 0): 1, (1, 1): 1})
    f3 = Constraint(id=2, scope=(1, 2), table={(0, 0): 3, (0, 1): 4, (1, 0): 1, (1, 1): 2})
    return DcopInstance(
        agents=(0, 1, 2),
        variables=(0, 1, 2),
        domains={x: (0, 1) for x in (0, 1, 2)},
        constraints=(f1, f2, f3),
        owner={0: 0, 1: 1, 2: 2},
    )


@pytest.fixture
def triangle_optimum():
    return {0: 1, 1: 1, 2: 0}
