import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saitoh_lab.jets import (
    BoxIdeal,
    JetTarget,
    MaximalIdeal,
    MultiplierIdeal,
    constrained_indices,
    ideal_contains,
    multiplier_E,
    multiplier_E1,
)


def test_box_and_maximal_membership():
    I = BoxIdeal((1, 2))
    assert not ideal_contains(I, (1, 2))
    assert ideal_contains(I, (2, 0))
    assert len(constrained_indices(I)) == 6
    assert constrained_indices(MaximalIdeal(3)) == [(0, 0, 0)]
    assert ideal_contains(MaximalIdeal(2), (0, 1))
    with pytest.raises(ValueError):
        ideal_contains(I, (1,))
    with pytest.raises(ValueError):
        BoxIdeal((-1,))


def test_multiplier_sets_for_p44():
    assert multiplier_E1((4, 4)) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert multiplier_E((4, 4)) == [(0, 2), (1, 1), (2, 0)]
    assert multiplier_E((2, 2)) == [(0, 0)]
    assert ideal_contains(MultiplierIdeal((2, 2)), (1, 0))
    with pytest.raises(ValueError):
        MultiplierIdeal((0.0, 1.0))


def test_jet_target_algebra():
    h = JetTarget.product([{0: 1, 1: 0.5}, {1: 2}])
    assert h.as_dict() == {(0, 1): 2, (1, 1): 1}
    assert h.orders() == (0, 1)
    assert np.allclose(h.vector([(1, 1), (0, 0)]), [1, 0])
    assert JetTarget.one(2).as_dict() == {(0, 0): 1}
    dup = JetTarget((((1,), 1.0), ((1,), 2.0)))
    assert dup.as_dict() == {(1,): 3}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.5, 6.0), min_size=1, max_size=3))
def test_multiplier_E1_is_exactly_the_complement(p):
    I = MultiplierIdeal(tuple(p))
    E1 = set(multiplier_E1(p))
    for a in itertools.product(*[range(int(q) + 3) for q in p]):
        assert (a in E1) == (not ideal_contains(I, a))
    # E1 is a down-set
    for a in E1:
        for j in range(len(a)):
            if a[j]:
                b = a[:j] + (a[j] - 1,) + a[j + 1 :]
                assert b in E1
