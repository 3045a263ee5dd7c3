import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniflab.errors import PartitionError, SizeMismatchError
from uniflab.partitions import (
    Partition,
    all_partitions,
    fiber_partition,
    meet,
    pullback,
    pullback_blocks,
    pushforward,
    refines,
    singletons,
    top,
    v_gamma,
)
from uniflab.perms import Perm, compose, inverse
from uniflab.relations import intersect, is_reflexive, is_symmetric, is_transitive, to_partition


def P(n, *blocks):
    return Partition.from_blocks(n, blocks)


@st.composite
def partitions(draw, n=None):
    if n is None:
        n = draw(st.integers(1, 6))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Partition.from_labels(labels)


@st.composite
def perms(draw, n):
    return Perm(tuple(draw(st.permutations(range(n)))))


def test_from_blocks_canonicalizes():
    assert P(4, {2, 3}, {1, 0}).blocks == ((0, 1), (2, 3))
    assert P(3, {0}, {1}, {2}) == singletons(3)


@pytest.mark.parametrize("raw, index", [
    ([{0, 1}, {1, 2}, {3}], 1),
    ([{0, 1}, {3}], 2),
    ([{0, 1, 2}, {3, 4}], 4),
])
def test_from_blocks_errors_name_the_index(raw, index):
    with pytest.raises(PartitionError) as exc:
        Partition.from_blocks(4, raw)
    assert exc.value.index == index
    assert str(index) in str(exc.value)


def test_from_blocks_rejects_empty_block():
    with pytest.raises(PartitionError, match="empty"):
        Partition.from_blocks(2, [{0, 1}, set()])


def test_overlap_message():
    with pytest.raises(PartitionError, match="overlap at index 1"):
        Partition.from_blocks(4, [{0, 1}, {1, 2}, {3}])


def test_meet_examples():
    assert meet(P(4, [0, 1], [2, 3]), P(4, [0, 2], [1, 3])) == singletons(4)
    g = P(4, [0, 1], [2, 3])
    assert meet(g, g) == g
    assert meet(P(4, [0, 1, 2], [3]), P(4, [0, 1], [2, 3])) == P(4, [0, 1], [2], [3])


def test_meet_size_mismatch():
    with pytest.raises(SizeMismatchError):
        meet(singletons(3), singletons(4))
    with pytest.raises(SizeMismatchError):
        refines(singletons(3), top(4))


def test_refines_examples():
    for beta in all_partitions(4):
        assert refines(singletons(4), beta)
    assert refines(P(4, [0, 1], [2, 3]), top(4))
    assert not refines(P(4, [0, 1], [2, 3]), P(4, [0, 2], [1, 3]))


def test_pushforward_examples():
    g = P(4, [0, 1], [2, 3])
    assert pushforward(Perm.identity(4), g) == g
    assert pushforward(Perm.from_cycles(4, "(0 2)"), g) == P(4, [0, 3], [1, 2])


def test_pullback_examples():
    g = P(4, [0, 1], [2, 3])
    assert pullback(Perm.identity(4), g) == g
    # preimage of {0,1} under 0->1->2->0 is {0,2}
    assert pullback(Perm.from_cycles(4, "(0 1 2)"), g) == P(4, [0, 2], [1, 3])


def test_pullback_is_pushforward_of_inverse_random():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 6)
        im = list(range(n))
        rng.shuffle(im)
        g = Perm(tuple(im))
        gamma = Partition.from_labels([rng.randrange(n) for _ in range(n)])
        assert pullback(g, gamma) == pushforward(inverse(g), gamma)


def test_pullback_blocks_is_finer_than_pullback():
    g = P(4, [0, 1], [2, 3])
    swap = Perm.from_cycles(4, "(0 2)(1 3)")
    assert pullback(swap, g) == pullback(Perm.identity(4), g)
    assert pullback_blocks(swap, g) != pullback_blocks(Perm.identity(4), g)


def test_fiber_partition_examples():
    assert fiber_partition([3, 3, 3, 3]) == top(4)
    assert fiber_partition([4, 1, 9, 0]) == singletons(4)
    assert fiber_partition([7, 7, 5, 7]) == P(4, [0, 1, 3], [2])


def test_v_gamma_examples():
    assert set(v_gamma(singletons(3)).pairs()) == {(i, i) for i in range(3)}
    assert set(v_gamma(top(3)).pairs()) == set(itertools.product(range(3), repeat=2))
    assert set(v_gamma(P(4, [0, 1], [2, 3])).pairs()) == {
        (0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)}


@pytest.mark.parametrize("n, bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
def test_all_partitions_counts(n, bell):
    parts = all_partitions(n)
    assert len(parts) == bell == len(set(parts))


@settings(max_examples=200)
@given(st.data())
def test_lattice_laws(data):
    n = data.draw(st.integers(1, 6))
    a, b, c = (data.draw(partitions(n)) for _ in range(3))
    assert meet(a, b) == meet(b, a)
    assert meet(meet(a, b), c) == meet(a, meet(b, c))
    assert meet(a, a) == a
    m = meet(a, b)
    assert refines(m, a) and refines(m, b)
    # greatest lower bound
    if refines(c, a) and refines(c, b):
        assert refines(c, m)
    assert refines(a, a)
    if refines(a, b) and refines(b, a):
        assert a == b
    if refines(a, b) and refines(b, c):
        assert refines(a, c)


@settings(max_examples=200)
@given(st.data())
def test_pushforward_is_action(data):
    n = data.draw(st.integers(1, 6))
    g, h = data.draw(perms(n)), data.draw(perms(n))
    gamma = data.draw(partitions(n))
    assert pushforward(compose(g, h), gamma) == pushforward(g, pushforward(h, gamma))
    assert pushforward(g, pushforward(inverse(g), gamma)) == gamma


@settings(max_examples=200)
@given(partitions())
def test_v_gamma_is_equivalence_and_round_trips(gamma):
    r = v_gamma(gamma)
    assert is_reflexive(r) and is_symmetric(r) and is_transitive(r)
    assert to_partition(r) == gamma


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_v_gamma_of_meet_is_intersection_exhaustive(n):
    parts = all_partitions(n)
    for a in parts:
        for b in parts:
            assert v_gamma(meet(a, b)) == intersect(v_gamma(a), v_gamma(b))


def test_pushforward_size_mismatch():
    with pytest.raises(SizeMismatchError):
        pushforward(Perm.identity(3), singletons(4))
    with pytest.raises(SizeMismatchError):
        pullback(Perm.identity(3), singletons(4))
