import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniflab import oracle
from uniflab.errors import CapExceededError, InvalidInputError, NotASubgroupError, SizeMismatchError
from uniflab.partitions import Partition, all_partitions, meet, pushforward, singletons
from uniflab.perms import (
    Perm,
    PermSet,
    SubgroupSet,
    apply,
    cap_override,
    closure_audit,
    compose,
    conjugate,
    default_cap,
    intersect,
    inverse,
    parse_perm,
    point_stabilizer,
    product_set,
    stabilizer_of_partition,
    symmetric_group,
    transposition,
    trivial_group,
)


def P(n, *blocks):
    return Partition.from_blocks(n, blocks)


def test_compose_applies_right_argument_first():
    f = Perm.from_cycles(3, "(0 1)")
    g = Perm.from_cycles(3, "(1 2)")
    fg = compose(f, g)
    for x in range(3):
        assert apply(fg, x) == f(g(x))
    assert fg == f * g
    assert fg.images == (1, 2, 0)


def test_inverse_and_identity():
    f = Perm.from_cycles(5, "(0 3 1)(2 4)")
    assert compose(f, inverse(f)).is_identity
    assert compose(inverse(f), f).is_identity
    assert Perm.identity(4).cycle_str() == "()"


def test_cycle_round_trip():
    f = Perm.from_cycles(6, "(0 4 2)(3 5)")
    assert Perm.from_cycles(6, f.cycle_str()) == f
    assert parse_perm(6, f.one_line()) == f
    assert parse_perm(6, f.cycle_str()) == f


@pytest.mark.parametrize("bad", ["(0 1", "(0 a)", "0,1,1", "(0 0)", "(0 7)"])
def test_malformed_permutations_rejected(bad):
    with pytest.raises(InvalidInputError):
        parse_perm(4, bad)


def test_one_line_size_mismatch():
    with pytest.raises(SizeMismatchError):
        parse_perm(4, "1,0,2")


def test_compose_size_mismatch():
    with pytest.raises(SizeMismatchError):
        compose(Perm.identity(3), Perm.identity(4))


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_group_matches_oracle(n):
    G = symmetric_group(n)
    assert len(G) == math.factorial(n)
    assert [p.images for p in G] == sorted(oracle.naive_symmetric_group(n))


def test_symmetric_group_cap():
    assert default_cap() == 7
    with pytest.raises(CapExceededError) as exc:
        symmetric_group(8)
    assert exc.value.cap == 7 and exc.value.size == 8
    with cap_override(3):
        with pytest.raises(CapExceededError):
            symmetric_group(4)
    assert len(symmetric_group(4)) == 24


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("UNIFLAB_CAP_N", "5")
    assert default_cap() == 5
    with pytest.raises(CapExceededError):
        symmetric_group(6)
    monkeypatch.setenv("UNIFLAB_CAP_N", "many")
    with pytest.raises(InvalidInputError):
        default_cap()


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_stabilizers_match_oracle_and_order(n):
    for gamma in all_partitions(n):
        st_ = stabilizer_of_partition(n, gamma)
        assert len(st_) == math.prod(math.factorial(len(b)) for b in gamma.blocks)
        assert sorted(p.images for p in st_) == sorted(oracle.naive_stabilizer(n, gamma.blocks))


def test_stabilizer_examples():
    st_ = stabilizer_of_partition(4, P(4, [0, 1], [2, 3]))
    assert {p.cycle_str() for p in st_} == {"()", "(0 1)", "(2 3)", "(0 1)(2 3)"}
    assert len(point_stabilizer(4, 0)) == 6
    assert all(p(0) == 0 for p in point_stabilizer(4, 0))
    assert len(stabilizer_of_partition(4, singletons(4))) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_constructed_subgroups_pass_audit(n):
    assert closure_audit(symmetric_group(n)) == []
    assert closure_audit(trivial_group(n)) == []
    for gamma in all_partitions(n):
        assert closure_audit(stabilizer_of_partition(n, gamma)) == []


def test_audit_rejects_non_subgroups():
    t = transposition(4, 0, 1)
    c = Perm.from_cycles(4, "(0 1 2)")
    with pytest.raises(NotASubgroupError, match="identity"):
        SubgroupSet(4, [t])
    with pytest.raises(NotASubgroupError, match="inverse"):
        SubgroupSet(4, [Perm.identity(4), c])
    with pytest.raises(NotASubgroupError, match="composition"):
        SubgroupSet(4, [Perm.identity(4), t, transposition(4, 1, 2)])
    klein = [Perm.identity(4)] + [Perm.from_cycles(4, s) for s in ("(0 1)(2 3)", "(0 2)(1 3)", "(0 3)(1 2)")]
    assert len(SubgroupSet(4, klein)) == 4


def test_trusted_audit_env(monkeypatch):
    # audited construction still succeeds for genuinely closed sets
    monkeypatch.setenv("UNIFLAB_AUDIT", "1")
    assert len(trivial_group(3)) == 1
    assert len(conjugate(transposition(4, 0, 2), point_stabilizer(4, 1))) == 6


def test_membership_and_index():
    G = symmetric_group(4)
    for i, p in enumerate(G):
        assert p in G
        assert G.index(p) == i
    st_ = point_stabilizer(4, 0)
    assert transposition(4, 0, 1) not in st_
    assert st_.issubset(G)
    assert not G.issubset(st_)


@settings(max_examples=100)
@given(st.data())
def test_conjugate_of_stabilizer_is_stabilizer_of_pushforward(data):
    n = data.draw(st.integers(1, 5))
    g = Perm(tuple(data.draw(st.permutations(range(n)))))
    labels = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    gamma = Partition.from_labels(labels)
    assert conjugate(g, stabilizer_of_partition(n, gamma)) == stabilizer_of_partition(n, pushforward(g, gamma))


@pytest.mark.parametrize("n", [3, 4])
def test_stabilizer_of_meet_is_intersection(n):
    parts = all_partitions(n)
    for a in parts:
        for b in parts:
            both = intersect(stabilizer_of_partition(n, a), stabilizer_of_partition(n, b))
            assert both == stabilizer_of_partition(n, meet(a, b))


def test_stabilizer_of_meet_n5_sample():
    parts = all_partitions(5)
    for a in parts[::3]:
        for b in parts[1::4]:
            both = intersect(stabilizer_of_partition(5, a), stabilizer_of_partition(5, b))
            assert both == stabilizer_of_partition(5, meet(a, b))


def test_product_set():
    H = point_stabilizer(4, 0)
    V = stabilizer_of_partition(4, P(4, [0, 1], [2, 3]))
    hv = product_set(H, V)
    expected = {compose(h, v).images for h in H for v in V}
    assert {p.images for p in hv} == expected
    assert len(hv) == 12
    assert isinstance(hv, PermSet)


def test_orbit_stabilizer():
    for n in range(1, 6):
        G = symmetric_group(n)
        for a in range(n):
            H = point_stabilizer(n, a)
            assert len(G) == len(H) * n
