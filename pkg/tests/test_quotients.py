import random

import numpy as np
import pytest

from conftest import random_perm, random_subgroup
from uniflab import oracle
from uniflab.errors import CapExceededError, InvalidInputError, NotASubgroupError, SizeMismatchError
from uniflab.filters import PartitionFamily, close_family
from uniflab.partitions import Partition, all_partitions, pullback, pullback_blocks, v_gamma
from uniflab.perms import (
    Perm,
    PermSet,
    conjugate,
    point_stabilizer,
    stabilizer_of_partition,
    symmetric_group,
    trivial_group,
)
from uniflab.quotients import (
    CosetSpace,
    build_cosets,
    check_finest_contract,
    check_maile,
    check_pahulu,
    check_phi_equivariance,
    check_tolu_equivalence,
    direct_pahulu_relation,
    finest_quotient_uniformity,
    image,
    image_left,
    image_right,
    is_open,
    lemma_tolu_construct,
    left_entourage,
    phi,
    right_entourage,
)
from uniflab.relations import diagonal


def P(n, *blocks):
    return Partition.from_blocks(n, blocks)


def pairs(r):
    return set(r.pairs())


def flagship():
    G = symmetric_group(4)
    return G, build_cosets(G, point_stabilizer(4, 0)), close_family([P(4, [0, 1], [2, 3])])


def test_flagship_cosets():
    G, C, _ = flagship()
    assert C.m == 4
    assert [C.rep(i).cycle_str() for i in range(4)] == ["()", "(0 1)", "(0 2 1)", "(0 3 2 1)"]
    assert C.identity_coset == 0
    assert phi(C, 0) == (0, 1, 2, 3)


def test_cosets_match_oracle():
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(1, 5)
        G = symmetric_group(n)
        H = random_subgroup(rng, n)
        C = build_cosets(G, H)
        naive = oracle.naive_cosets([p.images for p in G], [h.images for h in H])
        assert C.m == len(naive) == len(G) // len(H)
        for i, coset in enumerate(naive):
            assert {p.images for p in C.members(i)} == set(coset)
            assert C.rep(i).images == min(coset)


def test_build_cosets_rejects_non_subgroup():
    G = symmetric_group(3)
    bogus = PermSet(3, [Perm.identity(3), Perm.from_cycles(3, "(0 1 2)")])
    with pytest.raises(NotASubgroupError):
        build_cosets(G, bogus)
    with pytest.raises(SizeMismatchError):
        build_cosets(G, trivial_group(4))


def test_entourages_on_the_group():
    G = symmetric_group(3)
    V = point_stabilizer(3, 0)
    left = left_entourage(V, G)
    right = right_entourage(V, G)
    els = list(G)
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            assert ((i, j) in left) == ((x.inverse() * y) in V)
            assert ((i, j) in right) == ((x * y.inverse()) in V)


def test_images_match_oracle_random_n4():
    rng = random.Random(8)
    G = symmetric_group(4)
    for _ in range(50):
        H = random_subgroup(rng, 4)
        V = random_subgroup(rng, 4) if rng.random() < 0.5 else \
            stabilizer_of_partition(4, Partition.from_labels([rng.randrange(4) for _ in range(4)]))
        C = build_cosets(G, H)
        vset = [v.images for v in V]
        hset = [h.images for h in H]
        for side in ("left", "right"):
            assert pairs(image(side, V, C)) == oracle.naive_image(side, vset, hset, n=4)


def test_flagship_images():
    G, C, fam = flagship()
    V = stabilizer_of_partition(4, P(4, [0, 1], [2, 3]))
    assert len(image_left(V, C)) == 16
    assert pairs(image_right(V, C)) == pairs(v_gamma(P(4, [0, 1], [2, 3])))


def test_images_independent_of_representatives():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(2, 5)
        G = symmetric_group(n)
        H = random_subgroup(rng, n)
        V = random_subgroup(rng, n)
        C = build_cosets(G, H)
        reps = np.array([rng.choice(C.members(i)).images for i in range(C.m)], dtype=np.int8).reshape(-1, n)
        shuffled = CosetSpace(C.G, C.H, reps, C.coset_of)
        for side in ("left", "right"):
            assert image(side, V, C) == image(side, V, shuffled)


def test_image_side_error():
    _, C, _ = flagship()
    with pytest.raises(InvalidInputError):
        image("middle", C.H, C)


def test_finest_uniformity_flagship():
    _, C, fam = flagship()
    left = finest_quotient_uniformity("left", fam, C)
    right = finest_quotient_uniformity("right", fam, C)
    assert left.min_partition.to_lists() == [[0, 1, 2, 3]]
    assert right.min_partition.to_lists() == [[0, 1], [2, 3]]
    assert right.provenance["minimum_subgroup_order"] == 4
    assert right.provenance["side"] == "right"
    for side in ("left", "right"):
        assert check_finest_contract(side, fam, C).passed


def test_finest_uniformity_matches_oracle_end_to_end():
    rng = random.Random(12)
    for _ in range(25):
        n = rng.randint(2, 4)
        seeds = [Partition.from_labels([rng.randrange(n) for _ in range(n)]) for _ in range(rng.randint(1, 2))]
        mode = rng.choice(["filter-base", "group-topology"])
        fam = close_family(seeds, mode)
        H = random_subgroup(rng, n)
        C = build_cosets(symmetric_group(n), H)
        blocks = [p.blocks for p in fam.members]
        hset = [h.images for h in H]
        for side in ("left", "right"):
            u = finest_quotient_uniformity(side, fam, C)
            assert [list(b) for b in u.min_partition.blocks] == \
                oracle.naive_quotient_classes(side, blocks, hset, n)
            if C.m <= 8:
                assert check_finest_contract(side, fam, C).passed


def test_finest_contract_cap():
    G = symmetric_group(4)
    C = build_cosets(G, trivial_group(4))
    fam = close_family([P(4, [0, 1], [2, 3])])
    with pytest.raises(CapExceededError):
        check_finest_contract("left", fam, C, max_cosets=8)


def test_phi_and_equivariance():
    for n in (2, 3, 4, 5):
        G = symmetric_group(n)
        for a in range(n):
            C = build_cosets(G, point_stabilizer(n, a))
            ph = phi(C, a)
            assert sorted(ph) == list(range(n))
            for i in range(C.m):
                assert C.rep(i)(a) == ph[i]
            assert check_phi_equivariance(C, a)


def test_phi_requires_point_stabilizer():
    G = symmetric_group(4)
    C = build_cosets(G, stabilizer_of_partition(4, P(4, [0, 1], [2, 3])))
    with pytest.raises(InvalidInputError):
        phi(C, 0)


def test_maile_on_open_subgroups():
    fam = PartitionFamily.all_partitions(4)
    G = symmetric_group(4)
    for gamma in all_partitions(4):
        C = build_cosets(G, stabilizer_of_partition(4, gamma))
        assert is_open(C.H, fam) is not None
        v = check_maile(fam, C)
        assert v.passed and v.applicable
        assert image_left(C.H, C) == diagonal(C.m)
        assert finest_quotient_uniformity("left", fam, C).is_discrete


def test_maile_not_applicable_when_not_open():
    fam = close_family([P(4, [0, 1], [2, 3])])
    C = build_cosets(symmetric_group(4), point_stabilizer(4, 0))
    v = check_maile(fam, C)
    assert not v.applicable
    assert v.details["open"] is False


def test_tolu_construct_examples():
    gamma = P(4, [0, 1], [2, 3])
    f = Perm.identity(4)
    g = lemma_tolu_construct(f, 0, 1)
    assert g(0) == 1
    assert pullback(g, gamma) == pullback(f, gamma)
    assert pullback_blocks(g, gamma) == pullback_blocks(f, gamma)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tolu_equivalence_exhaustive(n):
    for gamma in all_partitions(n):
        for a in range(n):
            v = check_tolu_equivalence(gamma, a)
            assert v.passed, v.details


def test_unlabeled_pullback_is_too_weak():
    # same preimage partition, but 0 lands in different blocks
    gamma = P(4, [0, 1], [2, 3])
    f, g = Perm.identity(4), Perm.from_cycles(4, "(0 2)(1 3)")
    assert pullback(f, gamma) == pullback(g, gamma)
    assert not gamma.same_block(f(0), g(0))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pahulu_all_instances(n):
    for gamma in all_partitions(n):
        for a in range(n):
            v = check_pahulu(gamma, a)
            assert v.passed, v.details
            assert v.details["image_reflexive"] and v.details["image_symmetric"]


def test_direct_relation_matches_naive_right_image():
    gamma = P(4, [0, 2], [1, 3])
    C = build_cosets(symmetric_group(4), point_stabilizer(4, 1))
    naive = oracle.naive_image("right", oracle.naive_stabilizer(4, gamma.blocks),
                               [h.images for h in C.H], n=4)
    assert pairs(direct_pahulu_relation(gamma, C)) == naive


def test_conjugate_point_stabilizer():
    rng = random.Random(1)
    for _ in range(10):
        g = random_perm(rng, 5)
        assert conjugate(g, point_stabilizer(5, 2)) == point_stabilizer(5, g(2))
