"""Uniform continuity of real-valued functions on finite uniform spaces.

Every entourage of a finite uniformity contains the minimum entourage, so a
real function is uniformly continuous exactly when it is constant on each
block of the minimum partition.  Consequently UC(U1) <= UC(U2) holds iff
U2's minimum partition refines U1's.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal

import numpy as np

from .errors import InvalidInputError, SizeMismatchError
from .filters import PartitionFamily, minimum_subgroup
from .partitions import Partition, fiber_partition, refines, singletons, v_gamma
from .perms import SubgroupSet, compose_arrays, encode, intersect, symmetric_group
from .quotients import CosetSpace, build_cosets, finest_quotient_uniformity, phi
from .relations import FiniteUniformity
from .verdict import Verdict


@dataclass(frozen=True)
class CarrierFunction:
    values: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Iterable) -> "CarrierFunction":
        out = []
        for v in values:
            if isinstance(v, float):
                raise InvalidInputError("function values must be exact (int, Fraction or str), not float")
            out.append(Fraction(v))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, x: int) -> Fraction:
        return self.values[x]

    def to_list(self) -> list[str]:
        return [str(v) for v in self.values]


def indicator(m: int, block: Iterable[int]) -> CarrierFunction:
    s = set(block)
    return CarrierFunction(tuple(Fraction(1 if x in s else 0) for x in range(m)))


def is_uniformly_continuous(f: CarrierFunction, u: FiniteUniformity) -> bool:
    if len(f) != u.m:
        raise SizeMismatchError(f"function on {len(f)} points, uniformity on {u.m}")
    return all(len({f[x] for x in block}) == 1 for block in u.min_partition.blocks)


def check_va(f: CarrierFunction) -> Verdict:
    """Every real function is UC for the partition uniformity of its fibers."""
    gamma = fiber_partition(f.values)
    u = FiniteUniformity(len(f), gamma, {"source": "fiber partition"})
    uc = is_uniformly_continuous(f, u)
    # one entourage serves every epsilon: f is constant on its pairs
    single = all(f[x] == f[y] for x, y in v_gamma(gamma).pairs())
    return Verdict("verify-va", "partition-uniformity-uc", uc and single, details={
        "values": f.to_list(),
        "fiber_partition": gamma.to_lists(),
        "uniformly_continuous": uc,
        "single_entourage_suffices": single,
    })


Relation_ = Literal["equal", "subset", "superset", "incomparable"]


@dataclass
class Witness:
    function: CarrierFunction
    uc_on: str
    not_uc_on: str

    def to_dict(self) -> dict:
        return {"function": self.function.to_list(), "uc_on": self.uc_on, "not_uc_on": self.not_uc_on}


@dataclass
class UCComparison:
    relation: Relation_
    first_in_second: bool
    second_in_first: bool
    witnesses: list[Witness] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "first_in_second": self.first_in_second,
            "second_in_first": self.second_in_first,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def _split_witness(finer: Partition, coarser_needed: Partition) -> Partition | None:
    """A block of ``finer`` that some block of ``coarser_needed`` straddles."""
    lab = finer.labels
    for block in coarser_needed.blocks:
        ids = {lab[x] for x in block}
        if len(ids) > 1:
            return finer.blocks[min(ids)]
    return None


def uc_class_compare(u1: FiniteUniformity, u2: FiniteUniformity,
                     names: tuple[str, str] = ("first", "second")) -> UCComparison:
    """Compare UC(u1) and UC(u2), with verified witnesses for each failed inclusion."""
    if u1.m != u2.m:
        raise SizeMismatchError(f"uniformities on {u1.m} and {u2.m} points")
    p1, p2 = u1.min_partition, u2.min_partition
    one_in_two = refines(p2, p1)
    two_in_one = refines(p1, p2)
    witnesses = []
    if not one_in_two:
        # UC on u1 (constant on p1-blocks), not on u2 (a p2-block splits it)
        block = _split_witness(p1, p2)
        witnesses.append(Witness(indicator(u1.m, block), names[0], names[1]))
    if not two_in_one:
        block = _split_witness(p2, p1)
        witnesses.append(Witness(indicator(u1.m, block), names[1], names[0]))
    by_name = {names[0]: u1, names[1]: u2}
    for w in witnesses:
        if not is_uniformly_continuous(w.function, by_name[w.uc_on]) or \
                is_uniformly_continuous(w.function, by_name[w.not_uc_on]):
            raise AssertionError(f"witness {w.function.to_list()} failed verification")
    if one_in_two and two_in_one:
        rel = "equal"
    elif one_in_two:
        rel = "subset"
    elif two_in_one:
        rel = "superset"
    else:
        rel = "incomparable"
    return UCComparison(rel, one_in_two, two_in_one, witnesses)


def quotient_topology_partition(family: PartitionFamily, C: CosetSpace) -> Partition:
    """Blocks of the quotient topology on G/H.

    Open sets of G are unions of left cosets xN0, a family closed under
    complements, so the quotient topology is a partition topology: the
    finest one whose blocks have pi-preimages stable under right
    multiplication by N0.  Computed by union-find on coset ids.
    """
    n0 = intersect(minimum_subgroup(family), C.G)
    parent = list(range(C.m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    n = C.n
    base = C.coset_of
    for gen in n0.array:
        moved = C.project_codes(encode(compose_arrays(C.G.array, np.broadcast_to(gen, C.G.array.shape)), n))
        for a, b in set(zip(base.tolist(), moved.tolist())):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return Partition.from_labels([find(x) for x in range(C.m)])


def degeneracy(family: PartitionFamily) -> bool:
    """True when the family's meet is the singleton partition."""
    return family.overall_meet() == singletons(family.n)


@dataclass
class ItzkowitzReport:
    left: FiniteUniformity
    right: FiniteUniformity
    comparison: UCComparison
    quotient_topology: Partition
    left_compatible: bool
    right_compatible: bool
    uniformities_differ: bool
    gap_exhibited: bool
    banners: list[str]
    phi_map: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        out = {
            "left_min_partition": self.left.min_partition.to_lists(),
            "right_min_partition": self.right.min_partition.to_lists(),
            "left_discrete": self.left.is_discrete,
            "right_discrete": self.right.is_discrete,
            "uc_comparison": self.comparison.to_dict(),
            "every_left_uc_is_right_uc": self.comparison.first_in_second,
            "every_right_uc_is_left_uc": self.comparison.second_in_first,
            "uniformities_differ": self.uniformities_differ,
            "gap_exhibited": self.gap_exhibited,
            "quotient_topology_blocks": self.quotient_topology.to_lists(),
            "left_compatible_with_quotient_topology": self.left_compatible,
            "right_compatible_with_quotient_topology": self.right_compatible,
            "banners": list(self.banners),
        }
        if self.phi_map is not None:
            out["right_min_partition_on_points"] = _moved(self.right.min_partition, self.phi_map).to_lists()
        return out


def _moved(p: Partition, mapping: tuple[int, ...]) -> Partition:
    return Partition._canonical(len(mapping), ([mapping[x] for x in b] for b in p.blocks))


FINITE_BANNER = ("finite analogue: on a finite carrier UC classes coincide iff the "
                 "uniformities coincide, so only a one-sided gap can occur; the "
                 "uncountable counterexample is not reproduced")
FILTER_BANNER = "subgroup filter, not a group topology"
COLLAPSE_BANNER = ("degenerate family: the meet of all basis partitions is the singleton "
                   "partition, so the minimum subgroup is trivial and every derived "
                   "uniformity is discrete")


def itzkowitz_report(family: PartitionFamily, H: SubgroupSet, a: int | None = None,
                     G: SubgroupSet | None = None) -> ItzkowitzReport:
    G = symmetric_group(family.n) if G is None else G
    C = build_cosets(G, H)
    left = finest_quotient_uniformity("left", family, C)
    right = finest_quotient_uniformity("right", family, C)
    cmp = uc_class_compare(left, right, names=("left", "right"))
    top_part = quotient_topology_partition(family, C)
    differ = left != right
    gap = differ and cmp.first_in_second
    banners = [FINITE_BANNER]
    if family.mode == "filter-base":
        banners.append(FILTER_BANNER)
    if degeneracy(family):
        banners.append(COLLAPSE_BANNER)
    # on finite carriers equal UC classes force equal uniformities
    assert (cmp.relation == "equal") == (not differ)
    mapping = None
    if a is not None:
        mapping = phi(C, a)
    return ItzkowitzReport(left, right, cmp, top_part,
                           left.min_partition == top_part, right.min_partition == top_part,
                           differ, gap, banners, mapping)
