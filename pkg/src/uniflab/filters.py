"""Families of partitions presenting a neighborhood base of stabilizer subgroups.

A family in ``filter-base`` mode is closed under meets, so the stabilizers
form a filter base of subgroups.  In ``group-topology`` mode it is also
closed under pushforward by every permutation, which makes the filter
conjugation invariant and hence a base at the identity for a group
topology on S_n.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal, Sequence

from .errors import CapExceededError, InvalidInputError, SizeMismatchError
from .partitions import Partition, all_partitions, meet, meet_all, pushforward, top
from .perms import (
    Perm,
    SubgroupSet,
    closure_audit,
    conjugate,
    intersect,
    inverse,
    stabilizer_of_partition,
    symmetric_group,
    transposition,
)
from .verdict import Verdict

Mode = Literal["filter-base", "group-topology"]
MODES = ("filter-base", "group-topology")
DEFAULT_FAMILY_CAP = 10_000


def adjacent_transpositions(n: int) -> list[Perm]:
    return [transposition(n, i, i + 1) for i in range(n - 1)]


@dataclass(frozen=True)
class PartitionFamily:
    n: int
    members: tuple[Partition, ...]
    mode: Mode = "filter-base"

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidInputError(f"unknown family mode {self.mode!r}")
        if not self.members:
            raise InvalidInputError("a partition family must be nonempty")
        for p in self.members:
            if p.n != self.n:
                raise SizeMismatchError(f"member {p} is not a partition of {self.n} points")

    @classmethod
    def of(cls, members: Iterable[Partition], mode: Mode = "filter-base") -> "PartitionFamily":
        """Wrap explicit members, checking the mode's closure property."""
        members = sorted(set(members), key=lambda p: p.blocks)
        if not members:
            raise InvalidInputError("a partition family must be nonempty")
        fam = cls(members[0].n, tuple(members), mode)
        missing = fam.closure_defects()
        if missing:
            raise InvalidInputError(f"family is not closed for mode {mode}: {missing[0]}")
        return fam

    @classmethod
    def all_partitions(cls, n: int) -> "PartitionFamily":
        return cls(n, tuple(all_partitions(n)), "group-topology")

    def __contains__(self, p: Partition) -> bool:
        return p in self._member_set

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def closure_defects(self) -> list[str]:
        members = self._member_set
        out = []
        for i, a in enumerate(self.members):
            for b in self.members[i + 1:]:
                if meet(a, b) not in members:
                    out.append(f"meet of {a} and {b} is missing")
        if self.mode == "group-topology":
            for a in self.members:
                for g in adjacent_transpositions(self.n):
                    if pushforward(g, a) not in members:
                        out.append(f"pushforward of {a} by {g} is missing")
        return out

    def overall_meet(self) -> Partition:
        return meet_all(self.members)


def close_family(seeds: Sequence[Partition], mode: Mode = "filter-base",
                 cap: int = DEFAULT_FAMILY_CAP) -> PartitionFamily:
    """Least family containing ``seeds`` and closed under the mode's operations."""
    if mode not in MODES:
        raise InvalidInputError(f"unknown family mode {mode!r}")
    seeds = list(seeds)
    if not seeds:
        raise InvalidInputError("close_family needs at least one seed")
    n = seeds[0].n
    for s in seeds:
        if s.n != n:
            raise SizeMismatchError("seeds live on different carriers")
    # pushforward-closure under generators is closure under the whole group
    gens = adjacent_transpositions(n) if mode == "group-topology" else []
    members: list[Partition] = []
    seen: set[Partition] = set()
    work = deque()

    def add(p: Partition) -> None:
        if p in seen:
            return
        seen.add(p)
        members.append(p)
        work.append(p)
        if len(seen) > cap:
            raise CapExceededError(
                f"family closure exceeded cap {cap} (current size {len(seen)})", cap, len(seen))

    for s in seeds:
        add(s)
    while work:
        p = work.popleft()
        for g in gens:
            add(pushforward(g, p))
        for q in list(members):
            add(meet(p, q))
    return PartitionFamily(n, tuple(sorted(members, key=lambda p: p.blocks)), mode)


def minimum_subgroup(family: PartitionFamily) -> SubgroupSet:
    """The intersection of all basis stabilizers, as St of the overall meet."""
    return stabilizer_of_partition(family.n, family.overall_meet())


def stabilizer_contained(a: Partition, b: Partition) -> bool:
    """Explicit subgroup containment St_a <= St_b."""
    return stabilizer_of_partition(a.n, a).issubset(stabilizer_of_partition(b.n, b))


def topology_axiom_report(family: PartitionFamily, full_quantification: bool = False) -> Verdict:
    """Check the neighborhood-base axioms on the explicit stabilizer subgroups.

    Conjugation invariance is checked over the adjacent transpositions by
    default: if it holds for generators s and t it holds for s*t, since
    the witnessing members can be chained.  ``full_quantification`` checks
    every element of S_n instead (n <= 4 only).
    """
    n = family.n
    members = family.members
    stab = {p: stabilizer_of_partition(n, p) for p in members}

    subgroup_ok = all(not closure_audit(v) for v in stab.values())

    if full_quantification:
        if n > 4:
            raise CapExceededError("full quantification is limited to n <= 4", 4, n)
        group = list(symmetric_group(n, cap=4))
    else:
        group = adjacent_transpositions(n)
    conj_ok, conj_witness = True, None
    for gamma in members:
        target = stab[gamma]
        for g in group:
            gi = inverse(g)
            candidate = pushforward(g, gamma)
            order = [candidate] if candidate in family else []
            order += [b for b in members if b != candidate]
            if not any(conjugate(gi, stab[b]).issubset(target) for b in order):
                conj_ok = False
                conj_witness = {"g": g.cycle_str(), "gamma": gamma.to_lists()}
                break
        if not conj_ok:
            break

    inter_ok, inter_witness = True, None
    for i, gamma in enumerate(members):
        for beta in members[i:]:
            both = intersect(stab[gamma], stab[beta])
            candidate = meet(gamma, beta)
            order = [candidate] if candidate in family else []
            order += [a for a in members if a != candidate]
            if not any(stab[a].issubset(both) for a in order):
                inter_ok = False
                inter_witness = {"gamma": gamma.to_lists(), "beta": beta.to_lists()}
                break
        if not inter_ok:
            break

    core = stab[members[0]]
    for p in members[1:]:
        core = intersect(core, stab[p])
    hausdorff = len(core) == 1

    details = {
        "family_size": len(members),
        "mode": family.mode,
        "conjugation_quantifier": "all" if full_quantification else "adjacent-transpositions",
        "axioms": {
            "subgroups": subgroup_ok,
            "conjugation": conj_ok,
            "intersection": inter_ok,
            "hausdorff": hausdorff,
        },
        "minimum_subgroup_order": len(core),
    }
    if conj_witness:
        details["conjugation_witness"] = conj_witness
    if inter_witness:
        details["intersection_witness"] = inter_witness
    passed = subgroup_ok and conj_ok and inter_ok and hausdorff
    return Verdict("topology-axioms", "stabilizer-topology", passed, details=details)


def separation_witness(f: Perm) -> Partition:
    """Partition {x}, {f(x)}, rest whose stabilizer excludes ``f``."""
    x = next((i for i, y in enumerate(f.images) if y != i), None)
    if x is None:
        raise InvalidInputError("the identity has no separation witness")
    fx = f(x)
    rest = [i for i in range(f.n) if i not in (x, fx)]
    blocks = [[x], [fx]] + ([rest] if rest else [])
    gamma = Partition._canonical(f.n, blocks)
    assert f not in stabilizer_of_partition(f.n, gamma)
    return gamma


def pointwise_basis(n: int, points: Iterable[int]) -> Partition:
    """Singletons on ``points`` plus the complement as one block."""
    pts = sorted(set(points))
    for x in pts:
        if not 0 <= x < n:
            raise InvalidInputError(f"point {x} out of range for n={n}")
    rest = [x for x in range(n) if x not in pts]
    blocks = [[x] for x in pts] + ([rest] if rest else [])
    return Partition._canonical(n, blocks) if blocks else top(n)
