"""Partitions of the finite carrier {0, ..., n-1}.

A :class:`Partition` is stored in canonical form: every block is an
ascending tuple, and blocks are ordered by their minimum element.  Two
partitions are therefore equal exactly when their ``blocks`` tuples are.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

from .errors import PartitionError, SizeMismatchError

if TYPE_CHECKING:
    from .perms import Perm
    from .relations import Relation


@dataclass(frozen=True)
class Partition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, n: int, raw: Iterable[Iterable[int]]) -> "Partition":
        """Validate ``raw`` as a partition of ``range(n)`` and canonicalize it."""
        if n < 0:
            raise PartitionError(f"carrier size must be non-negative, got {n}")
        owner = [-1] * n
        blocks = []
        for bi, block in enumerate(raw):
            block = sorted(set(int(x) for x in block))
            if not block:
                raise PartitionError(f"block {bi} is empty", index=bi)
            for x in block:
                if not 0 <= x < n:
                    raise PartitionError(f"index {x} out of range for n={n}", index=x)
                if owner[x] != -1:
                    raise PartitionError(f"overlap at index {x}", index=x)
                owner[x] = bi
            blocks.append(tuple(block))
        for x, o in enumerate(owner):
            if o == -1:
                raise PartitionError(f"gap: index {x} is not covered", index=x)
        return cls._canonical(n, blocks)

    @classmethod
    def _canonical(cls, n: int, blocks: Iterable[Sequence[int]]) -> "Partition":
        # trusted path: blocks already partition range(n)
        return cls(n, tuple(sorted(tuple(sorted(b)) for b in blocks)))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        return cls(len(labels), tuple(sorted(tuple(g) for g in groups.values())))

    @cached_property
    def labels(self) -> tuple[int, ...]:
        """Block index of every point, in canonical block order."""
        lab = [0] * self.n
        for bi, block in enumerate(self.blocks):
            for x in block:
                lab[x] = bi
        return tuple(lab)

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self.labels[x]]

    def same_block(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    @property
    def is_singletons(self) -> bool:
        return len(self.blocks) == self.n

    @property
    def is_top(self) -> bool:
        return len(self.blocks) <= 1

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def to_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "[" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "]"


def singletons(n: int) -> Partition:
    return Partition(n, tuple((x,) for x in range(n)))


def top(n: int) -> Partition:
    return Partition(n, (tuple(range(n)),) if n else ())


def _check_same(a: Partition, b: Partition) -> None:
    if a.n != b.n:
        raise SizeMismatchError(f"carrier sizes differ: {a.n} vs {b.n}")


def meet(gamma: Partition, beta: Partition) -> Partition:
    """Common refinement: blocks are the nonempty intersections A & B."""
    _check_same(gamma, beta)
    lg, lb = gamma.labels, beta.labels
    groups: dict[tuple[int, int], list[int]] = {}
    for x in range(gamma.n):
        groups.setdefault((lg[x], lb[x]), []).append(x)
    return Partition._canonical(gamma.n, groups.values())


def meet_all(parts: Iterable[Partition]) -> Partition:
    it = iter(parts)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("meet of an empty family is undefined") from None
    for p in it:
        acc = meet(acc, p)
    return acc


def refines(gamma: Partition, beta: Partition) -> bool:
    """True iff every block of ``gamma`` lies inside a block of ``beta``."""
    _check_same(gamma, beta)
    lb = beta.labels
    return all(len({lb[x] for x in block}) == 1 for block in gamma.blocks)


def _check_perm(g: "Perm", gamma: Partition) -> None:
    if len(g.images) != gamma.n:
        raise SizeMismatchError(f"permutation of {len(g.images)} points vs carrier {gamma.n}")


def pushforward(g: "Perm", gamma: Partition) -> Partition:
    """The partition {g(A) : A in gamma}."""
    _check_perm(g, gamma)
    im = g.images
    return Partition._canonical(gamma.n, ([im[x] for x in block] for block in gamma.blocks))


def pullback(g: "Perm", gamma: Partition) -> Partition:
    """The partition {g^-1(A) : A in gamma}, computed as preimages."""
    _check_perm(g, gamma)
    lab = gamma.labels
    im = g.images
    # x lies in g^-1(A) iff g(x) lies in A
    return Partition.from_labels([lab[im[x]] for x in range(gamma.n)])


def pullback_blocks(g: "Perm", gamma: Partition) -> tuple[int, ...]:
    """Preimages g^-1(A) kept attached to their blocks A.

    Entry x is the canonical index of the block containing g(x).  Equality
    of these tuples for f and g means f^-1(A) = g^-1(A) for every block A,
    which is stronger than equality of the pulled-back partitions.
    """
    _check_perm(g, gamma)
    lab = gamma.labels
    return tuple(lab[y] for y in g.images)


def fiber_partition(f: Sequence | Mapping) -> Partition:
    """Partition of the carrier into the nonempty fibers of ``f``."""
    values = [f[x] for x in range(len(f))]
    ids: dict[object, int] = {}
    return Partition.from_labels([ids.setdefault(v, len(ids)) for v in values])


def v_gamma(gamma: Partition) -> "Relation":
    """The entourage: union of A x A over the blocks A of ``gamma``."""
    from .relations import Relation

    rows = [0] * gamma.n
    for block in gamma.blocks:
        mask = 0
        for x in block:
            mask |= 1 << x
        for x in block:
            rows[x] = mask
    return Relation(gamma.n, tuple(rows))


def all_partitions(n: int) -> list[Partition]:
    """Every partition of range(n), via restricted growth strings."""
    out: list[Partition] = []
    if n == 0:
        return [Partition(0, ())]
    labels = [0] * n

    def rec(i: int, used: int) -> None:
        if i == n:
            out.append(Partition.from_labels(labels))
            return
        for lab in range(used + 1):
            labels[i] = lab
            rec(i + 1, max(used, lab + 1))

    labels[0] = 0
    rec(1, 1)
    return sorted(out, key=lambda p: p.blocks)
