"""Permutations of n points and explicitly enumerated permutation sets.

Composition convention: ``compose(f, g)`` applies ``g`` first, so
``apply(compose(f, g), x) == f(g(x))``.  ``f * g`` means the same thing.

Sets of permutations are held as a lexicographically sorted ``(k, n)``
integer array together with a sorted array of integer codes (the image
sequence read as a base-n numeral), which preserves lexicographic order
and gives vectorized membership through ``searchsorted``.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceededError, InvalidInputError, NotASubgroupError, SizeMismatchError
from .partitions import Partition

DEFAULT_CAP_N = 7
HARD_MAX_N = 15  # codes must fit in int64
_CHUNK = 1 << 22


_cap_override: int | None = None


def default_cap() -> int:
    """Configured bound on n: override, then $UNIFLAB_CAP_N, then 7."""
    if _cap_override is not None:
        return _cap_override
    raw = os.environ.get("UNIFLAB_CAP_N")
    if raw is None:
        return DEFAULT_CAP_N
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"UNIFLAB_CAP_N must be an integer, got {raw!r}") from None


@contextmanager
def cap_override(cap: int | None):
    global _cap_override
    saved = _cap_override
    _cap_override = cap
    try:
        yield
    finally:
        _cap_override = saved


def _audit_trusted() -> bool:
    return os.environ.get("UNIFLAB_AUDIT", "") not in ("", "0")


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InvalidInputError(f"not a permutation: {self.images}")

    @classmethod
    def _trusted(cls, images) -> "Perm":
        p = object.__new__(cls)
        object.__setattr__(p, "images", tuple(int(x) for x in images))
        return p

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls._trusted(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: str | Sequence[Sequence[int]]) -> "Perm":
        """Build from cycle notation, e.g. ``"(0 1)(2 3)"`` or ``[[0, 1], [2, 3]]``."""
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        im = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < n:
                    raise InvalidInputError(f"point {x} out of range for n={n}")
                if x in seen:
                    raise InvalidInputError(f"point {x} appears in two cycles")
                seen.add(x)
            for i, x in enumerate(cyc):
                im[x] = cyc[(i + 1) % len(cyc)]
        return cls._trusted(im)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def inverse(self) -> "Perm":
        return inverse(self)

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.n):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_str(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def one_line(self) -> str:
        return ",".join(map(str, self.images))

    def __str__(self) -> str:
        return self.cycle_str()

    def __repr__(self) -> str:
        return f"Perm({self.cycle_str()}, n={self.n})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    text = text.strip()
    if _CYCLE_RE.sub("", text).strip():
        raise InvalidInputError(f"malformed cycle notation: {text!r}")
    out = []
    for body in _CYCLE_RE.findall(text):
        parts = body.replace(",", " ").split()
        try:
            out.append([int(p) for p in parts])
        except ValueError:
            raise InvalidInputError(f"malformed cycle notation: {text!r}") from None
    return [c for c in out if c]


def parse_one_line(text: str | Sequence[int]) -> Perm:
    """Parse one-line notation: comma-separated images, e.g. ``"1,0,3,2"``."""
    if isinstance(text, str):
        try:
            images = [int(p) for p in text.replace(" ", "").split(",") if p != ""]
        except ValueError:
            raise InvalidInputError(f"malformed one-line notation: {text!r}") from None
    else:
        images = [int(p) for p in text]
    return Perm(tuple(images))


def parse_perm(n: int, text: str | Sequence[int]) -> Perm:
    """Accept either notation; cycle notation is recognized by parentheses."""
    if isinstance(text, str) and "(" in text:
        return Perm.from_cycles(n, text)
    p = parse_one_line(text)
    if p.n != n:
        raise SizeMismatchError(f"permutation {text!r} has {p.n} points, expected {n}")
    return p


def _check(f: Perm, g: Perm) -> None:
    if f.n != g.n:
        raise SizeMismatchError(f"permutations on {f.n} and {g.n} points")


def compose(f: Perm, g: Perm) -> Perm:
    _check(f, g)
    fi = f.images
    return Perm._trusted(fi[x] for x in g.images)


def inverse(f: Perm) -> Perm:
    inv = [0] * f.n
    for i, x in enumerate(f.images):
        inv[x] = i
    return Perm._trusted(inv)


def apply(f: Perm, x: int) -> int:
    return f.images[x]


def transposition(n: int, i: int, j: int) -> Perm:
    im = list(range(n))
    im[i], im[j] = im[j], im[i]
    return Perm._trusted(im)


# ---------------------------------------------------------------------------
# array helpers

def _weights(n: int) -> np.ndarray:
    return np.array([n ** (n - 1 - i) for i in range(n)], dtype=np.int64)


def encode(arr: np.ndarray, n: int) -> np.ndarray:
    """Codes of permutations stored in the last axis of ``arr``."""
    if n == 0:
        return np.zeros(arr.shape[:-1], dtype=np.int64)
    return arr.astype(np.int64) @ _weights(n)


def compose_arrays(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Row-wise ``f[k] o g[k]`` (``g`` first) for broadcastable arrays."""
    return np.take_along_axis(f, g, axis=-1)


class PermSet:
    """A deduplicated, lexicographically ordered set of permutations."""

    __slots__ = ("n", "array", "codes", "_elements")

    def __init__(self, n: int, perms: Iterable[Perm] | np.ndarray):
        if n > HARD_MAX_N:
            raise CapExceededError(f"n={n} exceeds the hard maximum {HARD_MAX_N}", HARD_MAX_N, n)
        if isinstance(perms, np.ndarray):
            arr = perms.reshape(-1, n)
        else:
            rows = []
            for p in perms:
                if p.n != n:
                    raise SizeMismatchError(f"permutation on {p.n} points in a set on {n}")
                rows.append(p.images)
            arr = np.array(rows, dtype=np.int8).reshape(-1, n)
        arr = arr.astype(np.int8, copy=False)
        codes = encode(arr, n)
        codes, idx = np.unique(codes, return_index=True)
        self.n = n
        self.array = arr[idx]
        self.codes = codes
        self._elements = None

    @classmethod
    def _from_sorted(cls, n, array, codes):
        obj = cls.__new__(cls)
        obj.n, obj.array, obj.codes, obj._elements = n, array, codes, None
        return obj

    @property
    def elements(self) -> tuple[Perm, ...]:
        if self._elements is None:
            self._elements = tuple(Perm._trusted(r) for r in self.array.tolist())
        return self._elements

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def order(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def positions(self, codes: np.ndarray) -> np.ndarray:
        """Index of each code in this set, or -1 where absent."""
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, len(self.codes) - 1) if len(self.codes) else pos
        if not len(self.codes):
            return np.full(codes.shape, -1, dtype=np.int64)
        return np.where(self.codes[pos] == codes, pos, -1)

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        return self.positions(codes) >= 0

    def __contains__(self, p: Perm) -> bool:
        if p.n != self.n:
            return False
        return bool(self.contains_codes(encode(np.array(p.images), self.n)))

    def index(self, p: Perm) -> int:
        pos = int(self.positions(encode(np.array(p.images), self.n)))
        if pos < 0:
            raise KeyError(p)
        return pos

    def issubset(self, other: "PermSet") -> bool:
        return self.n == other.n and bool(np.all(other.contains_codes(self.codes)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash((self.n, self.codes.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, order={len(self)})"


class SubgroupSet(PermSet):
    """A permutation set closed under composition and inverse.

    Arbitrary element lists are audited on construction.  The constructors
    in this module build provably closed sets and pass ``trusted=True``;
    setting ``UNIFLAB_AUDIT=1`` forces the audit on those as well.
    """

    __slots__ = ()

    def __init__(self, n: int, perms: Iterable[Perm] | np.ndarray, trusted: bool = False):
        super().__init__(n, perms)
        if not trusted or _audit_trusted():
            problems = closure_audit(self)
            if problems:
                raise NotASubgroupError("; ".join(problems))

    @classmethod
    def _trusted_sorted(cls, n, array, codes):
        obj = cls._from_sorted(n, array, codes)
        if _audit_trusted():
            problems = closure_audit(obj)
            if problems:
                raise NotASubgroupError("; ".join(problems))
        return obj

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.n)


def closure_audit(v: PermSet) -> list[str]:
    """Return the list of closure failures (empty when ``v`` is a subgroup)."""
    problems = []
    n, k = v.n, len(v)
    if Perm.identity(n) not in v:
        problems.append("identity missing")
    inv = np.argsort(v.array, axis=1).astype(np.int8)
    missing = ~v.contains_codes(encode(inv, n))
    if missing.any():
        p = Perm._trusted(v.array[int(np.argmax(missing))].tolist())
        problems.append(f"not closed under inverse: {p}")
    step = max(1, _CHUNK // max(1, k * max(n, 1)))
    for start in range(0, k, step):
        block = v.array[start:start + step]
        prod = compose_arrays(block[:, None, :], np.broadcast_to(v.array[None, :, :], (len(block), k, n)))
        bad = ~v.contains_codes(encode(prod, n))
        if bad.any():
            a, b = np.argwhere(bad)[0]
            f = Perm._trusted(block[a].tolist())
            g = Perm._trusted(v.array[b].tolist())
            problems.append(f"not closed under composition: {f} * {g}")
            break
    return problems


def _check_cap(n: int, cap: int | None) -> None:
    cap = default_cap() if cap is None else cap
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the configured cap {cap}", cap, n)
    if n > HARD_MAX_N:
        raise CapExceededError(f"n={n} exceeds the hard maximum {HARD_MAX_N}", HARD_MAX_N, n)


@lru_cache(maxsize=16)
def _symmetric_group(n: int) -> SubgroupSet:
    arr = np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)
    return SubgroupSet._trusted_sorted(n, arr, encode(arr, n))


def symmetric_group(n: int, cap: int | None = None) -> SubgroupSet:
    """All n! permutations in lexicographic order."""
    _check_cap(n, cap)
    return _symmetric_group(n)


def trivial_group(n: int) -> SubgroupSet:
    arr = np.arange(n, dtype=np.int8).reshape(1, n)
    return SubgroupSet._trusted_sorted(n, arr, encode(arr, n))


@lru_cache(maxsize=4096)
def _stabilizer(gamma: Partition) -> SubgroupSet:
    n = gamma.n
    factors = [list(itertools.permutations(block)) for block in gamma.blocks]
    rows = []
    for choice in itertools.product(*factors):
        im = [0] * n
        for block, images in zip(gamma.blocks, choice):
            for x, y in zip(block, images):
                im[x] = y
        rows.append(im)
    arr = np.array(rows, dtype=np.int8).reshape(-1, n)
    codes = encode(arr, n)
    order = np.argsort(codes)
    return SubgroupSet._trusted_sorted(n, arr[order], codes[order])


def stabilizer_of_partition(n: int, gamma: Partition) -> SubgroupSet:
    """Permutations mapping every block of ``gamma`` onto itself."""
    if gamma.n != n:
        raise SizeMismatchError(f"partition on {gamma.n} points, expected {n}")
    order = math.prod(math.factorial(len(b)) for b in gamma.blocks)
    limit = math.factorial(default_cap())
    if order > limit:
        raise CapExceededError(f"stabilizer order {order} exceeds {limit}", limit, order)
    return _stabilizer(gamma)


def point_stabilizer(n: int, a: int) -> SubgroupSet:
    """Permutations fixing ``a``, built as the stabilizer of {a} | rest."""
    if not 0 <= a < n:
        raise InvalidInputError(f"point {a} out of range for n={n}")
    rest = [x for x in range(n) if x != a]
    return stabilizer_of_partition(n, Partition._canonical(n, [[a], rest] if rest else [[a]]))


def conjugate(g: Perm, v: SubgroupSet) -> SubgroupSet:
    """The subgroup {g v g^-1 : v in V}."""
    if g.n != v.n:
        raise SizeMismatchError(f"permutation on {g.n} points, subgroup on {v.n}")
    ga = np.array(g.images, dtype=np.int8)
    ginv = np.argsort(ga).astype(np.int8)
    # (g v g^-1)[i] = g[v[g^-1[i]]]
    arr = ga[v.array[:, ginv]]
    codes = encode(arr, v.n)
    order = np.argsort(codes)
    return SubgroupSet._trusted_sorted(v.n, arr[order], codes[order])


def intersect(v: SubgroupSet, w: SubgroupSet) -> SubgroupSet:
    if v.n != w.n:
        raise SizeMismatchError(f"subgroups on {v.n} and {w.n} points")
    mask = w.contains_codes(v.codes)
    return SubgroupSet._trusted_sorted(v.n, v.array[mask], v.codes[mask])


def product_set(v: PermSet, w: PermSet) -> PermSet:
    """The set {v * w : v in V, w in W}; generally not a subgroup."""
    if v.n != w.n:
        raise SizeMismatchError(f"sets on {v.n} and {w.n} points")
    n, kw = v.n, len(w)
    step = max(1, _CHUNK // max(1, kw * max(n, 1)))
    seen = []
    for start in range(0, len(v), step):
        block = v.array[start:start + step]
        prod = compose_arrays(np.broadcast_to(block[:, None, :], (len(block), kw, n)),
                              np.broadcast_to(w.array[None, :, :], (len(block), kw, n)))
        seen.append(prod.reshape(-1, n))
    arr = np.concatenate(seen) if seen else np.zeros((0, n), dtype=np.int8)
    return PermSet(n, arr)
