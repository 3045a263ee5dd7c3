"""Brute-force reference implementations.

Everything here works on plain tuples, sets and lists and imports nothing
from the optimized modules, so agreement between the two is evidence
rather than tautology.  Every function enforces a hard size cap; exceeding
it raises instead of silently skipping.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import CapExceededError


def _cap(name: str, size: int, cap: int) -> None:
    if size > cap:
        raise CapExceededError(f"oracle {name}: size {size} exceeds cap {cap}", cap, size)


def _mul(f, g):
    # g first
    return tuple(f[x] for x in g)


def _inv(f):
    out = [0] * len(f)
    for i, x in enumerate(f):
        out[x] = i
    return tuple(out)


def naive_symmetric_group(n: int) -> list[tuple[int, ...]]:
    _cap("symmetric_group", n, 6)
    return list(itertools.permutations(range(n)))


def naive_stabilizer(n: int, blocks) -> list[tuple[int, ...]]:
    """Filter S_n by: every block B satisfies f(B) = B."""
    _cap("stabilizer", n, 6)
    blocks = [frozenset(b) for b in blocks]
    return [f for f in naive_symmetric_group(n)
            if all(frozenset(f[x] for x in b) == b for b in blocks)]


def naive_cosets(group, sub) -> list[frozenset]:
    """Left cosets gH ordered by their lexicographically least member."""
    sub = list(sub)
    cosets = {frozenset(_mul(g, h) for h in sub) for g in group}
    return sorted(cosets, key=min)


def naive_image(side: str, V, H, group=None, n: int | None = None) -> set[tuple[int, int]]:
    """pi x pi image of the left/right entourage of V, by a double loop over G x G."""
    V = set(map(tuple, V))
    H = [tuple(h) for h in H]
    if n is None:
        n = len(next(iter(V)))
    _cap("image", n, 5)
    group = naive_symmetric_group(n) if group is None else [tuple(g) for g in group]
    cosets = naive_cosets(group, H)
    where = {g: i for i, c in enumerate(cosets) for g in c}
    out = set()
    for x in group:
        xi = _inv(x)
        for y in group:
            if side == "left":
                ok = _mul(xi, y) in V
            elif side == "right":
                ok = _mul(x, _inv(y)) in V
            else:
                raise ValueError(side)
            if ok:
                out.add((where[x], where[y]))
    return out


def naive_transitive_closure(pairs, m: int) -> set[tuple[int, int]]:
    """Add (x, z) whenever (x, y) and (y, z) are present, until nothing changes."""
    _cap("transitive_closure", m, 200)
    rel = set(pairs)
    changed = True
    while changed:
        changed = False
        for x in range(m):
            for y in range(m):
                if (x, y) not in rel:
                    continue
                for z in range(m):
                    if (y, z) in rel and (x, z) not in rel:
                        rel.add((x, z))
                        changed = True
    return rel


def naive_classes(pairs, m: int) -> list[list[int]]:
    """Classes of an equivalence relation given as pairs, by first element."""
    seen = set()
    out = []
    for x in range(m):
        if x in seen:
            continue
        cls = sorted(y for y in range(m) if (x, y) in pairs)
        seen.update(cls)
        out.append(cls)
    return out


def naive_uc(values, base, epsilons=None) -> bool:
    """Literal epsilon-delta test over a uniformity base.

    For each epsilon some base member U must satisfy |f(x) - f(y)| < epsilon
    for all (x, y) in U.  The epsilons default to half of every nonzero gap
    between values, which already separates every pair of distinct values.
    """
    values = [Fraction(v) for v in values]
    _cap("uc", len(values), 64)
    if epsilons is None:
        gaps = {abs(a - b) for a in values for b in values if a != b}
        epsilons = sorted({g / 2 for g in gaps}) or [Fraction(1)]
    base = [set(u) for u in base]
    for eps in epsilons:
        if not any(all(abs(values[x] - values[y]) < eps for x, y in u) for u in base):
            return False
    return True


def naive_quotient_classes(side: str, family_blocks, H, n: int) -> list[list[int]]:
    """End-to-end finest quotient uniformity by brute force.

    N0 is the intersection of the filtered stabilizers, its side entourage
    is projected by a double loop, and the image is closed transitively.
    """
    _cap("quotient", n, 5)
    n0 = None
    for blocks in family_blocks:
        st = set(naive_stabilizer(n, blocks))
        n0 = st if n0 is None else n0 & st
    img = naive_image(side, n0, H, n=n)
    m = len(naive_cosets(naive_symmetric_group(n), H))
    return naive_classes(naive_transitive_closure(img, m), m)
