"""Left coset spaces G/H, entourage images, and the quotient uniformities.

Write pi for the projection x -> xH.  For a subgroup V of G:

* the left entourage ``{(x, y) : x^-1 y in V}`` projects onto
  ``{(xH, yH) : x^-1 y in HVH}``, i.e. ``yH`` ranges over pi(x H V);
* the right entourage ``{(x, y) : x y^-1 in V}`` projects onto
  ``{(xH, yH) : y in VxH}``, i.e. ``yH`` ranges over pi(V x).

Both conditions are independent of the chosen coset representatives.  The
finest uniformity on G/H making pi uniformly continuous is the up-set of
the transitive closure of the image of the minimum entourage.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import CapExceededError, InvalidInputError, NotASubgroupError, SizeMismatchError
from .filters import PartitionFamily, minimum_subgroup
from .partitions import Partition, all_partitions, pullback_blocks, refines, v_gamma
from .perms import (
    Perm,
    PermSet,
    SubgroupSet,
    _CHUNK,
    closure_audit,
    compose_arrays,
    encode,
    intersect,
    point_stabilizer,
    product_set,
    stabilizer_of_partition,
    symmetric_group,
)
from .relations import (
    FiniteUniformity,
    Relation,
    diagonal,
    is_reflexive,
    is_symmetric,
    to_partition,
    transitive_closure,
)
from .verdict import Verdict

Side = Literal["left", "right"]


@dataclass(frozen=True, eq=False)
class CosetSpace:
    G: SubgroupSet
    H: SubgroupSet
    reps: np.ndarray       # (m, n) lexicographically least member of each coset
    coset_of: np.ndarray   # coset id of G.array[k]

    @property
    def m(self) -> int:
        return len(self.reps)

    @property
    def n(self) -> int:
        return self.G.n

    def rep(self, i: int) -> Perm:
        return Perm._trusted(self.reps[i].tolist())

    def project_codes(self, codes: np.ndarray) -> np.ndarray:
        pos = self.G.positions(codes)
        if np.any(pos < 0):
            raise InvalidInputError("element outside the ambient group")
        return self.coset_of[pos]

    def project(self, p: Perm) -> int:
        return int(self.project_codes(encode(np.array(p.images), self.n)))

    def members(self, i: int) -> list[Perm]:
        return [Perm._trusted(r) for r in self.G.array[self.coset_of == i].tolist()]

    @cached_property
    def identity_coset(self) -> int:
        return self.project(Perm.identity(self.n))


def build_cosets(G: SubgroupSet, H: PermSet) -> CosetSpace:
    """Enumerate the left cosets gH; ids ascend with the lex-least representatives."""
    if G.n != H.n:
        raise SizeMismatchError(f"G on {G.n} points, H on {H.n}")
    if not H.issubset(G):
        raise InvalidInputError("H is not a subset of G")
    if not isinstance(H, SubgroupSet):
        problems = closure_audit(H)
        if problems:
            raise NotASubgroupError("H: " + "; ".join(problems))
        H = SubgroupSet._from_sorted(H.n, H.array, H.codes)
    n = G.n
    coset_of = np.full(len(G), -1, dtype=np.int64)
    reps = []
    harr = H.array
    # G is sorted, so the first unassigned element is its coset's minimum
    for k in range(len(G)):
        if coset_of[k] != -1:
            continue
        g = G.array[k]
        coset = g[harr]  # (g o h)[i] = g[h[i]]
        coset_of[G.positions(encode(coset, n))] = len(reps)
        reps.append(g)
    reps_arr = np.array(reps, dtype=np.int8).reshape(-1, n)
    return CosetSpace(G, H, reps_arr, coset_of)


def _check_sub(v: PermSet, G: SubgroupSet) -> None:
    if v.n != G.n:
        raise SizeMismatchError(f"subgroup on {v.n} points, G on {G.n}")
    if not v.issubset(G):
        raise InvalidInputError("V is not contained in G")


def _mark_products(m: int, a: np.ndarray, b: np.ndarray, project, rows_from: str) -> np.ndarray:
    """Boolean m x m matrix with (row, project(a_i o b_j)) set.

    ``rows_from`` names the operand ("a" or "b") whose index is the row.
    """
    n = a.shape[1]
    out = np.zeros((m, m), dtype=bool)
    kb = len(b)
    step = max(1, _CHUNK // max(1, kb * max(n, 1)))
    for start in range(0, len(a), step):
        block = a[start:start + step]
        prod = compose_arrays(np.broadcast_to(block[:, None, :], (len(block), kb, n)),
                              np.broadcast_to(b[None, :, :], (len(block), kb, n)))
        ids = project(encode(prod, n))
        if rows_from == "a":
            rows = np.repeat(np.arange(start, start + len(block)), kb)
        else:
            rows = np.tile(np.arange(kb), len(block))
        out[rows, ids.ravel()] = True
    return out


def left_entourage(V: PermSet, G: SubgroupSet) -> Relation:
    """``{(x, y) in G x G : x^-1 y in V}``, indexed by G's sorted order."""
    _check_sub(V, G)
    return Relation.from_bool(_mark_products(len(G), G.array, V.array, G.positions, "a"))


def right_entourage(V: PermSet, G: SubgroupSet) -> Relation:
    """``{(x, y) in G x G : x y^-1 in V}``, i.e. y in V x."""
    _check_sub(V, G)
    return Relation.from_bool(_mark_products(len(G), V.array, G.array, G.positions, "b"))


def image_left(V: PermSet, C: CosetSpace) -> Relation:
    """pi x pi image of the left entourage of V."""
    _check_sub(V, C.G)
    hv = product_set(C.H, V)
    return Relation.from_bool(_mark_products(C.m, C.reps, hv.array, C.project_codes, "a"))


def image_right(V: PermSet, C: CosetSpace) -> Relation:
    """pi x pi image of the right entourage of V."""
    _check_sub(V, C.G)
    return Relation.from_bool(_mark_products(C.m, V.array, C.reps, C.project_codes, "b"))


def image(side: Side, V: PermSet, C: CosetSpace) -> Relation:
    if side == "left":
        return image_left(V, C)
    if side == "right":
        return image_right(V, C)
    raise InvalidInputError(f"side must be 'left' or 'right', got {side!r}")


def finest_quotient_uniformity(side: Side, family: PartitionFamily, C: CosetSpace) -> FiniteUniformity:
    """Finest uniformity on G/H making pi uniformly continuous from G's ``side`` uniformity."""
    if family.n != C.n:
        raise SizeMismatchError(f"family on {family.n} points, G on {C.n}")
    n0 = intersect(minimum_subgroup(family), C.G)
    img = image(side, n0, C)
    closed = transitive_closure(img)
    return FiniteUniformity(C.m, to_partition(closed), {
        "side": side,
        "family_mode": family.mode,
        "family_size": len(family),
        "minimum_partition": family.overall_meet().to_lists(),
        "minimum_subgroup_order": len(n0),
        "image_was_transitive": closed == img,
    })


def _preimage_ok(side: Side, n0: SubgroupSet, C: CosetSpace, target: Partition) -> bool:
    """pi maps every pair of n0's side entourage into v_gamma(target)."""
    ent = left_entourage(n0, C.G) if side == "left" else right_entourage(n0, C.G)
    lab = target.labels
    cos = C.coset_of
    for x, y in ent.pairs():
        if lab[cos[x]] != lab[cos[y]]:
            return False
    return True


def check_finest_contract(side: Side, family: PartitionFamily, C: CosetSpace,
                          max_cosets: int = 8) -> Verdict:
    """Verify both clauses of "finest uniformity making pi uniformly continuous".

    Every uniformity on m cosets is the up-set of some partition, so all
    candidates are enumerated and tested directly on G x G.
    """
    if C.m > max_cosets:
        raise CapExceededError(f"{C.m} cosets exceed the enumeration cap {max_cosets}", max_cosets, C.m)
    u = finest_quotient_uniformity(side, family, C)
    n0 = intersect(minimum_subgroup(family), C.G)
    makes_uc = _preimage_ok(side, n0, C, u.min_partition)
    bad = []
    for p in all_partitions(C.m):
        # p's uniformity is contained in u's iff u's minimum partition refines p
        if _preimage_ok(side, n0, C, p) and not refines(u.min_partition, p):
            bad.append(p.to_lists())
    return Verdict("finest-contract", "quotient-uniformity", makes_uc and not bad, details={
        "side": side,
        "min_partition": u.min_partition.to_lists(),
        "projection_uniformly_continuous": makes_uc,
        "uncontained_candidates": bad,
    })


# ---------------------------------------------------------------------------
# the bijection G/St_a -> X


def _require_point_stabilizer(C: CosetSpace, a: int) -> None:
    if C.G != symmetric_group(C.n, cap=max(C.n, 1)):
        raise InvalidInputError("the coset bijection needs G = S_n")
    if C.H != point_stabilizer(C.n, a):
        raise InvalidInputError(f"H is not the stabilizer of point {a}")


def phi(C: CosetSpace, a: int) -> tuple[int, ...]:
    """Map coset fH to f(a), checking well-definedness and bijectivity."""
    _require_point_stabilizer(C, a)
    images = C.G.array[:, a].astype(np.int64)
    out = [-1] * C.m
    for cid in range(C.m):
        vals = np.unique(images[C.coset_of == cid])
        if len(vals) != 1:
            raise AssertionError(f"coset {cid} maps to several points {vals.tolist()}")
        out[cid] = int(vals[0])
    if sorted(out) != list(range(C.n)):
        raise AssertionError(f"coset map is not a bijection: {out}")
    return tuple(out)


def check_phi_equivariance(C: CosetSpace, a: int) -> bool:
    """phi(g . fH) == g(phi(fH)) for every g in G and every coset."""
    ph = phi(C, a)
    n = C.n
    for g in C.G.array:
        moved = C.project_codes(encode(compose_arrays(np.broadcast_to(g, C.reps.shape), C.reps), n))
        for cid in range(C.m):
            if ph[int(moved[cid])] != int(g[ph[cid]]):
                return False
    return True


def transport(r: Relation, mapping: tuple[int, ...]) -> Relation:
    """Relabel a relation on cosets along a bijection to carrier points."""
    return Relation.from_pairs(len(mapping), ((mapping[i], mapping[j]) for i, j in r.pairs()))


# ---------------------------------------------------------------------------
# executable checks


def is_open(H: PermSet, family: PartitionFamily) -> Partition | None:
    """A family member whose stabilizer lies in H, if any."""
    for gamma in family.members:
        if stabilizer_of_partition(family.n, gamma).issubset(H):
            return gamma
    return None


def check_maile(family: PartitionFamily, C: CosetSpace) -> Verdict:
    """Over an open subgroup H, the left quotient uniformity is discrete."""
    witness = is_open(C.H, family)
    if witness is None:
        return Verdict("verify-maile", "open-subgroup-left-discrete", True, applicable=False,
                       details={"open": False, "reason": "H contains no basis stabilizer"})
    img = image_left(C.H, C)
    img_diag = img == diagonal(C.m)
    u = finest_quotient_uniformity("left", family, C)
    return Verdict("verify-maile", "open-subgroup-left-discrete", img_diag and u.is_discrete, details={
        "open": True,
        "open_witness": witness.to_lists(),
        "image_of_H_is_diagonal": img_diag,
        "left_uniformity_discrete": u.is_discrete,
        "cosets": C.m,
    })


def lemma_tolu_construct(f: Perm, a: int, c: int) -> Perm:
    """Modify ``f`` into g with g(a) = c while keeping every f-pullback
    of a partition in which f(a) and c share a block."""
    n = f.n
    if not (0 <= a < n and 0 <= c < n):
        raise InvalidInputError("points out of range")
    b = f(a)
    finv_c = f.images.index(c)
    im = list(f.images)
    im[finv_c] = b
    im[a] = c
    return Perm(tuple(im))


def check_tolu_equivalence(gamma: Partition, a: int) -> Verdict:
    """Both directions of: f, g with f^-1(A) = g^-1(A) for every block A and
    f(a)=b, g(a)=c exist iff b and c share a block.

    Equality of the unlabeled pullback partitions is too weak here: the
    identity and (0 2)(1 3) pull [{0,1},{2,3}] back to the same partition
    while sending 0 into different blocks.
    """
    n = gamma.n
    if not 0 <= a < n:
        raise InvalidInputError(f"point {a} out of range for n={n}")
    G = symmetric_group(n)
    # (1) by exhaustive search, grouped by pullback
    reach: dict[tuple[int, ...], set[int]] = {}
    for f in G:
        reach.setdefault(pullback_blocks(f, gamma), set()).add(f(a))
    admissible = set()
    for vals in reach.values():
        admissible.update((b, c) for b in vals for c in vals)
    relation = Relation.from_pairs(n, admissible)
    target = v_gamma(gamma)

    counter_forward = [list(p) for p in sorted(admissible) if not gamma.same_block(*p)]
    counter_backward = []
    for b in range(n):
        f = next(p for p in G if p(a) == b)
        for c in range(n):
            if not gamma.same_block(b, c):
                continue
            g = lemma_tolu_construct(f, a, c)
            if g(a) != c or pullback_blocks(g, gamma) != pullback_blocks(f, gamma):
                counter_backward.append([b, c])
    passed = relation == target and not counter_forward and not counter_backward
    return Verdict("verify-tolu", "transposition-lemma", passed, details={
        "gamma": gamma.to_lists(),
        "a": a,
        "admissible_equals_v_gamma": relation == target,
        "forward_counterexamples": counter_forward,
        "backward_counterexamples": counter_backward,
    })


def direct_pahulu_relation(gamma: Partition, C: CosetSpace) -> Relation:
    """``{(fH, gH) : f g^-1 in St_gamma}`` by a loop over all f, g in G."""
    n = C.n
    st = stabilizer_of_partition(n, gamma)
    G = C.G
    out = np.zeros((C.m, C.m), dtype=bool)
    for k, g in enumerate(G.array):
        ginv = np.argsort(g).astype(np.int8)
        fg = G.array[:, ginv]  # (f o g^-1)[i] = f[g^-1[i]]
        hits = st.contains_codes(encode(fg, n))
        out[C.coset_of[hits], C.coset_of[k]] = True
    return Relation.from_bool(out)


def representative_pahulu_relation(gamma: Partition, C: CosetSpace) -> Relation:
    """The same condition evaluated only on the canonical representatives."""
    st = stabilizer_of_partition(C.n, gamma)
    pairs = []
    for i in range(C.m):
        f = C.reps[i]
        for j in range(C.m):
            ginv = np.argsort(C.reps[j]).astype(np.int8)
            if st.contains_codes(encode(f[ginv], C.n)):
                pairs.append((i, j))
    return Relation.from_pairs(C.m, pairs)


def check_pahulu(gamma: Partition, a: int) -> Verdict:
    """Right image of St_gamma on S_n/St_a, carried to X by f St_a -> f(a), is v_gamma."""
    n = gamma.n
    G = symmetric_group(n)
    C = build_cosets(G, point_stabilizer(n, a))
    st = stabilizer_of_partition(n, gamma)
    direct = direct_pahulu_relation(gamma, C)
    img = image_right(st, C)
    agree = direct == img
    ph = phi(C, a)
    moved = transport(img, ph)
    target = v_gamma(gamma)
    reps_rel = representative_pahulu_relation(gamma, C)
    passed = agree and moved == target
    return Verdict("verify-pahulu", "right-quotient-is-partition-uniformity", passed, details={
        "gamma": gamma.to_lists(),
        "a": a,
        "direct_equals_image": agree,
        "transported_equals_v_gamma": moved == target,
        "image_reflexive": is_reflexive(img),
        "image_symmetric": is_symmetric(img),
        # evaluating the condition on fixed representatives is not well defined;
        # reported, not used for the verdict
        "representative_condition_matches": reps_rel == img,
    })
