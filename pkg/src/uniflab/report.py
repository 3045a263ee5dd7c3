"""Run checks on a scenario and render deterministic reports."""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle
from .errors import CapExceededError, UnknownCheckError
from .filters import separation_witness, topology_axiom_report
from .partitions import Partition, all_partitions, meet, pullback, pullback_blocks, v_gamma
from .perms import cap_override, intersect, stabilizer_of_partition, symmetric_group
from .quotients import (
    build_cosets,
    check_finest_contract,
    check_maile,
    check_pahulu,
    check_tolu_equivalence,
    finest_quotient_uniformity,
    lemma_tolu_construct,
)
from .relations import Relation, uniformity_from_base
from .scenario import CHECKS, Scenario
from .uc import FILTER_BANNER, CarrierFunction, check_va, is_uniformly_continuous, itzkowitz_report, uc_class_compare
from .verdict import Verdict

STATEMENTS = {
    "verify-losa": "partition stabilizers form a Hausdorff neighborhood base of subgroups "
                   "(subgroups, conjugation, intersection, separation)",
    "verify-maile": "if H is open, the left uniformity of G/H is discrete",
    "verify-va": "every real function is uniformly continuous for the partition "
                 "uniformity generated by its own fibers",
    "verify-tolu": "f, g with f^-1(A) = g^-1(A) for every block A exist with "
                   "f(a) = b, g(a) = c exactly when b and c share a block",
    "verify-pahulu": "on S_n/St_a the right image of St_gamma, moved to X by fH -> f(a), is V_gamma",
    "quotient": "the finest uniformities on G/H making the projection uniformly continuous",
    "uc-compare": "comparison of left- and right-uniformly continuous function classes on G/H",
    "itzkowitz-report": "one-sided gap: every left-UC function is right-UC while the uniformities differ",
}


@dataclass
class Report:
    command: str
    scenario: dict
    verdicts: list[Verdict] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    banners: list[str] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def canonical(self) -> dict:
        return {
            "command": self.command,
            "scenario": self.scenario,
            "passed": self.passed,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "results": self.results,
            "banners": list(self.banners),
        }

    def canonical_json(self) -> str:
        return json.dumps(self.canonical(), indent=2, ensure_ascii=False)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _losa(sc: Scenario) -> Verdict:
    fam = sc.family()
    v = topology_axiom_report(fam)
    n = sc.n
    meet_ok = True
    for i, g in enumerate(fam.members):
        for b in fam.members[i:]:
            both = intersect(stabilizer_of_partition(n, g), stabilizer_of_partition(n, b))
            if both != stabilizer_of_partition(n, meet(g, b)):
                meet_ok = False
    sep_ok = all(f not in stabilizer_of_partition(n, separation_witness(f))
                 for f in symmetric_group(n) if not f.is_identity)
    v.details["meet_stabilizer_identity"] = meet_ok
    v.details["separation_witnesses"] = sep_ok
    v.check = "verify-losa"
    v.passed = v.passed and meet_ok and sep_ok
    return v


def _va(sc: Scenario, seed: int) -> Verdict:
    rng = random.Random(seed)
    n = sc.n
    failures = []
    for _ in range(sc.samples):
        f = CarrierFunction.of(rng.randrange(4) for _ in range(n))
        if not check_va(f).passed:
            failures.append(f.to_list())
    disagreements = 0
    for _ in range(sc.samples):
        f, base = random_uc_instance(rng, n)
        u = uniformity_from_base(base)
        pairs = [set(r.pairs()) for r in base]
        if is_uniformly_continuous(f, u) != oracle.naive_uc(f.values, pairs):
            disagreements += 1
    return Verdict("verify-va", "partition-uniformity-uc", not failures and not disagreements, details={
        "samples": sc.samples,
        "seed": seed,
        "failures": failures[:5],
        "oracle_disagreements": disagreements,
    })


def random_uc_instance(rng: random.Random, m: int):
    """A random function and a random valid uniformity base on m points.

    The base is a meet-closed family of partition entourages plus random
    reflexive supersets of its members, which keeps every axiom intact.
    """
    parts = []
    for _ in range(rng.randint(1, 3)):
        labels = [rng.randrange(max(1, m // 2 + 1)) for _ in range(m)]
        parts.append(Partition.from_labels(labels))
    closed = set(parts)
    changed = True
    while changed:
        changed = False
        for a in list(closed):
            for b in list(closed):
                c = meet(a, b)
                if c not in closed:
                    closed.add(c)
                    changed = True
    base = [v_gamma(p) for p in sorted(closed, key=lambda p: p.blocks)]
    for r in list(base):
        if rng.random() < 0.5:
            extra = Relation.from_pairs(m, [(rng.randrange(m), rng.randrange(m)) for _ in range(rng.randint(1, 3))])
            base.append(r | extra)
    f = CarrierFunction.of(rng.choice([0, 1, 2, Fraction(1, 2)]) for _ in range(m))
    return f, base


def _tolu(sc: Scenario) -> Verdict:
    n = sc.n
    parts = all_partitions(n)
    bad_equiv = []
    for gamma in parts:
        for a in range(n):
            v = check_tolu_equivalence(gamma, a)
            if not v.passed:
                bad_equiv.append({"gamma": gamma.to_lists(), "a": a})
    bad_construct = 0
    checked = 0
    for f in symmetric_group(n):
        for a in range(n):
            for c in range(n):
                g = lemma_tolu_construct(f, a, c)
                for gamma in parts:
                    if not gamma.same_block(f(a), c):
                        continue
                    checked += 1
                    if g(a) != c or pullback_blocks(g, gamma) != pullback_blocks(f, gamma) \
                            or pullback(g, gamma) != pullback(f, gamma):
                        bad_construct += 1
    return Verdict("verify-tolu", "transposition-lemma", not bad_equiv and not bad_construct, details={
        "partitions": len(parts),
        "equivalence_failures": bad_equiv[:5],
        "construction_cases": checked,
        "construction_failures": bad_construct,
    })


def _pahulu(sc: Scenario) -> Verdict:
    n = sc.n
    failures = []
    rep_mismatch = 0
    count = 0
    for gamma in all_partitions(n):
        for a in range(n):
            v = check_pahulu(gamma, a)
            count += 1
            if not v.passed:
                failures.append({"gamma": gamma.to_lists(), "a": a})
            if not v.details["representative_condition_matches"]:
                rep_mismatch += 1
    return Verdict("verify-pahulu", "right-quotient-is-partition-uniformity", not failures, details={
        "instances": count,
        "failures": failures[:5],
        "instances_where_fixed_representatives_disagree": rep_mismatch,
    })


def run(sc: Scenario, command: str, seed: int = 0) -> Report:
    if command not in CHECKS and command != "all":
        raise UnknownCheckError(f"unknown check {command!r}")
    if sc.n > sc.cap_n:
        raise CapExceededError(f"n={sc.n} exceeds the configured cap {sc.cap_n}", sc.cap_n, sc.n)
    names = [command] if command != "all" else (sc.checks or list(CHECKS))
    report = Report(command, sc.echo())
    with cap_override(sc.cap_n):
        _run_into(report, sc, names, seed)
    return report


def _run_into(report: Report, sc: Scenario, names: list[str], seed: int) -> None:
    fam = sc.family()
    G = symmetric_group(sc.n)
    H = sc.subgroup()
    C = None
    quotient = None

    def cosets():
        nonlocal C
        if C is None:
            C = build_cosets(G, H)
        return C

    def uniformities():
        nonlocal quotient
        if quotient is None:
            quotient = (finest_quotient_uniformity("left", fam, cosets()),
                        finest_quotient_uniformity("right", fam, cosets()))
        return quotient

    for name in names:
        start = time.perf_counter()
        if name == "verify-losa":
            v = _losa(sc)
        elif name == "verify-maile":
            v = check_maile(fam, cosets())
        elif name == "verify-va":
            v = _va(sc, seed)
        elif name == "verify-tolu":
            v = _tolu(sc)
        elif name == "verify-pahulu":
            v = _pahulu(sc)
        elif name == "quotient":
            left, right = uniformities()
            contract = {}
            if cosets().m <= sc.coset_cap:
                for side in ("left", "right"):
                    contract[side] = check_finest_contract(side, fam, cosets(), sc.coset_cap).passed
            v = Verdict("quotient", "quotient-uniformity", all(contract.values()), details={
                "cosets": cosets().m,
                "left_min_partition": left.min_partition.to_lists(),
                "right_min_partition": right.min_partition.to_lists(),
                "left_provenance": left.provenance,
                "right_provenance": right.provenance,
                "finest_contract_checked": bool(contract),
                "finest_contract": contract,
            })
        elif name == "uc-compare":
            left, right = uniformities()
            cmp = uc_class_compare(left, right, names=("left", "right"))
            v = Verdict("uc-compare", "uc-class-comparison", True, details=cmp.to_dict())
        elif name == "itzkowitz-report":
            rep = itzkowitz_report(fam, H, a=sc.point, G=G)
            details = rep.to_dict()
            if sc.labels and "right_min_partition_on_points" in details:
                details["right_min_partition_on_labels"] = [
                    [sc.label(x) for x in b] for b in details["right_min_partition_on_points"]]
            v = Verdict("itzkowitz-report", "itzkowitz-gap", True, details=details)
            for b in rep.banners:
                if b not in report.banners:
                    report.banners.append(b)
        else:  # pragma: no cover - guarded in run()
            raise UnknownCheckError(name)
        report.verdicts.append(v)
        report.timing[name] = round(time.perf_counter() - start, 6)
    if fam.mode == "filter-base" and sc.family_seeds is not None:
        if FILTER_BANNER not in report.banners:
            report.banners.append(FILTER_BANNER)


def render_prose(report: Report) -> str:
    lines = [f"uniflab {report.command}: {'PASS' if report.passed else 'FAIL'}"]
    sc = report.scenario
    lines.append(f"scenario: n={sc['n']}, family={sc['family']['mode']} seeds={sc['family']['seeds']}, "
                 f"subgroup={sc['subgroup']}")
    for v in report.verdicts:
        status = "PASS" if v.passed else "FAIL"
        if not v.applicable:
            status = "N/A"
        lines.append(f"[{status}] {v.check} ({v.tag}): {STATEMENTS.get(v.check, '')}")
        for key in _PROSE_KEYS.get(v.check, ()):
            if key in v.details:
                lines.append(f"    {key}: {v.details[key]}")
    for b in report.banners:
        lines.append(f"note: {b}")
    return "\n".join(lines) + "\n"


_PROSE_KEYS = {
    "verify-losa": ("axioms", "meet_stabilizer_identity", "separation_witnesses", "conjugation_witness"),
    "verify-maile": ("open", "image_of_H_is_diagonal", "left_uniformity_discrete", "reason"),
    "verify-va": ("samples", "oracle_disagreements"),
    "verify-tolu": ("partitions", "construction_cases", "construction_failures"),
    "verify-pahulu": ("instances", "failures"),
    "quotient": ("left_min_partition", "right_min_partition", "finest_contract"),
    "uc-compare": ("relation", "witnesses"),
    "itzkowitz-report": ("left_min_partition", "right_min_partition", "every_left_uc_is_right_uc",
                         "uniformities_differ", "gap_exhibited",
                         "left_compatible_with_quotient_topology",
                         "right_compatible_with_quotient_topology"),
}
