"""Scenario files: a YAML document describing one finite configuration.

Example::

    n: 4
    labels: [a, b, c, d]          # optional point names
    family:
      mode: filter-base           # or group-topology
      seeds:                      # list of partitions, or the word "all"
        - [[0, 1], [2, 3]]
    subgroup:
      point_stabilizer: 0         # or partition_stabilizer: [[0, 1], [2, 3]]
                                  # or elements: ["0,1,2,3", "(1 2)", ...]
    checks: [itzkowitz-report]    # used by the "all" command; empty means every check
    samples: 1000                 # random instances for verify-va
    caps: {n: 7, family: 10000, cosets: 8}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import InvalidInputError, PartitionError
from .filters import DEFAULT_FAMILY_CAP, MODES, PartitionFamily, close_family
from .partitions import Partition
from .perms import (
    SubgroupSet,
    default_cap,
    parse_perm,
    point_stabilizer,
    stabilizer_of_partition,
)

CHECKS = (
    "verify-losa",
    "verify-maile",
    "verify-va",
    "verify-tolu",
    "verify-pahulu",
    "quotient",
    "uc-compare",
    "itzkowitz-report",
)
COMMANDS = CHECKS + ("all",)


class ScenarioError(InvalidInputError):
    """Invalid scenario; ``path`` names the offending field."""

    def __init__(self, path: str, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{path}: {message}" if path else f"{where}{message}")
        self.path = path
        self.line = line


@dataclass
class Scenario:
    n: int
    family_mode: str = "filter-base"
    family_seeds: list[Partition] | None = None  # None means every partition
    subgroup_def: dict = field(default_factory=lambda: {"point_stabilizer": 0})
    labels: list[str] | None = None
    checks: list[str] = field(default_factory=list)
    samples: int = 200
    caps: dict = field(default_factory=dict)

    @property
    def cap_n(self) -> int:
        return int(self.caps.get("n", default_cap()))

    @property
    def family_cap(self) -> int:
        return int(self.caps.get("family", DEFAULT_FAMILY_CAP))

    @property
    def coset_cap(self) -> int:
        return int(self.caps.get("cosets", 8))

    def family(self) -> PartitionFamily:
        if self.family_seeds is None:
            return PartitionFamily.all_partitions(self.n)
        return close_family(self.family_seeds, self.family_mode, cap=self.family_cap)

    def subgroup(self) -> SubgroupSet:
        sub_def = self.subgroup_def
        if "point_stabilizer" in sub_def:
            return point_stabilizer(self.n, sub_def["point_stabilizer"])
        if "partition_stabilizer" in sub_def:
            return stabilizer_of_partition(self.n, sub_def["partition_stabilizer"])
        return sub_def["elements"]

    @property
    def point(self) -> int | None:
        return self.subgroup_def.get("point_stabilizer")

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def echo(self) -> dict:
        sub_def = self.subgroup_def
        if "point_stabilizer" in sub_def:
            sub = {"point_stabilizer": sub_def["point_stabilizer"]}
        elif "partition_stabilizer" in sub_def:
            sub = {"partition_stabilizer": sub_def["partition_stabilizer"].to_lists()}
        else:
            sub = {"elements": [p.one_line() for p in sub_def["elements"]]}
        return {
            "n": self.n,
            "labels": self.labels,
            "family": {
                "mode": "group-topology" if self.family_seeds is None else self.family_mode,
                "seeds": "all" if self.family_seeds is None else [p.to_lists() for p in self.family_seeds],
            },
            "subgroup": sub,
            "checks": list(self.checks),
            "samples": self.samples,
        }


def _partition(path: str, n: int, raw: Any) -> Partition:
    if not isinstance(raw, list) or not all(isinstance(b, list) for b in raw):
        raise ScenarioError(path, "a partition is a list of lists of integers")
    try:
        return Partition.from_blocks(n, raw)
    except (PartitionError, TypeError, ValueError) as exc:
        raise ScenarioError(path, str(exc)) from None


def _int(path: str, raw: Any, lo: int | None = None) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ScenarioError(path, f"expected an integer, got {raw!r}")
    if lo is not None and raw < lo:
        raise ScenarioError(path, f"must be at least {lo}")
    return raw


def parse_scenario(text: str) -> Scenario:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ScenarioError("", f"parse error: {getattr(exc, 'problem', exc)}", line) from None
    if not isinstance(data, dict):
        raise ScenarioError("", "scenario must be a mapping")
    known = {"n", "labels", "family", "subgroup", "checks", "samples", "caps"}
    for key in data:
        if key not in known:
            raise ScenarioError(str(key), "unknown field")

    if "n" not in data:
        raise ScenarioError("n", "required field missing")
    n = _int("n", data["n"], lo=1)

    caps = data.get("caps") or {}
    if not isinstance(caps, dict):
        raise ScenarioError("caps", "expected a mapping")
    for key, val in caps.items():
        if key not in ("n", "family", "cosets"):
            raise ScenarioError(f"caps.{key}", "unknown cap")
        _int(f"caps.{key}", val, lo=1)

    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise ScenarioError("labels", f"expected a list of {n} names")
        labels = [str(x) for x in labels]
        if len(set(labels)) != n:
            raise ScenarioError("labels", "names must be distinct")

    fam = data.get("family") or {}
    if not isinstance(fam, dict):
        raise ScenarioError("family", "expected a mapping")
    mode = fam.get("mode", "filter-base")
    if mode not in MODES:
        raise ScenarioError("family.mode", f"must be one of {', '.join(MODES)}")
    raw_seeds = fam.get("seeds", "all")
    if raw_seeds == "all":
        seeds = None
    elif isinstance(raw_seeds, list) and raw_seeds:
        seeds = [_partition(f"family.seeds[{i}]", n, s) for i, s in enumerate(raw_seeds)]
    else:
        raise ScenarioError("family.seeds", 'expected a nonempty list of partitions or "all"')

    sub = data.get("subgroup", {"point_stabilizer": 0})
    if not isinstance(sub, dict) or len(sub) != 1:
        raise ScenarioError("subgroup", "expected exactly one of point_stabilizer, partition_stabilizer, elements")
    (kind, val), = sub.items()
    if kind == "point_stabilizer":
        a = _int("subgroup.point_stabilizer", val, lo=0)
        if a >= n:
            raise ScenarioError("subgroup.point_stabilizer", f"point {a} out of range for n={n}")
        sub_def = {"point_stabilizer": a}
    elif kind == "partition_stabilizer":
        sub_def = {"partition_stabilizer": _partition("subgroup.partition_stabilizer", n, val)}
    elif kind == "elements":
        if not isinstance(val, list) or not val:
            raise ScenarioError("subgroup.elements", "expected a nonempty list of permutations")
        perms = []
        for i, text in enumerate(val):
            try:
                perms.append(parse_perm(n, text if isinstance(text, str) else list(text)))
            except (InvalidInputError, TypeError) as exc:
                raise ScenarioError(f"subgroup.elements[{i}]", str(exc)) from None
        try:
            sub_def = {"elements": SubgroupSet(n, perms)}
        except InvalidInputError as exc:
            raise ScenarioError("subgroup.elements", f"closure audit failed: {exc}") from None
    else:
        raise ScenarioError(f"subgroup.{kind}", "unknown subgroup kind")

    checks = data.get("checks") or []
    if not isinstance(checks, list):
        raise ScenarioError("checks", "expected a list of check names")
    for i, c in enumerate(checks):
        if c not in CHECKS:
            raise ScenarioError(f"checks[{i}]", f"unknown check {c!r}")

    samples = _int("samples", data.get("samples", 200), lo=1)
    return Scenario(n, mode, seeds, sub_def, labels, list(checks), samples, dict(caps))


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError("", f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text)
