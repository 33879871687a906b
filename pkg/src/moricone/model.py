"""Scenario schema for a Picard-rank-2 variety model.

A scenario records the dimension of X, a trusted ample class, and two
families of effective divisors together with the dimensions of their prefix
intersections ``dim(D_1 ∩ ... ∩ D_j)`` (``-1`` meaning empty).  Prefix tables
are indexed by the >=_A-sorted chain, so families should be listed in chain
order to keep labels and table rows aligned.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import cone2
from .cone2 import ClassVec
from .errors import ConeError, ScenarioError


class DimsMode(str, enum.Enum):
    EXPLICIT = "explicit"
    GENERIC_CI = "generic_ci"


@dataclass(frozen=True)
class DivisorEntry:
    label: str
    cls: ClassVec


@dataclass(frozen=True)
class PrefixDimSpec:
    """Prefix-intersection dimensions for one family.

    ``stage0`` is always required.  In EXPLICIT mode every later stage the
    engine reaches must appear in ``stages``; in GENERIC_CI mode later stages
    are synthesized as ``dim X - j`` with the full prefix empty.
    """

    mode: DimsMode
    stage0: tuple[int, ...]
    stages: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "mode", DimsMode(self.mode))
        object.__setattr__(self, "stage0", tuple(self.stage0))
        stages = self.stages.items() if isinstance(self.stages, dict) else self.stages
        object.__setattr__(self, "stages", tuple(sorted((int(s), tuple(t)) for s, t in stages)))

    def explicit_table(self, stage_index: int) -> tuple[int, ...] | None:
        if stage_index == 0:
            return self.stage0
        return dict(self.stages).get(stage_index)


@dataclass(frozen=True)
class Family:
    entries: tuple[DivisorEntry, ...]
    prefix_dims: PrefixDimSpec
    contracted_class: ClassVec | None = None
    irreducible_first: bool = True

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def classes(self) -> list[ClassVec]:
        return [e.cls for e in self.entries]


@dataclass(frozen=True)
class Scenario:
    name: str
    dim_x: int
    basis_labels: tuple[str, str]
    ample: ClassVec
    family_d: Family
    family_dp: Family

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    def family(self, side: str) -> Family:
        return self.family_d if side == "d" else self.family_dp


@dataclass(frozen=True)
class StageState:
    """One SQM stage: the surviving chain, its prefix dimensions, its ample class."""

    stage_index: int
    chain: tuple[DivisorEntry, ...]
    dims: tuple[int, ...]
    dims_source: str
    stage_ample: ClassVec
    dim_x: int


def check_prefix_table(table, dim_x: int, length: int, where: str = "prefix table") -> None:
    """Raise ScenarioError unless ``table`` is a well-formed prefix-dimension table.

    Rules: ``length + 1`` values, ``t[0] = dim X``, every later value in
    ``[-1, dim X - 1]`` (a nonzero effective divisor is a proper subset), and
    each step either keeps the dimension, drops it by one, or becomes empty;
    once empty it stays empty.
    """
    t = list(table)
    if len(t) != length + 1:
        raise ScenarioError(f"{where}: expected {length + 1} values, got {len(t)}")
    if any(isinstance(x, bool) or not isinstance(x, int) for x in t):
        raise ScenarioError(f"{where}: values must be integers")
    if t[0] != dim_x:
        raise ScenarioError(f"{where}: entry 0 must equal dim X = {dim_x}, got {t[0]}")
    for j in range(1, len(t)):
        prev, cur = t[j - 1], t[j]
        if not -1 <= cur <= dim_x - 1:
            raise ScenarioError(f"{where}: entry {j} = {cur} outside [-1, {dim_x - 1}]")
        if cur > prev:
            raise ScenarioError(f"{where}: entry {j} increases ({prev} -> {cur}); tables are non-increasing")
        if prev == -1 and cur != -1:
            raise ScenarioError(f"{where}: entry {j} is nonempty after an empty prefix")
        if cur != -1 and cur < prev - 1:
            raise ScenarioError(f"{where}: entry {j} drops by more than one ({prev} -> {cur})")


def stage_view(spec: PrefixDimSpec, stage_index: int, chain, ample: ClassVec, dim_x: int,
               where: str = "family") -> StageState:
    """Materialize the prefix dimensions seen at ``stage_index`` for ``chain``."""
    chain = tuple(chain)
    r = len(chain)
    table = spec.explicit_table(stage_index)
    if stage_index == 0:
        source = "table"
    elif spec.mode is DimsMode.EXPLICIT:
        if table is None:
            raise ScenarioError(f"{where}: explicit prefix table missing for stage {stage_index}")
        source = "explicit"
    else:
        table = tuple(dim_x - j for j in range(r)) + (-1,)
        source = "generic_ci"
    check_prefix_table(table, dim_x, r, f"{where}.prefix_dims stage {stage_index}")
    return StageState(stage_index, chain, tuple(table), source, ample, dim_x)


def prefix_dim(stage: StageState, j: int) -> int:
    """``dim(D_1 ∩ ... ∩ D_j)`` at this stage, with ``dim X`` for ``j = 0``."""
    if not 0 <= j <= len(stage.chain):
        raise IndexError(f"prefix index {j} outside [0, {len(stage.chain)}]")
    if j == 0:
        return stage.dim_x
    return stage.dims[j]


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    scenario: str
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def format(self) -> str:
        lines = [f"validation of {self.scenario}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"  [{status}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines) + "\n"


def validate(s: Scenario) -> ValidationReport:
    """Check the hypotheses the decomposition engine relies on."""
    checks: list[Check] = []
    sides = (("family_d", s.family_d), ("family_dp", s.family_dp))

    zeros = [f"{name}.{e.label}" for name, fam in sides for e in fam.entries if e.cls.is_zero()]
    if s.ample.is_zero():
        zeros.append("ample")
    checks.append(Check("classes_nonzero", not zeros,
                        f"zero classes: {', '.join(zeros)}" if zeros else ""))

    sizes = [(name, len(fam.entries)) for name, fam in sides]
    bad = [f"{name} has {n} entries" for name, n in sizes if not 2 <= n <= s.dim_x]
    checks.append(Check(
        "family_sizes", not bad,
        f"{'; '.join(bad)}; need 2 ≤ r, r' ≤ dim X (dim X = {s.dim_x})" if bad else ""))

    table_problems = []
    for name, fam in sides:
        try:
            check_prefix_table(fam.prefix_dims.stage0, s.dim_x, len(fam.entries), f"{name}.prefix_dims stage 0")
        except ScenarioError as exc:
            table_problems.append(str(exc))
    checks.append(Check("prefix_tables_well_formed", not table_problems, "; ".join(table_problems)))

    nonempty = [name for name, fam in sides
                if not fam.prefix_dims.stage0 or fam.prefix_dims.stage0[-1] != -1]
    checks.append(Check(
        "full_prefix_empty", not nonempty,
        f"{', '.join(nonempty)}: D_1 ∩ ⋯ ∩ D_r must be empty (dim -1)" if nonempty else ""))

    if zeros:
        skipped = "skipped: zero class present"
        for name in ("cones_meet_only_at_origin", "total_hull_strictly_convex",
                     "ample_in_at_most_one_family_cone", "ample_side_orderable"):
            checks.append(Check(name, False, skipped))
        return ValidationReport(s.name, tuple(checks))

    cone_d = cone2.cone_hull(s.family_d.classes)
    cone_dp = cone2.cone_hull(s.family_dp.classes)
    meets = cone2.meets_only_at_origin(cone_d, cone_dp)
    checks.append(Check("cones_meet_only_at_origin", meets,
                        "" if meets else f"Cone(D) = {cone_d} and Cone(D') = {cone_dp} share a nonzero class"))

    total = cone2.cone_hull(s.family_d.classes + s.family_dp.classes + [s.ample])
    convex = cone2.strictly_convex(total)
    checks.append(Check("total_hull_strictly_convex", convex, "" if convex else f"hull is {total}"))

    in_d, in_dp = cone2.contains(cone_d, s.ample), cone2.contains(cone_dp, s.ample)
    checks.append(Check("ample_in_at_most_one_family_cone", not (in_d and in_dp),
                        "ample lies in both family cones" if in_d and in_dp else ""))

    name, fam = ("family_dp", s.family_dp) if in_d else ("family_d", s.family_d)
    try:
        cone2.angular_sort(s.ample, fam.entries, key=lambda e: e.cls)
        checks.append(Check("ample_side_orderable", True, name))
    except ConeError as exc:
        checks.append(Check("ample_side_orderable", False, f"{name}: {exc}"))
    return ValidationReport(s.name, tuple(checks))


# -- JSON scenario files --------------------------------------------------------

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ScenarioError(f"{where}: expected a rational string 'p/q', got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value.strip()):
        raise ScenarioError(f"{where}: expected a rational string 'p/q', got {value!r}")
    q = Fraction(value.strip())
    if q.denominator == 0:
        raise ScenarioError(f"{where}: zero denominator")
    return q


def parse_class(value, where: str) -> ClassVec:
    if not isinstance(value, list):
        raise ScenarioError(f"{where}: expected a list of two rationals or [num, den, num, den]")
    if len(value) == 2:
        return ClassVec(parse_rational(value[0], f"{where}[0]"), parse_rational(value[1], f"{where}[1]"))
    if len(value) == 4 and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        if value[1] <= 0 or value[3] <= 0:
            raise ScenarioError(f"{where}: denominators must be positive")
        return ClassVec(Fraction(value[0], value[1]), Fraction(value[2], value[3]))
    raise ScenarioError(f"{where}: expected a list of two rationals or [num, den, num, den]")


def class_to_json(v: ClassVec) -> list[str]:
    return [format_rational(v.x), format_rational(v.y)]


def _expect_keys(obj, where: str, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    missing = sorted(required - obj.keys())
    if missing:
        raise ScenarioError(f"{where}: missing required field {missing[0]!r}")
    unknown = sorted(obj.keys() - required - set(optional))
    if unknown:
        raise ScenarioError(f"{where}: unknown field {unknown[0]!r}")


def _parse_table(value, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise ScenarioError(f"{where}: expected a list of integers")
    return tuple(value)


def _parse_family(obj, where: str, dim_x: int) -> Family:
    _expect_keys(obj, where, {"entries", "prefix_dims"}, {"contracted_class", "irreducible_first"})
    raw_entries = obj["entries"]
    if not isinstance(raw_entries, list):
        raise ScenarioError(f"{where}.entries: expected a list")
    entries = []
    for i, raw in enumerate(raw_entries):
        w = f"{where}.entries[{i}]"
        _expect_keys(raw, w, {"label", "class"})
        if not isinstance(raw["label"], str):
            raise ScenarioError(f"{w}.label: expected a string")
        entries.append(DivisorEntry(raw["label"], parse_class(raw["class"], f"{w}.class")))

    pd = obj["prefix_dims"]
    w = f"{where}.prefix_dims"
    _expect_keys(pd, w, {"mode", "stage0"}, {"stages"})
    if pd["mode"] not in ("explicit", "generic_ci"):
        raise ScenarioError(f"{w}.mode: expected 'explicit' or 'generic_ci', got {pd['mode']!r}")
    stage0 = _parse_table(pd["stage0"], f"{w}.stage0")
    check_prefix_table(stage0, dim_x, len(entries), f"{w}.stage0")
    stages = {}
    raw_stages = pd.get("stages", {})
    if not isinstance(raw_stages, dict):
        raise ScenarioError(f"{w}.stages: expected an object keyed by stage index")
    for key, table in raw_stages.items():
        if not key.isdigit() or int(key) < 1:
            raise ScenarioError(f"{w}.stages: key {key!r} is not a stage index >= 1")
        parsed = _parse_table(table, f"{w}.stages.{key}")
        check_prefix_table(parsed, dim_x, len(parsed) - 1, f"{w}.stages.{key}")
        stages[int(key)] = parsed

    contracted = None
    if obj.get("contracted_class") is not None:
        contracted = parse_class(obj["contracted_class"], f"{where}.contracted_class")
    irreducible = obj.get("irreducible_first", True)
    if not isinstance(irreducible, bool):
        raise ScenarioError(f"{where}.irreducible_first: expected a boolean")
    return Family(tuple(entries), PrefixDimSpec(DimsMode(pd["mode"]), stage0, stages), contracted, irreducible)


def scenario_from_dict(obj) -> Scenario:
    _expect_keys(obj, "scenario", {"name", "dim_x", "basis_labels", "ample", "family_d", "family_dp"})
    if not isinstance(obj["name"], str):
        raise ScenarioError("name: expected a string")
    dim_x = obj["dim_x"]
    if isinstance(dim_x, bool) or not isinstance(dim_x, int) or dim_x < 2:
        raise ScenarioError(f"dim_x: expected an integer >= 2, got {dim_x!r}")
    labels = obj["basis_labels"]
    if not (isinstance(labels, list) and len(labels) == 2 and all(isinstance(x, str) for x in labels)):
        raise ScenarioError("basis_labels: expected two strings")
    return Scenario(
        name=obj["name"],
        dim_x=dim_x,
        basis_labels=tuple(labels),
        ample=parse_class(obj["ample"], "ample"),
        family_d=_parse_family(obj["family_d"], "family_d", dim_x),
        family_dp=_parse_family(obj["family_dp"], "family_dp", dim_x),
    )


def _family_to_dict(fam: Family) -> dict:
    pd = {"mode": fam.prefix_dims.mode.value, "stage0": list(fam.prefix_dims.stage0)}
    if fam.prefix_dims.stages:
        pd["stages"] = {str(s): list(t) for s, t in fam.prefix_dims.stages}
    out = {
        "entries": [{"label": e.label, "class": class_to_json(e.cls)} for e in fam.entries],
        "prefix_dims": pd,
        "irreducible_first": fam.irreducible_first,
    }
    if fam.contracted_class is not None:
        out["contracted_class"] = class_to_json(fam.contracted_class)
    return out


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "name": s.name,
        "dim_x": s.dim_x,
        "basis_labels": list(s.basis_labels),
        "ample": class_to_json(s.ample),
        "family_d": _family_to_dict(s.family_d),
        "family_dp": _family_to_dict(s.family_dp),
    }


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads_scenario(text: str) -> Scenario:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(obj)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from None
    try:
        return loads_scenario(text)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(s), encoding="utf-8")
