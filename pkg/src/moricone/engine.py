"""Chamber decomposition of the movable cone of a Picard-rank-2 variety.

The engine runs the constructive argument on each of the two divisor
families: order the chain against an ample class, locate a condition (*)
edge by the prefix-emptiness recursion, and, while the prefix intersection
has codimension at least two, pass to a small modification whose nef cone is
the next chamber.  Modifications are symbolic: a stage keeps the divisor
classes and only updates its chain, prefix dimensions, and ample class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import cone2
from .cone2 import ClassVec, Cone2, Ray, normalize
from .errors import ConsistencyError, ValidationFailed
from .model import (DivisorEntry, Family, Scenario, StageState, prefix_dim,
                    stage_view, validate)

SEMIAMPLE_REASON = "base-locus-in-empty-intersection"
SIDE_NAMES = {"d": "family_d", "dp": "family_dp"}


class Case(str, enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"


@dataclass(frozen=True)
class StarCertificate:
    """Why ``D_1, ..., D_{k+1}`` satisfy condition (*) at a stage.

    ``cond4_bound`` is the derived bound ``r - k - 1`` on the dimension of
    the image of the prefix intersection, where ``r`` is the recursion level
    at which the search stopped.
    """

    k: int
    semiample_reason: str
    cond2_ok: bool
    cond3_dim: int
    cond4_bound: int


@dataclass(frozen=True)
class EdgeFlags:
    semiample: bool
    big: bool
    birational_off_prefix: bool


@dataclass(frozen=True)
class Chamber:
    stage_name: str
    left: Ray
    right: Ray
    left_flags: EdgeFlags
    right_flags: EdgeFlags

    def __post_init__(self):
        if self.left == self.right or cone2.cross(self.left, self.right) == 0:
            raise ConsistencyError(f"chamber {self.stage_name} is not a strictly convex wedge")

    @property
    def cone(self) -> Cone2:
        return cone2.cone_hull([self.left, self.right])


@dataclass(frozen=True)
class EffEdge:
    kind: str  # "known" or "bounded_beyond"
    ray: Ray

    @property
    def known(self) -> bool:
        return self.kind == "known"


@dataclass(frozen=True)
class StageTrace:
    """Audit record of one stage on one side."""

    stage_name: str
    stage_index: int
    labels: tuple[str, ...]
    rays: tuple[Ray, ...]
    stage_ample: ClassVec
    dims: tuple[int, ...]
    dims_source: str
    certificate: StarCertificate
    case: Case


@dataclass(frozen=True)
class SideResult:
    side: str
    nef_edge: Ray
    nef_flags: EdgeFlags
    chambers: tuple[Chamber, ...]
    mov_edge: Ray
    eff_edge: EffEdge
    k_sequence: tuple[int, ...]
    case_trace: tuple[Case, ...]
    stages: tuple[StageTrace, ...] = ()


@dataclass(frozen=True)
class EffCone:
    """The effective cone, or a lower bound for it when an edge is undetermined."""

    known: bool
    cone: Cone2
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class MdsCertificate:
    holds: bool
    conditions: tuple[tuple[str, bool], ...]


@dataclass(frozen=True)
class LabeledRay:
    ray: Ray
    labels: tuple[str, ...]


@dataclass(frozen=True)
class DecompositionReport:
    scenario: str
    dim_x: int
    basis_labels: tuple[str, str]
    ample: ClassVec
    rays: tuple[LabeledRay, ...]
    nef_x: Chamber
    side_d: SideResult
    side_dp: SideResult
    mov: Cone2
    eff: EffCone
    mds_certificate: MdsCertificate
    first_side: str = "d"
    separating_ample: ClassVec | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def chambers(self) -> tuple[Chamber, ...]:
        """Nef(X) first, then each side's chambers moving outward."""
        return (self.nef_x,) + self.side_d.chambers + self.side_dp.chambers


# -- chain ordering and condition (*) -------------------------------------------

def order_chain(ample: ClassVec, fam: Family) -> tuple[DivisorEntry, ...]:
    return tuple(cone2.angular_sort(ample, fam.entries, key=lambda e: e.cls))


def _rays(stage: StageState) -> list[Ray]:
    return [normalize(e.cls) for e in stage.chain]


def _check_stage(stage: StageState) -> None:
    chain = stage.chain
    if not chain:
        raise ConsistencyError("empty chain")
    for a, b in zip(chain, chain[1:]):
        if not cone2.succeq(stage.stage_ample, a.cls, b.cls):
            raise ConsistencyError(f"chain not sorted: {a.label} does not dominate {b.label}")
    if prefix_dim(stage, len(chain)) != -1:
        raise ConsistencyError("full prefix intersection is not empty")


def _certificate(stage: StageState, k: int, r: int) -> StarCertificate:
    before = cone2.cone_hull(e.cls for e in stage.chain[:k])
    return StarCertificate(
        k=k,
        semiample_reason=SEMIAMPLE_REASON,
        cond2_ok=not cone2.contains(before, stage.chain[k].cls),
        cond3_dim=prefix_dim(stage, k),
        cond4_bound=r - k - 1,
    )


def find_star_chain(stage: StageState) -> StarCertificate:
    """Find ``k`` with ``D_1, ..., D_{k+1}`` satisfying condition (*).

    Starting from the full chain, take the first index whose ray equals the
    ray of the last divisor; if that prefix is empty, truncate there and
    repeat.
    """
    _check_stage(stage)
    rays = _rays(stage)
    r = len(rays)
    while True:
        k1 = min(i for i in range(r) if rays[i] == rays[r - 1])
        if prefix_dim(stage, k1) >= 0:
            return _certificate(stage, k1, r)
        r = k1


def find_star_chain_bruteforce(stage: StageState) -> StarCertificate:
    """Independent formulation of :func:`find_star_chain`.

    The answer is the largest index that opens a block of equal rays and has
    a nonempty prefix; the recursion level is where that block ends.
    """
    _check_stage(stage)
    rays = _rays(stage)
    n = len(rays)
    starts = [i for i in range(n) if i == 0 or rays[i] != rays[i - 1]]
    # a chain sorted against the ample never revisits a ray
    for i in range(n):
        for j in range(i + 1, n):
            if rays[i] == rays[j] and any(rays[t] != rays[i] for t in range(i, j)):
                raise ConsistencyError("equal rays are not contiguous")
    k = max(g for g in starts if prefix_dim(stage, g) >= 0)
    r = next((g for g in starts if g > k), n)
    return _certificate(stage, k, r)


def edge_flags(k: int) -> EdgeFlags:
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return EdgeFlags(semiample=True, big=False, birational_off_prefix=False)
    return EdgeFlags(semiample=True, big=True, birational_off_prefix=True)


def classify_case(stage: StageState, cert: StarCertificate) -> Case:
    if cert.cond3_dim == stage.dim_x:
        return Case.CASE1
    if cert.cond3_dim == stage.dim_x - 1:
        return Case.CASE2
    return Case.CASE3


# -- small modifications ----------------------------------------------------------

def _stage_name(side: str, index: int) -> str:
    if index == 0:
        return "X"
    return f"X({index})" if side == "d" else f"X'({index})"


def sqm_step(stage: StageState, cert: StarCertificate, fam: Family,
             side: str = "d") -> tuple[Chamber, StageState]:
    """Pass to the modification flipping ``D_1 ∩ ... ∩ D_k``.

    The new stage keeps ``D_1, ..., D_k`` with the same classes, has its
    full prefix empty, and takes the sum of the primitive rays of ``D_k`` and
    ``D_{k+1}`` as its ample class.  Its nef cone is spanned by ``D_{l+1}``
    and ``D_{k+1}`` where ``l`` is the new stage's condition (*) index.
    """
    if classify_case(stage, cert) is not Case.CASE3:
        raise ConsistencyError("small modification requested outside Case 3")
    k = cert.k
    chain = stage.chain
    new_ample = normalize(chain[k - 1].cls).as_vec() + normalize(chain[k].cls).as_vec()
    new_stage = stage_view(fam.prefix_dims, stage.stage_index + 1, chain[:k], new_ample,
                           stage.dim_x, SIDE_NAMES[side])
    if prefix_dim(new_stage, k) != -1:
        raise ConsistencyError(f"stage {new_stage.stage_index}: prefix {k} must be empty after the flip")
    new_cert = find_star_chain(new_stage)
    l = new_cert.k
    if l >= k:
        raise ConsistencyError(f"stage {new_stage.stage_index}: l = {l} is not below k = {k}")
    chamber = Chamber(
        _stage_name(side, new_stage.stage_index),
        normalize(chain[l].cls), normalize(chain[k].cls),
        edge_flags(l), edge_flags(k),
    )
    return chamber, new_stage


def _trace(side: str, stage: StageState, cert: StarCertificate, case: Case) -> StageTrace:
    return StageTrace(
        stage_name=_stage_name(side, stage.stage_index),
        stage_index=stage.stage_index,
        labels=tuple(e.label for e in stage.chain),
        rays=tuple(normalize(e.cls) for e in stage.chain),
        stage_ample=stage.stage_ample,
        dims=stage.dims,
        dims_source=stage.dims_source,
        certificate=cert,
        case=case,
    )


def run_side(scenario: Scenario, side: str, ample: ClassVec) -> SideResult:
    """Walk one family outward from Nef(X) until a fibration or contraction edge."""
    fam = scenario.family(side)
    chain = order_chain(ample, fam)
    stage = stage_view(fam.prefix_dims, 0, chain, ample, scenario.dim_x, SIDE_NAMES[side])
    cert = find_star_chain(stage)
    nef_edge, nef_flags = normalize(chain[cert.k].cls), edge_flags(cert.k)
    chambers, ks, cases, stages = [], [cert.k], [], []
    while True:
        case = classify_case(stage, cert)
        cases.append(case)
        stages.append(_trace(side, stage, cert, case))
        if case is not Case.CASE3:
            break
        chamber, stage = sqm_step(stage, cert, fam, side)
        cert = find_star_chain(stage)
        if cert.k >= ks[-1]:
            raise ConsistencyError(f"k sequence {ks + [cert.k]} is not strictly decreasing")
        chambers.append(chamber)
        ks.append(cert.k)

    first = stage.chain[0]
    if case is Case.CASE1:
        mov_edge = normalize(first.cls)
        eff_edge = EffEdge("known", mov_edge)
    else:
        mov_edge = normalize(stage.chain[cert.k].cls)
        if fam.contracted_class is not None:
            eff_edge = EffEdge("known", normalize(fam.contracted_class))
        elif cert.k == 1 and fam.irreducible_first:
            eff_edge = EffEdge("known", normalize(first.cls))
        else:
            eff_edge = EffEdge("bounded_beyond", normalize(first.cls))
    return SideResult(side, nef_edge, nef_flags, tuple(chambers), mov_edge, eff_edge,
                      tuple(ks), tuple(cases), tuple(stages))


# -- assembly ---------------------------------------------------------------------

def check_tiling(chambers, mov: Cone2) -> None:
    """Raise ConsistencyError unless ``chambers`` tile ``mov`` without overlap."""
    if mov.kind is not cone2.ConeKind.WEDGE:
        raise ConsistencyError(f"movable cone {mov} is not a strictly convex wedge")
    start, end = mov.rays
    pairs = []
    for ch in chambers:
        a, b = ch.left, ch.right
        if cone2.cross(a, b) < 0:
            a, b = b, a
        pairs.append((a, b))
    # sweep counterclockwise from the start edge of Mov
    pairs.sort(key=lambda p: cone2.angle_key(_rotate_to(start, p[0])))
    cursor = start
    for a, b in pairs:
        if a != cursor:
            raise ConsistencyError(f"chambers do not meet along a shared ray at {cursor}")
        cursor = b
    if cursor != end:
        raise ConsistencyError(f"chambers stop at {cursor} before the Mov edge {end}")


def _rotate_to(origin: Ray, r: Ray) -> ClassVec:
    # coordinates of r in the frame whose first axis is origin
    return ClassVec(cone2.dot(origin, r), cone2.cross(origin, r))


def labeled_rays(scenario: Scenario) -> tuple[LabeledRay, ...]:
    groups: dict[Ray, list[str]] = {}
    for fam in (scenario.family_d, scenario.family_dp):
        for e in fam.entries:
            groups.setdefault(normalize(e.cls), []).append(e.label)
    ordered = sorted(groups, key=cone2.angle_key)
    return tuple(LabeledRay(r, tuple(groups[r])) for r in ordered)


def certify(nef_x: Chamber, sides, mov: Cone2, eff: EffCone, ample: ClassVec) -> MdsCertificate:
    chambers = [nef_x] + [ch for s in sides for ch in s.chambers]
    semiample = all(ch.left_flags.semiample and ch.right_flags.semiample for ch in chambers)
    try:
        check_tiling(chambers, mov)
        tiled = True
    except ConsistencyError:
        tiled = False
    nef = nef_x.cone
    ample_inside = (cone2.contains(nef, ample)
                    and cone2.cross(nef_x.left, ample) != 0 and cone2.cross(nef_x.right, ample) != 0)
    conditions = (
        ("edges_semiample", semiample),
        ("chambers_tile_mov", tiled),
        ("k_sequences_decreasing", all(
            all(a > b for a, b in zip(s.k_sequence, s.k_sequence[1:])) for s in sides)),
        ("ample_in_nef_interior", ample_inside),
        ("nef_in_mov", cone2.is_subcone(nef, mov)),
        ("mov_in_eff", cone2.is_subcone(mov, eff.cone) if eff.known else True),
    )
    return MdsCertificate(semiample and tiled, conditions)


def run_decomposition(scenario: Scenario) -> DecompositionReport:
    """Compute every chamber of Mov(X) together with the Mov and Eff edges."""
    vr = validate(scenario)
    if not vr.ok:
        raise ValidationFailed(vr)
    cone_d = cone2.cone_hull(scenario.family_d.classes)
    cone_dp = cone2.cone_hull(scenario.family_dp.classes)
    first, second = ("d", "dp")
    if cone2.contains(cone_d, scenario.ample):
        first, second = second, first
    other_cone = cone_dp if first == "d" else cone_d

    result_first = run_side(scenario, first, scenario.ample)
    a_prime = cone2.separating_ample(scenario.ample, result_first.nef_edge.as_vec(), other_cone)
    result_second = run_side(scenario, second, a_prime)
    side_d, side_dp = (result_first, result_second) if first == "d" else (result_second, result_first)

    if side_d.nef_edge == side_dp.nef_edge:
        raise ConsistencyError("both nef edges span the same ray")
    nef_x = Chamber("X", side_d.nef_edge, side_dp.nef_edge, side_d.nef_flags, side_dp.nef_flags)
    mov = cone2.cone_hull([side_d.mov_edge, side_dp.mov_edge])
    check_tiling([nef_x, *side_d.chambers, *side_dp.chambers], mov)

    eff_rays = [side_d.eff_edge.ray, side_dp.eff_edge.ray]
    bounded = [(name, s) for name, s in (("family_d", side_d), ("family_dp", side_dp))
               if not s.eff_edge.known]
    notes = tuple(
        f"{name}: contracted divisor class undetermined at k = {s.k_sequence[-1]}; "
        f"the Eff edge lies at or beyond {s.eff_edge.ray}"
        for name, s in bounded)
    eff = EffCone(not bounded, cone2.cone_hull(eff_rays), notes)
    cert = certify(nef_x, (side_d, side_dp), mov, eff, scenario.ample)

    report_notes = []
    synthesized = [t.stage_name for s in (side_d, side_dp) for t in s.stages if t.dims_source == "generic_ci"]
    if synthesized:
        report_notes.append("prefix dimensions synthesized (generic complete intersection) at: "
                            + ", ".join(synthesized))
    for name, s in (("family_d", side_d), ("family_dp", side_dp)):
        fam = scenario.family(s.side)
        if s.case_trace[-1] is Case.CASE2 and fam.contracted_class is None and s.eff_edge.known:
            report_notes.append(f"{name}: Eff edge taken from the first divisor, assumed irreducible (k = 1)")
    return DecompositionReport(
        scenario=scenario.name,
        dim_x=scenario.dim_x,
        basis_labels=scenario.basis_labels,
        ample=scenario.ample,
        rays=labeled_rays(scenario),
        nef_x=nef_x,
        side_d=side_d,
        side_dp=side_dp,
        mov=mov,
        eff=eff,
        mds_certificate=cert,
        first_side=first,
        separating_ample=a_prime,
        notes=tuple(report_notes),
    )
