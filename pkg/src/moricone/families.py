"""Scenario generators for the standard example families.

* hypersurfaces of bidegree (a, b) in P^1 x P^n,
* blowups of a Fano complete intersection Z in P^N at a general point,
* hypersurfaces in P^k x P^{n+1-k}, whose cones are all spanned by the two
  pullbacks of O(1) and which never need a small modification.

Generators bake the generic-position dimension counts into prefix tables;
nothing here checks genericity or ampleness geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import cone2
from .cone2 import ClassVec, Cone2, Ray, normalize
from .engine import (Case, Chamber, DecompositionReport, EffCone, EffEdge,
                     LabeledRay, MdsCertificate, SideResult, edge_flags)
from .errors import ParameterError
from .model import DimsMode, DivisorEntry, Family, PrefixDimSpec, Scenario

NOT_COVERED = "not covered"


@dataclass(frozen=True)
class HypersurfaceParams:
    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0 or self.n < max(self.a, 3):
            raise ParameterError(
                f"need a, b > 0 and n ≥ max{{a, 3}} for a hypersurface in P^1 x P^n; "
                f"got a={self.a}, b={self.b}, n={self.n}")


@dataclass(frozen=True)
class BlowupFanoParams:
    N: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if not self.degrees or any(d < 2 for d in self.degrees):
            raise ParameterError(f"degrees must be a nonempty list of integers >= 2, got {list(self.degrees)}")
        if sum(self.degrees) > self.N:
            raise ParameterError(
                f"Z is not Fano: -K_Z = O({self.N + 1 - sum(self.degrees)}) needs "
                f"sum of degrees ≤ N (sum = {sum(self.degrees)}, N = {self.N})")
        if self.n < 3:
            raise ParameterError(f"need dim Z = N - s ≥ 3, got {self.n}")

    @property
    def s(self) -> int:
        return len(self.degrees)

    @property
    def n(self) -> int:
        return self.N - self.s

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.degrees)


@dataclass(frozen=True)
class PkPlParams:
    k: int
    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.n < 3 or self.a <= 0 or self.b <= 0:
            raise ParameterError(f"need n ≥ 3 and a, b > 0; got a={self.a}, b={self.b}, n={self.n}")
        if not 2 <= self.k <= self.n - 1:
            raise ParameterError(f"need 2 ≤ k ≤ n-1; got k={self.k}, n={self.n}")


def _generic_table(dim_x: int, r: int) -> tuple[int, ...]:
    return tuple(dim_x - j for j in range(r)) + (-1,)


def _family(entries, dim_x, contracted=None) -> Family:
    dims = PrefixDimSpec(DimsMode.GENERIC_CI, _generic_table(dim_x, len(entries)))
    return Family(tuple(entries), dims, contracted_class=contracted)


def gen_hypersurface_p1_pn(p: HypersurfaceParams) -> Scenario:
    """General member of |O(a, b)| on P^1 x P^n.

    The first ``a`` divisors have class O(-1, b) and meet in P^1 x W with
    ``dim W = n - a - 1``; the remaining ``n - a`` are pullbacks of general
    hyperplanes of P^n.  The other family is two general members of O(1, 0).
    """
    a, b, n = p.a, p.b, p.n
    d = [DivisorEntry(f"D{i}", ClassVec(-1, b)) for i in range(1, a + 1)]
    d += [DivisorEntry(f"D{i}", ClassVec(0, 1)) for i in range(a + 1, n + 1)]
    dp = [DivisorEntry("D'1", ClassVec(1, 0)), DivisorEntry("D'2", ClassVec(1, 0))]
    return Scenario(
        name=f"p1pn_a{a}_b{b}_n{n}",
        dim_x=n,
        basis_labels=("O(1,0)", "O(0,1)"),
        ample=ClassVec(1, 1),
        family_d=_family(d, n),
        family_dp=_family(dp, n),
    )


def gen_blowup_fano_ci(p: BlowupFanoParams) -> Scenario:
    """Blowup of a general Fano complete intersection at a general point.

    Basis (H, E).  Degree ``d_j`` contributes classes ``iH - (i+1)E`` for
    ``1 ≤ i ≤ d_j - 1``; the remaining ``n - Σ(d_j - 1)`` divisors are
    pullbacks of hyperplanes through the point, of class ``H - E``.  The other
    family is ``E`` and ``H`` with ``E`` the divisor contracted by ``H``.
    """
    n = p.n
    classes = [ClassVec(i, -(i + 1)) for aj in p.a for i in range(1, aj + 1)]
    classes += [ClassVec(1, -1)] * (n - sum(p.a))
    # innermost D-ray: H - E when hyperplane pullbacks are present
    innermost = ClassVec(1, -1) if n > sum(p.a) else ClassVec(max(p.a), -(max(p.a) + 1))
    ample = normalize(ClassVec(1, 0) + innermost).as_vec()
    ordered = cone2.angular_sort(ample, classes)
    d = [DivisorEntry(f"D{i}", c) for i, c in enumerate(ordered, start=1)]
    dp = [DivisorEntry("E", ClassVec(0, 1)), DivisorEntry("H", ClassVec(1, 0))]
    return Scenario(
        name=f"blowup_N{p.N}_d{'-'.join(map(str, p.degrees))}",
        dim_x=n,
        basis_labels=("H", "E"),
        ample=ample,
        family_d=_family(d, n),
        family_dp=_family(dp, n, contracted=ClassVec(0, 1)),
    )


def kodaira_dim_pk_pl(p: PkPlParams):
    """Kodaira dimension of a hypersurface of bidegree (a, b) in P^k x P^{n+1-k}.

    Returns ``-math.inf``, ``0``, ``k`` or ``n``; parameters where the
    canonical class is ``O(0, positive)`` are outside the closed-form table
    and give :data:`NOT_COVERED`.
    """
    k, a, b, n = p.k, p.a, p.b, p.n
    if a <= k or b <= n + 1 - k:
        return -math.inf
    if a == k + 1 and b == n + 2 - k:
        return 0
    if a >= k + 2 and b == n + 2 - k:
        return k
    if a >= k + 2 and b >= n + 3 - k:
        return n
    return NOT_COVERED


def gen_pk_pl_scenario(p: PkPlParams) -> Scenario:
    """Scenario form of the P^k x P^{n+1-k} family.

    ``k + 1`` general members of |O(1, 0)| and ``n + 2 - k`` of |O(0, 1)| have
    empty intersections; both counts lie in ``[2, n]`` exactly when
    ``2 ≤ k ≤ n - 1``.
    """
    k, n = p.k, p.n
    d = [DivisorEntry(f"D{i}", ClassVec(1, 0)) for i in range(1, k + 2)]
    dp = [DivisorEntry(f"D'{i}", ClassVec(0, 1)) for i in range(1, n + 3 - k)]
    return Scenario(
        name=f"pkpl_k{k}_a{p.a}_b{p.b}_n{n}",
        dim_x=n,
        basis_labels=("O(1,0)", "O(0,1)"),
        ample=ClassVec(1, 1),
        family_d=_family(d, n),
        family_dp=_family(dp, n),
    )


def gen_pk_pl_trivial(p: PkPlParams) -> DecompositionReport:
    """Single-chamber report: Nef = Mov = Eff = Cone(O(1,0), O(0,1)).

    Both generators are semiample and not big, so no small modification is
    needed and the engine is bypassed.
    """
    h1, h2 = Ray(1, 0), Ray(0, 1)
    flat = edge_flags(0)

    def side(name, edge):
        return SideResult(name, edge, flat, (), edge, EffEdge("known", edge), (0,), (Case.CASE1,))

    cone = Cone2.wedge(h1, h2)
    nef_x = Chamber("X", h1, h2, flat, flat)
    conditions = (("edges_semiample", True), ("chambers_tile_mov", True),
                  ("k_sequences_decreasing", True), ("ample_in_nef_interior", True),
                  ("nef_in_mov", True), ("mov_in_eff", True))
    return DecompositionReport(
        scenario=f"pkpl_k{p.k}_a{p.a}_b{p.b}_n{p.n}",
        dim_x=p.n,
        basis_labels=("O(1,0)", "O(0,1)"),
        ample=ClassVec(1, 1),
        rays=(LabeledRay(h1, ("O(1,0)",)), LabeledRay(h2, ("O(0,1)",))),
        nef_x=nef_x,
        side_d=side("d", h1),
        side_dp=side("dp", h2),
        mov=cone,
        eff=EffCone(True, cone),
        mds_certificate=MdsCertificate(True, conditions),
        notes=("direct report: O(1,0) and O(0,1) are semiample and not big; no chamber search run",),
    )
