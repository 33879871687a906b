"""Exact rational cone arithmetic in a rank-2 real vector space.

Every class is a pair of :class:`fractions.Fraction` coordinates in a fixed
basis, and every decision (membership, ordering, hull shape) reduces to the
sign of a 2x2 determinant.  No floating point is used anywhere in this module.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import ConeError

T = TypeVar("T")

NOT_ORDERABLE = "family not ⪰_A-orderable against this ample class"


@dataclass(frozen=True)
class ClassVec:
    """A divisor class ``x * e1 + y * e2`` with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _to_fraction(self.x))
        object.__setattr__(self, "y", _to_fraction(self.y))

    def __add__(self, other: ClassVec) -> ClassVec:
        return ClassVec(self.x + other.x, self.y + other.y)

    def __neg__(self) -> ClassVec:
        return ClassVec(-self.x, -self.y)

    def scale(self, c) -> ClassVec:
        c = _to_fraction(c)
        return ClassVec(self.x * c, self.y * c)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __iter__(self):
        yield self.x
        yield self.y

    def __str__(self):
        return f"({self.x}, {self.y})"


def _to_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coordinates")
    if isinstance(value, float):
        raise TypeError("floating point coordinates are not accepted; use Fraction or 'p/q'")
    return Fraction(value)


def vec(x, y) -> ClassVec:
    """Shorthand constructor: ``vec(1, "-2/3")``."""
    return ClassVec(x, y)


@dataclass(frozen=True, order=True)
class Ray:
    """Primitive integer direction ``(u, v)`` standing for the half-line R_+ (u, v)."""

    u: int
    v: int

    def __post_init__(self):
        if self.u == 0 and self.v == 0:
            raise ConeError("zero class has no ray")
        if math.gcd(self.u, self.v) != 1:
            raise ConeError(f"ray ({self.u}, {self.v}) is not primitive")

    def as_vec(self) -> ClassVec:
        return ClassVec(self.u, self.v)

    def __neg__(self) -> Ray:
        return Ray(-self.u, -self.v)

    def __iter__(self):
        yield self.u
        yield self.v

    def __str__(self):
        return f"({self.u}, {self.v})"


def _as_vec(v) -> ClassVec:
    if isinstance(v, ClassVec):
        return v
    if isinstance(v, Ray):
        return v.as_vec()
    x, y = v
    return ClassVec(x, y)


def normalize(v) -> Ray:
    """Return the primitive integer ray positively proportional to ``v``."""
    v = _as_vec(v)
    if v.is_zero():
        raise ConeError("zero class has no ray")
    den = v.x.denominator * v.y.denominator // math.gcd(v.x.denominator, v.y.denominator)
    u, w = int(v.x * den), int(v.y * den)
    g = math.gcd(u, w)
    return Ray(u // g, w // g)


def cross(u, v) -> Fraction:
    u, v = _as_vec(u), _as_vec(v)
    return u.x * v.y - u.y * v.x


def dot(u, v) -> Fraction:
    u, v = _as_vec(u), _as_vec(v)
    return u.x * v.x + u.y * v.y


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def _half(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    return 0 if v.y > 0 or (v.y == 0 and v.x > 0) else 1


def angle_cmp(a, b) -> int:
    """Three-way comparison of polar angles in [0, 2 pi), exact."""
    a, b = _as_vec(a), _as_vec(b)
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    return -_sign(cross(a, b))


angle_key = functools.cmp_to_key(angle_cmp)


class ConeKind(enum.Enum):
    ZERO = "zero"
    RAY = "ray"
    WEDGE = "wedge"
    HALFPLANE = "halfplane"
    LINE = "line"
    FULL = "full"


@dataclass(frozen=True)
class Cone2:
    """A closed convex cone in the plane, in canonical form.

    ``rays`` holds the boundary data of the variant: nothing for ZERO and
    FULL, one ray for RAY and LINE, and a counterclockwise pair for WEDGE
    (opening strictly between 0 and pi) and HALFPLANE (opposite rays).
    Construct through :func:`cone_hull` or the classmethods.
    """

    kind: ConeKind
    rays: tuple[Ray, ...] = ()

    @classmethod
    def zero(cls) -> Cone2:
        return cls(ConeKind.ZERO)

    @classmethod
    def full(cls) -> Cone2:
        return cls(ConeKind.FULL)

    @classmethod
    def ray(cls, r) -> Cone2:
        return cls(ConeKind.RAY, (normalize(r),))

    @classmethod
    def line(cls, r) -> Cone2:
        r = normalize(r)
        if _half(r.as_vec()) == 1:
            r = -r
        return cls(ConeKind.LINE, (r,))

    @classmethod
    def wedge(cls, a, b) -> Cone2:
        a, b = normalize(a), normalize(b)
        if cross(a, b) <= 0:
            raise ConeError(f"wedge ({a}, {b}) is not counterclockwise with opening < pi")
        return cls(ConeKind.WEDGE, (a, b))

    @classmethod
    def halfplane(cls, start) -> Cone2:
        start = normalize(start)
        return cls(ConeKind.HALFPLANE, (start, -start))

    def generators(self) -> tuple[Ray, ...]:
        """A finite generating set (boundary rays plus an interior ray where needed)."""
        if self.kind is ConeKind.ZERO:
            return ()
        if self.kind is ConeKind.FULL:
            return (Ray(1, 0), Ray(0, 1), Ray(-1, 0), Ray(0, -1))
        if self.kind is ConeKind.LINE:
            return (self.rays[0], -self.rays[0])
        if self.kind is ConeKind.HALFPLANE:
            a = self.rays[0]
            return (a, Ray(-a.v, a.u), -a)
        return self.rays

    def __str__(self):
        if self.kind is ConeKind.ZERO:
            return "{0}"
        if self.kind is ConeKind.FULL:
            return "Full"
        return f"{self.kind.value.capitalize()}({', '.join(str(r) for r in self.rays)})"


def cone_hull(vs: Iterable) -> Cone2:
    """Smallest closed convex cone containing every class in ``vs``."""
    rays: list[Ray] = []
    for v in vs:
        r = normalize(v)
        if r not in rays:
            rays.append(r)
    if not rays:
        return Cone2.zero()
    if len(rays) == 1:
        return Cone2.ray(rays[0])
    rays.sort(key=angle_key)
    m = len(rays)
    pi_gap = None
    for i in range(m):
        p, q = rays[i], rays[(i + 1) % m]
        c = cross(p, q)
        if c < 0:
            # counterclockwise gap from p to q exceeds pi; everything else fits in < pi
            return Cone2.wedge(q, p)
        if c == 0:
            pi_gap = (p, q)
    if pi_gap is None:
        return Cone2.full()
    if m == 2:
        return Cone2.line(rays[0])
    return Cone2.halfplane(pi_gap[1])


def contains(cone: Cone2, v) -> bool:
    """Set membership of the class ``v`` in ``cone`` (the origin is in every cone)."""
    v = _as_vec(v)
    if v.is_zero():
        return True
    kind = cone.kind
    if kind is ConeKind.ZERO:
        return False
    if kind is ConeKind.FULL:
        return True
    if kind is ConeKind.RAY:
        r = cone.rays[0]
        return cross(r, v) == 0 and dot(r, v) > 0
    if kind is ConeKind.LINE:
        return cross(cone.rays[0], v) == 0
    if kind is ConeKind.HALFPLANE:
        return cross(cone.rays[0], v) >= 0
    a, b = cone.rays
    return cross(a, v) >= 0 and cross(v, b) >= 0


def is_subcone(inner: Cone2, outer: Cone2) -> bool:
    return all(contains(outer, g) for g in inner.generators())


def meets_only_at_origin(c1: Cone2, c2: Cone2) -> bool:
    # A nonzero intersection always contains a boundary ray of one of the two
    # cones (or all of one cone when the other is the whole plane).
    if any(contains(c2, g) for g in c1.generators()):
        return False
    return not any(contains(c1, g) for g in c2.generators())


def strictly_convex(cone: Cone2) -> bool:
    return cone.kind in (ConeKind.ZERO, ConeKind.RAY, ConeKind.WEDGE)


def succeq(ample, d1, d2) -> bool:
    """``d1 >=_A d2``: whether ``d2`` lies in Cone(d1, ample).

    Solves ``d2 = alpha * d1 + beta * ample`` exactly by Cramer's rule and
    checks both coefficients are non-negative.
    """
    ample, d1, d2 = _as_vec(ample), _as_vec(d1), _as_vec(d2)
    if ample.is_zero() or d1.is_zero() or d2.is_zero():
        raise ConeError("zero class has no ray")
    det = cross(d1, ample)
    if det == 0:
        return contains(cone_hull([d1, ample]), d2)
    alpha = cross(d2, ample) / det
    beta = cross(d1, d2) / det
    return alpha >= 0 and beta >= 0


def angular_sort(ample, items: Sequence[T], key: Callable[[T], object] | None = None) -> list[T]:
    """Order ``items`` so that earlier entries dominate later ones under >=_A.

    The first entry is angularly farthest from ``ample``; entries on the same
    ray keep their input order.  ``key`` extracts the class from an item.
    """
    key = key or (lambda item: item)
    ample = _as_vec(ample)
    classes = [_as_vec(key(item)) for item in items]
    if ample.is_zero() or any(c.is_zero() for c in classes):
        raise ConeError(NOT_ORDERABLE + ": zero class")
    if not classes:
        return []
    hull = cone_hull(classes)
    if contains(hull, ample) or not strictly_convex(cone_hull(classes + [ample])):
        raise ConeError(NOT_ORDERABLE)
    # the ample class is an extreme ray off the family cone, so every class
    # lies strictly on one side of it
    side = _sign(cross(ample, classes[0]))

    def cmp(i: int, j: int) -> int:
        return -_sign(side * cross(classes[j], classes[i]))

    order = sorted(range(len(items)), key=functools.cmp_to_key(cmp))
    return [items[i] for i in order]


def separating_ample(ample, d_nef, avoid: Cone2, max_halvings: int = 64) -> ClassVec:
    """Return ``d_nef + eps * ample`` outside ``avoid`` for the largest dyadic ``eps``."""
    ample, d_nef = _as_vec(ample), _as_vec(d_nef)
    if ample.is_zero() or d_nef.is_zero():
        raise ConeError("zero class has no ray")
    if normalize(ample) == normalize(d_nef):
        raise ConeError("ample class and nef edge span the same ray")
    if contains(avoid, d_nef):
        raise ConeError("nef edge lies in the cone to avoid")
    for t in range(1, max_halvings + 1):
        candidate = d_nef + ample.scale(Fraction(1, 2**t))
        if not contains(avoid, candidate):
            return candidate
    raise ConeError(f"no separating ample class within 2^-{max_halvings}; inconsistent input cones")
