"""Random scenario and stage generators shared by the test modules."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from pathlib import Path

from moricone.cone2 import ClassVec, angle_key, angular_sort, normalize
from moricone.model import (DimsMode, DivisorEntry, Family, PrefixDimSpec,
                            Scenario, StageState)

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def random_vec(rng: random.Random, bound: int = 12) -> ClassVec:
    while True:
        x, y = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if x or y:
            return ClassVec(Fraction(x, rng.randint(1, 4)), Fraction(y, rng.randint(1, 4)))


def upper_ray_vec(rng: random.Random, bound: int = 9) -> ClassVec:
    """A nonzero integer class strictly above the horizontal axis."""
    return ClassVec(rng.randint(-bound, bound), rng.randint(1, bound))


def random_table(rng: random.Random, dim_x: int, r: int) -> tuple[int, ...]:
    """Non-increasing prefix table: steps keep, drop by one, or go empty."""
    t = [dim_x]
    for j in range(1, r):
        prev = t[-1]
        if prev == -1:
            t.append(-1)
            continue
        options = [prev - 1, -1] if j == 1 else [prev, prev - 1, -1]
        t.append(max(rng.choice(options), -1))
    t.append(-1)
    return tuple(t)


def random_stage(rng: random.Random, max_size: int = 8) -> StageState:
    """A stage with a sorted chain of random rays inside an open half-plane."""
    size = rng.randint(1, max_size)
    n_rays = rng.randint(1, size)
    rays = []
    while len(rays) < n_rays:
        r = normalize(upper_ray_vec(rng))
        if r not in rays:
            rays.append(r)
    classes = [rng.choice(rays).as_vec().scale(rng.randint(1, 3)) for _ in range(size)]
    # ample on the far side of the family, still in the upper half-plane
    ample = _ample_beyond(sorted({normalize(c) for c in classes}, key=angle_key)[-1])
    entries = [DivisorEntry(f"D{i + 1}", c) for i, c in enumerate(classes)]
    chain = tuple(angular_sort(ample, entries, key=lambda e: e.cls))
    dim_x = rng.randint(max(size, 1), max(size, 1) + 3)
    return StageState(0, chain, random_table(rng, dim_x, size), "table", ample, dim_x)


def _ample_beyond(r) -> ClassVec:
    # a class a little counterclockwise of r that stays above the axis
    return ClassVec(4 * r.u - 1, 4 * r.v)


def random_scenario(rng: random.Random, name: str = "random") -> Scenario:
    """A scenario that passes validation, with generic tables past stage 0."""
    while True:
        dim_x = rng.randint(3, 8)
        total = rng.randint(4, 2 * dim_x)
        rays = sorted({normalize(upper_ray_vec(rng)) for _ in range(total)}, key=angle_key)
        if len(rays) < 2:
            continue
        cut = rng.randint(1, len(rays) - 1)
        lo, hi = rays[:cut], rays[cut:]
        ample = lo[-1].as_vec() + hi[0].as_vec()
        r_d, r_dp = rng.randint(2, dim_x), rng.randint(2, dim_x)
        fam_d = _random_family(rng, lo, r_d, dim_x, "D")
        fam_dp = _random_family(rng, hi, r_dp, dim_x, "D'")
        return Scenario(name, dim_x, ("A", "B"), ample, fam_d, fam_dp)


def _random_family(rng, rays, size, dim_x, prefix) -> Family:
    picks = [rng.choice(rays) for _ in range(size)]
    entries = [DivisorEntry(f"{prefix}{i + 1}", r.as_vec().scale(rng.randint(1, 3)))
               for i, r in enumerate(picks)]
    rng.shuffle(entries)
    spec = PrefixDimSpec(DimsMode.GENERIC_CI, random_table(rng, dim_x, size))
    return Family(tuple(entries), spec)


def scaled(s: Scenario, rng: random.Random) -> Scenario:
    """The same scenario with every class multiplied by a positive rational."""
    def pos():
        return Fraction(rng.randint(1, 9), rng.randint(1, 9))

    def fam(f: Family) -> Family:
        entries = tuple(DivisorEntry(e.label, e.cls.scale(pos())) for e in f.entries)
        return Family(entries, f.prefix_dims, f.contracted_class, f.irreducible_first)

    return Scenario(s.name, s.dim_x, s.basis_labels, s.ample.scale(pos()),
                    fam(s.family_d), fam(s.family_dp))


def float_angle(v) -> float:
    a = math.atan2(float(v.y), float(v.x))
    return a + 2 * math.pi if a < 0 else a
