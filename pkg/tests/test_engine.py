import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import FIXTURES, random_scenario, random_stage, scaled
from moricone import cone2
from moricone.cone2 import Ray, normalize, vec
from moricone.engine import (Case, check_tiling, classify_case, edge_flags, find_star_chain,
                             find_star_chain_bruteforce, order_chain, run_decomposition,
                             run_side, sqm_step)
from moricone.errors import ConsistencyError, ValidationFailed
from moricone.families import (BlowupFanoParams, HypersurfaceParams, gen_blowup_fano_ci,
                               gen_hypersurface_p1_pn)
from moricone.model import DivisorEntry, StageState, load_scenario, stage_view


def blowup(n):
    return gen_blowup_fano_ci(BlowupFanoParams(n + 1, (n + 1,)))


def hyper(a, b, n):
    return gen_hypersurface_p1_pn(HypersurfaceParams(a, b, n))


def stage0(s, side="d", ample=None):
    ample = ample or s.ample
    fam = s.family(side)
    return stage_view(fam.prefix_dims, 0, order_chain(ample, fam), ample, s.dim_x)


class TestOrderChain:
    def test_blowup_order(self):
        s = blowup(3)
        fam = s.family_d
        shuffled = type(fam)((fam.entries[1], fam.entries[0], fam.entries[2]), fam.prefix_dims)
        got = [e.cls for e in order_chain(vec(4, -3), shuffled)]
        assert got == [vec(1, -2), vec(2, -3), vec(3, -4)]

    def test_ample_in_family_cone(self):
        with pytest.raises(cone2.ConeError):
            order_chain(vec(2, -3), blowup(3).family_d)


class TestStarChain:
    def test_blowup_stage0(self):
        cert = find_star_chain(stage0(blowup(3)))
        assert cert.k == 2
        assert cert.cond3_dim == 1
        assert cert.cond2_ok

    def test_equal_rays_empty_pair(self):
        chain = (DivisorEntry("A", vec(1, 0)), DivisorEntry("B", vec(2, 0)))
        stage = StageState(0, chain, (3, -1, -1), "table", vec(1, 1), 3)
        assert find_star_chain(stage).k == 0
        assert find_star_chain_bruteforce(stage).k == 0

    def test_hypersurface_stage0(self):
        st0 = stage0(hyper(2, 3, 3))
        assert find_star_chain(st0).k == 2
        assert find_star_chain_bruteforce(st0) == find_star_chain(st0)

    def test_recursion_truncates(self):
        # the last ray group starts at an empty prefix, so the search steps back
        chain = (DivisorEntry("A", vec(-1, 1)), DivisorEntry("B", vec(0, 1)),
                 DivisorEntry("C", vec(1, 1)))
        stage = StageState(0, chain, (4, 3, -1, -1), "table", vec(2, 1), 4)
        cert = find_star_chain(stage)
        assert cert.k == 1 and cert.cond4_bound == 0
        assert find_star_chain_bruteforce(stage) == cert

    def test_unsorted_chain_rejected(self):
        chain = tuple(reversed(order_chain(vec(1, -1), blowup(3).family_d)))
        with pytest.raises(ConsistencyError, match="not sorted"):
            find_star_chain(StageState(0, chain, (3, 2, 1, -1), "table", vec(1, -1), 3))

    @settings(max_examples=300)
    @given(st.integers(0, 2**32))
    def test_matches_bruteforce(self, seed):
        stage = random_stage(random.Random(seed))
        assert find_star_chain(stage) == find_star_chain_bruteforce(stage)


class TestFlagsAndCases:
    def test_flags(self):
        assert not edge_flags(0).big
        assert edge_flags(1).big
        f = edge_flags(2)
        assert f.big and f.birational_off_prefix and f.semiample

    def test_cases_blowup(self):
        st0 = stage0(blowup(3))
        c0 = find_star_chain(st0)
        assert classify_case(st0, c0) is Case.CASE3
        _, st1 = sqm_step(st0, c0, blowup(3).family_d)
        assert classify_case(st1, find_star_chain(st1)) is Case.CASE2


class TestSqmStep:
    def test_blowup(self):
        s = blowup(3)
        st0 = stage0(s)
        chamber, st1 = sqm_step(st0, find_star_chain(st0), s.family_d)
        assert chamber.stage_name == "X(1)"
        assert {chamber.left, chamber.right} == {Ray(2, -3), Ray(3, -4)}
        assert st1.stage_ample == vec(5, -7)
        assert find_star_chain(st1).k == 1

    def test_hypersurface(self):
        s = hyper(2, 3, 3)
        st0 = stage0(s)
        chamber, st1 = sqm_step(st0, find_star_chain(st0), s.family_d)
        assert {chamber.left, chamber.right} == {Ray(-1, 3), Ray(0, 1)}
        assert find_star_chain(st1).k == 0

    def test_outside_case3(self):
        s = blowup(3)
        st0 = stage0(s, "dp", vec(7, -9))
        with pytest.raises(ConsistencyError):
            sqm_step(st0, find_star_chain(st0), s.family_dp, "dp")


class TestRunSide:
    def test_blowup_d(self):
        side = run_side(blowup(3), "d", vec(1, -1))
        assert side.k_sequence == (2, 1)
        assert side.mov_edge == Ray(2, -3)
        assert side.eff_edge.known and side.eff_edge.ray == Ray(1, -2)
        assert [c.stage_name for c in side.chambers] == ["X(1)"]

    def test_blowup_dp(self):
        rep = run_decomposition(blowup(3))
        dp = rep.side_dp
        assert dp.k_sequence == (1,)
        assert dp.case_trace == (Case.CASE2,)
        assert dp.mov_edge == Ray(1, 0)
        assert dp.eff_edge.known and dp.eff_edge.ray == Ray(0, 1)

    def test_hypersurface_a1(self):
        side = run_side(hyper(1, 2, 3), "d", vec(1, 1))
        assert side.k_sequence == (1,)
        assert side.case_trace == (Case.CASE2,)
        assert side.mov_edge == Ray(0, 1)
        assert side.eff_edge.known and side.eff_edge.ray == Ray(-1, 2)


class TestDecomposition:
    def test_blowup3(self):
        rep = run_decomposition(blowup(3))
        assert rep.nef_x.cone == cone2.Cone2.wedge(vec(3, -4), vec(1, 0))
        assert {ch.cone for ch in rep.chambers} == {
            cone2.Cone2.wedge(vec(3, -4), vec(1, 0)), cone2.Cone2.wedge(vec(2, -3), vec(3, -4))}
        assert rep.mov == cone2.Cone2.wedge(vec(2, -3), vec(1, 0))
        assert rep.eff.known and rep.eff.cone == cone2.Cone2.wedge(vec(1, -2), vec(0, 1))
        assert rep.mds_certificate.holds

    def test_hypersurface_a1(self):
        rep = run_decomposition(hyper(1, 2, 3))
        assert len(rep.chambers) == 1
        assert rep.mov == rep.nef_x.cone == cone2.Cone2.wedge(vec(1, 0), vec(0, 1))
        assert rep.eff.cone == cone2.Cone2.wedge(vec(1, 0), vec(-1, 2))

    def test_hypersurface_a2(self):
        rep = run_decomposition(hyper(2, 3, 3))
        assert {ch.cone for ch in rep.chambers} == {
            cone2.Cone2.wedge(vec(1, 0), vec(0, 1)), cone2.Cone2.wedge(vec(0, 1), vec(-1, 3))}
        assert rep.mov == cone2.Cone2.wedge(vec(1, 0), vec(-1, 3))

    def test_explicit_tables_match_generic(self):
        a = run_decomposition(load_scenario(FIXTURES / "blowup_n3.json"))
        b = run_decomposition(load_scenario(FIXTURES / "blowup_n3_explicit.json"))
        assert [c.cone for c in a.chambers] == [c.cone for c in b.chambers]
        assert (a.mov, a.eff) == (b.mov, b.eff)
        assert b.side_d.stages[1].dims_source == "explicit"

    def test_invalid_scenario(self):
        with pytest.raises(ValidationFailed, match="family_sizes"):
            run_decomposition(load_scenario(FIXTURES / "bad_r1.json"))

    def test_generic_stages_noted(self):
        rep = run_decomposition(blowup(4))
        assert any("X(1), X(2)" in n for n in rep.notes)

    def test_ample_in_d_cone_runs_dp_first(self):
        s = blowup(3)
        # an ample class inside Cone(D) sends the search to the other family first
        flipped = type(s)(s.name, s.dim_x, s.basis_labels, vec(5, -7), s.family_d, s.family_dp)
        rep = run_decomposition(flipped)
        assert rep.first_side == "dp"
        assert rep.side_dp.nef_edge == Ray(1, 0)
        assert rep.mov == cone2.Cone2.wedge(vec(2, -3), vec(1, 0))

    def test_bounded_eff_edge(self):
        # contracted class unknown at k = 2: Eff edge is only bounded
        chain = [DivisorEntry(f"D{i}", vec(1, -2)) for i in (1, 2)] + [DivisorEntry("D3", vec(1, -1))]
        s = blowup(3)
        fam = type(s.family_d)(tuple(chain), type(s.family_d.prefix_dims)("generic_ci", (3, 2, 2, -1)))
        rep = run_decomposition(type(s)("b", 3, ("H", "E"), vec(2, -1), fam, s.family_dp))
        assert not rep.eff.known
        assert rep.side_d.eff_edge.kind == "bounded_beyond"
        assert rep.eff.notes


class TestTiling:
    def test_gap_detected(self):
        rep = run_decomposition(blowup(4))
        with pytest.raises(ConsistencyError):
            check_tiling([rep.chambers[0], rep.chambers[2]], rep.mov)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_random_invariants(self, seed):
        rng = random.Random(seed)
        s = random_scenario(rng)
        rep = run_decomposition(s)
        for side in (rep.side_d, rep.side_dp):
            ks = side.k_sequence
            assert all(a > b for a, b in zip(ks, ks[1:]))
            assert side.case_trace[-1] in (Case.CASE1, Case.CASE2)
        check_tiling(rep.chambers, rep.mov)
        assert cone2.is_subcone(rep.nef_x.cone, rep.mov)
        assert cone2.is_subcone(rep.mov, rep.eff.cone)
        again = run_decomposition(scaled(s, rng))
        assert [c.cone for c in again.chambers] == [c.cone for c in rep.chambers]
        assert (again.mov, again.eff.cone) == (rep.mov, rep.eff.cone)


def test_deterministic():
    a = run_decomposition(blowup(5))
    assert a == run_decomposition(blowup(5))
    assert normalize(a.ample) == Ray(1, -1)
