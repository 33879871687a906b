import json
import math
import os
import re

import pytest

from helpers import FIXTURES, GOLDEN
from moricone.engine import run_decomposition
from moricone.families import BlowupFanoParams, HypersurfaceParams, gen_blowup_fano_ci, gen_hypersurface_p1_pn
from moricone.model import load_scenario
from moricone.report import RenderSpec, render, report_from_dict, report_to_dict
from moricone.report.render import format_class

GOLDEN_CASES = {
    "blowup_n3.txt": RenderSpec("text"),
    "blowup_n3.json": RenderSpec("json", include_trace=True),
    "blowup_n3.svg": RenderSpec("svg"),
    "blowup_n3.ascii.txt": RenderSpec("ascii"),
}


@pytest.fixture(scope="module")
def blowup3():
    return run_decomposition(load_scenario(FIXTURES / "blowup_n3.json"))


def test_render_spec_checks():
    with pytest.raises(ValueError):
        RenderSpec("png")
    with pytest.raises(ValueError):
        RenderSpec("svg", width=0)


def test_format_class():
    labels = ("H", "E")
    assert format_class((3, -4), labels) == "3H-4E"
    assert format_class((0, 1), labels) == "E"
    assert format_class((-1, 0), labels) == "-H"
    assert format_class((-1, 3), ("O(1,0)", "O(0,1)")) == "-O(1,0)+3*O(0,1)"


def test_text_lines(blowup3):
    text = render(blowup3, RenderSpec("text")).decode()
    assert "Nef(X) = Cone(3H-4E, H)" in text
    assert "Eff(X) = Cone(H-2E, E)" in text
    assert "Mov(X) = Cone(2H-3E, H)" in text
    assert "Nef(X(1)) = Cone(2H-3E, 3H-4E)" in text
    assert "k-sequence [2, 1]" in text
    assert "MDS certificate: true" in text


def test_text_states_dimension_sources(blowup3):
    text = render(blowup3, RenderSpec("text")).decode()
    assert "prefix dimensions: family_d: X table, X(1) generic_ci; family_dp: X table" in text
    explicit = run_decomposition(load_scenario(FIXTURES / "blowup_n3_explicit.json"))
    assert "X(1) explicit" in render(explicit, RenderSpec("text")).decode()


def test_trace_section(blowup3):
    text = render(blowup3, RenderSpec("text", include_trace=True)).decode()
    assert "trace:" in text
    assert "[family_d] X(1): chain D1, D2" in text


def test_json_keys_and_rationals(blowup3):
    d = json.loads(render(blowup3, RenderSpec("json")))
    assert set(d) == {"scenario", "nef_x", "chambers", "mov", "eff", "mds_certificate", "trace"}
    assert d["scenario"]["ample"] == ["1/1", "-1/1"]
    assert d["mov"] == {"kind": "wedge", "rays": [[2, -3], [1, 0]]}


@pytest.mark.parametrize("scenario", [
    gen_blowup_fano_ci(BlowupFanoParams(6, (6,))),
    gen_blowup_fano_ci(BlowupFanoParams(7, (3, 3))),
    gen_hypersurface_p1_pn(HypersurfaceParams(2, 3, 4)),
])
def test_json_round_trip(scenario):
    rep = run_decomposition(scenario)
    d = json.loads(render(rep, RenderSpec("json", include_trace=True)))
    assert report_from_dict(d) == rep
    assert report_to_dict(report_from_dict(d)) == d


@pytest.mark.parametrize("fmt", ["text", "json", "svg", "ascii"])
def test_deterministic(blowup3, fmt):
    spec = RenderSpec(fmt, include_trace=True)
    first = render(blowup3, spec)
    again = render(run_decomposition(load_scenario(FIXTURES / "blowup_n3.json")), spec)
    assert first == again


def test_svg_rays_in_angular_order(blowup3):
    svg = render(blowup3, RenderSpec("svg")).decode()
    assert svg.startswith("<?xml")
    drawn = re.findall(r'id="ray-([^"]+)"', svg)
    coords = {"D1": (1, -2), "D2": (2, -3), "D3": (3, -4), "H": (1, 0), "E": (0, 1)}
    expected = sorted(coords, key=lambda k: math.atan2(coords[k][1], coords[k][0]) % (2 * math.pi))
    assert drawn == expected
    assert sorted(re.findall(r'id="label-([^"]+)"', svg)) == sorted(coords)
    assert len(re.findall(r'id="chamber-', svg)) == 2


def test_svg_canvas_size(blowup3):
    svg = render(blowup3, RenderSpec("svg", width=400, height=300)).decode()
    assert 'width="288pt"' in svg and 'height="216pt"' in svg


def test_ascii_legend(blowup3):
    art = render(blowup3, RenderSpec("ascii")).decode()
    assert "# D1" in art and "* D3" in art
    assert "Nef(X(1)) = Cone(2H-3E, 3H-4E)" in art


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(blowup3, name):
    data = render(blowup3, GOLDEN_CASES[name])
    path = GOLDEN / name
    if os.environ.get("UPDATE_GOLDENS"):
        path.write_bytes(data)
    assert data == path.read_bytes()
