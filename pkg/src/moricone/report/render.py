"""Text and canonical-JSON renderings of a decomposition report."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from ..cone2 import Cone2, ConeKind, Ray
from ..engine import (Case, Chamber, DecompositionReport, EdgeFlags, EffCone,
                      EffEdge, LabeledRay, MdsCertificate, SideResult,
                      StageTrace, StarCertificate)
from ..model import class_to_json, parse_class

FORMATS = ("text", "json", "svg", "ascii")

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class RenderSpec:
    format: str = "text"
    include_trace: bool = False
    width: int = 640
    height: int = 640

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {', '.join(FORMATS)}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")


def format_class(v, labels) -> str:
    """Write a class as a combination of the basis labels, e.g. ``3H-4E``."""
    out = ""
    for coeff, label in zip(map(Fraction, v), labels):
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else ("+" if out else "")
        mag = abs(coeff)
        if mag == 1:
            body = label
        elif mag.denominator != 1:
            body = f"({mag}){label}" if _IDENT.match(label) else f"({mag})*{label}"
        else:
            body = f"{mag}{label}" if _IDENT.match(label) else f"{mag}*{label}"
        out += sign + body
    return out or "0"


def _flags_text(f: EdgeFlags) -> str:
    parts = ["semiample" if f.semiample else "not semiample", "big" if f.big else "not big"]
    if f.birational_off_prefix:
        parts.append("isomorphism off prefix")
    return ", ".join(parts)


def render_text(report: DecompositionReport, include_trace: bool = False) -> str:
    lb = report.basis_labels
    fc = lambda v: format_class(v, lb)  # noqa: E731
    cone = lambda a, b: f"Cone({fc(a)}, {fc(b)})"  # noqa: E731
    lines = [
        f"scenario: {report.scenario}",
        f"dim X = {report.dim_x}; basis ({lb[0]}, {lb[1]}); ample {fc(report.ample)}",
    ]
    sources = []
    for s in (report.side_d, report.side_dp):
        name = "family_d" if s.side == "d" else "family_dp"
        if s.stages:
            sources.append(f"{name}: " + ", ".join(f"{t.stage_name} {t.dims_source}" for t in s.stages))
    if sources:
        lines.append("prefix dimensions: " + "; ".join(sources))
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append("")
    lines.append(f"Nef(X) = {cone(report.nef_x.left, report.nef_x.right)}")
    lines.append(f"chambers ({len(report.chambers)}):")
    for ch in report.chambers:
        lines.append(f"  Nef({ch.stage_name}) = {cone(ch.left, ch.right)}")
        lines.append(f"    {fc(ch.left)}: {_flags_text(ch.left_flags)}")
        lines.append(f"    {fc(ch.right)}: {_flags_text(ch.right_flags)}")
    d, dp = report.side_d, report.side_dp
    lines.append(f"Mov(X) = {cone(d.mov_edge, dp.mov_edge)}")
    if report.eff.known:
        lines.append(f"Eff(X) = {cone(d.eff_edge.ray, dp.eff_edge.ray)}")
    else:
        lines.append(f"Eff(X) contains {cone(d.eff_edge.ray, dp.eff_edge.ray)} (edge undetermined)")
        for note in report.eff.notes:
            lines.append(f"  {note}")
    for s in (d, dp):
        name = "family_d" if s.side == "d" else "family_dp"
        eff = fc(s.eff_edge.ray) + ("" if s.eff_edge.known else " (bound)")
        lines.append(
            f"{name}: k-sequence {list(s.k_sequence)}, cases {[c.value for c in s.case_trace]}, "
            f"Mov edge {fc(s.mov_edge)}, Eff edge {eff}")
    cert = report.mds_certificate
    lines.append(f"MDS certificate: {'true' if cert.holds else 'false'}")
    for name, ok in cert.conditions:
        lines.append(f"  {name}: {'true' if ok else 'false'}")
    if include_trace:
        lines.append("")
        lines.append("trace:")
        if report.separating_ample is not None:
            lines.append(f"  separating ample for the second side: {fc(report.separating_ample)}")
        for s in (d, dp):
            for t in s.stages:
                c = t.certificate
                lines.append(
                    f"  [{'family_d' if s.side == 'd' else 'family_dp'}] {t.stage_name}: "
                    f"chain {', '.join(t.labels)}; ample {fc(t.stage_ample)}; "
                    f"dims {list(t.dims)} ({t.dims_source}); k = {c.k}, "
                    f"dim prefix = {c.cond3_dim}, image bound = {c.cond4_bound}; {t.case.value}")
    return "\n".join(lines) + "\n"


# -- JSON -----------------------------------------------------------------------

def _ray(r: Ray) -> list[int]:
    return [r.u, r.v]


def _flags(f: EdgeFlags) -> dict:
    return {"semiample": f.semiample, "big": f.big, "birational_off_prefix": f.birational_off_prefix}


def _cone(c: Cone2) -> dict:
    return {"kind": c.kind.value, "rays": [_ray(r) for r in c.rays]}


def _chamber(ch: Chamber) -> dict:
    return {"stage": ch.stage_name, "left": _ray(ch.left), "right": _ray(ch.right),
            "left_flags": _flags(ch.left_flags), "right_flags": _flags(ch.right_flags)}


def _stage(t: StageTrace) -> dict:
    c = t.certificate
    return {
        "stage": t.stage_name,
        "index": t.stage_index,
        "labels": list(t.labels),
        "rays": [_ray(r) for r in t.rays],
        "stage_ample": class_to_json(t.stage_ample),
        "dims": list(t.dims),
        "dims_source": t.dims_source,
        "certificate": {"k": c.k, "semiample_reason": c.semiample_reason, "cond2_ok": c.cond2_ok,
                        "cond3_dim": c.cond3_dim, "cond4_bound": c.cond4_bound},
        "case": t.case.value,
    }


def _side(s: SideResult, include_trace: bool) -> dict:
    out = {
        "nef_edge": _ray(s.nef_edge),
        "nef_flags": _flags(s.nef_flags),
        "chambers": [ch.stage_name for ch in s.chambers],
        "mov_edge": _ray(s.mov_edge),
        "eff_edge": {"kind": s.eff_edge.kind, "ray": _ray(s.eff_edge.ray)},
        "k_sequence": list(s.k_sequence),
        "case_trace": [c.value for c in s.case_trace],
    }
    if include_trace:
        out["stages"] = [_stage(t) for t in s.stages]
    return out


def report_to_dict(report: DecompositionReport, include_trace: bool = True) -> dict:
    return {
        "scenario": {
            "name": report.scenario,
            "dim_x": report.dim_x,
            "basis_labels": list(report.basis_labels),
            "ample": class_to_json(report.ample),
            "rays": [{"ray": _ray(lr.ray), "labels": list(lr.labels)} for lr in report.rays],
            "notes": list(report.notes),
        },
        "nef_x": _chamber(report.nef_x),
        "chambers": [_chamber(ch) for ch in report.chambers],
        "mov": _cone(report.mov),
        "eff": {"known": report.eff.known, "cone": _cone(report.eff.cone), "notes": list(report.eff.notes)},
        "mds_certificate": {"holds": report.mds_certificate.holds,
                            "conditions": [[n, ok] for n, ok in report.mds_certificate.conditions]},
        "trace": {
            "first_side": report.first_side,
            "separating_ample": (class_to_json(report.separating_ample)
                                 if report.separating_ample is not None else None),
            "sides": {"d": _side(report.side_d, include_trace), "dp": _side(report.side_dp, include_trace)},
        },
    }


def render_json(report: DecompositionReport, include_trace: bool = False) -> str:
    return json.dumps(report_to_dict(report, include_trace), indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"


def _ray_in(v) -> Ray:
    return Ray(int(v[0]), int(v[1]))


def _flags_in(d) -> EdgeFlags:
    return EdgeFlags(d["semiample"], d["big"], d["birational_off_prefix"])


def _cone_in(d) -> Cone2:
    return Cone2(ConeKind(d["kind"]), tuple(_ray_in(r) for r in d["rays"]))


def _chamber_in(d) -> Chamber:
    return Chamber(d["stage"], _ray_in(d["left"]), _ray_in(d["right"]),
                   _flags_in(d["left_flags"]), _flags_in(d["right_flags"]))


def _stage_in(d) -> StageTrace:
    c = d["certificate"]
    return StageTrace(
        stage_name=d["stage"],
        stage_index=d["index"],
        labels=tuple(d["labels"]),
        rays=tuple(_ray_in(r) for r in d["rays"]),
        stage_ample=parse_class(d["stage_ample"], "stage_ample"),
        dims=tuple(d["dims"]),
        dims_source=d["dims_source"],
        certificate=StarCertificate(c["k"], c["semiample_reason"], c["cond2_ok"], c["cond3_dim"],
                                    c["cond4_bound"]),
        case=Case(d["case"]),
    )


def _side_in(name: str, d, chambers: dict[str, Chamber]) -> SideResult:
    return SideResult(
        side=name,
        nef_edge=_ray_in(d["nef_edge"]),
        nef_flags=_flags_in(d["nef_flags"]),
        chambers=tuple(chambers[s] for s in d["chambers"]),
        mov_edge=_ray_in(d["mov_edge"]),
        eff_edge=EffEdge(d["eff_edge"]["kind"], _ray_in(d["eff_edge"]["ray"])),
        k_sequence=tuple(d["k_sequence"]),
        case_trace=tuple(Case(c) for c in d["case_trace"]),
        stages=tuple(_stage_in(t) for t in d.get("stages", [])),
    )


def report_from_dict(d) -> DecompositionReport:
    """Inverse of :func:`report_to_dict` (lossless when the trace was included)."""
    sc = d["scenario"]
    chambers = {c["stage"]: _chamber_in(c) for c in d["chambers"]}
    trace = d["trace"]
    sep = trace["separating_ample"]
    return DecompositionReport(
        scenario=sc["name"],
        dim_x=sc["dim_x"],
        basis_labels=tuple(sc["basis_labels"]),
        ample=parse_class(sc["ample"], "ample"),
        rays=tuple(LabeledRay(_ray_in(r["ray"]), tuple(r["labels"])) for r in sc["rays"]),
        nef_x=_chamber_in(d["nef_x"]),
        side_d=_side_in("d", trace["sides"]["d"], chambers),
        side_dp=_side_in("dp", trace["sides"]["dp"], chambers),
        mov=_cone_in(d["mov"]),
        eff=EffCone(d["eff"]["known"], _cone_in(d["eff"]["cone"]), tuple(d["eff"]["notes"])),
        mds_certificate=MdsCertificate(d["mds_certificate"]["holds"],
                                       tuple((n, ok) for n, ok in d["mds_certificate"]["conditions"])),
        first_side=trace["first_side"],
        separating_ample=parse_class(sep, "separating_ample") if sep is not None else None,
        notes=tuple(sc["notes"]),
    )


def render(report: DecompositionReport, spec: RenderSpec) -> bytes:
    """Render ``report`` in the requested format; output is byte-deterministic."""
    if spec.format == "text":
        return render_text(report, spec.include_trace).encode("utf-8")
    if spec.format == "json":
        return render_json(report, spec.include_trace).encode("utf-8")
    from . import figures
    if spec.format == "svg":
        return figures.render_svg(report, spec.width, spec.height)
    return figures.render_ascii(report).encode("utf-8")

