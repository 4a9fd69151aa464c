"""Deterministic JSON/CSV serialization shared by the CLI and the service.

Floats are written with 17 significant digits (round-trip exact for binary64)
so identical inputs always produce byte-identical output files and responses.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .dynamics import IdentityReport, TraceResult
from .errors import InputError
from .geom2d import PlanarPath, Point2, RegionMoments
from .holonomy import LoopHolonomy
from .menzin import MenzinReport, ScanRow
from .su11 import HolonomyClass, HolonomyKind, SU11Element


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise InputError(f"cannot serialize non-finite number {x}")
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Serialize to JSON with fixed float formatting; keys keep insert order."""
    out: list[str] = []
    _write(obj, out)
    return "".join(out)


def _write(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _write(v, out)
        out.append("]")
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")


def loads(text: str):
    return json.loads(text)


# ---------------------------------------------------------------------------
# Path schema: {"closed": bool, "vertices": [[x, y], ...]}

def path_to_obj(path: PlanarPath) -> dict:
    return {"closed": path.closed, "vertices": path.vertices.tolist()}


def path_from_obj(obj) -> PlanarPath:
    if not isinstance(obj, dict):
        raise InputError("path must be an object with 'closed' and 'vertices'")
    if "vertices" not in obj:
        raise InputError("path object is missing 'vertices'")
    closed = obj.get("closed", False)
    if not isinstance(closed, bool):
        raise InputError("'closed' must be a boolean")
    try:
        return PlanarPath(obj["vertices"], closed=closed)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad path: {exc}") from exc


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def su11_to_obj(m: SU11Element) -> dict:
    return {"a": _complex_pair(m.a), "b": _complex_pair(m.b)}


def su11_from_obj(obj) -> SU11Element:
    try:
        return SU11Element(complex(obj["a"][0], obj["a"][1]),
                           complex(obj["b"][0], obj["b"][1]))
    except (TypeError, KeyError, IndexError) as exc:
        raise InputError(f"bad SU(1,1) element: {exc}") from exc


def classification_to_obj(cls: HolonomyClass) -> dict:
    obj = {
        "kind": cls.kind.value,
        "trace": cls.trace,
        "fixed_points": [_complex_pair(z) for z in cls.fixed_points()],
        "multipliers": [],
    }
    if cls.kind is HolonomyKind.HYPERBOLIC:
        obj["multipliers"] = [cls.multiplier_attracting, cls.multiplier_repelling]
    elif cls.kind is HolonomyKind.PARABOLIC:
        obj["multipliers"] = [1.0]
    elif cls.kind is HolonomyKind.ELLIPTIC:
        obj["rotation_angle"] = cls.rotation_angle
    return obj


def holonomy_to_obj(hol: LoopHolonomy) -> dict:
    return {
        "element": su11_to_obj(hol.element),
        "base": [hol.base.x, hol.base.y],
        "trace": hol.element.trace,
        "classification": classification_to_obj(hol.classification),
        "winding_prediction": hol.winding_prediction,
    }


def menzin_report_to_obj(rep: MenzinReport) -> dict:
    return {
        "trace": rep.trace,
        "im_bd": rep.im_bd,
        "attracting": rep.attracting,
        "z_plus": _complex_pair(rep.z_plus) if rep.z_plus is not None else None,
        "z_minus": _complex_pair(rep.z_minus) if rep.z_minus is not None else None,
        "multiplier_plus": rep.multiplier_plus,
        "multiplier_minus": rep.multiplier_minus,
        "area": rep.area,
        "area_ratio": rep.area_ratio,
        "element": su11_to_obj(rep.element),
    }


def moments_to_obj(m: RegionMoments) -> dict:
    return {
        "area": m.area,
        "centroid": [m.centroid.x, m.centroid.y],
        "second_moment": m.second_moment,
        "mean_square_radius": m.mean_square_radius,
    }


def trace_to_obj(tr: TraceResult, samples: int = 256,
                 report: IdentityReport | None = None) -> dict:
    idx = tr.sample_indices(samples)
    chisel = tr.chisel_points
    obj = {
        "ell": tr.ell,
        "theta0": tr.theta0,
        "theta_final": tr.theta_final,
        "delta_theta": tr.delta_theta,
        "sigma": tr.sigma,
        "sigma_T": tr.sigma_T,
        "reading": tr.ell * tr.sigma,
        "swept_area": tr.swept_area,
        "max_constraint_defect": tr.max_constraint_defect,
        "states": [[tr.arclengths[i], tr.points[i, 0], tr.points[i, 1], tr.thetas[i]]
                   for i in idx],
        "chisel": [[chisel[i, 0], chisel[i, 1]] for i in idx],
        "report": None,
    }
    if report is not None:
        obj["report"] = {
            "a_region": report.a_region,
            "ell_sigma": report.ell_sigma,
            "a_gamma": report.a_gamma,
            "residual": report.residual,
        }
    return obj


# ---------------------------------------------------------------------------
# CSV

def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format_float(float(v)) if math.isfinite(v) else "nan"
    return str(v)


def csv_lines(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines += [",".join(_csv_cell(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def trace_to_csv(tr: TraceResult, samples: int | None = None) -> str:
    idx = tr.sample_indices(samples) if samples else np.arange(len(tr.thetas))
    chisel = tr.chisel_points
    rows = [[tr.arclengths[i], tr.points[i, 0], tr.points[i, 1], tr.thetas[i],
             chisel[i, 0], chisel[i, 1]] for i in idx]
    return csv_lines(["t", "x", "y", "theta", "chisel_x", "chisel_y"], rows)


def scan_to_csv(rows: list[ScanRow]) -> str:
    header = ["region_id", "n_vertices", "area", "area_over_pi_ell2", "trace",
              "kind", "winding", "marginal_flag"]
    body = [[r.region_id, r.n_vertices, r.area, r.area_over_pi_ell2, r.trace,
             r.kind if r.kind is not None else "error", r.winding, r.marginal_flag]
            for r in rows]
    return csv_lines(header, body)


# ---------------------------------------------------------------------------
# SVG export (presentational; coordinates in units of ell, y up)

def svg_document(curves: list[tuple[np.ndarray, str]], ell: float,
                 stroke_width: float = 0.02) -> str:
    """Overlay polyline curves, each (points array, css color)."""
    pts = np.vstack([c for c, _ in curves]) / ell
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = 0.05 * float(max(hi[0] - lo[0], hi[1] - lo[1], 1.0))
    west, south = lo - pad
    width, height = (hi - lo) + 2 * pad

    def fmt(v: float) -> str:
        return format(v, ".6g")

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{fmt(west)} {fmt(-south - height)} {fmt(width)} {fmt(height)}">'
    ]
    for points, color in curves:
        coords = " ".join(f"{fmt(x / ell)},{fmt(-y / ell)}" for x, y in points)
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="{fmt(stroke_width)}" points="{coords}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
