"""Artifact exports, run reports, and the coefficient cache.

All curve exports are deterministic byte-for-byte for identical inputs:
floats are written with repr (shortest round-trip), no timestamps appear in
CSV/OBJ output, and component ordering follows the deterministic trace order.

Report schema (validate_report checks exactly this shape):

    inputs:   knot?, braid, strands, construction, m, a_inv, mu_inv?, w,
              n_slices, grid, window {r_min, r_max, z_min, z_max}, samples
    stages:   construct {status, critical_points, critical_values,
                         winding_word, winding_matches_input, cache_key,
                         cache_hit, n_coefficients, degree}
              trace     {status, n_slices, slice_count_min, slice_count_max,
                         n_closed, n_open, newton_failures, ambiguous_links,
                         selected {points_per_slice, axis_winding,
                                   mean_radius, n_points}}
              verify    {status, ...verdict report fields}
    verdict:  match | mirror_match | mismatch
    timings:  construct, trace, verify, total  (seconds)
    artifacts: coefficients, curves_csv, curves_obj, components_json, report
"""

from __future__ import annotations

import hashlib
import json
import colorsys
from pathlib import Path

import numpy as np

REPORT_FIELDS = {
    "inputs": dict,
    "stages": dict,
    "verdict": str,
    "timings": dict,
    "artifacts": dict,
}

STAGE_NAMES = ("construct", "trace", "verify")


def validate_report(report: dict) -> None:
    """Raise ValueError unless the report matches the documented field list."""
    for key, typ in REPORT_FIELDS.items():
        if key not in report:
            raise ValueError(f"report missing field {key!r}")
        if not isinstance(report[key], typ):
            raise ValueError(f"report field {key!r} must be {typ.__name__}")
    extra = set(report) - set(REPORT_FIELDS)
    if extra:
        raise ValueError(f"report has undocumented fields {sorted(extra)}")
    for stage in report["stages"]:
        if stage not in STAGE_NAMES:
            raise ValueError(f"unknown stage {stage!r} in report")
        if "status" not in report["stages"][stage]:
            raise ValueError(f"stage {stage!r} missing status")
    for t in ("construct", "trace", "verify", "total"):
        if t not in report["timings"]:
            raise ValueError(f"timings missing {t!r}")


def cache_key(parts: dict) -> str:
    """Content hash over the construction-relevant configuration."""
    canonical = "\n".join(f"{k}={parts[k]}" for k in sorted(parts))
    return hashlib.sha256(canonical.encode()).hexdigest()[:24]


def write_curves_csv(path: Path, curves: list, open_chains: list) -> None:
    """component id, slice index, R, phi, z; closed components first."""
    lines = ["component,slice,closed,R,phi,z"]
    for cid, curve in enumerate(list(curves) + list(open_chains)):
        closed = int(curve.closed)
        for j in range(curve.n_slices):
            for (R, z) in np.atleast_2d(curve.slice_points[j]) if len(curve.slice_points[j]) else []:
                lines.append(f"{cid},{j},{closed},{R!r},{curve.phis[j]!r},{z!r}")
    path.write_text("\n".join(lines) + "\n")


def write_curves_obj(path: Path, curves: list, open_chains: list) -> None:
    """OBJ-style polylines: v x y z records plus one l record per component."""
    vlines: list[str] = []
    llines: list[str] = []
    offset = 1
    for curve in list(curves) + list(open_chains):
        samples = curve.samples
        if len(samples) == 0:
            continue
        for (R, phi, z) in samples:
            x, y = R * np.cos(phi), R * np.sin(phi)
            vlines.append(f"v {x!r} {y!r} {z!r}")
        idx = list(range(offset, offset + len(samples)))
        if curve.closed:
            idx.append(offset)
        llines.append("l " + " ".join(map(str, idx)))
        offset += len(samples)
    path.write_text("\n".join(vlines + llines) + "\n")


def components_summary(curves: list, open_chains: list) -> list[dict]:
    out = []
    for cid, curve in enumerate(list(curves) + list(open_chains)):
        n_points = int(sum(len(p) for p in curve.slice_points))
        out.append({
            "component": cid,
            "closed": curve.closed,
            "points_per_slice": curve.points_per_slice,
            "axis_winding": curve.axis_winding,
            "n_points": n_points,
            "mean_radius": curve.mean_radius() if n_points else None,
        })
    return out


def write_components_json(path: Path, curves: list, open_chains: list) -> None:
    path.write_text(json.dumps(components_summary(curves, open_chains), indent=2,
                               sort_keys=True) + "\n")


def write_phase_pixmap(path: Path, values: np.ndarray, modulate: bool = False) -> None:
    """P6 pixmap of arg(values) hue-mapped; optional |values| brightness modulation.

    values is a 2D complex array; rows map to image rows top-down.
    Deterministic bytes for identical inputs.
    """
    arg = np.angle(values)
    hue = (arg + np.pi) / (2 * np.pi)
    if modulate:
        mag = np.abs(values)
        vmax = mag.max() or 1.0
        val = np.sqrt(mag / vmax)
    else:
        val = np.ones_like(hue)
    h, w = values.shape
    rgb = np.empty((h, w, 3), dtype=np.uint8)
    for i in range(h):
        for j in range(w):
            r, g, b = colorsys.hsv_to_rgb(hue[i, j] % 1.0, 1.0, val[i, j])
            rgb[i, j] = (int(r * 255), int(g * 255), int(b * 255))
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(rgb.tobytes())
