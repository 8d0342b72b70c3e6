"""
JSON, CSV and OBJ codecs for the toolkit's results.

Floats are written with ``repr`` so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import sys
from contextlib import contextmanager
from typing import Any, Dict, IO, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from crkit.errors import InvalidArgument, NotRationalType
from crkit.geometry.fig8 import Fig8Report, ScanGrid
from crkit.geometry.flows import Mesh, OrbitPolyline
from crkit.geometry.isometry import (
    EllipticType,
    FixedPoint,
    Kind,
    NormalForm,
    classify,
    elliptic_type,
    fixed_points,
)
from crkit.geometry.models import (
    BALL,
    INFINITY,
    SIEGEL,
    BoundaryPoint,
    CCircle,
    HeisPoint,
    Location,
    Model,
    heis_project,
)
from crkit.geometry.surgery import Slope


def complex_json(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and {"re", "im"} <= set(value):
        return complex(float(value["re"]), float(value["im"]))
    raise InvalidArgument("complex numbers are [re, im] pairs", value=str(value))


def matrix_to_json(m) -> List[List[List[float]]]:
    """Row-major 3x3 of [re, im] pairs."""
    return [[complex_json(x) for x in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, dict):
        data = data.get("matrix")
    if not isinstance(data, (list, tuple)) or len(data) != 3:
        raise InvalidArgument("matrix must have three rows")
    rows = []
    for row in data:
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise InvalidArgument("matrix rows must have three entries")
        rows.append([complex_from_json(x) for x in row])
    return np.array(rows, dtype=complex)


def load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as e:
        raise InvalidArgument(f"cannot read matrix file {path!r}", reason=str(e))
    return matrix_from_json(data)


def heis_to_json(h) -> Dict[str, Any]:
    if h.is_infinite:
        return {"inf": True}
    return {"z": complex_json(h.z), "t": h.t}


def heis_from_json(data) -> BoundaryPoint:
    if isinstance(data, dict) and data.get("inf"):
        return INFINITY
    try:
        return HeisPoint(complex_from_json(data["z"]), float(data["t"]))
    except (KeyError, TypeError):
        raise InvalidArgument("Heisenberg points are {z: [re, im], t: real}")


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


# =========================
# Reports
# =========================

def elliptic_type_json(etype: Optional[EllipticType]) -> Optional[Dict[str, Any]]:
    if etype is None:
        return None
    return {
        "p": etype.p,
        "q": etype.q,
        "n": etype.n,
        "display": str(etype),
        "angles_turns": [str(a) for a in etype.angles],
    }


def _fixed_point_json(fp: FixedPoint) -> Dict[str, Any]:
    out = {
        "point": [complex_json(x) for x in fp.point.normalized()],
        "location": fp.location.value,
        "eigenvalue": complex_json(fp.eigenvalue),
    }
    if fp.point.model == SIEGEL and fp.location is Location.BOUNDARY:
        out["heisenberg"] = heis_to_json(heis_project(fp.point, 1e-8))
    return out


def classify_report(m, model: Model = BALL) -> Dict[str, Any]:
    cls = classify(m, model)
    report: Dict[str, Any] = {
        "kind": cls.kind.value,
        "regular": cls.regular,
        "unipotent": cls.unipotent,
        "model": model.name,
        "trace": complex_json(cls.trace),
        "f_of_trace": cls.f_of_trace,
        "eigenvalues": [complex_json(v) for v in cls.eigen.values],
    }
    if cls.kind not in (Kind.IDENTITY, Kind.AMBIGUOUS):
        report["fixed_points"] = [_fixed_point_json(fp) for fp in fixed_points(m, model)]
    if cls.kind.is_elliptic:
        try:
            report["elliptic_type"] = elliptic_type_json(elliptic_type(m, model))
        except NotRationalType:
            report["elliptic_type"] = None
    return report


def normal_form_report(nf: NormalForm) -> Dict[str, Any]:
    return {
        "kind": nf.kind.value,
        "model": nf.model.name,
        "representative": matrix_to_json(nf.representative),
        "conjugator": matrix_to_json(nf.conjugator),
    }


def slope_json(slope: Optional[Slope]) -> Optional[Dict[str, Any]]:
    if slope is None:
        return None
    return {"slope": slope.as_list(), "marking": slope.marking.name}


def fig8_report(report: Fig8Report) -> Dict[str, Any]:
    cls = report.classification
    return {
        "u": complex_json(report.u),
        "branch": report.branch,
        "delta": report.delta,
        "class": {
            "kind": cls.kind.value,
            "regular": cls.regular,
            "unipotent": cls.unipotent,
            "trace": complex_json(cls.trace),
            "f_of_trace": cls.f_of_trace,
            "eigenvalues": [complex_json(v) for v in cls.eigen.values],
        },
        "type": elliptic_type_json(report.etype),
        "inverse_type": elliptic_type_json(report.inverse_type),
        "outcome": None if report.outcome is None else report.outcome.as_dict(),
        "transported": slope_json(report.transported),
        "reconciliation": None if report.reconciliation is None else report.reconciliation.as_dict(),
    }


# =========================
# Files
# =========================

@contextmanager
def open_output(path: Optional[str], default: Optional[IO[str]] = None) -> Iterator[IO[str]]:
    """``None`` or ``-`` is ``default`` (stdout when not given)."""
    if path in (None, "-"):
        yield sys.stdout if default is None else default
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def write_orbit_csv(stream: IO[str], orbit: OrbitPolyline) -> None:
    coords = orbit.heisenberg()
    write_csv(stream, ("t", "x", "y", "z"),
              ([t, *xyz] for t, xyz in zip(orbit.t_values, coords)))


def write_circle_csv(stream: IO[str], circle: CCircle, count: int) -> None:
    thetas, points = circle.sample(count)
    rows = []
    for theta, p in zip(thetas, points):
        h = heis_project(p, 1e-8)
        if h.is_infinite:
            continue
        rows.append((theta, h.z.real, h.z.imag, h.t))
    write_csv(stream, ("theta", "z_re", "z_im", "t"), rows)


def write_scan_csv(stream: IO[str], grid: ScanGrid) -> None:
    header = ("x", "y", "delta", "f", "delta_sign", "f_sign", "in_component")
    write_csv(stream, header, ([r[k] for k in header] for r in grid.records()))


def write_contour_csv(stream: IO[str], segments) -> None:
    write_csv(stream, ("x1", "y1", "x2", "y2"),
              ((a[0], a[1], b[0], b[1]) for a, b in segments))


def write_obj(stream: IO[str], mesh: Mesh) -> None:
    for x, y, z in mesh.vertices:
        stream.write(f"v {float(x)!r} {float(y)!r} {float(z)!r}\n")
    for face in mesh.faces:
        stream.write("f " + " ".join(str(int(k) + 1) for k in face) + "\n")
