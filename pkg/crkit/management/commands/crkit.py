"""
python manage.py crkit <command> [flags]

One subcommand per toolkit operation. JSON goes to stdout (or --out), CSV
and OBJ files to --out. Angles are in turns unless --radians is given.
"""
from __future__ import annotations

import argparse
import logging
import math
from typing import Tuple

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from crkit import export
from crkit.errors import NotRationalType
from crkit.geometry import fig8, flows
from crkit.geometry.isometry import EllipticType, classify, elliptic_type, normal_form, p_zs
from crkit.geometry.linalg import random_su21
from crkit.geometry.models import (
    BALL,
    SIEGEL,
    HeisPoint,
    ProjectivePoint,
    cayley_transfer,
    get_model,
    heis_embed,
)
from crkit.geometry.surgery import (
    Slope,
    change_marking,
    figure_eight_marking,
    get_marking,
    surgery_outcome,
)

logger = logging.getLogger("crkit.cli")


def _range(text: str) -> Tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise CommandError(f"ranges are lo:hi, got {text!r}")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise CommandError(f"not a complex number: {text!r}")


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise CommandError(f"not a number: {text!r}")


def _pair(text: str, parse) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise CommandError(f"expected two comma-separated values, got {text!r}")
    return parse(parts[0]), parse(parts[1])


def _ints(text: str, count: int) -> Tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        values = ()
    if len(values) != count:
        raise CommandError(f"expected {count} comma-separated integers, got {text!r}")
    return values


class Command(BaseCommand):
    help = "Complex hyperbolic toolkit: classification, flows, surgery slopes, figure-eight family."

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, default=None, help="seed for random inputs")
        common.add_argument("--out", default=None, help="output file (default stdout)")
        common.add_argument("--radians", action="store_true", help="angles in radians, not turns")
        common.add_argument("--threads", type=int, default=1, help="worker threads for scans")
        common.add_argument("--branch", type=int, default=1, choices=[1, -1], help="sign of sqrt(Delta)")
        common.add_argument("--orientation", type=int, default=None, choices=[1, -1],
                            help="sign of l in the figure-eight marking")

        sub = parser.add_subparsers(dest="action", required=True)

        def command(name):
            return sub.add_parser(name, parents=[common])

        p = command("classify")
        p.add_argument("--matrix", help="JSON matrix file; random element from --seed otherwise")
        p.add_argument("--model", default="ball")

        p = command("normal-form")
        p.add_argument("--matrix")
        p.add_argument("--model", default="ball")

        p = command("orbit")
        p.add_argument("--family", required=True, choices=[f.value for f in flows.FlowFamily])
        p.add_argument("--alpha", type=float, default=0.0)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--lam", default="2")
        p.add_argument("--z", default="1")
        p.add_argument("--s", type=float, default=0.0)
        p.add_argument("--theta", type=float, default=0.0)
        p.add_argument("--start", default="0.6,0.8",
                       help="Z1,Z2 for the elliptic family, z,t (Heisenberg) otherwise")
        p.add_argument("--t", default="0:1", help="time range lo:hi")
        p.add_argument("--steps", type=int, default=200)

        p = command("surface")
        p.add_argument("--family", required=True, choices=[f.value for f in flows.SurfaceFamily])
        p.add_argument("--r", type=float, required=True)
        p.add_argument("--z", default="1", help="translation of the anchor P_{z,0} for planes")
        p.add_argument("--res", type=int, default=32)
        p.add_argument("--extent", type=float, default=2.0)

        p = command("horotube")
        p.add_argument("--z", default="1")
        p.add_argument("--s", type=float, default=0.0)
        p.add_argument("--center", default="0,1", help="circle center x,t in Heisenberg coordinates")
        p.add_argument("--radius", type=float, default=0.5)
        p.add_argument("--t", default="-2:2")
        p.add_argument("--res", type=int, default=32)

        p = command("axis")
        p.add_argument("--matrix")
        p.add_argument("--model", default="siegel")
        p.add_argument("--count", type=int, default=256)

        p = command("linking")
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--r", type=float, default=0.5)
        p.add_argument("--steps", type=int, default=2000)
        p.add_argument("--twist", type=float, default=math.pi / 5)

        command("fig8-rho0")

        p = command("fig8-eval")
        p.add_argument("--u", required=True)
        p.add_argument("--word", default=None)

        p = command("fig8-scan")
        p.add_argument("--x", default="0:5")
        p.add_argument("--y", default="-2:2")
        p.add_argument("--res", type=int, default=400)
        p.add_argument("--contour", choices=["delta", "f"], default=None)

        p = command("fig8-classify")
        p.add_argument("--u", default=None)
        p.add_argument("--p", type=int, default=None)
        p.add_argument("--n", type=int, default=None)

        p = command("slope-change")
        p.add_argument("--slope", required=True, help="a,b")
        p.add_argument("--from", dest="source", default="(l,m)")
        p.add_argument("--to", dest="target", default="(l0,m0)")

        p = command("outcome")
        p.add_argument("--matrix")
        p.add_argument("--model", default="ball")
        p.add_argument("--type", dest="etype", default=None, help="p,q,n")

    # -- helpers

    def _angle(self, value: float, options) -> float:
        return value if options["radians"] else 2 * math.pi * value

    def _matrix(self, options):
        if options.get("matrix"):
            return export.load_matrix(options["matrix"])
        if options["seed"] is None:
            raise CommandError("give --matrix or --seed")
        return random_su21(options["seed"], get_model(options["model"]).form)

    def _output(self, options):
        return export.open_output(options["out"], self.stdout)

    def _emit_json(self, payload, options):
        with self._output(options) as fh:
            fh.write(export.dumps(payload) + "\n")

    # -- commands

    def handle(self, *args, **options):
        action = options["action"]
        logger.info("crkit %s", action)
        getattr(self, "cmd_" + action.replace("-", "_"))(options)
        logger.info("crkit %s done", action)

    def cmd_classify(self, options):
        model = get_model(options["model"])
        self._emit_json(export.classify_report(self._matrix(options), model), options)

    def cmd_normal_form(self, options):
        model = get_model(options["model"])
        self._emit_json(export.normal_form_report(normal_form(self._matrix(options), model)), options)

    def cmd_orbit(self, options):
        family = flows.FlowFamily(options["family"])
        params = {
            "alpha": self._angle(options["alpha"], options),
            "beta": self._angle(options["beta"], options),
            "lam": _complex(options["lam"]),
            "z": _complex(options["z"]),
            "s": options["s"],
            "theta": self._angle(options["theta"], options),
        }
        gen = flows.family_generator(family, params)
        a, b = _pair(options["start"], _complex)
        if family is flows.FlowFamily.ELLIPTIC:
            start = ProjectivePoint(np.array([a, b, 1], dtype=complex), BALL)
        else:
            start = heis_embed(HeisPoint(a, b.real))
        t0, t1 = _range(options["t"])
        orbit = flows.sample_orbit(gen, start, t0, t1, options["steps"])
        with self._output(options) as fh:
            export.write_orbit_csv(fh, orbit)

    def cmd_surface(self, options):
        anchor = p_zs(_complex(options["z"]), 0.0)
        surface = flows.InvariantSurface(flows.SurfaceFamily(options["family"]), options["r"], anchor)
        mesh = flows.surface_mesh(surface, options["res"], options["extent"])
        with self._output(options) as fh:
            export.write_obj(fh, mesh)

    def cmd_horotube(self, options):
        p = p_zs(_complex(options["z"]), options["s"])
        cx, ct = _pair(options["center"], _float)
        angles = np.linspace(0, 2 * math.pi, options["res"], endpoint=False)
        circle = [heis_embed(HeisPoint(cx + options["radius"] * np.exp(1j * a), ct)) for a in angles]
        tube = flows.horotube_boundary(p, circle, _range(options["t"]), options["res"], SIEGEL)
        logger.info("horotube invariance residual %.2e", tube.invariance_residual)
        with self._output(options) as fh:
            export.write_obj(fh, tube.mesh)

    def cmd_axis(self, options):
        model = get_model(options["model"])
        m = self._matrix(options)
        if model != SIEGEL:
            m = cayley_transfer(m, model, SIEGEL)
        circle = flows.loxodromic_axis(m, SIEGEL)
        with self._output(options) as fh:
            export.write_circle_csv(fh, circle, options["count"])

    def cmd_linking(self, options):
        etype = EllipticType(options["p"], 1, options["n"])
        gen = flows.elliptic_generator(etype)
        r = options["r"]
        start = ProjectivePoint(np.array([math.sqrt(1 - r * r), r, 1], dtype=complex), BALL)
        orbit = flows.sample_orbit(gen, start, 0.0, float(etype.n), options["steps"])
        winding = flows.winding_numbers(orbit, etype)
        twist = options["twist"]
        angles = np.linspace(0, 2 * math.pi, 512, endpoint=False)
        knot = flows.chart_coordinates(orbit.ball_coordinates()[:-1], twist)
        axes = {
            "C1": flows.chart_coordinates([(0, np.exp(1j * a)) for a in angles], twist),
            "C2": flows.chart_coordinates([(np.exp(1j * a), 0) for a in angles], twist),
        }
        payload = {"type": str(etype), "winding": [winding.p, winding.q], "unknotted": winding.unknotted}
        for name, curve in axes.items():
            link = flows.gauss_linking(knot, curve)
            payload[name] = {"number": link.number, "value": link.value, "error": link.error}
        self._emit_json(payload, options)

    def _rep_payload(self, rep):
        return {
            "u": export.complex_json(rep.param.u),
            "delta": rep.param.delta,
            "g1": export.matrix_to_json(rep.g1),
            "g2": export.matrix_to_json(rep.g2),
            "g3": export.matrix_to_json(rep.g3),
            "form": export.matrix_to_json(rep.form),
            "residuals": rep.residuals,
        }

    def cmd_fig8_rho0(self, options):
        self._emit_json(self._rep_payload(fig8.rho0()), options)

    def cmd_fig8_eval(self, options):
        rep = fig8.family_rep(_complex(options["u"]), options["branch"])
        payload = self._rep_payload(rep)
        if options["word"] is not None:
            payload["word"] = export.matrix_to_json(fig8.word_eval(options["word"], rep))
        self._emit_json(payload, options)

    def cmd_fig8_scan(self, options):
        grid = fig8.scan_region(_range(options["x"]), _range(options["y"]), options["res"],
                                options["threads"])
        with self._output(options) as fh:
            if options["contour"]:
                export.write_contour_csv(fh, fig8.contour(grid, options["contour"]))
            else:
                export.write_scan_csv(fh, grid)

    def cmd_fig8_classify(self, options):
        if options["u"] is not None:
            u = _complex(options["u"])
        elif options["p"] is not None and options["n"] is not None:
            u = fig8.u_from_pn(options["p"], options["n"])
        else:
            raise CommandError("give --u or both --p and --n")
        report = fig8.classify_at(u, options["branch"], options["orientation"])
        self._emit_json(export.fig8_report(report), options)

    def cmd_slope_change(self, options):
        source = get_marking(options["source"], options["orientation"])
        target = get_marking(options["target"], options["orientation"])
        a, b = _ints(options["slope"], 2)
        moved = change_marking(Slope(a, b, source), target)
        self._emit_json(export.slope_json(moved), options)

    def cmd_outcome(self, options):
        model = get_model(options["model"])
        m = self._matrix(options)
        cls = classify(m, model)
        etype = None
        if options["etype"]:
            etype = EllipticType(*_ints(options["etype"], 3))
        elif cls.kind.is_elliptic:
            try:
                etype = elliptic_type(m, model)
            except NotRationalType:
                pass
        outcome = surgery_outcome(cls, etype, figure_eight_marking(options["orientation"]))
        self._emit_json(outcome.as_dict(), options)
