import json
import os
import tempfile
from io import StringIO

from django.test import SimpleTestCase

from crkit.cli import run
from crkit.export import matrix_to_json
from crkit.geometry.isometry import e_abg, p_zs, t_lambda


class CliTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def matrix_file(self, m, name="m.json"):
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(matrix_to_json(m), fh)
        return path

    def crkit(self, *argv):
        out, err = StringIO(), StringIO()
        code = run(list(argv), stdout=out, stderr=err)
        return code, out.getvalue(), err.getvalue()

    def crkit_json(self, *argv):
        code, out, err = self.crkit(*argv)
        self.assertEqual(code, 0, err)
        return json.loads(out)


class ExitCodeTests(CliTestCase):
    def test_usage_errors(self):
        for argv in ([], ["frobnicate"], ["fig8-classify"], ["fig8-scan", "--x", "0-5"],
                     ["slope-change", "--slope", "1,2,3"],
                     ["orbit", "--family", "elliptic", "--start", "0.5"],
                     ["orbit", "--family", "unipotent", "--start", "1,x"],
                     ["horotube", "--center", "1"], ["horotube", "--center", "0,t"]):
            with self.subTest(argv=argv):
                code, _, err = self.crkit(*argv)
                self.assertEqual(code, 1)
                self.assertTrue(err.startswith("usage error:"))

    def test_domain_error_is_structured(self):
        with self.assertLogs("crkit.cli", "WARNING"):
            code, out, err = self.crkit("fig8-eval", "--u", "5")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        payload = json.loads(err)
        self.assertEqual(payload["error"], "NegativeDelta")
        self.assertEqual(payload["module"], "fig8")
        self.assertLess(payload["details"]["delta"], 0)


class FigureEightCommandTests(CliTestCase):
    def test_classify_closing_parameter(self):
        report = self.crkit_json("fig8-classify", "--p", "3", "--n", "23")
        self.assertEqual(report["class"]["kind"], "RegularElliptic")
        self.assertEqual((report["type"]["p"], report["type"]["q"], report["type"]["n"]), (-3, 1, 23))
        self.assertEqual(report["outcome"], {"variant": "dehn", "slope": [23, -3], "marking": "(l,m)"})
        self.assertEqual(report["transported"], {"slope": [3, 14], "marking": "(l0,m0)"})
        self.assertFalse(report["reconciliation"]["agrees"])

    def test_classify_loxodromic_parameter(self):
        report = self.crkit_json("fig8-classify", "--u", "3.05")
        self.assertEqual(report["class"]["kind"], "Loxodromic")
        self.assertEqual(report["transported"]["slope"], [-1, 3])
        self.assertIsNone(report["type"])

    def test_rho0_and_eval(self):
        rho0 = self.crkit_json("fig8-rho0")
        self.assertEqual(rho0["u"], [3.0, 0.0])
        self.assertEqual(set(rho0["residuals"]), {"r1", "r2", "m0^3 l0^-1"})
        rep = self.crkit_json("fig8-eval", "--u", "3+0.05i", "--word", "ac")
        self.assertEqual(rep["u"], [3.0, 0.05])
        self.assertEqual(len(rep["word"]), 3)

    def test_scan_to_file(self):
        out = self.path("scan.csv")
        self.crkit("fig8-scan", "--res", "11", "--threads", "2", "--out", out)
        with open(out, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        self.assertEqual(lines[0], "x,y,delta,f,delta_sign,f_sign,in_component")
        self.assertEqual(len(lines), 1 + 11 * 11)

    def test_scan_is_reproducible(self):
        first = self.crkit("fig8-scan", "--res", "9", "--y=-1:1")
        second = self.crkit("fig8-scan", "--res", "9", "--y=-1:1", "--threads", "3")
        self.assertEqual(first, second)

    def test_contour(self):
        code, out, _ = self.crkit("fig8-scan", "--res", "21", "--contour", "delta")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "x1,y1,x2,y2")
        self.assertGreater(len(lines), 1)


class SlopeCommandTests(CliTestCase):
    def test_to_reference(self):
        self.assertEqual(self.crkit_json("slope-change", "--slope", "23,-3"),
                         {"slope": [3, 14], "marking": "(l0,m0)"})

    def test_from_reference(self):
        moved = self.crkit_json("slope-change", "--slope=-1,3", "--from", "(l0,m0)", "--to", "(l,m)")
        self.assertEqual(moved, {"slope": [0, 1], "marking": "(l,m)"})

    def test_orientation(self):
        moved = self.crkit_json("slope-change", "--slope", "0,1", "--orientation", "-1")
        self.assertEqual(moved["slope"], [-1, 3])

    def test_outcome_with_given_type(self):
        path = self.matrix_file(e_abg(0.4, 0.9))
        outcome = self.crkit_json("outcome", "--matrix", path, "--type", "2,1,5")
        self.assertEqual(outcome, {"variant": "dehn", "slope": [5, 2], "marking": "(l,m)"})

    def test_outcome_of_a_parabolic(self):
        path = self.matrix_file(p_zs(1, 0))
        self.assertEqual(self.crkit_json("outcome", "--matrix", path, "--model", "siegel"),
                         {"variant": "thickening"})


class IsometryCommandTests(CliTestCase):
    def test_classify_matrix_file(self):
        path = self.matrix_file(t_lambda(2))
        report = self.crkit_json("classify", "--matrix", path, "--model", "siegel")
        self.assertEqual(report["kind"], "Loxodromic")
        self.assertEqual(sorted(fp["location"] for fp in report["fixed_points"]),
                         ["boundary", "boundary", "exterior"])

    def test_classify_seed_is_deterministic(self):
        first = self.crkit("classify", "--seed", "4")
        self.assertEqual(first[0], 0)
        self.assertEqual(first, self.crkit("classify", "--seed", "4"))

    def test_classify_needs_input(self):
        code, _, _ = self.crkit("classify")
        self.assertEqual(code, 1)

    def test_missing_matrix_file(self):
        with self.assertLogs("crkit.cli", "WARNING"):
            code, _, err = self.crkit("classify", "--matrix", self.path("missing.json"))
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(err)["error"], "InvalidArgument")

    def test_normal_form(self):
        path = self.matrix_file(p_zs(2, 0))
        nf = self.crkit_json("normal-form", "--matrix", path, "--model", "siegel")
        self.assertEqual(nf["kind"], "HorizontalParabolic")
        self.assertAlmostEqual(nf["representative"][0][1][0], -1.0, places=7)

    def test_axis(self):
        path = self.matrix_file(t_lambda(2))
        code, out, _ = self.crkit("axis", "--matrix", path, "--count", "16")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "theta,z_re,z_im,t")
        for line in lines[1:]:
            _, z_re, z_im, _ = (float(x) for x in line.split(","))
            self.assertLess(abs(complex(z_re, z_im)), 1e-4)


class FlowCommandTests(CliTestCase):
    def test_elliptic_orbit(self):
        code, out, _ = self.crkit("orbit", "--family", "elliptic", "--alpha", "0.25", "--steps", "10")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "t,x,y,z")
        self.assertEqual(len(lines), 11)

    def test_unipotent_orbit(self):
        code, out, _ = self.crkit("orbit", "--family", "unipotent", "--z", "2", "--start", "0,0",
                                  "--steps", "5")
        self.assertEqual(code, 0)
        last = [float(x) for x in out.splitlines()[-1].split(",")]
        self.assertAlmostEqual(last[0], 1.0)
        self.assertAlmostEqual(last[1], 2.0, places=9)
        self.assertAlmostEqual(last[3], 0.0, places=9)

    def test_torus_mesh(self):
        code, out, _ = self.crkit("surface", "--family", "torus", "--r", "0.5", "--res", "8")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(sum(1 for x in lines if x.startswith("v ")), 64)
        self.assertEqual(sum(1 for x in lines if x.startswith("f ")), 64)

    def test_horotube(self):
        out = self.path("tube.obj")
        code, _, _ = self.crkit("horotube", "--res", "8", "--out", out)
        self.assertEqual(code, 0)
        with open(out, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        self.assertEqual(sum(1 for x in lines if x.startswith("v ")), 64)
        self.assertEqual(sum(1 for x in lines if x.startswith("f ")), 56)

    def test_linking(self):
        payload = self.crkit_json("linking", "--p", "2", "--n", "3", "--steps", "1000")
        self.assertEqual(payload["winding"], [2, 1])
        self.assertTrue(payload["unknotted"])
        self.assertEqual(abs(payload["C1"]["number"]), 2)
        self.assertEqual(abs(payload["C2"]["number"]), 1)
