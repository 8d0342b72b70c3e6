from io import StringIO

import numpy as np
from django.test import SimpleTestCase

from crkit import export
from crkit.errors import InvalidArgument
from crkit.geometry.flows import Mesh
from crkit.geometry.isometry import p_zs
from crkit.geometry.models import INFINITY, SIEGEL, HeisPoint, ProjectivePoint, c_circle_through


class CodecTests(SimpleTestCase):
    def test_complex_forms(self):
        self.assertEqual(export.complex_from_json(2), 2 + 0j)
        self.assertEqual(export.complex_from_json([1, -2]), 1 - 2j)
        self.assertEqual(export.complex_from_json({"re": 0.5, "im": 1}), 0.5 + 1j)
        with self.assertRaises(InvalidArgument):
            export.complex_from_json("1+2j")

    def test_matrix_codec(self):
        m = p_zs(1 - 1j, 0.5)
        np.testing.assert_array_equal(export.matrix_from_json(export.matrix_to_json(m)), m)
        np.testing.assert_array_equal(export.matrix_from_json({"matrix": export.matrix_to_json(m)}), m)
        with self.assertRaises(InvalidArgument):
            export.matrix_from_json([[1, 0, 0], [0, 1, 0]])
        with self.assertRaises(InvalidArgument):
            export.matrix_from_json([[1, 0], [0, 1], [0, 0]])

    def test_heisenberg_codec(self):
        self.assertEqual(export.heis_to_json(HeisPoint(1j, 2)), {"z": [0.0, 1.0], "t": 2.0})
        self.assertEqual(export.heis_to_json(INFINITY), {"inf": True})
        self.assertIs(export.heis_from_json({"inf": True}), INFINITY)
        self.assertEqual(export.heis_from_json({"z": [1, 0], "t": -1}), HeisPoint(1, -1))
        with self.assertRaises(InvalidArgument):
            export.heis_from_json({"z": [1, 0]})

    def test_dumps_is_stable(self):
        self.assertEqual(export.dumps({"b": 1, "a": [1.5]}), export.dumps({"a": [1.5], "b": 1}))


class WriterTests(SimpleTestCase):
    def test_obj_faces_are_one_based(self):
        mesh = Mesh(np.array([[0.0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]), np.array([[0, 1, 2, 3]]))
        out = StringIO()
        export.write_obj(out, mesh)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[1], "v 1.0 0.0 0.0")
        self.assertEqual(lines[-1], "f 1 2 3 4")

    def test_csv_cells(self):
        out = StringIO()
        export.write_csv(out, ("a", "b", "c"), [(0.1, True, 3)])
        self.assertEqual(out.getvalue(), "a,b,c\n0.1,1,3\n")

    def test_circle_skips_the_point_at_infinity(self):
        circle = c_circle_through(ProjectivePoint([0, 1, 0], SIEGEL))
        out = StringIO()
        export.write_circle_csv(out, circle, 32)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], "theta,z_re,z_im,t")
        self.assertLessEqual(len(lines), 33)
        for line in lines[1:]:
            _, z_re, z_im, _ = (float(x) for x in line.split(","))
            self.assertLess(abs(complex(z_re, z_im)), 1e-9)

    def test_open_output_defaults_to_the_given_stream(self):
        stream = StringIO()
        with export.open_output("-", stream) as fh:
            fh.write("x")
        self.assertEqual(stream.getvalue(), "x")
