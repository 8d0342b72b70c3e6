import math

import numpy as np
from django.test import SimpleTestCase

from crkit.errors import (
    BadSignature,
    InfiniteOperand,
    InvalidArgument,
    ModelMismatch,
    NotExterior,
    NotNull,
    NotSiegel,
    UnknownModel,
)
from crkit.geometry.linalg import IDENTITY, J1, J2, adjoint, in_su21, random_su21
from crkit.geometry.models import (
    BALL,
    CAYLEY,
    INFINITY,
    SIEGEL,
    HeisPoint,
    Location,
    ProjectivePoint,
    c_circle_through,
    cayley_transfer,
    form_eval,
    get_model,
    heis_embed,
    heis_inverse,
    heis_mul,
    heis_project,
    projective_distance,
    projectively_equal,
    standardize_form,
)


def _random_heis(rng):
    return HeisPoint(complex(rng.normal(), rng.normal()), rng.normal())


def _heis_close(a, b, tol=1e-9):
    return abs(a.z - b.z) <= tol and abs(a.t - b.t) <= tol


class ModelTests(SimpleTestCase):
    def test_cayley_is_an_involution_exchanging_the_forms(self):
        np.testing.assert_allclose(CAYLEY @ CAYLEY, IDENTITY, atol=1e-15)
        np.testing.assert_allclose(adjoint(CAYLEY) @ J2 @ CAYLEY, J1, atol=1e-15)

    def test_get_model(self):
        self.assertIs(get_model("Siegel"), SIEGEL)
        self.assertIs(get_model(BALL), BALL)
        with self.assertRaises(UnknownModel):
            get_model("klein")

    def test_locations(self):
        self.assertEqual(ProjectivePoint([0, 0, 1], BALL).location(), Location.INTERIOR)
        self.assertEqual(ProjectivePoint([1, 0, 1], BALL).location(), Location.BOUNDARY)
        self.assertEqual(ProjectivePoint([2, 0, 1], BALL).location(), Location.EXTERIOR)
        self.assertEqual(ProjectivePoint([-1, 0, 1], SIEGEL).location(), Location.INTERIOR)

    def test_cayley_transfer_of_points_and_matrices(self):
        origin = cayley_transfer(ProjectivePoint([0, 0, 1], BALL), BALL, SIEGEL)
        self.assertEqual(origin.model, SIEGEL)
        self.assertEqual(origin.location(), Location.INTERIOR)
        back = cayley_transfer(origin, SIEGEL, BALL)
        self.assertTrue(projectively_equal(back, ProjectivePoint([0, 0, 1], BALL)))

        m = cayley_transfer(random_su21(4, J1), BALL, SIEGEL)
        self.assertTrue(in_su21(m, J2)[0])

    def test_cayley_transfer_rejects_same_model(self):
        with self.assertRaises(ModelMismatch):
            cayley_transfer(IDENTITY, BALL, BALL)
        with self.assertRaises(ModelMismatch):
            cayley_transfer(ProjectivePoint([0, 0, 1], SIEGEL), BALL, SIEGEL)

    def test_projective_distance_ignores_phase(self):
        p = ProjectivePoint([1, 2, 3], BALL)
        q = ProjectivePoint(1j * np.array([1, 2, 3]), BALL)
        self.assertLess(projective_distance(p, q), 1e-15)
        with self.assertRaises(ModelMismatch):
            projective_distance(p, ProjectivePoint([1, 2, 3], SIEGEL))

    def test_group_elements_preserve_the_sign_of_phi(self):
        rng = np.random.default_rng(12)
        for seed in range(500):
            model = BALL if seed % 2 else SIEGEL
            m = random_su21(seed, model.form)
            v = rng.normal(size=3) + 1j * rng.normal(size=3)
            before = ProjectivePoint(v, model)
            after = ProjectivePoint(m @ v, model)
            size = np.vdot(v, v).real
            self.assertAlmostEqual(after.phi(), before.phi(), delta=1e-9 * np.linalg.norm(m) ** 2 * size)
            if abs(before.phi()) > 1e-6 * size:
                self.assertEqual(after.location(), before.location())

    def test_zero_representative(self):
        with self.assertRaises(InvalidArgument):
            ProjectivePoint([0, 0, 0], BALL)

    def test_standardize_form(self):
        for h in (J1, J2, np.diag([2.0, -3.0, 0.5]).astype(complex)):
            s = standardize_form(h)
            np.testing.assert_allclose(adjoint(s) @ J1 @ s, h, atol=1e-12)
        with self.assertRaises(BadSignature):
            standardize_form(np.eye(3))
        with self.assertRaises(BadSignature):
            standardize_form([[1, 1j, 0], [1j, 1, 0], [0, 0, -1]])


class HeisenbergTests(SimpleTestCase):
    def test_embed_project_round_trip(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            h = _random_heis(rng)
            p = heis_embed(h)
            self.assertEqual(p.location(), Location.BOUNDARY)
            self.assertTrue(_heis_close(heis_project(p), h))
        self.assertIs(heis_project(heis_embed(INFINITY)), INFINITY)

    def test_group_axioms(self):
        rng = np.random.default_rng(2)
        zero = HeisPoint(0, 0)
        for _ in range(100):
            a, b, c = _random_heis(rng), _random_heis(rng), _random_heis(rng)
            self.assertTrue(_heis_close(heis_mul(heis_mul(a, b), c), heis_mul(a, heis_mul(b, c))))
            self.assertTrue(_heis_close(heis_mul(a, zero), a))
            self.assertTrue(_heis_close(heis_mul(a, heis_inverse(a)), zero))

    def test_not_commutative(self):
        a, b = HeisPoint(1, 0), HeisPoint(1j, 0)
        self.assertEqual(heis_mul(a, b).t, -2.0)
        self.assertEqual(heis_mul(b, a).t, 2.0)

    def test_infinity_has_no_group_law(self):
        with self.assertRaises(InfiniteOperand):
            heis_mul(INFINITY, HeisPoint(0, 0))
        with self.assertRaises(InfiniteOperand):
            heis_inverse(INFINITY)

    def test_project_needs_boundary_siegel_points(self):
        with self.assertRaises(NotSiegel):
            heis_project(ProjectivePoint([1, 0, 1], BALL))
        with self.assertRaises(NotNull):
            heis_project(ProjectivePoint([-1, 0, 1], SIEGEL))


class CCircleTests(SimpleTestCase):
    def test_circle_of_a_coordinate_line(self):
        polar = ProjectivePoint([0, 1, 0], BALL)
        circle = c_circle_through(polar)
        _, points = circle.sample(12)
        for p in points:
            self.assertEqual(p.location(1e-9), Location.BOUNDARY)
            self.assertLess(abs(form_eval(polar.rep, p.rep, BALL)), 1e-12)
            z1, z2 = p.affine()
            self.assertAlmostEqual(abs(z1), 1.0, places=12)
            self.assertLess(abs(z2), 1e-12)

    def test_vertical_axis_in_siegel(self):
        circle = c_circle_through(ProjectivePoint([0, 1, 0], SIEGEL))
        for theta in np.linspace(0.1, 2 * math.pi, 7, endpoint=False):
            h = heis_project(circle.point(theta))
            if not h.is_infinite:
                self.assertLess(abs(h.z), 1e-12)

    def test_polar_must_be_exterior(self):
        with self.assertRaises(NotExterior):
            c_circle_through(ProjectivePoint([0, 0, 1], BALL))
