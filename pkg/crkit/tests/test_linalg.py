import numpy as np
from django.test import SimpleTestCase

from crkit.errors import InvalidArgument, LogBranchFailure
from crkit.geometry.flows import FlowFamily, family_generator
from crkit.geometry.isometry import e_abg, ellipto_parabolic, p_zs, t_lambda
from crkit.geometry.linalg import (
    IDENTITY,
    J1,
    J2,
    OMEGA,
    adjoint,
    as_mat,
    char_poly_su21,
    cubic_roots,
    eig3,
    in_su21,
    mat_exp,
    mat_log,
    matrix_rank,
    null_basis,
    projective_identity_residual,
    random_su21,
    random_su21_algebra,
)


class CubicRootsTests(SimpleTestCase):
    def test_simple_roots_sorted(self):
        roots = cubic_roots(-6, 11, -6)
        np.testing.assert_allclose(roots, [1, 2, 3], atol=1e-12)

    def test_triple_root(self):
        self.assertEqual(cubic_roots(-3, 3, -1), (1, 1, 1))

    def test_double_root(self):
        roots = cubic_roots(0, -3, 2)
        np.testing.assert_allclose(roots, [-2, 1, 1], atol=1e-12)

    def test_complex_roots(self):
        # (x - i)(x + i)(x - 2)
        roots = cubic_roots(-2, 1, -2)
        self.assertEqual(len(roots), 3)
        for r in roots:
            self.assertLess(abs(((r - 2) * r + 1) * r - 2), 1e-12)

    def test_su21_characteristic_polynomial(self):
        m = e_abg(0.3, 0.7)
        roots = cubic_roots(*char_poly_su21(np.trace(m)))
        expected = sorted(np.diag(m), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        np.testing.assert_allclose(roots, expected, atol=1e-12)

    def test_residuals_on_random_cubics(self):
        rng = np.random.default_rng(23)
        for _ in range(500):
            c2, c1, c0 = rng.normal(scale=2, size=3) + 1j * rng.normal(scale=2, size=3)
            scale = (1 + max(abs(c2), abs(c1), abs(c0))) ** 3
            for r in cubic_roots(c2, c1, c0):
                self.assertLess(abs(((r + c2) * r + c1) * r + c0), 1e-10 * scale)

    def test_eigenvalues_match_the_characteristic_polynomial(self):
        for seed in range(100):
            m = random_su21(seed)
            roots = list(cubic_roots(*char_poly_su21(np.trace(m))))
            for value in eig3(m).values:
                nearest = min(roots, key=lambda r: abs(r - value))
                self.assertLess(abs(nearest - value), 1e-7, seed)
                roots.remove(nearest)


class EigenTests(SimpleTestCase):
    def test_regular_element(self):
        m = random_su21(3)
        eig = eig3(m)
        self.assertTrue(eig.regular)
        self.assertFalse(eig.defect_flag)
        self.assertLess(eig.residual(m), 1e-10)

    def test_unipotent_is_one_defective_cluster(self):
        eig = eig3(p_zs(1, 0))
        self.assertEqual(len(eig.spaces), 1)
        self.assertEqual(eig.spaces[0].multiplicity, 3)
        self.assertEqual(eig.spaces[0].dimension, 1)
        self.assertTrue(eig.defect_flag)

    def test_vertical_parabolic_has_two_dimensional_eigenspace(self):
        eig = eig3(p_zs(0, 1))
        self.assertEqual(eig.spaces[0].dimension, 2)

    def test_null_basis_and_rank(self):
        a = np.diag([1.0, 0.0, 0.0])
        self.assertEqual(null_basis(a).shape, (3, 2))
        self.assertEqual(matrix_rank(a), 1)
        self.assertEqual(matrix_rank(p_zs(1, 0) - IDENTITY), 2)


class ExpLogTests(SimpleTestCase):
    def test_round_trip_on_random_generators(self):
        for seed in range(200):
            x = random_su21_algebra(seed)
            m = mat_exp(x)
            log = mat_log(m)
            np.testing.assert_allclose(mat_exp(log), m, atol=1e-9)
            np.testing.assert_allclose(log, x, atol=1e-9)

    def test_round_trip_on_normal_forms(self):
        for m in (t_lambda(2 + 1j), e_abg(0.4, -1.1), p_zs(1 + 2j, 0.5), p_zs(0, -1)):
            np.testing.assert_allclose(mat_exp(mat_log(m)), m, atol=1e-9)

    def test_defective_input_goes_through_square_roots(self):
        g = random_su21(8, J2, scale=0.5)
        for m in (ellipto_parabolic(0.2, 1.0), g @ ellipto_parabolic(-0.4, 2.0) @ np.linalg.inv(g)):
            self.assertTrue(eig3(m).defect_flag)
            np.testing.assert_allclose(mat_exp(mat_log(m)), m, atol=1e-9)

    def test_determinant_of_exponential(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            x = 0.5 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
            np.testing.assert_allclose(np.linalg.det(mat_exp(x)), np.exp(np.trace(x)), rtol=1e-9)

    def test_unipotent_log_is_the_displayed_generator(self):
        for z, s in ((1, 0), (2 - 1j, 0.7), (0, -3)):
            expected = family_generator(FlowFamily.UNIPOTENT, {"z": z, "s": s}).X
            np.testing.assert_allclose(mat_log(p_zs(z, s)), expected, atol=1e-12)

    def test_negative_real_eigenvalue(self):
        with self.assertRaises(LogBranchFailure):
            mat_log(np.diag([-1.0, -1.0, 1.0]))


class GroupTests(SimpleTestCase):
    def test_random_elements_are_members(self):
        for seed in range(10):
            ok, residual = in_su21(random_su21(seed, J1), J1)
            self.assertTrue(ok, residual)
            ok, residual = in_su21(random_su21(seed, J2), J2)
            self.assertTrue(ok, residual)

    def test_scaled_identity_is_not_a_member(self):
        ok, residual = in_su21(2 * IDENTITY, J1)
        self.assertFalse(ok)
        self.assertGreater(residual, 1)

    def test_hermitian_perturbation_is_not_a_member(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        h = (a + adjoint(a)) / 2
        for j in (J1, J2):
            ok, residual = in_su21(IDENTITY + 0.1 * h, j)
            self.assertFalse(ok)
            self.assertGreater(residual, 1e-3)

    def test_random_is_deterministic(self):
        np.testing.assert_array_equal(random_su21(11), random_su21(11))

    def test_projective_identity(self):
        self.assertLess(projective_identity_residual(OMEGA * IDENTITY), 1e-14)
        self.assertGreater(projective_identity_residual(t_lambda(2)), 0.1)

    def test_as_mat_rejects_bad_shapes(self):
        with self.assertRaises(InvalidArgument):
            as_mat(np.eye(2))
        with self.assertRaises(InvalidArgument):
            as_mat([[1, 0, 0], [0, np.nan, 0], [0, 0, 1]])
