import numpy as np
import pytest

import bellch as B
from bellch.seesaw import haar_unitary


class TestCorrelationMatrix:
    def test_singlet(self):
        t = B.correlation_matrix(B.werner(1.0))
        assert np.allclose(t, -np.eye(3), atol=1e-12)

    def test_product_zero_state(self):
        t = B.correlation_matrix(B.to_density(B.schmidt_state([1.0, 0.0])))
        expected = np.zeros((3, 3))
        expected[2, 2] = 1.0
        assert np.allclose(t, expected, atol=1e-12)

    def test_werner_linearity(self):
        for p in (0.3, 0.6, 0.95):
            t = B.correlation_matrix(B.werner(p))
            assert np.allclose(t, ((1 - 4 * p) / 3) * np.eye(3), atol=1e-12)

    def test_entries_bounded(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            t = B.correlation_matrix(B.random_two_qubit(rng))
            assert np.all(np.abs(t) <= 1 + 1e-12)

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            B.correlation_matrix(B.isotropic(3, 0.5))


class TestMaxCh:
    def test_singlet(self):
        assert abs(B.max_ch(B.werner(1.0)) - (1 / np.sqrt(2) - 0.5)) < 1e-12

    def test_starred_table_entry(self):
        rho = B.to_density(B.schmidt_state([2.0, 1.0]))
        assert abs(B.max_ch(rho) - 0.14031) < 5e-6

    def test_werner_threshold_boundary(self):
        pw = B.werner_threshold()
        assert abs(pw - 0.780330) < 1e-6
        assert abs(B.max_ch(B.werner(pw))) < 1e-12
        assert B.max_ch(B.werner(pw + 0.01)) > 0
        assert B.max_ch(B.werner(pw - 0.01)) < 0

    def test_pure_state_closed_form(self):
        # max CH of cos(phi)|00> + sin(phi)|11> is sqrt(1+sin^2 2phi)/2 - 1/2
        for phi in np.linspace(0.01, np.pi / 4, 40):
            rho = B.to_density(B.schmidt_state([np.cos(phi), np.sin(phi)]))
            expected = 0.5 * np.sqrt(1 + np.sin(2 * phi) ** 2) - 0.5
            assert abs(B.max_ch(rho) - expected) < 1e-12
            assert abs(B.analytic_ch_value(B.schmidt_state([np.cos(phi), np.sin(phi)]))
                       - expected) < 1e-12

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            rho = B.random_two_qubit(rng)
            u = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
            rotated = B.BipartiteDensity(2, 2, u @ rho.rho @ u.conj().T)
            assert abs(B.max_ch(rotated) - B.max_ch(rho)) < 1e-10

    def test_seesaw_never_exceeds(self):
        # for non-violating states the quantum optimum saturates the LHV
        # bound 0 with trivial measurements, so the ceiling is max(max_ch, 0)
        rng = np.random.default_rng(6)
        f = B.ch()
        for _ in range(10):
            rho = B.random_two_qubit(rng)
            res = B.seesaw_maximize(rho, f, B.SeesawConfig(restarts=20, seed=9))
            assert res.value <= max(B.max_ch(rho), 0.0) + 1e-7
