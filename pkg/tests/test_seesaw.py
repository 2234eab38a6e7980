import numpy as np
import pytest

import bellch as B
from bellch.seesaw import haar_unitary, random_binary_povm

CIRELSON = 1 / np.sqrt(2) - 0.5


def werner_max_ch(p):
    # Horodecki closed form for Werner states
    return np.sqrt(2) * (4 * p - 1) / 6 - 0.5


class TestRandomPovm:
    def test_deterministic(self):
        a = random_binary_povm(4, np.random.default_rng(3))
        b = random_binary_povm(4, np.random.default_rng(3))
        assert np.array_equal(a.plus, b.plus)

    def test_projector(self):
        rng = np.random.default_rng(4)
        for d in (2, 3, 5):
            m = random_binary_povm(d, rng)
            assert np.allclose(m.plus @ m.plus, m.plus, atol=1e-10)
            w = np.linalg.eigvalsh(m.plus)
            assert np.all((np.abs(w) < 1e-10) | (np.abs(w - 1) < 1e-10))

    def test_haar_unitary_is_unitary(self):
        u = haar_unitary(5, np.random.default_rng(5))
        assert np.allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


class TestAliceBestResponse:
    def test_recovers_optimum_from_bob_fixed(self):
        f = B.ch()
        singlet = B.to_density(B.schmidt_state([1.0, 1.0]))
        a0 = B.alice_scheme(2)
        b_opt = B.bob_best_response(singlet, a0, f)
        a_resp = B.alice_best_response(singlet, b_opt, f)
        assert abs(B.evaluate(f, singlet, a_resp, b_opt) - CIRELSON) < 1e-10

    def test_separable_state_stays_nonviolating(self):
        f = B.ch()
        rho = B.to_density(B.schmidt_state([1.0, 0.0]))
        rng = np.random.default_rng(6)
        b = [random_binary_povm(2, rng) for _ in range(2)]
        a = B.alice_best_response(rho, b, f)
        assert B.evaluate(f, rho, a, b) <= 1e-10

    def test_monotone_step(self):
        f = B.ch()
        rng = np.random.default_rng(7)
        rho = B.random_two_qubit(rng)
        a0 = [random_binary_povm(2, rng) for _ in range(2)]
        b0 = [B.BinaryMeasurement(np.eye(2) / 2)] * 2
        before = B.evaluate(f, rho, a0, b0)
        a1 = B.alice_best_response(rho, b0, f)
        assert B.evaluate(f, rho, a1, b0) >= before - 1e-12


class TestSeesawMaximize:
    def test_singlet_reaches_cirelson(self):
        res = B.seesaw_maximize(B.werner(1.0), B.ch(),
                                B.SeesawConfig(restarts=50, seed=0))
        assert abs(res.value - CIRELSON) < 1e-5

    def test_werner_09_matches_horodecki(self):
        rho = B.werner(0.9)
        res = B.seesaw_maximize(rho, B.ch(), B.SeesawConfig(restarts=100, seed=1))
        assert abs(res.value - werner_max_ch(0.9)) < 1e-5
        assert abs(werner_max_ch(0.9) - 0.11283) < 5e-6
        assert abs(res.value - B.max_ch(rho)) < 1e-5

    def test_two_copies_of_qutrit_me(self):
        rho2 = B.tensor_power_density(B.to_density(B.schmidt_state([1, 1, 1])), 2)
        res = B.seesaw_maximize(rho2, B.ch(), B.SeesawConfig(restarts=5, seed=2))
        assert res.value >= 0.18409 - 1e-4

    def test_deterministic(self):
        rho = B.random_two_qubit(np.random.default_rng(8))
        cfg = B.SeesawConfig(restarts=10, seed=5)
        r1 = B.seesaw_maximize(rho, B.ch(), cfg)
        r2 = B.seesaw_maximize(rho, B.ch(), cfg)
        assert r1.value == r2.value
        assert r1.restart_index == r2.restart_index
        assert r1.iterations == r2.iterations
        for m1, m2 in zip(r1.a_meas + r1.b_meas, r2.a_meas + r2.b_meas):
            assert np.array_equal(m1.plus, m2.plus)

    def test_value_matches_certifying_measurements(self):
        f = B.ch()
        rho = B.random_two_qubit(np.random.default_rng(9))
        res = B.seesaw_maximize(rho, f, B.SeesawConfig(restarts=10, seed=3))
        assert abs(B.evaluate(f, rho, res.a_meas, res.b_meas) - res.value) < 1e-10
        for m in res.a_meas + res.b_meas:
            w = np.linalg.eigvalsh(m.plus)
            assert w[0] > -1e-10 and w[-1] < 1 + 1e-10

    def test_monotone_within_restart(self):
        rho = B.random_two_qubit(np.random.default_rng(10))
        res = B.seesaw_maximize(rho, B.ch(), B.SeesawConfig(restarts=3, seed=4),
                                record_history=True)
        hist = res.history
        assert hist.shape[1] == 3
        assert np.all(np.diff(hist, axis=0) >= -1e-12)

    def test_never_loses_to_analytic_scheme_on_pure_states(self):
        f = B.ch()
        rng = np.random.default_rng(11)
        for _ in range(10):
            d = int(rng.integers(2, 6))
            s = B.random_pure_qudit(d, rng)
            res = B.seesaw_maximize(B.to_density(s), f,
                                    B.SeesawConfig(restarts=3, seed=6))
            assert res.value >= B.analytic_ch_value(s) - 1e-9

    def test_seesaw_bounded_by_horodecki_on_two_qubits(self):
        rng = np.random.default_rng(12)
        f = B.ch()
        checked = 0
        while checked < 20:
            rho = B.random_two_qubit(rng)
            exact = B.max_ch(rho)
            if exact <= 0:
                continue
            res = B.seesaw_maximize(rho, f, B.SeesawConfig(restarts=30, seed=7))
            assert res.value <= exact + 1e-7
            assert res.value >= exact - 1e-5
            assert res.value <= CIRELSON + 1e-7
            checked += 1

    def test_dimension_guard(self, monkeypatch):
        import bellch.seesaw as seesaw_mod
        monkeypatch.setattr(seesaw_mod, "DENSITY_DIM_GUARD", 3)
        with pytest.raises(B.SizeGuardError):
            B.seesaw_maximize(B.werner(0.9), B.ch(), B.SeesawConfig(restarts=1))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            B.SeesawConfig(restarts=0)
        with pytest.raises(ValueError):
            B.SeesawConfig(tol=0.0)
