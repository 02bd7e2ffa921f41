import math

import numpy as np
import pytest

from merminlab.observables import (
    BlochVector,
    SettingsTable,
    bloch_observable,
    validate_zheng_settings,
    zheng_settings,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class TestBlochObservable:
    def test_z_axis(self):
        np.testing.assert_allclose(bloch_observable((0.0, 0.0, 1.0)).matrix.entries, Z)

    def test_x_axis(self):
        np.testing.assert_allclose(bloch_observable((1.0, 0.0, 0.0)).matrix.entries, X)

    def test_tilted_axis_at_maximal_angle(self):
        t = math.pi / 4
        obs = bloch_observable((0.0, -math.sin(2 * t), -math.cos(2 * t)))
        np.testing.assert_allclose(obs.matrix.entries, -Y, atol=1e-15)

    def test_rejects_non_unit_vector(self):
        with pytest.raises(ValueError):
            bloch_observable((0.5, 0.5, 0.5))
        with pytest.raises(ValueError):
            BlochVector(1.0, 1.0, 0.0)

    def test_involutory_and_traceless(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            obs = bloch_observable(BlochVector(*v))
            mat = obs.matrix.entries
            assert np.abs(mat @ mat - np.eye(2)).max() <= 1e-12
            assert abs(np.trace(mat)) <= 1e-12
            eigenvalues = sorted(np.linalg.eigvalsh(mat))
            assert eigenvalues == pytest.approx([-1.0, 1.0], abs=1e-12)


class TestSettingsTable:
    def test_requires_three_parties(self):
        obs = bloch_observable((0.0, 0.0, 1.0))
        with pytest.raises(ValueError):
            SettingsTable(((obs, obs),) * 2)

    def test_lookup_by_label(self):
        table = zheng_settings(0.4)
        assert table.observable(2, "E") is table.e(2)
        assert table.observable(3, "U") is table.u(3)
        with pytest.raises(ValueError):
            table.observable(1, "V")
        with pytest.raises(ValueError):
            table.observable(4, "E")


class TestZhengSettings:
    def test_maximal_entanglement_settings(self):
        table = zheng_settings(math.pi / 4)
        for party in (1, 2, 3):
            np.testing.assert_allclose(table.e(party).matrix.entries, -Y, atol=1e-12)
            np.testing.assert_allclose(table.u(party).matrix.entries, X, atol=1e-12)

    def test_degenerate_limit(self):
        table = zheng_settings(0.0)
        np.testing.assert_allclose(table.e(1).matrix.entries, -Z, atol=1e-12)
        np.testing.assert_allclose(table.u(1).matrix.entries, X, atol=1e-12)

    def test_pi_sixth_bloch_vector(self):
        bloch = zheng_settings(math.pi / 6).e(1).bloch
        assert bloch.nx == pytest.approx(0.0, abs=1e-15)
        assert bloch.ny == pytest.approx(-math.sqrt(3) / 2, abs=1e-12)
        assert bloch.nz == pytest.approx(-0.5, abs=1e-12)

    def test_party_symmetric(self):
        table = zheng_settings(0.61)
        for party in (2, 3):
            assert table.e(party).bloch == table.e(1).bloch
            assert table.u(party).bloch == table.u(1).bloch

    def test_rejects_out_of_domain_angle(self):
        with pytest.raises(ValueError):
            zheng_settings(-0.2)
        with pytest.raises(ValueError):
            zheng_settings(2.0)


class TestValidation:
    def test_all_constraints_pass_at_maximal_entanglement(self):
        report = validate_zheng_settings(math.pi / 4, zheng_settings(math.pi / 4))
        assert report.passed
        assert report.by_id("C4-perfect-correlation").applicable
        assert report.by_id("C4-perfect-correlation").residual <= 1e-10

    def test_constraints_pass_at_pi_sixth(self):
        report = validate_zheng_settings(math.pi / 6, zheng_settings(math.pi / 6))
        assert report.passed
        for cid in (
            "C1-certainty-given-E1",
            "C1-certainty-given-E2",
            "C1-certainty-given-E3",
        ):
            assert report.by_id(cid).residual <= 1e-10
        assert report.by_id("C2-joint-event-nonzero").passed
        assert report.by_id("C3-closed-form-match").residual <= 1e-10
        assert not report.by_id("C4-perfect-correlation").applicable

    def test_wrong_table_fails_certainty(self):
        table = SettingsTable(
            ((bloch_observable((0.0, 0.0, 1.0)), bloch_observable((1.0, 0.0, 0.0))),) * 3
        )
        report = validate_zheng_settings(math.pi / 6, table)
        assert not report.passed
        assert not report.by_id("C1-certainty-given-E1").passed

    def test_grid_over_workbench_domain(self):
        # 200 interior points of (0, pi/2); C1-C3 must hold everywhere.
        grid = (np.arange(1, 201) / 201) * (math.pi / 2)
        for theta in grid:
            report = validate_zheng_settings(float(theta), zheng_settings(float(theta)))
            assert report.passed, f"failed at theta={theta}"

    def test_joint_event_matches_prediction(self):
        # C2 carries the raw probability; it must equal sin^2(2 theta)/4.
        for theta in (0.2, 0.6, math.pi / 4):
            report = validate_zheng_settings(theta, zheng_settings(theta))
            joint = report.by_id("C2-joint-event-nonzero").residual
            assert joint == pytest.approx(math.sin(2 * theta) ** 2 / 4, abs=1e-12)

    def test_reconstruction_unique_at_maximal_entanglement(self):
        """Brute-force the Bloch sphere: with U = sigma_x fixed, only the
        -sigma_y direction for E satisfies certainty plus perfect correlation."""
        state = np.zeros(8, dtype=complex)
        state[0] = 1 / math.sqrt(2)
        state[7] = 1j / math.sqrt(2)
        eye8 = np.eye(8)

        def lift1(mat, party):
            ops = [np.eye(2)] * 3
            ops[party - 1] = mat
            return np.kron(np.kron(ops[0], ops[1]), ops[2])

        uu23 = lift1(X, 2) @ lift1(X, 3)
        survivors = []
        for polar in np.linspace(0.0, math.pi, 25):
            for azim in np.linspace(0.0, 2 * math.pi, 48, endpoint=False):
                n = (
                    math.sin(polar) * math.cos(azim),
                    math.sin(polar) * math.sin(azim),
                    math.cos(polar),
                )
                e_mat = n[0] * X + n[1] * Y + n[2] * Z
                # certainty: conditioned on E1 = +1, U2 U3 = -1
                projected = 0.5 * (state + lift1(e_mat, 1) @ state)
                p_cond = np.vdot(projected, projected).real
                if p_cond < 1e-6:
                    continue
                post = projected / math.sqrt(p_cond)
                if abs(np.vdot(post, uu23 @ post).real + 1.0) > 1e-6:
                    continue
                # perfect correlation: <E1 E2 E3> = +1
                eee = lift1(e_mat, 1) @ lift1(e_mat, 2) @ lift1(e_mat, 3)
                if abs(np.vdot(state, eee @ state).real - 1.0) > 1e-6:
                    continue
                survivors.append(n)
        assert len(survivors) == 1
        assert survivors[0][0] == pytest.approx(0.0, abs=1e-9)
        assert survivors[0][1] == pytest.approx(-1.0, abs=1e-9)
        assert survivors[0][2] == pytest.approx(0.0, abs=1e-9)
