import numpy as np
import pytest

from cvcluster import (
    CovarianceMatrix,
    GraphZ,
    HGraph,
    NumericalDegeneracyError,
    Symplectic,
    apply_symplectic,
    covariance_from_graph,
    graph_from_covariance,
    hgraph_state,
    phase_shift_symplectic,
    tms_symplectic,
    vacuum_state,
)
from conftest import random_schedule


def omega(n):
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def evolve(schedule, z):
    for stage in schedule.stages:
        for i, j in stage.pairs:
            z = apply_symplectic(tms_symplectic(schedule.n, i, j, stage.r), z)
    return z


class TestGraphZ:
    def test_vacuum(self):
        z = vacuum_state(3)
        assert z.n == 3
        assert np.array_equal(z.z, 1j * np.eye(3))

    @pytest.mark.parametrize("bad", [0, -1, 2.5])
    def test_vacuum_rejects_bad_mode_count(self, bad):
        with pytest.raises(ValueError):
            vacuum_state(bad)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            GraphZ(np.ones((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            GraphZ(np.array([[1j, 0.5], [0.0, 1j]]))

    def test_rejects_non_positive_imaginary_part(self):
        with pytest.raises(ValueError, match="positive definite"):
            GraphZ(np.diag([1j, -1j]))

    def test_array_is_locked(self):
        z = vacuum_state(2)
        with pytest.raises(ValueError):
            z.z[0, 0] = 0.0


class TestSymplectic:
    def test_tms_is_symplectic_to_absolute_tolerance(self):
        s = tms_symplectic(4, 1, 3, 1.3)
        m = s.matrix
        assert np.abs(m @ omega(4) @ m.T - omega(4)).max() <= 1e-10

    def test_phase_shift_is_symplectic_to_absolute_tolerance(self):
        s = phase_shift_symplectic(3, [0.3, -np.pi / 2, 1.1])
        m = s.matrix
        assert np.abs(m @ omega(3) @ m.T - omega(3)).max() <= 1e-10

    def test_moderate_composition_keeps_absolute_tolerance(self):
        s = tms_symplectic(4, 1, 2, 1.0)
        for i, j, r in [(2, 3, 0.8), (3, 4, 1.2), (1, 4, 0.5)]:
            s = tms_symplectic(4, i, j, r) @ s
        m = s.matrix
        assert np.abs(m @ omega(4) @ m.T - omega(4)).max() <= 1e-10

    def test_rejects_non_symplectic_blocks(self):
        eye = np.eye(2)
        zero = np.zeros((2, 2))
        with pytest.raises(ValueError, match="symplectic"):
            Symplectic(2 * eye, zero, zero, eye)

    def test_identity_and_composition(self):
        s = tms_symplectic(3, 1, 2, 0.9)
        left = Symplectic.identity(3) @ s
        assert np.abs(left.matrix - s.matrix).max() == 0.0

    def test_composition_rejects_mode_mismatch(self):
        with pytest.raises(ValueError, match="mode counts"):
            tms_symplectic(2, 1, 2, 0.1) @ tms_symplectic(3, 1, 2, 0.1)

    def test_tms_rejects_equal_modes(self):
        with pytest.raises(ValueError, match="single-mode"):
            tms_symplectic(3, 2, 2, 0.5)

    def test_tms_rejects_out_of_range_modes(self):
        with pytest.raises(ValueError, match="out of range"):
            tms_symplectic(3, 1, 4, 0.5)

    def test_phase_shift_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="angles"):
            phase_shift_symplectic(3, [0.1, 0.2])


class TestMoebius:
    def test_tms_on_vacuum_closed_form(self):
        r = 0.7
        z = apply_symplectic(tms_symplectic(2, 1, 2, r), vacuum_state(2))
        ch, sh = np.cosh(2 * r), np.sinh(2 * r)
        expected = 1j * np.array([[ch, -sh], [-sh, ch]])
        assert np.abs(z.z - expected).max() <= 1e-12

    def test_shifted_two_mode_closed_form(self):
        r = 1.0
        z = apply_symplectic(tms_symplectic(2, 1, 2, r), vacuum_state(2))
        zp = apply_symplectic(phase_shift_symplectic(2, [-np.pi / 2, 0.0]), z)
        sech, th = 1 / np.cosh(2 * r), np.tanh(2 * r)
        expected = np.array([[1j * sech, th], [th, 1j * sech]])
        assert np.abs(zp.z - expected).max() <= 1e-12

    def test_composition_equals_sequential_application(self, rng):
        for _ in range(10):
            schedule = random_schedule(rng, max_modes=6, max_gates=6, r_high=1.0)
            n = schedule.n
            total = Symplectic.identity(n)
            z = vacuum_state(n)
            for stage in schedule.stages:
                for i, j in stage.pairs:
                    s = tms_symplectic(n, i, j, stage.r)
                    total = s @ total
                    z = apply_symplectic(s, z)
            z_once = apply_symplectic(total, vacuum_state(n))
            assert np.abs(z.z - z_once.z).max() <= 1e-10

    def test_mode_mismatch(self):
        with pytest.raises(ValueError, match="mode counts"):
            apply_symplectic(tms_symplectic(3, 1, 2, 0.1), vacuum_state(2))

    def test_extreme_squeezing_fails_loudly(self):
        with pytest.raises(NumericalDegeneracyError, match="condition"):
            apply_symplectic(tms_symplectic(2, 1, 2, 16.0), vacuum_state(2))


class TestCovarianceOracle:
    def test_vacuum_covariance(self):
        sigma = covariance_from_graph(vacuum_state(3))
        assert np.abs(sigma.sigma - 0.5 * np.eye(6)).max() <= 1e-15

    def test_round_trip(self, rng):
        for _ in range(10):
            schedule = random_schedule(rng, max_modes=6, max_gates=8, r_high=1.5)
            z = evolve(schedule, vacuum_state(schedule.n))
            back = graph_from_covariance(covariance_from_graph(z))
            scale = max(1.0, np.abs(z.z).max())
            assert np.abs(back.z - z.z).max() <= 1e-10 * scale

    def test_single_gate_matches_sigma_conjugation(self):
        s = tms_symplectic(3, 2, 3, 0.9)
        z = apply_symplectic(s, vacuum_state(3))
        sigma = s.matrix @ (0.5 * np.eye(6)) @ s.matrix.T
        expected = covariance_from_graph(z).sigma
        assert np.abs(sigma - expected).max() <= 1e-12

    def test_rejects_impure(self):
        with pytest.raises(ValueError, match="pure"):
            CovarianceMatrix(np.eye(4))

    def test_rejects_asymmetric(self):
        sigma = 0.5 * np.eye(4)
        sigma[0, 1] = 0.3
        with pytest.raises(ValueError, match="symmetric"):
            CovarianceMatrix(sigma)

    def test_rejects_uncertainty_violation(self):
        with pytest.raises(ValueError, match="uncertainty"):
            CovarianceMatrix(-0.5 * np.eye(2))

    def test_rejects_odd_dimension(self):
        with pytest.raises(ValueError, match="2n"):
            CovarianceMatrix(np.eye(3) * 0.5)

    def test_degenerate_imaginary_part_rejected(self):
        z = GraphZ(np.diag([1j, 0j]))
        with pytest.raises(ValueError, match="positive definite"):
            covariance_from_graph(z)


class TestHGraph:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            HGraph(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_spectral_mapping_is_exact(self, rng):
        g = rng.normal(size=(5, 5))
        g = (g + g.T) / 2
        state = hgraph_state(HGraph(g))
        got = np.sort(np.linalg.eigvalsh(state.z.imag))
        want = np.sort(np.exp(2 * np.linalg.eigvalsh(g)))
        assert np.abs(got - want).max() <= 1e-12 * max(1.0, want.max())

    def test_single_edge_matches_tms(self):
        r = 0.8
        g = np.zeros((2, 2))
        g[0, 1] = g[1, 0] = -r
        z_h = hgraph_state(HGraph(g))
        z_tms = apply_symplectic(tms_symplectic(2, 1, 2, r), vacuum_state(2))
        assert np.abs(z_h.z - z_tms.z).max() <= 1e-12

    def test_zero_graph_is_vacuum(self):
        z = hgraph_state(HGraph(np.zeros((3, 3))))
        assert np.abs(z.z - 1j * np.eye(3)).max() <= 1e-15
