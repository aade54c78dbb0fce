import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from oracles import lossless_hamiltonian_phase
from timedcavity.analytic import (bright_state, cavity_bright_state, cavity_dark_state,
                                  cavity_probability_equal, dark_state, db_basis_change,
                                  db_decomposition, evolution_coefficients,
                                  interference_factor, lossless_amplitudes, lossless_state)
from timedcavity.errors import DegenerateCouplingError, UnsupportedRegimeError
from timedcavity.geometry import SystemConfig

PI = math.pi
LOSSLESS = SystemConfig(gamma=0.0, kappa=0.0, r12=0.25, z_center=0.0)
PSI0 = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)

finite_phase = st.floats(-2 * PI, 2 * PI)
coupling = st.floats(-10, 10).filter(lambda g: abs(g) > 1e-3)


class TestCoefficients:
    def test_identity_at_zero(self):
        assert evolution_coefficients(3.0, 0.0) == (0j, 1 + 0j, 0j)

    def test_complete_swap(self):
        g = 2.0
        c1, c2, c3 = evolution_coefficients(g, PI / (math.sqrt(2) * g))
        assert abs(c1) < 1e-15 and abs(c2) < 1e-15 and c3 == pytest.approx(-1.0)

    def test_norm_on_grid(self):
        for t in np.linspace(0, 5, 501):
            for phi in (0.0, 0.58, 1.45, PI):
                psi = lossless_amplitudes(3.74, phi, t)
                assert psi.norm2() == pytest.approx(1.0, abs=1e-12)


class TestLosslessState:
    def test_initial(self):
        psi = lossless_state(LOSSLESS.with_(theta=PI / 8), 0.0)
        assert psi.amp_e1 == pytest.approx(1 / math.sqrt(2))
        assert psi.amp_e2 == pytest.approx(1 / math.sqrt(2))
        assert psi.amp_g == 0 and psi.amp_c == 0

    def test_full_transfer_in_phase(self):
        cfg = LOSSLESS.with_(theta=PI / 2)
        g = cfg.g0 * math.cos(2 * PI * 0.125 * math.cos(cfg.beta))
        psi = lossless_state(cfg, PI / (2 * math.sqrt(2) * g))
        assert abs(psi.amp_c) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_antiphase_never_excites_cavity(self):
        for t in np.linspace(0, 3, 31):
            assert abs(lossless_amplitudes(2.0, PI, t).amp_c) < 1e-15

    @given(g=st.floats(0, 10), phi=finite_phase, t=st.floats(0, 5))
    def test_matches_schrodinger(self, g, phi, t):
        """Closed form against expm of the phase-basis Hamiltonian."""
        psi = expm(-1j * t * lossless_hamiltonian_phase(g, phi)) @ PSI0
        np.testing.assert_allclose(lossless_amplitudes(g, phi, t).as_array(), psi,
                                   atol=1e-10)

    @pytest.mark.parametrize("kw", [{"kappa": 0.3}, {"gamma": 1.0}, {"z_center": 1 / 6},
                                    {"delta": 0.5}])
    def test_rejects_other_regimes(self, kw):
        with pytest.raises(UnsupportedRegimeError):
            lossless_state(LOSSLESS.with_(**kw), 1.0)

    @given(theta=st.floats(0, PI), t=st.floats(0, 5), amp=st.floats(0.1, 3))
    def test_probability_identity(self, theta, t, amp):
        cfg = LOSSLESS.with_(theta=theta, field_amp=amp)
        psi = lossless_state(cfg, t)
        assert cavity_probability_equal(cfg, t) == pytest.approx(
            amp**2 * abs(psi.amp_c) ** 2, abs=1e-12)


class TestCavityProbability:
    def test_peak_in_phase(self):
        cfg = LOSSLESS.with_(theta=PI / 2)
        g = cfg.g0 * math.cos(2 * PI * 0.125 * math.cos(cfg.beta))
        assert cavity_probability_equal(cfg, PI / (2 * math.sqrt(2) * g)) == pytest.approx(1.0)

    def test_peak_fig2_pi8(self):
        cfg = LOSSLESS.with_(theta=PI / 8)
        g = cfg.g0 * math.cos(2 * PI * 0.125 * math.cos(cfg.beta))
        peak = cavity_probability_equal(cfg, PI / (2 * math.sqrt(2) * g))
        assert peak == pytest.approx(0.559642520513129613, abs=1e-12)

    def test_antiphase(self):
        cfg = LOSSLESS.with_(r12=0.5, theta=0.0)  # phi = pi
        for t in np.linspace(0, 2, 21):
            assert cavity_probability_equal(cfg, t) == pytest.approx(0.0, abs=1e-15)


class TestDarkBright:
    def test_decomposition_limits(self):
        d = db_decomposition(0.0)
        assert (d.a, d.b) == (0, 1)
        d = db_decomposition(PI)
        assert d.a == pytest.approx(1.0) and abs(d.b) < 1e-15

    def test_fig5_weights(self):
        d = db_decomposition(0.580490630427886203)
        assert abs(d.a) ** 2 == pytest.approx(0.0819031639842612952, abs=1e-12)
        assert abs(d.b) ** 2 == pytest.approx(1 - 0.0819031639842612952, abs=1e-12)

    @given(finite_phase)
    def test_weights_normalized(self, phi):
        d = db_decomposition(phi)
        assert abs(d.a) ** 2 + abs(d.b) ** 2 == pytest.approx(1.0, abs=1e-12)

    @given(finite_phase)
    def test_decomposition_reconstructs_timed_state(self, phi):
        d = db_decomposition(phi)
        psi = d.a * dark_state(phi).as_array() + d.b * bright_state(phi).as_array()
        np.testing.assert_allclose(psi, PSI0, atol=1e-12)

    @given(g=st.floats(0.1, 10), phi=finite_phase)
    def test_equal_coupling_reduces_to_free_space(self, g, phi):
        np.testing.assert_allclose(cavity_dark_state(g, g, phi).as_array(),
                                   dark_state(phi).as_array(), atol=1e-12)
        np.testing.assert_allclose(cavity_bright_state(g, g, phi).as_array(),
                                   bright_state(phi).as_array(), atol=1e-12)

    def test_decoupled_atom_is_dark(self):
        # bare |01>|0> is exp(-i phi)|e2>, so with phi = 0 the phase basis is the bare one
        np.testing.assert_allclose(cavity_dark_state(1, 0).as_array(), [0, 0, -1, 0])
        np.testing.assert_allclose(cavity_bright_state(1, 0).as_array(), [0, 1, 0, 0])

    @given(g1=coupling, g2=coupling, phi=finite_phase)
    def test_cavity_states_orthonormal_and_dark(self, g1, g2, phi):
        d = cavity_dark_state(g1, g2, phi).as_array()
        b = cavity_bright_state(g1, g2, phi).as_array()
        assert abs(np.vdot(d, b)) < 1e-12
        assert np.vdot(d, d).real == pytest.approx(1.0)
        # g1 a^+ s1 + g2 a^+ s2 in the phase basis: <c|.|e1> = g1, <c|.|e2> = g2 e^{i phi}
        op = np.zeros((4, 4), dtype=complex)
        op[3, 1] = g1
        op[3, 2] = g2 * np.exp(1j * phi)
        assert np.max(np.abs(op @ d)) < 1e-12
        assert np.max(np.abs(op @ b)) > 0

    def test_degenerate(self):
        with pytest.raises(DegenerateCouplingError):
            cavity_dark_state(0.0, 0.0)
        with pytest.raises(DegenerateCouplingError):
            db_basis_change(0.0, 0.0)


class TestBasisChange:
    def test_identity_for_equal(self):
        np.testing.assert_allclose(db_basis_change(2.0, 2.0), np.eye(2), atol=1e-15)

    def test_swap_for_opposite(self):
        M = db_basis_change(1.0, -1.0)
        np.testing.assert_allclose(M, [[0, 1], [-1, 0]], atol=1e-15)

    @given(g1=coupling, g2=coupling)
    def test_orthogonal(self, g1, g2):
        M = db_basis_change(g1, g2)
        np.testing.assert_allclose(M @ M.T, np.eye(2), atol=1e-12)

    @given(g1=coupling, g2=coupling, phi=finite_phase)
    def test_consistent_with_direct_projection(self, g1, g2, phi):
        d = db_decomposition(phi)
        via_matrix = db_basis_change(g1, g2) @ np.array([d.b, d.a])
        bc = cavity_bright_state(g1, g2, phi).as_array()
        dc = cavity_dark_state(g1, g2, phi).as_array()
        direct = np.array([np.vdot(bc, PSI0), np.vdot(dc, PSI0)])
        np.testing.assert_allclose(via_matrix, direct, atol=1e-12)


class TestInterference:
    def test_limits(self):
        assert interference_factor(1.0, 1.0, 0.0) == pytest.approx(2.0)
        assert interference_factor(1.0, -1.0, 0.0) == pytest.approx(0.0)

    def test_fig3_couplings(self):
        g1, g2 = 4.85445755174261610, -0.609983418687133934
        assert interference_factor(g1, g2, 0.0) == pytest.approx(0.752597655097239041,
                                                                 abs=1e-12)
        assert interference_factor(g1, g2, 1.45122657606971551) == pytest.approx(
            0.970488601138281424, abs=1e-12)

    @given(g1=coupling, g2=coupling, phi=finite_phase,
           c=st.floats(-5, 5).filter(lambda c: abs(c) > 1e-2))
    def test_scale_invariant(self, g1, g2, phi, c):
        assert interference_factor(c * g1, c * g2, phi) == pytest.approx(
            interference_factor(g1, g2, phi), abs=1e-12)

    @given(g1=coupling, g2=coupling, phi=finite_phase)
    def test_is_squared_cavity_amplitude(self, g1, g2, phi):
        amp = (g1 + g2 * np.exp(1j * phi)) / math.hypot(g1, g2)
        assert interference_factor(g1, g2, phi) == pytest.approx(abs(amp) ** 2, abs=1e-12)
