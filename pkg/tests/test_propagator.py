"""Fundamental-solution propagation and its conservation laws."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from slspectra import (
    QuadConfig,
    StateVec,
    constant_coefficient_problem,
    phi_at,
    propagate,
    psi_at,
    wronskian,
)


def rk_variant(problem, ode_tol=1e-11):
    """Same problem but forced through the adaptive integrator."""
    return replace(
        problem, quad=replace(problem.quad, closed_form_pieces=False, ode_tol=ode_tol)
    )


class TestTrajectoryContract:
    def test_zero_energy_constant_solution(self, free):
        traj = propagate(free, 0.0, StateVec(1.0, 0.0))
        for t in (0.0, 0.3, 1.0):
            sv = traj.state_at(t)
            assert sv.y == pytest.approx(1.0, abs=1e-14)
            assert sv.y1 == pytest.approx(0.0, abs=1e-14)

    def test_nodes_cover_interval(self, free):
        traj = propagate(free, 4.0, StateVec(1.0, 0.0))
        ts = [t for t, _ in traj.nodes]
        assert ts[0] == free.a and ts[-1] == free.b
        assert all(b > a for a, b in zip(ts, ts[1:]))

    def test_tuple_init_accepted(self, free):
        traj = propagate(free, 2.0, (1.0, 0.0))
        assert isinstance(traj.state_at(0.5), StateVec)

    def test_cosine_closed_form(self, free):
        lam = 7.3
        traj = propagate(free, lam, StateVec(1.0, 0.0))
        r = math.sqrt(lam)
        for t in np.linspace(0, 1, 9):
            sv = traj.state_at(float(t))
            assert sv.y.real == pytest.approx(math.cos(r * t), abs=1e-12)
            assert sv.y1.real == pytest.approx(-r * math.sin(r * t), abs=1e-12)

    def test_dead_zone_solution_is_affine(self, mid):
        # where the weight vanishes (and q = 0) the equation reads y'' = 0
        traj = propagate(mid, 5.0 + 2.0j, StateVec(1.0, 0.0))
        t0, t1 = 0.35, 0.63
        s0, s1 = traj.state_at(t0), traj.state_at(t1)
        mid_t = 0.5 * (t0 + t1)
        expected = s0.y + s0.y1 * (mid_t - t0)
        assert traj.state_at(mid_t).y == pytest.approx(expected, rel=1e-12)
        assert s1.y1 == pytest.approx(s0.y1, rel=1e-12)


class TestFundamentalSolutions:
    def test_phi_initial_values(self, free):
        sv = phi_at(free, 3.7 + 0.4j, 0.0)
        assert sv.y == pytest.approx(1.0)  # -sin(-pi/2)
        assert sv.y1 == pytest.approx(0.0, abs=1e-15)

    def test_phi_alpha_zero_initial_values(self):
        prob = constant_coefficient_problem(alpha=0.0)
        sv = phi_at(prob, 1.0, 0.0)
        assert sv.y == pytest.approx(0.0, abs=1e-15)
        assert sv.y1 == pytest.approx(1.0)

    def test_phi_at_first_pole(self, free):
        lam = 9.0 * math.pi**2 / 16.0
        sv = phi_at(free, lam, 1.0)
        assert sv.y.real == pytest.approx(-math.sqrt(2) / 2, rel=1e-12)
        assert sv.y1.real == pytest.approx(-3 * math.pi * math.sqrt(2) / 8, rel=1e-12)

    def test_psi_initial_values(self, free):
        sv = psi_at(free, 2.2, 0.0)
        assert sv.y == pytest.approx(0.0, abs=1e-15)
        assert sv.y1 == pytest.approx(1.0)

    def test_psi_closed_form(self, free):
        lam = 11.0
        r = math.sqrt(lam)
        sv = psi_at(free, lam, 1.0)
        assert sv.y.real == pytest.approx(math.sin(r) / r, rel=1e-12)
        assert sv.y1.real == pytest.approx(math.cos(r), rel=1e-12)

    def test_psi_zero_energy_limit(self, free):
        sv = psi_at(free, 0.0, 0.7)
        assert sv.y.real == pytest.approx(0.7, rel=1e-12)
        assert sv.y1.real == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("lam,t", [(0.0, 0.0), (4.0, 1.0), (1j, 1.0)])
    def test_wronskian_examples(self, free, lam, t):
        assert wronskian(free, lam, t) == pytest.approx(1.0, abs=1e-10)


class TestConservation:
    @settings(max_examples=30, deadline=None)
    @given(re=st.floats(-20, 120), im=st.floats(-5, 5))
    def test_wronskian_conserved(self, free, mid, re, im):
        lam = complex(re, im)
        for prob in (free, mid):
            for t in np.linspace(0, 1, 7):
                assert abs(wronskian(prob, lam, float(t)) - 1.0) <= 100 * prob.quad.ode_tol

    @settings(max_examples=15, deadline=None)
    @given(lam=st.floats(-30, 120))
    def test_real_lambda_gives_real_solutions(self, mid, lam):
        sv = phi_at(mid, lam, 0.8)
        assert abs(sv.y.imag) <= 100 * mid.quad.ode_tol
        assert abs(sv.y1.imag) <= 100 * mid.quad.ode_tol

    @settings(max_examples=15, deadline=None)
    @given(re=st.floats(-20, 40), im=st.floats(0.1, 5))
    def test_conjugate_symmetry(self, free, re, im):
        lam = complex(re, im)
        sv = phi_at(free, lam, 1.0)
        sv_c = phi_at(free, lam.conjugate(), 1.0)
        assert sv_c.y == pytest.approx(sv.y.conjugate(), abs=1e-10)
        assert sv_c.y1 == pytest.approx(sv.y1.conjugate(), abs=1e-10)


class TestAdaptiveIntegrator:
    """The Runge-Kutta path, exercised with closed-form pieces disabled."""

    def test_matches_exact_path(self, free):
        rk = rk_variant(free)
        lam = 10.0 + 3.0j
        sv_rk = phi_at(rk, lam, 1.0)
        sv_ex = phi_at(free, lam, 1.0)
        assert sv_rk.y == pytest.approx(sv_ex.y, rel=1e-9)
        assert sv_rk.y1 == pytest.approx(sv_ex.y1, rel=1e-9)

    def test_halving_tolerance_halves_error(self, free):
        lam, t = 10.0, 1.0
        ref = complex(math.cos(math.sqrt(lam) * t))
        errs = []
        for tol in (1e-5, 5e-6):
            sv = phi_at(rk_variant(free, ode_tol=tol), lam, t)
            errs.append(abs(sv.y - ref))
        assert errs[1] <= errs[0] / 2.0

    def test_wronskian_tracks_tolerance(self, mid):
        rk = rk_variant(mid, ode_tol=1e-7)
        lam = 25.0 + 1.0j
        for t in np.linspace(0, 1, 11):
            assert abs(wronskian(rk, lam, float(t)) - 1.0) <= 100 * 1e-7

    def test_coarse_tolerance_degrades_accuracy(self, free):
        # the ode_tol knob must actually bite once the exact path is off
        lam = 40.0
        ref = complex(math.cos(math.sqrt(lam)))
        err_coarse = abs(phi_at(rk_variant(free, ode_tol=1e-2), lam, 1.0).y - ref)
        err_fine = abs(phi_at(rk_variant(free, ode_tol=1e-11), lam, 1.0).y - ref)
        assert err_fine < 1e-9
        assert err_coarse > 1e-8


class TestStateVec:
    def test_rejects_non_finite(self):
        with pytest.raises(Exception):
            StateVec(float("nan"), 0.0)

    def test_oracle_agreement_complex_lambda(self, free):
        lam = -3.0 + 2.0j
        y_ref, y1_ref = oracles.phi_free(lam, 0.6)
        sv = phi_at(free, lam, 0.6)
        assert sv.y == pytest.approx(y_ref, rel=1e-12)
        assert sv.y1 == pytest.approx(y1_ref, rel=1e-12)
