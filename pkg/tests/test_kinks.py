import math

import numpy as np
import pytest

from kinklab.errors import ConfigurationError, ContractViolation, TrackingError
from kinklab.fields import FieldState, Grid1D
from kinklab.integrate import IntegrationPlan, SnapshotRecorder, integrate
from kinklab.kinks import (KinkParams, TrackRecord, audit_dsg_coefficients,
                           dsg_first_integral_residual, dsg_kink, dsg_kink_x,
                           init_kink, pi_kink, pi_kink_x,
                           printed_dsg_coefficients, residual,
                           residual_convergence, static_kink_coefficients,
                           track_kink)
from kinklab.models import (AVG7, AVG9, AVG12, FREEWAVE, ModelSpec,
                            potential_density)


class TestPiKink:
    def test_center_value(self):
        p = KinkParams(c=0.0, Delta=1.0)
        assert pi_kink(np.array([0.0]), 0.0, p)[0] == pytest.approx(math.pi / 2)

    def test_asymptotics(self):
        p = KinkParams(c=0.0, Delta=1.0)
        x = np.array([-45.0, 45.0])
        u = pi_kink(x, 0.0, p)
        assert u[0] == pytest.approx(0.0, abs=1e-12)
        assert u[1] == pytest.approx(math.pi, abs=1e-12)

    def test_first_integral(self):
        # xi_x^2 = 2 V(xi) with V from the Avg9 potential
        p = KinkParams(c=0.0, Delta=1.0)
        m = ModelSpec(AVG9, delta=1.0)
        x = np.linspace(-10.0, 10.0, 401)
        ux = pi_kink_x(x, 0.0, p)
        v = potential_density(pi_kink(x, 0.0, p), m)
        np.testing.assert_allclose(ux**2, 2.0 * v, atol=1e-10)

    def test_lorentz_scaling(self):
        static = KinkParams(c=0.0, Delta=0.7)
        moving = KinkParams(c=0.6, Delta=0.7)
        x = np.linspace(-12.0, 12.0, 301)
        t = 1.7
        boosted = pi_kink((x - 0.6 * t) / math.sqrt(1 - 0.36) + 0.6 * 0.0, 0.0,
                          static)
        np.testing.assert_allclose(pi_kink(x, t, moving), boosted, atol=1e-12)

    def test_monotone(self):
        for params, variant in [(KinkParams(Delta=0.5), AVG9),
                                (KinkParams(Delta=0.5, epsilon=0.1), AVG7)]:
            # non-strict on the far tails, where neighbouring values can
            # round to the same double near the vacua 0 and pi
            u = pi_kink(np.linspace(-50.0, 50.0, 2001), 0.0, params, variant)
            assert np.all(np.diff(u) >= 0)
            core = pi_kink(np.linspace(-15.0, 15.0, 601), 0.0, params, variant)
            assert np.all(np.diff(core) > 0)

    def test_velocity_bound(self):
        with pytest.raises(ContractViolation):
            KinkParams(c=1.0)


class TestDsgKink:
    def params(self, Delta, c=0.0):
        a, b = static_kink_coefficients(Delta)
        return KinkParams(c=c, Delta=Delta, dsg_a=a, dsg_b=b)

    def test_midpoint_and_limits(self):
        p = self.params(1.0)
        u = dsg_kink(np.array([-30.0, 0.0, 30.0]), 0.0, p)
        assert u[0] == pytest.approx(2.0 * math.pi, abs=1e-12)
        assert u[1] == pytest.approx(math.pi)
        assert u[2] == pytest.approx(0.0, abs=1e-12)

    def test_branch_continuity(self):
        p = self.params(1.0)
        x = np.linspace(-0.1, 0.1, 2001)
        u = dsg_kink(x, 0.0, p)
        assert np.max(np.abs(np.diff(u))) < 0.01
        assert np.all(np.diff(u) < 0)  # monotone 2pi -> 0

    def test_printed_pair_fails_first_integral(self):
        # the literature-printed coefficient pair does not satisfy the
        # static first integral for Delta > 0; the audit records this
        for Delta in (0.25, 1.0, 4.0):
            audit = audit_dsg_coefficients(Delta)
            assert not audit["printed_pass"]
            assert audit["oracle_pass"]
            assert audit["oracle_residual"] <= 1e-8

    def test_oracle_pair_closed_form(self):
        # certified pair coincides with a = b = sqrt(1 + Delta)
        for Delta in (0.25, 1.0, 4.0):
            a, b = static_kink_coefficients(Delta)
            assert a == pytest.approx(math.sqrt(1.0 + Delta), abs=1e-6)
            assert b == pytest.approx(math.sqrt(1.0 + Delta), abs=1e-6)

    def test_delta_zero_reduces_to_sine_gordon(self):
        a, b = static_kink_coefficients(0.0)
        assert b == pytest.approx(1.0, abs=1e-6)
        p = KinkParams(Delta=0.0, dsg_a=a, dsg_b=b)
        x = np.linspace(-8.0, 8.0, 801)
        np.testing.assert_allclose(dsg_kink(x, 0.0, p),
                                   4.0 * np.arctan(np.exp(-x)), atol=1e-6)

    def test_sample_refinement_stability(self):
        from kinklab import kinks
        a1, b1 = static_kink_coefficients(1.0)
        orig = kinks._oracle_samples
        try:
            kinks._oracle_samples = lambda D: np.linspace(
                0.02, 8.0, 800) / math.sqrt(1.0 + D)
            a2, b2 = static_kink_coefficients(1.0)
        finally:
            kinks._oracle_samples = orig
        assert abs(a1 - a2) < 1e-6 and abs(b1 - b2) < 1e-6

    def test_derivative_consistency(self):
        p = self.params(1.0, c=0.3)
        x = np.linspace(0.2, 6.0, 200)
        h = 1e-6
        fd = (dsg_kink(x + h, 0.5, p) - dsg_kink(x - h, 0.5, p)) / (2 * h)
        np.testing.assert_allclose(dsg_kink_x(x, 0.5, p), fd, atol=1e-7)


class TestInitKink:
    def test_static_momentum_zero(self):
        g = Grid1D(-40.0, 40.0, 801)
        st = init_kink(g, KinkParams(Delta=1.0), AVG9)
        np.testing.assert_array_equal(st.p, 0.0)

    def test_boundary_flatness(self):
        g = Grid1D(-40.0, 40.0, 801)
        st = init_kink(g, KinkParams(Delta=1.0), AVG9)
        assert abs(st.u[0]) <= 1e-10
        assert abs(st.u[-1] - math.pi) <= 1e-10

    def test_domain_too_small(self):
        g = Grid1D(-5.0, 5.0, 101)
        with pytest.raises(ConfigurationError, match="half-width"):
            init_kink(g, KinkParams(Delta=1.0), AVG9)

    def test_moving_kink_momentum(self):
        g = Grid1D(-40.0, 40.0, 801)
        st = init_kink(g, KinkParams(Delta=1.0, c=0.5), AVG9)
        # u_t = -c u_x, checked against a time finite difference
        h = 1e-6
        p = KinkParams(Delta=1.0, c=0.5)
        fd = (pi_kink(g.x, h, p) - pi_kink(g.x, -h, p)) / (2 * h)
        np.testing.assert_allclose(st.p, fd, atol=1e-8)

    def test_dsg_kink_state(self):
        g = Grid1D(-30.0, 30.0, 1201)
        a, b = static_kink_coefficients(1.0)
        st = init_kink(g, KinkParams(Delta=1.0, dsg_a=a, dsg_b=b), AVG12)
        assert abs(st.u[0] - 2.0 * math.pi) <= 1e-10
        assert abs(st.u[-1]) <= 1e-10


class TestResidual:
    def test_freewave_linear_profile(self):
        g = Grid1D(-10.0, 10.0, 201)
        m = ModelSpec(FREEWAVE)
        sol = lambda x, t: 0.3 * (x - t)
        assert residual(m, sol, g, 0.5) < 1e-12

    def test_avg9_second_order(self):
        m = ModelSpec(AVG9, delta=1.0)
        p = KinkParams(c=0.5, Delta=1.0)
        sol = lambda x, t: pi_kink(x, t, p)
        rows = residual_convergence(m, sol, [0.05, 0.025], 40.0, 0.0)
        assert abs(rows[1][2] - 2.0) < 0.2

    def test_avg7_second_order(self):
        m = ModelSpec(AVG7, epsilon=0.1, delta=0.5)
        p = KinkParams(c=0.0, Delta=0.5, epsilon=0.1)
        sol = lambda x, t: pi_kink(x, t, p, AVG7)
        rows = residual_convergence(m, sol, [0.05, 0.025], 400.0, 0.0)
        assert abs(rows[1][2] - 2.0) < 0.2


class TestTrackKink:
    def make_snaps(self, speed, g, times):
        p = KinkParams(Delta=1.0)
        return [FieldState(pi_kink(g.x - speed * t, 0.0, p), np.zeros(g.n), t)
                for t in times]

    def test_static(self):
        g = Grid1D(-20.0, 20.0, 401)
        rec = track_kink(self.make_snaps(0.0, g, np.linspace(0, 10, 21)), g)
        assert abs(rec.c_est) < 1e-10

    def test_synthetic_speed(self):
        g = Grid1D(-20.0, 20.0, 401)
        rec = track_kink(self.make_snaps(0.5, g, np.linspace(0, 10, 21)), g)
        assert rec.c_est == pytest.approx(0.5, abs=1e-6)

    def test_no_crossing(self):
        g = Grid1D(-20.0, 20.0, 401)
        flat = [FieldState(np.zeros(g.n), np.zeros(g.n), t) for t in (0.0, 1.0)]
        with pytest.raises(TrackingError):
            track_kink(flat, g)

    def test_simulated_speed(self):
        g = Grid1D(-30.0, 30.0, 1201)
        m = ModelSpec(AVG9, delta=1.0)
        st = init_kink(g, KinkParams(Delta=1.0, c=0.5), AVG9)
        rec = SnapshotRecorder()
        integrate(st, m, g, IntegrationPlan(dt=0.025, t_end=20.0,
                                            snapshot_stride=80),
                  observers=(rec,))
        track = track_kink(rec.snapshots, g)
        assert track.c_est == pytest.approx(0.5, abs=0.02)
