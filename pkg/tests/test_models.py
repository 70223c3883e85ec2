import math

import numpy as np
import pytest

from kinklab.errors import ConfigurationError, UnsupportedVariant
from kinklab.fields import FieldState, Grid1D
from kinklab.forcing import PeriodicForcing, build_stack
from kinklab.integrate import step
from kinklab.kinks import KinkParams, init_kink
from kinklab.models import (AVG7, AVG9, AVG12, AVG13, AVERAGED_VARIANTS,
                            FREEWAVE, FULL1, FULL8, ModelSpec, averaged_force,
                            energy, potential_density, rhs,
                            velocity_from_momentum)

COS_STACK = build_stack(PeriodicForcing.cosine())
GRID = Grid1D(-10.0, 10.0, 201)


def const_state(u_val, p_val=0.0, n=GRID.n):
    return FieldState(np.full(n, u_val), np.full(n, p_val), 0.0)


class TestModelSpec:
    def test_epsilon_required(self):
        with pytest.raises(ConfigurationError):
            ModelSpec(FULL1, stack=COS_STACK)
        with pytest.raises(ConfigurationError):
            ModelSpec(AVG7, delta=1.0)  # missing epsilon

    def test_driven_needs_stack(self):
        with pytest.raises(ConfigurationError):
            ModelSpec(FULL8, epsilon=0.1)

    def test_delta_stack_agreement(self):
        ModelSpec(AVG9, stack=COS_STACK, delta=0.5)
        with pytest.raises(ConfigurationError):
            ModelSpec(AVG9, stack=COS_STACK, delta=0.6)

    def test_unknown_variant(self):
        with pytest.raises(ConfigurationError):
            ModelSpec("avg99", delta=1.0)


class TestRhs:
    def test_avg9_vacuum_fixed_point(self):
        m = ModelSpec(AVG9, delta=1.0)
        du, dp = rhs(const_state(0.0), 0.0, m, GRID)
        np.testing.assert_array_equal(du, 0.0)
        np.testing.assert_array_equal(dp, 0.0)

    def test_avg9_half_pi(self):
        m = ModelSpec(AVG9, delta=1.0)
        du, dp = rhs(const_state(math.pi / 2.0), 0.0, m, GRID)
        np.testing.assert_array_equal(du, 0.0)
        np.testing.assert_allclose(dp, 0.0, atol=1e-15)

    def test_full1_hand_example(self):
        # f = cos, eps = 0.1, t with f1(t/eps) = 1, u = pi/2, p = 0:
        # du/dt = -eps, dp/dt = 0 (u_xx = 0, cos u = 0, sin 2u = 0)
        eps = 0.1
        m = ModelSpec(FULL1, epsilon=eps, stack=COS_STACK)
        t = eps * math.pi / 2.0  # f1 = sin, so f1(t/eps) = 1
        du, dp = rhs(const_state(math.pi / 2.0), t, m, GRID)
        np.testing.assert_allclose(du, -0.1, atol=1e-14)
        np.testing.assert_allclose(dp, 0.0, atol=1e-14)
        # independent scalar evaluation of the same system
        u, p, phi = math.pi / 2.0, 0.0, math.sin(t / eps)
        du_ref = p - eps * phi * math.sin(u)
        dp_ref = eps * phi * p * math.cos(u) - 0.5 * eps**2 * phi**2 * math.sin(2 * u)
        assert du[0] == pytest.approx(du_ref, abs=1e-14)
        assert dp[0] == pytest.approx(dp_ref, abs=1e-14)

    def test_full1_zero_forcing_is_free(self):
        zero = build_stack(PeriodicForcing.zero())
        m = ModelSpec(FULL1, epsilon=0.1, stack=zero)
        rng = np.random.default_rng(3)
        s = FieldState(rng.normal(size=GRID.n), rng.normal(size=GRID.n), 0.3)
        du, dp = rhs(s, 0.3, m, GRID)
        du_f, dp_f = rhs(s, 0.3, ModelSpec(FREEWAVE), GRID)
        np.testing.assert_array_equal(du, du_f)
        np.testing.assert_array_equal(dp, dp_f)

    def test_avg13_limits(self):
        u = np.linspace(-3.0, 3.0, 50)
        f13 = averaged_force(u, ModelSpec(AVG13, epsilon=1.0, delta=0.7))
        f12 = averaged_force(u, ModelSpec(AVG12, delta=0.7))
        np.testing.assert_array_equal(f13, f12)
        f13_small = averaged_force(u, ModelSpec(AVG13, epsilon=1e-12, delta=0.7))
        np.testing.assert_allclose(f13_small, np.sin(u), atol=1e-20)


class TestPotential:
    def test_avg9_vacuum_gauge(self):
        assert potential_density(0.0, ModelSpec(AVG9, delta=1.0)) == 0.0

    def test_avg9_half_pi(self):
        # (2/4)(1 - cos pi) = 1
        assert potential_density(math.pi / 2.0, ModelSpec(AVG9, delta=2.0)) \
            == pytest.approx(1.0, abs=1e-15)

    def test_avg12_sine_gordon_limit(self):
        assert potential_density(math.pi, ModelSpec(AVG12, delta=0.0)) \
            == pytest.approx(2.0, abs=1e-15)

    def test_driven_rejected(self):
        m = ModelSpec(FULL8, epsilon=0.1, stack=COS_STACK)
        with pytest.raises(UnsupportedVariant):
            potential_density(0.5, m)

    @pytest.mark.parametrize("variant", AVERAGED_VARIANTS)
    def test_force_is_potential_gradient(self, variant):
        m = ModelSpec(variant, epsilon=0.3, delta=0.8)
        rng = np.random.default_rng(5)
        u = rng.uniform(-2.0 * math.pi, 2.0 * math.pi, size=100)
        h = 1e-5
        fd = (potential_density(u + h, m) - potential_density(u - h, m)) / (2 * h)
        np.testing.assert_allclose(fd, averaged_force(u, m), atol=1e-8)


class TestMomentumDefinition:
    def test_velocity_recovered_from_trajectory(self):
        # d/dt u from integrated Full8 matches p - f1(t/eps) sin u at O(dt^2)
        eps = 0.1
        m = ModelSpec(FULL8, epsilon=eps, stack=COS_STACK)
        g = Grid1D(-10.0, 10.0, 201)
        rng = np.random.default_rng(9)
        base = FieldState(0.5 * np.exp(-g.x**2), 0.1 * np.exp(-g.x**2), 0.0)
        errs = []
        for dt in (2e-3, 1e-3):
            before = step(base, m, g, -dt, scheme="rk4")
            after = step(base, m, g, dt, scheme="rk4")
            fd = (after.u - before.u) / (2.0 * dt)
            v = velocity_from_momentum(base.u, base.p, 0.0, m)
            errs.append(np.max(np.abs(fd - v)))
        order = math.log2(errs[0] / errs[1])
        assert order > 1.8


class TestEnergy:
    def test_vacuum(self):
        m = ModelSpec(AVG9, delta=1.0)
        assert energy(const_state(0.0), m, GRID) == 0.0

    def test_static_kink_energy(self):
        # first integral gives E = 2 sqrt(Delta) for the Avg9 kink
        g = Grid1D(-40.0, 40.0, 4001)
        m = ModelSpec(AVG9, delta=1.0)
        st = init_kink(g, KinkParams(Delta=1.0), AVG9)
        assert energy(st, m, g) == pytest.approx(2.0, rel=0.01)

    def test_translation_invariance(self):
        g = Grid1D(-40.0, 40.0, 1600, boundary="periodic")
        m = ModelSpec(AVG9, delta=1.0)
        u = 2.0 * np.arctan(np.exp(g.x))
        # make it periodic-compatible: kink + antikink pair
        u = u + 2.0 * np.arctan(np.exp(-(g.x - 20.0))) \
              + 2.0 * np.arctan(np.exp(-(g.x + 20.0))) - math.pi
        st = FieldState(u, np.zeros(g.n), 0.0)
        e0 = energy(st, m, g)
        rolled = FieldState(np.roll(u, 37), np.zeros(g.n), 0.0)
        assert energy(rolled, m, g) == pytest.approx(e0, abs=1e-10)

    def test_kink_energy_convergence_order(self):
        m = ModelSpec(AVG9, delta=1.0)
        errs = []
        for dx in (0.08, 0.04):
            g = Grid1D(-40.0, 40.0, int(round(80.0 / dx)) + 1)
            st = init_kink(g, KinkParams(Delta=1.0), AVG9)
            errs.append(abs(energy(st, m, g) - 2.0))
        assert math.log2(errs[0] / errs[1]) > 1.8
