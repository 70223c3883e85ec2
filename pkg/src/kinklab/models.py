"""Catalog of the model variants: four parametrically driven wave models,
their four averaged counterparts, and a free-wave test model.

Driven variants are integrated in slow time t.  Their first-order form
uses the canonical momentum p = u_t + s*f1(t/eps)*sin(u), where f1 is the
zero-mean antiderivative of the excitation and s is the variant's
amplitude scale (eps for weakly driven, 1 for strongly driven).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UnsupportedVariant
from .fields import FieldState, Grid1D, laplacian, quadrature_weights
from .forcing import ForcingStack

FULL1 = "full1"      # u_tt - u_xx + f(t/eps) sin u = 0
FULL8 = "full8"      # u_tt - u_xx + (1/eps) f(t/eps) sin u = 0
FULL10 = "full10"    # u_tt - u_xx + (1 + (1/eps) f(t/eps)) sin u = 0
FULL13 = "full13"    # u_tt - u_xx + (1 + f(t/eps)) sin u = 0
AVG7 = "avg7"        # xi_tt - xi_xx + eps^2 (D/2) sin 2xi = 0
AVG9 = "avg9"        # xi_tt - xi_xx + (D/2) sin 2xi = 0
AVG12 = "avg12"      # xi_tt - xi_xx + sin xi + (D/2) sin 2xi = 0
AVG13 = "avg13"      # xi_tt - xi_xx + sin xi + eps^2 (D/2) sin 2xi = 0
FREEWAVE = "freewave"

DRIVEN_VARIANTS = (FULL1, FULL8, FULL10, FULL13)
AVERAGED_VARIANTS = (AVG7, AVG9, AVG12, AVG13)
ALL_VARIANTS = DRIVEN_VARIANTS + AVERAGED_VARIANTS + (FREEWAVE,)

# variants whose equation requires the small parameter
_NEEDS_EPSILON = (FULL1, FULL8, FULL10, FULL13, AVG7, AVG13)
# variants carrying the background sin(u) restoring force
_PENDULUM_TYPE = (FULL10, FULL13, AVG12, AVG13)

# weak/strong amplitude scale s multiplying f1(t/eps) in the momentum map
_PHI_SCALE = {FULL1: "eps", FULL13: "eps", FULL8: "one", FULL10: "one"}


@dataclass(frozen=True)
class ModelSpec:
    """Selects a variant together with its parameters.  ``delta`` may be
    given directly (pure averaged runs) or inherited from the forcing
    stack; when both are present they must agree."""

    variant: str
    epsilon: float | None = None
    stack: ForcingStack | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.variant not in ALL_VARIANTS:
            raise ConfigurationError(f"unknown model variant {self.variant!r}")
        if self.variant in _NEEDS_EPSILON:
            if self.epsilon is None or not self.epsilon > 0:
                raise ConfigurationError(
                    f"variant {self.variant} requires epsilon > 0")
        if self.variant in DRIVEN_VARIANTS and self.stack is None:
            raise ConfigurationError(
                f"driven variant {self.variant} requires a forcing stack")
        if self.delta is not None and self.delta < 0:
            raise ConfigurationError("delta must be nonnegative")
        if self.delta is not None and self.stack is not None:
            if abs(self.delta - self.stack.delta) > 1e-12:
                raise ConfigurationError(
                    f"explicit delta {self.delta} disagrees with the stack's "
                    f"{self.stack.delta}")
        if (self.variant in AVERAGED_VARIANTS
                and self.delta is None and self.stack is None):
            raise ConfigurationError(
                f"averaged variant {self.variant} needs delta or a stack")

    @property
    def is_driven(self):
        return self.variant in DRIVEN_VARIANTS

    @property
    def is_averaged(self):
        return self.variant in AVERAGED_VARIANTS

    @property
    def delta_eff(self):
        if self.delta is not None:
            return self.delta
        if self.stack is not None:
            return self.stack.delta
        return 0.0

    @property
    def phi_scale(self):
        """Amplitude scale s of the f1 term in the momentum map."""
        return self.epsilon if _PHI_SCALE[self.variant] == "eps" else 1.0

    def phi(self, t):
        """f1 evaluated on the fast clock, f1(t/eps)."""
        return float(self.stack.f_minus1(t / self.epsilon))

    def parametric_coefficient(self, t):
        """Coefficient c(t) of sin(u) in the second-order form
        u_tt = u_xx - c(t) sin u."""
        if not self.is_driven:
            raise UnsupportedVariant(
                f"{self.variant} has no time-dependent coefficient")
        fval = float(self.stack.f(t / self.epsilon))
        if self.variant == FULL1:
            return fval
        if self.variant == FULL8:
            return fval / self.epsilon
        if self.variant == FULL10:
            return 1.0 + fval / self.epsilon
        return 1.0 + fval  # FULL13


def averaged_force(u, model: ModelSpec):
    """The autonomous potential force G(u) with dp/dt = u_xx - G(u)."""
    v = model.variant
    if v == FREEWAVE:
        return np.zeros_like(u)
    d = model.delta_eff
    if v == AVG7:
        return model.epsilon**2 * (d / 2.0) * np.sin(2.0 * u)
    if v == AVG9:
        return (d / 2.0) * np.sin(2.0 * u)
    if v == AVG12:
        return np.sin(u) + (d / 2.0) * np.sin(2.0 * u)
    if v == AVG13:
        return np.sin(u) + model.epsilon**2 * (d / 2.0) * np.sin(2.0 * u)
    raise UnsupportedVariant(f"{v} is not an averaged variant")


def potential_density(u, model: ModelSpec):
    """V(u) with V'(u) = averaged_force, gauged so vacua sit at zero."""
    v = model.variant
    if v == FREEWAVE:
        return np.zeros_like(np.asarray(u, dtype=float))
    u = np.asarray(u, dtype=float)
    d = model.delta_eff
    if v == AVG7:
        return model.epsilon**2 * (d / 4.0) * (1.0 - np.cos(2.0 * u))
    if v == AVG9:
        return (d / 4.0) * (1.0 - np.cos(2.0 * u))
    if v == AVG12:
        return (1.0 - np.cos(u)) + (d / 4.0) * (1.0 - np.cos(2.0 * u))
    if v == AVG13:
        return (1.0 - np.cos(u)) + model.epsilon**2 * (d / 4.0) * (1.0 - np.cos(2.0 * u))
    raise UnsupportedVariant(
        f"{v} has a time-dependent potential; use energy(state, ...) instead")


def velocity_from_momentum(u, p, t, model: ModelSpec):
    """u_t = p - s*f1(t/eps)*sin u for driven variants; u_t = p otherwise."""
    if not model.is_driven:
        return p.copy() if isinstance(p, np.ndarray) else p
    return p - model.phi_scale * model.phi(t) * np.sin(u)


def momentum_from_velocity(u, v, t, model: ModelSpec):
    if not model.is_driven:
        return v.copy() if isinstance(v, np.ndarray) else v
    return v + model.phi_scale * model.phi(t) * np.sin(u)


def rhs(state: FieldState, t, model: ModelSpec, grid: Grid1D):
    """Slow-time first-order system (du/dt, dp/dt) for every variant."""
    u, p = state.u, state.p
    uxx = laplacian(u, grid)
    if model.is_driven:
        s = model.phi_scale
        phi = model.phi(t)
        sin_u = np.sin(u)
        du = p - s * phi * sin_u
        dp = uxx + s * phi * p * np.cos(u) - 0.5 * (s * phi) ** 2 * np.sin(2.0 * u)
        if model.variant in _PENDULUM_TYPE:
            dp = dp - sin_u
        return du, dp
    return p.copy(), uxx - averaged_force(u, model)


def _gradient_energy(u, grid: Grid1D) -> float:
    """Staggered (forward-difference) gradient energy
    sum (u_{i+1} - u_i)^2 / (2 dx).  This is the gradient part of the
    discrete Hamiltonian whose flow is the semi-discrete system with the
    three-point laplacian, so it is conserved exactly by that flow
    (unlike the central-difference form, whose mismatch is dt
    independent)."""
    du = np.diff(u)
    if grid.boundary == "periodic":
        du = np.append(du, u[0] - u[-1])
    return float(np.sum(du * du)) / (2.0 * grid.dx)


def energy(state: FieldState, model: ModelSpec, grid: Grid1D) -> float:
    """Discrete energy: staggered gradient energy plus trapezoid
    quadrature of the pointwise density.  Autonomous variants use their
    conserved potential; driven variants report the instantaneous
    Hamiltonian H(t) with density u_t^2/2 + u_x^2/2 + c(t)(1 - cos u)."""
    if model.is_driven:
        v = velocity_from_momentum(state.u, state.p, state.t, model)
        c = model.parametric_coefficient(state.t)
        dens = 0.5 * v**2 + c * (1.0 - np.cos(state.u))
    else:
        dens = 0.5 * state.p**2 + potential_density(state.u, model)
    return float(np.sum(quadrature_weights(grid) * dens)
                 + _gradient_energy(state.u, grid))
