"""Uniform 1D grid, field state, discrete operators and norms."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractViolation

PERIODIC = "periodic"
NEUMANN_ZERO = "neumann_zero"


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [x_min, x_max].  Periodic grids drop the duplicate
    right endpoint, so dx = L/n; non-periodic grids include both ends,
    dx = L/(n-1)."""

    x_min: float
    x_max: float
    n: int
    boundary: str = NEUMANN_ZERO

    def __post_init__(self):
        if self.n < 8:
            raise ContractViolation(f"grid needs n >= 8, got {self.n}")
        if not self.x_max > self.x_min:
            raise ContractViolation("x_max must exceed x_min")
        if self.boundary not in (PERIODIC, NEUMANN_ZERO):
            raise ContractViolation(f"unknown boundary {self.boundary!r}")

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def dx(self):
        if self.boundary == PERIODIC:
            return self.length / self.n
        return self.length / (self.n - 1)

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n)


@dataclass
class FieldState:
    """Field u with conjugate momentum p at slow time t."""

    u: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def copy(self):
        return FieldState(self.u.copy(), self.p.copy(), self.t)


def _check_length(field, grid):
    if len(field) != grid.n:
        raise ContractViolation(
            f"field length {len(field)} does not match grid.n = {grid.n}")


def laplacian(field, grid: Grid1D):
    """Second-order central difference; periodic wrap or mirrored ghost
    nodes (zero slope) at the edges."""
    _check_length(field, grid)
    out = np.empty_like(field)
    inv_dx2 = 1.0 / grid.dx**2
    out[1:-1] = (field[:-2] - 2.0 * field[1:-1] + field[2:]) * inv_dx2
    if grid.boundary == PERIODIC:
        out[0] = (field[-1] - 2.0 * field[0] + field[1]) * inv_dx2
        out[-1] = (field[-2] - 2.0 * field[-1] + field[0]) * inv_dx2
    else:
        # ghost = mirror of the first interior node
        out[0] = 2.0 * (field[1] - field[0]) * inv_dx2
        out[-1] = 2.0 * (field[-2] - field[-1]) * inv_dx2
    return out


def gradient(field, grid: Grid1D):
    """Centered first derivative with the same boundary treatment."""
    _check_length(field, grid)
    out = np.empty_like(field)
    inv_2dx = 0.5 / grid.dx
    out[1:-1] = (field[2:] - field[:-2]) * inv_2dx
    if grid.boundary == PERIODIC:
        out[0] = (field[1] - field[-1]) * inv_2dx
        out[-1] = (field[0] - field[-2]) * inv_2dx
    else:
        out[0] = 0.0
        out[-1] = 0.0
    return out


def quadrature_weights(grid: Grid1D):
    """Trapezoid weights matching the grid's boundary convention."""
    w = np.full(grid.n, grid.dx)
    if grid.boundary != PERIODIC:
        w[0] *= 0.5
        w[-1] *= 0.5
    return w


def sup_norm_diff(a: FieldState, b: FieldState) -> float:
    """max_i |a.u - b.u|."""
    if len(a.u) != len(b.u):
        raise ContractViolation("states live on different grids")
    return float(np.max(np.abs(a.u - b.u)))
