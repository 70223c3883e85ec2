"""Zero-mean periodic excitations and their antiderivative calculus.

A forcing is stored as a finite Fourier series (no constant term, so the
zero-mean constraint is structural).  The square wave additionally carries
an exact piecewise evaluator; its antiderivatives are series-backed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation

TWO_PI = 2.0 * math.pi

# Composite trapezoid on a full period; exact for trigonometric
# polynomials of degree < QUAD_PANELS.
QUAD_PANELS = 4096

# Odd-harmonic terms kept when a square wave is expanded as a series.
SQUARE_HARMONICS = 64


@dataclass(frozen=True)
class PeriodicForcing:
    """T-periodic zero-mean function given by cosine/sine coefficients
    for harmonics k = 1..K.  ``waveform`` tags named shapes; "square"
    evaluates exactly (+-amplitude) while keeping a truncated series for
    the antiderivative and Parseval paths."""

    period: float = TWO_PI
    a: tuple = ()          # cosine coefficients
    b: tuple = ()          # sine coefficients
    waveform: str = "series"
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.period > 0:
            raise ContractViolation(f"period must be positive, got {self.period}")
        object.__setattr__(self, "a", tuple(float(c) for c in self.a))
        object.__setattr__(self, "b", tuple(float(c) for c in self.b))

    # -- constructors -------------------------------------------------

    @classmethod
    def cosine(cls, amplitude=1.0, period=TWO_PI):
        return cls(period=period, a=(amplitude,), b=(), waveform="cosine",
                   amplitude=amplitude)

    @classmethod
    def square(cls, amplitude=1.0, period=TWO_PI, harmonics=SQUARE_HARMONICS):
        """+-amplitude square wave, positive on the first half-period."""
        kmax = 2 * harmonics - 1
        b = [0.0] * kmax
        for k in range(1, kmax + 1, 2):
            b[k - 1] = 4.0 * amplitude / (math.pi * k)
        return cls(period=period, a=(), b=tuple(b), waveform="square",
                   amplitude=amplitude)

    @classmethod
    def from_series(cls, a=(), b=(), period=TWO_PI):
        return cls(period=period, a=tuple(a), b=tuple(b), waveform="series")

    @classmethod
    def zero(cls, period=TWO_PI):
        return cls(period=period)

    # -- evaluation ---------------------------------------------------

    @property
    def omega(self):
        return TWO_PI / self.period

    @property
    def is_zero(self):
        return all(c == 0.0 for c in self.a) and all(c == 0.0 for c in self.b)

    @property
    def has_exact_waveform(self):
        return self.waveform == "square"

    def series_eval(self, tau):
        """Evaluate the stored Fourier series."""
        tau = np.asarray(tau, dtype=float)
        out = np.zeros_like(tau)
        w = self.omega
        for k, ak in enumerate(self.a, start=1):
            if ak != 0.0:
                out = out + ak * np.cos(k * w * tau)
        for k, bk in enumerate(self.b, start=1):
            if bk != 0.0:
                out = out + bk * np.sin(k * w * tau)
        return out

    def __call__(self, tau):
        if self.waveform == "square":
            tau = np.asarray(tau, dtype=float)
            return self.amplitude * np.sign(np.sin(self.omega * tau))
        return self.series_eval(tau)

    def scaled(self, c):
        return PeriodicForcing(
            period=self.period,
            a=tuple(c * x for x in self.a),
            b=tuple(c * x for x in self.b),
            waveform=self.waveform,
            amplitude=c * self.amplitude,
        )


def antiderivative_zero_mean(f: PeriodicForcing) -> PeriodicForcing:
    """The unique zero-mean periodic antiderivative, term by term:
    a_k cos(k w t) -> (a_k/kw) sin(k w t), b_k sin -> -(b_k/kw) cos."""
    w = f.omega
    n = max(len(f.a), len(f.b))
    a = [0.0] * n
    b = [0.0] * n
    for k, ak in enumerate(f.a, start=1):
        b[k - 1] += ak / (k * w)
    for k, bk in enumerate(f.b, start=1):
        a[k - 1] += -bk / (k * w)
    return PeriodicForcing(period=f.period, a=tuple(a), b=tuple(b))


def quadrature_mean(g, period, panels=QUAD_PANELS):
    """Trapezoid mean of a callable over one period (periodic: equal to
    the plain average of left-endpoint samples)."""
    tau = np.arange(panels) * (period / panels)
    return float(np.mean(g(tau)))


def mean_square(g: PeriodicForcing) -> float:
    """Mean of g^2 over one period.  Parseval closed form for series,
    quadrature for exact named waveforms."""
    if g.has_exact_waveform:
        # midpoint sampling keeps the jump points (where sign() = 0)
        # out of the quadrature; same exactness class as trapezoid on
        # a periodic domain.
        tau = (np.arange(QUAD_PANELS) + 0.5) * (g.period / QUAD_PANELS)
        return float(np.mean(g(tau) ** 2))
    return 0.5 * (sum(c * c for c in g.a) + sum(c * c for c in g.b))


def mean_square_quadrature(g: PeriodicForcing, panels=QUAD_PANELS) -> float:
    """Quadrature fallback for mean_square (cross-check path)."""
    return quadrature_mean(lambda t: g.series_eval(t) ** 2, g.period, panels)


@dataclass(frozen=True)
class ForcingStack:
    """A forcing together with its first and second zero-mean
    antiderivatives and the mean-square statistic delta = <f1^2>."""

    f: PeriodicForcing
    f_minus1: PeriodicForcing
    f_minus2: PeriodicForcing
    delta: float

    @property
    def period(self):
        return self.f.period

    def check_report(self):
        """Quadrature residuals of the stack invariants (all should be
        at rounding level)."""
        T = self.period
        report = {
            "mean_f": abs(quadrature_mean(self.f.series_eval, T)),
            "mean_f1": abs(quadrature_mean(self.f_minus1, T)),
            "mean_f2": abs(quadrature_mean(self.f_minus2, T)),
            "delta_parseval_vs_quadrature": abs(
                self.delta - mean_square_quadrature(self.f_minus1)),
        }
        # round-trip derivative of f1 against the series form of f
        h = 1e-5 * T / TWO_PI
        tau = np.linspace(0.0, T, 257)
        fd = (self.f_minus1(tau + h) - self.f_minus1(tau - h)) / (2 * h)
        report["f1_derivative_residual"] = float(
            np.max(np.abs(fd - self.f.series_eval(tau))))
        return report


def build_stack(f: PeriodicForcing) -> ForcingStack:
    f1 = antiderivative_zero_mean(f)
    f2 = antiderivative_zero_mean(f1)
    return ForcingStack(f=f, f_minus1=f1, f_minus2=f2, delta=mean_square(f1))
