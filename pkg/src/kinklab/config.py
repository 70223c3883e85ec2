"""Config-file parsing: one TOML file with flat tables describing the
forcing, grid, model, plan, and initial data.  Everything is validated
(fail fast) before any compute or output-directory creation."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigurationError
from .fields import FieldState, Grid1D, NEUMANN_ZERO
from .forcing import ForcingStack, PeriodicForcing, build_stack
from .integrate import IntegrationPlan
from .kinks import KinkParams, init_kink
from .models import AVERAGED_VARIANTS, DRIVEN_VARIANTS, ModelSpec

SCENARIOS = ("simulate", "compare", "kink-residual", "delta", "sweep")


def _field_error(table, message):
    err = ConfigurationError(message)
    err.field = table
    return err


def forcing_from_table(tbl) -> PeriodicForcing:
    kind = tbl.get("kind", "cosine")
    amplitude = float(tbl.get("amplitude", 1.0))
    period = float(tbl.get("period", 2.0 * math.pi))
    if kind == "cosine":
        return PeriodicForcing.cosine(amplitude, period)
    if kind == "square":
        return PeriodicForcing.square(amplitude, period)
    if kind == "series":
        a = tuple(float(c) for c in tbl.get("a", ()))
        b = tuple(float(c) for c in tbl.get("b", ()))
        if not a and not b:
            raise _field_error("forcing", "series forcing needs a and/or b")
        return PeriodicForcing.from_series(a, b, period)
    if kind == "zero":
        return PeriodicForcing.zero(period)
    raise _field_error("forcing", f"unknown forcing kind {kind!r}")


def grid_from_table(tbl) -> Grid1D:
    try:
        return Grid1D(
            x_min=float(tbl["x_min"]),
            x_max=float(tbl["x_max"]),
            n=int(tbl["n"]),
            boundary=tbl.get("boundary", NEUMANN_ZERO),
        )
    except KeyError as e:
        raise _field_error("grid", f"missing key {e.args[0]}") from e


def plan_from_table(tbl) -> IntegrationPlan:
    try:
        return IntegrationPlan(
            dt=float(tbl["dt"]),
            t_end=float(tbl["t_end"]),
            scheme=tbl.get("scheme", "leapfrog"),
            snapshot_stride=int(tbl.get("snapshot_stride", 10)),
            oversample=int(tbl.get("oversample", 64)),
        )
    except KeyError as e:
        raise _field_error("plan", f"missing key {e.args[0]}") from e


def model_from_table(tbl, stack: ForcingStack | None) -> ModelSpec:
    try:
        variant = tbl["variant"]
    except KeyError as e:
        raise _field_error("model", "missing key variant") from e
    epsilon = tbl.get("epsilon")
    delta = tbl.get("delta")
    use_stack = stack if (variant in DRIVEN_VARIANTS
                          or (variant in AVERAGED_VARIANTS and delta is None)) else None
    try:
        return ModelSpec(
            variant=variant,
            epsilon=None if epsilon is None else float(epsilon),
            stack=use_stack,
            delta=None if delta is None else float(delta),
        )
    except ConfigurationError as e:
        if not hasattr(e, "field"):
            e.field = "model"
        raise


def initial_from_table(tbl, grid: Grid1D, model: ModelSpec) -> FieldState:
    kind = tbl.get("kind", "vacuum")
    if kind == "vacuum":
        return FieldState(np.zeros(grid.n), np.zeros(grid.n), 0.0)
    if kind == "bump":
        return gaussian_bump(
            grid,
            amplitude=float(tbl.get("amplitude", 0.5)),
            width=float(tbl.get("width", 2.0)),
            center=float(tbl.get("center", 0.0)),
        )
    if kind == "kink":
        params = KinkParams(
            c=float(tbl.get("c", 0.0)),
            delta_shift=float(tbl.get("delta_shift", 0.0)),
            Delta=model.delta_eff,
            epsilon=model.epsilon,
        )
        variant = tbl.get("variant", model.variant)
        return init_kink(grid, params, variant)
    raise _field_error("initial", f"unknown initial kind {kind!r}")


def gaussian_bump(grid: Grid1D, amplitude=0.5, width=2.0, center=0.0) -> FieldState:
    u = amplitude * np.exp(-((grid.x - center) / width) ** 2)
    return FieldState(u, np.zeros(grid.n), 0.0)


@dataclass
class RunConfig:
    scenario: str
    output_dir: str | None
    raw: dict
    forcing: PeriodicForcing | None
    stack: ForcingStack | None
    grid: Grid1D | None
    model: ModelSpec | None
    plan: IntegrationPlan | None
    initial: FieldState | None


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as e:
        raise _field_error("config", f"config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise _field_error("config", f"config parse error: {e}") from e
    return build_config(raw)


def build_config(raw: dict) -> RunConfig:
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise _field_error(
            "scenario", f"scenario must be one of {', '.join(SCENARIOS)}")
    output_dir = raw.get("output_dir")

    forcing = stack = None
    if "forcing" in raw:
        forcing = forcing_from_table(raw["forcing"])
        stack = build_stack(forcing)

    grid = grid_from_table(raw["grid"]) if "grid" in raw else None
    model = model_from_table(raw["model"], stack) if "model" in raw else None
    plan = plan_from_table(raw["plan"]) if "plan" in raw else None

    initial = None
    if scenario in ("simulate", "sweep"):
        for name, val in (("grid", grid), ("model", model), ("plan", plan)):
            if val is None:
                raise _field_error(name, f"{scenario} requires a [{name}] table")
        plan.validate_for(model, grid)
        initial = initial_from_table(raw.get("initial", {}), grid, model)
    if scenario == "delta" and stack is None:
        raise _field_error("forcing", "delta scenario requires a [forcing] table")

    return RunConfig(scenario=scenario, output_dir=output_dir, raw=raw,
                     forcing=forcing, stack=stack, grid=grid, model=model,
                     plan=plan, initial=initial)
