"""One-parameter sweeps over the lumped model and electrode-coverage search."""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import InvalidInputError, PiezoHarvError
from .lem import (
    HarvesterModel,
    damping_q,
    deflection_at_pressure,
    displacement_at,
    electrical_coupling,
    natural_frequency,
    voltage_at_pressure,
)
from .provenance import canonical_hash, model_materials_hash

PARAMETERS = ("plate_radius", "piezo_thickness", "pressure", "electrode_coverage", "point_radius")
OUTPUTS = {
    "f_n": "f_n_hz",
    "V_oc": "voc_v",
    "w0": "w0_m",
    "zeta": "zeta",
    "Q": "q",
    "displacement": "displacement_m",
}
PARAMETER_COLUMNS = {
    "plate_radius": "plate_radius_m",
    "piezo_thickness": "piezo_thickness_m",
    "pressure": "pressure_pa",
    "electrode_coverage": "electrode_coverage",
    "point_radius": "point_radius_m",
}


class SweepPointError(PiezoHarvError):
    """A model evaluation failed at one grid point."""

    def __init__(self, index: int, value: float, cause: Exception):
        super().__init__(f"sweep failed at grid point {index} (value={value!r}): {cause}")
        self.index = index
        self.value = value


@dataclass(frozen=True)
class SweepSpec:
    base_model: HarvesterModel
    parameter: str
    start: float
    stop: float
    steps: int
    outputs: tuple[str, ...] = ("f_n",)
    pressure: float = 400.0  # Pa
    frequency: float | None = None  # Hz; None = static
    point_radius: float = 0.0  # m
    log_spacing: bool = False
    zeta_table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.parameter not in PARAMETERS:
            raise InvalidInputError(f"parameter must be one of {PARAMETERS}")
        if self.steps < 2:
            raise InvalidInputError("steps must be >= 2")
        if not self.start < self.stop:
            raise InvalidInputError("sweep needs start < stop")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad or not self.outputs:
            raise InvalidInputError(f"outputs must be a non-empty subset of {tuple(OUTPUTS)}")
        if self.parameter == "pressure":
            if self.start < 0:
                raise InvalidInputError("pressure must be >= 0")
        elif self.parameter == "point_radius":
            if self.start < 0 or self.stop > self.base_model.plate_radius:
                raise InvalidInputError("point radius must lie within the plate")
        elif self.parameter == "electrode_coverage":
            if self.start <= 0 or self.stop > 1:
                raise InvalidInputError("electrode coverage must lie in (0, 1]")
        elif self.start <= 0:
            raise InvalidInputError(f"{self.parameter} must be > 0")
        if self.log_spacing and self.start <= 0:
            raise InvalidInputError("log spacing needs start > 0")
        if self.zeta_table is not None:
            xs = [row[0] for row in self.zeta_table]
            if len(xs) < 2 or any(b <= a for a, b in zip(xs, xs[1:])):
                raise InvalidInputError("zeta table needs >= 2 rows with increasing keys")

    def grid(self) -> np.ndarray:
        if self.log_spacing:
            g = np.geomspace(self.start, self.stop, self.steps)
        else:
            g = np.linspace(self.start, self.stop, self.steps)
        # pin the endpoints exactly
        g[0], g[-1] = self.start, self.stop
        return g

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "from": self.start,
            "to": self.stop,
            "steps": self.steps,
            "outputs": list(self.outputs),
            "pressure_pa": self.pressure,
            "frequency_hz": self.frequency,
            "point_radius_m": self.point_radius,
            "log_spacing": self.log_spacing,
            "zeta_table": None if self.zeta_table is None else [list(r) for r in self.zeta_table],
        }


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    values: np.ndarray
    columns: dict[str, np.ndarray]
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def header(self) -> list[str]:
        return [PARAMETER_COLUMNS[self.parameter], *self.columns]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for i, v in enumerate(self.values):
            cells = [v, *(col[i] for col in self.columns.values())]
            buf.write(",".join(repr(float(c)) for c in cells) + "\n")
        return buf.getvalue()

    def to_records(self) -> list[dict]:
        head = self.header
        return [
            dict(zip(head, [float(v), *(float(col[i]) for col in self.columns.values())]))
            for i, v in enumerate(self.values)
        ]

    def sidecar_json(self) -> str:
        return json.dumps(self.provenance, indent=2, sort_keys=True) + "\n"


def _model_at(spec: SweepSpec, value: float) -> tuple[HarvesterModel, float, float]:
    model, p, rho = spec.base_model, spec.pressure, spec.point_radius
    if spec.parameter == "plate_radius":
        model = model.with_radius(value)
    elif spec.parameter == "piezo_thickness":
        model = model.with_piezo_thickness(value)
    elif spec.parameter == "electrode_coverage":
        model = model.with_coverage(value)
    elif spec.parameter == "pressure":
        p = value
    elif spec.parameter == "point_radius":
        rho = value
    if spec.zeta_table is not None:
        xs, zs = zip(*spec.zeta_table)
        model = model.with_damping(float(np.interp(value, xs, zs)))
    return model, p, rho


def _evaluate_point(spec: SweepSpec, index: int, value: float) -> list[float]:
    try:
        model, p, rho = _model_at(spec, float(value))
        row = []
        for out in spec.outputs:
            if out == "f_n":
                row.append(natural_frequency(model.section, model.plate_radius))
            elif out == "V_oc":
                row.append(voltage_at_pressure(model, p, spec.frequency))
            elif out == "w0":
                row.append(deflection_at_pressure(model, p, spec.frequency))
            elif out == "zeta":
                row.append(model.damping_ratio)
            elif out == "Q":
                row.append(damping_q(model.damping_ratio))
            elif out == "displacement":
                row.append(displacement_at(model, p, rho))
        return row
    except PiezoHarvError as exc:
        raise SweepPointError(index, float(value), exc) from exc


def run_sweep(spec: SweepSpec, workers: int = 1, config_hash: str | None = None) -> SweepResult:
    """Evaluate the requested outputs at every grid point, in grid order.

    Grid points are independent, so ``workers > 1`` spreads them over a thread
    pool; rows come back in grid order and are identical to a serial run.
    """
    grid = spec.grid()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda iv: _evaluate_point(spec, *iv), enumerate(grid)))
    else:
        rows = [_evaluate_point(spec, i, v) for i, v in enumerate(grid)]
    table = np.array(rows, dtype=float).reshape(len(grid), len(spec.outputs))
    columns = {OUTPUTS[o]: table[:, j] for j, o in enumerate(spec.outputs)}
    provenance = {
        "tool": "piezoharv",
        "tool_version": __version__,
        "material_set_hash": model_materials_hash(spec.base_model),
        "config_hash": config_hash or canonical_hash(spec.to_dict()),
        "sweep": spec.to_dict(),
    }
    return SweepResult(spec.parameter, grid, columns, provenance)


def golden_section_max(fn, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Maximiser of a unimodal ``fn`` on ``[lo, hi]``."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def optimize_coverage(model: HarvesterModel, tol: float = 1e-12) -> tuple[float, float]:
    """Electrode coverage maximising |eta|, and the |eta| reached there."""

    def magnitude(gamma: float) -> float:
        return abs(electrical_coupling(model.with_coverage(gamma))[1])

    # coverage must stay > 0; the optimum is far from the lower bound
    gamma = golden_section_max(magnitude, 1e-9, 1.0, tol)
    return gamma, magnitude(gamma)

