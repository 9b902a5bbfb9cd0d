"""Measured voltage traces: CSV ingestion, waveform statistics, model comparison.

Trace files are CSV with header ``t_s,v_volts`` or ``t_s,v_volts,p_pa``.
Leading ``# key: value`` lines carry free-form metadata (rig notes, nominal
pressure as ``pressure_pa``).
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .errors import MissingPressureError, ResampleRequiredError, TraceError
from .lem import HarvesterModel, voltage_at_pressure

UNIFORM_RTOL = 1e-6
MIN_SAMPLES = 16

RELATIVE_ERROR_CONVENTION = "|model - measured| / measured"


@dataclass(frozen=True)
class MeasurementTrace:
    time: np.ndarray  # s
    voltage: np.ndarray  # V
    pressure: np.ndarray | None = None  # Pa
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.time, dtype=float)
        v = np.asarray(self.voltage, dtype=float)
        object.__setattr__(self, "time", t)
        object.__setattr__(self, "voltage", v)
        if t.ndim != 1 or t.shape != v.shape:
            raise TraceError("time and voltage must be 1-D arrays of equal length")
        if self.pressure is not None:
            p = np.asarray(self.pressure, dtype=float)
            if p.shape != t.shape:
                raise TraceError("pressure column length differs from time")
            object.__setattr__(self, "pressure", p)
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise TraceError("time must be strictly increasing")

    def __len__(self) -> int:
        return self.time.size

    @property
    def sample_interval(self) -> float:
        """Mean sample spacing; raises if the spacing is not uniform."""
        dt = np.diff(self.time)
        mean = float(np.mean(dt))
        if np.max(np.abs(dt - mean)) > UNIFORM_RTOL * mean:
            raise ResampleRequiredError(
                "trace sampling is not uniform within 1e-6; resample before analysis"
            )
        return mean


def read_trace(path: str | os.PathLike) -> MeasurementTrace:
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_trace(text)


def parse_trace(text: str) -> MeasurementTrace:
    metadata = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                metadata[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if not body:
        raise TraceError("trace file has no header")
    rows = list(csv.reader(body))
    header = [h.strip() for h in rows[0]]
    if header not in (["t_s", "v_volts"], ["t_s", "v_volts", "p_pa"]):
        raise TraceError(f"unexpected trace header {header}; want t_s,v_volts[,p_pa]")
    try:
        data = np.array([[float(c) for c in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise TraceError(f"non-numeric trace cell: {exc}") from exc
    if data.size == 0:
        raise TraceError("trace has no samples")
    if data.shape[1] != len(header):
        raise TraceError("ragged trace rows")
    pressure = data[:, 2] if len(header) == 3 else None
    return MeasurementTrace(data[:, 0], data[:, 1], pressure, metadata)


def format_trace(trace: MeasurementTrace) -> str:
    buf = io.StringIO()
    for key in sorted(trace.metadata):
        buf.write(f"# {key}: {trace.metadata[key]}\n")
    cols = [trace.time, trace.voltage]
    header = ["t_s", "v_volts"]
    if trace.pressure is not None:
        cols.append(trace.pressure)
        header.append("p_pa")
    buf.write(",".join(header) + "\n")
    for row in zip(*cols):
        buf.write(",".join(repr(float(c)) for c in row) + "\n")
    return buf.getvalue()


def write_trace(trace: MeasurementTrace, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_trace(trace))


@dataclass(frozen=True)
class TraceStats:
    n_samples: int
    sample_rate_hz: float
    v_max: float
    v_min: float
    v_pp: float
    v_rms: float
    dominant_frequency_hz: float | None
    positive_peak_v: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def dominant_frequency(v: np.ndarray, fs: float) -> float | None:
    """DFT peak of the mean-removed, Hann-windowed signal, refined by a parabola
    through the log magnitudes of the peak bin and its neighbours.

    Returns ``None`` for a constant signal.
    """
    x = v - np.mean(v)
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.max(np.abs(x)) <= 1e-12 * scale:
        return None
    n = x.size
    spec = np.abs(np.fft.rfft(x * np.hanning(n)))
    spec[0] = 0.0
    k = int(np.argmax(spec))
    delta = 0.0
    if 0 < k < spec.size - 1 and spec[k - 1] > 0 and spec[k + 1] > 0:
        a, b, c = np.log(spec[k - 1]), np.log(spec[k]), np.log(spec[k + 1])
        denom = a - 2.0 * b + c
        if denom != 0.0:
            delta = 0.5 * (a - c) / denom
    return (k + delta) * fs / n


def trace_stats(trace: MeasurementTrace) -> TraceStats:
    if len(trace) < MIN_SAMPLES:
        raise TraceError(f"trace needs at least {MIN_SAMPLES} samples, got {len(trace)}")
    dt = trace.sample_interval
    fs = 1.0 / dt
    v = trace.voltage
    v_max = float(np.max(v))
    v_min = float(np.min(v))
    f_dom = dominant_frequency(v, fs)
    positive_peak = None
    if f_dom is not None and f_dom > 0:
        distance = max(1, int(0.5 * fs / f_dom))
        idx, props = find_peaks(v, height=0.0, distance=distance)
        if idx.size:
            positive_peak = float(np.mean(props["peak_heights"]))
    return TraceStats(
        n_samples=len(trace),
        sample_rate_hz=fs,
        v_max=v_max,
        v_min=v_min,
        v_pp=v_max - v_min,
        v_rms=float(np.sqrt(np.mean(v**2))),
        dominant_frequency_hz=f_dom,
        positive_peak_v=positive_peak,
    )


def relative_error(model_value: float, measured: float) -> float:
    return abs(model_value - measured) / abs(measured)


def trace_pressure(trace: MeasurementTrace) -> float | None:
    """Nominal excitation pressure: ``pressure_pa`` metadata, else peak |p| of the p_pa column."""
    if "pressure_pa" in trace.metadata:
        try:
            return float(trace.metadata["pressure_pa"])
        except ValueError as exc:
            raise TraceError("pressure_pa metadata is not a number") from exc
    if trace.pressure is not None:
        return float(np.max(np.abs(trace.pressure)))
    return None


def compare(
    model: HarvesterModel,
    trace: MeasurementTrace,
    pressure: float | None = None,
    pressure_tol: float = 0.0,
    excitation_hz: float | None = None,
) -> dict:
    """Model open-circuit voltage against a measured trace.

    The model value is ``|V_oc|`` at ``pressure`` (static unless
    ``excitation_hz`` is given); its band spans ``pressure +/- pressure_tol``.
    Relative errors are ``|model - measured| / measured``.

    Raises:
        MissingPressureError: if no pressure is given and the trace has none.
    """
    if pressure is None:
        pressure = trace_pressure(trace)
        if pressure is None:
            raise MissingPressureError(
                "no excitation pressure: pass one explicitly or include p_pa / pressure_pa"
            )
    if pressure_tol < 0 or pressure_tol > pressure:
        raise TraceError("pressure tolerance must lie in [0, pressure]")
    stats = trace_stats(trace)
    v_model = abs(voltage_at_pressure(model, pressure, excitation_hz))
    v_lo = abs(voltage_at_pressure(model, pressure - pressure_tol, excitation_hz))
    v_hi = abs(voltage_at_pressure(model, pressure + pressure_tol, excitation_hz))
    report = {
        "error_convention": RELATIVE_ERROR_CONVENTION,
        "pressure_pa": pressure,
        "pressure_tol_pa": pressure_tol,
        "excitation_hz": excitation_hz,
        "model_voc_v": v_model,
        "model_band_v": [v_lo, v_hi],
        "measured_v_max": stats.v_max,
        "measured_positive_peak_v": stats.positive_peak_v,
        "rel_error_v_max": None if stats.v_max == 0.0 else relative_error(v_model, stats.v_max),
        "rel_error_positive_peak": (
            None if not stats.positive_peak_v
            else relative_error(v_model, stats.positive_peak_v)
        ),
        "trace": stats.to_dict(),
    }
    return report
