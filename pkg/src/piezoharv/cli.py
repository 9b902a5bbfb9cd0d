"""Command-line workbench.

Every command prints its result to stdout and, with ``--out DIR``, also writes
it to ``DIR/<command>.<ext>``; CSV outputs get a ``<command>.provenance.json``
sidecar. Failures print one JSON object to stderr and exit with 1 (usage),
2 (config or input) or 3 (numerics).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .config import ModelConfig, load_config
from .errors import (
    ConfigError,
    InvalidInputError,
    NumericError,
    PhysicsWarning,
    PiezoHarvError,
    TraceError,
)
from .lem import analyze, frequency_response
from .materials import builtin_materials, material_set_hash, voltage_estimate_stress
from .plate_oracle import bessel_modes, rayleigh_ritz_modes, static_bending
from .provenance import canonical_hash
from .sweep import OUTPUTS, PARAMETERS, SweepPointError, SweepSpec, run_sweep
from .trace import compare, read_trace, trace_stats

EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=d(None), help="model config JSON (default: bundled device)")
    parser.add_argument("--out", default=d(None), help="directory to write outputs into")
    parser.add_argument("--format", choices=("csv", "json"), default=d(None))
    parser.add_argument("--seed", type=int, default=d(None), help="reserved; all computation is deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="piezoharv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"piezoharv {__version__}")
    _add_globals(parser, suppress=False)
    common = _Parser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("materials", parents=[common], help="list the material database")
    p.add_argument("--thickness", type=float, default=18e-6, help="film thickness for the g33 ranking (m)")
    p.add_argument("--stress", type=float, default=1e6, help="stress for the g33 ranking (Pa)")

    sub.add_parser("analyze", parents=[common], help="derived lumped-element parameters")

    p = sub.add_parser("modal", parents=[common], help="clamped-plate modes")
    p.add_argument("--nmodes", type=int, default=None)
    p.add_argument("--method", choices=("bessel", "ritz"), default="bessel")
    p.add_argument("--basis", type=int, default=None, help="Rayleigh-Ritz basis size")

    p = sub.add_parser("freqresp", parents=[common], help="harmonic response per unit pressure")
    p.add_argument("--fmin", type=float, default=None)
    p.add_argument("--fmax", type=float, default=None)
    p.add_argument("--npoints", type=int, default=None)
    p.add_argument("--log", action="store_true", default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("stress", parents=[common], help="static uniform-pressure stress field")
    p.add_argument("--pressure", type=float, default=None)
    p.add_argument("--samples", type=int, default=51)

    p = sub.add_parser("sweep", parents=[common], help="one-parameter sweep")
    p.add_argument("--param", required=True, choices=PARAMETERS)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--outputs", default="f_n", help=f"comma list from {','.join(OUTPUTS)}")
    p.add_argument("--pressure", type=float, default=None)
    p.add_argument("--frequency", type=float, default=None, help="excitation frequency (Hz); default static")
    p.add_argument("--point-radius", type=float, default=0.0)
    p.add_argument("--log", action="store_true")
    p.add_argument("--zeta-table", default=None,
                   help="CSV of (parameter value, damping ratio) rows, linearly interpolated")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("trace-stats", parents=[common], help="waveform statistics of a trace CSV")
    p.add_argument("trace")

    p = sub.add_parser("compare", parents=[common], help="model voltage against a measured trace")
    p.add_argument("trace")
    p.add_argument("--pressure", type=float, default=None)
    p.add_argument("--pressure-tol", type=float, default=0.0)
    p.add_argument("--excitation-hz", type=float, default=None)
    return parser


# --- output helpers ------------------------------------------------------------

def _provenance(cfg: ModelConfig | None, command: str, inputs: dict, materials=None) -> dict:
    prov = {"tool": "piezoharv", "tool_version": __version__, "command": command, "inputs": inputs}
    if cfg is not None:
        prov["config_hash"] = cfg.config_hash
        prov["material_set_hash"] = material_set_hash(cfg.used_materials)
    elif materials is not None:
        prov["material_set_hash"] = material_set_hash(materials)
    return prov


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _table_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(c) for c in row) + "\n")
    return buf.getvalue()


def _cell(c) -> str:
    if isinstance(c, (str, int)) and not isinstance(c, bool):
        return str(c)
    return repr(float(c))


def _emit(args, name: str, header, rows, prov: dict, default_format: str = "csv") -> None:
    fmt = args.format or default_format
    if fmt == "csv":
        text = _table_csv(header, rows)
    else:
        records = [
            {h: (c if isinstance(c, (str, int)) else float(c)) for h, c in zip(header, row)}
            for row in rows
        ]
        text = _dump_json({"provenance": prov, "rows": records})
    _write(args, name, fmt, text, prov)


def _emit_document(args, name: str, doc: dict, prov: dict) -> None:
    fmt = args.format or "json"
    if fmt == "json":
        text = _dump_json({**doc, "provenance": prov})
    else:
        flat = [(k, v) for k, v in doc.items() if isinstance(v, (int, float)) and not isinstance(v, bool)]
        text = _table_csv(["key", "value"], flat)
    _write(args, name, fmt, text, prov)


def _write(args, name: str, fmt: str, text: str, prov: dict) -> None:
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.{fmt}").write_text(text, encoding="utf-8")
        if fmt == "csv":
            (out / f"{name}.provenance.json").write_text(_dump_json(prov), encoding="utf-8")


def _file_hash(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --- commands --------------------------------------------------------------------

def cmd_materials(args) -> None:
    mats = builtin_materials()
    header = ["name", "youngs_modulus", "poisson_ratio", "density",
              "rel_permittivity", "e31f", "g33", "v_estimate"]
    rows = []
    for m in mats:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PhysicsWarning)
            v = voltage_estimate_stress(m, args.thickness, args.stress)
        rows.append([m.name, m.youngs_modulus, m.poisson_ratio, m.density,
                     m.rel_permittivity, m.e31f, m.g33, v])
    prov = _provenance(None, "materials", {"thickness_m": args.thickness, "stress_pa": args.stress},
                       materials=mats)
    _emit(args, "materials", header, rows, prov)


def cmd_analyze(args, cfg: ModelConfig) -> None:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicsWarning)
        params = analyze(cfg.model)
    for msg in params.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    doc = params.to_dict()
    doc["materials"] = [m.to_dict() for m in cfg.used_materials]
    _emit_document(args, "analyze", doc, _provenance(cfg, "analyze", {}))


def cmd_modal(args, cfg: ModelConfig) -> None:
    n = args.nmodes or cfg.analysis["n_modes"]
    sec, r = cfg.model.section, cfg.model.plate_radius
    if args.method == "ritz":
        modes = rayleigh_ritz_modes(sec, r, n, basis_size=args.basis)
    else:
        modes = bessel_modes(sec, r, n)
    rows = [[m.mode_index[0], m.mode_index[1], m.eigenvalue, m.frequency] for m in modes]
    prov = _provenance(cfg, "modal", {"nmodes": n, "method": args.method, "basis": args.basis})
    _emit(args, "modal", ["n", "m", "lambda_sq", "f_hz"], rows, prov)


def cmd_freqresp(args, cfg: ModelConfig) -> None:
    a = dict(cfg.analysis)
    for key, val in (("f_min_hz", args.fmin), ("f_max_hz", args.fmax),
                     ("n_freq", args.npoints), ("log_grid", args.log)):
        if val is not None:
            a[key] = val
    if a["f_max_hz"] <= a["f_min_hz"] or a["n_freq"] < 1:
        raise InvalidInputError("need fmax > fmin and npoints >= 1")
    if a["log_grid"]:
        grid = np.geomspace(max(a["f_min_hz"], 1e-3), a["f_max_hz"], a["n_freq"])
    else:
        grid = np.linspace(a["f_min_hz"], a["f_max_hz"], a["n_freq"])
    resp = frequency_response(cfg.model, grid, workers=args.workers)
    inputs = {k: a[k] for k in ("f_min_hz", "f_max_hz", "n_freq", "log_grid")}
    _emit(args, "freqresp", ["f_hz", "amp_m_per_pa", "phase_rad", "voc_v_per_pa"],
          resp.rows(), _provenance(cfg, "freqresp", inputs))


def cmd_stress(args, cfg: ModelConfig) -> None:
    p = cfg.analysis["pressure_pa"] if args.pressure is None else args.pressure
    _, field = static_bending(cfg.model.section, cfg.model.plate_radius, p, samples=args.samples)
    rows = zip(field.radii, field.radial_moment, field.tangential_moment, field.von_mises_top_surface)
    prov = _provenance(cfg, "stress", {"pressure_pa": p, "samples": args.samples})
    _emit(args, "stress", ["rho_m", "mr", "mt", "von_mises_pa"], rows, prov)


def _read_zeta_table(path: str) -> tuple[tuple[float, float], ...]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                x, z = (float(c) for c in row)
            except ValueError as exc:
                if i == 0:  # header
                    continue
                raise InvalidInputError(f"zeta table row {i + 1}: {exc}") from exc
            rows.append((x, z))
    return tuple(rows)


def cmd_sweep(args, cfg: ModelConfig) -> None:
    zeta_table = _read_zeta_table(args.zeta_table) if args.zeta_table else None
    outputs = tuple(o.strip() for o in args.outputs.split(",") if o.strip())
    spec = SweepSpec(
        base_model=cfg.model,
        parameter=args.param,
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        outputs=outputs,
        pressure=cfg.analysis["pressure_pa"] if args.pressure is None else args.pressure,
        frequency=args.frequency,
        point_radius=args.point_radius,
        log_spacing=args.log,
        zeta_table=zeta_table,
    )
    config_hash = canonical_hash({"config": cfg.config_hash, "sweep": spec.to_dict()})
    result = run_sweep(spec, workers=args.workers, config_hash=config_hash)
    prov = {**_provenance(cfg, "sweep", spec.to_dict()), "sweep_hash": result.provenance["config_hash"]}
    cols = list(result.columns.values())
    rows = ([v, *(c[i] for c in cols)] for i, v in enumerate(result.values))
    _emit(args, "sweep", result.header, rows, prov)


def cmd_trace_stats(args) -> None:
    stats = trace_stats(read_trace(args.trace))
    prov = _provenance(None, "trace-stats", {"trace_sha256": _file_hash(args.trace)})
    _emit_document(args, "trace-stats", stats.to_dict(), prov)


def cmd_compare(args, cfg: ModelConfig) -> None:
    trace = read_trace(args.trace)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicsWarning)
        report = compare(cfg.model, trace, args.pressure, args.pressure_tol, args.excitation_hz)
    prov = _provenance(cfg, "compare", {
        "trace_sha256": _file_hash(args.trace),
        "pressure_pa": args.pressure,
        "pressure_tol_pa": args.pressure_tol,
        "excitation_hz": args.excitation_hz,
    })
    _emit_document(args, "compare", report, prov)


_NEEDS_CONFIG = {
    "analyze": cmd_analyze,
    "modal": cmd_modal,
    "freqresp": cmd_freqresp,
    "stress": cmd_stress,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}
_NO_CONFIG = {"materials": cmd_materials, "trace-stats": cmd_trace_stats}


def _fail(code: int, exc: BaseException) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, ConfigError) and exc.path:
        err["path"] = exc.path
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        if args.command in _NO_CONFIG:
            _NO_CONFIG[args.command](args)
        else:
            cfg = load_config(args.config)
            _NEEDS_CONFIG[args.command](args, cfg)
    except SweepPointError as exc:
        numeric = isinstance(exc.__cause__, ArithmeticError)
        return _fail(EXIT_NUMERIC if numeric else EXIT_CONFIG, exc)
    except (ConfigError, InvalidInputError, TraceError, OSError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except (NumericError, ArithmeticError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    except PiezoHarvError as exc:
        return _fail(EXIT_CONFIG, exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
