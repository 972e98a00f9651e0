"""Command-line front end.

    chiral-router {point,sweep,contrast,find-peaks,validate} --config FILE
                  [--out FILE] [--workers N] [--seed S]

Configs are JSON; every energy is in units of gamma1, which is fixed to 1.
``theta`` is in radians. Data goes to stdout (or ``--out``), diagnostics to
stderr. Exit codes: 0 success, 1 failed validation or computation, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import jsonschema

from . import closed_form
from .analysis import OBJECTIVES, find_peaks
from .errors import (ConfigError, ConflictError, EmptyBox, InvalidParameters, InvalidSpec,
                     SchemaError, ScatteringError)
from .model import Port, SystemParams
from .scattering import VARIABLES, OperatingPoint, amplitudes, contrast_at
from .sweep import OBSERVABLES, Axis, SweepSpec, default_workers, run_sweep
from .validation import run_validation

COMMANDS = ("point", "sweep", "contrast", "find-peaks", "validate")

_AXIS = {
    "type": "object",
    "properties": {
        "var": {"enum": list(VARIABLES)},
        "min": {"type": "number"},
        "max": {"type": "number"},
        "n": {"type": "integer", "minimum": 2},
    },
    "required": ["var", "min", "max", "n"],
    "additionalProperties": False,
}

_BOX_AXIS = {
    "type": "object",
    "properties": {
        "var": {"enum": list(VARIABLES)},
        "min": {"type": "number"},
        "max": {"type": "number"},
    },
    "required": ["var", "min", "max"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "omega_e": {"type": "number"},
        "xi": {"type": "number", "minimum": 0},
        "G": {"type": "number", "minimum": 0},
        "epsilon": {"type": "number"},
        "delta": {"type": "number"},
        "theta": {"type": "number"},
        "tau": {"type": "number", "minimum": 0},
        "port": {"enum": [1, 2, "Port1", "Port2", "port1", "port2"]},
        "sweep": {
            "type": "object",
            "properties": {
                "x": _AXIS,
                "y": _AXIS,
                "observables": {"type": "array", "minItems": 1,
                                "items": {"enum": list(OBSERVABLES)}},
            },
            "required": ["x", "y", "observables"],
            "additionalProperties": False,
        },
        "peaks": {
            "type": "object",
            "properties": {
                "objective": {"enum": list(OBJECTIVES)},
                "axes": {"type": "array", "items": _BOX_AXIS, "minItems": 2, "maxItems": 2},
                "grid_n": {"type": "integer", "minimum": 8},
                "refine_tol": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["objective", "axes"],
            "additionalProperties": False,
        },
        "validate": {
            "type": "object",
            "properties": {
                "samples": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

DEFAULTS = {"theta": 0.0, "tau": 0.0, "port": 1}
PEAK_DEFAULTS = {"grid_n": 41, "refine_tol": 1e-6}
VALIDATE_DEFAULTS = {"samples": 10000, "seed": 42}


@dataclass
class RunConfig:
    omega_e: Optional[float] = None
    xi: Optional[float] = None
    G: Optional[float] = None
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    theta: float = 0.0
    tau: float = 0.0
    port: Port = Port.PORT1
    sweep: Optional[dict] = None
    peaks: Optional[dict] = None
    validate: dict = field(default_factory=lambda: dict(VALIDATE_DEFAULTS))
    defaults_applied: list = field(default_factory=list)

    def echo(self) -> dict:
        out = {}
        for key in ("omega_e", "xi", "G", "epsilon", "delta", "theta", "tau"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out["port"] = self.port.value
        out["gamma1"] = 1.0
        out["defaults_applied"] = list(self.defaults_applied)
        return out

    @property
    def incident_energy(self) -> float:
        return self.operating_point().incident_energy

    def operating_point(self, free=()) -> OperatingPoint:
        """Base point; variables listed in ``free`` may be absent (an axis sets them)."""
        missing = [k for k in ("omega_e", "xi", "G")
                   if getattr(self, k) is None and k not in free]
        if missing:
            raise SchemaError("required for this command", ",".join(missing))
        xi = self.xi if self.xi is not None else 0.0
        G = self.G if self.G is not None else 0.0
        params = SystemParams.from_chirality(self.omega_e, xi, G, self.theta, self.tau)
        if self.epsilon is not None:
            return OperatingPoint(params, epsilon=self.epsilon)
        if self.delta is not None:
            return OperatingPoint(params, delta=self.delta)
        if {"delta", "epsilon"} & set(free):
            return OperatingPoint(params, delta=0.0)
        raise SchemaError("either epsilon or delta is required", "epsilon")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config; defaults are recorded for echoing."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "epsilon" in doc and "delta" in doc:
        raise ConflictError("give either epsilon or delta, not both")
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, ".".join(str(p) for p in err.absolute_path))

    cfg = RunConfig()
    for key in ("omega_e", "xi", "G", "epsilon", "delta"):
        if key in doc:
            setattr(cfg, key, float(doc[key]))
    for key, default in DEFAULTS.items():
        if key not in doc:
            cfg.defaults_applied.append(key)
    cfg.theta = float(doc.get("theta", DEFAULTS["theta"]))
    cfg.tau = float(doc.get("tau", DEFAULTS["tau"]))
    cfg.port = Port.parse(doc.get("port", DEFAULTS["port"]))
    cfg.sweep = doc.get("sweep")
    if "peaks" in doc:
        cfg.peaks = {**PEAK_DEFAULTS, **doc["peaks"]}
    cfg.validate = {**VALIDATE_DEFAULTS, **doc.get("validate", {})}
    for key in ("omega_e", "xi", "G", "epsilon", "delta", "theta", "tau"):
        value = getattr(cfg, key)
        if value is not None and not math.isfinite(value):
            raise SchemaError("must be finite", key)
    return cfg


def _complex(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _coefficients(c: closed_form.PortCoefficients) -> dict:
    return {**c.as_dict(), "port_map": dict(c.out_port_map)}


def _point(cfg: RunConfig, args) -> tuple:
    point = cfg.operating_point()
    ctx = point.context(cfg.port)
    amps, used_oracle = amplitudes(ctx)
    coeffs = closed_form.coefficients(amps, cfg.port)
    doc = {
        "command": "point",
        "config": cfg.echo(),
        "regime": ctx.regime,
        "epsilon": ctx.epsilon,
        "Delta": ctx.delta_cap,
        "delta": ctx.delta_small,
        "phi": ctx.phi,
        "solver": "oracle" if used_oracle else "closed_form",
        "amplitudes": {k: _complex(v) for k, v in zip(("t_a", "r_a", "t_b", "r_b"), amps.outer)},
        "coefficients": coeffs.as_dict(),
        "port_map": coeffs.out_port_map,
        "output_ports": {str(k): v for k, v in sorted(coeffs.by_output_port().items())},
    }
    return _json(doc), 0


def _contrast(cfg: RunConfig, args) -> tuple:
    ratios = contrast_at(cfg.operating_point())
    doc = {
        "command": "contrast",
        "config": cfg.echo(),
        "i_a": ratios.i_a,
        "i_b": ratios.i_b,
        "undefined_a": ratios.undefined_a,
        "undefined_b": ratios.undefined_b,
        "port1": _coefficients(ratios.port1),
        "port2": _coefficients(ratios.port2),
    }
    return _json(doc), 0


def _sweep(cfg: RunConfig, args) -> tuple:
    if cfg.sweep is None:
        raise SchemaError("sweep block required", "sweep")
    block = cfg.sweep
    x = Axis(block["x"]["var"], float(block["x"]["min"]), float(block["x"]["max"]), block["x"]["n"])
    y = Axis(block["y"]["var"], float(block["y"]["min"]), float(block["y"]["max"]), block["y"]["n"])
    spec = SweepSpec(cfg.operating_point(free=(x.name, y.name)), x, y,
                     tuple(block["observables"]), cfg.port)
    try:
        spec.validate()
    except ScatteringError as exc:
        raise SchemaError(str(exc), "sweep") from None
    result = run_sweep(spec, workers=args.workers)
    for line in result.diagnostics:
        print(f"singular cell: {line}", file=sys.stderr)
    return result.to_csv(), 0


def _find_peaks(cfg: RunConfig, args) -> tuple:
    if cfg.peaks is None:
        raise SchemaError("peaks block required", "peaks")
    block = cfg.peaks
    axes = [(a["var"], float(a["min"]), float(a["max"])) for a in block["axes"]]
    base = cfg.operating_point(free=[a[0] for a in axes])
    try:
        peaks = find_peaks(block["objective"], base, axes, grid_n=block["grid_n"],
                           refine_tol=float(block["refine_tol"]), workers=args.workers)
    except (EmptyBox, InvalidSpec, InvalidParameters) as exc:
        raise SchemaError(str(exc), "peaks") from None
    doc = {
        "command": "find-peaks",
        "config": {**cfg.echo(), "peaks": block},
        "peaks": [
            {"location": {name: v for (name, _, _), v in zip(axes, p.location)},
             "value": p.value, "converged": p.converged, "evaluations": p.evaluations}
            for p in peaks
        ],
    }
    return _json(doc), 0


def _validate(cfg: RunConfig, args) -> tuple:
    seed = args.seed if args.seed is not None else cfg.validate["seed"]
    report = run_validation(cfg.validate["samples"], seed)
    timings = ", ".join(f"{k}={v:.2f}s" for k, v in report.elapsed.items())
    print(f"validate: {timings}", file=sys.stderr)
    if not report.passed:
        failed = [k for k, ok in report.checks().items() if not ok]
        print(f"validate: bounds exceeded: {', '.join(failed)}", file=sys.stderr)
    return _json(report.to_dict()), 0 if report.passed else 1


HANDLERS = {
    "point": _point,
    "sweep": _sweep,
    "contrast": _contrast,
    "find-peaks": _find_peaks,
    "validate": _validate,
}


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def dispatch(command: str, config: RunConfig, args=None) -> tuple:
    """Run ``command``; returns ``(output_text, exit_code)``."""
    if args is None:
        args = argparse.Namespace(workers=None, seed=None)
    return HANDLERS[command](config, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiral-router",
        description="Single-photon routing through a chirally coupled atom dimer.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", help="write data here instead of stdout")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel workers for sweep/find-peaks (default: CPU count)")
    parser.add_argument("--seed", type=int, default=None, help="override validate seed")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.workers is None:
        args.workers = default_workers()
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        config = parse_config(text)
        output, code = dispatch(args.command, config, args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, InvalidParameters) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ScatteringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
