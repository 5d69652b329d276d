"""Batch command line front end.

Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence.
Errors are also written to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import jsonschema

from . import __version__
from .bounds import (a_eps_sweep, classify, e2_lower_bound, envelope_constants,
                     schur_bound, unboundedness_witness)
from .io import config_hash, jsonable, validate_config, validate_measure_doc, validate_report
from .matrix import build_truncation, save_binary, to_csv
from .measures import MeasureError, MeasureSpec, asymptotic_class, validate
from .quadrature import QuadratureError
from .schatten import (difference_operator, schatten_series, signed_trace_bound,
                       spectrum_predict)
from .spectral import SpectralError, eig_sym, lambda_max

COMMANDS = ("build", "spectrum", "bounds", "classify", "schatten", "diff", "predict", "report")
DEFAULTS = {"n": 512, "tol": 1e-8, "format": None, "eps": [0.5, 0.2, 0.1, 0.05],
            "c_target": 10.0, "gamma1": 1.0, "gamma2": 1.0, "schur": True}
DEFAULT_SERIES = [{"kind": "trace-cond"}, {"kind": "hs"}, {"kind": "col-p", "p": 3.0},
                  {"kind": "diag-p", "p": 1.5}, {"kind": "entry-p", "p": 1.5}]


class ConfigError(ValueError):
    pass


def _parser():
    ap = argparse.ArgumentParser(prog="helson", description="Helson matrix diagnostics")
    ap.add_argument("--version", action="version", version=f"helson {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--measure", help="measure JSON file")
        if name == "diff":
            p.add_argument("--measure2", help="second measure JSON file")
            p.add_argument("--gamma1", type=float)
            p.add_argument("--gamma2", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=["json", "csv", "bin"] if name == "build" else ["json", "csv"])
    return ap


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def _resolve_measure(value, base: Path):
    if isinstance(value, str):
        path = Path(value)
        if not path.is_absolute():
            path = base / path
        doc = _load_json(path)
    else:
        doc = value
    validate_measure_doc(doc)
    spec = MeasureSpec.from_json(doc)
    report = validate(spec)
    if not report.ok:
        raise MeasureError("; ".join(report.reasons))
    return spec, doc


def effective_config(args) -> tuple[dict, Path]:
    config: dict = {}
    base = Path.cwd()
    if args.config:
        config = _load_json(args.config)
        validate_config(config)
        base = Path(args.config).resolve().parent
    for key in ("measure", "measure2", "n", "tol", "out", "format", "gamma1", "gamma2"):
        v = getattr(args, key, None)
        if v is not None:
            config[key] = v
    validate_config(config)
    if "measure" not in config:
        raise ConfigError("no measure given (--measure or config 'measure')")
    if args.command == "diff" and "measure2" not in config:
        raise ConfigError("diff needs a second measure (--measure2)")
    if config.get("format") == "bin" and args.command != "build":
        raise ConfigError("binary output is only available for build")
    return {**DEFAULTS, **config}, base


# ---------------------------------------------------------------------------
# commands

def _spectrum(spec, cfg):
    H = build_truncation(spec, cfg["n"])
    rep = eig_sym(H)
    out = rep.to_json()
    out["N"] = H.N
    out["entry_error_bound"] = H.entry_error_bound
    if spec.is_positive():
        out["lambda_max_power"] = lambda_max(H, cfg["tol"])
    return out


def _bounds(spec, cfg):
    out: dict = {"e2_lower_bound": e2_lower_bound(spec)}
    asym = asymptotic_class(spec)
    out["asymptotic"] = asym.to_json()
    if not spec.is_positive():
        out["note"] = "signed measure: positive-measure bounds skipped"
        return out
    env = envelope_constants(spec, cfg.get("b"), cfg.get("grid") or
                            tuple(2 ** k for k in range(1, 61)))
    out["envelope"] = env.to_json()
    if cfg["schur"]:
        out["schur_bound"] = schur_bound(spec).to_json()
    if asym.kind == "diverges":
        out["witness"] = unboundedness_witness(spec, cfg["c_target"]).to_json()
    else:
        k = len(cfg["eps"])
        Ns = [max(2, cfg["n"] >> (k - 1 - i)) for i in range(k)]
        out["a_eps_sweep"] = a_eps_sweep(spec, cfg["eps"], Ns)
    return out


def _classify(spec, cfg):
    return classify(spec, series_length=cfg.get("length", 4096), with_schur=cfg["schur"],
                    b=cfg.get("b")).to_json()


def _schatten(spec, cfg):
    rows = []
    if not spec.is_positive():
        rows.append(signed_trace_bound(spec, length=cfg.get("length", 4096)).to_json())
        return {"series": rows}
    for item in cfg.get("series") or DEFAULT_SERIES:
        length = item.get("length", cfg.get("length"))
        rows.append(schatten_series(spec, item["kind"], item.get("p"), length).to_json())
    return {"series": rows}


def _diff(spec, cfg, spec2):
    rep = difference_operator(spec, spec2, cfg["gamma1"], cfg["gamma2"], cfg["n"])
    return rep.to_json()


def _predict(spec, cfg):
    return spectrum_predict(spec, N=cfg["n"], tol=cfg["tol"]).to_json()


def run(command, spec, cfg, spec2=None):
    if command == "spectrum":
        return _spectrum(spec, cfg)
    if command == "bounds":
        return _bounds(spec, cfg)
    if command == "classify":
        return _classify(spec, cfg)
    if command == "schatten":
        return _schatten(spec, cfg)
    if command == "diff":
        return _diff(spec, cfg, spec2)
    if command == "predict":
        return _predict(spec, cfg)
    if command == "report":
        out = {"spectrum": _spectrum(spec, cfg), "bounds": _bounds(spec, cfg),
               "classify": _classify(spec, cfg), "schatten": _schatten(spec, cfg)}
        try:
            out["predict"] = _predict(spec, cfg)
        except MeasureError as exc:
            out["predict"] = {"skipped": str(exc)}
        return out
    raise ConfigError(f"unknown command {command}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _write_text(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(command, cfg, doc_cfg, result):
    report = jsonable({"tool": "helson", "version": __version__,
                       "config_hash": config_hash(doc_cfg), "command": command,
                       "config": doc_cfg, "result": result})
    validate_report(report)
    if (cfg["format"] or "json") == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(report):
            w.writerow([k, v])
        _write_text(buf.getvalue(), cfg.get("out"))
    else:
        _write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", cfg.get("out"))


def _fail(code, kind, message, extra=None):
    doc = {"error": kind, "message": message, "exit_code": code}
    if extra:
        doc.update(jsonable(extra))
    sys.stderr.write(json.dumps(doc) + "\n")
    return code


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        return _fail(1, "usage", "invalid command line")
    try:
        cfg, base = effective_config(args)
        spec, mdoc = _resolve_measure(cfg["measure"], base)
        spec2, mdoc2 = (None, None)
        if args.command == "diff":
            spec2, mdoc2 = _resolve_measure(cfg["measure2"], base)
        doc_cfg = {k: v for k, v in cfg.items() if k not in ("out",)}
        doc_cfg["measure"] = mdoc
        if mdoc2 is not None:
            doc_cfg["measure2"] = mdoc2
        if args.command == "build":
            H = build_truncation(spec, cfg["n"])
            fmt = cfg["format"] or "csv"
            if fmt == "bin":
                if not cfg.get("out"):
                    raise ConfigError("binary output needs --out")
                save_binary(H, cfg["out"])
            elif fmt == "csv":
                _write_text(to_csv(H), cfg.get("out"))
            else:
                _emit("build", cfg, doc_cfg, {"N": H.N, "entry_error_bound": H.entry_error_bound,
                                              "entries": H.entries.tolist()})
            return 0
        result = run(args.command, spec, cfg, spec2)
        _emit(args.command, cfg, doc_cfg, result)
        return 0
    except (QuadratureError, SpectralError) as exc:
        return _fail(2, "non-convergence", str(exc),
                     {"estimate": getattr(exc, "estimate", None),
                      "achieved_error": getattr(exc, "error", getattr(exc, "residual", None))})
    except jsonschema.ValidationError as exc:
        return _fail(1, "config", f"schema violation at {list(exc.absolute_path)}: {exc.message}")
    except (ConfigError, MeasureError, ValueError, KeyError, TypeError) as exc:
        return _fail(1, "config", str(exc))


if __name__ == "__main__":
    sys.exit(main())
