"""JSON schemas for measure documents, experiment configs and reports."""
from __future__ import annotations

import hashlib
import json
import math

import jsonschema

NUMBER = {"type": "number"}

ATOM_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {"properties": {"kind": {"const": "point"}, "c": NUMBER, "w": NUMBER},
         "required": ["c"], "additionalProperties": False},
        {"properties": {"kind": {"const": "exp"}, "a": NUMBER},
         "required": ["a"], "additionalProperties": False},
        {"properties": {"kind": {"const": "power"}, "p": NUMBER},
         "required": ["p"], "additionalProperties": False},
        {"properties": {"kind": {"const": "shifted_power"}, "alpha": NUMBER,
                        "sign": {"enum": [1, -1]}},
         "required": ["alpha"], "additionalProperties": False},
        {"properties": {"kind": {"const": "cosh_exp"}, "a": NUMBER, "omega": NUMBER},
         "required": ["a", "omega"], "additionalProperties": False},
        {"properties": {"kind": {"const": "log"}}, "additionalProperties": False},
        {"properties": {"kind": {"const": "exp_power"}, "a": NUMBER, "p": NUMBER},
         "required": ["a", "p"], "additionalProperties": False},
        {"properties": {"kind": {"const": "osc"}, "p": NUMBER,
                        "trig": {"enum": ["sin", "cos"]}},
         "required": ["p"], "additionalProperties": False},
        {"properties": {"kind": {"const": "tabulated"},
                        "samples": {"type": "array", "minItems": 2,
                                    "items": {"type": "array", "items": NUMBER,
                                              "minItems": 2, "maxItems": 2}},
                        "tail": {"type": ["object", "null"],
                                 "properties": {"A": NUMBER, "lambda": NUMBER},
                                 "required": ["A", "lambda"], "additionalProperties": False}},
         "required": ["samples"], "additionalProperties": False},
        {"properties": {"kind": {"const": "part"},
                        "part": {"enum": ["plus", "minus", "abs"]},
                        "terms": {"type": "array"}},
         "required": ["part", "terms"], "additionalProperties": False},
    ],
}

MEASURE_SCHEMA = {
    "type": "object",
    "required": ["terms"],
    "additionalProperties": False,
    "properties": {
        "terms": {"type": "array", "items": {
            "type": "object", "required": ["atom"], "additionalProperties": False,
            "properties": {"coef": NUMBER, "atom": ATOM_SCHEMA}}},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "measure": {"oneOf": [{"type": "string"}, MEASURE_SCHEMA]},
        "measure2": {"oneOf": [{"type": "string"}, MEASURE_SCHEMA]},
        "n": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "out": {"type": "string"},
        "format": {"enum": ["json", "csv", "bin"]},
        "eps": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0,
                                           "exclusiveMaximum": 1}, "minItems": 1},
        "grid": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
        "b": {"type": "number", "minimum": 0},
        "c_target": {"type": "number", "exclusiveMinimum": 0},
        "series": {"type": "array", "items": {
            "type": "object", "required": ["kind"], "additionalProperties": False,
            "properties": {"kind": {"enum": ["trace-cond", "hs", "col-p", "diag-p", "entry-p"]},
                           "p": {"type": "number", "exclusiveMinimum": 0},
                           "length": {"type": "integer", "minimum": 1}}}},
        "length": {"type": "integer", "minimum": 1},
        "gamma1": NUMBER,
        "gamma2": NUMBER,
        "schur": {"type": "boolean"},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["tool", "version", "config_hash", "command", "result"],
    "additionalProperties": False,
    "properties": {
        "tool": {"const": "helson"},
        "version": {"type": "string"},
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "command": {"enum": ["build", "spectrum", "bounds", "classify", "schatten",
                             "diff", "predict", "report"]},
        "config": {"type": "object"},
        "result": {"type": "object"},
    },
}


def validate_measure_doc(doc):
    jsonschema.validate(doc, MEASURE_SCHEMA)


def validate_config(doc):
    jsonschema.validate(doc, CONFIG_SCHEMA)


def validate_report(doc):
    jsonschema.validate(doc, REPORT_SCHEMA)


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def jsonable(obj):
    """Make numpy scalars, tuples and non-finite floats JSON friendly."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        try:
            obj = obj.item()
        except (ValueError, AttributeError):
            return jsonable(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj
