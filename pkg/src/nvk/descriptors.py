"""JSON descriptors for representation data and measures.

A data descriptor is a JSON document

    {"schema": "nvk-1", "a": 0.0, "b": [0.0], "measure": {...}}

where the measure object is one of

    {"type": "atomic", "dimension": k, "atoms": [[x1, ..., xk, weight], ...]}
    {"type": "lebesgue", "dimension": k, "density": "expr or null"}
    {"type": "product", "factors": [measure, ...]}
    {"type": "pushforward2d", "base": measure,
     "coefficients": [alpha, beta, gamma, delta]}
    {"type": "pushforward_ladder", "base": measure, "b": [...], "scale": s}
    {"type": "lebesgue_pad", "inner": measure, "axes": [...], "dimension": n}

Density expressions use a deliberately tiny grammar over t1..tn: numbers,
+ - * / ^, parentheses and exp(...).  Anything richer belongs in library
embedding, not in descriptor files.

Complex literals in flags and reports use the form "a+bi" with a mandatory
sign between the parts, e.g. "0+1i" or "-1.5-2e-3i".
"""

from __future__ import annotations

import json
import re
from typing import Callable, Optional

import jsonschema
import numpy as np

from .errors import DomainError
from .measures import (
    Atomic,
    LebesgueDensity,
    LebesguePad,
    Measure,
    Product,
    Pushforward2D,
    PushforwardLadder,
)
from .representation import RepresentationData

__all__ = [
    "SCHEMA_VERSION",
    "DESCRIPTOR_SCHEMA",
    "parse_complex",
    "format_complex",
    "parse_density",
    "measure_to_json",
    "measure_from_json",
    "data_to_json",
    "data_from_json",
    "load_descriptor",
    "dump_descriptor",
]

SCHEMA_VERSION = "nvk-1"

_MEASURE_SCHEMA = {
    "type": "object",
    "oneOf": [
        {
            "properties": {
                "type": {"const": "atomic"},
                "dimension": {"type": "integer", "minimum": 1},
                "atoms": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2},
                },
            },
            "required": ["type", "atoms"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "lebesgue"},
                "dimension": {"type": "integer", "minimum": 1},
                "density": {"type": ["string", "null"]},
            },
            "required": ["type", "dimension"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "product"},
                "factors": {"type": "array", "items": {"$ref": "#/$defs/measure"}, "minItems": 1},
            },
            "required": ["type", "factors"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "pushforward2d"},
                "base": {"$ref": "#/$defs/measure"},
                "coefficients": {
                    "type": "array", "items": {"type": "number"},
                    "minItems": 4, "maxItems": 4,
                },
            },
            "required": ["type", "base", "coefficients"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "pushforward_ladder"},
                "base": {"$ref": "#/$defs/measure"},
                "b": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "scale": {"type": "number"},
            },
            "required": ["type", "base", "b", "scale"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "lebesgue_pad"},
                "inner": {"$ref": "#/$defs/measure"},
                "axes": {"type": "array", "items": {"type": "integer"}},
                "dimension": {"type": "integer", "minimum": 1},
            },
            "required": ["type", "inner", "axes", "dimension"],
            "additionalProperties": False,
        },
    ],
}

DESCRIPTOR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "a": {"type": "number"},
        "b": {"type": "array", "items": {"type": "number"}},
        "measure": {"$ref": "#/$defs/measure"},
    },
    "required": ["schema", "measure"],
    "additionalProperties": False,
    "$defs": {"measure": _MEASURE_SCHEMA},
}

_COMPLEX_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"\s*([+-])\s*"
    r"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' with a mandatory sign between the parts."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise DomainError(f"malformed complex literal {text!r}; expected 'a+bi'")
    re_part = float(m.group(1))
    im_part = float(m.group(3))
    if m.group(2) == "-":
        im_part = -im_part
    return complex(re_part, im_part)


def _format_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_complex(z: complex) -> str:
    im = z.imag
    sign = "-" if im < 0 else "+"
    return f"{_format_real(z.real)}{sign}{_format_real(abs(im))}i"


# --- density expression grammar -------------------------------------------
#
#   expr    := term (('+' | '-') term)*
#   term    := unary (('*' | '/') unary)*
#   unary   := '-' unary | power
#   power   := atom ('^' unary)?           (right associative)
#   atom    := number | variable | 'exp' '(' expr ')' | '(' expr ')'

_TOKEN_RE = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+)|(t\d+)|(exp)|([()+\-*/^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise DomainError(f"density expression: bad token at column {pos + 1}")
        tokens.append((m.lastindex, m.group(m.lastindex), pos))
        pos = m.end()
    return tokens


def parse_density(text: str, dimension: int) -> Callable:
    """Compile a density expression over t1..t<dimension> to a callable."""
    tokens = _tokenize(text)
    idx = [0]

    def peek():
        return tokens[idx[0]] if idx[0] < len(tokens) else (None, None, len(text))

    def advance():
        tok = peek()
        idx[0] += 1
        return tok

    def expect(value: str):
        kind, val, pos = advance()
        if val != value:
            raise DomainError(f"density expression: expected {value!r} at column {pos + 1}")

    def parse_expr():
        node = parse_term()
        while peek()[1] in ("+", "-"):
            op = advance()[1]
            rhs = parse_term()
            lhs = node
            node = (lambda a, b: (lambda *t: a(*t) + b(*t)))(lhs, rhs) if op == "+" \
                else (lambda a, b: (lambda *t: a(*t) - b(*t)))(lhs, rhs)
        return node

    def parse_term():
        node = parse_unary()
        while peek()[1] in ("*", "/"):
            op = advance()[1]
            rhs = parse_unary()
            lhs = node
            node = (lambda a, b: (lambda *t: a(*t) * b(*t)))(lhs, rhs) if op == "*" \
                else (lambda a, b: (lambda *t: a(*t) / b(*t)))(lhs, rhs)
        return node

    def parse_unary():
        if peek()[1] == "-":
            advance()
            inner = parse_unary()
            return lambda *t: -inner(*t)
        return parse_power()

    def parse_power():
        base = parse_atom()
        if peek()[1] == "^":
            advance()
            exponent = parse_unary()
            return lambda *t: base(*t) ** exponent(*t)
        return base

    def parse_atom():
        kind, val, pos = advance()
        if kind == 1:  # number
            const = float(val)
            return lambda *t: const
        if kind == 2:  # variable
            axis = int(val[1:]) - 1
            if not 0 <= axis < dimension:
                raise DomainError(
                    f"density expression: variable {val} out of range at column {pos + 1}")
            return lambda *t: t[axis]
        if kind == 3:  # exp(
            expect("(")
            inner = parse_expr()
            expect(")")
            return lambda *t: np.exp(inner(*t))
        if val == "(":
            inner = parse_expr()
            expect(")")
            return inner
        raise DomainError(f"density expression: unexpected token at column {pos + 1}")

    node = parse_expr()
    if idx[0] != len(tokens):
        _, _, pos = peek()
        raise DomainError(f"density expression: trailing input at column {pos + 1}")
    return node


def measure_to_json(mu: Measure) -> dict:
    if isinstance(mu, Atomic):
        return {
            "type": "atomic",
            "dimension": mu.dimension,
            "atoms": [[*loc, w] for loc, w in mu.atoms],
        }
    if isinstance(mu, LebesgueDensity):
        if mu.density is not None and not hasattr(mu.density, "_nvk_source"):
            raise DomainError("only densities parsed from expressions can be serialized")
        src = getattr(mu.density, "_nvk_source", None)
        return {"type": "lebesgue", "dimension": mu.dim, "density": src}
    if isinstance(mu, Product):
        return {"type": "product", "factors": [measure_to_json(f) for f in mu.factors]}
    if isinstance(mu, Pushforward2D):
        return {
            "type": "pushforward2d",
            "base": measure_to_json(mu.base),
            "coefficients": [mu.alpha, mu.beta, mu.gamma, mu.delta],
        }
    if isinstance(mu, PushforwardLadder):
        return {
            "type": "pushforward_ladder",
            "base": measure_to_json(mu.base),
            "b": list(mu.b),
            "scale": mu.scale,
        }
    if isinstance(mu, LebesguePad):
        return {
            "type": "lebesgue_pad",
            "inner": measure_to_json(mu.inner),
            "axes": list(mu.axes),
            "dimension": mu.dim,
        }
    raise DomainError(f"cannot serialize measure {type(mu).__name__}")


def measure_from_json(obj: dict) -> Measure:
    kind = obj["type"]
    if kind == "atomic":
        atoms = tuple((tuple(row[:-1]), row[-1]) for row in obj["atoms"])
        dim = obj.get("dimension")
        if not atoms and dim is None:
            raise DomainError("empty atomic measure needs a dimension")
        return Atomic(atoms, dim=dim)
    if kind == "lebesgue":
        dim = obj["dimension"]
        src = obj.get("density")
        if src is None:
            return LebesgueDensity(dim)
        fn = parse_density(src, dim)
        fn._nvk_source = src  # type: ignore[attr-defined]
        return LebesgueDensity(dim, density=fn)
    if kind == "product":
        return Product(tuple(measure_from_json(f) for f in obj["factors"]))
    if kind == "pushforward2d":
        a, b, g, d = obj["coefficients"]
        return Pushforward2D(measure_from_json(obj["base"]), a, b, g, d)
    if kind == "pushforward_ladder":
        return PushforwardLadder(measure_from_json(obj["base"]),
                                 tuple(obj["b"]), obj["scale"])
    if kind == "lebesgue_pad":
        return LebesguePad(measure_from_json(obj["inner"]),
                           tuple(obj["axes"]), obj["dimension"])
    raise DomainError(f"unknown measure type {kind!r}")


def data_to_json(data: RepresentationData) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "a": data.a,
        "b": list(data.b),
        "measure": measure_to_json(data.mu),
    }


def data_from_json(obj: dict) -> RepresentationData:
    validate_descriptor(obj)
    if "a" not in obj or "b" not in obj:
        raise DomainError("descriptor lacks the 'a'/'b' fields of representation data")
    return RepresentationData(obj["a"], tuple(obj["b"]), measure_from_json(obj["measure"]))


def validate_descriptor(obj: dict):
    validator = jsonschema.Draft202012Validator(DESCRIPTOR_SCHEMA)
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path
        )
        raise DomainError(f"descriptor invalid at {path}: {e.message}")


def load_descriptor(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(
            f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    validate_descriptor(obj)
    return obj


def dump_descriptor(obj: dict, path: Optional[str]) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
