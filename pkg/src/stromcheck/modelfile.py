"""JSON model files: parsing, validation and construction of the numeric objects.

A model file is a single JSON document. Indices are 1-based. Forms are
written as lists of ``[coefficient, "word"]`` terms, where the word is a
``^``-separated product of the tokens ``e<k>`` (real basis), ``th<k>``
(= e^{2k-1} + i e^{2k}) and ``thb<k>`` (its conjugate), and a coefficient is
a number or a ``[re, im]`` pair. Example::

    {
      "name": "sl2c",
      "dimension": 6,
      "coframe_differentials": [[[0.5, "th2^th3"]], [[-0.5, "th1^th3"]], [[0.5, "th1^th2"]]],
      "complex_structure": "standard",
      "metric": "identity",
      "omega_form": [[1, "th1^th2^th3"]],
      "connections": {"nabla": {"constructor": "bismut"},
                      "A": {"constructor": "flat", "rank": 1}},
      "alpha": "solve"
    }

``omega_form`` is the holomorphic volume form Omega; the Kahler form omega
is always derived from the metric and J.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .cxstruct import AlmostComplexStructure, IntegrabilityError
from .exterior import Form, MetricTensor
from .gauge import Connection, Pairing, bismut, chern, levi_civita
from .hermitian import HermitianData
from .liealg import LieAlgebraModel

SCHEMA_VERSION = "stromcheck-model/1"

_number = {"type": "number"}
_coeff = {"oneOf": [_number, {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}]}
_term = {"type": "array", "prefixItems": [_coeff, {"type": "string"}], "minItems": 2, "maxItems": 2}
_form = {"type": "array", "items": _term}
_matrix = {"type": "array", "items": {"type": "array", "items": _coeff}}

MODEL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "dimension"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 2, "multipleOf": 2},
        "structure_constants": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [{"type": "integer", "minimum": 1}] * 3 + [_number],
                      "minItems": 4, "maxItems": 4},
        },
        "coframe_differentials": {"type": "array", "items": _form},
        "complex_structure": {"oneOf": [{"const": "standard"}, _matrix]},
        "metric": {"oneOf": [{"const": "identity"}, {"type": "number", "exclusiveMinimum": 0}, _matrix]},
        "omega_form": _form,
        "connections": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"nabla": {"$ref": "#/$defs/connection"}, "A": {"$ref": "#/$defs/connection"}},
        },
        "pairing": {
            "type": "object",
            "additionalProperties": False,
            "required": ["weights"],
            "properties": {"weights": {"type": "array", "items": {
                "type": "array", "prefixItems": [{"type": "integer", "minimum": 1}, _number],
                "minItems": 2, "maxItems": 2}}},
        },
        "alpha": {"oneOf": [_number, {"const": "solve"}]},
        "strict_hym_nabla": {"type": "boolean"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "expectations": {"type": "object", "additionalProperties": {
            "oneOf": [{"type": ["boolean", "string", "number", "null"]},
                      {"type": "object", "additionalProperties": False, "minProperties": 1,
                       "properties": {"max": _number, "min": _number}}]}},
    },
    "oneOf": [{"required": ["structure_constants"], "not": {"required": ["coframe_differentials"]}},
              {"required": ["coframe_differentials"], "not": {"required": ["structure_constants"]}}],
    "$defs": {
        "connection": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "constructor": {"enum": ["bismut", "chern", "levi_civita", "flat"]},
                "rank": {"type": "integer", "minimum": 1},
                "matrices": {"type": "array", "items": _matrix},
                "fiber_metric": _matrix,
            },
            "oneOf": [{"required": ["constructor"], "not": {"required": ["matrices"]}},
                      {"required": ["matrices"], "not": {"required": ["constructor"]}}],
        }
    },
}


class ModelFileError(ValueError):
    """Input error with the location inside the document."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


def _loc(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(MODEL_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise ModelFileError(_loc(err.absolute_path), err.message)


def read_json(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


# ---------------------------------------------------------------------------
# forms

_TOKEN = re.compile(r"^(e|th|thb)(\d+)$")


def _coeff(value) -> complex:
    if isinstance(value, list):
        return complex(value[0], value[1])
    return complex(value)


def parse_form(terms, dim: int, where: str) -> Form:
    out = Form.zero(dim)
    for n, (coeff, word) in enumerate(terms):
        piece = Form.scalar(dim, _coeff(coeff))
        for tok in word.replace(" ", "").split("^"):
            match = _TOKEN.match(tok)
            if not match:
                raise ModelFileError(f"{where}[{n}]", f"unknown form token {tok!r}")
            kind, k = match.group(1), int(match.group(2))
            piece = piece ^ _token_form(kind, k, dim, f"{where}[{n}]")
        out = out + piece
    return out


def _token_form(kind: str, k: int, dim: int, where: str) -> Form:
    if kind == "e":
        if not 1 <= k <= dim:
            raise ModelFileError(where, f"e{k} outside 1..{dim}")
        return Form.e(dim, k)
    if not 1 <= k <= dim // 2:
        raise ModelFileError(where, f"{kind}{k} outside 1..{dim // 2}")
    sign = 1j if kind == "th" else -1j
    return Form.e(dim, 2 * k - 1) + sign * Form.e(dim, 2 * k)


def _matrix_value(rows, where: str, shape=None) -> np.ndarray:
    arr = np.array([[_coeff(v) for v in row] for row in rows])
    if arr.ndim != 2 or (shape is not None and arr.shape != shape):
        raise ModelFileError(where, f"expected a matrix of shape {shape}, got {arr.shape}")
    if np.abs(arr.imag).max(initial=0.0) == 0:
        arr = arr.real
    return arr


# ---------------------------------------------------------------------------
# construction


@dataclass
class LoadedModel:
    """Numeric objects built from a model document."""

    doc: dict
    alg: LieAlgebraModel
    h: HermitianData
    nabla: Connection | None
    A: Connection | None
    pairing: Pairing | None

    @property
    def name(self) -> str:
        return self.doc["name"]

    @property
    def has_system(self) -> bool:
        return self.nabla is not None and self.A is not None

    @property
    def alpha(self):
        return self.doc.get("alpha", "solve")

    @property
    def tolerance(self) -> float | None:
        return self.doc.get("tolerance")


def build(doc: dict) -> LoadedModel:
    """Validate ``doc`` and build the algebra, hermitian data and connections."""
    validate(doc)
    dim = doc["dimension"]
    if "structure_constants" in doc:
        for n, (i, j, k, _) in enumerate(doc["structure_constants"]):
            if max(i, j, k) > dim:
                raise ModelFileError(f"$.structure_constants[{n}]", f"index exceeds dimension {dim}")
        alg = _structural("$.structure_constants",
                          lambda: LieAlgebraModel.from_brackets(dim, doc["structure_constants"], name=doc["name"]))
    else:
        diffs = doc["coframe_differentials"]
        if len(diffs) != dim // 2:
            raise ModelFileError("$.coframe_differentials", f"expected {dim // 2} relations, got {len(diffs)}")
        forms = [parse_form(t, dim, f"$.coframe_differentials[{n}]") for n, t in enumerate(diffs)]
        for n, f in enumerate(forms):
            if f.degrees - {2}:
                raise ModelFileError(f"$.coframe_differentials[{n}]", "each relation must be a 2-form")
        alg = _structural("$.coframe_differentials",
                          lambda: LieAlgebraModel.from_complex_coframe(forms, name=doc["name"]))

    js = doc.get("complex_structure", "standard")
    if js == "standard":
        J = AlmostComplexStructure.standard(dim)
    else:
        J = _structural("$.complex_structure",
                        lambda: AlmostComplexStructure(_matrix_value(js, "$.complex_structure", (dim, dim)).real))

    ms = doc.get("metric", "identity")
    if ms == "identity":
        g = MetricTensor.identity(dim)
    elif isinstance(ms, (int, float)):
        g = MetricTensor(float(ms) * np.eye(dim))
    else:
        g = _structural("$.metric", lambda: MetricTensor(_matrix_value(ms, "$.metric", (dim, dim)).real))

    omega_form = None
    if "omega_form" in doc:
        omega_form = parse_form(doc["omega_form"], dim, "$.omega_form")
    h = _structural("$", lambda: HermitianData(alg, J, g, omega_form))

    conns = doc.get("connections", {})
    nabla = _connection(conns["nabla"], h, "$.connections.nabla", tangent=True) if "nabla" in conns else None
    A = _connection(conns["A"], h, "$.connections.A", tangent=False) if "A" in conns else None
    if (nabla is None) != (A is None):
        raise ModelFileError("$.connections", "give both nabla and A, or neither")

    pairing = None
    if "pairing" in doc:
        pairing = Pairing(tuple(tuple(w) for w in doc["pairing"]["weights"]))
        if A is not None and pairing.rank != dim + A.rank:
            raise ModelFileError("$.pairing.weights", f"block sizes sum to {pairing.rank}, expected {dim + A.rank}")
    if nabla is not None and h.Omega is None:
        raise ModelFileError("$.omega_form", "connections are given but Omega is missing")
    return LoadedModel(doc, alg, h, nabla, A, pairing)


def _structural(location: str, thunk):
    try:
        return thunk()
    except (ValueError, IntegrabilityError) as exc:
        raise ModelFileError(location, str(exc)) from None


def _connection(spec: dict, h: HermitianData, where: str, tangent: bool) -> Connection:
    dim = h.alg.dim
    if "constructor" in spec:
        kind = spec["constructor"]
        if kind == "flat":
            rank = spec.get("rank", dim)
            conn = Connection.flat(dim, rank)
        else:
            if "rank" in spec and spec["rank"] != dim:
                raise ModelFileError(f"{where}.rank", f"{kind} connections have rank {dim}")
            builder = {"bismut": bismut, "chern": chern, "levi_civita": levi_civita}[kind]
            conn = _structural(where, lambda: builder(h))
    else:
        mats = spec["matrices"]
        if len(mats) != dim:
            raise ModelFileError(f"{where}.matrices", f"expected {dim} matrices (one per direction), got {len(mats)}")
        rank = spec.get("rank", len(mats[0]))
        arr = np.array([_matrix_value(m, f"{where}.matrices[{i}]", (rank, rank)) for i, m in enumerate(mats)])
        conn = Connection(arr)
    if tangent and conn.rank != dim:
        raise ModelFileError(where, f"nabla must have rank {dim}")
    fm = spec.get("fiber_metric")
    if fm is not None:
        conn = conn.with_fiber_metric(_matrix_value(fm, f"{where}.fiber_metric", (conn.rank, conn.rank)))
    elif tangent or spec.get("constructor") in ("bismut", "chern", "levi_civita"):
        conn = conn.with_fiber_metric(h.g.matrix)
    return Connection(conn.coeffs, tangent=tangent, fiber_metric=conn.fiber_metric, name=conn.name)


def load(path: str | Path) -> LoadedModel:
    return build(read_json(path))
