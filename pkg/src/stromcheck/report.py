"""Report documents for model checks and their canonical serialization."""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from . import __version__
from .cxstruct import INTEGRABILITY_TOL, nijenhuis
from .exterior import RESIDUAL_TOL, ZERO_TOL
from .hermitian import classify, dilatino_residual, lee_form, omega_norm
from .liealg import JACOBI_TOL, check_jacobi, d_squared_residual, is_unimodular
from .modelfile import LoadedModel
from .strominger import StromingerModel, check_system

REPORT_SCHEMA = "stromcheck-report/1"


def run_model(model: LoadedModel, tol: float | None = None, strict_hym_nabla: bool | None = None) -> dict:
    """Evaluate every check for a loaded model and return the report document."""
    if tol is None:
        tol = model.tolerance if model.tolerance is not None else RESIDUAL_TOL
    if strict_hym_nabla is None:
        strict_hym_nabla = model.doc.get("strict_hym_nabla", True)
    alg, h = model.alg, model.h
    unimod, traces = is_unimodular(alg)
    doc: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "tool_version": __version__,
        "model": model.name,
        "tolerances": {"residual": tol, "jacobi": JACOBI_TOL, "integrability": INTEGRABILITY_TOL,
                       "zero": ZERO_TOL},
        "structure": {
            "dimension": alg.dim,
            "jacobi_residual": check_jacobi(alg),
            "d_squared_residual": d_squared_residual(alg),
            "nijenhuis_residual": nijenhuis(alg, h.J),
            "unimodular": unimod,
            "ad_traces": [float(t) for t in traces],
        },
    }
    herm: dict[str, Any] = {
        "classification": classify(h, tol).as_dict(),
        "lee_form": [float(v) for v in lee_form(h).vector(1).real],
        "omega_norm": None,
        "dilatino_residual": None,
    }
    if h.Omega is not None:
        herm["omega_norm"] = omega_norm(h)
        herm["holomorphic_volume_residual"] = h.holomorphic_volume_residual()
        first, second = dilatino_residual(h)
        herm["dilatino_residual"] = {"codifferential": first, "conformally_balanced": second}
    doc["hermitian"] = herm

    doc["system"] = None
    if model.has_system:
        sm = StromingerModel(h, model.nabla, model.A, model.pairing, model.alpha, strict_hym_nabla, model.name)
        rep = check_system(sm, tol).as_dict()
        rep["pairing_weights"] = [list(b) for b in sm.pairingc.blocks]
        rep["pontryagin_difference"] = sm.pontryagin_difference().norm()
        rep["ddc_omega"] = sm.ddc_omega().norm()
        doc["system"] = rep

    expectations = model.doc.get("expectations")
    if expectations:
        doc["expectations"] = {k: _evaluate(doc, k, v, tol) for k, v in sorted(expectations.items())}
        doc["passed"] = all(e["ok"] for e in doc["expectations"].values())
    else:
        doc["expectations"] = {}
        doc["passed"] = doc["system"]["passed"] if doc["system"] is not None else True
    return doc


def lookup(doc: dict, key: str):
    cur: Any = doc
    for part in key.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict) and part in cur:
            cur = cur[part]
        else:
            raise KeyError(key)
    return cur


def _evaluate(doc: dict, key: str, expected, tol: float) -> dict:
    try:
        actual = lookup(doc, key)
    except (KeyError, IndexError, ValueError):
        return {"expected": expected, "actual": None, "ok": False}
    if isinstance(expected, dict):
        ok = isinstance(actual, (int, float)) and not isinstance(actual, bool)
        if ok and "max" in expected:
            ok = actual <= expected["max"]
        if ok and "min" in expected:
            ok = actual >= expected["min"]
    elif isinstance(expected, bool) or expected is None or isinstance(expected, str):
        ok = actual == expected
    else:
        ok = isinstance(actual, (int, float)) and abs(actual - expected) <= tol
    return {"expected": expected, "actual": actual, "ok": bool(ok)}


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    if x == 0:
        x = 0.0
    return format(x, ".17g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Canonical JSON: sorted keys, floats with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_text(doc: dict) -> str:
    """Short human-readable summary of a report document."""
    lines = [f"model {doc['model']}: {'PASS' if doc['passed'] else 'FAIL'}"]
    st = doc["structure"]
    lines.append(f"  jacobi {st['jacobi_residual']:.3g}  nijenhuis {st['nijenhuis_residual']:.3g}  "
                 f"unimodular {st['unimodular']}")
    herm = doc["hermitian"]
    cl = herm["classification"]
    lines.append(f"  kahler {cl['kahler']}  balanced {cl['balanced']}  gauduchon {cl['gauduchon']}")
    lines.append("  lee form " + " ".join(f"{v:.6g}" for v in herm["lee_form"]))
    if herm["dilatino_residual"] is not None:
        dr = herm["dilatino_residual"]
        lines.append(f"  ||Omega|| {herm['omega_norm']:.12g}  dilatino {dr['codifferential']:.3g} "
                     f"{dr['conformally_balanced']:.3g}")
    sysrep = doc["system"]
    if sysrep is not None:
        lines.append(f"  alpha {sysrep['alpha_used']}")
        for key in sorted(sysrep["flags"]):
            res = sysrep["residuals"][key]
            shown = " ".join(f"{r:.3g}" for r in res) if isinstance(res, list) else f"{res:.3g}"
            lines.append(f"  {key:22s} {'ok' if sysrep['flags'][key] else 'FAIL':4s} {shown}")
        if "hym_nabla_passes" in sysrep["informational"]:
            lines.append(f"  hym_nabla (informational) {sysrep['informational']['hym_nabla_passes']}")
    for key, e in doc["expectations"].items():
        lines.append(f"  expect {key} = {e['expected']}: {'ok' if e['ok'] else 'FAIL'} (got {e['actual']})")
    return "\n".join(lines)
