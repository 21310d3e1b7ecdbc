"""Built-in example models, stored as model-file documents."""

from __future__ import annotations

import copy

from .modelfile import SCHEMA_VERSION

_HOLOMORPHIC_VOLUME = [[1, "th1^th2^th3"]]

_ENTRIES = {
    "torus6": {
        "description": "Flat complex 3-torus: Kahler, flat connections, every equation holds for any alpha.",
        "dimension": 6,
        "structure_constants": [],
        "complex_structure": "standard",
        "metric": "identity",
        "omega_form": _HOLOMORPHIC_VOLUME,
        "connections": {"nabla": {"constructor": "bismut"}, "A": {"constructor": "flat", "rank": 1}},
        "alpha": "solve",
        "expectations": {
            "hermitian.classification.kahler": True,
            "system.passed": True,
            "system.alpha_outcome.status": "degenerate",
        },
    },
    "iwasawa": {
        "description": "Iwasawa manifold, d theta_2 = theta_1 ^ theta_3, omega = i sum theta_j ^ conj(theta_j): "
                       "balanced and not Kahler.",
        "dimension": 6,
        "coframe_differentials": [[], [[1, "th1^th3"]], []],
        "complex_structure": "standard",
        "metric": 2,
        "omega_form": _HOLOMORPHIC_VOLUME,
        "expectations": {
            "hermitian.classification.kahler": False,
            "hermitian.classification.balanced": True,
            "hermitian.dilatino_residual.codifferential": {"max": 1e-12},
            "hermitian.dilatino_residual.conformally_balanced": {"max": 1e-12},
            "hermitian.omega_norm": 1.0,
        },
    },
    "sl2c": {
        "description": "SL(2,C) with omega_t, t = 2, nabla the Bismut connection and A flat; alpha = t^2/4 = 1.",
        "dimension": 6,
        "coframe_differentials": [[[0.5, "th2^th3"]], [[-0.5, "th1^th3"]], [[0.5, "th1^th2"]]],
        "complex_structure": "standard",
        "metric": "identity",
        "omega_form": [[0.125, "th1^th2^th3"]],
        "connections": {"nabla": {"constructor": "bismut"}, "A": {"constructor": "flat", "rank": 1}},
        "alpha": "solve",
        "expectations": {
            "system.passed": True,
            "system.alpha_used": 1.0,
            "system.alpha_outcome.status": "exact",
        },
    },
    "hopf4": {
        "description": "Hopf surface algebra su(2) + R with the standard metric: Gauduchon, not balanced.",
        "dimension": 4,
        "structure_constants": [[2, 3, 4, 1], [3, 4, 2, 1], [4, 2, 3, 1]],
        "complex_structure": "standard",
        "metric": "identity",
        "expectations": {
            "hermitian.classification.kahler": False,
            "hermitian.classification.balanced": False,
            "hermitian.classification.gauduchon": True,
        },
    },
    "standard_embedding": {
        "description": "Iwasawa with nabla = A = Chern connection and an equal-weight trace pairing. "
                       "tr R^R - tr F^F cancels identically, so the Bianchi residual is |dd^c omega|, "
                       "which is nonzero here: the ansatz needs dd^c omega = 0 as well.",
        "dimension": 6,
        "coframe_differentials": [[], [[1, "th1^th3"]], []],
        "complex_structure": "standard",
        "metric": 2,
        "omega_form": _HOLOMORPHIC_VOLUME,
        "connections": {"nabla": {"constructor": "chern"}, "A": {"constructor": "chern"}},
        "pairing": {"weights": [[6, 0.5], [6, -0.5]]},
        "alpha": 1.0,
        "expectations": {
            "system.pontryagin_difference": {"max": 1e-12},
            "system.flags.conformally_balanced": True,
            "system.flags.hym_A": True,
            "system.flags.hym_nabla": True,
            "system.flags.bianchi": False,
        },
    },
}


class UnknownEntryError(KeyError):
    """No catalog entry of that name."""


def names() -> list[str]:
    return list(_ENTRIES)


def describe(name: str) -> str:
    return get(name)["description"]


def get(name: str) -> dict:
    """A fresh copy of the model document for ``name``."""
    if name not in _ENTRIES:
        raise UnknownEntryError(f"unknown catalog entry {name!r}; choose from {', '.join(_ENTRIES)}")
    doc = {"schema": SCHEMA_VERSION, "name": name}
    doc.update(copy.deepcopy(_ENTRIES[name]))
    return doc
