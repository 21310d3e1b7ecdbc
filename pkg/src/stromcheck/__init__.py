"""Invariant hermitian geometry and residual checks for the Strominger system on Lie algebras."""

__version__ = "0.1.0"

from .exterior import Form, MetricTensor, hodge_star, lambda_contract, wedge  # noqa: E402
from .liealg import LieAlgebraModel, ce_differential, check_jacobi  # noqa: E402
from .cxstruct import AlmostComplexStructure, dc, del_, delbar, is_integrable, nijenhuis  # noqa: E402
from .hermitian import HermitianData, classify, dilatino_residual, lee_form, omega_norm  # noqa: E402
from .gauge import (Connection, CurvatureForm, Pairing, bismut, c_square, chern,  # noqa: E402
                    chern_simons, curvature, hym_residual, levi_civita, moment_pairing)
from .strominger import StromingerModel, bianchi_residual, check_system, lambda_value, solve_alpha  # noqa: E402

__all__ = [
    "Form", "MetricTensor", "hodge_star", "lambda_contract", "wedge",
    "LieAlgebraModel", "ce_differential", "check_jacobi",
    "AlmostComplexStructure", "dc", "del_", "delbar", "is_integrable", "nijenhuis",
    "HermitianData", "classify", "dilatino_residual", "lee_form", "omega_norm",
    "Connection", "CurvatureForm", "Pairing", "bismut", "c_square", "chern", "chern_simons",
    "curvature", "hym_residual", "levi_civita", "moment_pairing",
    "StromingerModel", "bianchi_residual", "check_system", "lambda_value", "solve_alpha",
]
