"""Shared random generators for the property tests."""

import numpy as np
from hypothesis import strategies as st

from stromcheck.exterior import Form, basis

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def rng_from(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_form(rng: np.random.Generator, dim: int, k: int, real: bool = False, density: float = 1.0) -> Form:
    terms = {}
    for idx in basis(dim, k):
        if rng.random() < density:
            v = rng.normal()
            if not real:
                v = complex(v, rng.normal())
            terms[idx] = v
    return Form(dim, terms)


def random_mixed_form(rng: np.random.Generator, dim: int, degrees=(0, 1, 2, 3)) -> Form:
    out = Form.zero(dim)
    for k in degrees:
        out = out + random_form(rng, dim, k, density=0.6)
    return out


def close(a, b, tol=1e-10) -> bool:
    """Relative closeness for forms."""
    scale = max(1.0, a.norm(), b.norm())
    return (a - b).norm() <= tol * scale


def holomorphic_volume(J) -> Form:
    """Wedge of the (1,0) coframe returned by ``J.frame()``."""
    theta, _ = J.frame()
    out = Form.scalar(J.dim, 1.0)
    for row in theta[:J.n]:
        out = out ^ Form.from_vector(J.dim, 1, row)
    return out
