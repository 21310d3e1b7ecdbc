"""Ready-made invariant models and random families used by tests and demos."""

from __future__ import annotations

import numpy as np

from .cxstruct import AlmostComplexStructure
from .exterior import Form, MetricTensor, substitute
from .hermitian import HermitianData
from .liealg import LieAlgebraModel


def theta(dim: int, j: int) -> Form:
    """theta_j = e^{2j-1} + i e^{2j}."""
    return Form.e(dim, 2 * j - 1) + 1j * Form.e(dim, 2 * j)


def theta_bar(dim: int, j: int) -> Form:
    return theta(dim, j).conj()


def iwasawa(metric_scale: float = 2.0) -> HermitianData:
    """d theta_1 = d theta_3 = 0, d theta_2 = theta_1 ^ theta_3, g = metric_scale * Id.

    With metric_scale = 2 the Kahler form is i sum theta_j ^ conj(theta_j).
    """
    th = [theta(6, j) for j in (1, 2, 3)]
    alg = LieAlgebraModel.from_complex_coframe([Form.zero(6), th[0] ^ th[2], Form.zero(6)], name="iwasawa")
    g = MetricTensor(metric_scale * np.eye(6))
    return HermitianData(alg, AlmostComplexStructure.standard(6), g, th[0] ^ th[1] ^ th[2])


def sl2c(t: float = 1.0) -> HermitianData:
    """SL(2,C) with e^1 + i e^2 = t sigma^1 etc.; omega_t is the standard form e^12 + e^34 + e^56."""
    th = [theta(6, j) for j in (1, 2, 3)]
    alg = LieAlgebraModel.from_complex_coframe(
        [(th[1] ^ th[2]) / t, -(th[0] ^ th[2]) / t, (th[0] ^ th[1]) / t], name=f"sl2c(t={t:g})")
    omega_hol = (th[0] ^ th[1] ^ th[2]) / t ** 3
    return HermitianData(alg, AlmostComplexStructure.standard(6), MetricTensor.identity(6), omega_hol)


def hopf4() -> HermitianData:
    """su(2) + R with e_1 central, standard J and metric."""
    alg = LieAlgebraModel.from_brackets(4, [(2, 3, 4, 1), (3, 4, 2, 1), (4, 2, 3, 1)], name="hopf4")
    return HermitianData(alg, AlmostComplexStructure.standard(4), MetricTensor.identity(4))


def torus(dim: int = 6) -> HermitianData:
    n = dim // 2
    omega_hol = theta(dim, 1)
    for j in range(2, n + 1):
        omega_hol = omega_hol ^ theta(dim, j)
    return HermitianData(LieAlgebraModel.abelian(dim, name=f"torus{dim}"),
                         AlmostComplexStructure.standard(dim), MetricTensor.identity(dim), omega_hol)


# ---------------------------------------------------------------------------
# random families


def random_compatible_metric(rng: np.random.Generator, J: AlmostComplexStructure) -> MetricTensor:
    """Average of a random SPD matrix over the group {1, J}."""
    m = J.dim
    x = rng.normal(size=(m, m))
    spd = x @ x.T + m * np.eye(m)
    return MetricTensor(0.5 * (spd + J.matrix.T @ spd @ J.matrix))


def transport(h: HermitianData, p) -> HermitianData:
    """Express the same structure in the basis f_i = sum_a p[a, i] e_a."""
    p = np.asarray(p, dtype=float)
    pinv = np.linalg.inv(p)
    c = np.einsum("ka,abd,bi,dj->kij", pinv, h.alg.structure, p, p)
    c = 0.5 * (c - c.transpose(0, 2, 1))
    alg = LieAlgebraModel(c, name=h.alg.name, check=False)
    J = AlmostComplexStructure(pinv @ h.J.matrix @ p)
    g = MetricTensor(p.T @ h.g.matrix @ p)
    # e^a = sum_i p[a, i] f^i
    omega_hol = None if h.Omega is None else substitute(p, h.Omega)
    return HermitianData(alg, J, g, omega_hol)


def random_complex_semidirect(rng: np.random.Generator, n: int = 3, traceless: bool = False) -> LieAlgebraModel:
    """Complex Lie algebra C x_D C^{n-1}: d theta_k = sum_l D[k, l] theta_1 ^ theta_l."""
    dim = 2 * n
    d = rng.normal(size=(n - 1, n - 1)) + 1j * rng.normal(size=(n - 1, n - 1))
    if traceless:
        d -= np.trace(d) / (n - 1) * np.eye(n - 1)
    th = [theta(dim, j) for j in range(1, n + 1)]
    diffs = [Form.zero(dim)]
    for k in range(n - 1):
        acc = Form.zero(dim)
        for l in range(n - 1):
            acc = acc + d[k, l] * (th[0] ^ th[l + 1])
        diffs.append(acc)
    return LieAlgebraModel.from_complex_coframe(diffs, name="semidirect")


def random_two_step(rng: np.random.Generator, complex_parallelizable: bool = False) -> LieAlgebraModel:
    """d theta_1 = d theta_2 = 0 and d theta_3 a random (2,0) + (1,1) combination."""
    th = [theta(6, j) for j in (1, 2, 3)]
    tb = [t.conj() for t in th]

    def z():
        return complex(rng.normal(), rng.normal())

    d3 = z() * (th[0] ^ th[1])
    if not complex_parallelizable:
        for a in range(2):
            for b in range(2):
                if rng.random() < 0.7:
                    d3 = d3 + z() * (th[a] ^ tb[b])
    return LieAlgebraModel.from_complex_coframe([Form.zero(6), Form.zero(6), d3], name="two-step")


def random_integrable_model(rng: np.random.Generator) -> HermitianData:
    """One draw from a mixture of integrable families with random compatible metrics."""
    kind = rng.integers(6)
    if kind == 0:
        alg, dim = random_complex_semidirect(rng, 3, traceless=True), 6
    elif kind == 1:
        alg, dim = random_complex_semidirect(rng, int(rng.integers(2, 4))), None
    elif kind == 2:
        alg, dim = random_two_step(rng, complex_parallelizable=True), 6
    elif kind == 3:
        alg, dim = random_two_step(rng), 6
    elif kind == 4:
        alg, dim = hopf4().alg, 4
    else:
        alg, dim = iwasawa().alg, 6
    dim = alg.dim
    J = AlmostComplexStructure.standard(dim)
    if kind in (4, 5) or rng.random() < 0.3:
        g = MetricTensor(float(rng.uniform(0.5, 2.0)) * np.eye(dim))
    else:
        g = random_compatible_metric(rng, J)
    h = HermitianData(alg, J, g)
    if rng.random() < 0.5:
        h = transport(h, random_basis_change(rng, dim))
    return h


def random_basis_change(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Well-conditioned, orientation-preserving random basis change."""
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q @ np.diag(rng.uniform(0.5, 2.0, size=dim))
