"""
The Iwasawa manifold
====================

Build the Iwasawa Lie algebra from its complex coframe, check that the
Hermitian form is balanced but not Kahler, and watch the dilatino equations
hold for every constant rescaling of the metric.
"""

from stromcheck import models
from stromcheck.cxstruct import dc
from stromcheck.gauge import chern, curvature
from stromcheck.hermitian import classify, dilatino_residual, lee_form, omega_norm
from stromcheck.liealg import ce_differential, check_jacobi

##############################################################################
# Structure equations
# -------------------
#
# The coframe is theta_j = e^{2j-1} + i e^{2j} and the only nonzero
# differential is d theta_2 = theta_1 ^ theta_3.

h = models.iwasawa()
th = [models.theta(6, j) for j in (1, 2, 3)]
print("d theta_2      =", ce_differential(h.alg, th[1]))
print("theta_1^theta_3 =", th[0] ^ th[2])
print("Jacobi residual:", check_jacobi(h.alg))

##############################################################################
# Balanced, not Kahler
# --------------------
#
# d omega is nonzero, but d omega ^ omega vanishes, so the Lee form is zero.

dw = h.d(h.omega)
print("|d omega|          =", dw.norm())
print("|d omega ^ omega|  =", (dw ^ h.omega).norm())
print("Lee form           =", lee_form(h))
print(classify(h).as_dict())

##############################################################################
# Scaling the metric
# ------------------
#
# The norm of the holomorphic volume form scales like c^{-3/2} under
# g -> c g, and the dilatino residuals stay at zero.

for c in (0.5, 1.0, 2.0, 4.0):
    hs = h.scaled(c)
    print(f"c = {c:4}: ||Omega|| = {omega_norm(hs):.6f}, "
          f"c^1.5 ||Omega|| = {omega_norm(hs) * c ** 1.5:.6f}, dilatino = {dilatino_residual(hs)}")

##############################################################################
# Chern connection
# ----------------
#
# The Iwasawa algebra is complex, so its Chern connection is flat. The
# standard-embedding ansatz still fails here because dd^c omega is nonzero.

F = curvature(h.alg, chern(h))
print("|Chern curvature| =", F.norm())
print("|dd^c omega| =", h.d(dc(h.alg, h.J, h.omega)).norm())
