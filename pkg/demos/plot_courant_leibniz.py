"""
Courant algebroids and the Bianchi identity
===========================================

A three-form H and a connection A with fiber pairing c define a bracket on
g + k + g*. The bracket satisfies the Leibniz identity exactly when
dH = c(F_A ^ F_A). This demo checks both directions on SL(2,C).
"""

import numpy as np

from stromcheck import models
from stromcheck.courant import (CourantData, CourantSection, dorfman, invariance_residual, max_leibniz_residual,
                                pairing, random_section)
from stromcheck.cxstruct import dc
from stromcheck.exterior import Form
from stromcheck.gauge import Connection, Pairing, bismut, chern_simons, direct_sum

##############################################################################
# Data from the Strominger solution
# ---------------------------------
#
# Take H = d^c omega and the product connection nabla x A, with the pairing
# tr_T - tr_E. The Bianchi identity of the solution is exactly the closing
# condition for this bracket.

h = models.sl2c(2.0)
theta_conn = direct_sum(bismut(h), Connection.flat(6, 1))
c = Pairing.tangent(6) + Pairing.trace(1, -1.0)
data = CourantData(h.alg, dc(h.alg, h.J, h.omega).real, theta_conn, c)
print("|dH - c(F^F)|      =", data.bianchi_residual())
print("max Leibniz defect =", max_leibniz_residual(data))
print("invariance defect  =", invariance_residual(data))

##############################################################################
# Brackets of sections
# --------------------
#
# Sections are triples (X, s, xi). The vertical part s must lie in the
# diagonal blocks of the pairing.

rng = np.random.default_rng(3)
e1 = random_section(rng, 6, 7, pairingc=c)
e2 = random_section(rng, 6, 7, pairingc=c)
b = dorfman(data, e1, e2)
print("<e1, e2> =", pairing(data, e1, e2))
print("|[e1, e2]| =", b.norm())
print("[X, X] for a pure vector:", dorfman(data, CourantSection.make(X=np.eye(6)[0], rank=7),
                                           CourantSection.make(X=np.eye(6)[0], rank=7)).norm())

##############################################################################
# Breaking the identity
# ---------------------
#
# Adding the non-closed three-form e^123 to H breaks Bianchi, and Leibniz breaks
# with it.

e = [Form.e(6, k) for k in range(1, 7)]
broken = CourantData(h.alg, data.H + (e[0] ^ e[1] ^ e[2]), theta_conn, c)
print("perturbed: Bianchi", broken.bianchi_residual(), " Leibniz", max_leibniz_residual(broken))

##############################################################################
# Chern-Simons data
# -----------------
#
# For any connection A, H = CS(A) closes the identity: dCS(A) = c(F ^ F).

A = Connection(rng.normal(size=(6, 2, 2)))
cs = CourantData(h.alg, chern_simons(h.alg, Pairing.trace(2, 0.7), A).real, A, Pairing.trace(2, 0.7))
print("CS data: Bianchi", cs.bianchi_residual(), " Leibniz", max_leibniz_residual(cs))
