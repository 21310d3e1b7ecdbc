"""
A solution on SL(2,C)
=====================

The complex Lie group SL(2,C) carries a one-parameter family of balanced
metrics omega_t. Taking nabla to be the Bismut connection and A a flat line
bundle gives a solution of the Strominger system with alpha = t^2/4.
"""

from stromcheck import models
from stromcheck.cxstruct import dc
from stromcheck.gauge import Connection, Pairing, bismut, c_square, curvature, hym_residual
from stromcheck.hermitian import classify
from stromcheck.strominger import StromingerModel, bianchi_residual, check_system, solve_alpha

##############################################################################
# The two four-forms
# ------------------
#
# Both dd^c omega_t and tr R ^ R of the Bismut connection are multiples of
# V = e^1234 + e^1256 + e^3456. With the complex trace the coefficients are
# 4/t^2 and 16/t^4.

for t in (1.0, 2.0, 3.0):
    h = models.sl2c(t)
    R = curvature(h.alg, bismut(h))
    ddc = h.d(dc(h.alg, h.J, h.omega))
    rr = c_square(Pairing.tangent(6), R)
    print(f"t = {t}: dd^c omega = {ddc[(1, 2, 3, 4)].real:+.6f} V (4/t^2 = {4 / t ** 2:.6f}), "
          f"tr R^R = {rr[(1, 2, 3, 4)].real:+.6f} V (16/t^4 = {16 / t ** 4:.6f})")

##############################################################################
# Solving for alpha
# -----------------
#
# The Bianchi identity dd^c omega = alpha (tr R^R - tr F^F) is linear in
# alpha, so solve_alpha finds it by a one-dimensional least-squares fit and
# reports whether the fit is exact.

h = models.sl2c(2.0)
m = StromingerModel(h, bismut(h), Connection.flat(6, 1))
outcome = solve_alpha(m)
print(outcome.as_dict())

##############################################################################
# The remaining equations
# -----------------------
#
# The Bismut curvature is Hermite-Yang-Mills, the metric is balanced and
# ||Omega|| is constant, so every flag of the full system is set.

print("HYM residuals of R:", hym_residual(h, curvature(h.alg, m.nablaT)))
print("balanced:", classify(h).balanced)
report = check_system(StromingerModel(h, bismut(h), Connection.flat(6, 1), alpha=outcome.alpha))
print("flags:", report.flags)
print("passed:", report.passed)

##############################################################################
# A wrong coupling constant
# -------------------------
#
# Halving alpha leaves a Bianchi residual that is half of dd^c omega.

print("|Bianchi residual| at alpha/2:", bianchi_residual(m, outcome.alpha / 2).norm())
print("|dd^c omega| / 2:             ", m.ddc_omega().norm() / 2)
