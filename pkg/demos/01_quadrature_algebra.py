"""
Complex quadratures and their algebra
=====================================

Two modes a+ and a- sit symmetrically around a carrier.  The complex
quadratures X1, X2 mix one mode with the conjugate of the other, so they are
not Hermitian, yet they behave as a conjugate pair.
"""

import math

from tmq import algebra as A

X1 = A.make_quadrature("X1")
X2 = A.make_quadrature("X2")
print("X1 =", X1)
print("X2 =", X2)

# X1 commutes with its own adjoint, and X1 pairs with X2^dag like x with y.
print("[X1, X1^dag] =", A.commute(X1, X1.adjoint()))
print("[X1, X2^dag] =", A.commute(X1, X2.adjoint()))

# The Hermitian EPR components split X1 into real and imaginary parts.
chi1, gam1 = A.make_quadrature("chi1"), A.make_quadrature("gamma1")
print("X1 - (chi1 + i gamma1)/sqrt2 =", (X1 - (chi1 + 1j * gam1) / math.sqrt(2)).max_abs())

# %%
# Quadrature powers.  Gamma_ij = (Xi^dag Xj + Xj^dag Xi)/2 are quadratic forms;
# the library keeps them normal ordered with a separate scalar.
G11, G22, G12 = A.gamma(1, 1), A.gamma(2, 2), A.gamma(1, 2)
print("G11 =", G11)
print("[G11, G22] - 2i G12 =", (A.commutator(G11, G22) - 2j * G12).max_abs())

# The normal-ordered trace of Gamma counts photons.
print(":G11: + :G22: == N ?", (G11.normal_part() + G22.normal_part()).isclose(A.number()))

# %%
# SU(1,1) generators and the Casimir.  The Casimir is the operator
# determinant of Gamma and only depends on the photon-number difference.
K1, K2, K3 = A.su11_generators()
print("[K1, K2] == i K3 ?", A.commutator(K1, K2).isclose(1j * K3))
dn = A.number_difference()
print("K^2 == (dN^2 - 1)/4 ?", A.casimir().isclose((dn * dn - A.NormalOrdered.scalar(1)) / 4))

# %%
# Squeezing rescales the quadratures by e^{+-r} and leaves G12 alone.
r = 0.4
print("S^dag X1 S == e^r X1 ?", A.squeeze_transform(X1, r).isclose(math.exp(r) * X1))
print("S^dag G12 S == G12 ?", A.squeeze_transform(G12, r).isclose(G12))

# Forms serialise to JSON for fixtures.
print(A.form_to_json(G12))
