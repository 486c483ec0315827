"""
The truncated Fock oracle
=========================

Every exact identity can be checked by brute force on a truncated two-mode
Fock space.  Matrix elements are exact away from the cutoff; the guard
margin marks where that stops being true.
"""

import math

import numpy as np

from tmq import algebra as A
from tmq import fock

trunc = fock.TruncationSpec(n_max=24, guard=4)
print("dimension", trunc.dim, "trusted states", trunc.trusted_mask().sum())

# A truncated ladder operator fails [a, a^dag] = 1 only at the top level.
a = fock.ladder("plus", "annihilate", trunc)
c = fock.commutator_fock(a, a.dag())
print("[a, a^dag] - 1 on trusted block:", np.abs(c.restrict() - np.eye(c.restrict().shape[0])).max())
print("[a, a^dag] at the cutoff:", c.matrix[-1, -1].real)

# %%
# Pumping the vacuum produces the two-mode squeezed vacuum.  Compare with
# its Schmidt series sech r sum (tanh r)^n |n, n>.
r = 0.3
state = fock.evolve(fock.vacuum(trunc), xi=r, eps=0.0, t=1.0)
series = fock.two_mode_squeezed_vacuum(r, math.pi, trunc)
print("max |evolve - series| =", np.abs(state.vector - series.vector).max())
print("<N> =", fock.expectation(state, fock.lift(A.number(), trunc)).real, " 2 sinh^2 r =", 2 * math.sinh(r) ** 2)
print("leakage at the cutoff:", state.leakage())

# %%
# Too much gain for the cutoff is refused rather than silently wrong.
try:
    fock.squeeze_state(fock.vacuum(fock.TruncationSpec(10, 2)), 1.5)
except fock.TruncationOverflow as exc:
    print("refused:", exc)

# %%
# The photon-number difference is conserved by the pump, and the Casimir
# <K^2> by any squeezer.
dn = fock.lift(A.number_difference(), trunc)
start = fock.basis_state(2, 0, trunc)
after = fock.evolve(start, 0.25 + 0.1j, 0.8, 1.0)
print("<dN> before/after:", fock.expectation(start, dn).real, fock.expectation(after, dn).real)
