"""
SU(1,1) interferometer
======================

A first amplifier squeezes the vacuum, a phase theta rotates the
quadratures, and a second amplifier measures.  Scanning theta traces a
fringe in <G22> that swings between e^{-2r}/2 and e^{2r}/2.
"""

import math

import numpy as np

from tmq import fock
from tmq import gaussian as G
from tmq import interferometer as I

r = 0.3
thetas = np.linspace(0, math.pi, 9)
gs = I.fringe(r, thetas)
fs = I.fringe(r, thetas, engine="fock", trunc=fock.TruncationSpec(24, 4))
print(" theta   gaussian    fock       closed form")
for t, a, b in zip(thetas, gs.gamma22, fs.gamma22):
    print(f"{t:6.3f}  {a:.8f}  {b:.8f}  {I.fringe_closed_form(r, t):.8f}")
print("min * max =", gs.gamma22.min() * gs.gamma22.max())

# %%
# The Heisenberg image of G22 through squeezer and phase, as an exact form.
print(I.measured_gamma22_transform(r, math.pi / 3))

# %%
# Measuring amplifier.  The vacuum alone gives cosh 2g - 1 photons, which
# is the normalisation; a squeezed input is read out against it.
sq = G.apply_squeeze(G.vacuum(), r)
for g in (0.5, 1.0, 2.0):
    print(f"g={g}: vacuum {I.amplified_readout(G.vacuum(), g)}, squeezed {I.amplified_readout(sq, g)}")

# %%
# Visibilities of the squeezed vacuum: W1 = tanh 2r, V1 = 0.
print("W1, W2, V1 =", I.visibilities(sq), " tanh 2r =", math.tanh(2 * r))
print("complementarity:", I.complementarity_check(sq))
