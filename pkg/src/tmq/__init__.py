"""Two-mode quadrature laboratory.

Exact operator algebra (:mod:`tmq.algebra`), a truncated Fock-space oracle
(:mod:`tmq.fock`), a symplectic Gaussian engine (:mod:`tmq.gaussian`), the
SU(1,1) interferometer (:mod:`tmq.interferometer`), broadband spectra
(:mod:`tmq.spectral`) and the verification suite (:mod:`tmq.verify`).
"""

from . import algebra, fock, gaussian, interferometer, spectral

__version__ = "0.1.0"

__all__ = ["algebra", "fock", "gaussian", "interferometer", "spectral", "__version__"]
