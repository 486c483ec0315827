"""Symplectic engine for two-mode Gaussian states.

States are described by the mean and symmetrised covariance of the
quadrature vector ``(x+, y+, x-, y-)`` with ``[x, y] = i`` (vacuum
variance 1/2).  Every complex-quadrature observable is a linear or quadratic
function of these moments, so this engine is exact for Gaussian states and
serves as the fast counterpart of :mod:`tmq.fock`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "OMEGA",
    "PSD_TOL",
    "EPR_THRESHOLD",
    "EPR_THRESHOLD_QUARTER_VACUUM",
    "UnphysicalStateError",
    "GaussianState",
    "ComplexQuadCovariance",
    "SeparabilityWitness",
    "vacuum",
    "squeeze_symplectic",
    "squeeze_gram_excess",
    "rotation_symplectic",
    "apply_symplectic",
    "apply_squeeze",
    "apply_rotation",
    "apply_displacement",
    "epr_vectors",
    "quadrature_powers",
    "covariance_V",
    "simon_duan_inseparable",
    "epr_sum",
    "renyi2_entropy",
    "su11_expectations",
    "su2_expectations",
    "mean_number",
    "squeezed_number",
    "mean_complex_quadratures",
]

OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
PSD_TOL = 1e-10

# Vacuum value of <(d(y+ + y-))^2> + <(d(x+ - x-))^2> with vacuum variance 1/2.
EPR_THRESHOLD = 2.0
# The same bound when quadratures are scaled so that the vacuum variance is 1/4.
EPR_THRESHOLD_QUARTER_VACUUM = 1.0


class UnphysicalStateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean ``(<x+>, <y+>, <x->, <y->)`` and 4x4 symmetric covariance."""

    mean: np.ndarray
    cov: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(4)
        cov = np.array(self.cov, dtype=float).reshape(4, 4)
        if not np.allclose(cov, cov.T, atol=1e-12, rtol=0):
            raise UnphysicalStateError("covariance matrix is not symmetric")
        cov = (cov + cov.T) / 2
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def physicality_margin(self) -> float:
        """Smallest eigenvalue of ``cov + (i/2) Omega``; negative means unphysical."""
        return float(np.linalg.eigvalsh(self.cov + 0.5j * OMEGA).min())

    def is_physical(self, tol: float = PSD_TOL) -> bool:
        return self.physicality_margin() >= -tol

    def second_moments(self) -> np.ndarray:
        """Symmetrised raw moments ``<{r_i, r_j}>/2``."""
        return self.cov + np.outer(self.mean, self.mean)

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist(), "metadata": dict(self.metadata)}

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianState":
        return cls(np.array(data["mean"]), np.array(data["cov"]), dict(data.get("metadata", {})))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        return cls.from_dict(json.loads(text))


class ComplexQuadCovariance(NamedTuple):
    """Real symmetric covariance of the complex quadratures (vacuum = identity)."""

    V11: float
    V22: float
    V12: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.V11, self.V12], [self.V12, self.V22]])

    @property
    def det(self) -> float:
        return self.V11 * self.V22 - self.V12 ** 2

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


class SeparabilityWitness(NamedTuple):
    inseparable: bool
    witness: float


def vacuum() -> GaussianState:
    return GaussianState(np.zeros(4), 0.5 * np.eye(4), {"label": "vacuum"})


def squeeze_symplectic(r: float, phi: float = 0.0) -> np.ndarray:
    """Heisenberg action of ``S(r e^{i phi})`` on ``(x+, y+, x-, y-)``.

    Matches ``a+ -> a+ cosh r + e^{i phi} a-^dag sinh r``.
    """
    c, s = math.cosh(r), math.sinh(r)
    R = np.array([[math.cos(phi), math.sin(phi)], [math.sin(phi), -math.cos(phi)]])
    return np.block([[c * np.eye(2), s * R], [s * R, c * np.eye(2)]])


def squeeze_gram_excess(r: float, phi: float = 0.0) -> np.ndarray:
    """``S S^T - I`` for :func:`squeeze_symplectic`, free of cancellation at small ``r``."""
    R = np.array([[math.cos(phi), math.sin(phi)], [math.sin(phi), -math.cos(phi)]])
    d = 2 * math.sinh(r) ** 2
    return np.block([[d * np.eye(2), math.sinh(2 * r) * R], [math.sinh(2 * r) * R, d * np.eye(2)]])


def rotation_symplectic(theta: float) -> np.ndarray:
    """Carrier-phase rotation ``a -> a e^{-i theta}`` on both modes."""
    c, s = math.cos(theta), math.sin(theta)
    return np.kron(np.eye(2), np.array([[c, s], [-s, c]]))


def apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    return GaussianState(S @ state.mean, S @ state.cov @ S.T, dict(state.metadata))


def apply_squeeze(state: GaussianState, r: float, phi: float = 0.0) -> GaussianState:
    if not math.isfinite(r):
        raise ValueError(f"squeezing gain must be finite, got {r}")
    return apply_symplectic(state, squeeze_symplectic(r, phi))


def apply_rotation(state: GaussianState, theta: float) -> GaussianState:
    return apply_symplectic(state, rotation_symplectic(theta))


def apply_displacement(state: GaussianState, alpha_plus: complex, alpha_minus: complex) -> GaussianState:
    """Shift ``<a+>`` by ``alpha_plus`` and ``<a->`` by ``alpha_minus``."""
    shift = math.sqrt(2) * np.array(
        [complex(alpha_plus).real, complex(alpha_plus).imag,
         complex(alpha_minus).real, complex(alpha_minus).imag]
    )
    return GaussianState(state.mean + shift, state.cov, dict(state.metadata))


def epr_vectors(theta: float = 0.0) -> dict[str, np.ndarray]:
    """Coefficient vectors of the rotated EPR components over ``(x+, y+, x-, y-)``."""
    r2 = math.sqrt(2)
    chi1 = np.array([1, 0, 1, 0]) / r2
    gam1 = np.array([0, 1, 0, -1]) / r2
    chi2 = np.array([0, 1, 0, 1]) / r2
    gam2 = np.array([-1, 0, 1, 0]) / r2
    c, s = math.cos(theta), math.sin(theta)
    return {
        "chi1": c * chi1 + s * chi2,
        "gamma1": c * gam1 + s * gam2,
        "chi2": -s * chi1 + c * chi2,
        "gamma2": -s * gam1 + c * gam2,
    }


def _gamma_matrix(moments: np.ndarray, theta: float) -> tuple[float, float, float]:
    u = epr_vectors(theta)

    def m(a, b):
        return float(u[a] @ moments @ u[b])

    g11 = 0.5 * (m("chi1", "chi1") + m("gamma1", "gamma1"))
    g22 = 0.5 * (m("chi2", "chi2") + m("gamma2", "gamma2"))
    g12 = 0.5 * (m("chi1", "chi2") + m("gamma1", "gamma2"))
    return g11, g22, g12


def _require_physical(state: GaussianState):
    margin = state.physicality_margin()
    if margin < -PSD_TOL:
        raise UnphysicalStateError(f"covariance violates the uncertainty relation (margin {margin:.3e})")


def quadrature_powers(state: GaussianState, theta: float = 0.0) -> tuple[float, float, float]:
    """Expectations ``(<G11>, <G22>, <G12>)`` of the quadrature matrix at phase ``theta``."""
    _require_physical(state)
    return _gamma_matrix(state.second_moments(), theta)


def mean_complex_quadratures(state: GaussianState, theta: float = 0.0) -> tuple[complex, complex]:
    u = epr_vectors(theta)
    x1 = (u["chi1"] @ state.mean + 1j * (u["gamma1"] @ state.mean)) / math.sqrt(2)
    x2 = (u["chi2"] @ state.mean + 1j * (u["gamma2"] @ state.mean)) / math.sqrt(2)
    return complex(x1), complex(x2)


def covariance_V(state: GaussianState, theta: float = 0.0) -> ComplexQuadCovariance:
    """Complex-quadrature covariance ``<{dXi^dag, dXj}>`` (real part), vacuum = 1.

    Equals ``2 (<Gij> - Re <Xi>^* <Xj>)``.
    """
    _require_physical(state)
    g11, g22, g12 = _gamma_matrix(state.cov, theta)
    return ComplexQuadCovariance(2 * g11, 2 * g22, 2 * g12)


def simon_duan_inseparable(V: ComplexQuadCovariance, tol: float = 1e-10) -> SeparabilityWitness:
    """Flag inseparability when the smallest eigenvalue of ``V`` drops below the vacuum level 1."""
    lam = V.min_eigenvalue()
    return SeparabilityWitness(lam < 1 - tol, lam)


def epr_sum(state: GaussianState) -> float:
    """``<(d(y+ + y-))^2> + <(d(x+ - x-))^2>``; compare with :data:`EPR_THRESHOLD`."""
    _require_physical(state)
    a = np.array([0, 1, 0, 1.0])
    b = np.array([1, 0, -1, 0.0])
    return float(a @ state.cov @ a + b @ state.cov @ b)


def renyi2_entropy(V: ComplexQuadCovariance, tol: float = 1e-10) -> float:
    """Gaussian Renyi-2 entropy ``ln(det V) / 2``."""
    d = V.det
    if d < 1 - tol:
        raise UnphysicalStateError(f"det V = {d:.6g} < 1: not a physical covariance for this measure")
    return 0.5 * math.log(max(d, 1.0))


def mean_number(state: GaussianState) -> float:
    """``<n+ + n->`` from the second moments."""
    return 0.5 * float(np.trace(state.second_moments() - 0.5 * np.eye(4)))


def squeezed_number(state: GaussianState, r: float, phi: float = 0.0) -> float:
    """``<n+ + n->`` after :func:`apply_squeeze`, tracking the excess over vacuum.

    With ``E = <sym(r r^T)> - I/2`` the squeezed excess is
    ``S E S^T + (S S^T - I)/2``, so a vacuum input gives exactly
    ``2 sinh(r)^2`` with no cancellation.
    """
    S = squeeze_symplectic(r, phi)
    E = state.second_moments() - 0.5 * np.eye(4)
    return 0.5 * float(np.trace(S @ E @ S.T + 0.5 * squeeze_gram_excess(r, phi)))


def su11_expectations(state: GaussianState) -> tuple[float, float, float]:
    g11, g22, g12 = quadrature_powers(state)
    return 0.5 * (g11 - g22), g12, 0.5 * (g11 + g22)


def su2_expectations(state: GaussianState) -> tuple[float, float, float]:
    """``(<J1>, <J2>, <J3>)`` from the cross-mode second moments."""
    m = state.second_moments()
    j1 = 0.5 * (m[0, 2] + m[1, 3])
    j2 = 0.5 * (m[0, 3] - m[1, 2])
    j3 = 0.25 * (m[0, 0] + m[1, 1] - m[2, 2] - m[3, 3])
    return float(j1), float(j2), float(j3)
