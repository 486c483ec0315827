"""SU(1,1) interferometer: squeezer -> phase -> measuring amplifier -> power.

Both engines are supported.  A state is either a
:class:`~tmq.gaussian.GaussianState` or a :class:`~tmq.fock.FockState`; the
functions below dispatch on its type.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import algebra, fock, gaussian

__all__ = [
    "InterferometerConfig",
    "FringeSeries",
    "ReadoutResult",
    "fringe_closed_form",
    "vacuum_readout",
    "readout_expression",
    "amplified_readout",
    "prepare_state",
    "fringe",
    "measured_gamma22_transform",
    "visibilities",
    "complementarity_check",
    "state_expectations",
]


@dataclass(frozen=True)
class InterferometerConfig:
    """Gains, phases and engine of one interferometer run.

    ``phi`` is the quadrature angle amplified by the measuring amplifier; the
    default ``pi/2`` amplifies ``X2``, i.e. the second amplifier undoes the
    first one at ``theta = 0`` when ``g == r``.
    """

    r: float
    g: float = 0.0
    theta: float = 0.0
    phi: float = math.pi / 2
    engine: str = "gaussian"
    trunc: fock.TruncationSpec | None = None

    def __post_init__(self):
        for name in ("r", "g", "theta", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.r < 0 or self.g < 0:
            raise ValueError("gains r and g must be non-negative")
        if self.engine not in ("gaussian", "fock"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine == "fock" and self.trunc is None:
            object.__setattr__(self, "trunc", fock.TruncationSpec())

    def snapshot(self) -> dict:
        d = asdict(self)
        d["trunc"] = None if self.trunc is None else {"n_max": self.trunc.n_max, "guard": self.trunc.guard}
        return d


class ReadoutResult(NamedTuple):
    raw_power: float
    normalized: float


@dataclass(frozen=True)
class FringeSeries:
    """Tabulated ``(theta, mean output power, <G22>)`` over a phase grid."""

    theta: np.ndarray
    power: np.ndarray
    gamma22: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        if th.size == 0:
            raise ValueError("empty phase grid")
        if np.any(np.diff(th) <= 0):
            raise ValueError("theta grid must be strictly increasing")
        for name in ("power", "gamma22"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite {name} values")

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.theta.tolist(), self.power.tolist(), self.gamma22.tolist()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta_rad", "power", "gamma22"])
        for row in self.points:
            w.writerow([f"{v:.17g}" for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{"theta_rad": t, "power": p, "gamma22": g} for t, p, g in self.points]
        return json.dumps({"metadata": self.metadata, "points": rows}, indent=2)


def fringe_closed_form(r: float, theta) -> np.ndarray:
    """Vacuum-input output power ``(cosh 2r - cos 2theta sinh 2r) / 2``."""
    theta = np.asarray(theta, dtype=float)
    return 0.5 * (math.cosh(2 * r) - np.cos(2 * theta) * math.sinh(2 * r))


def vacuum_readout(g: float) -> float:
    """Photon number leaving an amplifier of gain ``g`` fed with vacuum: ``cosh 2g - 1``."""
    return 2 * math.sinh(g) ** 2


def readout_expression(g11_normal: float, g22_normal: float, g: float) -> float:
    """Output photon number from the normal-ordered input powers along the amplified axis."""
    return g11_normal * math.exp(2 * g) + g22_normal * math.exp(-2 * g) + vacuum_readout(g)


def _is_fock(state) -> bool:
    return isinstance(state, fock.FockState)


def state_expectations(state, forms: Sequence) -> list[float]:
    """Real expectation values of Hermitian ``forms`` on either engine."""
    if _is_fock(state):
        return [fock.expectation(state, fock.lift(f, state.trunc)).real for f in forms]
    out = []
    for f in forms:
        out.append(_gaussian_expectation(state, f))
    return out


def _gaussian_expectation(state: gaussian.GaussianState, form) -> float:
    # Express the Hermitian quadratic form in (x+, y+, x-, y-) and use the
    # symmetrised second moments.
    if not isinstance(form, algebra.QuadraticForm):
        raise TypeError("the Gaussian engine evaluates quadratic forms only")
    r2 = math.sqrt(2)
    # b = B @ r with r = (x+, y+, x-, y-)
    B = np.array(
        [[1, 1j, 0, 0], [1, -1j, 0, 0], [0, 0, 1, 1j], [0, 0, 1, -1j]], dtype=complex
    ) / r2
    Q = B.T @ form.M @ B
    Qs = (Q + Q.T) / 2
    # r_i r_j = sym(r_i r_j) + [r_i, r_j]/2 ; [r_i, r_j] = i OMEGA_ij
    value = np.sum(Qs * state.second_moments()) + np.sum(Q * 0.5j * gaussian.OMEGA) + form.s
    return float(value.real)


def prepare_state(config: InterferometerConfig):
    """Vacuum squeezed by the first amplifier and rotated by ``theta``."""
    if config.engine == "gaussian":
        s = gaussian.apply_squeeze(gaussian.vacuum(), config.r, 0.0)
        return gaussian.apply_rotation(s, config.theta)
    s = fock.squeeze_state(fock.vacuum(config.trunc), config.r, 0.0)
    return fock.rotate_state(s, config.theta)


def _measured_photons(state, g: float, phi: float, unitary: fock.FockOperator | None = None) -> float:
    # Amplifier whose pump phase 2*phi amplifies the quadrature X1(phi).
    if _is_fock(state):
        if g == 0:
            out = state
        elif unitary is not None:
            out = fock.FockState(unitary.matrix @ state.vector, state.trunc)
            leak = out.leakage()
            if leak > fock.DEFAULT_LEAKAGE_TOL:
                raise fock.TruncationOverflow(leak, fock.DEFAULT_LEAKAGE_TOL)
        else:
            out = fock.squeeze_state(state, g, 2 * phi)
        return fock.expectation(out, fock.lift(algebra.number(), state.trunc)).real
    return gaussian.squeezed_number(state, g, 2 * phi)


def amplified_readout(state, g: float, phi: float = 0.0) -> ReadoutResult:
    """Photon number after a measuring amplifier, raw and vacuum-normalised.

    The normalisation is the exact vacuum output ``cosh 2g - 1``.
    """
    if not g > 0:
        raise ValueError(f"measurement gain must be positive, got {g}")
    raw = _measured_photons(state, g, phi)
    return ReadoutResult(raw, raw / vacuum_readout(g))


def fringe(r: float, thetas, g: float = 0.0, phi: float = math.pi / 2,
           engine: str = "gaussian", trunc: fock.TruncationSpec | None = None) -> FringeSeries:
    """Scan the interferometer phase for vacuum input.

    ``gamma22`` is ``<G22>`` after squeezer and phase; ``power`` is the photon
    number after the measuring amplifier (gain ``g``, axis ``phi``).
    """
    thetas = np.asarray(thetas, dtype=float)
    cfg = InterferometerConfig(r=r, g=g, phi=phi, engine=engine, trunc=trunc)
    g22_form = algebra.gamma(2, 2)
    if engine == "gaussian":
        squeezed = gaussian.apply_squeeze(gaussian.vacuum(), r, 0.0)
        rows = []
        for th in thetas:
            s = gaussian.apply_rotation(squeezed, th)
            rows.append((_measured_photons(s, g, phi), gaussian.quadrature_powers(s)[1]))
    else:
        squeezed = fock.squeeze_state(fock.vacuum(cfg.trunc), r, 0.0)
        G22 = fock.lift(g22_form, cfg.trunc)
        U = fock.squeeze_unitary(g, 2 * phi, cfg.trunc) if g > 0 else None
        rows = []
        for th in thetas:
            s = fock.rotate_state(squeezed, th)
            rows.append((_measured_photons(s, g, phi, U), fock.expectation(s, G22).real))
    power, g22 = (np.array(col) for col in zip(*rows)) if rows else (np.array([]), np.array([]))
    return FringeSeries(thetas, power, g22, metadata=cfg.snapshot())


def measured_gamma22_transform(r: float, theta: float) -> algebra.QuadraticForm:
    """Heisenberg image of ``G22`` through squeezer ``r`` then phase ``theta``.

    Evaluates to ``sin^2 e^{2r} G11 + cos^2 e^{-2r} G22 - 2 sin cos G12``.
    """
    rotated = algebra.rotate_transform(algebra.gamma(2, 2), theta)
    return algebra.squeeze_transform(rotated, r, 0.0)


def visibilities(state) -> tuple[float, float, float]:
    """Two-photon visibilities ``W1, W2`` and single-photon visibility ``V1``."""
    k1, k2, k3 = algebra.su11_generators()
    j1 = algebra.su2_generators()[0]
    ek1, ek2, ek3, ej1 = state_expectations(state, (k1, k2, k3, j1))
    if ek3 <= 0:
        raise ValueError("<K3> must be positive")
    return ek1 / ek3, ek2 / ek3, ej1 / ek3


def complementarity_check(state, tol: float = 1e-10) -> tuple[float, bool]:
    w1, _, v1 = visibilities(state)
    lhs = v1 ** 2 + w1 ** 2
    return lhs, lhs <= 1 + tol
