"""Broadband fields as independent ``(+eps_k, -eps_k)`` mode pairs.

A continuum of frequency offsets is sampled on a uniform grid of positive
offsets.  Each bin holds a two-mode Gaussian state; the quadrature power
spectral density is the per-bin quadrature power, and the total quadrature
power is its Riemann sum with measure ``d_eps / 2pi``.

Continuum commutators ``2 pi delta(eps - eps')`` correspond to
``(2 pi / d_eps) delta_kj`` for density-normalised bin operators
``X(eps_k) = sqrt(2 pi / d_eps) X_k``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import algebra, gaussian

__all__ = [
    "SpectralGrid",
    "BroadbandState",
    "SpectrumSeries",
    "flat_profile",
    "gaussian_profile",
    "parse_profile",
    "read_profile_csv",
    "broadband_squeeze",
    "spectrum",
    "total_quadrature_power",
    "bin_quadrature",
    "bin_adjoint",
    "bin_commutator",
    "density_commutator",
]


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Uniformly spaced positive frequency offsets with bin width ``d_eps``."""

    bins: np.ndarray
    d_eps: float

    def __post_init__(self):
        bins = np.array(self.bins, dtype=float).reshape(-1)
        if bins.size == 0:
            raise ValueError("spectral grid needs at least one bin")
        if not (self.d_eps > 0 and math.isfinite(self.d_eps)):
            raise ValueError(f"bin width must be positive, got {self.d_eps}")
        if np.any(bins <= 0):
            raise ValueError("frequency offsets must be positive")
        if bins.size > 1:
            steps = np.diff(bins)
            if np.any(steps <= 0):
                raise ValueError("frequency offsets must be strictly increasing")
            if np.max(np.abs(steps - self.d_eps)) > 1e-12 * max(1.0, self.d_eps):
                raise ValueError("frequency offsets must be uniformly spaced by d_eps")
        bins.setflags(write=False)
        object.__setattr__(self, "bins", bins)
        object.__setattr__(self, "d_eps", float(self.d_eps))

    @classmethod
    def uniform(cls, n_bins: int, bandwidth: float) -> "SpectralGrid":
        """Midpoint grid covering ``(0, bandwidth]`` with ``n_bins`` bins."""
        if n_bins < 1:
            raise ValueError("n_bins must be >= 1")
        d = bandwidth / n_bins
        return cls((np.arange(n_bins) + 0.5) * d, d)

    def __len__(self) -> int:
        return self.bins.size

    @property
    def bandwidth(self) -> float:
        return len(self) * self.d_eps


@dataclass(frozen=True, eq=False)
class BroadbandState:
    grid: SpectralGrid
    states: tuple

    def __post_init__(self):
        states = tuple(self.states)
        if len(states) != len(self.grid):
            raise ValueError(f"{len(states)} bin states for a grid of {len(self.grid)} bins")
        for k, s in enumerate(states):
            if not s.is_physical():
                raise gaussian.UnphysicalStateError(f"bin {k} is not a physical state")
        object.__setattr__(self, "states", states)

    @classmethod
    def vacuum(cls, grid: SpectralGrid) -> "BroadbandState":
        return cls(grid, tuple(gaussian.vacuum() for _ in range(len(grid))))


@dataclass(frozen=True)
class SpectrumSeries:
    """Per-bin ``(eps_k, <G11>, <G22>, <G12>)``."""

    eps: np.ndarray
    g11: np.ndarray
    g22: np.ndarray
    g12: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("g11", "g22", "g12"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite {name} density")

    @property
    def points(self) -> list[tuple[float, float, float, float]]:
        return list(zip(*(np.asarray(a).tolist() for a in (self.eps, self.g11, self.g22, self.g12))))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps_rad_per_s", "g11", "g22", "g12"])
        for row in self.points:
            w.writerow([f"{v:.17g}" for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [dict(zip(("eps_rad_per_s", "g11", "g22", "g12"), p)) for p in self.points]
        return json.dumps({"metadata": self.metadata, "points": rows}, indent=2)


def flat_profile(grid: SpectralGrid, r0: float) -> np.ndarray:
    return np.full(len(grid), float(r0))


def gaussian_profile(grid: SpectralGrid, r0: float, sigma: float) -> np.ndarray:
    """``r0 exp(-eps^2 / (2 sigma^2))``."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return r0 * np.exp(-grid.bins ** 2 / (2 * sigma ** 2))


_PROFILE_RE = re.compile(r"^\s*(flat|gaussian)\s*\(([^)]*)\)\s*$")


def parse_profile(spec: str, grid: SpectralGrid) -> np.ndarray:
    """Evaluate an inline profile such as ``flat(0.3)`` or ``gaussian(0.5, 2.0)``."""
    m = _PROFILE_RE.match(spec)
    if not m:
        raise ValueError(f"cannot parse profile {spec!r}; expected flat(r0) or gaussian(r0, sigma)")
    args = [float(a) for a in m.group(2).split(",") if a.strip()]
    if m.group(1) == "flat":
        if len(args) != 1:
            raise ValueError("flat(r0) takes one argument")
        return flat_profile(grid, *args)
    if len(args) != 2:
        raise ValueError("gaussian(r0, sigma) takes two arguments")
    return gaussian_profile(grid, *args)


def read_profile_csv(path: str | Path) -> tuple[SpectralGrid, np.ndarray]:
    """Read a ``eps,r`` table; the offsets define the grid."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].lstrip().startswith("#")]
    try:
        data = np.array([[float(v) for v in row[:2]] for row in rows])
    except ValueError:
        data = np.array([[float(v) for v in row[:2]] for row in rows[1:]])
    if data.ndim != 2 or data.shape[0] == 0:
        raise ValueError(f"no profile rows in {path}")
    eps, r = data[:, 0], data[:, 1]
    d_eps = float(eps[1] - eps[0]) if eps.size > 1 else 2 * float(eps[0])
    return SpectralGrid(eps, d_eps), r


def broadband_squeeze(state: BroadbandState, profile: Sequence[float], phi: float = 0.0) -> BroadbandState:
    """Squeeze bin ``k`` by ``profile[k]`` with common pump phase ``phi``."""
    profile = np.asarray(profile, dtype=float).reshape(-1)
    if profile.size != len(state.grid):
        raise ValueError(f"profile has {profile.size} samples for {len(state.grid)} bins")
    new = tuple(gaussian.apply_squeeze(s, r, phi) for s, r in zip(state.states, profile))
    return BroadbandState(state.grid, new)


def spectrum(state: BroadbandState, theta: float = 0.0) -> SpectrumSeries:
    powers = np.array([gaussian.quadrature_powers(s, theta) for s in state.states])
    return SpectrumSeries(state.grid.bins.copy(), powers[:, 0], powers[:, 1], powers[:, 2],
                          metadata={"d_eps": state.grid.d_eps, "theta": theta})


def total_quadrature_power(state: BroadbandState, i: int, theta: float = 0.0) -> float:
    """Riemann sum ``sum_k <Gii(eps_k)> d_eps / 2pi``."""
    if i not in (1, 2):
        raise ValueError("quadrature index must be 1 or 2")
    density = np.array([gaussian.quadrature_powers(s, theta)[i - 1] for s in state.states])
    return float(density.sum() * state.grid.d_eps / (2 * math.pi))


def bin_quadrature(k: int, which: str, n_bins: int, theta: float = 0.0) -> np.ndarray:
    """Coefficients of a single-bin quadrature over the ``4 * n_bins`` ladder basis."""
    if not 0 <= k < n_bins:
        raise IndexError(f"bin {k} outside 0..{n_bins - 1}")
    c = np.zeros(4 * n_bins, dtype=complex)
    c[4 * k: 4 * k + 4] = algebra.make_quadrature(which, theta).c
    return c


def bin_adjoint(c: np.ndarray) -> np.ndarray:
    c = np.conj(np.asarray(c, dtype=complex)).reshape(-1, 2)
    return c[:, ::-1].reshape(-1)


def bin_commutator(a: np.ndarray, b: np.ndarray) -> complex:
    """Scalar commutator of two linear forms over independent bins."""
    n = len(a) // 4
    omega = np.kron(np.eye(n), algebra.COMMUTATOR_MATRIX)
    return complex(np.asarray(a) @ omega @ np.asarray(b))


def density_commutator(grid: SpectralGrid, k: int, j: int) -> complex:
    """``[X1(eps_k), X2(eps_j)^dag]`` for density-normalised bin operators: ``i (2pi/d_eps) delta_kj``."""
    scale = 2 * math.pi / grid.d_eps
    a = bin_quadrature(k, "X1", len(grid))
    b = bin_adjoint(bin_quadrature(j, "X2", len(grid)))
    return scale * bin_commutator(a, b)
