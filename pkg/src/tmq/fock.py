"""Truncated two-mode Fock space: the brute-force oracle.

Basis states are ``|n+, n->`` with ``n+`` the major index, so the flat index
is ``n+ * (n_max + 1) + n-`` and two-mode operators are ``kron(A+, A-)``.

Truncated ladder matrices reproduce the exact algebra only away from the
cutoff.  The *trusted subspace* is the box ``n+, n- <= n_max - guard``; any
product of at most ``guard`` ladder operators applied to a trusted state has
exact matrix elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply

from . import algebra

__all__ = [
    "TruncationSpec",
    "TruncationOverflow",
    "FockOperator",
    "FockState",
    "ladder",
    "commutator_fock",
    "lift",
    "vacuum",
    "basis_state",
    "expectation",
    "evolve",
    "squeeze_unitary",
    "squeeze_state",
    "rotate_state",
    "two_mode_squeezed_vacuum",
    "DEFAULT_LEAKAGE_TOL",
]

DEFAULT_LEAKAGE_TOL = 1e-8


class TruncationOverflow(RuntimeError):
    """Raised when a state carries too much weight at the Fock cutoff."""

    def __init__(self, leakage: float, tol: float):
        self.leakage = leakage
        self.tol = tol
        super().__init__(
            f"population at the Fock cutoff is {leakage:.3e} (threshold {tol:.1e}); "
            "increase n_max or reduce the gain"
        )


@dataclass(frozen=True)
class TruncationSpec:
    """Per-mode photon cutoff and guard margin of the trusted subspace."""

    n_max: int = 24
    guard: int = 4

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ValueError(f"n_max must be an integer >= 2, got {self.n_max}")
        if int(self.guard) != self.guard or not 1 <= self.guard < self.n_max:
            raise ValueError(f"guard must satisfy 1 <= guard < n_max, got {self.guard}")

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.levels ** 2

    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        """Photon numbers ``(n+, n-)`` of every basis state, in basis order."""
        n = np.arange(self.levels)
        return np.repeat(n, self.levels), np.tile(n, self.levels)

    def index(self, n_plus: int, n_minus: int) -> int:
        if not (0 <= n_plus <= self.n_max and 0 <= n_minus <= self.n_max):
            raise ValueError(f"|{n_plus},{n_minus}> is outside the truncated space")
        return n_plus * self.levels + n_minus

    def trusted_mask(self, margin: int | None = None) -> np.ndarray:
        cut = self.n_max - (self.guard if margin is None else margin)
        npl, nmi = self.occupations()
        return (npl <= cut) & (nmi <= cut)

    def edge_mask(self) -> np.ndarray:
        npl, nmi = self.occupations()
        return (npl == self.n_max) | (nmi == self.n_max)


@lru_cache(maxsize=None)
def _single_mode_lowering(levels: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: np.ndarray
    trunc: TruncationSpec

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.trunc.dim, self.trunc.dim):
            raise ValueError(f"matrix shape {m.shape} does not match dimension {self.trunc.dim}")
        object.__setattr__(self, "matrix", m)

    def _check(self, other: "FockOperator"):
        if not isinstance(other, FockOperator):
            return NotImplemented
        if other.trunc != self.trunc:
            raise ValueError("operators live on different truncations")

    def dag(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T, self.trunc)

    def __matmul__(self, other):
        self._check(other)
        return FockOperator(self.matrix @ other.matrix, self.trunc)

    def __add__(self, other):
        self._check(other)
        return FockOperator(self.matrix + other.matrix, self.trunc)

    def __sub__(self, other):
        self._check(other)
        return FockOperator(self.matrix - other.matrix, self.trunc)

    def __mul__(self, factor):
        return FockOperator(factor * self.matrix, self.trunc)

    __rmul__ = __mul__

    def __neg__(self):
        return FockOperator(-self.matrix, self.trunc)

    def restrict(self, margin: int | None = None) -> np.ndarray:
        """Block of the matrix acting within the trusted subspace."""
        mask = self.trunc.trusted_mask(margin)
        return self.matrix[np.ix_(mask, mask)]


@dataclass(frozen=True, eq=False)
class FockState:
    vector: np.ndarray
    trunc: TruncationSpec

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        if v.shape != (self.trunc.dim,):
            raise ValueError(f"vector shape {v.shape} does not match dimension {self.trunc.dim}")
        object.__setattr__(self, "vector", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def leakage(self) -> float:
        """Fraction of the norm sitting on states at the cutoff."""
        p = np.abs(self.vector) ** 2
        return float(p[self.trunc.edge_mask()].sum() / p.sum())

    def amplitude(self, n_plus: int, n_minus: int) -> complex:
        return complex(self.vector[self.trunc.index(n_plus, n_minus)])


def ladder(mode: str, kind: str, trunc: TruncationSpec) -> FockOperator:
    """Truncated ``a_mode`` or ``a_mode^dag`` on the two-mode space."""
    a = _single_mode_lowering(trunc.levels)
    if kind == "create":
        a = a.T
    elif kind != "annihilate":
        raise ValueError(f"unknown ladder kind {kind!r}")
    eye = np.eye(trunc.levels)
    if mode in ("plus", "+"):
        m = np.kron(a, eye)
    elif mode in ("minus", "-"):
        m = np.kron(eye, a)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FockOperator(m, trunc)


def commutator_fock(A: FockOperator, B: FockOperator) -> FockOperator:
    return A @ B - B @ A


@lru_cache(maxsize=4096)
def _normal_word(levels: int, k: int, l: int) -> np.ndarray:
    a = _single_mode_lowering(levels)
    return np.linalg.matrix_power(a.T, k) @ np.linalg.matrix_power(a, l)


def lift(form, trunc: TruncationSpec) -> FockOperator:
    """Matrix of an algebraic operator on the truncated space.

    Each normal-ordered monomial is realised as ``kron(a^dag**k a**l,
    a^dag**m a**n)``, the scalar as a multiple of the identity.
    """
    poly = algebra._as_poly(form)
    out = np.zeros((trunc.dim, trunc.dim), dtype=complex)
    for (k, l, m, n), c in poly.terms.items():
        out += c * np.kron(_normal_word(trunc.levels, k, l), _normal_word(trunc.levels, m, n))
    return FockOperator(out, trunc)


def vacuum(trunc: TruncationSpec) -> FockState:
    return basis_state(0, 0, trunc)


def basis_state(n_plus: int, n_minus: int, trunc: TruncationSpec) -> FockState:
    v = np.zeros(trunc.dim, dtype=complex)
    v[trunc.index(n_plus, n_minus)] = 1
    return FockState(v, trunc)


def expectation(state: FockState, op: FockOperator) -> complex:
    if state.trunc != op.trunc:
        raise ValueError("state and operator live on different truncations")
    v = state.vector
    return complex(np.vdot(v, op.matrix @ v))


def _checked(state: FockState, leakage_tol: float) -> FockState:
    leak = state.leakage()
    if leak > leakage_tol:
        raise TruncationOverflow(leak, leakage_tol)
    return state


def evolve(state: FockState, xi: complex, eps: float, t: float,
           leakage_tol: float = DEFAULT_LEAKAGE_TOL) -> FockState:
    """Propagate under ``H = eps (n+ - n-) + i (xi^* a+ a- - xi a+^dag a-^dag)``."""
    H = lift(algebra.hamiltonian(xi, eps), state.trunc).matrix
    out = FockState(expm_multiply(-1j * t * H, state.vector), state.trunc)
    return _checked(out, leakage_tol)


def _squeeze_generator(r: float, phi: float, trunc: TruncationSpec) -> np.ndarray:
    # log S = z a+^dag a-^dag - z^* a+ a-,  z = r e^{i phi}
    ap, am = algebra.ladder_form("plus"), algebra.ladder_form("minus")
    z = r * complex(math.cos(phi), math.sin(phi))
    gen = z * (ap.adjoint() * am.adjoint()) - np.conj(z) * (ap * am)
    return lift(gen, trunc).matrix


def squeeze_unitary(r: float, phi: float, trunc: TruncationSpec,
                    leakage_tol: float = DEFAULT_LEAKAGE_TOL) -> FockOperator:
    """Two-mode squeezer ``exp(z a+^dag a-^dag - z^* a+ a-)`` with ``z = r e^{i phi}``.

    Raises :class:`TruncationOverflow` when the squeezed vacuum already leaks
    past ``leakage_tol`` at the cutoff.
    """
    U = FockOperator(expm(_squeeze_generator(r, phi, trunc)), trunc)
    _checked(FockState(U.matrix[:, 0], trunc), leakage_tol)
    return U


def squeeze_state(state: FockState, r: float, phi: float = 0.0,
                  leakage_tol: float = DEFAULT_LEAKAGE_TOL) -> FockState:
    out = expm_multiply(_squeeze_generator(r, phi, state.trunc), state.vector)
    return _checked(FockState(out, state.trunc), leakage_tol)


def rotate_state(state: FockState, theta: float) -> FockState:
    """Apply ``exp(-i theta N)`` (carrier-phase rotation)."""
    npl, nmi = state.trunc.occupations()
    return FockState(np.exp(-1j * theta * (npl + nmi)) * state.vector, state.trunc)


def two_mode_squeezed_vacuum(r: float, phi: float, trunc: TruncationSpec) -> FockState:
    """Closed-form Schmidt series ``sech r sum (e^{i phi} tanh r)^n |n, n>``.

    Independent of any matrix exponential; truncated at ``n_max`` without
    renormalisation.
    """
    v = np.zeros(trunc.dim, dtype=complex)
    q = complex(math.cos(phi), math.sin(phi)) * math.tanh(r)
    for n in range(trunc.levels):
        v[trunc.index(n, n)] = q ** n / math.cosh(r)
    return FockState(v, trunc)
