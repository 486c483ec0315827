"""Exact two-mode operator algebra.

Operators are polynomials in the four ladder symbols ordered as the basis
``(a+, a+^dag, a-, a-^dag)``.  Every operator is stored normal ordered
(creators to the left within each mode); since the two modes commute, a
normal-ordered monomial is fully described by its four exponents

    a+^dag**k  a+**l  a-^dag**m  a-**n   ->   key (k, l, m, n)

Three views share that representation:

* :class:`LinearForm` -- a 4-vector of coefficients (the complex quadratures,
  EPR variables, single-mode ``x``/``y``),
* :class:`QuadraticForm` -- a canonical 4x4 coefficient matrix plus scalar
  (quadrature powers, SU(1,1)/SU(2) generators, Hamiltonians),
* :class:`NormalOrdered` -- anything else (e.g. the quartic Casimir).

Arithmetic between any of them goes through :class:`NormalOrdered` and the
result is demoted back to the simplest view that holds it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Union

import numpy as np

__all__ = [
    "BASIS",
    "COMMUTATOR_MATRIX",
    "NormalOrdered",
    "LinearForm",
    "QuadraticForm",
    "CommutatorResult",
    "ladder_form",
    "single_mode_quadrature",
    "make_quadrature",
    "adjoint",
    "commute",
    "commutator",
    "commute_quadratic",
    "gamma",
    "delta",
    "number",
    "number_difference",
    "su11_generators",
    "su2_generators",
    "casimir",
    "gamma_determinant",
    "hamiltonian",
    "pair_hamiltonian",
    "power_hamiltonian",
    "squeeze_map",
    "rotation_map",
    "heisenberg",
    "squeeze_transform",
    "rotate_transform",
    "degenerate_limit",
    "form_to_dict",
    "form_from_dict",
    "form_to_json",
    "form_from_json",
]

BASIS = ("a+", "a+^dag", "a-", "a-^dag")

# [b_i, b_j] for the ordered basis.
COMMUTATOR_MATRIX = np.array(
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=complex
)

# basis index -> exponent key of the bare ladder operator
_SYMBOL_KEY = {0: (0, 1, 0, 0), 1: (1, 0, 0, 0), 2: (0, 0, 0, 1), 3: (0, 0, 1, 0)}

# normal-ordered position of each degree-2 monomial in the canonical matrix
_PAIR_POSITION = {
    (1, 1, 0, 0): (1, 0),
    (2, 0, 0, 0): (1, 1),
    (0, 2, 0, 0): (0, 0),
    (0, 0, 1, 1): (3, 2),
    (0, 0, 2, 0): (3, 3),
    (0, 0, 0, 2): (2, 2),
    (1, 0, 1, 0): (1, 3),
    (1, 0, 0, 1): (1, 2),
    (0, 1, 1, 0): (3, 0),
    (0, 1, 0, 1): (0, 2),
}
_POSITION_KEY = {pos: key for key, pos in _PAIR_POSITION.items()}
_NON_CANONICAL = [(i, j) for i in range(4) for j in range(4) if (i, j) not in _POSITION_KEY]

Scalar = Union[int, float, complex]


def _mode_product(k: int, l: int, p: int, q: int):
    """Normal order ``(a^dag**k a**l)(a^dag**p a**q)`` for one mode."""
    for j in range(min(l, p) + 1):
        yield math.comb(l, j) * math.comb(p, j) * math.factorial(j), k + p - j, l + q - j


@dataclass(frozen=True, eq=False)
class NormalOrdered:
    """Normal-ordered polynomial in the two-mode ladder operators.

    ``terms`` maps exponent keys ``(k, l, m, n)`` to complex coefficients; the
    key ``(0, 0, 0, 0)`` is the scalar part.
    """

    terms: Mapping[tuple, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(int(e) for e in k): complex(v) for k, v in self.terms.items() if v != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def scalar(cls, value: Scalar) -> "NormalOrdered":
        return cls({(0, 0, 0, 0): value})

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def degrees(self) -> set:
        return {sum(k) for k in self.terms}

    def to_poly(self) -> "NormalOrdered":
        return self

    def adjoint(self) -> "NormalOrdered":
        return NormalOrdered({(l, k, n, m): c.conjugate() for (k, l, m, n), c in self.terms.items()})

    def _add(self, other: "NormalOrdered", sign: int = 1) -> "NormalOrdered":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + sign * c
        return NormalOrdered(out)

    def _mul(self, other: "NormalOrdered") -> "NormalOrdered":
        out: dict = {}
        for (k1, l1, m1, n1), c1 in self.terms.items():
            for (k2, l2, m2, n2), c2 in other.terms.items():
                plus = list(_mode_product(k1, l1, k2, l2))
                minus = list(_mode_product(m1, n1, m2, n2))
                for wp, k, l in plus:
                    for wm, m, n in minus:
                        key = (k, l, m, n)
                        out[key] = out.get(key, 0) + c1 * c2 * wp * wm
        return NormalOrdered(out)

    def scaled(self, factor: Scalar) -> "NormalOrdered":
        return NormalOrdered({k: factor * c for k, c in self.terms.items()})

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def isclose(self, other, atol: float = 1e-12) -> bool:
        diff = self._add(_as_poly(other), -1)
        return diff.max_abs() <= atol

    def __repr__(self) -> str:
        if not self.terms:
            return "NormalOrdered(0)"
        parts = []
        for (k, l, m, n), c in sorted(self.terms.items()):
            word = " ".join(
                f"{s}^{e}" if e > 1 else s
                for s, e in zip(("a+^dag", "a+", "a-^dag", "a-"), (k, l, m, n))
                if e
            )
            parts.append(f"({c:.6g}){(' ' + word) if word else ''}")
        return "NormalOrdered(" + " + ".join(parts) + ")"

    # arithmetic shared by every view
    __add__ = lambda self, other: _binary(self, other, "add")  # noqa: E731
    __radd__ = lambda self, other: _binary(other, self, "add")  # noqa: E731
    __sub__ = lambda self, other: _binary(self, other, "sub")  # noqa: E731
    __rsub__ = lambda self, other: _binary(other, self, "sub")  # noqa: E731
    __mul__ = lambda self, other: _binary(self, other, "mul")  # noqa: E731
    __rmul__ = lambda self, other: _binary(other, self, "mul")  # noqa: E731

    def __neg__(self):
        return _demote(self.to_poly().scaled(-1))

    def __truediv__(self, value: Scalar):
        return _demote(self.to_poly().scaled(1 / value))

    def __eq__(self, other) -> bool:
        try:
            return self.isclose(other, atol=0.0)
        except TypeError:
            return NotImplemented

    __hash__ = None


class LinearForm(NormalOrdered):
    """Linear combination ``sum_i c[i] b_i`` of the four ladder symbols."""

    def __init__(self, c: Iterable[Scalar], label: str | None = None):
        c = np.array(c, dtype=complex).reshape(4)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "label", label)
        super().__init__({_SYMBOL_KEY[i]: c[i] for i in range(4)})

    def adjoint(self) -> "LinearForm":
        c = self.c.conj()
        return LinearForm([c[1], c[0], c[3], c[2]], label=f"{self.label}^dag" if self.label else None)

    def __repr__(self) -> str:
        name = f"{self.label}: " if self.label else ""
        return f"LinearForm({name}{np.array2string(self.c, precision=6)})"


class QuadraticForm(NormalOrdered):
    """Quadratic operator ``sum_ij M[i, j] b_i b_j + s``.

    The matrix is canonicalised on construction: every entry whose product
    ``b_i b_j`` is not normal ordered is moved to the mirrored position and
    the commutator goes into the scalar.  Two forms are equal iff their
    canonical ``(M, s)`` agree.
    """

    def __init__(self, M, s: Scalar = 0.0, label: str | None = None):
        M = np.array(M, dtype=complex).reshape(4, 4).copy()
        s = complex(s)
        for i, j in _NON_CANONICAL:
            if M[i, j] != 0:
                M[j, i] += M[i, j]
                s += M[i, j] * COMMUTATOR_MATRIX[i, j]
                M[i, j] = 0
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "label", label)
        terms = {_POSITION_KEY[(i, j)]: M[i, j] for (i, j) in _POSITION_KEY}
        terms[(0, 0, 0, 0)] = s
        super().__init__(terms)

    @classmethod
    def from_poly(cls, poly: NormalOrdered, label: str | None = None) -> "QuadraticForm":
        M = np.zeros((4, 4), dtype=complex)
        s = 0j
        for key, c in poly.terms.items():
            deg = sum(key)
            if deg == 0:
                s += c
            elif deg == 2:
                M[_PAIR_POSITION[key]] += c
            else:
                raise ValueError(f"monomial of degree {deg} cannot live in a QuadraticForm")
        return cls(M, s, label=label)

    def adjoint(self) -> "QuadraticForm":
        return QuadraticForm.from_poly(NormalOrdered.adjoint(self))

    def normal_part(self) -> "QuadraticForm":
        """The form with its scalar dropped, i.e. ``:Q:``."""
        return QuadraticForm(self.M, 0.0)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return self.isclose(self.adjoint(), atol=atol)

    def __repr__(self) -> str:
        name = f"{self.label}: " if self.label else ""
        body = NormalOrdered.__repr__(NormalOrdered(self.terms))[len("NormalOrdered("):-1]
        return f"QuadraticForm({name}{body})"


Form = Union[LinearForm, QuadraticForm, NormalOrdered]


def _as_poly(x) -> NormalOrdered:
    if isinstance(x, NormalOrdered):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return NormalOrdered.scalar(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an operator")


def _demote(poly: NormalOrdered):
    """Return the simplest view of ``poly``."""
    degrees = poly.degrees()
    if degrees and degrees <= {1}:
        c = np.zeros(4, dtype=complex)
        for i, key in _SYMBOL_KEY.items():
            c[i] = poly.terms.get(key, 0)
        return LinearForm(c)
    if degrees <= {0, 2}:
        return QuadraticForm.from_poly(poly)
    return NormalOrdered(poly.terms)


def _binary(a, b, op: str):
    scalar_a = isinstance(a, (int, float, complex, np.number))
    scalar_b = isinstance(b, (int, float, complex, np.number))
    if op == "mul" and (scalar_a or scalar_b):
        factor, form = (a, b) if scalar_a else (b, a)
        return _demote(_as_poly(form).scaled(factor))
    pa, pb = _as_poly(a), _as_poly(b)
    if op == "add":
        return _demote(pa._add(pb))
    if op == "sub":
        return _demote(pa._add(pb, -1))
    return _demote(pa._mul(pb))


# ---------------------------------------------------------------------------
# elementary operators
# ---------------------------------------------------------------------------

_MODE_OFFSET = {"plus": 0, "minus": 2, "+": 0, "-": 2}


def ladder_form(mode: str, kind: str = "annihilate") -> LinearForm:
    """``a_mode`` (``kind='annihilate'``) or its adjoint as a LinearForm."""
    c = np.zeros(4, dtype=complex)
    idx = _MODE_OFFSET[mode] + (1 if kind == "create" else 0)
    if kind not in ("annihilate", "create"):
        raise ValueError(f"unknown ladder kind {kind!r}")
    c[idx] = 1
    sign = "+" if _MODE_OFFSET[mode] == 0 else "-"
    return LinearForm(c, label=f"a{sign}{'^dag' if kind == 'create' else ''}")


def single_mode_quadrature(mode: str, which: str) -> LinearForm:
    """Single-mode ``x = (a + a^dag)/sqrt2`` or ``y = (a - a^dag)/(sqrt2 i)``."""
    a = ladder_form(mode)
    ad = ladder_form(mode, "create")
    sign = "+" if _MODE_OFFSET[mode] == 0 else "-"
    if which == "x":
        out = (a + ad) / math.sqrt(2)
    elif which == "y":
        out = (a - ad) / (math.sqrt(2) * 1j)
    else:
        raise ValueError(f"unknown quadrature {which!r}")
    return LinearForm(out.c, label=f"{which}{sign}")


def _epr_components():
    xp, yp = single_mode_quadrature("plus", "x"), single_mode_quadrature("plus", "y")
    xm, ym = single_mode_quadrature("minus", "x"), single_mode_quadrature("minus", "y")
    r2 = math.sqrt(2)
    return {
        "chi1": (xp + xm) / r2,
        "gamma1": (yp - ym) / r2,
        "chi2": (yp + ym) / r2,
        "gamma2": -(xp - xm) / r2,
    }


def make_quadrature(which: str, theta: float = 0.0) -> LinearForm:
    """Complex quadrature or EPR component rotated by the carrier phase ``theta``.

    ``which`` is one of ``X1, X2, chi1, gamma1, chi2, gamma2``.  ``X1, X2`` are
    built from the ladder operators and the EPR components from the
    single-mode ``x``/``y``, so the relation ``X = (chi + i gamma)/sqrt2``
    is a genuine check rather than a definition.
    """
    c, s = math.cos(theta), math.sin(theta)
    if which in ("X1", "X2"):
        ap = ladder_form("plus")
        amd = ladder_form("minus", "create")
        x1 = (ap + amd) / math.sqrt(2)
        x2 = (ap - amd) / (math.sqrt(2) * 1j)
        out = c * x1 + s * x2 if which == "X1" else -s * x1 + c * x2
    elif which in ("chi1", "gamma1", "chi2", "gamma2"):
        comp = _epr_components()
        kind = which[:-1]
        one, two = comp[kind + "1"], comp[kind + "2"]
        out = c * one + s * two if which.endswith("1") else -s * one + c * two
    else:
        raise ValueError(f"unknown quadrature {which!r}")
    return LinearForm(out.c, label=which if theta == 0 else f"{which}({theta:g})")


def adjoint(form: Form) -> Form:
    return form.adjoint()


def commute(A: LinearForm, B: LinearForm) -> complex:
    """Scalar commutator ``[A, B]`` of two linear forms."""
    return complex(A.c @ COMMUTATOR_MATRIX @ B.c)


def commutator(A, B):
    """``AB - BA`` for any two operators, demoted to the simplest view."""
    pa, pb = _as_poly(A), _as_poly(B)
    return _demote(pa._mul(pb)._add(pb._mul(pa), -1))


class CommutatorResult(NamedTuple):
    kind: str  # "scalar", "linear" or "quadratic"
    value: object


def commute_quadratic(A: Form, B: Form) -> CommutatorResult:
    """Commutator of two forms of degree at most two.

    Quadratic (and linear) operators close under commutation, so the result
    is again at most quadratic.  Higher-degree inputs are rejected.
    """
    for x in (A, B):
        if _as_poly(x).degree > 2:
            raise ValueError("commute_quadratic accepts forms of degree <= 2 only")
    value = commutator(A, B)
    poly = _as_poly(value)
    if poly.degrees() <= {0}:
        return CommutatorResult("scalar", poly.terms.get((0, 0, 0, 0), 0j))
    if isinstance(value, LinearForm):
        return CommutatorResult("linear", value)
    return CommutatorResult("quadratic", value)


# ---------------------------------------------------------------------------
# quadratic observables
# ---------------------------------------------------------------------------

def gamma(i: int, j: int, theta: float = 0.0) -> QuadraticForm:
    """Quadrature power (``i == j``) or coherence element ``(Xi^dag Xj + Xj^dag Xi)/2``."""
    Xi, Xj = make_quadrature(f"X{i}", theta), make_quadrature(f"X{j}", theta)
    out = (Xi.adjoint() * Xj + Xj.adjoint() * Xi) / 2
    return QuadraticForm(out.M, out.s, label=f"Gamma{i}{j}")


def delta(i: int, j: int, theta: float = 0.0) -> QuadraticForm:
    """Antisymmetric companion ``(Xi^dag Xj - Xj^dag Xi)/(2i)``."""
    Xi, Xj = make_quadrature(f"X{i}", theta), make_quadrature(f"X{j}", theta)
    out = (Xi.adjoint() * Xj - Xj.adjoint() * Xi) / 2j
    return QuadraticForm(out.M, out.s, label=f"Delta{i}{j}")


def _n(mode: str) -> QuadraticForm:
    return ladder_form(mode, "create") * ladder_form(mode)


def number() -> QuadraticForm:
    out = _n("plus") + _n("minus")
    return QuadraticForm(out.M, out.s, label="N")


def number_difference() -> QuadraticForm:
    out = _n("plus") - _n("minus")
    return QuadraticForm(out.M, out.s, label="dN")


def su11_generators() -> tuple[QuadraticForm, QuadraticForm, QuadraticForm]:
    """``K1 = (G11 - G22)/2``, ``K2 = G12``, ``K3 = (G11 + G22)/2``."""
    g11, g22, g12 = gamma(1, 1), gamma(2, 2), gamma(1, 2)
    k1 = (g11 - g22) / 2
    k3 = (g11 + g22) / 2
    return (
        QuadraticForm(k1.M, k1.s, label="K1"),
        QuadraticForm(g12.M, g12.s, label="K2"),
        QuadraticForm(k3.M, k3.s, label="K3"),
    )


def su2_generators() -> tuple[QuadraticForm, QuadraticForm, QuadraticForm]:
    """Schwinger generators ``J1, J2, J3`` of mode exchange."""
    ap, am = ladder_form("plus"), ladder_form("minus")
    apd, amd = ap.adjoint(), am.adjoint()
    j1 = (apd * am + amd * ap) / 2
    j2 = (apd * am - amd * ap) * (-0.5j)
    j3 = (apd * ap - amd * am) / 2
    return tuple(QuadraticForm(j.M, j.s, label=f"J{k}") for k, j in enumerate((j1, j2, j3), 1))


def casimir() -> NormalOrdered:
    """``K3^2 - K1^2 - K2^2`` (quartic)."""
    k1, k2, k3 = su11_generators()
    return k3 * k3 - k1 * k1 - k2 * k2


def gamma_determinant() -> NormalOrdered:
    """Operator determinant ``(G11 G22 + G22 G11)/2 - G12^2``."""
    g11, g22, g12 = gamma(1, 1), gamma(2, 2), gamma(1, 2)
    return (g11 * g22 + g22 * g11) / 2 - g12 * g12


def hamiltonian(xi: complex, eps: float = 0.0) -> QuadraticForm:
    """Detuned parametric Hamiltonian (hbar = 1).

    ``H = eps (n+ - n-) + i (xi^* a+ a- - xi a+^dag a-^dag)``
    """
    ap, am = ladder_form("plus"), ladder_form("minus")
    pump = 1j * (np.conj(xi) * (ap * am) - xi * (ap.adjoint() * am.adjoint()))
    out = eps * number_difference() + pump
    return QuadraticForm(out.M, out.s, label="H")


def pair_hamiltonian(xi: complex) -> QuadraticForm:
    """Interaction ``i (xi a+ a- - xi^* a+^dag a-^dag)``."""
    ap, am = ladder_form("plus"), ladder_form("minus")
    out = 1j * (xi * (ap * am) - np.conj(xi) * (ap.adjoint() * am.adjoint()))
    return QuadraticForm(out.M, out.s, label="H_pair")


def power_hamiltonian(magnitude: float, theta: float) -> QuadraticForm:
    """``-2|r| [K1 sin(theta) - K2 cos(theta)]``.

    Equal to ``pair_hamiltonian(-magnitude * exp(-1j * theta))``.
    """
    k1, k2, _ = su11_generators()
    out = -2 * magnitude * (math.sin(theta) * k1 - math.cos(theta) * k2)
    return QuadraticForm(out.M, out.s, label="H_power")


# ---------------------------------------------------------------------------
# Heisenberg-picture substitutions
# ---------------------------------------------------------------------------

def squeeze_map(r: float, phi: float = 0.0) -> np.ndarray:
    """Rows give ``S^dag b_i S`` for the two-mode squeezer.

    ``a+ -> a+ cosh r + exp(i phi) a-^dag sinh r`` and symmetrically for ``a-``.
    """
    c, s = math.cosh(r), math.sinh(r)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array(
        [
            [c, 0, 0, e * s],
            [0, c, np.conj(e) * s, 0],
            [0, e * s, c, 0],
            [np.conj(e) * s, 0, 0, c],
        ],
        dtype=complex,
    )


def rotation_map(theta: float) -> np.ndarray:
    """Carrier-phase rotation ``a -> a exp(-i theta)`` on both modes."""
    e = complex(math.cos(theta), -math.sin(theta))
    return np.diag([e, e.conjugate(), e, e.conjugate()])


def heisenberg(form: Form, T: np.ndarray):
    """Substitute ``b_i -> sum_j T[i, j] b_j`` into ``form``."""
    T = np.asarray(T, dtype=complex)
    if isinstance(form, LinearForm):
        return LinearForm(T.T @ form.c)
    if isinstance(form, QuadraticForm):
        return QuadraticForm(T.T @ form.M @ T, form.s)
    images = {i: LinearForm(T[i]) for i in range(4)}
    out = NormalOrdered()
    for (k, l, m, n), c in _as_poly(form).terms.items():
        term = NormalOrdered.scalar(c)
        for idx, power in ((1, k), (0, l), (3, m), (2, n)):
            for _ in range(power):
                term = term._mul(images[idx])
        out = out._add(term)
    return _demote(out)


def squeeze_transform(form: Form, r: float, phi: float = 0.0):
    """``S(r e^{i phi})^dag F S(r e^{i phi})``, exactly."""
    return heisenberg(form, squeeze_map(r, phi))


def rotate_transform(form: Form, theta: float):
    """``R(theta)^dag F R(theta)``; maps ``X1`` to ``X1(theta)``."""
    return heisenberg(form, rotation_map(theta))


def degenerate_limit(form: LinearForm) -> np.ndarray:
    """Coefficients over ``(a, a^dag)`` after identifying ``a- = a+``."""
    return np.array([form.c[0] + form.c[2], form.c[1] + form.c[3]])


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def form_to_dict(form: Form) -> dict:
    """Serialisable description of a form (basis labels, coefficients, scalar)."""
    label = getattr(form, "label", None)
    if isinstance(form, LinearForm):
        return {"kind": "linear", "basis": list(BASIS), "label": label,
                "coefficients": [_pair(z) for z in form.c]}
    if isinstance(form, QuadraticForm):
        return {"kind": "quadratic", "basis": list(BASIS), "label": label,
                "coefficients": [[_pair(z) for z in row] for row in form.M],
                "scalar": _pair(form.s)}
    return {"kind": "polynomial", "basis": list(BASIS),
            "exponent_order": ["a+^dag", "a+", "a-^dag", "a-"],
            "terms": [[list(k), _pair(c)] for k, c in sorted(form.terms.items())]}


def form_from_dict(data: dict) -> Form:
    if data.get("basis", list(BASIS)) != list(BASIS):
        raise ValueError(f"unexpected basis {data.get('basis')}")
    kind = data["kind"]
    if kind == "linear":
        return LinearForm([complex(*p) for p in data["coefficients"]], label=data.get("label"))
    if kind == "quadratic":
        M = [[complex(*p) for p in row] for row in data["coefficients"]]
        return QuadraticForm(M, complex(*data.get("scalar", (0.0, 0.0))), label=data.get("label"))
    if kind == "polynomial":
        return NormalOrdered({tuple(k): complex(*p) for k, p in data["terms"]})
    raise ValueError(f"unknown form kind {kind!r}")


def form_to_json(form: Form, **kwargs) -> str:
    return json.dumps(form_to_dict(form), **kwargs)


def form_from_json(text: str) -> Form:
    return form_from_dict(json.loads(text))
