"""Oracle-versus-algebra invariant suite.

:func:`run_verification` evaluates every exact identity of :mod:`tmq.algebra`
on the truncated Fock oracle, cross-checks the Gaussian engine, and measures
the known discrepancies between printed closed forms and exact results (see
``ERRATA.md`` shipped with the package).  The report is plain data and
serialises to JSON.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Callable, Sequence

import numpy as np

from . import algebra, fock, gaussian, interferometer

__all__ = [
    "Check",
    "ErratumMeasurement",
    "VerificationReport",
    "errata_document",
    "exact_commutator_table",
    "measure_errata",
    "realise_sequence",
    "run_verification",
]

log = logging.getLogger(__name__)

ALGEBRA_TOL = 1e-12
LIFT_TOL = 1e-9
ORACLE_TOL = 1e-6
CONSERVATION_TOL = 1e-8
FRINGE_TOL = 1e-4
ERRATA_TOL = 1e-6


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    detail: str = ""

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


@dataclass
class ErratumMeasurement:
    """A printed value next to the oracle measurement and the exact value."""

    id: str
    quantity: str
    printed: float
    measured: float
    exact: float
    tolerance: float = ERRATA_TOL

    def __post_init__(self):
        for name in ("printed", "measured", "exact", "tolerance"):
            setattr(self, name, float(getattr(self, name)))

    @property
    def confirmed(self) -> bool:
        # the oracle reproduces the exact value and rules out the printed one
        return (abs(self.measured - self.exact) <= self.tolerance
                and abs(self.measured - self.printed) > 10 * self.tolerance)

    def to_dict(self) -> dict:
        return {**asdict(self), "confirmed": self.confirmed}


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    errata: list[ErratumMeasurement] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(e.confirmed for e in self.errata)

    def failures(self) -> list[str]:
        out = [f"{c.name}: residual {c.residual:.3e} > {c.tolerance:.1e}" for c in self.checks if not c.passed]
        out += [f"erratum {e.id}: measured {e.measured:.9g}, exact {e.exact:.9g}, printed {e.printed:.9g}"
                for e in self.errata if not e.confirmed]
        return out

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def erratum(self, id: str) -> ErratumMeasurement:
        for e in self.errata:
            if e.id == id:
                return e
        raise KeyError(id)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "errata": [e.to_dict() for e in self.errata],
            "errata_document": errata_document_path(),
            "failures": self.failures(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def errata_document() -> str:
    """Text of the errata table shipped with the package."""
    return resources.files("tmq").joinpath("ERRATA.md").read_text(encoding="utf-8")


def errata_document_path() -> str:
    return str(resources.files("tmq").joinpath("ERRATA.md"))


# ---------------------------------------------------------------------------
# exact tables
# ---------------------------------------------------------------------------

def exact_commutator_table() -> list[tuple[str, object, object, object]]:
    """``(name, A, B, expected [A, B])`` for every closed-form commutator.

    The EPR cross relations ``[chi_i, gamma_j]`` are left out: they vanish
    and are measured separately as an erratum.
    """
    X1, X2 = algebra.make_quadrature("X1"), algebra.make_quadrature("X2")
    chi1, chi2 = algebra.make_quadrature("chi1"), algebra.make_quadrature("chi2")
    gam1, gam2 = algebra.make_quadrature("gamma1"), algebra.make_quadrature("gamma2")
    g11, g22, g12 = algebra.gamma(1, 1), algebra.gamma(2, 2), algebra.gamma(1, 2)
    k1, k2, k3 = algebra.su11_generators()
    j1, j2, j3 = algebra.su2_generators()
    d21 = algebra.delta(2, 1)
    zero = algebra.NormalOrdered()
    one = algebra.NormalOrdered.scalar(1.0)
    return [
        ("[X1,X2^dag]=i", X1, X2.adjoint(), 1j * one),
        ("[X1^dag,X2]=i", X1.adjoint(), X2, 1j * one),
        ("[X1,X1^dag]=0", X1, X1.adjoint(), zero),
        ("[X2,X2^dag]=0", X2, X2.adjoint(), zero),
        ("[X1,X2]=0", X1, X2, zero),
        ("[chi1,chi2]=i", chi1, chi2, 1j * one),
        ("[gamma1,gamma2]=i", gam1, gam2, 1j * one),
        ("[G11,G22]=2iG12", g11, g22, 2j * g12),
        ("[G11,G12]=iG11", g11, g12, 1j * g11),
        ("[G22,G12]=-iG22", g22, g12, -1j * g22),
        ("[K1,K2]=iK3", k1, k2, 1j * k3),
        ("[K2,K3]=-iK1", k2, k3, -1j * k1),
        ("[K3,K1]=-iK2", k3, k1, -1j * k2),
        ("[J1,J2]=iJ3", j1, j2, 1j * j3),
        ("[J2,J3]=iJ1", j2, j3, 1j * j1),
        ("[J3,J1]=iJ2", j3, j1, 1j * j2),
        ("[D21,G11]=0", d21, g11, zero),
        ("[D21,G22]=0", d21, g22, zero),
        ("[D21,G12]=0", d21, g12, zero),
    ]


def _algebra_residual(A, B, expected) -> float:
    diff = algebra._as_poly(algebra.commutator(A, B))._add(algebra._as_poly(expected), -1)
    return diff.max_abs()


def _identity_residuals() -> dict[str, float]:
    """Exact identities that are not commutators."""
    X1, X2 = algebra.make_quadrature("X1"), algebra.make_quadrature("X2")
    out = {}
    out["casimir=det(Gamma)"] = (algebra._as_poly(algebra.casimir())
                                 ._add(algebra._as_poly(algebra.gamma_determinant()), -1)).max_abs()
    dn = algebra.number_difference()
    casimir_dn = (dn * dn - algebra.NormalOrdered.scalar(1.0)) / 4
    out["casimir=(dN^2-1)/4"] = (algebra._as_poly(algebra.casimir())
                                 ._add(algebra._as_poly(casimir_dn), -1)).max_abs()
    theta = 0.7
    xi = -0.35 * complex(math.cos(theta), -math.sin(theta))
    out["H_pair=-2|r|(K1 sin-K2 cos)"] = (algebra.pair_hamiltonian(xi)
                                          - algebra.power_hamiltonian(0.35, theta)).max_abs()
    trace = algebra.gamma(1, 1).normal_part() + algebra.gamma(2, 2).normal_part()
    out[":tr Gamma:=N"] = (trace - algebra.number()).max_abs()
    out["X1(pi/2)=X2"] = float(np.max(np.abs(algebra.make_quadrature("X1", math.pi / 2).c - X2.c)))
    r = 0.37
    out["S^dag X1 S=e^r X1"] = (algebra.squeeze_transform(X1, r) - math.exp(r) * X1).max_abs()
    out["S^dag X2 S=e^-r X2"] = (algebra.squeeze_transform(X2, r) - math.exp(-r) * X2).max_abs()
    g11, g22, g12 = algebra.gamma(1, 1), algebra.gamma(2, 2), algebra.gamma(1, 2)
    out["S^dag G11 S=e^2r G11"] = (algebra.squeeze_transform(g11, r) - math.exp(2 * r) * g11).max_abs()
    out["S^dag G22 S=e^-2r G22"] = (algebra.squeeze_transform(g22, r) - math.exp(-2 * r) * g22).max_abs()
    out["S^dag G12 S=G12"] = (algebra.squeeze_transform(g12, r) - g12).max_abs()
    for th in (0.3, 1.1, 2.9):
        c = algebra.commute(algebra.make_quadrature("X1", th), algebra.make_quadrature("X2", th).adjoint())
        out[f"[X1({th}),X2({th})^dag]=i"] = abs(c - 1j)
    return out


# ---------------------------------------------------------------------------
# oracle helpers
# ---------------------------------------------------------------------------

def _lifted_commutator_residual(A, B, expected, trunc: fock.TruncationSpec) -> float:
    mask = trunc.trusted_mask()
    a, b = fock.lift(A, trunc).matrix, fock.lift(B, trunc).matrix
    c = fock.lift(expected, trunc).matrix
    # rows and columns restricted to the trusted box; inner index runs over all states
    comm = a[mask] @ b[:, mask] - b[mask] @ a[:, mask]
    scale = max(1.0, float(np.abs(comm).max()))
    return float(np.abs(comm - c[np.ix_(mask, mask)]).max() / scale)


def _probe_margin(trunc: fock.TruncationSpec) -> int:
    # The squeezer couples every level, so truncation errors in exp() reach
    # far into the space.  Transform identities are probed on the low-lying
    # box n+, n- <= 3, where they are exact to well below 1e-6 for r <= 0.5.
    return max(trunc.guard, trunc.n_max - 3)


def _transform_residual(form, factor: float, U: np.ndarray, trunc: fock.TruncationSpec) -> float:
    F = fock.lift(form, trunc).matrix
    mask = trunc.trusted_mask(_probe_margin(trunc))
    lhs = (U.conj().T @ F @ U)[np.ix_(mask, mask)]
    return float(np.abs(lhs - factor * F[np.ix_(mask, mask)]).max())


def _expect(state: fock.FockState, form) -> float:
    return fock.expectation(state, fock.lift(form, state.trunc)).real


def _random_gaussian_sequence(rng: np.random.Generator, r_max: float) -> list[tuple]:
    steps = []
    for _ in range(int(rng.integers(1, 4))):
        steps.append(("squeeze", float(rng.uniform(0, r_max)), float(rng.uniform(0, 2 * math.pi))))
        steps.append(("rotate", float(rng.uniform(0, 2 * math.pi))))
    return steps


def realise_sequence(steps: Sequence[tuple], engine: str, trunc: fock.TruncationSpec | None = None):
    """Apply squeeze/rotation steps to vacuum on either engine."""
    if engine == "gaussian":
        s = gaussian.vacuum()
        for st in steps:
            s = gaussian.apply_squeeze(s, st[1], st[2]) if st[0] == "squeeze" else gaussian.apply_rotation(s, st[1])
        return s
    s = fock.vacuum(trunc or fock.TruncationSpec())
    for st in steps:
        s = fock.squeeze_state(s, st[1], st[2]) if st[0] == "squeeze" else fock.rotate_state(s, st[1])
    return s


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

def _timed(name: str, fn: Callable[[], Check | list[Check]], sink: list[Check]):
    log.info("running %s", name)
    out = fn()
    sink.extend(out if isinstance(out, list) else [out])


def run_verification(trunc: fock.TruncationSpec | None = None,
                     r_list: Sequence[float] = (0.1, 0.2, 0.3, 0.4),
                     seed: int = 0, n_random: int = 20, grid_points: int = 181) -> VerificationReport:
    """Run the full invariant suite and the errata measurements.

    Parameters
    ----------
    trunc
        Oracle truncation; defaults to ``n_max = 24, guard = 4``.
    r_list
        Squeezing gains for the scaling, conservation and engine-agreement
        sweeps.  Each must lie in ``[0, 0.5]``.
    seed
        Seed of the random squeeze/rotation compositions.
    n_random
        Number of random compositions per engine.
    grid_points
        Size of the ``[0, pi]`` fringe grid.
    """
    trunc = trunc or fock.TruncationSpec()
    r_list = [float(r) for r in r_list]
    if not r_list or any(not 0 <= r <= 0.5 for r in r_list):
        raise ValueError("r_list must contain gains in [0, 0.5]")
    if grid_points < 2 or n_random < 1:
        raise ValueError("grid_points must be >= 2 and n_random >= 1")
    report = VerificationReport(config={"n_max": trunc.n_max, "guard": trunc.guard, "r_list": r_list,
                                        "seed": seed, "n_random": n_random, "grid_points": grid_points})
    checks = report.checks
    table = exact_commutator_table()

    def algebra_tables():
        res = {name: _algebra_residual(A, B, C) for name, A, B, C in table}
        worst = max(res, key=res.get)
        return Check("commutators.algebra", res[worst], ALGEBRA_TOL, f"worst: {worst}")

    def lifted_tables():
        res = {name: _lifted_commutator_residual(A, B, C, trunc) for name, A, B, C in table}
        worst = max(res, key=res.get)
        return Check("commutators.lifted", res[worst], LIFT_TOL, f"worst: {worst}")

    def identities():
        res = _identity_residuals()
        worst = max(res, key=res.get)
        return Check("identities.algebra", res[worst], ALGEBRA_TOL, f"worst: {worst}")

    def scaling():
        X1, X2 = algebra.make_quadrature("X1"), algebra.make_quadrature("X2")
        g11, g22, g12 = algebra.gamma(1, 1), algebra.gamma(2, 2), algebra.gamma(1, 2)
        worst = 0.0
        for r in r_list:
            U = fock.squeeze_unitary(r, 0.0, trunc).matrix
            for form, factor in ((X1, math.exp(r)), (X2, math.exp(-r)), (g11, math.exp(2 * r)),
                                 (g22, math.exp(-2 * r)), (g12, 1.0)):
                worst = max(worst, _transform_residual(form, factor, U, trunc))
        return Check("scaling.oracle", worst, ORACLE_TOL, "S^dag F S vs exact factor on n <= 3 box")

    def casimir():
        C = algebra.casimir()
        vac = _expect(fock.vacuum(trunc), C)
        out = [Check("casimir.vacuum", abs(vac + 0.25), LIFT_TOL, f"<K^2> = {vac:.12g}")]
        drift = 0.0
        for n_plus, n_minus in ((0, 0), (1, 0), (2, 1)):
            start = fock.basis_state(n_plus, n_minus, trunc)
            ref = _expect(start, C)
            for r in r_list:
                drift = max(drift, abs(_expect(fock.squeeze_state(start, r, 0.4), C) - ref))
        out.append(Check("casimir.drift", drift, ORACLE_TOL, "squeeze sweep from |0,0>, |1,0>, |2,1>"))
        return out

    def schwinger():
        j = [fock.lift(x, trunc).matrix for x in algebra.su2_generators()]
        mask = trunc.trusted_mask()
        lhs = sum(m[mask] @ m[:, mask] for m in j)
        N = algebra.number()
        rhs = fock.lift((N * N) / 4 + N / 2, trunc).restrict()
        return Check("schwinger.J2", float(np.abs(lhs - rhs).max()), LIFT_TOL, "J^2 = N/2 (N/2 + 1)")

    def number_difference():
        dn = algebra.number_difference()
        v = np.zeros(trunc.dim, dtype=complex)
        v[trunc.index(1, 0)] = 0.6
        v[trunc.index(2, 0)] = 0.8j
        start = fock.FockState(v, trunc)
        ref = _expect(start, dn)
        drift = 0.0
        for r in r_list:
            for xi, eps in ((r, 0.0), (r * complex(0.6, 0.8), 0.9)):
                drift = max(drift, abs(_expect(fock.evolve(start, xi, eps, 1.0), dn) - ref))
        return Check("conservation.dN", drift, CONSERVATION_TOL, "evolve with pump and detuning")

    def engines():
        worst = 0.0
        for r in r_list:
            gs = gaussian.apply_squeeze(gaussian.vacuum(), r, 0.0)
            fs = fock.squeeze_state(fock.vacuum(trunc), r, 0.0)
            for th in (0.0, math.pi / 8, math.pi / 4):
                gp = gaussian.quadrature_powers(gs, th)
                fp = [_expect(fs, algebra.gamma(i, j, th)) for i, j in ((1, 1), (2, 2), (1, 2))]
                worst = max(worst, float(np.max(np.abs(np.subtract(gp, fp)))))
        return Check("engines.quadrature_powers", worst, ORACLE_TOL, "Gaussian vs Fock <Gij(theta)>")

    def fringes():
        thetas = np.linspace(0, math.pi, grid_points)
        closed = gauss_fock = product = 0.0
        for r in r_list:
            gs = interferometer.fringe(r, thetas)
            fs = interferometer.fringe(r, thetas, engine="fock", trunc=trunc)
            closed = max(closed, float(np.abs(gs.gamma22 - interferometer.fringe_closed_form(r, thetas)).max()))
            gauss_fock = max(gauss_fock, float(np.abs(gs.gamma22 - fs.gamma22).max()))
            product = max(product, abs(gs.gamma22.min() * gs.gamma22.max() - 0.25))
        return [
            Check("fringe.closed_form", closed, 1e-10, "Gaussian engine vs closed form"),
            Check("fringe.engines", gauss_fock, FRINGE_TOL, "Fock vs Gaussian engine"),
            Check("fringe.min_max_product", product, LIFT_TOL, "min * max = 1/4"),
        ]

    def readout():
        worst = 0.0
        state = fock.squeeze_state(fock.vacuum(trunc), 0.2, 0.0)
        for g in (0.2, 0.4, 0.6):
            for phi in (0.0, math.pi / 3):
                g11 = algebra.gamma(1, 1, phi).normal_part()
                g22 = algebra.gamma(2, 2, phi).normal_part()
                exact = interferometer.readout_expression(_expect(state, g11), _expect(state, g22), g)
                raw = interferometer.amplified_readout(state, g, phi).raw_power
                worst = max(worst, abs(raw - exact))
        vac = max(abs(interferometer.amplified_readout(gaussian.vacuum(), g).normalized - 1)
                  for g in (1e-3, 0.5, 1.0, 2.5, 5.0))
        return [Check("readout.oracle", worst, ORACLE_TOL, "Fock raw power vs exact expression"),
                Check("readout.vacuum_normalised", vac, 1e-12, "Gaussian engine, g in (0, 5]")]

    def random_states():
        rng = np.random.default_rng(seed)
        comp = 0.0
        heis = 0.0
        for _ in range(n_random):
            steps = _random_gaussian_sequence(rng, 0.4 / 3)
            for engine in ("gaussian", "fock"):
                s = realise_sequence(steps, engine, trunc)
                comp = max(comp, interferometer.complementarity_check(s)[0] - 1)
            V = gaussian.covariance_V(realise_sequence(steps, "gaussian"))
            heis = max(heis, 1 - V.det)
        return [Check("complementarity.random", max(comp, 0.0), 1e-10, "V1^2 + W1^2 - 1"),
                Check("heisenberg.random", max(heis, 0.0), 1e-10, "1 - det V")]

    for name, fn in (("algebra tables", algebra_tables), ("identities", identities),
                     ("lifted tables", lifted_tables), ("scaling", scaling), ("casimir", casimir),
                     ("schwinger", schwinger), ("number difference", number_difference),
                     ("engines", engines), ("fringes", fringes), ("readout", readout),
                     ("random states", random_states)):
        _timed(name, fn, checks)

    log.info("measuring errata")
    report.errata.extend(measure_errata(trunc))
    return report


def measure_errata(trunc: fock.TruncationSpec | None = None) -> list[ErratumMeasurement]:
    """Oracle measurements of every entry in the errata table."""
    trunc = trunc or fock.TruncationSpec()
    vac = fock.vacuum(trunc)
    out = []

    g = 0.5
    n_sq = _expect(fock.squeeze_state(vac, g, 0.0), algebra.number())
    out.append(ErratumMeasurement("squeezed_vacuum_number", f"<N> of squeezed vacuum, g = {g}",
                                  math.sinh(g), n_sq, 2 * math.sinh(g) ** 2))

    g, r = 0.6, 0.2
    tmsv = fock.squeeze_state(vac, r, 0.0)
    g11n = _expect(tmsv, algebra.gamma(1, 1).normal_part())
    g22n = _expect(tmsv, algebra.gamma(2, 2).normal_part())
    measured = (interferometer.amplified_readout(tmsv, g).raw_power
                / interferometer.amplified_readout(vac, g).raw_power)
    exact = interferometer.readout_expression(g11n, g22n, g) / interferometer.vacuum_readout(g)
    printed = (g11n * math.exp(2 * g) + g22n * math.exp(-2 * g)) / math.sinh(2 * g)
    out.append(ErratumMeasurement("readout_prefactor",
                                  f"normalised readout, squeezed vacuum r = {r}, gain g = {g}",
                                  printed, measured, exact))

    x = {k: algebra.single_mode_quadrature(m, k[0]) for k, m in
         (("x+", "plus"), ("y+", "plus"), ("x-", "minus"), ("y-", "minus"))}
    u, v = x["y+"] + x["y-"], x["x+"] - x["x-"]
    epr = sum(_expect(vac, q * q) - _expect(vac, q) ** 2 for q in (u, v))
    out.append(ErratumMeasurement("epr_threshold", "vacuum <(d(y+ + y-))^2> + <(d(x+ - x-))^2>",
                                  1.0, epr, gaussian.EPR_THRESHOLD))

    g12 = algebra.gamma(1, 2)
    out.append(ErratumMeasurement("vacuum_gamma12_squared", "<0|G12^2|0>", 0.0, _expect(vac, g12 * g12), 0.25))

    chi1, gam2 = algebra.make_quadrature("chi1"), algebra.make_quadrature("gamma2")
    cross = fock.commutator_fock(fock.lift(chi1, trunc), fock.lift(gam2, trunc))
    cross_val = fock.expectation(vac, cross)
    out.append(ErratumMeasurement("epr_cross_commutator", "Im <0|[chi1, gamma2]|0>", 1.0, cross_val.imag, 0.0))

    r, theta, r0 = 0.2, math.pi / 5, 0.3
    probe = fock.squeeze_state(vac, r0, math.pi / 2)
    e11, e22, e12 = (_expect(probe, algebra.gamma(i, j)) for i, j in ((1, 1), (2, 2), (1, 2)))
    after = fock.rotate_state(fock.squeeze_state(probe, r, 0.0), theta)
    s, c = math.sin(theta), math.cos(theta)
    base = s * s * math.exp(2 * r) * e11 + c * c * math.exp(-2 * r) * e22
    out.append(ErratumMeasurement("interferometer_coherence_coefficient",
                                  f"<G22> after squeezer r = {r} and phase {theta:.6g}, "
                                  f"input squeezed at pump phase pi/2 (r0 = {r0})",
                                  base - s * c * e12, _expect(after, algebra.gamma(2, 2)),
                                  base - 2 * s * c * e12))

    X1 = algebra.make_quadrature("X1")
    anti = X1.adjoint() * X1 + X1 * X1.adjoint()
    mean_x1 = fock.expectation(vac, fock.lift(X1, trunc))
    out.append(ErratumMeasurement("covariance_normalisation", "vacuum V11",
                                  _expect(vac, algebra.gamma(1, 1)) - abs(mean_x1) ** 2,
                                  _expect(vac, anti) - 2 * abs(mean_x1) ** 2, 1.0))
    return out
