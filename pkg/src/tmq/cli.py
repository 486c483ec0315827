"""Command-line front end: ``tmq fringe | separability | spectrum | verify``.

Exit codes: 0 success, 2 invalid input, 3 truncation overflow,
4 verification failure.  Set ``TMQ_LOG`` (``DEBUG``, ``INFO``, ...) for
progress messages on stderr.
"""

from __future__ import annotations

import argparse
import ast
import json
import logging
import math
import operator
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, fock, gaussian, interferometer, spectral

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_OVERFLOW = 3
EXIT_VERIFY = 4

log = logging.getLogger("tmq")

_CONSTANTS = {"pi": math.pi, "tau": math.tau, "e": math.e}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


class InputError(ValueError):
    pass


def parse_number(text: str) -> float:
    """Evaluate a real literal such as ``0.3``, ``pi/4`` or ``-3*pi/2``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _CONSTANTS:
            return _CONSTANTS[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise InputError(f"unsupported expression {text!r}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError) as exc:
        raise InputError(f"cannot evaluate {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise InputError(f"{text!r} is not finite")
    return value


def _number(text: str) -> float:
    try:
        return parse_number(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:n`` (inclusive, ``n`` points) into an increasing array."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"grid {text!r} must look like start:stop:n")
    start, stop = parse_number(parts[0]), parse_number(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise InputError(f"grid size {parts[2]!r} is not an integer") from None
    if n < 1:
        raise InputError("grid needs at least one point")
    if n > 1 and not stop > start:
        raise InputError("grid stop must exceed start")
    return np.linspace(start, stop, n)


def parse_list(text: str) -> list[float]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise InputError("empty list")
    return [parse_number(t) for t in items]


def _configure_logging():
    level_name = os.environ.get("TMQ_LOG", "WARNING").strip().upper()
    level = getattr(logging, level_name, None) if not level_name.isdigit() else int(level_name)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _truncation(args) -> fock.TruncationSpec:
    return fock.TruncationSpec(n_max=args.nmax, guard=args.guard)


def _output_format(args) -> str:
    if args.format:
        return args.format
    if args.out and Path(args.out).suffix.lower() == ".json":
        return "json"
    return "csv"


def _emit(args, text: str, summary: list[str]):
    """Data to ``--out`` (summary on stdout) or to stdout (summary on stderr)."""
    if args.out:
        Path(args.out).write_text(text)
        for line in summary:
            print(line)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        for line in summary:
            print(line, file=sys.stderr)


def _require_gain(name: str, value: float):
    if value < 0:
        raise InputError(f"--{name} must be non-negative, got {value}")


def cmd_fringe(args) -> int:
    _require_gain("r", args.r)
    _require_gain("g", args.g)
    thetas = parse_grid(args.grid)
    trunc = _truncation(args) if args.engine == "fock" else None
    series = interferometer.fringe(args.r, thetas, g=args.g, phi=args.phi, engine=args.engine, trunc=trunc)
    state = interferometer.prepare_state(interferometer.InterferometerConfig(r=args.r, engine=args.engine,
                                                                            trunc=trunc))
    w1 = interferometer.visibilities(state)[0]
    i_min, i_max = int(np.argmin(series.gamma22)), int(np.argmax(series.gamma22))
    summary = [f"min gamma22 = {series.gamma22[i_min]:.10g} at theta = {thetas[i_min]:.10g}; "
               f"max gamma22 = {series.gamma22[i_max]:.10g} at theta = {thetas[i_max]:.10g}; "
               f"W1 = {w1:.10g}"]
    text = series.to_json() if _output_format(args) == "json" else series.to_csv()
    _emit(args, text, summary)
    return EXIT_OK


def separability_report(r: float, phi: float = 0.0, theta: float = 0.0) -> dict:
    """V matrix, Simon-Duan witness, EPR sum, Renyi-2 entropy and verdict of a TMSV."""
    state = gaussian.apply_rotation(gaussian.apply_squeeze(gaussian.vacuum(), r, phi), theta)
    V = gaussian.covariance_V(state)
    witness = gaussian.simon_duan_inseparable(V)
    return {
        "r": r,
        "phi": phi,
        "theta": theta,
        "V": V.matrix.tolist(),
        "min_eigenvalue": witness.witness,
        "det_V": V.det,
        "epr_sum": gaussian.epr_sum(state),
        "epr_threshold": gaussian.EPR_THRESHOLD,
        "renyi2_entropy": gaussian.renyi2_entropy(V),
        "verdict": "inseparable" if witness.inseparable else "separable",
    }


def cmd_separability(args) -> int:
    _require_gain("r", args.r)
    report = separability_report(args.r, args.phi, args.theta)
    summary = [f"{report['verdict']}: min eigenvalue {report['min_eigenvalue']:.10g}, "
               f"EPR sum {report['epr_sum']:.10g} (threshold {report['epr_threshold']:g}), "
               f"Renyi-2 {report['renyi2_entropy']:.10g}"]
    _emit(args, json.dumps(report, indent=2), summary)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.profile_csv:
        grid, profile = spectral.read_profile_csv(args.profile_csv)
    else:
        if args.bins < 1 or not args.bandwidth > 0:
            raise InputError("--bins must be >= 1 and --bandwidth positive")
        grid = spectral.SpectralGrid.uniform(args.bins, args.bandwidth)
        profile = spectral.parse_profile(args.profile, grid)
    if np.any(profile < 0) or not np.all(np.isfinite(profile)):
        raise InputError("squeezing profile must be finite and non-negative")
    state = spectral.broadband_squeeze(spectral.BroadbandState.vacuum(grid), profile, args.phi)
    series = spectral.spectrum(state, args.theta)
    t11 = spectral.total_quadrature_power(state, 1, args.theta)
    t22 = spectral.total_quadrature_power(state, 2, args.theta)
    series.metadata.update({"profile": args.profile_csv or args.profile, "phi": args.phi,
                            "total_g11": t11, "total_g22": t22})
    summary = [f"{len(grid)} bins, d_eps = {grid.d_eps:.10g}; "
               f"total G11 = {t11:.10g}, total G22 = {t22:.10g}"]
    text = series.to_json() if _output_format(args) == "json" else series.to_csv()
    _emit(args, text, summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify

    report = verify.run_verification(_truncation(args), parse_list(args.r_list), seed=args.seed,
                                     n_random=args.n_random, grid_points=args.grid_points)
    summary = []
    for c in report.checks:
        summary.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}: residual {c.residual:.3e} "
                       f"(tolerance {c.tolerance:.0e})")
    for e in report.errata:
        summary.append(f"{'CONFIRMED' if e.confirmed else 'FAIL'} erratum {e.id}: printed {e.printed:.9g}, "
                       f"measured {e.measured:.9g}, exact {e.exact:.9g}")
    summary.append(f"errata table: {verify.errata_document_path()}")
    summary.append("verification passed" if report.passed else "verification FAILED: " + "; ".join(report.failures()))
    _emit(args, report.to_json(), summary)
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tmq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tmq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def output(sp, formats=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        if formats:
            sp.add_argument("--format", choices=("csv", "json"),
                            help="output format (default: from --out suffix, else csv)")

    def truncation(sp):
        sp.add_argument("--nmax", type=int, default=24, help="per-mode photon cutoff of the Fock oracle")
        sp.add_argument("--guard", type=int, default=4, help="trusted-subspace margin")

    f = sub.add_parser("fringe", help="scan the interferometer phase for vacuum input")
    f.add_argument("--r", type=_number, required=True, help="first-amplifier gain")
    f.add_argument("--g", type=_number, default=0.0, help="measuring-amplifier gain (default 0)")
    f.add_argument("--phi", type=_number, default=math.pi / 2, help="amplified quadrature angle (default pi/2)")
    f.add_argument("--grid", default="0:pi:181", help="phase grid start:stop:n (default 0:pi:181)")
    f.add_argument("--engine", choices=("gaussian", "fock"), default="gaussian")
    truncation(f)
    output(f)
    f.set_defaults(func=cmd_fringe)

    s = sub.add_parser("separability", help="inseparability measures of a two-mode squeezed vacuum")
    s.add_argument("--r", type=_number, required=True, help="squeezing gain")
    s.add_argument("--phi", type=_number, default=0.0, help="pump phase")
    s.add_argument("--theta", type=_number, default=0.0, help="carrier-phase rotation after squeezing")
    output(s, formats=False)
    s.set_defaults(func=cmd_separability)

    sp = sub.add_parser("spectrum", help="quadrature power spectral density of a broadband squeezer")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile", help="flat(r0) or gaussian(r0, sigma)")
    src.add_argument("--profile-csv", help="CSV file with columns eps, r")
    sp.add_argument("--bins", type=int, default=64, help="number of frequency bins (default 64)")
    sp.add_argument("--bandwidth", type=_number, default=10.0, help="covered offset range (default 10)")
    sp.add_argument("--phi", type=_number, default=0.0, help="pump phase")
    sp.add_argument("--theta", type=_number, default=0.0, help="quadrature rotation of the readout")
    output(sp)
    sp.set_defaults(func=cmd_spectrum)

    v = sub.add_parser("verify", help="run the oracle-vs-algebra invariant suite and errata measurements")
    truncation(v)
    v.add_argument("--r-list", default="0.1,0.2,0.3,0.4", help="comma-separated gains in [0, 0.5]")
    v.add_argument("--seed", type=int, default=0, help="seed of the random state sweep")
    v.add_argument("--n-random", type=int, default=20, help="random states per engine")
    v.add_argument("--grid-points", type=int, default=181, help="fringe grid size")
    output(v, formats=False)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except fock.TruncationOverflow as exc:
        print(f"tmq: truncation overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (ValueError, OSError) as exc:
        print(f"tmq: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
