"""Command-line data emitters for the parabolic odd potential.

Every command writes one CSV (header row, 12 significant digits) or JSON
file. Exit codes: 0 success, 1 failed verification, 2 invalid arguments,
3 numerical failure. Arguments are validated before any computation and
output files are written atomically, so a failing run leaves no file behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from typing import Callable, Dict, List, Sequence

import numpy as np

from . import poles, scattering, solutions

log = logging.getLogger("oddparabola")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SIG_DIGITS = 12

# Reference values checked by ``verify-tables``; tests may patch these.
POLE_TABLE: List[complex] = [
    0.889605 - 0.889605j,
    2.977506 - 4.081280j, 4.081280 - 2.977506j,
    3.715766 - 8.472130j, 8.472130 - 3.715766j,
    4.173994 - 12.59206j, 12.59206 - 4.173994j,
    4.509353 - 16.66338j, 16.66338 - 4.509353j,
]
POLE_TOL = 1e-5

_DIAG = 1 - 1j
TAYLOR_TABLE: List[complex] = [
    0.4158919086e+00,
    0.3438700716e+00 * (-1 - 1j),
    0.1302850455e+00 * 1j,
    0.1693998465e-02 * (1 - 1j),
    0.2314470246e-02,
    0.4198228545e-04 * (-1 - 1j),
    0.2368862531e-04 * -1j,
    0.5531769758e-07 * (-1 + 1j),
    0.1623934529e-06 * -1,
    0.3336310538e-08 * (-1 - 1j),
    0.5905347326e-09 * 1j,
    0.2651914365e-10 * (-1 + 1j),
    0.9945374276e-12,
]
TAYLOR_REL_TOL = 1e-9

BISECTOR_TABLE: Dict[int, complex] = {
    1: 0.6047224563 * _DIAG,
    2: 0.9382649623 * _DIAG,
    3: 0.9131374180 * _DIAG,
    4: 0.8885559742 * _DIAG,
    5: 0.8892565969 * _DIAG,
    6: 0.8896106601 * _DIAG,
    7: 0.8896091851 * _DIAG,
    8: 0.8896053333 * _DIAG,
    9: 0.8896051925 * _DIAG,
    10: 0.8896052147 * _DIAG,
    11: 0.8896052164 * _DIAG,
    12: 0.8896052164 * _DIAG,
}
BISECTOR_TOL = 1e-9

SPOT_VALUES = {
    "gamow_width": (1.77921, 1e-5),
    "saddle_time_delay": (0.0, 1e-3),
    "saddle_arg_S": (-0.519712 * math.pi / 4, 2e-5),
    "resonance_energy": (0.935, 0.02),
}
SADDLE_ENERGY = -4.042626


class ConfigError(ValueError):
    """Invalid command-line configuration."""


# --- formatting -------------------------------------------------------------

def fmt(value) -> str:
    """Fixed 12-significant-digit text for a number; empty for None."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    v = float(value)
    if v == 0:
        v = 0.0
    return format(v, f".{SIG_DIGITS}g")


def _json_value(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    v = float(value)
    return float(format(v, f".{SIG_DIGITS}g")) + 0.0


def render(columns: Sequence[str], rows: Sequence[Sequence], fmt_name: str) -> str:
    if fmt_name == "json":
        records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_output(text: str, out: str | None) -> None:
    """Write ``text`` to ``out`` atomically, or to stdout when ``out`` is None."""
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- validation -------------------------------------------------------------

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _finite(args, *names: str) -> None:
    for name in names:
        _require(math.isfinite(getattr(args, name)), f"--{name.replace('_', '-')} must be finite")


def _check_range(lo: float, hi: float, label: str) -> None:
    _require(hi >= lo, f"{label}: maximum must not be below minimum")


def _check_out(args) -> None:
    if args.out not in (None, "-"):
        directory = os.path.dirname(os.path.abspath(args.out))
        _require(os.path.isdir(directory), f"output directory {directory!r} does not exist")


def _validate_energy_scan(args) -> None:
    _finite(args, "emin", "emax", "step")
    _check_range(args.emin, args.emax, "energy range")
    _require(args.step > 0, "--step must be positive")
    _require((args.emax - args.emin) / args.step <= 1e7, "too many grid points")


def _validate_chart(args) -> None:
    _finite(args, "re_min", "re_max", "im_min", "im_max", "pole_tol")
    _require(args.re_max > args.re_min, "real range must be non-empty")
    _require(args.im_max > args.im_min, "imaginary range must be non-empty")
    _require(2 <= args.n <= 4000, "--n must lie in [2, 4000]")
    _require(args.pole_tol > 0, "--pole-tol must be positive")


def _validate_poles(args) -> None:
    _finite(args, "re_min", "re_max", "im_min", "im_max", "tol")
    _require(args.re_max > args.re_min, "real range must be non-empty")
    _require(args.im_max > args.im_min, "imaginary range must be non-empty")
    _require(args.grid_n >= 16, "--grid-n must be at least 16")
    _require(args.tol >= 1e-12, "--tol must be at least 1e-12")


def _validate_bisector(args) -> None:
    _require(1 <= args.m_max <= poles.MAX_TAYLOR_ORDER,
             f"--m-max must lie in [1, {poles.MAX_TAYLOR_ORDER}]")


def _validate_wavefunction(args) -> None:
    _finite(args, "e_re", "e_im", "xmin", "xmax", "step")
    _check_range(args.xmin, args.xmax, "x range")
    _require(args.step > 0, "--step must be positive")
    _require(-solutions.X_MAX <= args.xmin and args.xmax <= solutions.X_MAX,
             f"x range must lie within [-{solutions.X_MAX}, {solutions.X_MAX}]")
    _require((args.xmax - args.xmin) / args.step <= 1e6, "too many grid points")


# --- commands ---------------------------------------------------------------

def cmd_phase_shift(args):
    pts = scattering.phase_shift_scan(args.emin, args.emax, args.step)
    rows = [(p.E, p.delta / math.pi, p.S.real, p.S.imag) for p in pts]
    return ["E", "delta_over_pi", "S_re", "S_im"], rows


def cmd_time_delay(args):
    energies = scattering.energy_grid(args.emin, args.emax, args.step)
    delays = scattering._time_delays(energies)
    return ["E", "time_delay"], list(zip(energies.tolist(), delays.tolist()))


def cmd_s_chart(args):
    re = np.linspace(args.re_min, args.re_max, args.n)
    im = np.linspace(args.im_min, args.im_max, args.n)
    grid = re[None, :] + 1j * im[:, None]
    num = 1j * scattering.n_of_e(grid)
    den = scattering.d_of_e(grid)
    scale = np.abs(scattering.n_of_e(grid)) + np.abs(den)
    flagged = np.abs(den) <= args.pole_tol * scale
    rows = []
    for i in range(args.n):
        for j in range(args.n):
            if flagged[i, j]:
                rows.append((re[j], im[i], None, None, 1))
            else:
                s = num[i, j] / den[i, j]
                rows.append((re[j], im[i], math.log10(abs(s)), np.angle(s), 0))
    return ["Re_E", "Im_E", "log10_abs_S", "arg_S", "near_pole"], rows


def cmd_poles(args):
    found = poles.find_poles((args.re_min, args.re_max), (args.im_min, args.im_max),
                             args.grid_n, args.tol)
    if found.dropped:
        log.info("%d seeds did not converge", found.dropped)
    rows = [(r.location.real, r.location.imag, r.residual, r.iterations) for r in found]
    return ["Re_E", "Im_E", "residual", "iterations"], rows


def cmd_bisector_pole(args):
    rows = []
    for m in range(args.m_max + 1):
        b = poles.taylor_coeff_b(m).b
        if m == 0:
            rows.append((m, b.real, b.imag, None, None))
        else:
            e = poles.bisector_pole_approx(m)
            rows.append((m, b.real, b.imag, e.real, e.imag))
    return ["M", "b_re", "b_im", "E_re", "E_im"], rows


def cmd_wavefunction(args):
    norm = solutions.Normalization(args.norm)
    samples = solutions.density_scan(complex(args.e_re, args.e_im), args.xmin, args.xmax,
                                     args.step, norm)
    rows = [(s.x, s.density, s.psi.real, s.psi.imag) for s in samples]
    return ["x", "density", "psi_re", "psi_im"], rows


def _check(name: str, expected, computed, abs_err: float, passed: bool) -> dict:
    def enc(v):
        if isinstance(v, complex):
            return [_json_value(v.real), _json_value(v.imag)]
        return _json_value(v)
    return {"check": name, "expected": enc(expected), "computed": enc(computed),
            "abs_err": _json_value(abs_err), "pass": bool(passed)}


def verification_checks() -> List[dict]:
    """Compare the library against the stored reference tables and spot values."""
    checks = []
    found = [r.location for r in poles.find_poles((0.0, 20.0), (-20.0, 0.0), 200, 1e-12)]
    for k, ref in enumerate(POLE_TABLE):
        best = min(found, key=lambda z: abs(z - ref)) if found else complex("nan")
        err = max(abs(best.real - ref.real), abs(best.imag - ref.imag))
        checks.append(_check(f"pole[{k}]", ref, best, err, err <= POLE_TOL))
    for m, ref in enumerate(TAYLOR_TABLE):
        b = poles.taylor_coeff_b(m).b
        err = abs(b - ref)
        checks.append(_check(f"b[{m}]", ref, b, err, err <= TAYLOR_REL_TOL * abs(ref)))
    for m, ref in BISECTOR_TABLE.items():
        e = poles.bisector_pole_approx(m)
        err = max(abs(e.real - ref.real), abs(e.imag - ref.imag))
        checks.append(_check(f"E[{m}]", ref, e, err, err <= BISECTOR_TOL))
    bis = min(found, key=lambda z: abs(z.real + z.imag)) if found else complex("nan")
    ref = BISECTOR_TABLE[max(BISECTOR_TABLE)]
    err = max(abs(bis.real - ref.real), abs(bis.imag - ref.imag))
    checks.append(_check("E[limit]", ref, bis, err, err <= BISECTOR_TOL))

    b0 = 2 * math.cos(math.pi / 8) / (math.pi * math.sqrt(2))
    err = abs(poles.taylor_coeff_b(0).b - b0)
    checks.append(_check("b[0] closed form", b0, poles.taylor_coeff_b(0).b, err, err <= 1e-12))

    ref, tol = SPOT_VALUES["gamow_width"]
    width = -2 * bis.imag
    checks.append(_check("gamow_width", ref, width, abs(width - ref), abs(width - ref) <= tol))

    ref, tol = SPOT_VALUES["saddle_time_delay"]
    td = scattering.time_delay(SADDLE_ENERGY)
    checks.append(_check("saddle_time_delay", ref, td, abs(td - ref), abs(td - ref) <= tol))

    ref, tol = SPOT_VALUES["saddle_arg_S"]
    arg = float(np.angle(scattering.s_of_e(SADDLE_ENERGY)))
    err = abs((arg - ref + math.pi) % (2 * math.pi) - math.pi)
    checks.append(_check("saddle_arg_S", ref, arg, err, err <= tol))

    ref, tol = SPOT_VALUES["resonance_energy"]
    energies = scattering.energy_grid(-10.0, 15.0, 0.01)
    peak = float(energies[int(np.argmax(scattering._time_delays(energies)))])
    checks.append(_check("resonance_energy", ref, peak, abs(peak - ref), abs(peak - ref) <= tol))
    return checks


def cmd_verify_tables(args):
    checks = verification_checks()
    failed = [c["check"] for c in checks if not c["pass"]]
    for name in failed:
        log.warning("check failed: %s", name)
    return checks, (EXIT_OK if not failed else EXIT_VERIFY)


# --- argument parsing -------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, formats: bool = True) -> None:
    p.add_argument("--out", "-o", default=None, help="output file (default: stdout)")
    if formats:
        p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_energy_scan(p: argparse.ArgumentParser) -> None:
    p.add_argument("--emin", type=float, default=-10.0)
    p.add_argument("--emax", type=float, default=15.0)
    p.add_argument("--step", type=float, default=0.01)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddparabola",
        description="Scattering by the parabolic odd potential V = x^2 (x<0), -x^2 (x>0).")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phase-shift", help="phase shift and S(E) on a real-energy grid")
    _add_energy_scan(p)
    _add_common(p)
    p.set_defaults(run=cmd_phase_shift, validate=_validate_energy_scan)

    p = sub.add_parser("time-delay", help="time delay 2 d(delta)/dE on a real-energy grid")
    _add_energy_scan(p)
    _add_common(p)
    p.set_defaults(run=cmd_time_delay, validate=_validate_energy_scan)

    p = sub.add_parser("s-chart", help="modulus and phase of S over a complex-energy grid")
    p.add_argument("--re-min", type=float, default=-10.0)
    p.add_argument("--re-max", type=float, default=15.0)
    p.add_argument("--im-min", type=float, default=-15.0)
    p.add_argument("--im-max", type=float, default=0.0)
    p.add_argument("--n", type=int, default=200, help="grid points per axis")
    p.add_argument("--pole-tol", type=float, default=1e-10,
                   help="flag cells where |D| is below this fraction of |N| + |D|")
    _add_common(p)
    p.set_defaults(run=cmd_s_chart, validate=_validate_chart)

    p = sub.add_parser("poles", help="poles of S(E) in a rectangle")
    p.add_argument("--re-min", type=float, default=0.0)
    p.add_argument("--re-max", type=float, default=20.0)
    p.add_argument("--im-min", type=float, default=-20.0)
    p.add_argument("--im-max", type=float, default=0.0)
    p.add_argument("--grid-n", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_common(p)
    p.set_defaults(run=cmd_poles, validate=_validate_poles)

    p = sub.add_parser("bisector-pole",
                       help="Taylor coefficients of D and truncated-polynomial pole estimates")
    p.add_argument("--m-max", type=int, default=12)
    _add_common(p)
    p.set_defaults(run=cmd_bisector_pole, validate=_validate_bisector)

    p = sub.add_parser("wavefunction", help="probability density of the physical solution")
    p.add_argument("--e-re", type=float, required=True)
    p.add_argument("--e-im", type=float, default=0.0)
    p.add_argument("--xmin", type=float, default=-5.0)
    p.add_argument("--xmax", type=float, default=10.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--norm", choices=[n.value for n in solutions.Normalization],
                   default="scattering")
    _add_common(p)
    p.set_defaults(run=cmd_wavefunction, validate=_validate_wavefunction)

    p = sub.add_parser("verify-tables", help="check the reference tables; JSON report")
    _add_common(p, formats=False)
    p.set_defaults(run=cmd_verify_tables, validate=lambda args: None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.validate(args)
        _check_out(args)
    except ConfigError as exc:
        parser.error(f"{args.command}: {exc}")  # exits with status 2

    try:
        if args.command == "verify-tables":
            checks, code = args.run(args)
            text = json.dumps(checks, indent=1) + "\n"
        else:
            columns, rows = args.run(args)
            text = render(columns, rows, args.format)
            code = EXIT_OK
    except (ArithmeticError, ValueError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    write_output(text, args.out)
    return code


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
