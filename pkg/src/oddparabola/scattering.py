"""Scattering function of the parabolic odd potential.

Units: hbar = 1, with lengths and energies scaled so that the Schrodinger
equation reads -psi'' + V psi = E psi, V = x**2 for x < 0 and -x**2 for x > 0.

Every expression with a Gamma function in a denominator is written as a
product with :func:`~oddparabola.specfun.recip_gamma`, so the entire
functions N(E), D(E), dN/dE and the connection factors never pick up
spurious singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import AtPoleError, UnwrapError
from .specfun import psi_recip_gamma, recip_gamma

SQRT_PI = math.sqrt(math.pi)
_E8 = np.exp(1j * np.pi / 8)
_E8C = np.exp(-1j * np.pi / 8)


@dataclass(frozen=True)
class ConnectionFactors:
    """Coefficients T_{j,k}^{+/-} of the Frobenius solutions in the Thome basis.

    ``T13p`` multiplies psi_3^+ in the large-x expansion of psi_1^+, and so
    on; the ``m`` fields are the x -> -infinity counterparts.
    """

    T13p: complex
    T14p: complex
    T23p: complex
    T24p: complex
    T13m: complex
    T14m: complex
    T23m: complex
    T24m: complex


@dataclass(frozen=True)
class ScatterPoint:
    E: float
    S: complex
    delta: float
    time_delay: float


def connection_factors(E: complex) -> ConnectionFactors:
    E = complex(E)
    iE = 1j * E
    ipi = 1j * np.pi
    half = 0.5 * SQRT_PI  # Gamma(3/2)
    g = recip_gamma(np.array([(1 + iE) / 4, (1 - iE) / 4, (3 + iE) / 4, (3 - iE) / 4,
                              (1 + E) / 4, (1 - E) / 4, (3 + E) / 4, (3 - E) / 4]))
    plus_1 = np.exp(ipi * (1 + E) / 2)
    minus_1 = np.exp(ipi * (1 - E) / 2)
    return ConnectionFactors(
        T13p=complex(np.exp(-ipi * (1 - iE) / 8) * SQRT_PI * g[0]),
        T14p=complex(np.exp(ipi * (1 + iE) / 8) * SQRT_PI * g[1]),
        T23p=complex(np.exp(-ipi * (3 - iE) / 8) * half * g[2]),
        T24p=complex(np.exp(ipi * (3 + iE) / 8) * half * g[3]),
        T13m=complex(minus_1 * np.cos((1 - E) * np.pi / 4) * SQRT_PI * g[4]),
        T14m=complex(plus_1 * SQRT_PI * g[5]),
        T23m=complex(-minus_1 * np.cos((3 - E) * np.pi / 4) * half * g[6]),
        T24m=complex(-plus_1 * half * g[7]),
    )


def n_of_e(E):
    """Numerator N(E) of the scattering function (scalar or array)."""
    E = np.asarray(E, dtype=complex)
    out = (_E8 * recip_gamma((3 - E) / 4) * recip_gamma((1 + 1j * E) / 4)
           + _E8C * recip_gamma((1 - E) / 4) * recip_gamma((3 + 1j * E) / 4))
    return complex(out) if out.ndim == 0 else out


def d_of_e(E):
    """Denominator D(E) of the scattering function; its zeros are the poles of S."""
    E = np.asarray(E, dtype=complex)
    out = (_E8C * recip_gamma((3 - E) / 4) * recip_gamma((1 - 1j * E) / 4)
           + _E8 * recip_gamma((1 - E) / 4) * recip_gamma((3 - 1j * E) / 4))
    return complex(out) if out.ndim == 0 else out


def dn_de(E):
    """Analytic derivative dN/dE, written with the entire products psi/Gamma."""
    E = np.asarray(E, dtype=complex)
    a, b = (3 - E) / 4, (1 + 1j * E) / 4
    c, d = (1 - E) / 4, (3 + 1j * E) / 4
    out = 0.25 * (
        _E8 * (psi_recip_gamma(a) * recip_gamma(b) - 1j * recip_gamma(a) * psi_recip_gamma(b))
        + _E8C * (psi_recip_gamma(c) * recip_gamma(d) - 1j * recip_gamma(c) * psi_recip_gamma(d)))
    return complex(out) if out.ndim == 0 else out


def s_of_e(E):
    """S(E) = i N(E) / D(E). Raises :class:`AtPoleError` where D vanishes."""
    den = d_of_e(E)
    if np.any(np.asarray(den) == 0):
        raise AtPoleError("D(E) = 0: E is a pole of the scattering function")
    out = 1j * np.asarray(n_of_e(E)) / den
    return complex(out) if np.ndim(out) == 0 else out


def s_from_connection(E: complex) -> complex:
    """S(E) assembled directly from the connection factors.

    Independent of the N/D closed form; used to cross-check it.
    """
    t = connection_factors(E)
    den = t.T14p * t.T24m - t.T24p * t.T14m
    if den == 0:
        raise AtPoleError("connection-factor determinant vanishes")
    return -(t.T13p * t.T24m - t.T23p * t.T14m) / den


def time_delay(E: float) -> float:
    """Wigner time delay 2 d(delta)/dE = 2 Im(N'(E)/N(E)) at real energy."""
    n = n_of_e(float(E))
    if abs(n) <= 1e-14:
        raise ArithmeticError(f"N(E) vanishes at E = {E}; time delay is indeterminate")
    return 2.0 * (dn_de(float(E)) / n).imag


def _time_delays(energies: np.ndarray) -> np.ndarray:
    n = n_of_e(energies)
    if np.any(np.abs(n) <= 1e-14):
        raise ArithmeticError("N(E) vanishes on the scan grid")
    return 2.0 * (dn_de(energies) / n).imag


def energy_grid(emin: float, emax: float, step: float) -> np.ndarray:
    """Uniform grid emin, emin+step, ... up to emax (inclusive within 1e-9 steps).

    Nodes are rounded to 12 decimals so that e.g. E = 0 is hit exactly.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if emax < emin:
        raise ValueError("emax must not be below emin")
    count = int(math.floor((emax - emin) / step + 1e-9)) + 1
    grid = np.round(emin + step * np.arange(count), 12)
    grid[grid == 0] = 0.0  # drop negative zeros
    return grid


def unwrap_arg(values: np.ndarray, start: float | None = None,
               max_jump: float = np.pi / 2) -> np.ndarray:
    """Continuous branch of arg(values) along the sequence.

    Each increment is taken on its principal branch; an increment of
    magnitude ``max_jump`` or more raises :class:`UnwrapError`. ``start``
    fixes the branch of the first sample (it must be congruent to its
    argument modulo 2 pi).
    """
    raw = np.angle(values)
    steps = np.angle(values[1:] / values[:-1])
    bad = np.flatnonzero(np.abs(steps) >= max_jump)
    if bad.size:
        raise UnwrapError(
            f"phase jumps by {steps[bad[0]]:.3f} rad between samples {bad[0]} and {bad[0] + 1}")
    first = raw[0] if start is None else start
    return first + np.concatenate(([0.0], np.cumsum(steps)))


def _anchor_arg(e_ref: float, bridge_step: float) -> float:
    """Branch of arg S at e_ref continued from E = 0, where delta(0) is in [0, pi)."""
    arg0 = np.angle(s_of_e(0.0)) % (2 * np.pi)
    if e_ref == 0:
        return arg0
    count = int(math.ceil(abs(e_ref) / bridge_step)) + 1
    bridge = np.linspace(0.0, e_ref, count)
    return unwrap_arg(s_of_e(bridge), start=arg0)[-1]


def phase_shift_scan(emin: float, emax: float, step: float = 0.01,
                     reverse: bool = False) -> List[ScatterPoint]:
    """Phase shift, S and time delay on a uniform real-energy grid.

    delta = arg(S)/2 is continued along the grid and shifted by a multiple of
    pi so that delta(0) lies in [0, pi). When 0 is outside [emin, emax] a
    bridge scan from E = 0 to the nearest grid point carries the anchor.
    ``reverse`` walks the same grid from emax down to emin.
    """
    energies = energy_grid(emin, emax, step)
    if reverse:
        energies = energies[::-1]
    S = s_of_e(energies.astype(complex))
    S = np.atleast_1d(S)
    args = unwrap_arg(S)
    ref = int(np.argmin(np.abs(energies)))
    target = _anchor_arg(float(energies[ref]), min(step, 0.01))
    args = args + 2 * np.pi * np.round((target - args[ref]) / (2 * np.pi))
    delays = _time_delays(energies)
    return [ScatterPoint(float(e), complex(s), float(a / 2), float(t))
            for e, s, a, t in zip(energies, S, args, delays)]
