"""Solutions of -psi'' + V psi = E psi for V = x**2 (x < 0), -x**2 (x > 0).

Four families live on each half-axis:

* Frobenius solutions psi_1, psi_2 (exponential times 1F1), regular at the
  origin with psi_1(0) = 1, psi_1'(0) = 0, psi_2(0) = 0, psi_2'(0) = 1;
* Thome solutions psi_3, psi_4 (exponential times power times 2F0), the
  asymptotic outgoing/incoming (x > 0) or decaying/growing (x < 0) waves.

The Maclaurin sum of 1F1(a; c; -i x**2) cancels catastrophically once x
grows (the terms reach ~exp(x**2) while the sum stays O(1)), so Frobenius
values beyond ``SERIES_RADIUS`` are obtained by re-expanding the exact
solution in Taylor series about successive points of the half-axis.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple

from .errors import AccuracyFloorError, AtPoleError
from .scattering import ConnectionFactors, connection_factors
from .specfun import EPS, hyp1f1, hyp2f0_asymptotic

SERIES_RADIUS = 2.0
SWITCH = 6.0
THOME_MIN = 2.0
X_MAX = 30.0
THOME_REL_FLOOR = 1e-6


class Family(enum.Enum):
    FROBENIUS1 = 1
    FROBENIUS2 = 2
    THOME3 = 3
    THOME4 = 4


class Side(enum.Enum):
    PLUS = "+"
    MINUS = "-"


class Normalization(enum.Enum):
    SCATTERING = "scattering"
    GAMOW = "gamow"


@dataclass(frozen=True)
class SolutionId:
    family: Family
    side: Side


class SolutionValue(NamedTuple):
    psi: complex
    dpsi: complex
    err: float


@dataclass(frozen=True)
class PhysCoeffs:
    """Coefficients of psi_phys = A1 psi_1 + A2 psi_2."""

    A1: complex
    A2: complex
    normalization: Normalization


@dataclass(frozen=True)
class WaveSample:
    x: float
    psi: complex
    dpsi: complex
    density: float


def _check_side(side: Side, x: float) -> None:
    if side is Side.PLUS and x < 0 or side is Side.MINUS and x > 0:
        raise ValueError(f"x = {x} is not on the {side.value} half-axis")


# --- Frobenius solutions ---------------------------------------------------

def _frobenius_series(j: int, side: Side, E: complex, x: float) -> SolutionValue:
    if side is Side.PLUS:
        z = -1j * x * x
        pre = cmath.exp(0.5j * x * x)
        dlogpre = 1j * x
        dz = -2j * x
        a = (1 - 1j * E) / 4 if j == 1 else (3 - 1j * E) / 4
    else:
        z = complex(x * x)
        pre = math.exp(-0.5 * x * x)
        dlogpre = -x
        dz = 2.0 * x
        a = (1 - E) / 4 if j == 1 else (3 - E) / 4
    c = 0.5 if j == 1 else 1.5
    f = hyp1f1(a, c, z)
    df = (a / c) * hyp1f1(a + 1, c + 1, z).value
    inner = pre * (dlogpre * f.value + df * dz)  # d/dx [pre * 1F1]
    err = abs(pre) * (f.err_estimate + f.roundoff)
    if j == 1:
        return SolutionValue(pre * f.value, inner, err)
    return SolutionValue(x * pre * f.value, pre * f.value + x * inner, abs(x) * err)


def _taylor_step(E: complex, sign: float, x0: float, psi: complex, dpsi: complex,
                 h: float):
    """Advance (psi, psi') from x0 to x0 + h by the local Taylor series.

    With q(x) = sign*x**2 + E the equation is psi'' = -q psi, giving
    (n+2)(n+1) c_{n+2} = -(q(x0) c_n + 2 sign x0 c_{n-1} + sign c_{n-2}).
    Coefficients are carried pre-multiplied by h**n.
    """
    q0 = (sign * x0 * x0 + E) * h * h
    q1 = 2.0 * sign * x0 * h ** 3
    q2 = sign * h ** 4
    d = [complex(psi), complex(dpsi) * h]
    total = d[0] + d[1]
    dtotal = d[1]
    abs_total = abs(d[0]) + abs(d[1])
    quiet = 0
    for n in range(400):
        nxt = q0 * d[n]
        if n >= 1:
            nxt += q1 * d[n - 1]
        if n >= 2:
            nxt += q2 * d[n - 2]
        nxt = -nxt / ((n + 2) * (n + 1))
        d.append(nxt)
        total += nxt
        dtotal += (n + 2) * nxt
        abs_total += abs(nxt)
        if (n + 2) * abs(nxt) <= 1e-18 * (abs(total) + abs(dtotal)):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return total, dtotal / h, EPS * abs_total / max(abs(total), 1e-300)


def _amplitude(E: complex, sign: float, x: float, psi: complex, dpsi: complex) -> float:
    # local envelope of an oscillating or exponential solution, insensitive to nodes
    q = abs(sign * x * x + E)
    return math.sqrt(abs(psi) ** 2 + abs(dpsi) ** 2 / max(q, 1.0))


def _propagate(E: complex, x0: float, psi: complex, dpsi: complex, x1: float):
    """Continue a solution from x0 to x1 (same closed half-axis, away from 0).

    Returns ``(psi, dpsi, rel_err)`` with ``rel_err`` the accumulated roundoff
    relative to the local amplitude :func:`_amplitude`.
    """
    if x0 * x1 < 0:
        raise ValueError("continuation cannot cross x = 0")
    sign = 1.0 if (x0 > 0 or x1 > 0) else -1.0
    scale = math.sqrt(abs(E) + 1.0)
    x = x0
    rel_err = 0.0
    while x != x1:
        hmax = min(0.5, 1.5 / math.sqrt(x * x + scale * scale))
        h = x1 - x
        if abs(h) > hmax:
            h = math.copysign(hmax, h)
            x_next = x + h
        else:
            x_next = x1
        psi, dpsi, step_err = _taylor_step(E, sign, x, psi, dpsi, h)
        amp = max(_amplitude(E, sign, x_next, psi, dpsi), 1e-300)
        rel_err += step_err * abs(psi) / amp + 4 * EPS
        x = x_next
    return psi, dpsi, rel_err


def eval_frobenius(sid: SolutionId, E: complex, x: float) -> SolutionValue:
    """Frobenius solution psi_1 or psi_2 on the given half-axis, with derivative."""
    if sid.family not in (Family.FROBENIUS1, Family.FROBENIUS2):
        raise ValueError("eval_frobenius needs a Frobenius family")
    x = float(x)
    _check_side(sid.side, x)
    if abs(x) > X_MAX:
        raise ValueError(f"|x| must not exceed {X_MAX}")
    E = complex(E)
    j = sid.family.value
    if abs(x) <= SERIES_RADIUS:
        return _frobenius_series(j, sid.side, E, x)
    x0 = math.copysign(SERIES_RADIUS, x)
    start = _frobenius_series(j, sid.side, E, x0)
    sign = 1.0 if x > 0 else -1.0
    psi, dpsi, rel_err = _propagate(E, x0, start.psi, start.dpsi, x)
    start_rel = start.err / max(_amplitude(E, sign, x0, start.psi, start.dpsi), 1e-300)
    return SolutionValue(psi, dpsi, (rel_err + start_rel) * _amplitude(E, sign, x, psi, dpsi))


# --- Thome solutions --------------------------------------------------------

def eval_thome(sid: SolutionId, E: complex, x: float,
               rel_floor: float | None = THOME_REL_FLOOR) -> SolutionValue:
    """Thome (asymptotic) solution psi_3 or psi_4 with derivative and error estimate.

    On the negative half-axis the phases follow x = exp(i pi)|x|. Raises
    :class:`AccuracyFloorError` when the optimally truncated 2F0 cannot get
    below ``rel_floor`` relative error; pass ``None`` to get the value and its
    error estimate regardless.
    """
    if sid.family not in (Family.THOME3, Family.THOME4):
        raise ValueError("eval_thome needs a Thome family")
    x = float(x)
    _check_side(sid.side, x)
    if abs(x) < THOME_MIN:
        raise ValueError(f"Thome solutions need |x| >= {THOME_MIN}")
    E = complex(E)
    outgoing = sid.family is Family.THOME3
    if sid.side is Side.PLUS:
        s = 1.0 if outgoing else -1.0  # +i for psi_3, -i for psi_4
        p = (1 - s * 1j * E) / 2
        a1, a2 = (1 - s * 1j * E) / 4, (3 - s * 1j * E) / 4
        w = -s * 1j / (x * x)
        dw = 2 * s * 1j / x**3
        pre = cmath.exp(0.5j * s * x * x - p * math.log(x))
        dlogpre = 1j * s * x - p / x
        chain = 1.0
        r = x
    else:
        r = -x
        s = 1.0 if outgoing else -1.0  # decaying psi_3, growing psi_4
        q = (1 - s * E) / 2
        a1, a2 = (1 - s * E) / 4, (3 - s * E) / 4
        w = -s / (r * r)
        dw = 2 * s / r**3
        pre = cmath.exp(-0.5 * s * r * r - 1j * math.pi * q - q * math.log(r))
        dlogpre = -s * r - q / r
        chain = -1.0  # d/dx = -d/dr
    f = hyp2f0_asymptotic(a1, a2, w)
    df = a1 * a2 * hyp2f0_asymptotic(a1 + 1, a2 + 1, w).value
    if rel_floor is not None and f.err_estimate > rel_floor * abs(f.value):
        raise AccuracyFloorError(
            f"2F0 asymptotic error {f.err_estimate:.2e} too large at x = {x}")
    psi = pre * f.value
    dpsi = chain * pre * (dlogpre * f.value + df * dw)
    return SolutionValue(psi, dpsi, abs(pre) * (f.err_estimate + f.roundoff))


# --- physical solution ------------------------------------------------------

def physical_coefficients(E: complex, norm: Normalization = Normalization.SCATTERING,
                          pole_tol: float = 1e-6) -> PhysCoeffs:
    """Coefficients A1, A2 that remove the growing wave at x -> -infinity.

    ``SCATTERING`` fixes the incoming amplitude to one; it is refused when the
    determinant is below ``pole_tol`` relative to its two terms, i.e. at a
    pole of S(E) to the accuracy such locations are usually quoted. ``GAMOW``
    fixes the outgoing amplitude to one instead.
    """
    E = complex(E)
    t = connection_factors(E)
    if norm is Normalization.SCATTERING:
        left, right = t.T14p * t.T24m, t.T24p * t.T14m
        den = left - right
        if abs(den) <= pole_tol * (abs(left) + abs(right)):
            raise AtPoleError(f"E = {E} is a pole of S(E); use the Gamow normalization")
    else:
        den = t.T13p * t.T24m - t.T23p * t.T14m
        if den == 0:
            raise AtPoleError(f"Gamow normalization undefined at E = {E}")
    return PhysCoeffs(t.T24m / den, -t.T14m / den, norm)


def _recessive_minus(E: complex, x: float) -> SolutionValue:
    # the decaying psi_3^- is stable when continued toward the origin
    start = eval_thome(SolutionId(Family.THOME3, Side.MINUS), E, -SWITCH)
    psi, dpsi, rel_err = _propagate(E, -SWITCH, start.psi, start.dpsi, x)
    start_rel = start.err / max(_amplitude(E, -1.0, -SWITCH, start.psi, start.dpsi), 1e-300)
    return SolutionValue(psi, dpsi, (rel_err + start_rel) * _amplitude(E, -1.0, x, psi, dpsi))


def _physical(E: complex, x: float, A1: complex, A2: complex,
              t: ConnectionFactors) -> SolutionValue:
    if x >= 0:
        if x < SWITCH:
            v1 = eval_frobenius(SolutionId(Family.FROBENIUS1, Side.PLUS), E, x)
            v2 = eval_frobenius(SolutionId(Family.FROBENIUS2, Side.PLUS), E, x)
            return SolutionValue(A1 * v1.psi + A2 * v2.psi, A1 * v1.dpsi + A2 * v2.dpsi,
                                 abs(A1) * v1.err + abs(A2) * v2.err)
        c3 = A1 * t.T13p + A2 * t.T23p
        c4 = A1 * t.T14p + A2 * t.T24p
        v3 = eval_thome(SolutionId(Family.THOME3, Side.PLUS), E, x)
        v4 = eval_thome(SolutionId(Family.THOME4, Side.PLUS), E, x)
        return SolutionValue(c3 * v3.psi + c4 * v4.psi, c3 * v3.dpsi + c4 * v4.dpsi,
                             abs(c3) * v3.err + abs(c4) * v4.err)
    if x >= -SERIES_RADIUS:
        v1 = eval_frobenius(SolutionId(Family.FROBENIUS1, Side.MINUS), E, x)
        v2 = eval_frobenius(SolutionId(Family.FROBENIUS2, Side.MINUS), E, x)
        return SolutionValue(A1 * v1.psi + A2 * v2.psi, A1 * v1.dpsi + A2 * v2.dpsi,
                             abs(A1) * v1.err + abs(A2) * v2.err)
    c3 = A1 * t.T13m + A2 * t.T23m
    if x > -SWITCH:
        v = _recessive_minus(E, x)
    else:
        v = eval_thome(SolutionId(Family.THOME3, Side.MINUS), E, x)
    return SolutionValue(c3 * v.psi, c3 * v.dpsi, abs(c3) * v.err)


def _sample(x: float, v: SolutionValue) -> WaveSample:
    return WaveSample(x, v.psi, v.dpsi, (v.psi * v.psi.conjugate()).real)


def physical_psi(E: complex, x: float, coeffs: PhysCoeffs) -> WaveSample:
    """Physical wavefunction A1 psi_1 + A2 psi_2 at a single point.

    Frobenius assembly near the origin; the connection-factor Thome form for
    x >= SWITCH; on the negative half-axis beyond SERIES_RADIUS only the
    decaying Thome wave survives and is used directly (continued inward from
    -SWITCH where needed) instead of the cancelling Frobenius combination.
    """
    E = complex(E)
    x = float(x)
    if abs(x) > X_MAX:
        raise ValueError(f"|x| must not exceed {X_MAX}")
    return _sample(x, _physical(E, x, coeffs.A1, coeffs.A2, connection_factors(E)))


def x_grid(xmin: float, xmax: float, step: float) -> List[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    if xmax < xmin:
        raise ValueError("xmax must not be below xmin")
    count = int(math.floor((xmax - xmin) / step + 1e-9)) + 1
    return [round(xmin + i * step, 12) + 0.0 for i in range(count)]


def density_scan(E: complex, xmin: float, xmax: float, step: float,
                 norm: Normalization = Normalization.SCATTERING) -> List[WaveSample]:
    """|psi_phys|**2 sampled on a uniform grid (non-normalised)."""
    E = complex(E)
    xs = x_grid(xmin, xmax, step)
    if xs[0] < -X_MAX or xs[-1] > X_MAX:
        raise ValueError(f"|x| must not exceed {X_MAX}")
    coeffs = physical_coefficients(E, norm)
    t = connection_factors(E)
    return [_sample(x, _physical(E, x, coeffs.A1, coeffs.A2, t)) for x in xs]
