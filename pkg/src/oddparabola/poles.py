"""Poles of S(E) (zeros of D) and zeros of S(E) (zeros of N) in the complex plane."""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .scattering import d_of_e, dn_de, n_of_e
from .specfun import psi_recip_gamma, recip_gamma, recip_gamma_derivs

log = logging.getLogger(__name__)

_E8 = np.exp(1j * np.pi / 8)
_E8C = np.exp(-1j * np.pi / 8)

DEDUP_RADIUS = 1e-6
MAX_TAYLOR_ORDER = 20


@dataclass(frozen=True)
class PoleRecord:
    location: complex
    residual: float
    iterations: int
    seed: complex


@dataclass(frozen=True)
class TaylorCoeff:
    m: int
    b: complex


class PoleList(list):
    """List of :class:`PoleRecord`; ``dropped`` counts seeds that failed to converge."""

    dropped: int = 0


def d_prime(E):
    """Analytic dD/dE, built from the entire products psi/Gamma like dN/dE."""
    E = np.asarray(E, dtype=complex)
    a, b = (3 - E) / 4, (1 - 1j * E) / 4
    c, d = (1 - E) / 4, (3 - 1j * E) / 4
    out = 0.25 * (
        _E8C * (psi_recip_gamma(a) * recip_gamma(b) + 1j * recip_gamma(a) * psi_recip_gamma(b))
        + _E8 * (psi_recip_gamma(c) * recip_gamma(d) + 1j * recip_gamma(c) * psi_recip_gamma(d)))
    return complex(out) if out.ndim == 0 else out


@functools.lru_cache(maxsize=None)
def _rg_taylor(z: float) -> Tuple[complex, ...]:
    # Taylor coefficients G^(n)(z)/n! of 1/Gamma
    derivs = recip_gamma_derivs(z, MAX_TAYLOR_ORDER)
    return tuple(g / math.factorial(n) for n, g in enumerate(derivs))


def taylor_coeff_b(m: int) -> TaylorCoeff:
    """Coefficient b_m of D(E) = sum_m b_m E**m.

    b_m = (-1/4)**m sum_n (e^{-i pi/8} i**(m-n) + e^{i pi/8} i**n)
                          G^(n)(3/4) G^(m-n)(1/4) / (n! (m-n)!)
    """
    if m < 0 or m > MAX_TAYLOR_ORDER:
        raise ValueError(f"m must lie in [0, {MAX_TAYLOR_ORDER}]")
    g34 = _rg_taylor(0.75)
    g14 = _rg_taylor(0.25)
    total = 0j
    for n in range(m + 1):
        weight = _E8C * 1j ** (m - n) + _E8 * 1j ** n
        total += weight * g34[n] * g14[m - n]
    return TaylorCoeff(m, (-0.25) ** m * total)


def _polish_poly_root(coeffs: Sequence[complex], root: complex, steps: int = 3) -> complex:
    # coeffs in ascending powers
    rev = list(reversed(coeffs))
    drev = list(reversed([k * c for k, c in enumerate(coeffs)][1:]))
    for _ in range(steps):
        p = np.polyval(rev, root)
        dp = np.polyval(drev, root)
        if dp == 0:
            break
        root = root - p / dp
    return complex(root)


def bisector_pole_approx(M: int) -> complex:
    """Root of the degree-M Taylor truncation of D that approximates the bisector pole.

    Roots are found from the companion matrix; the one closest in angle to
    arg E = -pi/4 is kept, ties (roots on the bisector) going to the smallest
    modulus.
    """
    if M < 1:
        raise ValueError("need M >= 1 for a root to exist")
    coeffs = [taylor_coeff_b(m).b for m in range(M + 1)]
    roots = np.roots(list(reversed(coeffs)))
    roots = np.array([_polish_poly_root(coeffs, r) for r in roots])
    angle_gap = np.abs(np.angle(roots * np.exp(1j * np.pi / 4)))
    near = roots[angle_gap <= angle_gap.min() + 1e-6]
    near = near[np.argsort(np.abs(near))]
    if len(near) > 1 and abs(near[1] - near[0]) < 1e-9:
        raise ArithmeticError(f"degenerate root selection for M = {M}")
    return complex(near[0])


def newton(func: Callable, dfunc: Callable, seed: complex, tol: float = 1e-12,
           max_iter: int = 60, max_halvings: int = 20):
    """Damped Newton iteration for an analytic function.

    Returns ``(root, iterations, residual_history, converged)``. A step that
    increases |f| is halved up to ``max_halvings`` times.
    """
    z = complex(seed)
    fz = func(z)
    history = [abs(fz)]
    for it in range(1, max_iter + 1):
        df = dfunc(z)
        if df == 0 or not np.isfinite(df):
            return z, it, history, False
        step = fz / df
        trial = z - step
        ft = func(trial)
        halvings = 0
        while abs(ft) > abs(fz) and halvings < max_halvings:
            step *= 0.5
            trial = z - step
            ft = func(trial)
            halvings += 1
        if abs(ft) > abs(fz) and abs(step) > tol * max(1.0, abs(z)):
            return z, it, history, False
        z, fz = trial, ft
        history.append(abs(fz))
        if abs(step) <= tol * max(1.0, abs(z)) or fz == 0:
            return z, it, history, True
    return z, max_iter, history, False


def _grid_minima(values: np.ndarray) -> List[Tuple[int, int]]:
    padded = np.pad(values, 1, constant_values=np.inf)
    centre = padded[1:-1, 1:-1]
    is_min = np.ones_like(centre, dtype=bool)
    rows, cols = values.shape
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= centre <= padded[1 + di:1 + di + rows, 1 + dj:1 + dj + cols]
    return list(zip(*np.nonzero(is_min)))


def _find_zeros(func, dfunc, re_range, im_range, grid_n, tol) -> PoleList:
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    (re0, re1), (im0, im1) = sorted(re_range), sorted(im_range)
    re = np.linspace(re0, re1, grid_n)
    im = np.linspace(im0, im1, grid_n)
    grid = re[None, :] + 1j * im[:, None]
    mags = np.abs(func(grid))
    found = PoleList()
    dropped = 0
    margin = 1e-9
    for i, j in _grid_minima(mags):
        seed = complex(grid[i, j])
        root, iters, history, ok = newton(func, dfunc, seed, tol=tol)
        inside = (re0 - margin <= root.real <= re1 + margin
                  and im0 - margin <= root.imag <= im1 + margin)
        if not ok:
            dropped += 1
            continue
        if not inside:
            continue
        if any(abs(root - rec.location) < DEDUP_RADIUS for rec in found):
            continue
        found.append(PoleRecord(root, abs(func(root)), iters, seed))
    found.sort(key=lambda r: (abs(r.location.imag), r.location.real))
    found.dropped = dropped
    if dropped:
        log.debug("%d Newton seeds failed to converge", dropped)
    return found


def find_poles(re_range=(0.0, 20.0), im_range=(-20.0, 0.0), grid_n: int = 200,
               tol: float = 1e-12) -> PoleList:
    """Poles of S(E): Newton on D(E) from the local minima of |D| on a grid.

    Results are deduplicated within 1e-6 and sorted by |Im E|, then Re E.
    """
    return _find_zeros(d_of_e, d_prime, re_range, im_range, grid_n, tol)


def find_s_zeros(re_range=(0.0, 20.0), im_range=(0.0, 20.0), grid_n: int = 200,
                 tol: float = 1e-12) -> PoleList:
    """Zeros of S(E), i.e. zeros of N(E), located like :func:`find_poles`."""
    return _find_zeros(n_of_e, dn_de, re_range, im_range, grid_n, tol)
