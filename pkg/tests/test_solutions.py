import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddparabola.errors import AccuracyFloorError, AtPoleError
from oddparabola.scattering import connection_factors
from oddparabola.solutions import (SWITCH, Family, Normalization, Side, SolutionId, density_scan,
                                   eval_frobenius, eval_thome, physical_coefficients,
                                   physical_psi, x_grid)

from reference import GAMOW_POLE, GAMOW_TAIL_EXPONENT, RESONANCE_E, SADDLE_E

EPS = np.finfo(float).eps
F1P = SolutionId(Family.FROBENIUS1, Side.PLUS)
F2P = SolutionId(Family.FROBENIUS2, Side.PLUS)
F1M = SolutionId(Family.FROBENIUS1, Side.MINUS)
F2M = SolutionId(Family.FROBENIUS2, Side.MINUS)
T3P = SolutionId(Family.THOME3, Side.PLUS)
T4P = SolutionId(Family.THOME4, Side.PLUS)


def frobenius_pair(E, x):
    side = Side.PLUS if x >= 0 else Side.MINUS
    a = eval_frobenius(SolutionId(Family.FROBENIUS1, side), E, x)
    b = eval_frobenius(SolutionId(Family.FROBENIUS2, side), E, x)
    return a, b


def wronskian(E, x):
    a, b = frobenius_pair(E, x)
    w = a.psi * b.dpsi - b.psi * a.dpsi
    cond = abs(a.psi * b.dpsi) + abs(b.psi * a.dpsi)
    return w, cond


def potential(x):
    return x * x if x < 0 else -x * x


complex_e = st.tuples(st.floats(-10, 10), st.floats(-10, 10)).map(lambda t: complex(*t))


@pytest.mark.parametrize("E", [0.0, 0.935, -3 + 2j, 7.5])
def test_values_at_origin(E):
    for sid in (F1P, F1M):
        v = eval_frobenius(sid, E, 0.0)
        assert v.psi == 1 and v.dpsi == 0
    for sid in (F2P, F2M):
        v = eval_frobenius(sid, E, 0.0)
        assert v.psi == 0 and v.dpsi == 1


@given(complex_e)
@settings(max_examples=50, deadline=None)
def test_plus_minus_match_at_origin(E):
    for plus, minus in ((F1P, F1M), (F2P, F2M)):
        p = eval_frobenius(plus, E, 0.0)
        m = eval_frobenius(minus, E, 0.0)
        assert p.psi == m.psi and p.dpsi == m.dpsi


def test_side_mismatch_rejected():
    with pytest.raises(ValueError):
        eval_frobenius(F1P, 0.5, -1.0)
    with pytest.raises(ValueError):
        eval_frobenius(F1M, 0.5, 1.0)
    with pytest.raises(ValueError):
        eval_frobenius(F1P, 0.5, 31.0)
    with pytest.raises(ValueError):
        eval_thome(T3P, 0.5, 1.0)


def test_frobenius_matches_extended_precision_series():
    E, x = 0.935, 1.5
    with mp.workdps(40):
        z = -1j * mp.mpf(x) ** 2
        ref = complex(mp.exp(1j * mp.mpf(x) ** 2 / 2) * mp.hyp1f1((1 - 1j * E) / 4, 0.5, z))
    v = eval_frobenius(F1P, E, x)
    assert abs(v.psi - ref) <= 1e-11


@pytest.mark.parametrize("x", [-7.0, -4.5, -2.5, 2.5, 4.0, 9.0, 15.0])
@pytest.mark.parametrize("E", [0.935, -2 + 1j])
def test_frobenius_matches_mpmath_far_out(x, E):
    side = Side.PLUS if x > 0 else Side.MINUS
    # plus side: e^{i x^2/2} 1F1((1 - iE)/4; 1/2; -i x^2); minus side: e^{-x^2/2} 1F1((1 - E)/4; 1/2; x^2)
    s, k = (1j, 1j) if x > 0 else (-1, 1)
    with mp.workdps(50):
        X = mp.mpf(x)
        pre = mp.exp(s * X**2 / 2)
        ref1 = complex(pre * mp.hyp1f1((1 - k * E) / 4, 0.5, -s * X**2))
        ref2 = complex(X * pre * mp.hyp1f1((3 - k * E) / 4, 1.5, -s * X**2))
    v1 = eval_frobenius(SolutionId(Family.FROBENIUS1, side), E, x)
    v2 = eval_frobenius(SolutionId(Family.FROBENIUS2, side), E, x)
    assert abs(v1.psi - ref1) <= 1e-9 * abs(ref1) + 10 * v1.err
    assert abs(v2.psi - ref2) <= 1e-9 * abs(ref2) + 10 * v2.err


@given(st.floats(-10, 10), st.floats(-5, 5))
@settings(max_examples=30, deadline=None)
def test_thome_plus_conjugate_pair_for_real_energy(E, x0):
    x = 6 + abs(x0)
    v3 = eval_thome(T3P, E, x)
    v4 = eval_thome(T4P, E, x)
    assert abs(v3.psi - v4.psi.conjugate()) <= 1e-13 * abs(v3.psi)
    assert abs(v3.dpsi - v4.dpsi.conjugate()) <= 1e-13 * abs(v3.dpsi)


def test_thome_flux_signs():
    def flux(v):
        return (-1j * (v.psi.conjugate() * v.dpsi - v.dpsi.conjugate() * v.psi)).real
    assert flux(eval_thome(T3P, RESONANCE_E, 5.0)) > 0
    assert flux(eval_thome(T4P, RESONANCE_E, 5.0)) < 0


def test_thome_accuracy_floor():
    with pytest.raises(AccuracyFloorError):
        eval_thome(T3P, 3 - 2j, 2.0)
    v = eval_thome(T3P, 3 - 2j, 2.0, rel_floor=None)
    assert v.err > 1e-6 * abs(v.psi)


def _fit_tail_exponent(xs, rho):
    # log rho = alpha log x + c + beta / x^2 absorbs the leading 2F0 correction
    A = np.column_stack([np.log(xs), np.ones_like(xs), xs ** -2.0])
    coef, *_ = np.linalg.lstsq(A, np.log(rho), rcond=None)
    return coef[0]


def test_gamow_tail_exponent():
    xs = np.linspace(10, 30, 201)
    rho = np.array([abs(eval_thome(T3P, GAMOW_POLE, x).psi) ** 2 for x in xs])
    assert abs(_fit_tail_exponent(xs, rho) - GAMOW_TAIL_EXPONENT) <= 1e-3


def test_physical_coefficients_invariants():
    for E in (RESONANCE_E, SADDLE_E, 3 - 2j, 12.0):
        c = physical_coefficients(E)
        t = connection_factors(E)
        assert abs(c.A1 * t.T14m + c.A2 * t.T24m) <= 1e-12 * (abs(c.A1 * t.T14m) + 1e-300)
        assert abs(c.A1 * t.T14p + c.A2 * t.T24p - 1) <= 1e-12
    g = physical_coefficients(GAMOW_POLE, Normalization.GAMOW)
    t = connection_factors(GAMOW_POLE)
    assert abs(g.A1 * t.T13p + g.A2 * t.T23p - 1) <= 1e-12
    assert abs(g.A1 * t.T14m + g.A2 * t.T24m) <= 1e-9


def test_scattering_normalization_refused_at_pole():
    with pytest.raises(AtPoleError):
        physical_coefficients(GAMOW_POLE)


def test_physical_solution_continuous_across_origin():
    c = physical_coefficients(RESONANCE_E)
    right = physical_psi(RESONANCE_E, 0.0, c)
    left = physical_psi(RESONANCE_E, -0.0, c)
    assert right.psi == left.psi and right.dpsi == left.dpsi
    near = physical_psi(RESONANCE_E, -1e-9, c)
    assert abs(near.psi - right.psi) <= 1e-8


@pytest.mark.parametrize("E", [RESONANCE_E, SADDLE_E, 3 - 2j, 10.0])
def test_representations_agree_at_switch_point(E):
    c = physical_coefficients(E)
    v1 = eval_frobenius(F1P, E, SWITCH)
    v2 = eval_frobenius(F2P, E, SWITCH)
    inner = c.A1 * v1.psi + c.A2 * v2.psi
    outer = physical_psi(E, SWITCH, c).psi
    assert abs(inner - outer) <= 1e-7 * abs(outer)
    # left switch point: recessive continuation vs. Thome form
    lo = physical_psi(E, -SWITCH - 1e-12, c).psi
    hi = physical_psi(E, -SWITCH + 1e-12, c).psi
    assert abs(lo - hi) <= 1e-7 * abs(hi)


@pytest.mark.parametrize("E", [RESONANCE_E, 5.0, 10.0, 2.5])
@pytest.mark.parametrize("x", [-4.0, -1.0, 0.0, 1.0, 4.0])
def test_wronskian_well_conditioned_points(E, x):
    w, _ = wronskian(E, x)
    assert abs(w - 1) <= 1e-10


@given(complex_e, st.floats(-5, 5))
@settings(max_examples=150, deadline=None)
def test_wronskian_within_roundoff(E, x):
    # the error can only be as small as the cancellation between the two products allows
    if abs(E) > 10:
        return
    w, cond = wronskian(E, x)
    assert abs(w - 1) <= 1e-12 + 1e3 * EPS * cond


@pytest.mark.parametrize("E", [RESONANCE_E, 2.5, 6 + 1j, 8.0])
def test_wronskian_on_moderate_range(E):
    for x in np.linspace(-3, 5, 33):
        w, _ = wronskian(E, x)
        assert abs(w - 1) <= 1e-9


@pytest.mark.parametrize("E", [RESONANCE_E, SADDLE_E, 3 - 2j])
@pytest.mark.parametrize("j", [1, 2])
def test_cross_representation(E, j):
    t = connection_factors(E)
    c3, c4 = (t.T13p, t.T14p) if j == 1 else (t.T23p, t.T24p)
    sid = F1P if j == 1 else F2P
    for x in np.linspace(4, 8, 9):
        f = eval_frobenius(sid, E, x)
        v3 = eval_thome(T3P, E, x, rel_floor=None)
        v4 = eval_thome(T4P, E, x, rel_floor=None)
        diff = abs(f.psi - (c3 * v3.psi + c4 * v4.psi))
        bound = 10 * (abs(c3) * v3.err + abs(c4) * v4.err) + f.err
        assert diff <= bound, (x, diff, bound)


@pytest.mark.parametrize("E", [RESONANCE_E, SADDLE_E, 3 - 2j, GAMOW_POLE])
@pytest.mark.parametrize("x", [-7.0, -4.0, -2.0, -1.5, 0.5, 1.0, 2.0, 3.0, 5.0, 6.0, 7.0])
def test_schrodinger_residual(E, x):
    norm = Normalization.GAMOW if E == GAMOW_POLE else Normalization.SCATTERING
    c = physical_coefficients(E, norm)
    h = 1e-3
    vals = [physical_psi(E, x + k * h, c).psi for k in (-1, 0, 1)]
    second = (vals[0] - 2 * vals[1] + vals[2]) / h ** 2
    residual = -second + (potential(x) - E) * vals[1]
    scale = max(abs(v) for v in vals)
    k2 = abs(x * x) + abs(E) + 1
    assert abs(residual) <= h ** 2 * k2 ** 2 * scale


def test_resonance_density_large_at_origin():
    samples = density_scan(RESONANCE_E, -5, 10, 0.01)
    by_x = {s.x: s.density for s in samples}
    tail = [s.density for s in samples if 5 <= s.x <= 10]
    assert by_x[0.0] > np.mean(tail)
    assert all(s.density >= 0 for s in samples)
    xs = [s.x for s in samples]
    assert xs == sorted(xs) and len(xs) == 1501


def test_resonance_density_peak_near_origin():
    samples = density_scan(RESONANCE_E, -5, 10, 0.01)
    peak = max(samples, key=lambda s: s.density)
    at0 = next(s for s in samples if s.x == 0.0)
    assert abs(peak.x) <= 0.1
    assert at0.density >= 0.99 * peak.density


def test_density_oscillation_decays_like_inverse_x():
    c = physical_coefficients(RESONANCE_E)

    def amplitude(x0):
        rho = [physical_psi(RESONANCE_E, x, c).density for x in np.linspace(x0, x0 + 1, 401)]
        return max(rho) - min(rho)

    ratio = amplitude(10) * 10.5 / (amplitude(20) * 20.5)
    assert 0.85 <= ratio <= 1.15


def test_gamow_density_tail_decays_without_oscillation():
    samples = density_scan(GAMOW_POLE, 8, 30, 0.05, Normalization.GAMOW)
    rho = np.array([s.density for s in samples])
    assert np.all(np.diff(rho) < 0)


def test_density_scan_single_sample_and_validation():
    assert len(density_scan(RESONANCE_E, 1.0, 1.0, 0.1)) == 1
    with pytest.raises(ValueError):
        density_scan(RESONANCE_E, 1.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        density_scan(RESONANCE_E, 0.0, 1.0, -0.1)
    with pytest.raises(ValueError):
        density_scan(RESONANCE_E, -40.0, 1.0, 0.1)


def test_x_grid_has_no_negative_zero():
    g = x_grid(-1, 1, 0.1)
    assert len(g) == 21
    assert not any(math.copysign(1, x) < 0 for x in g if x == 0)
