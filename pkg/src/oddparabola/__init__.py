"""Exact scattering solution for the parabolic odd potential V = x**2 (x < 0), -x**2 (x > 0)."""

from .errors import (AccuracyFloorError, AtPoleError, GammaPoleError,
                     SeriesConvergenceError, UnwrapError)
from .poles import (PoleRecord, TaylorCoeff, bisector_pole_approx, d_prime, find_poles,
                    find_s_zeros, taylor_coeff_b)
from .scattering import (ConnectionFactors, ScatterPoint, connection_factors, d_of_e, dn_de,
                         n_of_e, phase_shift_scan, s_from_connection, s_of_e, time_delay)
from .solutions import (Family, Normalization, PhysCoeffs, Side, SolutionId, density_scan,
                        eval_frobenius, eval_thome, physical_coefficients, physical_psi)
from .specfun import digamma, gamma, hyp1f1, hyp2f0_asymptotic, recip_gamma, recip_gamma_derivs

__version__ = "0.1.0"
