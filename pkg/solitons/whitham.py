"""
Solitary waves of the steady Whitham equation

    -mu phi + K * phi + phi^2 = 0

obtained from constrained maximizers by

    phi = J^2 f / (2 - (1/3) int f^3),    mu = 2 alpha J^2 / (2 - (1/3) int f^3).
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .conf import solver_setting
from .exceptions import DegenerateInputError, DiscriminantError, NonPhysicalMaximizerError, ValidationFailure
from .grid import lp_norm, quadrature
from .kernel import convolve
from .maximize import el_residual, make_result
from .orlicz import OrliczParams
from .output import read_profile, read_summary
from .rearrange import is_bell_shaped


logger = logging.getLogger(__name__)


# relative size of mu^2 - 4 K * phi that still counts as zero
DISCRIMINANT_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class SolitaryWave:
    phi: object = field(repr=False)
    mu: float
    alpha: float
    diagnostics: dict = field(default_factory=dict)


def _sup(phi):
    sup = lp_norm(phi, np.inf)
    if sup == 0.0:
        raise DegenerateInputError("The wave profile vanishes identically.")
    return sup


def steady_residual(w, norm=np.inf):
    """
    ||-mu phi + K * phi + phi^2|| / ||phi|| in the sup norm (or L^2 with norm=2).
    """
    phi = w.phi
    scale = lp_norm(phi, norm)
    if scale == 0.0:
        raise DegenerateInputError("The wave profile vanishes identically.")
    defect = -w.mu * phi.values + convolve(phi).values + phi.values ** 2
    return lp_norm(phi.with_values(defect), norm) / scale


def branch_identity(w):
    """
    ||phi - (mu - sqrt(mu^2 - 4 K * phi)) / 2||_inf / ||phi||_inf.
    """
    phi = w.phi
    mu = w.mu
    discriminant = mu * mu - 4.0 * convolve(phi).values
    lowest = float(discriminant.min())
    if lowest < -DISCRIMINANT_CLAMP * mu * mu:
        raise DiscriminantError(
            f"mu^2 - 4 K * phi reaches {lowest:.3e}; the profile exceeds mu / 2 somewhere."
        )
    branch = 0.5 * (mu - np.sqrt(np.maximum(discriminant, 0.0)))
    return float(np.max(np.abs(phi.values - branch))) / _sup(phi)


def mass_identity(w):
    """
    |(mu - 1) int phi - int phi^2| / int phi^2.
    """
    phi = w.phi
    squares = quadrature(phi.with_values(phi.values ** 2))
    if squares == 0.0:
        raise DegenerateInputError("The wave profile vanishes identically.")
    return abs((w.mu - 1.0) * quadrature(phi) - squares) / squares


def _diagnostics(w, f):
    phi = w.phi
    sup_phi = _sup(phi)
    half_speed = w.mu / 2.0
    discriminant_at_peak = w.mu ** 2 - 4.0 * float(convolve(phi).values[phi.grid.origin])
    return {
        'steady_residual': steady_residual(w),
        'steady_residual_l2': steady_residual(w, norm=2),
        'branch_residual': branch_identity(w),
        'mass_identity_gap': mass_identity(w),
        'sup_phi': sup_phi,
        'mu_over_2': half_speed,
        'phi_over_f_ratio': w.alpha * sup_phi / lp_norm(f, np.inf),
        'l1_norm': lp_norm(phi, 1),
        'l2_norm': lp_norm(phi, 2),
        'extreme_gap': half_speed - phi.peak,
        'possible_extreme': bool(discriminant_at_peak <= DISCRIMINANT_CLAMP * w.mu ** 2),
        'bell_shaped': is_bell_shaped(phi, atol=1e-14 * sup_phi),
    }


def to_wave(r, p):
    """
    Transform a converged maximizer with f(0) <= alpha into a solitary wave.
    """
    if not r.converged:
        raise ValidationFailure(f"The maximizer at alpha={p.alpha:g} did not converge (residual {r.residual:.3e}).")
    if r.peak_ratio > 1.0:
        raise NonPhysicalMaximizerError(
            f"f(0) / alpha = {r.peak_ratio:.6f} > 1 at alpha={p.alpha:g}; "
            f"the transformed profile does not solve the steady Whitham equation."
        )

    f = r.f
    energy = r.J ** 2
    denominator = 2.0 - r.l3_cubed / 3.0
    phi = f * (energy / denominator)
    mu = 2.0 * p.alpha * energy / denominator

    wave = SolitaryWave(phi=phi, mu=mu, alpha=p.alpha)
    wave.diagnostics.update(_diagnostics(wave, f))
    logger.info(
        "alpha=%g: mu=%.12f, sup phi=%.6e, steady residual %.2e",
        p.alpha, mu, wave.diagnostics['sup_phi'], wave.diagnostics['steady_residual'],
    )
    return wave


def wave_from_files(json_path, csv_path, tol=None):
    """
    Rebuild a maximizer from the JSON summary and CSV profile written by
    `solve` and transform it. The profile counts as converged only when the
    stored summary says so and its recomputed residual is within tol
    (settings TOL by default).
    """
    summary = read_summary(json_path)
    f = read_profile(csv_path)
    p = OrliczParams(summary['alpha'])

    residual = el_residual(f, p)
    tol = solver_setting('TOL') if tol is None else tol
    if not summary["converged"]:
        tol = -math.inf
    result = make_result(f, p, residual, summary.get("iterations", 0), tol)
    return result, to_wave(result, p)
