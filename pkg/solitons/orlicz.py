"""
The Orlicz function

    Psi(y) = alpha y^2 - y^3 / 3                            for 0 <= y < alpha
    Psi(y) = (2/3) alpha^3 + alpha^2 (y - alpha) + (y - alpha)^3    for y >= alpha

with its derivative, the explicit inverse of the derivative, the gauge
norm N_Psi and the pairing <f, Psi'(f)>.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import optimize

from .exceptions import ConstraintError, GaugeNormError, ValidationFailure
from .grid import check_same_grid, inner_product, lp_norm, quadrature


logger = logging.getLogger(__name__)


# B / alpha, the positive root of s^3 - 4 s + 8/3 = 0 (where 2 Psi(y) = y Psi'(y))
B_RATIO = 4.0 / math.sqrt(3.0) * math.cos(5.0 * math.pi / 18.0)

GAUGE_RTOL = 4.0 * np.finfo(float).eps
CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class OrliczParams:
    """
    The constraint parameter alpha and the constants derived from it.
    """

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (math.isfinite(alpha) and alpha > 0.0):
            raise ValidationFailure(f"alpha must be a positive number, got {self.alpha}.")
        object.__setattr__(self, 'alpha', alpha)

    @property
    def B(self):
        return B_RATIO * self.alpha

    @property
    def psi_at_alpha(self):
        """Psi(alpha) = (2/3) alpha^3, the value where the two pieces meet."""
        return 2.0 * self.alpha ** 3 / 3.0


def _unwrap(values):
    return float(values) if np.ndim(values) == 0 else values


def psi(y, p):
    a = p.alpha
    y = np.abs(np.asarray(y, dtype=float))
    d = y - a
    below = a * y * y - y ** 3 / 3.0
    above = p.psi_at_alpha + a * a * d + d ** 3
    return _unwrap(np.where(y < a, below, above))


def psi_prime(y, p):
    # odd extension of the derivative of the even Psi
    a = p.alpha
    y = np.asarray(y, dtype=float)
    t = np.abs(y)
    d = t - a
    values = np.where(t < a, 2.0 * a * t - t * t, a * a + 3.0 * d * d)
    return _unwrap(np.sign(y) * values)


def psi_prime_inv(g, p):
    """
    Inverse of psi_prime: alpha - sqrt(alpha^2 - g) up to g = alpha^2, then
    alpha + sqrt((g - alpha^2) / 3).
    """
    a = p.alpha
    g = np.asarray(g, dtype=float)
    t = np.abs(g)
    a2 = a * a
    # g / (alpha + sqrt(alpha^2 - g)) is the cancellation-free form of alpha - sqrt(alpha^2 - g)
    below = t / (a + np.sqrt(np.maximum(a2 - t, 0.0)))
    above = a + np.sqrt(np.maximum(t - a2, 0.0) / 3.0)
    return _unwrap(np.sign(g) * np.where(t <= a2, below, above))


def delta2_ratio(y, p):
    """
    Psi(2y) / Psi(y), bounded by delta2_constant() for every y > 0.
    """
    y = np.asarray(y, dtype=float)
    return _unwrap(np.asarray(psi(2.0 * y, p)) / np.asarray(psi(y, p)))


def delta2_constant():
    """
    sup_y Psi(2y) / Psi(y). Psi_alpha(y) = alpha^3 Psi_1(y / alpha), so the
    constant does not depend on alpha; the supremum sits near y = 2.6 alpha.
    """
    unit = OrliczParams(1.0)
    found = optimize.minimize_scalar(
        lambda s: -delta2_ratio(s, unit), bounds=(0.5, 20.0), method="bounded", options={"xatol": 1e-10},
    )
    return float(-found.fun)


def branch_cap():
    """
    3 B^2 / (2 + 3 (B - 1) + 3 (B - 1)^3) with B = B / alpha, the small-alpha
    limit of alpha J^2 (about 1.7422).
    """
    b = B_RATIO
    return 3.0 * b * b / (2.0 + 3.0 * (b - 1.0) + 3.0 * (b - 1.0) ** 3)


def modular(f, p):
    """int Psi(|f|) dx."""
    return quadrature(f.with_values(psi(f.values, p)))


def gauge_norm(f, p):
    """
    The lambda > 0 with int Psi(|f| / lambda) dx = 1.

    lambda -> int Psi(|f| / lambda) is strictly decreasing, so a bracket plus
    Brent's method finds the unique root.
    """
    magnitude = np.abs(f.values)
    if not np.any(magnitude > 0.0):
        raise GaugeNormError("The gauge norm of the zero function is undefined.")
    dx = f.grid.dx

    def excess(scale):
        return dx * float(np.sum(psi(magnitude / scale, p))) - 1.0

    a = p.alpha
    lo = float(magnitude.max()) / (10.0 * a)
    hi = 10.0 * (lp_norm(f, 2) + lp_norm(f, 3)) * (1.0 + 1.0 / a)

    # expand the bracket geometrically until it straddles the root
    for _ in range(200):
        if excess(lo) > 0.0:
            break
        lo /= 4.0
    else:
        raise GaugeNormError("Could not bracket the gauge norm from below.")
    for _ in range(200):
        if excess(hi) < 0.0:
            break
        hi *= 4.0
    else:
        raise GaugeNormError("Could not bracket the gauge norm from above.")

    return optimize.brentq(excess, lo, hi, xtol=1e-300, rtol=GAUGE_RTOL, maxiter=200)


def normalize(f, p):
    return f / gauge_norm(f, p)


def check_constraint(f, p, tol=CONSTRAINT_TOL):
    """
    Raise ConstraintError unless gauge_norm(f) = 1 within tol; returns the norm.
    """
    norm = gauge_norm(f, p)
    if abs(norm - 1.0) > tol:
        raise ConstraintError(f"Gauge norm is {norm!r}, expected 1 within {tol:g}.")
    return norm


def pairing(f, p):
    """<f, Psi'(f)> by quadrature."""
    return quadrature(f.with_values(f.values * psi_prime(f.values, p)))


def pairing_identity(f, p):
    """
    Closed form of <f, Psi'(f)> for gauge-normalized f >= 0:

        2 - (1/3) int_{f < alpha} f^3
          + int_{f >= alpha} [alpha^2 (2 alpha / 3 - f) + (f - alpha)^3 + 3 alpha (f - alpha)^2]
    """
    a = p.alpha
    y = np.abs(f.values)
    d = y - a
    integrand = np.where(
        y < a,
        -y ** 3 / 3.0,
        a * a * (2.0 * a / 3.0 - y) + d ** 3 + 3.0 * a * d * d,
    )
    return 2.0 + f.grid.dx * float(np.sum(integrand))


def gateaux_derivative(f0, h, p):
    """
    d/de N_Psi(f0 + e h) at e = 0 for gauge-normalized f0:
    <h, Psi'(f0)> / <f0, Psi'(f0)>.
    """
    check_same_grid(f0, h)
    check_constraint(f0, p)
    derivative = f0.with_values(psi_prime(f0.values, p))
    return inner_product(h, derivative) / inner_product(f0, derivative)


def l2_budget(f, p):
    """
    alpha ||f||^2 - 1. For gauge-normalized f it is at most ||f||_3^3 / 3,
    with equality exactly when f <= alpha.
    """
    return p.alpha * inner_product(f, f) - 1.0


def norm_equivalence(f, p):
    """
    (sqrt(alpha) ||f||_2, ||f||_3). When gauge_norm(f) = 1 the larger of the
    two lies in [1/sqrt(2), sqrt(3.1)] whatever alpha is.
    """
    return math.sqrt(p.alpha) * lp_norm(f, 2), lp_norm(f, 3)


def rescale_profile(q, alpha, grid):
    """
    f(x) = alpha q(alpha^3 x) for a vectorised profile q.
    """
    alpha = float(alpha)
    return grid.sample(lambda x: alpha * q(alpha ** 3 * x))
