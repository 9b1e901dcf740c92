"""
Numerical maximization of J(f)^2 = <f, K * f> under the gauge constraint
N_Psi(f) = 1 through the Euler-Lagrange fixed point

    f = (Psi')^-1( <f, Psi'(f)> / J(f)^2 * K * f ),

projected after every step onto non-negative, bell-shaped, gauge-normalized
profiles.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
import logging
import math

import numpy as np
from scipy import integrate, optimize

from .conf import solver_setting
from .exceptions import (
    ConstraintError,
    DegenerateInputError,
    SupportError,
    TruncationError,
    ValidationFailure,
)
from .grid import Grid, GridFunction, grid_for_alpha, inner_product, lp_norm, resample
from .kernel import convolve, quad_form
from .orlicz import (
    B_RATIO,
    check_constraint,
    gauge_norm,
    l2_budget,
    normalize,
    pairing,
    psi_prime,
    psi_prime_inv,
    rescale_profile,
)
from .rearrange import is_bell_shaped, symmetric_rearrangement


logger = logging.getLogger(__name__)


# relative tail f(L/2) / f(0) above which the domain is too short
TAIL_LIMIT = 1e-8
# a mixed iterate is dropped when it multiplies the residual by more than this
ANDERSON_SAFEGUARD = 2.0
# consecutive residual decreases before the damping is doubled back
DAMPING_RECOVERY = 20
MAX_DOUBLINGS = 3


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 10000
    damping: float = 1.0
    damping_floor: float = 0.05
    rearrange_every: int = 1
    anderson_depth: int = 16

    def __post_init__(self):
        if not self.tol > 0:
            raise ValidationFailure(f"tol must be positive, got {self.tol}.")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValidationFailure(f"max_iter must be an integer >= 1, got {self.max_iter}.")
        if not 0 < self.damping <= 1:
            raise ValidationFailure(f"damping must lie in (0, 1], got {self.damping}.")
        if not 0 < self.damping_floor <= self.damping:
            raise ValidationFailure(f"damping_floor must lie in (0, damping], got {self.damping_floor}.")
        if int(self.rearrange_every) != self.rearrange_every or self.rearrange_every < 1:
            raise ValidationFailure(f"rearrange_every must be an integer >= 1, got {self.rearrange_every}.")
        if int(self.anderson_depth) != self.anderson_depth or self.anderson_depth < 0:
            raise ValidationFailure(f"anderson_depth must be an integer >= 0, got {self.anderson_depth}.")

    @classmethod
    def from_settings(cls, **overrides):
        """
        Defaults from settings.SOLITONS; keyword arguments win.
        """
        values = {
            'tol': solver_setting('TOL'),
            'max_iter': solver_setting('MAX_ITER'),
            'damping': solver_setting('DAMPING'),
            'damping_floor': solver_setting('DAMPING_FLOOR'),
            'anderson_depth': solver_setting('ANDERSON_DEPTH'),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    J: float
    residual: float
    damping: float
    accelerated: bool


@dataclass(frozen=True, eq=False)
class MaximizerResult:
    f: GridFunction = field(repr=False)
    J: float
    pairing: float
    residual: float
    iterations: int
    converged: bool
    peak_ratio: float
    alpha: float
    grid: Grid
    l1_norm: float
    l3_cubed: float
    moment: float
    tail_ratio: float
    history: tuple = field(default=(), repr=False)

    @property
    def alpha_j2(self):
        return self.alpha * self.J ** 2


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: float
    bound: float
    passed: bool


# INITIAL GUESS

def _unit_bump(x):
    # exp(-1 / (1 - x^2)) on |x| < 1, zero elsewhere
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


@lru_cache(maxsize=1)
def bump_constants():
    """
    (c, int q0^2, int q0^3) with q = c q0 and int q^2 - q^3 / 3 = 1,
    q0 the unit bump; c is the root below the maximum of c^2 I2 - c^3 I3 / 3.
    """
    squares, _ = integrate.quad(lambda x: math.exp(-2.0 / (1.0 - x * x)), -1.0, 1.0)
    cubes, _ = integrate.quad(lambda x: math.exp(-3.0 / (1.0 - x * x)), -1.0, 1.0)

    def excess(c):
        return c * c * squares - c ** 3 * cubes / 3.0 - 1.0

    peak = 2.0 * squares / cubes
    constant = optimize.brentq(excess, 0.0, peak, xtol=1e-15)
    return constant, squares, cubes


def bump(x):
    constant = bump_constants()[0]
    return constant * _unit_bump(x)


def initial_guess(p, grid):
    """
    f = alpha q(alpha^3 x), renormalized.

    When the alpha^3-compressed support is narrower than eight cells or
    wider than the domain, q is replaced by mu q(mu^2 eta x) with
    mu = 1 / (1 + alpha^2) and eta = ||q||_2^2 - (mu / 3) ||q||_3^3.
    """
    constant, squares, cubes = bump_constants()
    alpha = p.alpha
    min_width = 8.0 * grid.dx
    shape, squeeze = 1.0, 1.0

    if not min_width <= alpha ** -3 <= grid.L:
        mu = 1.0 / (1.0 + alpha * alpha)
        eta = constant ** 2 * squares - mu / 3.0 * constant ** 3 * cubes
        shape, squeeze = mu, mu * mu * eta
        logger.debug("Initial bump uses the mu-scaling: mu=%.3e, eta=%.6f", mu, eta)

    half_width = 1.0 / (alpha ** 3 * squeeze)
    if half_width < min_width:
        half_width = min_width
        squeeze = 1.0 / (alpha ** 3 * min_width)
    if half_width > grid.L:
        raise SupportError(
            f"The initial bump (half-width {half_width:.4g}) does not fit in [-{grid.L:g}, {grid.L:g}); "
            f"use a larger domain exponent l."
        )

    f = rescale_profile(lambda x: shape * bump(squeeze * x), alpha, grid)
    return normalize(symmetric_rearrangement(f), p)


# EULER-LAGRANGE MAP

def _fixed_point_values(f, p):
    # (Psi')^-1(lambda K * f) with lambda = <f, Psi'(f)> / J^2
    smoothed = convolve(f)
    energy = inner_product(f, smoothed)
    if energy <= 0.0:
        raise DegenerateInputError("J(f)^2 vanishes; the Euler-Lagrange step is undefined.")
    multiplier = pairing(f, p) / energy
    # K * f >= 0 for f >= 0 up to round-off
    return psi_prime_inv(np.maximum(multiplier * smoothed.values, 0.0), p)


def _project(values, grid, p, rearrange=True):
    f = GridFunction(grid, np.maximum(values, 0.0))
    if rearrange:
        f = symmetric_rearrangement(f)
    if not np.any(f.values > 0.0):
        raise DegenerateInputError("The iterate vanished identically.")
    return normalize(f, p)


def el_step(f, p, damping=1.0):
    """
    One damped Euler-Lagrange step followed by the clamp, the symmetric
    rearrangement and the gauge renormalization.
    """
    if not 0 < damping <= 1:
        raise ValidationFailure(f"damping must lie in (0, 1], got {damping}.")
    if np.any(f.values < 0.0):
        raise ConstraintError("The Euler-Lagrange step needs a non-negative profile.")
    check_constraint(f, p, tol=1e-8)

    raw = _fixed_point_values(f, p)
    return _project((1.0 - damping) * f.values + damping * raw, f.grid, p)


def el_residual(f, p):
    """
    ||K * f - (J^2 / <f, Psi'(f)>) Psi'(f)||_2 / ||K * f||_2.
    """
    smoothed = convolve(f)
    scale = lp_norm(smoothed, 2)
    pair = pairing(f, p)
    if scale == 0.0 or pair == 0.0:
        raise DegenerateInputError("The Euler-Lagrange residual is undefined for this profile.")
    defect = smoothed.values - quad_form(f) / pair * psi_prime(f.values, p)
    return lp_norm(f.with_values(defect), 2) / scale


class AndersonMixer:
    """
    Anderson mixing for the fixed-point map g: the next iterate combines the
    last `depth` iterates so that the linearized residual is minimal in the
    least-squares sense.
    """

    def __init__(self, depth):
        self.depth = depth
        self._iterates = deque(maxlen=depth + 1)
        self._residuals = deque(maxlen=depth + 1)

    def reset(self):
        self._iterates.clear()
        self._residuals.clear()

    def mix(self, x, g, damping=1.0):
        """
        Record (x, g(x)); returns the mixed iterate or None while the history
        holds a single entry.
        """
        if self.depth == 0:
            return None
        residual = g - x
        self._iterates.append(np.array(x))
        self._residuals.append(residual)
        if len(self._residuals) < 2:
            return None

        iterate_steps = np.diff(np.array(self._iterates), axis=0).T
        residual_steps = np.diff(np.array(self._residuals), axis=0).T
        gamma, *_ = np.linalg.lstsq(residual_steps, residual, rcond=None)
        return x - iterate_steps @ gamma + damping * (residual - residual_steps @ gamma)


# SOLVER

def _prepare_warm_start(warm, grid, p):
    if np.any(warm.values < 0.0):
        raise ConstraintError("The warm start must be non-negative.")
    return _project(resample(warm, grid).values, grid, p)


def make_result(f, p, residual, iterations, tol, history=()):
    """
    Package a profile and its diagnostics; used by the solver and when a
    profile is read back from disk.
    """
    grid = f.grid
    peak = f.peak
    tail = float(f.values[grid.origin + grid.n // 4])
    return MaximizerResult(
        f=f,
        J=math.sqrt(quad_form(f)),
        pairing=pairing(f, p),
        residual=residual,
        iterations=iterations,
        converged=residual <= tol,
        peak_ratio=peak / p.alpha,
        alpha=p.alpha,
        grid=grid,
        l1_norm=lp_norm(f, 1),
        l3_cubed=lp_norm(f, 3) ** 3,
        moment=float(np.max(np.abs(grid.nodes) * f.values)),
        tail_ratio=tail / peak if peak > 0 else math.inf,
        history=tuple(history),
    )


def solve_max(p, grid, cfg=None, warm=None):
    """
    Iterate el_step (with Anderson mixing and damping control) until the
    Euler-Lagrange residual reaches cfg.tol or cfg.max_iter is exhausted.

    Never raises on non-convergence: the result carries converged=False.
    A converged profile that has not decayed by x = L/2 raises
    TruncationError carrying the result.
    """
    cfg = cfg or SolverConfig.from_settings()
    f = initial_guess(p, grid) if warm is None else _prepare_warm_start(warm, grid, p)
    residual = el_residual(f, p)
    logger.info(
        "Solving alpha=%g on l=%d, n=%d (tol=%g, start residual %.3e)",
        p.alpha, grid.l, grid.n, cfg.tol, residual,
    )

    mixer = AndersonMixer(cfg.anderson_depth)
    damping = cfg.damping
    best_f, best_residual = f, residual
    energy = quad_form(f)
    history = [IterationRecord(0, math.sqrt(energy), residual, damping, False)]
    decreases = 0
    drops_in_j = 0
    iteration = 0

    while residual > cfg.tol and iteration < cfg.max_iter:
        iteration += 1
        rearrange = iteration % cfg.rearrange_every == 0

        raw = _fixed_point_values(f, p)
        step = _project(raw, grid, p, rearrange=rearrange)
        mixed = mixer.mix(f.values, step.values, damping)

        candidate, accelerated = None, False
        if mixed is not None:
            try:
                mixed_f = _project(mixed, grid, p, rearrange=rearrange)
            except DegenerateInputError:
                mixed_f = None
            if mixed_f is not None:
                mixed_residual = el_residual(mixed_f, p)
                if mixed_residual <= ANDERSON_SAFEGUARD * residual:
                    candidate, candidate_residual, accelerated = mixed_f, mixed_residual, True
            if not accelerated:
                mixer.reset()

        if candidate is None:
            if damping < 1.0:
                step = _project((1.0 - damping) * f.values + damping * raw, grid, p, rearrange=rearrange)
            candidate, candidate_residual = step, el_residual(step, p)

        # damping control on the plain step
        if not accelerated and candidate_residual > residual:
            decreases = 0
            if damping > cfg.damping_floor:
                damping = max(damping / 2.0, cfg.damping_floor)
                logger.info("Iteration %d: residual increased, damping lowered to %g", iteration, damping)
        else:
            decreases += 1
            if decreases >= DAMPING_RECOVERY and damping < cfg.damping:
                damping = min(2.0 * damping, cfg.damping)
                decreases = 0
                logger.debug("Iteration %d: damping raised to %g", iteration, damping)

        f, residual = candidate, candidate_residual
        new_energy = quad_form(f)
        if new_energy < energy:
            drops_in_j += 1
        energy = new_energy
        history.append(IterationRecord(iteration, math.sqrt(energy), residual, damping, accelerated))
        logger.debug(
            "Iteration %d: J=%.15g residual=%.3e damping=%g accelerated=%s",
            iteration, math.sqrt(energy), residual, damping, accelerated,
        )
        if residual < best_residual:
            best_f, best_residual = f, residual

    if residual > cfg.tol and best_residual < residual:
        f, residual = best_f, best_residual

    if drops_in_j:
        logger.info("J decreased on %d of %d iterations", drops_in_j, iteration)

    result = make_result(f, p, residual, iteration, cfg.tol, history)
    if not result.converged:
        logger.warning(
            "alpha=%g did not converge in %d iterations (residual %.3e > %g)",
            p.alpha, iteration, residual, cfg.tol,
        )
        return result

    logger.info(
        "alpha=%g converged in %d iterations: J=%.15g, alpha J^2=%.12f, f(0)/alpha=%.6f",
        p.alpha, iteration, result.J, result.alpha_j2, result.peak_ratio,
    )
    if result.tail_ratio > TAIL_LIMIT:
        raise TruncationError(
            f"f(L/2) / f(0) = {result.tail_ratio:.3e} exceeds {TAIL_LIMIT:g} on l={grid.l}; "
            f"use a larger domain exponent l.",
            result=result,
        )
    return result


def solve_adaptive(p, cfg=None, grid=None, max_doublings=MAX_DOUBLINGS, warm=None):
    """
    solve_max on grid_for_alpha (or `grid`), doubling the domain and
    warm-starting from the resampled profile whenever it is too short.
    """
    max_n = solver_setting('MAX_N')
    grid = grid or grid_for_alpha(p.alpha, max_n=max_n)
    for attempt in range(max_doublings + 1):
        try:
            return solve_max(p, grid, cfg, warm=warm)
        except TruncationError as error:
            if attempt == max_doublings:
                raise
            warm = error.result.f
            grid = Grid(l=grid.l + 1, n=min(2 * grid.n, max_n))
            logger.info("Domain too short for alpha=%g, retrying on l=%d, n=%d", p.alpha, grid.l, grid.n)


# BOUNDS

def perturbation_test(result, p, count=20, rng=None, size=0.05):
    """
    J^2 of `count` random gauge-normalized bell-shaped perturbations of the
    maximizer. Returns (maximizer J^2, list of perturbed J^2).
    """
    rng = rng or np.random.default_rng(solver_setting('SEED'))
    f = result.f
    x = np.asarray(f.grid.nodes)
    # width scale of the profile: half-width at half maximum
    above = np.abs(x[f.values >= 0.5 * f.peak])
    width = max(float(above.max()) if above.size else 1.0, 2.0 * f.grid.dx)

    energies = []
    for _ in range(count):
        amplitude = rng.uniform(-size, size) * f.peak
        spread = rng.uniform(0.5, 2.0) * width
        values = f.values + amplitude * np.exp(-(x / spread) ** 2)
        energies.append(quad_form(_project(values, f.grid, p)))
    return quad_form(f), energies


def check_bounds(result, p, initial=None):
    """
    The quantitative properties of a converged maximizer, as named checks.
    """
    f = result.f
    alpha = p.alpha
    grid = f.grid
    initial = initial if initial is not None else initial_guess(p, grid)
    energy = quad_form(f)

    checks = []

    def add(name, value, bound, passed):
        checks.append(BoundCheck(name, float(value), float(bound), bool(passed)))

    norm = gauge_norm(f, p)
    add('gauge_norm', abs(norm - 1.0), 1e-10, abs(norm - 1.0) <= 1e-10)
    add('bell_shaped', 0.0 if is_bell_shaped(f) else 1.0, 0.0, is_bell_shaped(f))

    height_bound = B_RATIO * alpha * (1.0 + 1e-3)
    add('height', f.peak, height_bound, f.peak <= height_bound)
    add('pairing_lower', result.pairing, 1.0, result.pairing > 1.0)
    add('pairing_upper', result.pairing, 2.0, result.pairing < 2.0)
    add('energy', alpha * energy, 1.0, alpha * energy > 1.0)
    add('l3_nondegenerate', result.l3_cubed, 0.0, result.l3_cubed > 0.0)

    budget = l2_budget(f, p)
    add('l2_budget', budget, result.l3_cubed / 3.0, budget <= result.l3_cubed / 3.0 * (1.0 + 1e-10) + 1e-14)

    # last node, x = L - dx
    edge = float(f.values[-1]) / f.peak
    add('decay', edge, 1e-6, edge < 1e-6)
    moment_bound = 10.0 * (1.0 + alpha ** -2)
    add('moment', result.moment, moment_bound, result.moment <= moment_bound)

    start = quad_form(initial)
    add('beats_initial_guess', energy, start, energy >= start)
    return checks
