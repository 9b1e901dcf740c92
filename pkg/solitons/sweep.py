"""
Continuation of maximizers in alpha, the branch checks on alpha J^2 and
the bisection estimate of the threshold alpha_0 above which maximizers
stay below alpha at the origin.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np

from .conf import solver_setting
from .exceptions import BracketError, SolitonError, TruncationError, ValidationFailure
from .grid import GridFunction, grid_for_alpha, lp_norm, resample
from .maximize import SolverConfig, solve_max
from .orlicz import OrliczParams, branch_cap
from .whitham import to_wave


logger = logging.getLogger(__name__)


CONVERGED = 'converged'
NOT_CONVERGED = 'not_converged'
INCONCLUSIVE = 'inconclusive'  # converged, but the profile has not decayed inside the domain
NON_PHYSICAL = 'non_physical'  # converged with f(0) > alpha
FAILED = 'failed'

# above this alpha maximizers follow the long-wave scaling f(x) ~ F(x / alpha) / alpha
LONG_WAVE_ALPHA = 3.0


@dataclass(frozen=True, eq=False)
class SweepRow:
    alpha: float
    J: float = None
    alphaJ2: float = None
    peak_ratio: float = None
    mu: float = None
    converged: bool = False
    status: str = FAILED
    residual: float = None
    iterations: int = 0
    l: int = None
    n: int = None
    message: str = ''
    result: object = field(default=None, repr=False)
    wave: object = field(default=None, repr=False)


@dataclass(frozen=True)
class ThresholdEvaluation:
    alpha: float
    peak_ratio: float
    converged: bool
    below_alpha: bool


@dataclass(frozen=True)
class ThresholdEstimate:
    lo: float
    hi: float
    delta: float
    evaluations: tuple = ()
    extreme_gap: float = None

    @property
    def width(self):
        return self.hi - self.lo


@dataclass(frozen=True)
class BranchSummary:
    rows: int
    converged_rows: int
    monotone: bool
    min_alphaJ2: float
    max_alphaJ2: float
    below_cap: bool
    in_window: bool
    max_step: float
    mu_decreasing: bool
    min_profile_gap: float
    flagged: bool


def log_alphas(lo, hi, steps):
    if not 0 < lo <= hi:
        raise ValidationFailure(f"Need 0 < alpha_min <= alpha_max, got {lo} and {hi}.")
    if steps < 1:
        raise ValidationFailure(f"steps must be >= 1, got {steps}.")
    if steps == 1:
        return [float(lo)]
    return [float(a) for a in np.geomspace(lo, hi, steps)]


def linear_alphas(lo, hi, steps):
    if not 0 < lo <= hi:
        raise ValidationFailure(f"Need 0 < alpha_min <= alpha_max, got {lo} and {hi}.")
    if steps < 1:
        raise ValidationFailure(f"steps must be >= 1, got {steps}.")
    if steps == 1:
        return [float(lo)]
    return [float(a) for a in np.linspace(lo, hi, steps)]


def fit_exponent(alphas, values):
    """
    Least-squares slope of log(value) against log(alpha).
    """
    alphas = np.asarray(alphas, dtype=float)
    values = np.asarray(values, dtype=float)
    if alphas.size < 2 or np.any(alphas <= 0) or np.any(values <= 0):
        raise ValidationFailure("fit_exponent needs at least two positive (alpha, value) pairs.")
    slope, _ = np.polyfit(np.log(alphas), np.log(values), 1)
    return float(slope)


def predict_profile(f, alpha_from, alpha_to, grid):
    """
    Warm start at alpha_to from the maximizer at alpha_from on `grid`.
    In the long-wave regime the profile is stretched by alpha_to / alpha_from
    and its height scaled by alpha_from / alpha_to; otherwise it is resampled.
    """
    if min(alpha_from, alpha_to) < LONG_WAVE_ALPHA:
        return resample(f, grid)
    ratio = alpha_from / alpha_to
    values = np.interp(np.asarray(grid.nodes) * ratio, f.grid.nodes, f.values, left=0.0, right=0.0)
    return GridFunction(grid, ratio * values)


def _row_from_result(alpha, result, status, message=''):
    wave = None
    mu = None
    if status == CONVERGED and result.peak_ratio > 1.0:
        status = NON_PHYSICAL
    if status == CONVERGED:
        wave = to_wave(result, OrliczParams(alpha))
        mu = wave.mu
    return SweepRow(
        alpha=alpha,
        J=result.J,
        alphaJ2=result.alpha_j2,
        peak_ratio=result.peak_ratio,
        mu=mu,
        converged=result.converged,
        status=status,
        residual=result.residual,
        iterations=result.iterations,
        l=result.grid.l,
        n=result.grid.n,
        message=message,
        result=result,
        wave=wave,
    )


def solve_row(alpha, grid=None, cfg=None, warm=None):
    """
    One sweep row; solver errors end up in the row instead of propagating.
    """
    grid = grid or grid_for_alpha(alpha, max_n=solver_setting('MAX_N'))
    p = OrliczParams(alpha)
    try:
        result = solve_max(p, grid, cfg, warm=warm)
    except TruncationError as error:
        logger.warning("alpha=%g: %s", alpha, error)
        return _row_from_result(alpha, error.result, INCONCLUSIVE, str(error))
    except SolitonError as error:
        logger.error("alpha=%g failed: %s", alpha, error)
        return SweepRow(alpha=alpha, l=grid.l, n=grid.n, message=str(error))
    status = CONVERGED if result.converged else NOT_CONVERGED
    return _row_from_result(alpha, result, status)


def _better(row, other):
    # the retry wins when it converged and the first attempt did not
    return other.status == CONVERGED and row.status != CONVERGED


def alpha_sweep(alphas, grid=None, cfg=None, cold=False, workers=1):
    """
    Solve for every alpha. Warm mode starts cold at the largest alpha and
    continues downward, each solve warm-started from its upper neighbour
    through predict_profile; rows that fail are retried upward from a
    converged lower neighbour.
    Cold mode solves every row from the initial bump, in parallel when
    workers > 1. Rows come back sorted by alpha.
    """
    alphas = sorted(float(a) for a in alphas)
    if not alphas:
        raise ValidationFailure("The alpha list is empty.")
    if alphas[0] <= 0:
        raise ValidationFailure(f"Every alpha must be positive, got {alphas[0]}.")
    if len(set(alphas)) != len(alphas):
        raise ValidationFailure("The alpha list has duplicates.")
    cfg = cfg or SolverConfig.from_settings()

    def grid_for(alpha):
        return grid or grid_for_alpha(alpha, max_n=solver_setting('MAX_N'))

    if cold:
        grids = [grid_for(alpha) for alpha in alphas]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(solve_row, alphas, grids, [cfg] * len(alphas)))
        else:
            rows = [solve_row(alpha, g, cfg) for alpha, g in zip(alphas, grids)]
        return rows

    rows = [None] * len(alphas)
    anchor = None
    for index in reversed(range(len(alphas))):
        alpha = alphas[index]
        target = grid_for(alpha)
        warm = None if anchor is None else predict_profile(anchor.result.f, anchor.alpha, alpha, target)
        row = solve_row(alpha, target, cfg, warm=warm)
        rows[index] = row
        if row.result is not None and row.status in (CONVERGED, NON_PHYSICAL, INCONCLUSIVE):
            anchor = row

    # upward pass for the rows the downward continuation lost
    for index in range(1, len(alphas)):
        below = rows[index - 1]
        if rows[index].status == CONVERGED or below.status != CONVERGED:
            continue
        logger.info("Retrying alpha=%g warm-started from alpha=%g", alphas[index], below.alpha)
        target = grid_for(alphas[index])
        warm = predict_profile(below.result.f, below.alpha, alphas[index], target)
        retry = solve_row(alphas[index], target, cfg, warm=warm)
        if _better(rows[index], retry):
            rows[index] = retry
    return rows


def _profile_gap(first, second):
    # L^2 distance on the first row's grid
    f = first.result.f
    g = resample(second.result.f, f.grid)
    return lp_norm(f.with_values(f.values - g.values), 2)


def branch_summary(rows, alpha0_hi=None):
    """
    Monotonicity of alpha J^2, the cap and window checks, the largest jump
    between neighbours, monotonicity of mu and distinctness of profiles,
    over the converged physical rows.
    """
    good = sorted((row for row in rows if row.status == CONVERGED), key=lambda row: row.alpha)
    values = np.array([row.alphaJ2 for row in good], dtype=float)
    steps = np.diff(values)
    mus = np.array([row.mu for row in good], dtype=float)

    window_rows = [row for row in good if alpha0_hi is None or row.alpha > alpha0_hi]
    in_window = all(1.0 < row.alphaJ2 < 1.5 for row in window_rows)
    gaps = [_profile_gap(a, b) for a, b in zip(good, good[1:])]

    monotone = bool(np.all(steps < 0.0))
    summary = BranchSummary(
        rows=len(rows),
        converged_rows=len(good),
        monotone=monotone,
        min_alphaJ2=float(values.min()) if values.size else None,
        max_alphaJ2=float(values.max()) if values.size else None,
        below_cap=bool(np.all(values < branch_cap())),
        in_window=in_window,
        max_step=float(np.max(np.abs(steps))) if steps.size else 0.0,
        mu_decreasing=bool(np.all(np.diff(mus) < 0.0)),
        min_profile_gap=float(min(gaps)) if gaps else None,
        flagged=not monotone,
    )
    if summary.flagged:
        logger.warning("alpha J^2 is not strictly decreasing across the converged rows")
    return summary


def estimate_alpha0(lo, hi, tol, grid=None, cfg=None, delta=1e-6):
    """
    Bisection on P(alpha) = (converged and f(0) < alpha (1 - delta)) down to
    a bracket of width <= tol. The measured gap mu/2 - phi(0) at the upper
    end is reported, nothing is concluded from it.
    """
    if not 0 < lo < hi:
        raise ValidationFailure(f"Need 0 < lo < hi, got {lo} and {hi}.")
    if not tol > 0:
        raise ValidationFailure(f"tol must be positive, got {tol}.")
    cfg = cfg or SolverConfig.from_settings()
    evaluations = []
    rows = {}

    def predicate(alpha, warm=None):
        row = solve_row(alpha, grid, cfg, warm=warm)
        rows[alpha] = row
        converged = row.status in (CONVERGED, NON_PHYSICAL)
        below = converged and row.peak_ratio < 1.0 - delta
        evaluations.append(
            ThresholdEvaluation(alpha, row.peak_ratio, converged, below)
        )
        logger.info("P(%.6f) = %s (f(0)/alpha = %s)", alpha, below, row.peak_ratio)
        return below

    at_lo = predicate(lo)
    at_hi = predicate(hi)
    if at_lo == at_hi:
        raise BracketError(
            f"The bracket [{lo:g}, {hi:g}] does not straddle the threshold: P is {at_lo} at both ends."
        )

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        # warm start from the end where the predicate holds
        anchor = rows[hi] if at_hi else rows[lo]
        warm = anchor.result.f if anchor.result is not None else None
        if predicate(mid, warm=warm) == at_hi:
            hi = mid
        else:
            lo = mid

    upper = rows[hi] if at_hi else rows[lo]
    gap = upper.wave.diagnostics['extreme_gap'] if upper.wave is not None else None
    estimate = ThresholdEstimate(lo=lo, hi=hi, delta=delta, evaluations=tuple(evaluations), extreme_gap=gap)
    logger.info("alpha_0 in [%.6f, %.6f] after %d solves", lo, hi, len(evaluations))
    return estimate
