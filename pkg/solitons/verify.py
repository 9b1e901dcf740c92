"""
Named property suites: every check evaluates one quantitative property of
a module and records the measured value next to its bound.
"""

from dataclasses import dataclass
from functools import lru_cache
import logging
import math

import numpy as np

from .conf import solver_setting
from .exceptions import DiscriminantError, UnknownSuiteError
from .grid import Grid, grid_for_alpha, inner_product, lp_norm
from .kernel import (
    HALF_EXPONENT,
    WHITHAM_EXPONENT,
    alpha0_upper_bound,
    convolve,
    kernel_lp_norm,
    kernel_mass,
    kernel_table,
    quad_form,
    slobodeckij_gap,
    young_bound,
)
from .maximize import check_bounds, el_step, perturbation_test
from .orlicz import (
    B_RATIO,
    OrliczParams,
    branch_cap,
    delta2_constant,
    delta2_ratio,
    gateaux_derivative,
    gauge_norm,
    l2_budget,
    modular,
    norm_equivalence,
    normalize,
    pairing,
    pairing_identity,
    psi,
    psi_prime,
    psi_prime_inv,
)
from .rearrange import (
    decreasing_rearrangement,
    dist_fn,
    is_bell_shaped,
    layer_cake,
    rearrange_samples,
    support_radius,
    symmetric_rearrangement,
)
from .sweep import (
    CONVERGED,
    NON_PHYSICAL,
    alpha_sweep,
    branch_summary,
    fit_exponent,
    predict_profile,
    solve_row,
)
from .whitham import SolitaryWave, branch_identity


logger = logging.getLogger(__name__)


BRANCH_ALPHAS = (3.0, 5.0, 10.0, 20.0, 50.0)
EXTENDED_ALPHA = 100.0
LONG_WAVE_ALPHAS = (20.0, 50.0, EXTENDED_ALPHA)
BELL_PROFILES = 50
RIESZ_PROFILES = 100
ORLICZ_ALPHAS = (0.1, 1.0, 2.385, 10.0, 100.0)


@dataclass(frozen=True)
class CheckRow:
    suite: str
    name: str
    value: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    seed: int
    checks: tuple

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]


class _Checks:
    """
    Collects CheckRows for one suite.
    """

    def __init__(self, suite):
        self.suite = suite
        self.rows = []

    def add(self, name, value, bound, passed):
        value = None if value is None else float(value)
        bound = None if bound is None else float(bound)
        self.rows.append(CheckRow(self.suite, name, value, bound, bool(passed)))

    def at_most(self, name, value, bound):
        self.add(name, value, bound, value <= bound)

    def below(self, name, value, bound):
        self.add(name, value, bound, value < bound)

    def above(self, name, value, bound):
        self.add(name, value, bound, value > bound)

    def holds(self, name, passed):
        self.add(name, 1.0 if passed else 0.0, 1.0, passed)


def _default_grid():
    return Grid(l=solver_setting('DEFAULT_L'), n=solver_setting('DEFAULT_N'))


def _relative(a, b):
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def _smooth_profiles(grid):
    # fixed smooth, decaying test profiles
    return [
        grid.sample(lambda x: np.exp(-x ** 2)),
        grid.sample(lambda x: np.exp(-(x / 2.0) ** 2)),
        grid.sample(lambda x: np.exp(-4.0 * x ** 2)),
        grid.sample(lambda x: 1.0 / np.cosh(x) ** 2),
        grid.sample(lambda x: np.exp(-x ** 2) * np.cos(2.0 * x)),
    ]


def _random_profile(grid, rng, bumps=3):
    # non-negative sum of Gaussian bumps with random centres, widths and heights
    x = np.asarray(grid.nodes)
    values = np.zeros(grid.n)
    for _ in range(bumps):
        centre = rng.uniform(-0.25 * grid.L, 0.25 * grid.L)
        width = rng.uniform(0.3, 3.0)
        values += rng.uniform(0.1, 2.0) * np.exp(-((x - centre) / width) ** 2)
    return grid.sample(lambda _: values)


def _random_bell(grid, rng, bumps=3):
    # centred Gaussians with random widths and heights
    widths = rng.uniform(0.3, 3.0, bumps)
    heights = rng.uniform(0.1, 2.0, bumps)
    return grid.sample(lambda x: sum(h * np.exp(-(x / w) ** 2) for h, w in zip(heights, widths)))


@lru_cache(maxsize=1)
def _branch():
    """
    The warm-started sweep over BRANCH_ALPHAS, and the row at EXTENDED_ALPHA
    continued upward from the top of the branch (None when that row failed).
    """
    rows = tuple(alpha_sweep(BRANCH_ALPHAS))
    top = rows[-1]
    if top.status != CONVERGED:
        return rows, None
    target = grid_for_alpha(EXTENDED_ALPHA, max_n=solver_setting('MAX_N'))
    warm = predict_profile(top.result.f, top.alpha, EXTENDED_ALPHA, target)
    return rows, solve_row(EXTENDED_ALPHA, target, warm=warm)


# SUITES

def kernel_suite(rng, grid):
    checks = _Checks('kernel')
    table = kernel_table(grid, WHITHAM_EXPONENT)
    checks.at_most('mass', abs(kernel_mass(table) - 1.0), 1e-6)

    nodes, samples = table.nodes, table.samples
    positive = samples[nodes > 0]
    mirrored = samples[(nodes < 0) & (nodes > -grid.L)][::-1]
    checks.at_most('even', float(np.max(np.abs(positive - mirrored))) / positive[0], 1e-12)

    # shape on (0, 8]; further out the samples sit at the round-off level
    near = nodes[nodes > 0] <= 8.0
    head, x = positive[near], nodes[nodes > 0][near]
    floor = 1e-12 * head[0]
    checks.at_most('decreasing', float(np.max(np.diff(head))), floor)
    checks.add('convex', float(np.min(np.diff(head, 2))), -floor, np.min(np.diff(head, 2)) >= -floor)
    checks.holds('positive', bool(np.all(head > 0.0)))
    # near the origin only
    excess = (head * np.sqrt(2.0 * np.pi * x))[x <= 1.0]
    checks.below('below_homogeneous', float(np.max(excess)), 1.0)
    ratio = table.at(8.0) / table.at(4.0)
    checks.below('exponential_decay', ratio, 1.0 / 256.0)

    k_norm = kernel_lp_norm(table, 1.5)
    checks.below('l3_2_norm', k_norm, (2.0 / math.pi + 1.0) ** (2.0 / 3.0))
    checks.below('alpha0_bound', alpha0_upper_bound(k_norm), alpha0_upper_bound())

    for index in range(5):
        f = _random_profile(grid, rng)
        smoothed = convolve(f)
        checks.at_most(f'l2_contraction_{index}', lp_norm(smoothed, 2) / lp_norm(f, 2), 1.0 + 1e-12)
        checks.at_most(f'sup_contraction_{index}', lp_norm(smoothed, np.inf) / lp_norm(f, np.inf), 1.0 + 1e-6)
        lhs, rhs = young_bound(f, k_norm)
        checks.at_most(f'young_{index}', lhs / rhs, 1.0 + 1e-6)
        energy = quad_form(f)
        checks.at_most(f'quad_form_{index}', _relative(energy, inner_product(f, smoothed)), 1e-12)
        checks.at_most(
            f'quad_form_half_{index}', _relative(energy, lp_norm(convolve(f, HALF_EXPONENT), 2) ** 2), 1e-10,
        )

    preserved = 0
    for _ in range(BELL_PROFILES):
        smoothed = convolve(_random_bell(grid, rng))
        preserved += is_bell_shaped(smoothed, atol=1e-12 * lp_norm(smoothed, np.inf))
    checks.add('bell_preserved', preserved, BELL_PROFILES, preserved == BELL_PROFILES)

    for index, f in enumerate(_smooth_profiles(grid)):
        lhs, rhs = slobodeckij_gap(f)
        checks.below(f'slobodeckij_{index}', _relative(lhs, rhs), 1e-3)
    return checks.rows


def orlicz_suite(rng, grid):
    checks = _Checks('orlicz')
    for alpha in ORLICZ_ALPHAS:
        p = OrliczParams(alpha)
        left = np.nextafter(alpha, 0.0)
        checks.at_most(f'psi_continuous[{alpha:g}]', abs(psi(alpha, p) - psi(left, p)), 1e-12 * alpha ** 3)
        checks.at_most(
            f'psi_prime_continuous[{alpha:g}]', abs(psi_prime(alpha, p) - psi_prime(left, p)), 1e-12 * alpha ** 2,
        )
        b = p.B
        checks.at_most(f'b_root[{alpha:g}]', abs(2.0 * psi(b, p) - b * psi_prime(b, p)), 1e-10 * alpha ** 3)
        # compared on the g side: the inverse is ill-conditioned at y = alpha, where Psi'' = 0
        g = psi_prime(alpha * np.geomspace(1e-6, 10.0, 400), p)
        back = psi_prime(psi_prime_inv(g, p), p)
        checks.at_most(f'inverse[{alpha:g}]', float(np.max(np.abs(back - g) / g)), 1e-12)
        ratios = delta2_ratio(alpha * np.geomspace(1e-3, 1e3, 2001), p)
        checks.at_most(f'delta2_sampled[{alpha:g}]', float(np.max(ratios)), delta2_constant() * (1.0 + 1e-9))

    closed_form = 4.0 / math.sqrt(3.0) * math.cos(5.0 * math.pi / 18.0)
    checks.at_most('b_ratio', abs(B_RATIO - closed_form), 1e-15)
    checks.at_most('b_ratio_cubic', abs(B_RATIO ** 3 - 4.0 * B_RATIO + 8.0 / 3.0), 1e-12)
    constant = delta2_constant()
    checks.add('delta2_constant', constant, 12.5, 8.0 < constant < 12.5)
    checks.at_most('branch_cap', abs(branch_cap() - 1.7422), 1e-4)

    small = Grid(l=5, n=1024)
    for index in range(20):
        p = OrliczParams(rng.uniform(0.5, 10.0))
        f0 = normalize(_random_profile(small, rng), p)
        h = _random_profile(small, rng) * rng.choice((-1.0, 1.0))
        eps = 1e-5
        plus = gauge_norm(f0.with_values(f0.values + eps * h.values), p)
        minus = gauge_norm(f0.with_values(f0.values - eps * h.values), p)
        finite = (plus - minus) / (2.0 * eps)
        exact = gateaux_derivative(f0, h, p)
        checks.at_most(f'gateaux_{index}', abs(finite - exact) / max(1.0, abs(exact)), 1e-5)

        checks.at_most(f'modular_{index}', abs(modular(f0, p) - 1.0), 1e-12)
        checks.at_most(f'pairing_identity_{index}', _relative(pairing(f0, p), pairing_identity(f0, p)), 1e-10)
        larger = max(norm_equivalence(f0, p))
        checks.add(
            f'norm_equivalence_{index}', larger, math.sqrt(3.1), 1.0 / math.sqrt(2.0) <= larger <= math.sqrt(3.1),
        )
        cubes = lp_norm(f0, 3) ** 3
        checks.at_most(f'l2_budget_{index}', l2_budget(f0, p) - cubes / 3.0, 1e-12 * max(1.0, cubes))
    return checks.rows


def rearrange_suite(rng, grid):
    checks = _Checks('rearrange')
    placed = rearrange_samples([1.0, 3.0, 2.0, 5.0, 4.0], [-2.0, -1.0, 0.0, 1.0, 2.0])
    checks.holds('five_point_example', np.array_equal(placed, [2.0, 4.0, 5.0, 3.0, 1.0]))

    p = OrliczParams(2.0)
    for index in range(5):
        f = _random_profile(grid, rng)
        star = symmetric_rearrangement(f)
        checks.at_most(f'gauge_invariance_{index}', _relative(gauge_norm(star, p), gauge_norm(f, p)), 1e-12)
        checks.holds(f'bell_shaped_{index}', is_bell_shaped(star))
        levels = rng.uniform(0.0, lp_norm(f, np.inf), 5)
        checks.holds(f'equidistributed_{index}', all(dist_fn(star, s) == dist_fn(f, s) for s in levels))
        checks.holds(f'decreasing_{index}', bool(np.all(np.diff(decreasing_rearrangement(f)) <= 0.0)))
        normalized = normalize(f, p)
        checks.below(f'layer_cake_{index}', _relative(layer_cake(normalized, p), modular(normalized, p)), 1e-3)

    # J^2(f) <= J^2(f#), half on rough samples and half on off-centre bumps
    worst = -math.inf
    for index in range(RIESZ_PROFILES):
        if index % 2:
            f = _random_profile(grid, rng)
        else:
            f = grid.sample(lambda x: rng.uniform(0.0, 1.0, x.size))
        worst = max(worst, quad_form(f) - quad_form(symmetric_rearrangement(f)))
    checks.at_most('riesz', worst, 1e-10)

    x = np.asarray(grid.nodes)
    widest = -math.inf
    for _ in range(20):
        a, b = np.sort(rng.uniform(-0.25 * grid.L, 0.25 * grid.L, 2))
        f = grid.sample(lambda _: np.where((x >= a) & (x <= b), rng.uniform(0.1, 1.0, x.size), 0.0))
        if support_radius(f) == 0.0:
            continue
        widest = max(widest, support_radius(symmetric_rearrangement(f)) - support_radius(f))
    checks.at_most('support_preserved', widest, 0.0)
    return checks.rows


def _bound_checks(checks, row, rng):
    tag = f'[{row.alpha:g}]'
    result = row.result
    checks.holds('converged' + tag, row.status in (CONVERGED, NON_PHYSICAL))
    if result is None:
        return
    p = OrliczParams(row.alpha)
    checks.at_most('residual' + tag, result.residual, solver_setting('TOL'))
    checks.add('alphaJ2' + tag, result.alpha_j2, 1.5, 1.0 < result.alpha_j2 < 1.5)
    checks.at_most('branch_cap' + tag, result.alpha_j2, branch_cap())
    for bound in check_bounds(result, p):
        checks.add(bound.name + tag, bound.value, bound.bound, bound.passed)

    energy, perturbed = perturbation_test(result, p, count=20, rng=rng)
    checks.at_most('perturbations' + tag, max(perturbed) / energy, 1.0 + 1e-12)

    stepped = el_step(result.f, p)
    change = lp_norm(stepped.with_values(stepped.values - result.f.values), 2) / lp_norm(result.f, 2)
    checks.at_most('fixed_point' + tag, change, 1e-6)


def maximize_suite(rng, grid):
    checks = _Checks('maximize')
    rows, _ = _branch()
    for row in rows:
        _bound_checks(checks, row, rng)
    return checks.rows


def sweep_suite(rng, grid):
    checks = _Checks('sweep')
    rows, extended = _branch()
    summary = branch_summary(rows)
    checks.add('converged_rows', summary.converged_rows, len(rows), summary.converged_rows == len(rows))
    checks.holds('monotone', summary.monotone)
    checks.holds('in_window', summary.in_window)
    checks.at_most('below_cap', summary.max_alphaJ2, branch_cap())
    checks.holds('mu_decreasing', summary.mu_decreasing)
    checks.above('profiles_distinct', summary.min_profile_gap, 1e-8)

    by_alpha = {row.alpha: row for row in rows if row.status == CONVERGED}
    large = by_alpha.get(50.0)
    if large is not None:
        checks.add('alphaJ2_large', large.alphaJ2, 1.05, 1.0 < large.alphaJ2 < 1.05)
        checks.add('mu_large', large.mu - 1.0, 0.1, 0.0 < large.mu - 1.0 < 0.1)

    checks.holds('extended_converged', extended is not None and extended.status == CONVERGED)
    if extended is None or extended.status != CONVERGED:
        return checks.rows
    checks.add('mu_extended', extended.mu - 1.0, 0.02, 0.0 < extended.mu - 1.0 < 0.02)
    if large is not None:
        checks.below('alphaJ2_extended', extended.alphaJ2, large.alphaJ2)
    tall = [row for row in (*rows, extended) if row.alpha in LONG_WAVE_ALPHAS and row.status == CONVERGED]
    if len(tall) == len(LONG_WAVE_ALPHAS):
        exponent = fit_exponent([row.alpha for row in tall], [row.wave.diagnostics['sup_phi'] for row in tall])
        checks.at_most('sup_phi_exponent', exponent, -0.9)
    else:
        checks.holds('sup_phi_exponent', False)
    return checks.rows


def _wave_checks(checks, wave):
    alpha = wave.alpha
    d = wave.diagnostics
    mu = wave.mu
    tag = f'[{alpha:g}]'
    checks.at_most('steady_residual' + tag, d['steady_residual'], 1e-8)
    checks.at_most('branch_identity' + tag, d['branch_residual'], 1e-7)
    checks.at_most('mass_identity' + tag, d['mass_identity_gap'], 1e-6)
    checks.add('mu' + tag, mu, 2.0, 1.0 < mu < 2.0)
    checks.at_most('below_half_speed' + tag, d['sup_phi'], mu / 2.0 + 1e-10)
    checks.holds('positive_core' + tag, bool(wave.phi.peak > 0.0))
    checks.add('sup_lower' + tag, d['sup_phi'], mu - 1.0 - 1e-8, d['sup_phi'] >= mu - 1.0 - 1e-8)
    if alpha in BRANCH_ALPHAS:
        checks.above('l2_lower' + tag, d['l2_norm'], 0.5 * alpha ** -1.5)
    ratio = d['phi_over_f_ratio']
    checks.add('phi_over_f' + tag, ratio, 1.0, 0.5 <= ratio <= 1.0)
    checks.holds('bell_shaped' + tag, d['bell_shaped'])

    # the other root of the quadratic is not a solution
    phi = wave.phi
    flipped = phi.values.copy()
    flipped[phi.grid.origin] = mu - flipped[phi.grid.origin]
    try:
        gap = branch_identity(SolitaryWave(phi=phi.with_values(flipped), mu=mu, alpha=alpha))
    except DiscriminantError:
        gap = math.inf
    checks.above('wrong_branch' + tag, gap, 1e-3)


def whitham_suite(rng, grid):
    checks = _Checks('whitham')
    rows, extended = _branch()
    waves = [row.wave for row in (*rows, extended) if row is not None and row.wave is not None]
    checks.add('waves', len(waves), len(rows) + 1, len(waves) == len(rows) + 1)
    for wave in waves:
        _wave_checks(checks, wave)
    return checks.rows


_SUITES = {
    'kernel': kernel_suite,
    'orlicz': orlicz_suite,
    'rearrange': rearrange_suite,
    'maximize': maximize_suite,
    'sweep': sweep_suite,
    'whitham': whitham_suite,
}
SUITES = tuple(_SUITES)


def verify(suite, seed=None, grid=None):
    """
    Run one suite (or 'all') with a seeded generator; returns a VerifyReport.
    """
    if suite != 'all' and suite not in _SUITES:
        raise UnknownSuiteError(f"Unknown suite '{suite}'; choose one of {', '.join((*SUITES, 'all'))}.")
    seed = solver_setting('SEED') if seed is None else int(seed)
    grid = grid or _default_grid()
    names = SUITES if suite == 'all' else (suite,)

    rows = []
    for name in names:
        # one generator per suite keeps 'all' and single-suite runs identical
        rng = np.random.default_rng([seed, SUITES.index(name)])
        logger.info("Running suite %s (seed %d)", name, seed)
        suite_rows = _SUITES[name](rng, grid)
        failed = sum(not row.passed for row in suite_rows)
        logger.info("Suite %s: %d checks, %d failed", name, len(suite_rows), failed)
        rows.extend(suite_rows)
    return VerifyReport(suite=suite, seed=seed, checks=tuple(rows))
