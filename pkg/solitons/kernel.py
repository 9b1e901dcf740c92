"""
Dispersion symbols m_a(xi) = (tanh(xi) / xi)^a, the spectral convolution
K_a * f, the quadratic form J(f)^2 = <f, K * f> (K = K_{1/2}) and a
real-space kernel table for diagnostics.

Real-space samples use the splitting

    m_a = |xi|^-a  -  |xi|^-a e^-|xi| (1 + |xi|)  +  r(xi)

The first two pieces have closed-form transforms (a power of |x| and a
Laplace-type transform); r is bounded with |xi|^(2-a) behaviour at the
origin and exponential decay, and is transformed numerically on a refined
frequency grid.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import logging
import math

import numpy as np
from scipy import fft, integrate, interpolate
from scipy.special import gamma

from .grid import GridFunction, inner_product, lp_norm


logger = logging.getLogger(__name__)


WHITHAM_EXPONENT = 0.5
HALF_EXPONENT = 0.25
SERIES_CUTOFF = 1e-4


def _check_exponent(a, closed=True):
    upper_ok = a <= 1.0 if closed else a < 1.0
    if not (a > 0.0 and upper_ok):
        interval = "(0, 1]" if closed else "(0, 1)"
        raise ValueError(f"Kernel exponent must lie in {interval}, got {a}.")


def symbol(xi, a):
    """
    m_a(xi) = (tanh|xi| / |xi|)^a, exactly 1 at xi = 0.
    """
    _check_exponent(a)
    scalar = np.ndim(xi) == 0
    xi = np.abs(np.atleast_1d(np.asarray(xi, dtype=float)))
    values = np.empty_like(xi)

    # tanh(x)/x = 1 - x^2/3 + 2x^4/15 - ... avoids the 0/0 near the origin
    small = xi < SERIES_CUTOFF
    s = xi[small] ** 2
    values[small] = (1.0 - s / 3.0 + 2.0 * s * s / 15.0) ** a

    large = ~small
    values[large] = np.exp(a * (np.log(np.tanh(xi[large])) - np.log(xi[large])))

    if scalar:
        return float(values[0])
    return values


@dataclass(frozen=True, eq=False)
class SymbolTable:
    a: float
    grid: object
    values: np.ndarray = field(repr=False)
    rvalues: np.ndarray = field(repr=False)


@lru_cache(maxsize=64)
def symbol_table(grid, a):
    """
    Symbol sampled on the grid frequencies (full and rfft orderings), cached per grid.
    """
    values = symbol(np.asarray(grid.freqs), a)
    rvalues = symbol(np.asarray(grid.rfreqs), a)
    values.setflags(write=False)
    rvalues.setflags(write=False)
    return SymbolTable(a=a, grid=grid, values=values, rvalues=rvalues)


def convolve(f, a=WHITHAM_EXPONENT):
    """
    K_a * f by frequency-side multiplication. The symbol is real and even, so
    the real FFT keeps the output real.
    """
    table = symbol_table(f.grid, a)
    coeffs = fft.rfft(f.values)
    return GridFunction(f.grid, fft.irfft(coeffs * table.rvalues, n=f.grid.n))


def quad_form(f):
    """
    J(f)^2 = ||K_{1/4} * f||^2 = (1 / 2L) sum_k m(xi_k) |f_hat_k|^2.
    """
    grid = f.grid
    table = symbol_table(grid, WHITHAM_EXPONENT)
    power = np.abs(fft.rfft(f.values)) ** 2
    # rfft stores each +-k pair once, except k = 0 and the Nyquist mode
    weights = np.full(power.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    return float(grid.dx / grid.n * np.sum(weights * table.rvalues * power))


def homogeneous_coefficient(a):
    """
    c_a with F^-1(|xi|^-a) = c_a |x|^(a-1); equals 1/sqrt(2 pi) for a = 1/2.
    """
    return gamma(1.0 - a) * math.sin(math.pi * a / 2.0) / math.pi


def _cutoff_transform(x, a):
    # inverse transform of -|xi|^-a e^-|xi| (1 + |xi|), a smooth even function of x
    z = 1.0 - 1j * np.asarray(x, dtype=float)
    first = gamma(1.0 - a) * np.power(z, -(1.0 - a)).real
    second = gamma(2.0 - a) * np.power(z, -(2.0 - a)).real
    return -(first + second) / math.pi


def _remainder(xi, a):
    # m_a(xi) - |xi|^-a (1 - e^-xi (1 + xi)), bounded and equal to 1 at xi = 0
    xi = np.asarray(xi, dtype=float)
    values = symbol(xi, a)
    positive = xi > 0
    xp = xi[positive]
    bracket = -np.expm1(-xp) - xp * np.exp(-xp)
    values[positive] -= xp ** (-a) * bracket
    return values


def _remainder_transform(grid, a):
    """
    Inverse transform of the remainder at |x| = j dx, j = 0 .. n/2, by a
    trapezoid rule on a refined frequency grid evaluated with one inverse rFFT.
    """
    # frequency range at least 40 (remainder below e^-40 beyond), period at least 8192 and 8L
    refine = 2 ** max(0, math.ceil(math.log2(40.0 * grid.dx / math.pi)))
    step = grid.dx / refine
    period = max(8192.0, 8.0 * grid.L)
    size = 2 ** math.ceil(math.log2(period / step))
    dxi = 2.0 * math.pi / (size * step)

    samples = _remainder(dxi * np.arange(size // 2 + 1), a)
    values = fft.irfft(samples, n=size) / step
    logger.debug("Remainder transform: refine=%d, size=%d, dxi=%.3e", refine, size, dxi)
    return values[: (grid.n // 2 + 1) * refine : refine]


@dataclass(frozen=True, eq=False)
class KernelTable:
    """
    K_a sampled on the grid nodes with x != 0 (the origin is singular).
    `smooth` holds the regular part K_a - c_a |x|^(a-1) on all nodes,
    which the singular-cell corrections use.
    """

    a: float
    grid: object
    nodes: np.ndarray = field(repr=False)
    samples: np.ndarray = field(repr=False)
    smooth: np.ndarray = field(repr=False)
    coefficient: float = 0.0

    def at(self, x):
        """Nearest-node lookup of K(x) for x on the grid, x != 0."""
        index = int(round((x - self.nodes[0]) / self.grid.dx))
        if x > 0:
            # the origin row is missing
            index -= 1
        if not 0 <= index < self.nodes.size or abs(self.nodes[index] - x) > 1e-12 * max(1.0, abs(x)):
            raise ValueError(f"{x} is not a tabulated node.")
        return float(self.samples[index])


@lru_cache(maxsize=16)
def kernel_table(grid, a):
    _check_exponent(a, closed=False)
    x = np.asarray(grid.nodes)
    distance = np.abs(x)

    # regular part on every node, indexed by |x| / dx
    remainder = _remainder_transform(grid, a)
    index = np.rint(distance / grid.dx).astype(int)
    smooth = _cutoff_transform(distance, a) + remainder[index]

    coefficient = homogeneous_coefficient(a)
    mask = distance > 0
    samples = coefficient * distance[mask] ** (a - 1.0) + smooth[mask]

    for array in (smooth, samples):
        array.setflags(write=False)
    nodes = x[mask]
    nodes.setflags(write=False)
    return KernelTable(a=a, grid=grid, nodes=nodes, samples=samples, smooth=smooth, coefficient=coefficient)


def kernel_mass(table):
    """
    Integral of K_a over [-L, L]: the homogeneous part in closed form, the
    regular part by the rectangle rule (the origin cell included).
    """
    grid = table.grid
    homogeneous = 2.0 * table.coefficient * grid.L ** table.a / table.a
    return float(homogeneous + grid.dx * np.sum(table.smooth))


def kernel_lp_norm(table, p):
    """
    ||K_a||_{L^p} for 1 <= p < 1/(1-a); the singular origin is left to the
    adaptive quadrature, the regular part is a cubic spline through the table.
    """
    a = table.a
    if not 1.0 <= p < 1.0 / (1.0 - a):
        raise ValueError(f"K_{a} is in L^p only for p < {1.0 / (1.0 - a)}, got p={p}.")
    grid = table.grid
    half = grid.origin
    x = np.asarray(grid.nodes[half:])
    smooth = interpolate.CubicSpline(
        np.concatenate((-x[:0:-1], x)),
        np.concatenate((table.smooth[half:][:0:-1], table.smooth[half:])),
    )
    upper = min(grid.L - grid.dx, 40.0)

    def integrand(t):
        return abs(table.coefficient * t ** (a - 1.0) + smooth(t)) ** p

    value, error = integrate.quad(integrand, 0.0, upper, limit=800)
    logger.debug("||K_%s||_%s quadrature error estimate %.2e", a, p, error)
    return float((2.0 * value) ** (1.0 / p))


def alpha0_upper_bound(k_norm=None):
    """
    (3/2)^(4/3) ||K||_{L^{3/2}}; with no measured norm the analytic cap
    ||K||_{L^{3/2}} < (2/pi + 1)^(2/3) gives about 2.385.
    """
    if k_norm is None:
        k_norm = (2.0 / math.pi + 1.0) ** (2.0 / 3.0)
    return 1.5 ** (4.0 / 3.0) * k_norm


def slobodeckij_gap(f):
    """
    Both sides of int int |f(x+h) - f(x)|^2 K(h) dx dh = 2 (||f||^2 - J(f)^2).
    """
    grid = f.grid
    table = kernel_table(grid, WHITHAM_EXPONENT)

    # D(h) = int |f(x+h) - f(x)|^2 dx = 2 (A(0) - A(h)), A the circular autocorrelation
    power = np.abs(fft.rfft(f.values)) ** 2
    autocorrelation = grid.dx * fft.irfft(power, n=grid.n)
    differences = 2.0 * (autocorrelation[0] - autocorrelation)

    # table node x_i is the shift h = x_i, i.e. the autocorrelation lag (i - n/2) mod n
    lags = np.rint(table.nodes / grid.dx).astype(int) % grid.n
    lhs = float(grid.dx * np.sum(table.samples * differences[lags]))
    rhs = 2.0 * (inner_product(f, f) - quad_form(f))
    return lhs, rhs


def young_bound(f, k_norm):
    """
    Left and right side of ||K * f||_inf <= ||K||_{L^{3/2}} ||f||_{L^3}.
    """
    return lp_norm(convolve(f), np.inf), k_norm * lp_norm(f, 3)
