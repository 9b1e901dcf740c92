"""
Distribution function, non-increasing rearrangement f* and symmetric
rearrangement f# of grid functions.

On the grid, f# is a permutation of |f|: the sorted magnitudes are placed
on the nodes ordered by |x| ascending, the negative node first on ties.
"""

from functools import lru_cache

import numpy as np
from scipy import integrate

from .orlicz import psi_prime


def placement_order(nodes):
    """
    Node indices by |x| ascending, negative node first when |x| ties.
    """
    nodes = np.asarray(nodes, dtype=float)
    # lexsort uses the last key as the primary one
    return np.lexsort((nodes, np.abs(nodes)))


@lru_cache(maxsize=32)
def grid_placement_order(grid):
    order = placement_order(grid.nodes)
    order.setflags(write=False)
    return order


def _place(values, order):
    values = np.abs(np.asarray(values, dtype=float))
    out = np.empty_like(values)
    out[order] = np.sort(values)[::-1]
    return out


def rearrange_samples(values, nodes):
    """
    Symmetric rearrangement of raw samples on arbitrary symmetric nodes.
    """
    return _place(values, placement_order(nodes))


def dist_fn(f, s):
    """
    d_f(s) = |{x : |f(x)| > s}|, measured in grid cells.
    """
    if s < 0:
        raise ValueError(f"Level must be non-negative, got {s}.")
    return f.grid.dx * int(np.count_nonzero(np.abs(f.values) > s))


def decreasing_rearrangement(f):
    """
    f* sampled at t_j = j dx, j = 0 .. n - 1 on [0, 2L).
    """
    return np.sort(np.abs(f.values))[::-1]


def symmetric_rearrangement(f):
    """
    f#(x) = f*(2|x|), bell-shaped and equidistributed with f.
    """
    return f.with_values(_place(f.values, grid_placement_order(f.grid)))


def is_bell_shaped(f, atol=0.0):
    """
    True when f is non-negative and non-increasing along the placement
    order, i.e. f equals its symmetric rearrangement (up to atol).
    """
    values = f.values
    if np.any(values < -atol):
        return False
    ordered = values[grid_placement_order(f.grid)]
    return bool(np.all(np.diff(ordered) <= atol))


def support_radius(f, floor=0.0):
    """
    Largest |x| with |f(x)| > floor, 0.0 for a function below the floor.
    """
    inside = np.abs(f.values) > floor
    if not np.any(inside):
        return 0.0
    return float(np.max(np.abs(f.grid.nodes[inside])))


def layer_cake(f, p, levels=20001):
    """
    int_0^inf Psi'(s) d_f(s) ds by the trapezoid rule on `levels` uniform
    levels; equals int Psi(|f|) dx.
    """
    magnitudes = np.sort(np.abs(f.values))
    top = float(magnitudes[-1])
    if top == 0.0:
        return 0.0
    s = np.linspace(0.0, top, levels)
    # number of samples strictly above each level
    counts = magnitudes.size - np.searchsorted(magnitudes, s, side='right')
    distribution = f.grid.dx * counts
    return float(integrate.trapezoid(psi_prime(s, p) * distribution, s))
