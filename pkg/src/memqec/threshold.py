"""Correlation threshold mu*(p) where DFS and repetition-code fidelities cross."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from memqec.fidelity import derived_fidelity

DEFAULT_TOL = 1e-9
GRID_POINTS = 1024


@dataclass(frozen=True)
class ThresholdQuery:
    n: int
    p: float
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if not 0.0 < self.p < 0.5:
            raise ValueError(f"p must lie strictly inside (0, 0.5), got {self.p}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class Crossing:
    p: float
    mu_star: float | None
    crossings: int

    @property
    def found(self):
        return self.mu_star is not None


def find_crossing(diff, p, tolerance=DEFAULT_TOL, grid_points=GRID_POINTS):
    """Smallest root in (0, 1) of ``mu -> diff(mu, p)``.

    Sign changes are bracketed on a uniform grid and the first one is refined
    by bisection. Returns ``(root or None, number of sign changes)``.
    """
    mus = np.linspace(0.0, 1.0, grid_points)
    values = diff.eval_grid(mus, np.full_like(mus, p))
    signs = np.sign(values)
    nonzero = np.flatnonzero(signs)
    roots = []
    for a, b in zip(nonzero[:-1], nonzero[1:]):
        if signs[a] == signs[b]:
            continue
        if b - a > 1:
            # an exact zero sits on the grid between two opposite signs
            roots.append(float(mus[a + 1]))
        else:
            roots.append((a, b))
    if not roots:
        return None, 0
    first = roots[0]
    if isinstance(first, float):
        return first, len(roots)

    def g(mu):
        return float(diff.eval(mu, p))

    a, b = first
    # refine past the tolerance so two brackets of the same root agree within it
    root = bisect(g, mus[a], mus[b], xtol=tolerance / 4, rtol=4 * np.finfo(float).eps)
    return float(root), len(roots)


def crossing(query, grid_points=GRID_POINTS):
    """Threshold for ``F_DFS^(n) - F_RC^(n)`` at fixed p."""
    diff = derived_fidelity("dfs", query.n).poly - derived_fidelity("rc", query.n).poly
    root, count = find_crossing(diff, query.p, query.tolerance, grid_points)
    return Crossing(query.p, root, count)


def mu_star(p, n=4, tolerance=DEFAULT_TOL):
    return crossing(ThresholdQuery(n, p, tolerance)).mu_star


def threshold_curve(n, p_grid, tolerance=DEFAULT_TOL):
    """Crossings for every p in ``p_grid``, sorted by p."""
    return [crossing(ThresholdQuery(n, float(p), tolerance)) for p in sorted(p_grid)]


def dfs_length_crossing(p, tolerance=DEFAULT_TOL):
    """Smallest mu above which the 4-qubit DFS code beats the 3-qubit one."""
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must lie strictly inside (0, 0.5), got {p}")
    diff = derived_fidelity("dfs", 4).poly - derived_fidelity("dfs", 3).poly
    root, count = find_crossing(diff, p, tolerance)
    return Crossing(p, root, count)
