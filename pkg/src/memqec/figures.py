"""Tabulated data behind the three fidelity/threshold plots."""

from fractions import Fraction

import numpy as np

from memqec.fidelity import derived_fidelity
from memqec.threshold import threshold_curve

FIG1_P = 0.45
FIG2_PS = (0.45, 0.40, 0.35)
MU_POINTS = 101


def mu_axis(points=MU_POINTS):
    return np.linspace(0.0, 1.0, points)


def exact_column(family, n, mus, p):
    """Fidelity evaluated exactly at the float inputs and rounded once, so
    curves that meet analytically (e.g. at mu = 1) tie exactly in the table."""
    poly = derived_fidelity(family, n).poly
    fp = Fraction(p)
    return np.array([float(poly.eval(Fraction(m), fp)) for m in mus])


def fig1(p=FIG1_P, points=MU_POINTS):
    """Repetition codes n = 3, 5, 7 versus mu at fixed p."""
    mus = mu_axis(points)
    cols = [exact_column("rc", n, mus, p) for n in (3, 5, 7)]
    header = ["mu", "F_rc3", "F_rc5", "F_rc7"]
    return header, [[m, *vals] for m, *vals in zip(mus, *cols)]


def fig2(ps=FIG2_PS, points=MU_POINTS):
    """4-qubit repetition vs DFS code, long format over several p."""
    mus = mu_axis(points)
    rows = []
    for p in ps:
        rc = exact_column("rc", 4, mus, p)
        dfs = exact_column("dfs", 4, mus, p)
        rows.extend([p, m, a, b] for m, a, b in zip(mus, rc, dfs))
    return ["p", "mu", "F_rc4", "F_dfs4"], rows


def fig3(p_min=0.01, p_max=0.49, steps=49, n=4):
    """Threshold curve mu*(p); unresolved points leave mu_star empty."""
    grid = np.linspace(p_min, p_max, steps)
    rows = [[c.p, c.mu_star] for c in threshold_curve(n, grid)]
    return ["p", "mu_star"], rows


FIGURES = {"fig1": fig1, "fig2": fig2, "fig3": fig3}
