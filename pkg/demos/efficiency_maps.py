"""Coarse efficiency-gain maps over the two measurement strengths.

For each cell the controls are optimized (polar angle, phase alignment and,
for the correlated families, the available correlations). Cells where no
setting keeps both branches inside the engine window print as '.'.
"""

import numpy as np

from switchengine import analytic
from switchengine.states import Family

grid = np.linspace(0, 1, 11)
for family in (Family.UNCORRELATED, Family.SEPARABLE):
    for be in (0.1, 10.0):
        print(f"\n{family.value}, beta*eps = {be}: gain x 100 (rows a, columns a')")
        for a in grid:
            cells = []
            for ap in grid:
                c = analytic.map_cell(family, a, ap, be)
                cells.append(f"{100 * c['delta_eta']:5.1f}" if c["feasible"] else "    .")
            print(f"{a:4.1f} " + "".join(cells))

print("\noptimal polar angle for a' = 1 - a (uncorrelated family)")
for be in (0.3, 1.0, 3.0):
    row = []
    for a in np.linspace(0, 1, 6):
        try:
            res, _ = analytic.optimize_controls(Family.UNCORRELATED, a, 1 - a, be)
            row.append(f"{res.theta_opt:6.3f}")
        except analytic.InfeasibleError:
            row.append("     -")
    print(f"  beta*eps = {be:3.1f}: " + " ".join(row))
