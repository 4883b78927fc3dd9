"""Map the paradox region over drive power and bath temperature.

Reproduces the criterion surface over the (p_cal, t_cal) plane at fixed
detuning 0.18 and extracts the lhs = 1 boundary.  Thermal noise is plainly
detrimental: the window of powers showing a paradox narrows as t_cal grows
and is gone before t_cal reaches 1.  Output is plot-ready CSV.
"""

import numpy as np

from optoepr import paradox_boundary, scan

grid = scan(p_range=(0.0, 1.0), t_range=(0.0, 1.0), delta=0.18, resolution=201)

rows = []
for i, t in enumerate(grid.t_axis):
    below = grid.lhs_values[i] < 1.0
    width = below.sum() * (grid.p_axis[1] - grid.p_axis[0])
    rows.append((t, width))

print("paradox window width vs t_cal (delta = 0.18):")
for t, width in rows[::25]:
    bar = "#" * int(60 * width)
    print(f"  t_cal = {t:4.2f}  width = {width:5.3f}  {bar}")

best = np.unravel_index(np.nanargmin(grid.lhs_values), grid.lhs_values.shape)
print(f"\ndeepest point: lhs = {grid.lhs_values[best]:.4f} at "
      f"p_cal = {grid.p_axis[best[1]]:.3f}, t_cal = {grid.t_axis[best[0]]:.3f}")

with open("paradox_surface.csv", "w", encoding="utf-8", newline="\n") as fh:
    fh.write("p_cal,t_cal,lhs\n")
    for i, t in enumerate(grid.t_axis):
        for j, p in enumerate(grid.p_axis):
            fh.write(f"{p:.6g},{t:.6g},{grid.lhs_values[i, j]:.10g}\n")

pts = paradox_boundary(grid)
with open("paradox_boundary.csv", "w", encoding="utf-8", newline="\n") as fh:
    fh.write("p_cal,t_cal\n")
    for p, t in pts:
        fh.write(f"{p:.8g},{t:.8g}\n")

print(f"\nwrote paradox_surface.csv ({grid.lhs_values.size} cells) and "
      f"paradox_boundary.csv ({len(pts)} boundary points)")
