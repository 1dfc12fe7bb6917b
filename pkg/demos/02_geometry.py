"""The geometric building blocks: Voronoi cells, inscribed and enclosing disks,
the exact maximum-coverage placement and the bounded minimax center."""
import numpy as np

from aerialbs import (
    Disk, chebyshev_disk, constrained_one_center, max_coverage_disk, min_enclosing_disk,
    voronoi_cell,
)

rng = np.random.default_rng(0)
centers = rng.uniform(0, 3000, size=(5, 2))
cells = [voronoi_cell(centers, k, 3000.0) for k in range(5)]
print("cell  area (km^2)  inscribed radius (m)")
for k, cell in enumerate(cells):
    print(f"{k:>4}  {cell.area / 1e6:>11.3f}  {chebyshev_disk(cell).radius:>20.1f}")

users = np.vstack([rng.normal((800, 900), 60, (12, 2)), rng.normal((1300, 1000), 60, (5, 2))])
sol = max_coverage_disk(users, 300.0, voronoi_cell(centers, 0, 3000.0, margin=300.0))
print(f"\nbest 300 m disk in cell 0 covers {sol.count}/{len(users)} users "
      f"({sol.candidates_evaluated} candidate centers checked)")

mec = min_enclosing_disk(users[sol.covered])
print(f"those users fit in a disk of radius {mec.radius:.1f} m")

c, d = constrained_one_center(users[sol.covered], Disk(sol.center, 20.0))
print(f"moving at most 20 m from the placed center, the farthest user is {d:.1f} m away")
