"""The square grid as a CAT(0) cube complex.

Corners and lines are the non-principal consistent orientations; the
filtering point of two vertices is where their sectors merge.
"""

from bordify.cubes import (
    Directional,
    GridGraph,
    cube_filtering,
    cube_horofunction,
    cube_sector,
    validate_ultrafilter,
)

G = GridGraph(2, -3, 3)
corner = Directional(("+inf", "+inf"))
line = Directional(("+inf", 0))
for xi in (corner, line):
    print(f"{xi.kind():6s} {xi}: consistent {validate_ultrafilter(G, xi).ok}, principal {xi.is_principal}")

u, v = (0, 2), (2, -1)
z = cube_filtering(G, u, v, corner)
print(f"sectors towards the corner from {u} and {v} merge at {z}")
print(f"  |Q(z)| = {len(cube_sector(G, z, corner))}, contained in both: "
      f"{cube_sector(G, z, corner) <= cube_sector(G, u, corner) & cube_sector(G, v, corner)}")
print("horofunction towards the corner, normalised at the origin:")
for y in [(0, 0), (1, 0), (1, 1), (-2, 3)]:
    print(f"  h{y} = {cube_horofunction(G, corner, y, (0, 0))}")
