"""Boundary of the affine Coxeter complex of type A~2.

Lists the boundary classes of the apartment (regular directions and threshold
families), then compares the sector computed from the limiting root signs
with the limit of convex hulls of a converging sequence.
"""

from bordify.affine import AffineChart
from bordify.boundary import affine_census, horofunction, sector, sector_limit
from bordify.coxeter import CoxeterSystem, named
from bordify.residues import CoxeterComplex

cx = CoxeterComplex(CoxeterSystem(named("A~2")))
chart = AffineChart(cx.W)
win = cx.window(6)
x = cx.chamber(())

classes = affine_census(chart, cx)
print(f"{len(classes)} boundary classes on A~2")
for cc in classes:
    terms = [cc.point.representative(n) for n in range(36)]
    Q = sector(cx, x, cc.point, win).members
    agree = Q == sector_limit(cx, x, terms, win, confirm=6)
    print(f"  {cc.kind:9s} direction {str(cc.direction):12s} |Q(x, xi)| = {len(Q):3d}  limit of hulls agrees: {agree}")

# horofunctions normalised at x, evaluated along the first few chambers of a gallery
cc = next(c for c in classes if c.kind == "regular")
for w in [(), (0,), (0, 1), (0, 1, 2), (0, 1, 2, 0)]:
    print(f"  h_xi({w}) = {horofunction(cx, cc.point, cx.chamber(w), x)}")
