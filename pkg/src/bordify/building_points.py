"""Boundary points of thick buildings: tree ends, products, explicit sequences.

These points are described by their projections ``xi_value(sigma)`` onto
spherical residues (the stabilised gates ``proj_sigma(R_n)``) rather than by
wall classes, since a thick building has no global wall set.  Sectors are
computed either natively (tree ends) or as the stabilised limit of convex
hulls, where membership in ``Conv(x, T)`` is decided exactly by

    sigma in Conv(x, T)  iff  some tau in St(sigma) has d(x, tau) + d(tau, T) = d(x, T)

(the hull is the face-closure of the interval).
"""

from __future__ import annotations

import math

from .boundary import _stable_tail, default_confirm
from .buildings import ProductBuilding, TreeBuilding
from .errors import ConsistencyError, MalformedInput, ResourceLimit, Undecided, WindowEscape


class BuildingPoint:
    exact = True
    variant = "abstract"

    def xi_value(self, sigma):
        raise NotImplementedError

    def xi_values(self, residues):
        return {s: self.xi_value(s) for s in residues}


class BuildingInterior(BuildingPoint):
    variant = "interior"

    def __init__(self, B, residue):
        self.B = B
        self.residue = residue

    def xi_value(self, sigma):
        return self.B.project_residue(sigma, self.residue)

    def representative(self, n):
        return self.residue

    def horofunction(self, y, y0):
        return self.B.root_distance(self.residue, y) - self.B.root_distance(self.residue, y0)

    def __repr__(self):
        return f"BuildingInterior({self.residue})"


class TreeEnd(BuildingPoint):
    """The end of the ray from the root following child indices prefix, period, period, ..."""

    variant = "tree_end"

    def __init__(self, tree, prefix=(), period=(0,)):
        if not isinstance(tree, TreeBuilding):
            raise MalformedInput("tree ends live on tree buildings")
        if not period:
            raise MalformedInput("an end needs a non-empty period")
        self.tree = tree
        self.prefix = tuple(prefix)
        self.period = tuple(period)
        # validate the child indices of one full cycle past the prefix
        v = ()
        for k in range(len(self.prefix) + 2 * len(self.period)):
            i = self.index(k)
            if not 0 <= i < len(tree.children(v)):
                raise MalformedInput(f"child index {i} at depth {k} does not exist")
            v = v + (i,)

    def index(self, k):
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def ray_vertex(self, k):
        return tuple(self.index(j) for j in range(k))

    def on_ray(self, v):
        return all(v[j] == self.index(j) for j in range(len(v)))

    def __eq__(self, other):
        if not isinstance(other, TreeEnd):
            return NotImplemented
        n = max(len(self.prefix), len(other.prefix)) + 2 * math.lcm(len(self.period), len(other.period))
        return all(self.index(k) == other.index(k) for k in range(n))

    def __hash__(self):
        # equal ends share every ray vertex, so any fixed depth will do
        return hash(self.ray_vertex(6))

    def xi_value(self, sigma):
        if not sigma.J:
            return sigma
        v = self.tree.vertex_of(sigma)
        if self.on_ray(v):
            return self.tree.chamber_residue(v + (self.index(len(v)),))
        return self.tree.chamber_residue(v)  # the edge towards the root

    def representative(self, n):
        """The edge of depth n + 1 on the ray."""
        return self.tree.chamber_residue(self.ray_vertex(n + 1))

    def horofunction(self, y, y0):
        """Busemann value: d(R_n, y) - d(R_n, y0) for any n past both projections to the ray."""
        n = max(self.tree.depth(y), self.tree.depth(y0)) + 3
        R = self.representative(n)
        return self.tree.root_distance(R, y) - self.tree.root_distance(R, y0)

    def sector(self, x):
        """Q(x, end) on the window: the closed half-line from x towards the end."""
        T = self.tree
        out = [x]
        if x.J:
            v = T.vertex_of(x)
        else:
            a, b = T.endpoints(x.chambers[0])
            forward = b if self.xi_value(T.vertex_residue(a)) == x else a
            back = a if forward == b else b
            out.append(T.vertex_residue(back))
            v = forward
        while True:
            R = T.vertex_residue(v)
            if not all(T.in_window(e) for e in R.chambers):
                break
            if R not in out:
                out.append(R)
            e = self.xi_value(R)
            if not T.in_window(e.chambers[0]):
                break
            out.append(e)
            a, b = T.endpoints(e.chambers[0])
            v = b if a == v else a
        return {R for R in out if all(T.in_window(c) for c in R.chambers)}

    def __repr__(self):
        return f"TreeEnd(prefix={list(self.prefix)}, period={list(self.period)})"


class ProductPoint(BuildingPoint):
    variant = "product"

    def __init__(self, B, first, second):
        if not isinstance(B, ProductBuilding):
            raise MalformedInput("product points live on product buildings")
        self.B = B
        self.first = first
        self.second = second

    def xi_value(self, sigma):
        a, b = self.B.factors(sigma)
        return self.B.combine(self.first.xi_value(a), self.second.xi_value(b))

    def representative(self, n):
        return self.B.combine(self.first.representative(n), self.second.representative(n))

    def horofunction(self, y, y0):
        (a, b), (a0, b0) = self.B.factors(y), self.B.factors(y0)
        return self.first.horofunction(a, a0) + self.second.horofunction(b, b0)

    def __repr__(self):
        return f"ProductPoint({self.first!r}, {self.second!r})"


def product_decompose(point):
    if isinstance(point, ProductPoint):
        return point.first, point.second
    if isinstance(point, BuildingInterior) and isinstance(point.B, ProductBuilding):
        a, b = point.B.factors(point.residue)
        return BuildingInterior(point.B.first, a), BuildingInterior(point.B.second, b)
    raise MalformedInput(f"{point!r} is not a point of a product building")


def product_compose(B, first, second):
    if isinstance(first, BuildingInterior) and isinstance(second, BuildingInterior):
        return BuildingInterior(B, B.combine(first.residue, second.residue))
    return ProductPoint(B, first, second)


class BuildingSequence(BuildingPoint):
    """An explicit sequence of residues R_0 .. R_H, decided by stabilisation."""

    exact = False
    variant = "sequence"

    def __init__(self, B, terms, confirm=None):
        self.B = B
        self.terms = list(terms)
        if not self.terms:
            raise MalformedInput("empty sequence")
        self.horizon = len(self.terms) - 1
        self.confirm = default_confirm(B.radius) if confirm is None else confirm
        self._cache = {}

    def representative(self, n):
        return self.terms[n]

    def xi_value(self, sigma):
        hit = self._cache.get(sigma)
        if hit is None:
            values = [self.B.project_residue(sigma, R) for R in self.terms]
            hit = self._cache[sigma] = _stable_tail(values, self.confirm)[0]
        if hit is None:
            raise Undecided(f"projection onto {sigma} not stable within horizon {self.horizon}", self.horizon, [sigma])
        return hit

    def horofunction(self, y, y0):
        values = [self.B.root_distance(R, y) - self.B.root_distance(R, y0) for R in self.terms]
        v, _ = _stable_tail(values, self.confirm)
        if v is None:
            raise Undecided("horofunction not stable within horizon", self.horizon)
        return v


def building_converges(B, terms, confirm=None, residues=None):
    """Stabilised projections onto every window residue; None marks an undecided residue."""
    seq = BuildingSequence(B, terms, confirm)
    out = {}
    for s in B.residues() if residues is None else residues:
        try:
            out[s] = seq.xi_value(s)
        except Undecided:
            out[s] = None
    return out


def in_conv(B, sigma, x, T):
    total = B.root_distance(x, T)
    return any(B.root_distance(x, t) + B.root_distance(t, T) == total for t in B.star(sigma))


def building_sector_limit(B, x, terms, confirm, residues=None):
    """Union over k of intersections over n >= k of Conv(x, R_n), over window residues.

    Membership of each residue must be constant over the last ``confirm`` terms.
    """
    out = set()
    for s in B.residues() if residues is None else residues:
        flags = [in_conv(B, s, x, R) for R in terms]
        v, _ = _stable_tail(flags, confirm)
        if v is None:
            raise Undecided(f"membership of {s} not stable", len(terms) - 1, [s])
        if v:
            out.add(s)
    return out


def building_sector(B, x, point):
    """Q(x, point) on the window: native for tree ends and products, else by limits of hulls."""
    if isinstance(point, TreeEnd):
        return point.sector(x)
    if isinstance(point, ProductPoint):
        a, b = B.factors(x)
        Q1 = building_sector(B.first, a, point.first)
        Q2 = building_sector(B.second, b, point.second)
        return {B.combine(r, s) for r in Q1 for s in Q2}
    if isinstance(point, BuildingInterior):
        return {s for s in B.residues() if in_conv(B, s, x, point.residue)}
    if isinstance(point, BuildingSequence):
        return building_sector_limit(B, x, point.terms, point.confirm)
    raise MalformedInput(f"no sector routine for {point!r}")


def building_common_subsector(B, x, y, point):
    """A window residue z with Q(z) inside Q(x) and Q(y), nearest to x (chambers first)."""
    Qx = building_sector(B, x, point)
    Qy = Qx if x == y else building_sector(B, y, point)
    both = Qx & Qy
    for z in sorted(both, key=lambda r: (len(r.J), B.root_distance(x, r), r)):
        if building_sector(B, z, point) <= both:
            return z
    raise ResourceLimit(f"no common subsector of {x} and {y} inside the window")


def ray_chart(tree, x, end):
    """An apartment chart through x that follows the ray towards ``end`` up to the window edge."""
    from .buildings import ApartmentChart

    def forward_from(u, prev):
        edges = []
        while True:
            e = end.xi_value(tree.vertex_residue(u)).chambers[0]
            if not tree.in_window(e):
                return edges
            a, b = tree.endpoints(e)
            nxt = b if a == u else a
            if nxt == prev:  # cannot happen on a tree; guards the walk
                raise ConsistencyError("ray walk turned back")
            edges.append(e)
            prev, u = u, nxt

    if x.J:
        v = tree.vertex_of(x)
        fwd = forward_from(v, None)
        if not fwd:
            raise WindowEscape("no edge towards the end inside the window")
        a, b = tree.endpoints(fwd[0])
        back = list(reversed(tree._line_extension(b if a == v else a, v)))
        line = back + fwd
    else:
        e = x.chambers[0]
        a, b = tree.endpoints(e)
        forward = b if end.xi_value(tree.vertex_residue(a)).chambers[0] == e else a
        backv = a if forward == b else b
        line = list(reversed(tree._line_extension(forward, backv))) + [e] + forward_from(forward, backv)
    base = line[0]
    chart = ApartmentChart(base)
    for e in line:
        chart.put(tree.delta(base, e), e)
    return chart


def tree_sector_via_chart(tree, x, end):
    """Q(x, end) through an apartment: chart the line along the ray, use the thin D_inf sector.

    Independent of :meth:`TreeEnd.sector`; used to cross-check it.
    """
    from .affine import AffineChart
    from .boundary import AffinePoint, sector

    chart = ray_chart(tree, x, end)
    cx = tree.cx
    thin_x = tree.chart_residue(chart, x)
    horizon = max(len(u) for u in chart.image)
    win = cx.window(horizon)
    A = AffineChart(cx.W)
    # orient the ray: the chamber after the last charted one along the ray
    far = end.representative(tree.radius - 1)
    far_word = chart.word(far.chambers[0]) if far.chambers[0] in chart else None
    if far_word is None:
        raise WindowEscape("the ray leaves the chart")
    ref = A.act_point(far_word, A.barycenter())[0] - A.act_point(thin_x.w, A.barycenter())[0]
    direction = (1,) if ref > 0 else (-1,)
    pt = AffinePoint(A, cx, direction, A.act_point(thin_x.w, A.barycenter()))
    members = sector(cx, thin_x, pt, win).members
    out = set()
    for s in members:
        chambers = [cx.W.reduce(s.w + u) for u in cx.W.parabolic(s.J)]
        if all(c in chart.image for c in chambers):
            R = tree.residue(chart.image[s.w], s.J)
            if all(tree.in_window(c) for c in R.chambers):
                out.add(R)
    return out
