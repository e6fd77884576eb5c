"""Boundary points of a Coxeter complex and what can be computed from them.

A boundary point is represented intensionally by its *classification* of
walls: for each wall, +1 or -1 if a representing sequence eventually lies
strictly on that side, 0 if it eventually lies on the wall itself.  Signs
follow the identity-positive convention of :mod:`bordify.coxeter`.

Exact points: :class:`InteriorPoint` (a constant sequence) and
:class:`AffinePoint` (a ray ``base + n * direction`` in an affine
apartment).  :class:`SequencePoint` wraps an explicit sequence and decides
each wall by stabilisation within a horizon; its answers are flagged as
non-exact and raise :class:`~bordify.errors.Undecided` when the horizon is
not enough.

Most functions take a :class:`~bordify.residues.Window`; walls outside the
window place every window residue on the identity side, so restricting to
window walls loses nothing for window residues.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .affine import _sign
from .coxeter import Root
from .errors import ConsistencyError, MalformedInput, ResourceLimit, Undecided, WindowEscape

PLUS, MINUS, BOTH = "plus", "minus", "both"


def default_horizon(radius):
    return 4 * radius


def default_confirm(radius):
    return max(radius, 1)


# ---------------------------------------------------------------------------
# Points


class BoundaryPoint:
    exact = True
    variant = "abstract"

    def classify(self, wall):
        raise NotImplementedError

    def classify_many(self, walls):
        out, bad = [], []
        for w in walls:
            try:
                out.append(self.classify(w))
            except Undecided:
                out.append(None)
                bad.append(w)
        if bad:
            raise Undecided(f"{len(bad)} walls undecided", horizon=getattr(self, "horizon", None), items=bad)
        return np.array(out, dtype=np.int8)


class InteriorPoint(BoundaryPoint):
    """The constant sequence at a residue."""

    variant = "interior"

    def __init__(self, cx, residue):
        self.cx = cx
        self.residue = residue

    def classify(self, wall):
        return self.cx.position(self.residue, wall)

    def representative(self, n):
        return self.residue

    def __eq__(self, other):
        return isinstance(other, InteriorPoint) and other.residue == self.residue

    def __hash__(self):
        return hash(self.residue)

    def __repr__(self):
        return f"InteriorPoint({self.residue})"


class AffinePoint(BoundaryPoint):
    """The limit of the ray ``base + n * direction`` in an affine apartment.

    A wall not parallel to the direction is classified by the sign of the
    direction against it; a parallel wall by the side of the base point.
    """

    variant = "affine"

    def __init__(self, chart, cx, direction, base=None):
        if len(direction) != chart.dim:
            raise MalformedInput(f"direction needs {chart.dim} coordinates")
        if not any(direction):
            raise MalformedInput("direction must be non-zero")
        self.chart = chart
        self.cx = cx
        self.direction = tuple(Fraction(c) for c in direction)
        self.base = tuple(Fraction(c) for c in (base if base is not None else chart.barycenter()))
        if len(self.base) != chart.dim:
            raise MalformedInput(f"base needs {chart.dim} coordinates")

    def classify(self, wall):
        lin, const = self.chart.linear_part(wall)
        slope = sum(a * b for a, b in zip(lin, self.direction))
        if slope:
            return _sign(slope)
        return _sign(sum(a * b for a, b in zip(lin, self.base)) + const)

    def point(self, n):
        return tuple(p + n * v for p, v in zip(self.base, self.direction))

    def representative(self, n):
        """The residue whose open cell contains base + n * direction."""
        return self.chart.residue_of(self.cx, self.point(n))

    def __repr__(self):
        return f"AffinePoint(direction={[str(c) for c in self.direction]}, base={[str(c) for c in self.base]})"


class SequencePoint(BoundaryPoint):
    """An explicit sequence of residues, decided wall by wall up to a horizon.

    A wall is decided when the position of ``seq(n)`` is constant for all n in
    ``[N, horizon]`` with ``horizon - N >= confirm``.
    """

    exact = False
    variant = "sequence"

    def __init__(self, cx, seq, horizon, confirm=None):
        if horizon is None or horizon < 0:
            raise MalformedInput("a sequence point needs a non-negative horizon")
        self.cx = cx
        self.horizon = horizon
        self.confirm = default_confirm(horizon // 4) if confirm is None else confirm
        if callable(seq):
            self.terms = [seq(n) for n in range(horizon + 1)]
        else:
            seq = list(seq)
            if len(seq) < horizon + 1:
                raise MalformedInput(f"sequence has {len(seq)} terms, horizon {horizon} needs {horizon + 1}")
            self.terms = seq[: horizon + 1]
        self._cache = {}

    def representative(self, n):
        return self.terms[n]

    def classify(self, wall):
        hit = self._cache.get(wall)
        if hit is None:
            values = [self.cx.position(R, wall) for R in self.terms]
            hit = self._cache[wall] = _stable_tail(values, self.confirm)
        if hit[0] is None:
            raise Undecided(f"wall {wall} not stable within horizon {self.horizon}", horizon=self.horizon, items=[wall])
        return hit[0]


def _stable_tail(values, confirm):
    """(final value, first index of the constant tail) or (None, None)."""
    last = values[-1]
    N = len(values) - 1
    while N > 0 and values[N - 1] == last:
        N -= 1
    if len(values) - 1 - N < confirm:
        return None, None
    return last, N


def classify_wall(point, root):
    """'plus' if the point lies in the root, 'minus' if in the opposite root, 'both' if on the wall."""
    c = point.classify(root.wall)
    if c == 0:
        return BOTH
    return PLUS if c == root.sign else MINUS


# ---------------------------------------------------------------------------
# Projections from infinity


def _admissible(cx, point, sigma, tau):
    for wall in cx.profile(sigma)[1]:
        c = point.classify(wall)
        p = cx.position(tau, wall)
        if c == 0 and p != 0:
            return False
        if c != 0 and p == -c:
            return False
    return True


def xi_value(cx, point, sigma):
    """proj_sigma(point): the smallest coset of star(sigma) on the point's side of every wall through sigma."""
    good = [tau for tau in cx.star(sigma) if _admissible(cx, point, sigma, tau)]
    smallest = min(len(t.J) for t in good)
    cands = [t for t in good if len(t.J) == smallest]
    if len(cands) != 1:
        raise ConsistencyError(f"projection of {point} onto {sigma} is not unique: {cands}")
    pi = cands[0]
    for t in good:
        if not cx.is_face(t, pi):
            raise ConsistencyError(f"{t} satisfies the constraints but does not contain {pi}")
    return pi


def residual_projection(cx, point, chamber):
    """The residue R of type I = {s : proj of the s-panel of C is not C} containing C.

    For the point equal to C itself, I is empty and R = C.
    """
    if chamber.J:
        raise MalformedInput("residual projection is taken at a chamber")
    I = []
    for s in range(cx.rank):
        panel = cx.residue(chamber.w, (s,))
        val = xi_value(cx, point, panel)
        if val.J:
            raise MalformedInput(f"{point} lies on the wall of {panel}; it is not a chamber-type point")
        if val != chamber:
            I.append(s)
    I = tuple(I)
    if not cx.W.is_spherical(I):
        raise ConsistencyError(f"residual type {list(I)} is not spherical")
    R = cx.residue(chamber.w, I)
    opposite = cx.chamber(chamber.w + cx.W.longest(I)) if I else chamber
    got = xi_value(cx, point, R)
    if got != opposite:
        raise ConsistencyError(f"projection onto {R} is {got}, not the chamber opposite {chamber}")
    return R


# ---------------------------------------------------------------------------
# Sectors


@dataclass
class Sector:
    base: object
    point: object
    members: set
    defining_roots: list = field(default_factory=list)


def _hull_like(win, Px, Py):
    """Window residues inside every closed root containing both position vectors."""
    req_plus = (Px >= 0) & (Py >= 0)
    req_minus = (Px <= 0) & (Py <= 0)
    bad = (~win.plus & req_plus[None, :]).any(axis=1) | (~win.minus & req_minus[None, :]).any(axis=1)
    return ~bad


def sector_mask(win, x, point):
    cls = point.classify_many(win.walls)
    Px = win.P[win.index[x]]
    return _hull_like(win, Px, cls), cls


def sector(cx, x, point, win):
    """Q(x, point) on the window: intersection of the roots containing x and the point."""
    if x not in win.index:
        raise WindowEscape(f"{x} is not a residue of the window")
    mask, cls = sector_mask(win, x, point)
    Px = win.P[win.index[x]]
    roots = []
    for k, wall in enumerate(win.walls):
        for sg in (1, -1):
            if Px[k] in (sg, 0) and cls[k] in (sg, 0):
                roots.append(Root(wall, sg))
    return Sector(x, point, win.residues_of(mask), roots)


def positions_on(win, cx, R):
    """Position vector of an arbitrary residue on the window walls."""
    k = win.index.get(R)
    if k is not None:
        return win.P[k]
    out = np.ones(len(win.walls), dtype=np.int8)
    neg, mixed = cx.profile(R)
    for w in neg:
        j = win.wall_index.get(w)
        if j is not None:
            out[j] = -1
    for w in mixed:
        j = win.wall_index.get(w)
        if j is not None:
            out[j] = 0
    return out


def sector_limit(cx, x, terms, win, confirm):
    """The union over k of the intersections over n >= k of Conv(x, R_n), on the window.

    ``terms`` is the finite list R_0 .. R_H.  The positions of the terms on
    the window walls must be constant over the last ``confirm`` steps,
    otherwise the tail has not been reached and Undecided is raised.
    """
    Px = win.P[win.index[x]]
    rows = np.array([positions_on(win, cx, R) for R in terms])
    unstable = [win.walls[j] for j in range(rows.shape[1]) if _stable_tail(list(rows[:, j]), confirm)[0] is None]
    if unstable:
        raise Undecided(f"{len(unstable)} window walls not stable", horizon=len(terms) - 1, items=unstable)
    hulls = [_hull_like(win, Px, row) for row in rows]
    out = np.zeros(len(win), dtype=bool)
    tail = np.ones(len(win), dtype=bool)
    for h in reversed(hulls):
        tail &= h
        out |= tail
    return win.residues_of(out)


def common_subsector(cx, x, y, point, win):
    """A residue z with Q(z) inside Q(x) and Q(y), nearest to x (chambers first)."""
    Qx = sector(cx, x, point, win).members
    Qy = Qx if x == y else sector(cx, y, point, win).members
    both = Qx & Qy
    d = win.dist2[win.index[x]]
    for z in sorted(both, key=lambda r: (len(r.J), d[win.index[r]], win.index[r])):
        Qz = sector(cx, z, point, win)
        if Qz.members <= both and _roots_contained(cx, x, y, z, point, win):
            return z
    raise ResourceLimit(f"no common subsector of {x} and {y} inside the window of radius {win.radius}")


def _roots_contained(cx, x, y, z, point, win):
    """Phi(x) & Phi(point) and Phi(y) & Phi(point) are inside Phi(z) & Phi(point)."""
    cls = point.classify_many(win.walls)
    Pz = win.P[win.index[z]]
    for P in (win.P[win.index[x]], win.P[win.index[y]]):
        for sg in (1, -1):
            need = ((P == sg) | (P == 0)) & ((cls == sg) | (cls == 0))
            have = (Pz == sg) | (Pz == 0)
            if (need & ~have).any():
                return False
    return True


# ---------------------------------------------------------------------------
# Convergence


@dataclass
class WindowLimit:
    """The restriction of a limit to a window: wall classes and projections."""

    window: object
    signs: tuple  # per window wall, +1/-1/0, or None when undecided
    undecided: tuple = ()

    @property
    def decided(self):
        return not self.undecided

    def key(self):
        return self.signs

    def xi_values(self):
        pt = _FixedClassification(self.window)
        pt.signs = dict(zip(self.window.walls, self.signs))
        return {s: xi_value(self.window.cx, pt, s) for s in self.window.residues}


class _FixedClassification(BoundaryPoint):
    def __init__(self, win):
        self.win = win
        self.signs = {}

    def classify(self, wall):
        v = self.signs.get(wall, 1)
        if v is None:
            raise Undecided(f"wall {wall} undecided", items=[wall])
        return v


def converges(cx, terms, win, confirm):
    """Restriction to the window of the limit of R_0 .. R_H; ``undecided`` lists unstable walls."""
    rows = np.array([positions_on(win, cx, R) for R in terms])
    signs, bad = [], []
    for j, wall in enumerate(win.walls):
        v, _ = _stable_tail([int(a) for a in rows[:, j]], confirm)
        signs.append(v)
        if v is None:
            bad.append(wall)
    return WindowLimit(win, tuple(signs), tuple(bad))


def limit_of_point(point, win):
    return WindowLimit(win, tuple(int(c) for c in point.classify_many(win.walls)))


# ---------------------------------------------------------------------------
# Horofunctions


def _c(p, q):
    return int(q != 0 and p != q) + int(p != 0 and q != p)


def horofunction(cx, point, y, y0):
    """lim d(R_n, y) - d(R_n, y0), computed exactly from the wall classification."""
    total = 0
    for wall in cx.support(y) | cx.support(y0):
        py, p0 = cx.position(y, wall), cx.position(y0, wall)
        if py == p0:
            continue
        c = point.classify(wall)
        total += _c(c, py) - _c(c, p0)
    return Fraction(total, 2)


def horofunction_sequence(cx, terms, y, y0, confirm):
    """The same limit read off the sequence itself, with a stabilisation check."""
    values = [cx.root_distance(R, y) - cx.root_distance(R, y0) for R in terms]
    v, _ = _stable_tail(values, confirm)
    if v is None:
        raise Undecided(f"d(R_n, y) - d(R_n, y0) not stable within {len(terms) - 1} terms", horizon=len(terms) - 1)
    return v


def horofunction_vector(cx, point, win, y0):
    return tuple(horofunction(cx, point, y, y0) for y in win.residues)


# ---------------------------------------------------------------------------
# The affine census


@dataclass
class CensusClass:
    kind: str  # "regular" or "threshold"
    direction: tuple
    signs: tuple  # sign of the direction against each positive finite root
    point: AffinePoint
    parallel_root: tuple = None
    phi: list = field(default_factory=list)


def _generic_base(chart, root, value):
    """A base point b with <root, b> = value and <a, b> not an integer for other finite roots a."""
    candidates = [Fraction(1, 5), Fraction(1, 7), Fraction(2, 7), Fraction(3, 11), Fraction(1, 13)]
    k = next(i for i, c in enumerate(root) if c)
    for combo in itertools.product(candidates, repeat=chart.dim):
        b = list(combo)
        b[k] = 0
        b[k] = (value - sum(r * c for r, c in zip(root, b))) / root[k]
        if all(
            sum(a * c for a, c in zip(r, b)).denominator != 1 for r in chart.finite_roots() if r != tuple(root)
        ):
            return tuple(b)
    raise ConsistencyError("no generic base point found")


def affine_census(chart, cx, bound=3):
    """Boundary classes of an affine apartment reached by rays.

    Directions are integer vectors with entries in [-bound, bound].  A
    direction is *regular* when no finite root vanishes on it; the classes are
    its sign patterns.  A direction on which exactly one finite root vanishes
    gives a one-parameter *threshold family*, parametrised by the strip
    between consecutive parallel walls that the ray stays in.
    """
    roots = chart.finite_roots()
    regular, threshold = {}, {}
    for v in itertools.product(range(-bound, bound + 1), repeat=chart.dim):
        if not any(v):
            continue
        signs = tuple(_sign(sum(a * b for a, b in zip(r, v))) for r in roots)
        zeros = [r for r, s in zip(roots, signs) if s == 0]
        norm = sum(c * c for c in v)
        if not zeros:
            if signs not in regular or norm < regular[signs][0]:
                regular[signs] = (norm, v)
        elif len(zeros) == 1:
            key = signs
            if key not in threshold or norm < threshold[key][0]:
                threshold[key] = (norm, v)
    out = []
    for signs, (_, v) in sorted(regular.items()):
        pt = AffinePoint(chart, cx, v)
        phi = [{"root": r, "sign": s, "levels": "all"} for r, s in zip(roots, signs)]
        out.append(CensusClass("regular", v, signs, pt, None, phi))
    for signs, (_, v) in sorted(threshold.items()):
        r0 = next(r for r, s in zip(roots, signs) if s == 0)
        base = _generic_base(chart, r0, Fraction(1, 2))
        pt = AffinePoint(chart, cx, v, base)
        phi = [{"root": r, "sign": s, "levels": "all"} for r, s in zip(roots, signs) if s]
        # roots r + k and -r + k containing the strip 0 < <r, x> < 1
        phi.append({"root": r0, "sign": 1, "levels": {"k_min": 0}})
        phi.append({"root": r0, "sign": -1, "levels": {"k_min": 1}})
        out.append(CensusClass("threshold", v, signs, pt, r0, phi))
    return out


def threshold_member(census_class, t):
    """The member of a threshold family whose rays stay in the strip t < <r, x> < t + 1."""
    cc = census_class
    chart = cc.point.chart
    base = _generic_base(chart, cc.parallel_root, Fraction(2 * t + 1, 2))
    return AffinePoint(chart, cc.point.cx, cc.direction, base)
