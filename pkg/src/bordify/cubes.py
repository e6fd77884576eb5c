"""Median graphs (vertex sets of CAT(0) cube complexes) and Roller points.

A :class:`MedianGraph` is a finite window of vertices together with its
walls.  Each vertex is a sign vector over the walls; the ``sides`` matrix
holds these as +1/-1.  Half-spaces are pairs ``(wall, sign)``.

Backends: windows of Z and Z^2 (walls ``(axis, t)`` separating ``x_axis <= t``
from ``x_axis > t``), finite trees (walls are edges), single n-cubes, and
median closures of explicit point sets in {0,1}^n.

Ultrafilters (points of the Roller compactification) are given by
:class:`Principal`, :class:`Directional` (grids only: per-axis ``"+inf"``,
``"-inf"`` or an integer coordinate) and :class:`Explicit` orientations.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .boundary import _stable_tail
from .errors import MalformedInput, ResourceLimit, Undecided, WindowEscape


class MedianGraph:
    kind = "abstract"

    def __init__(self, vertices, walls, sides):
        self.vertices = list(vertices)
        self.walls = list(walls)
        self.index = {v: k for k, v in enumerate(self.vertices)}
        self.wall_index = {w: k for k, w in enumerate(self.walls)}
        self.sides = np.asarray(sides, dtype=np.int8).reshape(len(self.vertices), len(self.walls))
        self._by_signs = {row.tobytes(): v for v, row in zip(self.vertices, self.sides)}
        if len(self._by_signs) != len(self.vertices):
            raise MalformedInput("two vertices have the same wall signs")

    def __len__(self):
        return len(self.vertices)

    def side(self, v, wall):
        """Side of an arbitrary vertex (backends override for vertices off the window)."""
        return int(self.sides[self.index[v], self.wall_index[wall]])

    def sign_vector(self, v):
        k = self.index.get(v)
        if k is not None:
            return self.sides[k]
        return np.array([self.side(v, w) for w in self.walls], dtype=np.int8)

    def vertex_of(self, signs):
        try:
            return self._by_signs[np.asarray(signs, dtype=np.int8).tobytes()]
        except KeyError:
            raise WindowEscape("sign vector is not a vertex of the window") from None

    def median(self, u, v, w):
        a, b, c = (self.sign_vector(x).astype(np.int16) for x in (u, v, w))
        return self.vertex_of(np.sign(a + b + c))

    def l1_distance(self, a, b):
        return int((self.sign_vector(a) != self.sign_vector(b)).sum())

    def cube_phi(self, a, b):
        """Half-spaces containing a but not b."""
        sa, sb = self.sign_vector(a), self.sign_vector(b)
        return {(w, int(sa[k])) for k, w in enumerate(self.walls) if sa[k] != sb[k]}

    def edges(self):
        out = []
        for i, j in itertools.combinations(range(len(self.vertices)), 2):
            if (self.sides[i] != self.sides[j]).sum() == 1:
                out.append((self.vertices[i], self.vertices[j]))
        return out

    def interval(self, a, b):
        """Conv(a, b): vertices agreeing with a and b on every wall where they agree."""
        return self.vertices_of(self._interval_mask(self.sign_vector(a), self.sign_vector(b)))

    def _interval_mask(self, sa, sb):
        agree = sa == sb
        return ~((self.sides != sa[None, :]) & agree[None, :]).any(axis=1)

    def vertices_of(self, mask):
        return {self.vertices[k] for k in np.flatnonzero(mask)}

    def orientation_of(self, v):
        return {w: int(s) for w, s in zip(self.walls, self.sign_vector(v))}


class GridGraph(MedianGraph):
    """The box [lo, hi]^dim of Z^dim."""

    kind = "grid"

    def __init__(self, dim, lo, hi):
        if dim not in (1, 2):
            raise MalformedInput("grid windows have dimension 1 or 2")
        if hi <= lo:
            raise MalformedInput("grid window needs lo < hi")
        self.dim, self.lo, self.hi = dim, lo, hi
        vertices = list(itertools.product(range(lo, hi + 1), repeat=dim))
        walls = [(a, t) for a in range(dim) for t in range(lo, hi)]
        sides = [[1 if v[a] > t else -1 for (a, t) in walls] for v in vertices]
        super().__init__(vertices, walls, sides)

    def side(self, v, wall):
        a, t = wall
        return 1 if v[a] > t else -1

    def sign_vector(self, v):
        return np.array([1 if v[a] > t else -1 for (a, t) in self.walls], dtype=np.int8)

    def l1_distance(self, a, b):
        return sum(abs(x - y) for x, y in zip(a, b))

    def walls_between(self, a, b):
        out = []
        for ax in range(self.dim):
            lo, hi = sorted((a[ax], b[ax]))
            out.extend((ax, t) for t in range(lo, hi))
        return out


class TreeGraph(MedianGraph):
    """A finite tree; the wall of edge (a, b) has b on its + side."""

    kind = "tree"

    def __init__(self, edges):
        edges = [tuple(e) for e in edges]
        nodes = sorted({x for e in edges for x in e})
        if len(edges) != len(nodes) - 1:
            raise MalformedInput("a tree on n vertices has n - 1 edges")
        adj = {v: [] for v in nodes}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        self.adj = adj
        sides = []
        comps = []
        for a, b in edges:
            seen = {b}
            stack = [b]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen and (x, y) != (b, a):
                        seen.add(y)
                        stack.append(y)
            if a in seen:
                raise MalformedInput("edges contain a cycle")
            comps.append(seen)
        for v in nodes:
            sides.append([1 if v in comp else -1 for comp in comps])
        super().__init__(nodes, edges, sides)

    def path(self, a, b):
        prev = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]


class CubeGraph(MedianGraph):
    kind = "cube"

    def __init__(self, n):
        if n < 1:
            raise MalformedInput("cube dimension must be positive")
        vertices = list(itertools.product((0, 1), repeat=n))
        sides = [[1 if b else -1 for b in v] for v in vertices]
        super().__init__(vertices, list(range(n)), sides)


def median_closure(points):
    pts = {tuple(int(b) for b in p) for p in points}
    if not pts:
        raise MalformedInput("empty point set")
    n = len(next(iter(pts)))
    if any(len(p) != n for p in pts):
        raise MalformedInput("points have different lengths")
    while True:
        arr = sorted(pts)
        new = set()
        for a, b, c in itertools.combinations(arr, 3):
            m = tuple(1 if x + y + z >= 2 else 0 for x, y, z in zip(a, b, c))
            if m not in pts:
                new.add(m)
        if not new:
            return sorted(pts)
        pts |= new


class PointsGraph(MedianGraph):
    """Median closure of points of {0,1}^n; coordinates inducing the same split are merged."""

    kind = "points"

    def __init__(self, points):
        verts = median_closure(points)
        arr = np.array(verts, dtype=np.int8)
        walls, cols, seen = [], [], set()
        for k in range(arr.shape[1]):
            col = arr[:, k]
            if col.min() == col.max():
                continue
            key = tuple(col) if col[0] == 0 else tuple(1 - col)
            if key in seen:
                continue
            seen.add(key)
            walls.append(k)
            cols.append(np.where(col == 1, 1, -1))
        sides = np.stack(cols, axis=1) if cols else np.zeros((len(verts), 0), dtype=np.int8)
        super().__init__(verts, walls, sides)


def make_complex(doc):
    kind = doc.get("kind")
    if kind == "grid":
        return GridGraph(doc.get("dim", 1), doc.get("lo", -5), doc.get("hi", 5))
    if kind == "tree":
        return TreeGraph(doc["edges"])
    if kind == "cube":
        return CubeGraph(doc["n"])
    if kind == "points":
        return PointsGraph(doc["points"])
    raise MalformedInput(f"unknown complex kind {kind!r}")


# ---------------------------------------------------------------------------
# Ultrafilters


class Ultrafilter:
    variant = "abstract"

    def orient(self, G, wall):
        raise NotImplementedError

    def orientation(self, G):
        out = []
        for w in G.walls:
            o = self.orient(G, w)
            if o is None:
                raise Undecided(f"wall {w} is not oriented", items=[w])
            out.append(o)
        return np.array(out, dtype=np.int8)

    def representative(self, G, n):
        raise NotImplementedError


@dataclass(frozen=True)
class Principal(Ultrafilter):
    vertex: tuple
    variant = "principal"

    def orient(self, G, wall):
        return G.side(self.vertex, wall)

    def representative(self, G, n):
        return self.vertex


@dataclass(frozen=True)
class Directional(Ultrafilter):
    """Per axis "+inf", "-inf" or an integer coordinate; grids only."""

    axes: tuple
    variant = "directional"

    def __post_init__(self):
        for a in self.axes:
            if a not in ("+inf", "-inf") and not isinstance(a, int):
                raise MalformedInput(f"axis value {a!r} must be '+inf', '-inf' or an integer")

    def orient(self, G, wall):
        a, t = wall
        c = self.axes[a]
        if c == "+inf":
            return 1
        if c == "-inf":
            return -1
        return 1 if c > t else -1

    def representative(self, G, n):
        out = []
        for c in self.axes:
            if c == "+inf":
                out.append(G.hi + n)
            elif c == "-inf":
                out.append(G.lo - n)
            else:
                out.append(c)
        return tuple(out)

    @property
    def is_principal(self):
        return all(isinstance(c, int) for c in self.axes)

    def kind(self):
        inf = sum(1 for c in self.axes if not isinstance(c, int))
        return {0: "principal", 1: "line" if len(self.axes) == 2 else "end", 2: "corner"}[inf]


@dataclass(frozen=True)
class Explicit(Ultrafilter):
    choices: tuple  # ((wall, sign), ...)
    variant = "explicit"

    def orient(self, G, wall):
        return dict(self.choices).get(wall)


@dataclass
class Validation:
    ok: bool
    witness: tuple = None
    reason: str = ""


def validate_ultrafilter(G, spec):
    """Pairwise consistency of the chosen half-spaces on the window."""
    chosen = []
    for w in G.walls:
        o = spec.orient(G, w)
        if o is not None:
            chosen.append((w, o))
    if isinstance(spec, Explicit):
        for w, o in spec.choices:
            if w not in G.wall_index:
                return Validation(False, ((w, o),), f"wall {w} is not a wall of the window")
    if not chosen:
        return Validation(True)
    C = np.stack([G.sides[:, G.wall_index[w]] == o for w, o in chosen], axis=1).astype(np.int32)
    meet = C.T @ C
    bad = np.argwhere(meet == 0)
    if len(bad):
        i, j = bad[0]
        return Validation(False, (chosen[i], chosen[j]), "disjoint half-spaces")
    if isinstance(G, GridGraph):
        # thresholds along each axis must switch from + to - at most once
        for a in range(G.dim):
            seq = [o for (ax, t), o in sorted(chosen) if ax == a]
            if any(x == -1 and y == 1 for x, y in zip(seq, seq[1:])):
                k = next(i for i, (x, y) in enumerate(zip(seq, seq[1:])) if x == -1 and y == 1)
                ws = [(w, o) for w, o in sorted(chosen) if w[0] == a]
                return Validation(False, (ws[k], ws[k + 1]), "non-monotone thresholds")
    return Validation(True)


def pair_patterns(G):
    """T[i, j, a, b]: some vertex has sign a on wall i and b on wall j (0 = -, 1 = +)."""
    B = (G.sides > 0).astype(np.int8)
    n = B.shape[1]
    T = np.zeros((n, n, 2, 2), dtype=bool)
    for a in (0, 1):
        for b in (0, 1):
            A = (B == a).astype(np.int32)
            Bb = (B == b).astype(np.int32)
            T[:, :, a, b] = (A.T @ Bb) > 0
    return T


def consistent_orientations(G):
    """All pairwise-consistent total orientations of the walls, as sign vectors."""
    n = len(G.walls)
    if n > 20:
        raise MalformedInput("exhaustive orientation search is limited to 20 walls")
    T = pair_patterns(G)
    O = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)
    ok = np.ones(len(O), dtype=bool)
    for i, j in itertools.combinations(range(n), 2):
        ok &= T[i, j, O[:, i], O[:, j]]
    return [tuple(int(2 * x - 1) for x in row) for row in O[ok]]


# ---------------------------------------------------------------------------
# Sectors, filtering, horofunctions


def _sector_mask(G, sv, orient):
    need = sv == orient
    return ~((G.sides != orient[None, :]) & need[None, :]).any(axis=1)


def cube_sector(G, v, xi):
    """Window vertices lying in every half-space that contains both v and xi."""
    return G.vertices_of(_sector_mask(G, G.sign_vector(v), xi.orientation(G)))


def cube_sector_limit(G, v, terms, confirm):
    """Union over k of intersections over n >= k of Conv(v, v_n), on the window."""
    sv = G.sign_vector(v)
    rows = np.array([G.sign_vector(t) for t in terms])
    for j in range(rows.shape[1]):
        if _stable_tail([int(x) for x in rows[:, j]], confirm)[0] is None:
            raise Undecided(f"wall {G.walls[j]} not stable", len(terms) - 1, [G.walls[j]])
    out = np.zeros(len(G), dtype=bool)
    tail = np.ones(len(G), dtype=bool)
    for row in reversed(rows):
        tail &= G._interval_mask(sv, row)
        out |= tail
    return G.vertices_of(out)


def cube_filtering(G, u, v, xi):
    """A vertex z with Q(z) inside Q(u) and Q(v), nearest to u."""
    Qu = cube_sector(G, u, xi)
    Qv = Qu if u == v else cube_sector(G, v, xi)
    both = Qu & Qv
    for z in sorted(both, key=lambda z: (G.l1_distance(u, z), G.index[z])):
        if cube_sector(G, z, xi) <= both:
            return z
    raise ResourceLimit(f"no common subsector of {u} and {v} inside the window")


def cube_horofunction(G, xi, y, y0):
    """lim d(v_n, y) - d(v_n, y0), telescoped over the walls separating y and y0."""
    if isinstance(G, GridGraph):
        walls = G.walls_between(y, y0)
        side = G.side
    else:
        walls = [w for w in G.walls if G.side(y, w) != G.side(y0, w)]
        side = G.side
    total = 0
    for w in walls:
        o = xi.orient(G, w)
        if o is None:
            raise Undecided(f"wall {w} is not oriented", items=[w])
        total += int(side(y, w) != o) - int(side(y0, w) != o)
    return total


def cube_horofunction_sequence(G, terms, y, y0, confirm):
    values = [G.l1_distance(t, y) - G.l1_distance(t, y0) for t in terms]
    v, _ = _stable_tail(values, confirm)
    if v is None:
        raise Undecided("horofunction not stable within horizon", len(terms) - 1)
    return v
