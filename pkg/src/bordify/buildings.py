"""Buildings as chamber systems with a Weyl distance.

Backends
--------
``ThinBuilding``      the Coxeter complex of W itself; chambers are canonical words.
``TreeBuilding``      a (bi)regular tree seen as a building of type D_inf:
                      chambers are edges, panels are vertices, the panel type is
                      the vertex colour.  The tree is generated lazily, so
                      sequences may run far past the window.
``ProductBuilding``   the product of two buildings; types of the second factor
                      are shifted past those of the first.
``FanoBuilding``      the flag complex of the 7-point projective plane, a thick
                      A2 building with 21 chambers.

Every backend has a *window*: a finite set of chambers used whenever an
operation needs to enumerate.  Apartments are handled through
:class:`ApartmentChart`, a Weyl-isometric map from words of W to chambers.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .coxeter import CoxeterSystem, block_sum, dihedral, type_a, INF
from .errors import ConsistencyError, MalformedInput, WindowEscape
from .residues import CoxeterComplex


@dataclass(frozen=True, order=True)
class BResidue:
    """A spherical residue of a building: its type and its (sorted) chambers."""

    J: tuple
    chambers: tuple

    def __contains__(self, c):
        return c in self.chambers

    def __repr__(self):
        return f"BResidue(J={list(self.J)}, {len(self.chambers)} chambers, first={self.chambers[0]!r})"


@dataclass
class ApartmentChart:
    """A Weyl-isometric injection from (part of) W into the chambers."""

    base: object
    image: dict = field(default_factory=dict)  # canonical word -> chamber
    preimage: dict = field(default_factory=dict)  # chamber -> canonical word

    def put(self, word, chamber):
        self.image[word] = chamber
        self.preimage[chamber] = word

    def word(self, chamber):
        try:
            return self.preimage[chamber]
        except KeyError:
            raise WindowEscape(f"chamber {chamber!r} is not in the apartment chart") from None

    def chamber(self, word):
        try:
            return self.image[word]
        except KeyError:
            raise WindowEscape(f"word {list(word)} is outside the charted part of the apartment") from None

    def __contains__(self, chamber):
        return chamber in self.preimage

    def key(self):
        return frozenset(self.preimage)


class ChamberSystem:
    """Base class.  Subclasses provide ``neighbors``, ``chambers`` and ``chamber_id``."""

    kind = "abstract"

    def __init__(self, system, radius):
        if not isinstance(system, CoxeterSystem):
            system = CoxeterSystem(system)
        self.W = system
        self.cx = CoxeterComplex(system)
        self.radius = radius
        self.delta = lru_cache(maxsize=1 << 16)(self._delta)
        self.residue = lru_cache(maxsize=None)(self._residue)
        self.find_apartment = lru_cache(maxsize=1 << 16)(self._find_apartment)

    @property
    def rank(self):
        return self.W.rank

    # -- to be provided by backends --------------------------------------------

    def neighbors(self, c, s):
        """Chambers s-adjacent to c, c excluded, sorted."""
        raise NotImplementedError

    def chambers(self):
        """Chambers of the window, sorted."""
        raise NotImplementedError

    def in_window(self, c):
        raise NotImplementedError

    def chamber_id(self, c):
        return str(c)

    def parse_chamber(self, text):
        raise NotImplementedError

    # -- generic machinery -------------------------------------------------------

    def _delta(self, c, d):
        """Weyl distance: the type of a minimal gallery from c to d, reduced."""
        if c == d:
            return ()
        seen = {c: ()}
        queue = deque([c])
        limit = 4 * max(self.radius, 1) + 8
        while queue:
            x = queue.popleft()
            word = seen[x]
            if len(word) > limit:
                break
            for s in range(self.rank):
                for y in self.neighbors(x, s):
                    if y not in seen:
                        seen[y] = word + (s,)
                        if y == d:
                            w = seen[y]
                            red = self.W.reduce(w)
                            if len(red) != len(w):
                                raise ConsistencyError(f"minimal gallery type {w} is not reduced")
                            return red
                        queue.append(y)
        raise WindowEscape(f"no gallery from {c!r} to {d!r} within {limit} steps")

    def gallery_distance(self, c, d):
        return len(self.delta(c, d))

    def _residue(self, c, J):
        J = tuple(sorted(set(J)))
        if not self.W.is_spherical(J):
            raise MalformedInput(f"residue type {list(J)} is not spherical")
        seen = {c}
        stack = [c]
        while stack:
            x = stack.pop()
            for s in J:
                for y in self.neighbors(x, s):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return BResidue(J, tuple(sorted(seen)))

    def chamber_residue(self, c):
        return self.residue(c, ())

    def residues(self):
        """Spherical residues all of whose chambers lie in the window."""
        out = set()
        for J in self.W.spherical_types():
            for c in self.chambers():
                R = self.residue(c, J)
                if all(self.in_window(x) for x in R.chambers):
                    out.add(R)
        return sorted(out, key=lambda R: (len(R.J), R.chambers))

    def star(self, R):
        """Residues of type K within R, for all K contained in R.J."""
        out = set()
        for k in range(len(R.J) + 1):
            for K in itertools.combinations(R.J, k):
                for c in R.chambers:
                    out.add(self.residue(c, K))
        return out

    def faces(self, R):
        """Simplicial faces of R: spherical residues containing all its chambers."""
        rest = [s for s in range(self.rank) if s not in R.J]
        out = set()
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                J = tuple(sorted(R.J + extra))
                if self.W.is_spherical(J):
                    out.add(self.residue(R.chambers[0], J))
        return out

    def closure(self, residues):
        out = set()
        for R in residues:
            out |= self.faces(R)
        return out

    # -- apartments ------------------------------------------------------------

    def _chart_words(self):
        if self.W.is_spherical(range(self.rank)):
            return self.W.parabolic(tuple(range(self.rank)))
        return tuple(self.W.ball(self.radius))

    def _extend_chart(self, chart, words, k, collect=None):
        """Depth-first completion of ``chart`` over ``words[k:]`` (ShortLex order)."""
        W = self.W
        while k < len(words) and words[k] in chart.image:
            k += 1
        if k == len(words):
            if collect is None:
                return True
            collect.append(ApartmentChart(chart.base, dict(chart.image), dict(chart.preimage)))
            return False
        u = words[k]
        parent = u[:-1]
        if parent not in chart.image:  # the parent ran off the window
            return self._extend_chart(chart, words, k + 1, collect)
        cands = [x for x in self.neighbors(chart.image[parent], u[-1]) if self.in_window(x) and x not in chart]
        if not cands:
            return self._extend_chart(chart, words, k + 1, collect)
        inv_cache = {}
        for x in cands:
            ok = True
            for v, y in chart.image.items():
                want = inv_cache.get(v)
                if want is None:
                    want = inv_cache[v] = W.reduce(tuple(reversed(v)) + u)
                if self.delta(y, x) != want:
                    ok = False
                    break
            if not ok:
                continue
            chart.put(u, x)
            if self._extend_chart(chart, words, k + 1, collect):
                return True
            del chart.image[u]
            del chart.preimage[x]
        return False

    def _find_apartment(self, c, d):
        """A chart with base c whose image contains d; smallest ids win ties."""
        u0 = self.delta(c, d)
        chart = ApartmentChart(c)
        chart.put((), c)
        chart.put(u0, d)
        if not self._extend_chart(chart, list(self._chart_words()), 0):
            raise ConsistencyError(f"no apartment through {c!r} and {d!r} found")
        self.check_chart(chart, sample=None)
        return chart

    def apartments_through(self, c):
        """All charts with base c (one per apartment containing c)."""
        chart = ApartmentChart(c)
        chart.put((), c)
        found = []
        self._extend_chart(chart, list(self._chart_words()), 0, collect=found)
        return found

    def check_chart(self, chart, sample=None):
        items = sorted(chart.image.items())
        if sample is not None:
            items = items[:sample]
        for (u, x), (v, y) in itertools.product(items, repeat=2):
            if self.delta(x, y) != self.W.reduce(tuple(reversed(u)) + v):
                raise ConsistencyError(f"chart is not isometric at {u}, {v}")
        return True

    def chart_residue(self, chart, R):
        """The thin coset of the chart corresponding to a building residue."""
        for c in R.chambers:
            if c in chart:
                return self.cx.residue(chart.word(c), R.J)
        raise WindowEscape(f"{R} does not meet the apartment chart")

    def residue_from_chart(self, chart, sigma):
        return self.residue(chart.chamber(sigma.w), sigma.J)

    def common_chart(self, R1, R2):
        return self.find_apartment(R1.chambers[0], R2.chambers[0])

    # -- metric ------------------------------------------------------------------

    def root_distance(self, R1, R2, chart=None):
        chart = chart or self.common_chart(R1, R2)
        return self.cx.root_distance(self.chart_residue(chart, R1), self.chart_residue(chart, R2))

    def retraction(self, chart, center, c):
        """rho_{A, center}(c): the charted chamber at Weyl distance delta(center, c)."""
        if center not in chart:
            raise MalformedInput(f"center {center!r} is not in the chart")
        target = self.W.reduce(chart.word(center) + self.delta(center, c))
        return chart.chamber(target)

    def retract_residue(self, chart, center, R):
        """Image of R under the retraction, as a coset of the chart."""
        rho = self.retraction(chart, center, R.chambers[0])
        return self.cx.residue(chart.word(rho), R.J)

    def project_residue(self, R, T):
        """Gate of T in St(R): the unique element at minimal root-distance."""
        best, best_d = [], None
        for sigma in self.star(R):
            d = self.root_distance(sigma, T)
            if best_d is None or d < best_d:
                best, best_d = [sigma], d
            elif d == best_d:
                best.append(sigma)
        if len(best) != 1:
            raise ConsistencyError(f"projection onto {R} is not unique: {best}")
        return best[0]

    def project_via_hull(self, R, T):
        """The same gate as the maximal element of Conv(R, T) having R as a face, read in a common apartment."""
        chart = self.common_chart(R, T)
        a, b = self.chart_residue(chart, R), self.chart_residue(chart, T)
        return self.residue_from_chart(chart, self.cx.projection_via_hull(a, b))

    def project_chamber(self, R, c):
        """Classical gate: the chamber of R nearest to c."""
        dists = {x: self.gallery_distance(x, c) for x in R.chambers}
        m = min(dists.values())
        best = [x for x, v in dists.items() if v == m]
        if len(best) != 1:
            raise ConsistencyError(f"gate of {c!r} in {R} is not unique")
        return best[0]

    def convex_hull(self, R1, R2):
        """Conv(R1, R2): the thin hull in any apartment containing both."""
        chart = self.common_chart(R1, R2)
        a, b = self.chart_residue(chart, R1), self.chart_residue(chart, R2)
        return {self.residue_from_chart(chart, s) for s in self.cx.convex_hull(a, b, horizon=self._chart_horizon(chart))}

    def _chart_horizon(self, chart):
        return max(len(u) for u in chart.image)

    def interval(self, R1, R2, residues=None):
        """Window residues sigma with d(R1, sigma) + d(sigma, R2) = d(R1, R2)."""
        total = self.root_distance(R1, R2)
        residues = self.residues() if residues is None else residues
        return {s for s in residues if self.root_distance(R1, s) + self.root_distance(s, R2) == total}


# ---------------------------------------------------------------------------


class ThinBuilding(ChamberSystem):
    kind = "thin"

    def __init__(self, system, radius=None):
        if not isinstance(system, CoxeterSystem):
            system = CoxeterSystem(system)
        finite = system.is_spherical(range(system.rank))
        if radius is None:
            if not finite:
                raise MalformedInput("an infinite Coxeter group needs a window radius")
            radius = len(system.longest(tuple(range(system.rank))))
        super().__init__(system, radius)
        self._chambers = system.ball(radius)
        self._set = set(self._chambers)

    def neighbors(self, c, s):
        return [self.W.reduce(c + (s,))]

    def chambers(self):
        return sorted(self._chambers)

    def in_window(self, c):
        return c in self._set

    def _delta(self, c, d):
        return self.W.reduce(tuple(reversed(c)) + d)

    def _find_apartment(self, c, d):
        chart = ApartmentChart(c)
        for w in self._chambers:
            chart.put(self.W.reduce(tuple(reversed(c)) + w), w)
        return chart

    def chamber_id(self, c):
        return list(c)

    def parse_chamber(self, value):
        return self.W.reduce(tuple(value))


class TreeBuilding(ChamberSystem):
    """Lazy (q0, q1)-biregular tree; vertices are tuples of child indices.

    The root ``()`` has colour 0 and q0 children; any other vertex v has colour
    ``len(v) % 2`` and ``q_colour - 1`` children.  The edge ending at the
    non-root vertex v is identified with v.  The window holds edges of depth
    at most ``radius``.
    """

    kind = "tree"

    def __init__(self, valences=(3, 3), radius=4):
        q0, q1 = valences
        if q0 < 2 or q1 < 2:
            raise MalformedInput("tree valences must be at least 2")
        if radius < 1:
            raise MalformedInput("tree window radius must be at least 1")
        super().__init__(dihedral(INF), radius)
        self.valences = (q0, q1)

    @staticmethod
    def color(v):
        return len(v) % 2

    def children(self, v):
        n = self.valences[0] if not v else self.valences[self.color(v)] - 1
        return [v + (i,) for i in range(n)]

    def vertex_edges(self, v):
        """Edges at vertex v, sorted."""
        out = self.children(v)
        if v:
            out.append(v)
        return sorted(out)

    def endpoints(self, e):
        return e[:-1], e

    def endpoint(self, e, s):
        """The endpoint of edge e of colour s."""
        a, b = e[:-1], e
        return a if self.color(a) == s else b

    def neighbors(self, c, s):
        v = self.endpoint(c, s)
        return [e for e in self.vertex_edges(v) if e != c]

    def chambers(self):
        out = []
        layer = [()]
        for _ in range(self.radius):
            layer = [c for v in layer for c in self.children(v)]
            out.extend(layer)
        return sorted(out)

    def in_window(self, c):
        return 1 <= len(c) <= self.radius

    def vertex_of(self, R):
        if R.J == ():
            raise MalformedInput("a chamber is not a vertex")
        return self.endpoint(R.chambers[0], R.J[0])

    def vertex_residue(self, v):
        return BResidue((self.color(v),), tuple(self.vertex_edges(v)))

    @staticmethod
    def vertex_path(a, b):
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        up = [a[:i] for i in range(len(a), k, -1)]
        down = [b[:i] for i in range(k, len(b) + 1)]
        return up + down

    def _delta(self, c, d):
        if c == d:
            return ()
        best = None
        for p in self.endpoints(c):
            for q in self.endpoints(d):
                path = self.vertex_path(p, q)
                if best is None or len(path) < len(best):
                    best = path
        return tuple(self.color(v) for v in best)

    def _line_extension(self, prev, v):
        """Extend a line from prev through v, choosing the smallest edge id."""
        out = []
        while True:
            cands = []
            for e in self.vertex_edges(v):
                a, b = self.endpoints(e)
                other = b if a == v else a
                if other != prev and self.in_window(e):
                    cands.append((e, other))
            if not cands:
                return out
            e, other = cands[0]
            out.append(e)
            prev, v = v, other

    def _find_apartment(self, c, d):
        # vertex line through both edges, then extended at both ends
        if c == d:
            a, b = self.endpoints(c)
            path = [a, b]
        else:
            best = None
            for p in self.endpoints(c):
                for q in self.endpoints(d):
                    pth = self.vertex_path(p, q)
                    if best is None or len(pth) < len(best):
                        best = pth
            other_c = [x for x in self.endpoints(c) if x != best[0]][0]
            other_d = [x for x in self.endpoints(d) if x != best[-1]][0]
            path = [other_c] + best + [other_d]
        edges = [self._edge(path[i], path[i + 1]) for i in range(len(path) - 1)]
        tail = self._line_extension(path[-2], path[-1])
        head = self._line_extension(path[1], path[0])
        line = list(reversed(head)) + edges + tail
        if not all(self.in_window(e) for e in line):
            raise WindowEscape("apartment through the given chambers leaves the window")
        chart = ApartmentChart(c)
        for e in line:
            chart.put(self.delta(c, e), e)
        return chart

    def depth(self, R):
        return len(R.chambers[0]) if not R.J else len(self.vertex_of(R))

    def _toward(self, v, u):
        """The edge at vertex v on the path to vertex u (u != v)."""
        path = self.vertex_path(v, u)
        return self._edge(v, path[1])

    def root_distance(self, R1, R2, chart=None):
        """Closed formula on the tree; the chart route is used when a chart is given.

        vertex-vertex: path length k; edge-edge: gallery distance;
        vertex-edge: k + 1/2 with k the distance to the nearer endpoint.
        """
        if chart is not None:
            return super().root_distance(R1, R2, chart)
        if R1.J and R2.J:
            return Fraction(len(self.vertex_path(self.vertex_of(R1), self.vertex_of(R2))) - 1)
        if not R1.J and not R2.J:
            return Fraction(self.gallery_distance(R1.chambers[0], R2.chambers[0]))
        if R1.J:
            R1, R2 = R2, R1
        v, e = self.vertex_of(R2), R1.chambers[0]
        k = min(len(self.vertex_path(v, p)) - 1 for p in self.endpoints(e))
        return Fraction(2 * k + 1, 2)

    def project_residue(self, R, T):
        """Gate on the tree: the edge at R's vertex pointing to T."""
        if not R.J:
            return R
        v = self.vertex_of(R)
        if T.J:
            u = self.vertex_of(T)
            if u == v:
                return R
        else:
            e = T.chambers[0]
            if v in self.endpoints(e):
                return T
            u = min(self.endpoints(e), key=lambda p: len(self.vertex_path(v, p)))
        return self.chamber_residue(self._toward(v, u))

    @staticmethod
    def _edge(a, b):
        return b if len(b) > len(a) else a

    @staticmethod
    def _vname(v):
        return "v" + ".".join(map(str, v))

    def chamber_id(self, c):
        return f"{self._vname(c[:-1])}-{self._vname(c)}"

    def parse_chamber(self, text):
        try:
            a, b = str(text).split("-")
            va = tuple(int(x) for x in a[1:].split(".") if x != "")
            vb = tuple(int(x) for x in b[1:].split(".") if x != "")
        except ValueError as exc:
            raise MalformedInput(f"bad tree chamber id {text!r}") from exc
        e = self._edge(va, vb)
        if set(self.endpoints(e)) != {va, vb}:
            raise MalformedInput(f"{text!r} is not an edge of the tree")
        for k in range(1, len(e) + 1):
            v = e[:k]
            if v[-1] >= len(self.children(v[:-1])):
                raise MalformedInput(f"{text!r} is not an edge of the tree")
        return e


class ProductBuilding(ChamberSystem):
    """Product of two buildings; chambers are pairs."""

    kind = "product"

    def __init__(self, first, second):
        self.first, self.second = first, second
        self.shift = first.rank
        super().__init__(CoxeterSystem(block_sum(first.W.matrix, second.W.matrix)), first.radius + second.radius)

    def split(self, word):
        a = tuple(s for s in word if s < self.shift)
        b = tuple(s - self.shift for s in word if s >= self.shift)
        return a, b

    def join(self, a, b):
        return self.W.reduce(tuple(a) + tuple(s + self.shift for s in b))

    def neighbors(self, c, s):
        c1, c2 = c
        if s < self.shift:
            return [(x, c2) for x in self.first.neighbors(c1, s)]
        return [(c1, x) for x in self.second.neighbors(c2, s - self.shift)]

    def chambers(self):
        return [(a, b) for a in self.first.chambers() for b in self.second.chambers()]

    def in_window(self, c):
        return self.first.in_window(c[0]) and self.second.in_window(c[1])

    def _delta(self, c, d):
        return self.join(self.first.delta(c[0], d[0]), self.second.delta(c[1], d[1]))

    def _residue(self, c, J):
        J1, J2 = self.split_type(J)
        R1, R2 = self.first.residue(c[0], J1), self.second.residue(c[1], J2)
        return self.combine(R1, R2)

    def split_type(self, J):
        J = tuple(sorted(set(J)))
        return tuple(s for s in J if s < self.shift), tuple(s - self.shift for s in J if s >= self.shift)

    def combine(self, R1, R2):
        J = tuple(R1.J) + tuple(s + self.shift for s in R2.J)
        return BResidue(J, tuple(sorted(itertools.product(R1.chambers, R2.chambers))))

    def factors(self, R):
        J1, J2 = self.split_type(R.J)
        c = R.chambers[0]
        return self.first.residue(c[0], J1), self.second.residue(c[1], J2)

    def residues(self):
        return sorted(
            (self.combine(a, b) for a in self.first.residues() for b in self.second.residues()),
            key=lambda R: (len(R.J), R.chambers),
        )

    def root_distance(self, R1, R2, chart=None):
        """Phi-sets of a product apartment are disjoint unions of the factor Phi-sets."""
        if chart is not None:
            return super().root_distance(R1, R2, chart)
        a1, a2 = self.factors(R1)
        b1, b2 = self.factors(R2)
        return self.first.root_distance(a1, b1) + self.second.root_distance(a2, b2)

    def _find_apartment(self, c, d):
        A1 = self.first.find_apartment(c[0], d[0])
        A2 = self.second.find_apartment(c[1], d[1])
        chart = ApartmentChart(c)
        for (u1, x1), (u2, x2) in itertools.product(A1.image.items(), A2.image.items()):
            chart.put(self.join(u1, u2), (x1, x2))
        return chart

    def chamber_id(self, c):
        return [self.first.chamber_id(c[0]), self.second.chamber_id(c[1])]

    def parse_chamber(self, value):
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise MalformedInput("product chamber ids are pairs")
        return self.first.parse_chamber(value[0]), self.second.parse_chamber(value[1])


class FanoBuilding(ChamberSystem):
    """Flags (point, line) of the Fano plane.

    Points are 0..6 and line j is {j, j+1, j+3} mod 7.  Generator 0 changes
    the point of a flag, generator 1 changes the line.
    """

    kind = "fano"

    LINES = tuple(frozenset({j % 7, (j + 1) % 7, (j + 3) % 7}) for j in range(7))

    def __init__(self):
        super().__init__(type_a(2), 3)
        self._flags = sorted((p, j) for j, line in enumerate(self.LINES) for p in line)

    def neighbors(self, c, s):
        p, j = c
        if s == 0:
            return sorted((q, j) for q in self.LINES[j] if q != p)
        return sorted((p, k) for k, line in enumerate(self.LINES) if p in line and k != j)

    def chambers(self):
        return list(self._flags)

    def in_window(self, c):
        return True

    def chamber_id(self, c):
        return f"p{c[0]}-l{c[1]}"

    def parse_chamber(self, text):
        try:
            p, l = str(text).split("-")
            c = (int(p[1:]), int(l[1:]))
        except ValueError as exc:
            raise MalformedInput(f"bad Fano flag id {text!r}") from exc
        if c not in self._flags or not (p.startswith("p") and l.startswith("l")):
            raise MalformedInput(f"{text!r} is not a flag of the Fano plane")
        return c


def make_thin(system, radius=None):
    return ThinBuilding(system, radius)


def make_tree(valences=(3, 3), radius=4):
    return TreeBuilding(tuple(valences), radius)


def make_product(first, second):
    return ProductBuilding(first, second)


def make_fano():
    return FanoBuilding()
