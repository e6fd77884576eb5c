"""Coxeter systems: word problem, balls, reflections and wall sides.

Elements of W are represented by their ShortLex-minimal reduced word, a
tuple of 0-based generator indices.  The empty tuple is the identity.

Two solvers are available:

* :func:`tits_reduce` -- exhaustive braid and nil moves (Tits' solution to
  the word problem).  Works for every Coxeter matrix, but the braid class
  of a long word can be large.
* a fast path used by :class:`CoxeterSystem` whenever every off-diagonal
  entry lies in {2, 3, 4, 6, inf}.  It acts on the integer root lattice of a
  generalized Cartan matrix realising the same Coxeter group, so all
  arithmetic is exact integer arithmetic.

Side convention: the positive side of every wall contains the identity
chamber.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConsistencyError, MalformedInput, ResourceLimit

INF = math.inf

Word = tuple  # canonical word of a group element

_CARTAN_PAIRS = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}

DEFAULT_BALL_BUDGET = 2_000_000


def _cache_size():
    raw = os.environ.get("BORDIFY_CACHE_SIZE")
    if raw is None:
        return 1 << 18
    try:
        size = int(raw)
    except ValueError as exc:
        raise MalformedInput(f"BORDIFY_CACHE_SIZE must be an integer, got {raw!r}") from exc
    return None if size <= 0 else size


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix; ``math.inf`` marks an infinite entry."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(INF if e == INF else int(e) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0:
            raise MalformedInput("Coxeter matrix must have positive rank")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise MalformedInput("Coxeter matrix must be square")
            if row[i] != 1:
                raise MalformedInput(f"diagonal entry m[{i}][{i}] must be 1")
            for j, e in enumerate(row):
                if e != rows[j][i]:
                    raise MalformedInput(f"Coxeter matrix not symmetric at ({i},{j})")
                if i != j and e < 2:
                    raise MalformedInput(f"off-diagonal entry m[{i}][{j}] must be >= 2")

    @property
    def rank(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def from_json(cls, doc):
        """Parse ``{"rank": n, "matrix": [[...]]}`` with infinity encoded as 0."""
        try:
            matrix = doc["matrix"]
            rank = doc.get("rank", len(matrix))
        except (TypeError, KeyError) as exc:
            raise MalformedInput("Coxeter system document needs a 'matrix' field") from exc
        if rank != len(matrix):
            raise MalformedInput(f"rank {rank} does not match matrix size {len(matrix)}")
        rows = []
        for row in matrix:
            if not isinstance(row, list) or not all(isinstance(e, int) for e in row):
                raise MalformedInput("matrix rows must be lists of integers")
            rows.append(tuple(INF if e == 0 else e for e in row))
        return cls(tuple(rows))

    def to_json(self):
        return {
            "rank": self.rank,
            "matrix": [[0 if e == INF else e for e in row] for row in self.entries],
        }

    def submatrix(self, nodes):
        return CoxeterMatrix(tuple(tuple(self.entries[i][j] for j in nodes) for i in nodes))


def dihedral(m):
    return CoxeterMatrix(((1, m), (m, 1)))


def type_a(n):
    rows = [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n)] for i in range(n)]
    return CoxeterMatrix(tuple(map(tuple, rows)))


def type_b(n):
    rows = [list(r) for r in type_a(n).entries]
    if n >= 2:
        rows[n - 2][n - 1] = rows[n - 1][n - 2] = 4
    return CoxeterMatrix(tuple(map(tuple, rows)))


def affine_a(n):
    """Affine type A~n; node 0 is the affine node.  ``affine_a(1)`` is D_inf."""
    if n == 1:
        return dihedral(INF)
    rows = [[1 if i == j else 2 for j in range(n + 1)] for i in range(n + 1)]
    for i in range(n + 1):
        j = (i + 1) % (n + 1)
        rows[i][j] = rows[j][i] = 3
    return CoxeterMatrix(tuple(map(tuple, rows)))


def block_sum(first, second):
    """Coxeter matrix of the direct product W1 x W2 (generators of W2 shifted)."""
    n1, n2 = first.rank, second.rank
    rows = [[2] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            rows[i][j] = first.entries[i][j]
    for i in range(n2):
        for j in range(n2):
            rows[n1 + i][n1 + j] = second.entries[i][j]
    return CoxeterMatrix(tuple(map(tuple, rows)))


NAMED = {
    "A1": lambda: type_a(1),
    "A2": lambda: type_a(2),
    "A3": lambda: type_a(3),
    "B2": lambda: type_b(2),
    "B3": lambda: type_b(3),
    "G2": lambda: dihedral(6),
    "H3": lambda: CoxeterMatrix(((1, 5, 2), (5, 1, 3), (2, 3, 1))),
    "D_inf": lambda: dihedral(INF),
    "A~1": lambda: affine_a(1),
    "A~2": lambda: affine_a(2),
    "A~1xA~1": lambda: block_sum(affine_a(1), affine_a(1)),
}


def named(name):
    try:
        return NAMED[name]()
    except KeyError:
        raise MalformedInput(f"unknown Coxeter type {name!r}; known: {sorted(NAMED)}") from None


# ---------------------------------------------------------------------------
# Finite-type classification


def _components(matrix, nodes):
    nodes = list(nodes)
    seen, comps = set(), []
    for start in nodes:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in nodes:
                if j not in seen and matrix[i, j] != 2:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def classify_component(matrix, comp):
    """Return the finite type name of a connected component, or None if W_J is infinite."""
    n = len(comp)
    if n == 1:
        return "A1"
    edges = {}
    for a, b in itertools.combinations(comp, 2):
        m = matrix[a, b]
        if m == INF:
            return None
        if m >= 3:
            edges[(a, b)] = m
    if n == 2:
        (m,) = edges.values()
        return f"I2({m})"
    if len(edges) != n - 1:  # connected with a cycle
        return None
    degree = {v: 0 for v in comp}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    big = {e: m for e, m in edges.items() if m > 3}
    if any(m >= 6 for m in big.values()) or len(big) > 1:
        return None
    is_path = max(degree.values()) <= 2
    if big:
        if not is_path:
            return None
        ((a, b), m), = big.items()
        end = degree[a] == 1 or degree[b] == 1
        if m == 4:
            if end:
                return f"B{n}"
            return "F4" if n == 4 else None
        if end and n in (3, 4):
            return f"H{n}"
        return None
    if is_path:
        return f"A{n}"
    branch = [v for v in comp if degree[v] >= 3]
    if len(branch) != 1 or degree[branch[0]] != 3:
        return None
    centre = branch[0]
    adj = {v: [] for v in comp}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    arms = []
    for nb in adj[centre]:
        length, prev, cur = 1, centre, nb
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def finite_type(matrix, J):
    """Type name of W_J as a product ('A1xA2'), '' for J empty, None if infinite."""
    names = []
    for comp in _components(matrix, J):
        name = classify_component(matrix, comp)
        if name is None:
            return None
        names.append(name)
    return "x".join(names)


# ---------------------------------------------------------------------------
# Tits' solution to the word problem


def _braid_moves(matrix, word):
    n = len(word)
    for i in range(n - 1):
        a, b = word[i], word[i + 1]
        if a == b:
            continue
        m = matrix[a, b]
        if m == INF or i + m > n:
            continue
        block = word[i : i + m]
        if all(block[k] == (a if k % 2 == 0 else b) for k in range(m)):
            swapped = tuple(b if k % 2 == 0 else a for k in range(m))
            yield word[:i] + swapped + word[i + m :]


def tits_reduce(matrix, word):
    """ShortLex normal form via exhaustive braid and nil moves."""
    word = tuple(word)
    for s in word:
        if not 0 <= s < matrix.rank:
            raise MalformedInput(f"generator index {s} out of range for rank {matrix.rank}")
    while True:
        seen = {word}
        queue = deque([word])
        cancel = None
        while queue and cancel is None:
            current = queue.popleft()
            for i in range(len(current) - 1):
                if current[i] == current[i + 1]:
                    cancel = current[:i] + current[i + 2 :]
                    break
            else:
                for nxt in _braid_moves(matrix, current):
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        if cancel is None:
            return min(seen)
        word = cancel


# ---------------------------------------------------------------------------


def _is_negative(vec):
    for c in vec:
        if c:
            return c < 0
    raise ConsistencyError("zero vector is not a root")


class CoxeterSystem:
    """A Coxeter system with a memoised word problem.

    Memo tables are ``functools.lru_cache`` instances, which are safe to share
    between threads; concurrent misses may compute the same value twice.
    """

    def __init__(self, matrix, cache_size=None):
        if not isinstance(matrix, CoxeterMatrix):
            matrix = CoxeterMatrix(tuple(map(tuple, matrix)))
        self.matrix = matrix
        self.rank = matrix.rank
        self.crystallographic = all(
            matrix[i, j] in _CARTAN_PAIRS for i in range(self.rank) for j in range(self.rank) if i != j
        )
        self.cartan = self._cartan() if self.crystallographic else None
        size = _cache_size() if cache_size is None else cache_size
        self.reduce = lru_cache(maxsize=size)(self._reduce)
        self.inversion_set = lru_cache(maxsize=size)(self._inversion_set)
        self.parabolic = lru_cache(maxsize=None)(self._parabolic)
        self._wall_origin = {}

    def __repr__(self):
        return f"CoxeterSystem({self.matrix.to_json()['matrix']})"

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def _cartan(self):
        n = self.rank
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a[i][j], a[j][i] = _CARTAN_PAIRS[self.matrix[i, j]]
        return a

    # -- word problem -------------------------------------------------------

    def _check(self, word):
        for s in word:
            if not isinstance(s, int) or not 0 <= s < self.rank:
                raise MalformedInput(f"generator index {s!r} out of range for rank {self.rank}")

    def _reduce(self, word):
        word = tuple(word)
        self._check(word)
        if not self.crystallographic:
            return tits_reduce(self.matrix, word)
        a, n = self.cartan, self.rank
        # vecs[t] = w^{-1}(alpha_t) in simple-root coordinates
        vecs = [[1 if k == t else 0 for k in range(n)] for t in range(n)]
        for s in word:
            row = a[s]
            for v in vecs:
                c = sum(row[j] * v[j] for j in range(n))
                if c:
                    v[s] -= c
        out = []
        while True:
            for s in range(n):
                if _is_negative(vecs[s]):
                    break
            else:
                return tuple(out)
            out.append(s)
            vs = vecs[s][:]
            row = a[s]
            for t in range(n):
                c = row[t]
                if c:
                    v = vecs[t]
                    for k in range(n):
                        v[k] -= c * vs[k]

    def length(self, w):
        return len(self.reduce(tuple(w)))

    def multiply(self, *words):
        return self.reduce(tuple(itertools.chain.from_iterable(words)))

    def inverse(self, w):
        return self.reduce(tuple(reversed(w)))

    def is_reduced(self, word):
        return len(self.reduce(tuple(word))) == len(word)

    # -- root lattice (fast path only) ------------------------------------

    def reflect(self, s, vec):
        c = sum(self.cartan[s][j] * vec[j] for j in range(self.rank))
        if not c:
            return tuple(vec)
        out = list(vec)
        out[s] -= c
        return tuple(out)

    def act(self, w, vec):
        """w(vec) for a root-lattice vector."""
        for s in reversed(w):
            vec = self.reflect(s, vec)
        return tuple(vec)

    # -- balls ---------------------------------------------------------------

    def ball(self, radius, budget=DEFAULT_BALL_BUDGET):
        """All elements of length <= radius, in ShortLex order."""
        if radius < 0:
            raise MalformedInput("radius must be non-negative")
        layer = [()]
        out = [()]
        for k in range(radius):
            nxt = set()
            for u in layer:
                for s in range(self.rank):
                    v = self.reduce(u + (s,))
                    if len(v) == k + 1:
                        nxt.add(v)
            layer = sorted(nxt)
            out.extend(layer)
            if len(out) > budget:
                raise ResourceLimit(f"ball of radius {radius} exceeds budget of {budget} elements")
            if not layer:
                break
        return out

    # -- walls -----------------------------------------------------------------

    def wall_of(self, u, s):
        """Wall of the panel between u and u*s (u canonical, u*s longer than u).

        Walls are keyed by their positive root vector on the fast path and by
        the canonical reflection word otherwise.
        """
        if self.crystallographic:
            root = [0] * self.rank
            root[s] = 1
            key = self.act(u, tuple(root))
            if _is_negative(key):
                key = tuple(-c for c in key)
        else:
            key = self.reduce(u + (s,) + tuple(reversed(u)))
        self._wall_origin.setdefault(key, (u, s))
        return key

    def reflection_word(self, wall):
        """Canonical word of the reflection fixing ``wall``."""
        if not self.crystallographic:
            return wall
        try:
            u, s = self._wall_origin[wall]
        except KeyError:
            raise MalformedInput(f"unknown wall {wall!r}") from None
        return self.reduce(u + (s,) + tuple(reversed(u)))

    def wall_from_reflection(self, t):
        """Inverse of :meth:`reflection_word`."""
        t = self.reduce(tuple(t))
        if len(t) % 2 == 0 or self.reduce(t + t) != ():
            raise MalformedInput(f"{list(t)} is not a reflection")
        conj = []
        while len(t) > 1:
            s = t[0]
            shorter = self.reduce((s,) + t + (s,))
            if len(shorter) != len(t) - 2:
                raise MalformedInput(f"{list(t)} is not a reflection")
            conj.append(s)
            t = shorter
        u = self.reduce(tuple(conj))
        s = t[0]
        if len(self.reduce(u + (s,))) < len(u):
            u = self.reduce(u + (s,))
        return self.wall_of(u, s)

    def reflection(self, wall):
        """The :class:`Reflection` of a wall key."""
        word = self.reflection_word(wall)
        k = len(word) // 2
        return Reflection(word, word[:k])

    def _inversion_set(self, w):
        """Walls separating the identity chamber from the chamber w."""
        w = self.reduce(tuple(w))
        if not w:
            return frozenset()
        prefix = w[:-1]
        return self.inversion_set(prefix) | {self.wall_of(prefix, w[-1])}

    def side(self, wall, w):
        """+1 if chamber w lies on the identity side of ``wall``, else -1."""
        return -1 if wall in self.inversion_set(self.reduce(tuple(w))) else 1

    def reflections(self, radius):
        """Walls w*s*w^-1 with l(w) <= radius, as a sorted list of wall keys."""
        walls = set()
        for w in self.ball(radius):
            for s in range(self.rank):
                if len(self.reduce(w + (s,))) > len(w):
                    walls.add(self.wall_of(w, s))
                else:
                    walls.add(self.wall_of(self.reduce(w + (s,)), s))
        return sorted(walls)

    # -- parabolics ------------------------------------------------------------

    def finite_type(self, J):
        return finite_type(self.matrix, tuple(sorted(J)))

    def is_spherical(self, J):
        return self.finite_type(J) is not None

    def spherical_types(self):
        """All J with W_J finite, as sorted tuples ordered by size."""
        out = []
        for k in range(self.rank + 1):
            for J in itertools.combinations(range(self.rank), k):
                if self.is_spherical(J):
                    out.append(J)
        return out

    def _parabolic(self, J):
        J = tuple(sorted(J))
        if not self.is_spherical(J):
            raise MalformedInput(f"parabolic subgroup of type {list(J)} is infinite")
        elems = {()}
        layer = [()]
        while layer:
            nxt = []
            for u in layer:
                for s in J:
                    v = self.reduce(u + (s,))
                    if v not in elems:
                        elems.add(v)
                        nxt.append(v)
            layer = nxt
        return tuple(sorted(elems, key=lambda x: (len(x), x)))

    def longest(self, J):
        return self.parabolic(tuple(sorted(J)))[-1]


def reduce_word(system, word):
    """ShortLex canonical reduced form of ``word``."""
    if isinstance(system, CoxeterMatrix):
        system = CoxeterSystem(system)
    return system.reduce(tuple(word))


def enumerate_ball(system, radius, budget=DEFAULT_BALL_BUDGET):
    return set(system.ball(radius, budget))


def spherical_types(system):
    return {frozenset(J) for J in system.spherical_types()}


@dataclass(frozen=True)
class Reflection:
    """Reflection w*s*w^-1: canonical word plus a shortest conjugating word."""

    representative: tuple
    orbit_witness: tuple


@dataclass(frozen=True)
class Root:
    """Half-apartment: one side of a wall.  sign=+1 is the identity side."""

    wall: tuple
    sign: int


def chamber_side(system, root, chamber):
    """'inside' if the chamber lies in the half-apartment ``root``."""
    return "inside" if system.side(root.wall, chamber) == root.sign else "outside"
