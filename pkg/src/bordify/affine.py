"""Exact alcove geometry for affine Coxeter groups of type A~n and products.

Each irreducible component must be A~n (a cycle of m = 3 edges, n >= 2) or
A~1 (two nodes with m = inf).  The smallest node of a component is its
affine node.  Points of the Euclidean space are given in *pairing
coordinates* ``x_j = <alpha_j, x>`` over the finite nodes j, as tuples of
Fractions.

A positive root vector ``c`` (coefficients on the simple roots of one
component, affine node i0) is the affine function

    f_c(x) = sum_{j != i0} (c_j - c_i0) x_j + c_i0

whose positive side contains the fundamental alcove {x_j > 0, sum x_j < 1}.
This matches the identity-positive wall convention of :mod:`bordify.coxeter`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .coxeter import INF, CoxeterSystem, _components
from .errors import ConsistencyError, MalformedInput


def _sign(x):
    return (x > 0) - (x < 0)


def _path_order(M, nodes):
    """Order the nodes of a Dynkin path from one end to the other."""
    if len(nodes) <= 1:
        return list(nodes)
    adj = {i: [j for j in nodes if j != i and M[i, j] != 2] for i in nodes}
    start = min(i for i in nodes if len(adj[i]) == 1)
    order, prev = [start], None
    while len(order) < len(nodes):
        nxt = [j for j in adj[order[-1]] if j != prev][0]
        prev = order[-1]
        order.append(nxt)
    return order


class AffineChart:
    """Coordinates for an affine Coxeter system whose components are A~n."""

    def __init__(self, system):
        if not isinstance(system, CoxeterSystem):
            system = CoxeterSystem(system)
        if not system.crystallographic:
            raise MalformedInput("affine charts need a crystallographic Coxeter matrix")
        self.W = system
        M = system.matrix
        self.components = []
        coords = []
        for comp in _components(M, range(system.rank)):
            if len(comp) == 2 and M[comp[0], comp[1]] == INF:
                pass
            elif len(comp) >= 3 and all(
                sum(1 for j in comp if j != i and M[i, j] == 3) == 2 for i in comp
            ) and all(M[i, j] in (2, 3) for i in comp for j in comp if i != j):
                if sum(1 for i, j in itertools.combinations(comp, 2) if M[i, j] == 3) != len(comp):
                    raise MalformedInput("component is not a single cycle")
            else:
                raise MalformedInput(f"component {comp} is not of type A~n")
            i0, finite = comp[0], _path_order(M, comp[1:])
            self.components.append((i0, tuple(finite)))
            coords.extend(finite)
        self.coords = tuple(coords)  # finite nodes in coordinate order
        self.pos = {j: k for k, j in enumerate(self.coords)}
        self.dim = len(coords)
        self._comp_of = {}
        for i0, finite in self.components:
            for j in (i0,) + finite:
                self._comp_of[j] = (i0, finite)

    # -- roots as affine functions ---------------------------------------------

    def component_of_root(self, vec):
        support = [j for j, c in enumerate(vec) if c]
        comp = self._comp_of[support[0]]
        nodes = set((comp[0],) + comp[1])
        if not set(support) <= nodes:
            raise ConsistencyError(f"root {vec} is supported on two components")
        return comp

    def linear_part(self, vec):
        """(coefficients on the coordinates, constant term) of f_vec."""
        i0, finite = self.component_of_root(vec)
        lin = [0] * self.dim
        for j in finite:
            lin[self.pos[j]] = vec[j] - vec[i0]
        return tuple(lin), vec[i0]

    def evaluate(self, vec, x):
        lin, const = self.linear_part(vec)
        return sum(a * b for a, b in zip(lin, x)) + const

    # -- action on points ------------------------------------------------------------

    def reflect_point(self, s, x):
        a = self.W.cartan
        x = list(x)
        i0, finite = self._comp_of[s]
        if s != i0:
            xs = x[self.pos[s]]
            if xs:
                for k in finite:
                    x[self.pos[k]] -= a[s][k] * xs
            return tuple(x)
        theta = sum(x[self.pos[j]] for j in finite)
        shift = theta - 1
        if shift:
            for k in finite:
                x[self.pos[k]] -= shift * sum(a[j][k] for j in finite)
        return tuple(x)

    def act_point(self, w, x):
        for s in reversed(w):
            x = self.reflect_point(s, x)
        return x

    def barycenter(self):
        """A point of the fundamental alcove, in its interior."""
        out = []
        for i0, finite in self.components:
            out.extend([Fraction(1, len(finite) + 1)] * len(finite))
        return tuple(out)

    def vertex_point(self, s):
        """The vertex of the fundamental alcove opposite the panel of type s."""
        x = [Fraction(0)] * self.dim
        i0, finite = self._comp_of[s]
        if s != i0:
            x[self.pos[s]] = Fraction(1)
        return tuple(x)

    # -- locating points ---------------------------------------------------------------

    def _root_of(self, w, s):
        e = [0] * self.W.rank
        e[s] = 1
        return self.W.act(w, tuple(e))

    def chamber_of(self, x, max_steps=100_000):
        """Canonical word of an alcove whose closure contains x (walk across walls)."""
        x = tuple(Fraction(c) for c in x)
        w = ()
        for _ in range(max_steps):
            for s in range(self.W.rank):
                if self.evaluate(self._root_of(w, s), x) < 0:
                    w = self.W.reduce(w + (s,))
                    break
            else:
                return w
        raise ConsistencyError("alcove walk did not terminate")

    def residue_of(self, cx, x):
        """The spherical residue whose open cell contains x."""
        w = self.chamber_of(x)
        J = tuple(s for s in range(self.W.rank) if self.evaluate(self._root_of(w, s), x) == 0)
        return cx.residue(w, J)

    def finite_roots(self):
        """Linear parts of the positive finite roots, as coordinate vectors."""
        out = set()
        for i0, finite in self.components:
            for a, b in itertools.combinations_with_replacement(range(len(finite)), 2):
                # roots of A_n: alpha_a + ... + alpha_b
                vec = [0] * self.dim
                for k in range(a, b + 1):
                    vec[self.pos[finite[k]]] = 1
                out.add(tuple(vec))
        return sorted(out)
