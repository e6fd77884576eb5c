"""Spherical residues of a Coxeter complex and the root-distance.

A spherical residue is a standard coset ``w W_J`` with ``W_J`` finite, stored
as its minimal-length representative together with ``J``.  Two orders are in
play and every function says which one it uses:

* coset containment ``v W_K <= w W_J`` (the machine order), and
* the simplicial face relation, which is its reverse: the vertex ``W_{s,t}``
  of an A2 complex is a face of every chamber.

Each residue R determines, for every wall, a *position* in {+1, -1, 0}: +1 if
all chambers of R lie on the identity side, -1 if all lie on the other side,
0 if the wall cuts through R (the reflection stabilises the coset).  All of
the metric machinery is computed from positions:

    |Phi(R1, R2)| = #{walls : p1 != 0 and p1 != p2}

which is finite and exact without any enumeration of walls far away.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .coxeter import CoxeterSystem, Root
from .errors import ConsistencyError, MalformedInput, ResourceLimit, WindowEscape

CONTAINS = "contains"
NOT_CONTAINS = "not_contains"
ON_WALL = "on_wall_both"


@dataclass(frozen=True, order=True)
class Residue:
    """Standard coset ``w W_J``; ``w`` is the minimal representative, ``J`` sorted."""

    w: tuple
    J: tuple

    @property
    def is_chamber(self):
        return not self.J

    def __repr__(self):
        word = "".join(map(str, self.w)) or "e"
        return f"Residue({word}, J={list(self.J)})"


class CoxeterComplex:
    """The thin building of a Coxeter system, with exact residue geometry."""

    def __init__(self, system):
        if not isinstance(system, CoxeterSystem):
            system = CoxeterSystem(system)
        self.W = system
        self.members = lru_cache(maxsize=None)(self._members)
        self.profile = lru_cache(maxsize=None)(self._profile)
        self._windows = {}

    @property
    def rank(self):
        return self.W.rank

    # -- construction ----------------------------------------------------------

    def residue(self, w, J=()):
        """The coset ``w W_J`` in canonical form."""
        J = tuple(sorted(set(J)))
        for s in J:
            if not 0 <= s < self.rank:
                raise MalformedInput(f"type index {s} out of range")
        if not self.W.is_spherical(J):
            raise MalformedInput(f"residue type {list(J)} is not spherical")
        w = self.W.reduce(tuple(w))
        # descend to the minimal representative
        changed = True
        while changed:
            changed = False
            for s in J:
                v = self.W.reduce(w + (s,))
                if len(v) < len(w):
                    w, changed = v, True
                    break
        return Residue(w, J)

    def chamber(self, w):
        return self.residue(w, ())

    def _members(self, R):
        return frozenset(self.W.reduce(R.w + u) for u in self.W.parabolic(R.J))

    def _profile(self, R):
        """(walls with position -1, walls with position 0)."""
        sets = [self.W.inversion_set(m) for m in self.members(R)]
        always = frozenset.intersection(*sets)
        ever = frozenset.union(*sets)
        return always, ever - always

    def position(self, R, wall):
        neg, mixed = self.profile(R)
        if wall in neg:
            return -1
        if wall in mixed:
            return 0
        return 1

    def support(self, R):
        """Walls at which R is not strictly on the identity side."""
        neg, mixed = self.profile(R)
        return neg | mixed

    def residue_side(self, root, R):
        p = self.position(R, root.wall)
        if p == 0:
            return ON_WALL
        return CONTAINS if p == root.sign else NOT_CONTAINS

    # -- metric ------------------------------------------------------------------

    def _check_horizon(self, horizon, *residues):
        if horizon is None:
            return
        for R in residues:
            far = max(len(m) for m in self.members(R))
            if far > horizon:
                raise ResourceLimit(f"{R} reaches length {far}, beyond horizon {horizon}")

    def phi(self, R1, R2, horizon=None):
        """Roots containing every chamber of R1 but not every chamber of R2.

        Empty exactly when R1 is a face of R2 (as simplices).
        """
        self._check_horizon(horizon, R1, R2)
        out = set()
        for wall in self.support(R1) | self.support(R2):
            p1, p2 = self.position(R1, wall), self.position(R2, wall)
            if p1 != 0 and p1 != p2:
                out.add(Root(wall, p1))
        return frozenset(out)

    def phi_size(self, R1, R2):
        n = 0
        for wall in self.support(R1) | self.support(R2):
            p1, p2 = self.position(R1, wall), self.position(R2, wall)
            if p1 != 0 and p1 != p2:
                n += 1
        return n

    def root_distance(self, R1, R2, horizon=None):
        self._check_horizon(horizon, R1, R2)
        return Fraction(self.phi_size(R1, R2) + self.phi_size(R2, R1), 2)

    # -- faces and stars -----------------------------------------------------------

    def star(self, R):
        """All cosets ``v W_K`` with K subset of J contained in R (R included)."""
        out = set()
        for k in range(len(R.J) + 1):
            for K in itertools.combinations(R.J, k):
                for m in self.members(R):
                    out.add(self.residue(m, K))
        return out

    def faces(self, R):
        """Simplicial faces of R, i.e. the spherical cosets containing it (R included)."""
        rest = [s for s in range(self.rank) if s not in R.J]
        out = set()
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                J = tuple(sorted(R.J + extra))
                if self.W.is_spherical(J):
                    out.add(self.residue(R.w, J))
        return out

    def is_face(self, sigma, tau):
        """True if sigma is a simplicial face of tau (as cosets: tau inside sigma)."""
        return set(tau.J) <= set(sigma.J) and self.residue(tau.w, sigma.J) == sigma

    def closure(self, residues):
        out = set()
        for R in residues:
            out |= self.faces(R)
        return out

    # -- convexity -------------------------------------------------------------------

    def in_hull(self, sigma, R1, R2):
        """sigma lies in every closed root containing R1 and R2."""
        s1, s2, ss = self.support(R1), self.support(R2), self.support(sigma)
        # a root on the far side of a wall contains both, sigma is strictly on the near side
        if (s1 & s2) - ss:
            return False
        # a root on the identity side contains both, sigma is strictly on the far side
        for wall in ss:
            if self.position(sigma, wall) == -1 and self.position(R1, wall) >= 0 and self.position(R2, wall) >= 0:
                return False
        return True

    def projection(self, R, T, horizon=None):
        """Gate of T in the star of R: the unique nearest element of star(R)."""
        self._check_horizon(horizon, R, T)
        best, best_d = [], None
        for sigma in self.star(R):
            d = self.root_distance(sigma, T)
            if best_d is None or d < best_d:
                best, best_d = [sigma], d
            elif d == best_d:
                best.append(sigma)
        if len(best) != 1:
            raise ConsistencyError(f"projection of {T} onto {R} is not unique: {sorted(best)}")
        return best[0]

    def projection_via_hull(self, R, T):
        """Smallest coset of star(R) lying in Conv(R, T)."""
        inside = [s for s in self.star(R) if self.in_hull(s, R, T)]
        smallest = min(len(s.J) for s in inside)
        cands = [s for s in inside if len(s.J) == smallest]
        if len(cands) != 1:
            raise ConsistencyError(f"Conv({R}, {T}) has {len(cands)} minimal cosets in the star")
        pi = cands[0]
        for s in inside:
            if not self.is_face(s, pi):
                raise ConsistencyError(f"{s} in Conv({R}, {T}) is not a face of {pi}")
        return pi

    def is_convex(self, residues):
        residues = set(residues)
        if self.closure(residues) != residues:
            return False
        return all(self.projection(a, b) in residues for a in residues for b in residues)

    # -- windows ---------------------------------------------------------------------

    def window(self, radius):
        if radius not in self._windows:
            self._windows[radius] = Window(self, radius)
        return self._windows[radius]

    def _window_for(self, horizon, *residues):
        if horizon is None:
            W = self.W
            full = tuple(range(self.rank))
            if W.is_spherical(full):
                horizon = len(W.longest(full))
            else:
                # room for every face of the given residues
                slack = max(len(W.longest(J)) for J in W.spherical_types())
                horizon = max(len(m) for R in residues for m in self.members(R)) + slack
        self._check_horizon(horizon, *residues)
        return self.window(horizon)

    def convex_hull(self, R1, R2, horizon=None):
        """Conv(R1, R2), computed on the window of radius ``horizon``.

        Raises WindowEscape if the hull reaches past the window.
        """
        win = self._window_for(horizon, R1, R2)
        i, j = win.index[R1], win.index[R2]
        mask = win.hull_mask(i, j)
        win.check_contained(mask, lambda sigma: self.in_hull(sigma, R1, R2))
        return win.residues_of(mask)

    def interval(self, R1, R2, horizon=None):
        win = self._window_for(horizon, R1, R2)
        i, j = win.index[R1], win.index[R2]
        win.check_contained(win.hull_mask(i, j), lambda sigma: self.in_hull(sigma, R1, R2))
        return win.residues_of(win.interval_mask(i, j))


class Window:
    """Chambers of length <= radius and the spherical residues they fill.

    A residue belongs to the window when all of its chambers do, so the
    residue set is closed under passing to subcosets.  ``walls`` are the walls
    crossed by chambers of the window; positions relative to any other wall
    are +1 for every window residue.
    """

    def __init__(self, cx, radius):
        self.cx = cx
        self.radius = radius
        W = cx.W
        self.chambers = W.ball(radius)
        chamber_set = set(self.chambers)
        found = set()
        for J in W.spherical_types():
            for c in self.chambers:
                R = cx.residue(c, J)
                if R not in found and cx.members(R) <= chamber_set:
                    found.add(R)
        self.residues = sorted(found, key=lambda R: (len(R.J), len(R.w), R.w, R.J))
        self.index = {R: k for k, R in enumerate(self.residues)}
        walls = set()
        for c in self.chambers:
            walls |= W.inversion_set(c)
        self.walls = sorted(walls)
        self.wall_index = {w: k for k, w in enumerate(self.walls)}
        P = np.ones((len(self.residues), len(self.walls)), dtype=np.int8)
        for k, R in enumerate(self.residues):
            neg, mixed = cx.profile(R)
            for w in neg:
                P[k, self.wall_index[w]] = -1
            for w in mixed:
                P[k, self.wall_index[w]] = 0
        self.P = P
        self.plus = P >= 0
        self.minus = P <= 0
        self._dist2 = None
        self._face = None

    def __len__(self):
        return len(self.residues)

    @property
    def dist2(self):
        """Twice the root-distance between window residues, as an int matrix."""
        if self._dist2 is None:
            P = self.P.astype(np.int16)
            n = len(P)
            out = np.zeros((n, n), dtype=np.int32)
            for a in range(n):
                # |Phi(a, b)| + |Phi(b, a)| for all b
                differ = P[a][None, :] != P
                ab = (differ & (P != 0)).sum(axis=1)
                ba = (differ & (P[a] != 0)[None, :]).sum(axis=1)
                out[a] = ab + ba
            self._dist2 = out
        return self._dist2

    def distance(self, R1, R2):
        return Fraction(int(self.dist2[self.index[R1], self.index[R2]]), 2)

    @property
    def face_matrix(self):
        """F[i, k] is True when residue k is a simplicial face of residue i."""
        if self._face is None:
            n = len(self.residues)
            F = np.zeros((n, n), dtype=bool)
            for i, R in enumerate(self.residues):
                for f in self.cx.faces(R):
                    k = self.index.get(f)
                    if k is not None:
                        F[i, k] = True
            self._face = F
        return self._face

    def hull_mask(self, i, j):
        both_plus = self.plus[i] & self.plus[j]
        both_minus = self.minus[i] & self.minus[j]
        bad = (~self.plus & both_plus[None, :]).any(axis=1) | (~self.minus & both_minus[None, :]).any(axis=1)
        return ~bad

    def interval_mask(self, i, j):
        D = self.dist2
        return D[i] + D[:, j] == D[i, j]

    def closure_mask(self, mask):
        return mask | self.face_matrix[mask].any(axis=0)

    def residues_of(self, mask):
        return {self.residues[k] for k in np.flatnonzero(mask)}

    def check_contained(self, mask, predicate):
        """Raise WindowEscape if a set given by ``predicate`` leaves the window.

        The set is assumed gallery-connected through chambers; we look for a
        chamber of the set on the boundary sphere with a neighbour outside.
        """
        W = self.cx.W
        for k in np.flatnonzero(mask):
            R = self.residues[k]
            for m in self.cx.members(R):
                if len(m) < self.radius:
                    continue
                for s in range(W.rank):
                    out = W.reduce(m + (s,))
                    if len(out) > self.radius:
                        for J in W.spherical_types():
                            sigma = self.cx.residue(out, J)
                            if predicate(sigma):
                                raise WindowEscape(f"{sigma} lies outside the window of radius {self.radius}")
