"""Reproductions of the worked examples: the A~2 census, tree ends, products."""

from __future__ import annotations

import itertools
import random

from .affine import AffineChart
from .boundary import affine_census, default_confirm, default_horizon
from .building_points import (
    BuildingSequence,
    ProductPoint,
    TreeEnd,
    building_converges,
    building_sector,
    building_sector_limit,
)
from .buildings import ProductBuilding, TreeBuilding
from .coxeter import CoxeterSystem, named
from .errors import MalformedInput
from .residues import CoxeterComplex


def _census_phi(entry):
    out = {"root": list(entry["root"]), "sign": "+" if entry["sign"] > 0 else "-"}
    levels = entry["levels"]
    out["levels"] = levels if levels == "all" else dict(levels)
    return out


def census_document(chart, cx, bound=3):
    classes = affine_census(chart, cx, bound)
    regular = [c for c in classes if c.kind == "regular"]
    threshold = [c for c in classes if c.kind == "threshold"]
    return {
        "regular_classes": len(regular),
        "threshold_families": len(threshold),
        "finite_roots": [list(r) for r in chart.finite_roots()],
        "classes": [
            {
                "kind": c.kind,
                "direction": list(c.direction),
                "signs": list(c.signs),
                "parallel_root": None if c.parallel_root is None else list(c.parallel_root),
                "phi": [_census_phi(e) for e in c.phi],
            }
            for c in classes
        ],
    }


def ex_a2(bound=3):
    """Boundary census of the A~2 apartment."""
    W = CoxeterSystem(named("A~2"))
    cx = CoxeterComplex(W)
    doc = census_document(AffineChart(W), cx, bound)
    doc["example"] = "exA2"
    return doc


def default_ends(tree):
    """A handful of pairwise distinct ends: constant, alternating and prefixed rays."""
    q0, q1 = tree.valences
    ends = [TreeEnd(tree, (), (0,)), TreeEnd(tree, (), (1,)), TreeEnd(tree, (), (0, 1))]
    ends.append(TreeEnd(tree, (q0 - 1,), (0,)))
    ends.append(TreeEnd(tree, (0, 0), (1, 0)))
    ends.append(TreeEnd(tree, (1, 1, 0), (1,)))
    return ends


def end_sequences(end, horizon):
    """Two different residue sequences along the same end: edges and vertices of the ray."""
    T = end.tree
    edges = [end.representative(n) for n in range(horizon + 1)]
    vertices = [T.vertex_residue(end.ray_vertex(n + 2)) for n in range(horizon + 1)]
    return edges, vertices


def _limit_key(limit):
    return tuple(sorted((s.J, s.chambers, v.J, v.chambers) for s, v in limit.items()))


def tree_ends(valences=(3, 3), radius=6, horizon=None, confirm=None):
    """Sequences along distinct ends have distinct window limits; along one end they agree."""
    T = TreeBuilding(tuple(valences), radius)
    horizon = default_horizon(radius) if horizon is None else horizon
    confirm = default_confirm(radius) if confirm is None else confirm
    residues = T.residues()
    ends = default_ends(T)
    limits = []
    same_end = []
    for end in ends:
        a, b = end_sequences(end, horizon)
        la = building_converges(T, a, confirm, residues)
        lb = building_converges(T, b, confirm, residues)
        undecided = sorted(T.chamber_id(s.chambers[0]) for s, v in la.items() if v is None)
        exact = {s: end.xi_value(s) for s in residues}
        same_end.append(
            {
                "end": {"prefix": list(end.prefix), "period": list(end.period)},
                "sequences_agree": la == lb,
                "matches_exact": la == exact,
                "undecided": undecided,
            }
        )
        limits.append(la)
    distinct = []
    for (i, ei), (j, ej) in itertools.combinations(enumerate(ends), 2):
        witness = next((s for s in residues if limits[i][s] != limits[j][s]), None)
        distinct.append(
            {
                "ends": [i, j],
                "differ": witness is not None,
                "witness": None if witness is None else {"J": list(witness.J), "chambers": [T.chamber_id(c) for c in witness.chambers]},
            }
        )
    return {
        "example": "tree-ends",
        "valences": list(T.valences),
        "radius": radius,
        "horizon": horizon,
        "window_residues": len(residues),
        "ends": len(ends),
        "same_end": same_end,
        "distinct_ends": distinct,
        "ok": all(d["differ"] for d in distinct)
        and all(s["sequences_agree"] and s["matches_exact"] and not s["undecided"] for s in same_end),
    }


def _factor(name, radius):
    if name.startswith("tree"):
        q = int(name[4:] or 3)
        return TreeBuilding((q, q), radius)
    raise MalformedInput(f"unknown product factor {name!r}; use tree<q>")


def random_end(tree, rng):
    q0, q1 = tree.valences
    plen = rng.randrange(0, 3)
    prefix, v = [], ()
    for _ in range(plen):
        i = rng.randrange(len(tree.children(v)))
        prefix.append(i)
        v = v + (i,)
    period = [rng.randrange(min(q0, q1) - 1) for _ in range(rng.choice((1, 2)))]
    return TreeEnd(tree, tuple(prefix), tuple(period))


def product_law(factors=("tree3", "tree3"), radius=2, queries=100, seed=0, sector_queries=None):
    """Componentwise projections and sectors of tree x tree against the limit routes."""
    B = ProductBuilding(_factor(factors[0], radius), _factor(factors[1], radius))
    rng = random.Random(seed)
    residues = B.residues()
    horizon = default_horizon(radius)
    confirm = default_confirm(radius)
    sector_queries = queries if sector_queries is None else sector_queries
    xi_fail, sector_fail = [], []
    for q in range(queries):
        xi = ProductPoint(B, random_end(B.first, rng), random_end(B.second, rng))
        seq = BuildingSequence(B, [xi.representative(n) for n in range(horizon + 1)], confirm)
        sigma = rng.choice(residues)
        if xi.xi_value(sigma) != seq.xi_value(sigma):
            xi_fail.append(q)
        if q < sector_queries:
            x = rng.choice(residues)
            native = building_sector(B, x, xi)
            limit = building_sector_limit(B, x, seq.terms, confirm, residues)
            if native != limit:
                sector_fail.append(q)
    return {
        "example": "product",
        "factors": list(factors),
        "radius": radius,
        "window_residues": len(residues),
        "queries": queries,
        "sector_queries": sector_queries,
        "xi_value_failures": xi_fail,
        "sector_failures": sector_fail,
        "ok": not xi_fail and not sector_fail,
    }
