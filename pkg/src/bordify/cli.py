"""``bordify`` command line: every result is printed as deterministic JSON (or DOT).

Exit codes: 0 ok, 2 usage or malformed input, 3 undecided or resource limit,
4 window escape, 5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .affine import AffineChart
from .boundary import (
    SequencePoint,
    common_subsector,
    converges,
    horofunction,
    horofunction_sequence,
    sector,
)
from .building_points import (
    building_common_subsector,
    building_converges,
    building_sector,
)
from .coxeter import CoxeterSystem, named
from .cubes import (
    cube_filtering,
    cube_horofunction,
    cube_sector,
    validate_ultrafilter,
)
from .errors import BordifyError, MalformedInput, Undecided
from .repro import census_document, ex_a2, product_law, tree_ends


class UsageError(MalformedInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- context loading ---------------------------------------------------------------


def _system(args):
    if getattr(args, "coxeter", None):
        return io.coxeter_from_json(args.coxeter)
    if getattr(args, "type", None):
        return CoxeterSystem(named(args.type))
    raise UsageError("give --coxeter or --type")


def _apartment(args):
    """(complex, window radius) from --apartment, or from --coxeter/--type and --radius."""
    if getattr(args, "apartment", None):
        cx, radius = io.apartment_from_json(args.apartment)
    else:
        from .residues import CoxeterComplex

        cx, radius = CoxeterComplex(_system(args)), None
    if getattr(args, "radius", None) is not None:
        radius = args.radius
    if radius is None:
        if not cx.W.is_spherical(tuple(range(cx.rank))):
            raise UsageError("infinite Coxeter group: give a window radius (--radius or window_radius)")
        radius = len(cx.W.longest(tuple(range(cx.rank))))
    return cx, radius


def _has_building(args):
    return getattr(args, "building", None) is not None


def _building(args):
    return io.building_from_json(args.building)


def _point(args, cx=None, B=None):
    return io.point_from_json(args.point, cx=cx, B=B, horizon=args.horizon)


def _emit(doc, out):
    out.write(io.dumps(doc) + "\n")


# -- Coxeter commands ---------------------------------------------------------------------


def cmd_reduce(args):
    W = _system(args)
    w = W.reduce(tuple(io.load_json(args.word)))
    return {"word": list(w), "length": len(w)}


def cmd_ball(args):
    W = _system(args)
    elems = W.ball(args.radius)
    return {"radius": args.radius, "count": len(elems), "elements": [list(w) for w in elems]}


# -- residue commands ------------------------------------------------------------------------


def _pair(args, names=("r1", "r2")):
    if _has_building(args):
        B = _building(args)
        return B, [io.bresidue_from_json(getattr(args, n), B) for n in names]
    cx, radius = _apartment(args)
    return (cx, radius), [io.residue_from_json(getattr(args, n), cx) for n in names]


def _thin_residues(cx, residues):
    return io.residues_to_json(residues)


def cmd_dist(args):
    ctx, (R1, R2) = _pair(args)
    if _has_building(args):
        return {"distance": io.half_to_json(ctx.root_distance(R1, R2))}
    cx, _ = ctx
    return {
        "distance": io.half_to_json(cx.root_distance(R1, R2)),
        "phi12": io.phi_to_json(cx.phi(R1, R2), cx.W),
        "phi21": io.phi_to_json(cx.phi(R2, R1), cx.W),
    }


def cmd_proj(args):
    ctx, (R, T) = _pair(args, ("r", "t"))
    if _has_building(args):
        return {"projection": io.bresidue_to_json(ctx, ctx.project_residue(R, T))}
    cx, _ = ctx
    return {"projection": io.residue_to_json(cx.projection(R, T))}


def cmd_hull(args):
    ctx, (R1, R2) = _pair(args)
    if _has_building(args):
        return {"hull": io.bresidues_to_json(ctx, ctx.convex_hull(R1, R2))}
    cx, radius = ctx
    return {"hull": _thin_residues(cx, cx.convex_hull(R1, R2, horizon=radius))}


def cmd_interval(args):
    ctx, (R1, R2) = _pair(args)
    if _has_building(args):
        return {"interval": io.bresidues_to_json(ctx, ctx.interval(R1, R2))}
    cx, radius = ctx
    return {"interval": _thin_residues(cx, cx.interval(R1, R2, horizon=radius))}


def cmd_delta(args):
    B = _building(args)
    c, d = B.parse_chamber(io.load_value(args.c)), B.parse_chamber(io.load_value(args.d))
    return {"delta": list(B.delta(c, d)), "gallery_distance": B.gallery_distance(c, d)}


def cmd_retract(args):
    B = _building(args)
    center = B.parse_chamber(io.load_value(args.center))
    other = B.parse_chamber(io.load_value(args.through)) if args.through else center
    chart = B.find_apartment(center, other)
    R = io.bresidue_from_json(args.residue, B)
    image = B.retract_residue(chart, center, R)
    return {
        "image": io.residue_to_json(image),
        "chambers": [B.chamber_id(c) for c in sorted(chart.chamber(w) for w in B.cx.members(image))],
    }


# -- boundary commands -------------------------------------------------------------------------


def _sequence_terms(args, cx=None, B=None):
    if args.horizon is None:
        raise UsageError("sequence points need --horizon")
    doc = io.load_json(args.sequence)
    doc = dict(doc, variant="sequence")
    return io.point_from_json(doc, cx=cx, B=B, horizon=args.horizon)


def cmd_limit(args):
    if _has_building(args):
        B = _building(args)
        seq = _sequence_terms(args, B=B)
        lim = building_converges(B, seq.terms, seq.confirm)
        undecided = [io.bresidue_to_json(B, s) for s, v in sorted(lim.items(), key=lambda kv: (len(kv[0].J), kv[0].chambers)) if v is None]
        return {
            "decided": not undecided,
            "undecided": undecided,
            "projections": [
                {"residue": io.bresidue_to_json(B, s), "projection": io.bresidue_to_json(B, v)}
                for s, v in sorted(lim.items(), key=lambda kv: (len(kv[0].J), kv[0].chambers))
                if v is not None
            ],
        }
    cx, radius = _apartment(args)
    seq = _sequence_terms(args, cx=cx)
    win = cx.window(radius)
    lim = converges(cx, seq.terms, win, seq.confirm)
    rows = []
    for wall, sgn in zip(win.walls, lim.signs):
        rows.append({"reflection": list(cx.W.reflection_word(wall)), "class": sgn})
    rows.sort(key=lambda r: (len(r["reflection"]), r["reflection"]))
    return {
        "decided": lim.decided,
        "undecided": sorted((list(cx.W.reflection_word(w)) for w in lim.undecided), key=lambda r: (len(r), r)),
        "walls": rows,
    }


def _thin_sector(args):
    cx, radius = _apartment(args)
    win = cx.window(radius)
    pt = _point(args, cx=cx)
    x = io.residue_from_json(args.base, cx)
    return cx, win, pt, x, sector(cx, x, pt, win)


def cmd_sector(args):
    if _has_building(args):
        B = _building(args)
        pt = _point(args, B=B)
        x = io.bresidue_from_json(args.base, B)
        members = building_sector(B, x, pt)
        if args.format == "dot":
            return _building_dot(B, members)
        return {"base": io.bresidue_to_json(B, x), "members": io.bresidues_to_json(B, members)}
    cx, win, pt, x, Q = _thin_sector(args)
    if args.format == "dot":
        return io.residue_dot(cx, win.residues, Q.members)
    return {
        "base": io.residue_to_json(x),
        "members": io.residues_to_json(Q.members),
        "defining_roots": io.phi_to_json(Q.defining_roots, cx.W),
    }


def cmd_subsector(args):
    if _has_building(args):
        B = _building(args)
        pt = _point(args, B=B)
        x, y = io.bresidue_from_json(args.x, B), io.bresidue_from_json(args.y, B)
        return {"z": io.bresidue_to_json(B, building_common_subsector(B, x, y, pt))}
    cx, radius = _apartment(args)
    win = cx.window(radius)
    pt = _point(args, cx=cx)
    x, y = io.residue_from_json(args.x, cx), io.residue_from_json(args.y, cx)
    return {"z": io.residue_to_json(common_subsector(cx, x, y, pt, win))}


def cmd_horofn(args):
    if _has_building(args):
        B = _building(args)
        pt = _point(args, B=B)
        y, y0 = io.bresidue_from_json(args.y, B), io.bresidue_from_json(args.y0, B)
        return {"value": io.half_to_json(pt.horofunction(y, y0))}
    cx, radius = _apartment(args)
    pt = _point(args, cx=cx)
    y, y0 = io.residue_from_json(args.y, cx), io.residue_from_json(args.y0, cx)
    if isinstance(pt, SequencePoint):
        value = horofunction_sequence(cx, pt.terms, y, y0, pt.confirm)
    else:
        value = horofunction(cx, pt, y, y0)
    return {"value": io.half_to_json(value)}


def cmd_census(args):
    from .residues import CoxeterComplex

    if getattr(args, "apartment", None):
        cx, _ = io.apartment_from_json(args.apartment)
    else:
        cx = CoxeterComplex(_system(args))
    return census_document(AffineChart(cx.W), cx, args.bound)


# -- cube commands ---------------------------------------------------------------------------------


def _cube(args):
    return io.complex_from_json(args.complex)


def _vertex(G, value):
    return io.cube_vertex_from_json(io.load_json(value) if str(value).strip()[:1] in "[{" else value, G)


def cmd_cube_median(args):
    G = _cube(args)
    u, v, w = (_vertex(G, a) for a in (args.u, args.v, args.w))
    return {"median": io.cube_vertex_to_json(G.median(u, v, w))}


def cmd_cube_dist(args):
    G = _cube(args)
    a, b = _vertex(G, args.a), _vertex(G, args.b)
    return {"distance": G.l1_distance(a, b)}


def cmd_cube_validate(args):
    G = _cube(args)
    res = validate_ultrafilter(G, io.ultrafilter_from_json(args.ultrafilter, G))
    doc = {"valid": res.ok, "reason": res.reason}
    if res.witness:
        doc["witness"] = [[io.wall_to_json(w), "+" if s > 0 else "-"] for w, s in res.witness]
    return doc


def _sorted_vertices(G, vs):
    return [io.cube_vertex_to_json(v) for v in sorted(vs, key=lambda v: G.index.get(v, 0))]


def cmd_cube_sector(args):
    G = _cube(args)
    xi = io.ultrafilter_from_json(args.ultrafilter, G)
    return {"members": _sorted_vertices(G, cube_sector(G, _vertex(G, args.v), xi))}


def cmd_cube_filter(args):
    G = _cube(args)
    xi = io.ultrafilter_from_json(args.ultrafilter, G)
    return {"z": io.cube_vertex_to_json(cube_filtering(G, _vertex(G, args.u), _vertex(G, args.v), xi))}


def cmd_cube_horofn(args):
    G = _cube(args)
    xi = io.ultrafilter_from_json(args.ultrafilter, G)
    return {"value": cube_horofunction(G, xi, _vertex(G, args.y), _vertex(G, args.y0))}


# -- reproductions and export -------------------------------------------------------------------


def cmd_repro(args):
    if args.name == "exA2":
        return ex_a2()
    if args.name == "tree-ends":
        valences = tuple(int(x) for x in args.valences.split(","))
        return tree_ends(valences, args.radius if args.radius is not None else 6)
    if args.name == "product":
        factors = tuple(args.factors.split(","))
        return product_law(factors, args.radius if args.radius is not None else 2, args.queries, args.seed)
    raise UsageError(f"unknown reproduction {args.name!r}")


def _building_dot(B, highlight=()):
    chambers = B.chambers()
    ids = {c: io.dumps(B.chamber_id(c)).replace("\n", "").replace(" ", "").strip('"') for c in chambers}
    marked = {ids[c] for R in highlight for c in R.chambers if c in ids}
    edges = []
    for c in chambers:
        for s in range(B.rank):
            for d in B.neighbors(c, s):
                if d in ids and ids[c] < ids[d]:
                    edges.append((ids[c], ids[d], str(s)))
    return io.to_dot([(ids[c], ids[c]) for c in chambers], edges, marked)


def cmd_export_dot(args):
    if args.structure:
        doc = io.load_json(args.structure)
        nodes = [(str(n["id"]), str(n.get("label", n["id"]))) for n in doc.get("nodes", [])]
        edges = [(str(a), str(b), str(lab)) for a, b, lab in doc.get("edges", [])]
        return io.to_dot(nodes, edges, {str(h) for h in doc.get("highlight", [])})
    if _has_building(args):
        return _building_dot(_building(args))
    cx, radius = _apartment(args)
    return io.cayley_dot(cx.W, cx.W.ball(radius))


# -- parser ------------------------------------------------------------------------------------------


def _add_thin(p, radius=True):
    p.add_argument("--coxeter", help="Coxeter matrix JSON (inline or file)")
    p.add_argument("--type", help="named Coxeter type, e.g. A2, B2, A~2, D_inf")
    p.add_argument("--apartment", help="apartment JSON: coxeter or type, plus window_radius")
    if radius:
        p.add_argument("--radius", type=int, help="window radius")


def _add_building(p):
    p.add_argument("--building", help="building JSON: kind thin|tree|product|fano")


def _add_point(p):
    p.add_argument("--point", required=True, help="boundary point JSON")
    p.add_argument("--horizon", type=int, help="horizon for sequence points")


def build_parser():
    parser = _Parser(prog="bordify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("reduce", help="canonical ShortLex word")
    _add_thin(p, radius=False)
    p.add_argument("--word", required=True, help="JSON array of generators")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("ball", help="elements of length at most r")
    _add_thin(p, radius=False)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_ball)

    for name, func, names, what in (
        ("dist", cmd_dist, ("r1", "r2"), "root-distance and Phi sets"),
        ("proj", cmd_proj, ("r", "t"), "combinatorial projection of t onto the star of r"),
        ("hull", cmd_hull, ("r1", "r2"), "convex hull"),
        ("interval", cmd_interval, ("r1", "r2"), "metric interval"),
    ):
        p = sub.add_parser(name, help=what)
        _add_thin(p)
        _add_building(p)
        for n in names:
            p.add_argument(f"--{n}", required=True, help="residue JSON")
        p.set_defaults(func=func)

    p = sub.add_parser("delta", help="Weyl distance between chambers")
    _add_building(p)
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("retract", help="retraction onto an apartment centred at a chamber")
    _add_building(p)
    p.add_argument("--center", required=True, help="centre chamber id")
    p.add_argument("--through", help="second chamber fixing the apartment")
    p.add_argument("--residue", required=True, help="residue JSON")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("limit", help="window restriction of the limit of a sequence")
    _add_thin(p)
    _add_building(p)
    p.add_argument("--sequence", required=True, help="sequence JSON: terms or prefix/period")
    p.add_argument("--horizon", type=int, help="number of terms used")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("sector", help="combinatorial sector Q(x, xi)")
    _add_thin(p)
    _add_building(p)
    _add_point(p)
    p.add_argument("--base", required=True, help="base residue JSON")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_sector)

    p = sub.add_parser("subsector", help="common subsector of Q(x, xi) and Q(y, xi)")
    _add_thin(p)
    _add_building(p)
    _add_point(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_subsector)

    p = sub.add_parser("horofn", help="horofunction value h_xi(y) relative to y0")
    _add_thin(p)
    _add_building(p)
    _add_point(p)
    p.add_argument("--y", required=True)
    p.add_argument("--y0", required=True)
    p.set_defaults(func=cmd_horofn)

    p = sub.add_parser("census", help="boundary classes of an affine apartment")
    _add_thin(p)
    p.add_argument("--bound", type=int, default=3, help="direction entries in [-bound, bound]")
    p.set_defaults(func=cmd_census)

    cube = (
        ("cube-median", cmd_cube_median, ("u", "v", "w")),
        ("cube-dist", cmd_cube_dist, ("a", "b")),
        ("cube-validate", cmd_cube_validate, ("ultrafilter",)),
        ("cube-sector", cmd_cube_sector, ("v", "ultrafilter")),
        ("cube-filter", cmd_cube_filter, ("u", "v", "ultrafilter")),
        ("cube-horofn", cmd_cube_horofn, ("ultrafilter", "y", "y0")),
    )
    for name, func, names in cube:
        p = sub.add_parser(name)
        p.add_argument("--complex", required=True, help="complex JSON: grid, tree, cube or points")
        for n in names:
            p.add_argument(f"--{n}", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("repro", help="reproduce a worked example")
    p.add_argument("name", choices=("exA2", "tree-ends", "product"))
    p.add_argument("--valences", default="3,3")
    p.add_argument("--radius", type=int)
    p.add_argument("--factors", default="tree3,tree3")
    p.add_argument("--queries", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("export-dot", help="DOT rendering of a chamber graph or a given structure")
    _add_thin(p)
    _add_building(p)
    p.add_argument("--structure", help="graph JSON: nodes, edges, highlight")
    p.set_defaults(func=cmd_export_dot)
    return parser


def parse_request(argv):
    return build_parser().parse_args(argv)


def run(args):
    return args.func(args)


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = parse_request(sys.argv[1:] if argv is None else argv)
        try:
            doc = run(args)
        except (KeyError, IndexError, TypeError, AttributeError) as exc:
            # a JSON document with a missing or ill-typed field
            raise MalformedInput(f"malformed document: {type(exc).__name__}: {exc}") from exc
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except BordifyError as exc:
        body = {"error": exc.code, "type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        if isinstance(exc, Undecided):
            body["horizon"] = exc.horizon
        err.write(io.dumps(body) + "\n")
        return exc.exit_code
    if isinstance(doc, str):
        out.write(doc)
    else:
        _emit(doc, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
