"""JSON and DOT encodings.

Half-integers are written as ``{"num": n, "den": 1 or 2}`` so that no value
is ever a float.  Infinite Coxeter matrix entries are written as 0.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .affine import AffineChart
from .boundary import AffinePoint, InteriorPoint, SequencePoint
from .building_points import BuildingInterior, BuildingSequence, ProductPoint, TreeEnd
from .buildings import FanoBuilding, ProductBuilding, ThinBuilding, TreeBuilding
from .coxeter import CoxeterMatrix, CoxeterSystem, Root, named
from .cubes import Directional, Explicit, Principal, make_complex
from .errors import MalformedInput
from .residues import CoxeterComplex


def dumps(doc):
    """Deterministic JSON text."""
    return json.dumps(doc, sort_keys=True, indent=2)


def load_json(value):
    """Inline JSON, or the path of a JSON file."""
    if isinstance(value, (dict, list)):
        return value
    text = str(value).strip()
    if text[:1] in '{["-0123456789':
        source = text
    else:
        path = Path(text)
        if not path.exists():
            raise MalformedInput(f"{text!r} is neither inline JSON nor an existing file")
        source = path.read_text()
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"malformed JSON in {text[:40]!r}: {exc}") from exc


def load_value(value):
    """Like :func:`load_json`, but a bare word that is not a file is taken as a string."""
    text = str(value).strip()
    if text[:1] in '{["-0123456789' or Path(text).exists():
        return load_json(text)
    return text


# -- numbers -----------------------------------------------------------------


def half_to_json(x):
    x = Fraction(x)
    if x.denominator not in (1, 2):
        raise MalformedInput(f"{x} is not a half-integer")
    return {"num": x.numerator, "den": x.denominator}


def half_from_json(doc):
    try:
        x = Fraction(doc["num"], doc["den"])
    except (TypeError, KeyError, ZeroDivisionError) as exc:
        raise MalformedInput("half-integers are {'num': n, 'den': 1|2}") from exc
    if doc["den"] not in (1, 2):
        raise MalformedInput("half-integer denominators are 1 or 2")
    return x


def rational_from_json(value):
    if isinstance(value, dict):
        return Fraction(value["num"], value["den"])
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad rational {value!r}") from exc
    raise MalformedInput(f"bad rational {value!r}")


def rational_to_json(x):
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


# -- Coxeter data ----------------------------------------------------------------


def coxeter_from_json(doc):
    doc = load_json(doc)
    if isinstance(doc, dict) and "type" in doc and "matrix" not in doc:
        return CoxeterSystem(named(doc["type"]))
    return CoxeterSystem(CoxeterMatrix.from_json(doc))


def coxeter_to_json(W):
    return W.matrix.to_json()


def word_from_json(doc, W):
    if not isinstance(doc, list) or not all(isinstance(s, int) for s in doc):
        raise MalformedInput("words are arrays of generator indices")
    return W.reduce(tuple(doc))


def residue_to_json(R):
    return {"w": list(R.w), "J": list(R.J)}


def residue_from_json(doc, cx):
    doc = load_json(doc)
    if isinstance(doc, list):
        return cx.chamber(tuple(doc))
    try:
        return cx.residue(tuple(doc["w"]), tuple(doc.get("J", ())))
    except (TypeError, KeyError) as exc:
        raise MalformedInput("residues are {'w': [...], 'J': [...]}") from exc


def root_to_json(root, W):
    return {"reflection": list(W.reflection_word(root.wall)), "sign": "+" if root.sign > 0 else "-"}


def root_from_json(doc, W):
    try:
        wall = W.wall_from_reflection(tuple(doc["reflection"]))
        sign = {"+": 1, "-": -1}[doc["sign"]]
    except (TypeError, KeyError) as exc:
        raise MalformedInput("roots are {'reflection': [...], 'sign': '+'|'-'}") from exc
    return Root(wall, sign)


def phi_to_json(roots, W):
    return sorted((root_to_json(r, W) for r in roots), key=lambda d: (len(d["reflection"]), d["reflection"], d["sign"]))


def residues_to_json(residues):
    return [residue_to_json(R) for R in sorted(residues, key=lambda R: (len(R.J), len(R.w), R.w, R.J))]


# -- complexes and buildings -------------------------------------------------------


def apartment_from_json(doc):
    """A thin complex with a window: {"coxeter": {...} | "type": name, "window_radius": r}."""
    doc = load_json(doc)
    if "coxeter" in doc:
        W = coxeter_from_json(doc["coxeter"])
    elif "type" in doc:
        W = CoxeterSystem(named(doc["type"]))
    elif "matrix" in doc:
        W = coxeter_from_json(doc)
    else:
        raise MalformedInput("apartment documents need 'coxeter' or 'type'")
    cx = CoxeterComplex(W)
    radius = doc.get("window_radius")
    return cx, radius


def building_from_json(doc):
    doc = load_json(doc)
    kind = doc.get("kind")
    radius = doc.get("window_radius")
    if kind == "thin":
        W = coxeter_from_json(doc["coxeter"] if "coxeter" in doc else {"type": doc["type"]})
        return ThinBuilding(W, radius)
    if kind == "tree":
        return TreeBuilding(tuple(doc.get("valences", (3, 3))), radius if radius is not None else 4)
    if kind == "product":
        f1, f2 = doc["factors"]
        return ProductBuilding(building_from_json(f1), building_from_json(f2))
    if kind == "fano":
        return FanoBuilding()
    raise MalformedInput(f"unknown building kind {kind!r}")


def building_to_json(B):
    if isinstance(B, ThinBuilding):
        return {"kind": "thin", "coxeter": coxeter_to_json(B.W), "window_radius": B.radius}
    if isinstance(B, TreeBuilding):
        return {"kind": "tree", "valences": list(B.valences), "window_radius": B.radius}
    if isinstance(B, ProductBuilding):
        return {"kind": "product", "factors": [building_to_json(B.first), building_to_json(B.second)]}
    if isinstance(B, FanoBuilding):
        return {"kind": "fano"}
    raise MalformedInput(f"cannot serialise {B!r}")


def bresidue_to_json(B, R):
    return {"J": list(R.J), "chambers": [B.chamber_id(c) for c in R.chambers]}


def bresidue_from_json(doc, B):
    doc = load_value(doc) if isinstance(doc, str) else doc
    if isinstance(doc, dict) and "chamber" in doc:
        return B.residue(B.parse_chamber(doc["chamber"]), tuple(doc.get("J", ())))
    if isinstance(doc, dict) and "chambers" in doc:
        R = B.residue(B.parse_chamber(doc["chambers"][0]), tuple(doc.get("J", ())))
        if sorted(B.chamber_id(c) for c in R.chambers) != sorted(doc["chambers"], key=str) and [
            B.chamber_id(c) for c in R.chambers
        ] != doc["chambers"]:
            raise MalformedInput("listed chambers do not form a residue of the given type")
        return R
    return B.chamber_residue(B.parse_chamber(doc))


def bresidues_to_json(B, residues):
    return [bresidue_to_json(B, R) for R in sorted(residues, key=lambda R: (len(R.J), R.chambers))]


# -- boundary points ------------------------------------------------------------------


def point_from_json(doc, cx=None, B=None, horizon=None):
    """Boundary point on a thin complex ``cx`` or a building ``B``."""
    doc = load_json(doc)
    variant = doc.get("variant")
    if variant == "interior":
        if B is not None:
            return BuildingInterior(B, bresidue_from_json(doc["residue"], B))
        return InteriorPoint(cx, residue_from_json(doc["residue"], cx))
    if variant == "affine":
        if cx is None:
            raise MalformedInput("affine points need an apartment")
        chart = AffineChart(cx.W)
        base = doc.get("base")
        return AffinePoint(
            chart,
            cx,
            [rational_from_json(c) for c in doc["direction"]],
            None if base is None else [rational_from_json(c) for c in base],
        )
    if variant == "tree_end":
        if not isinstance(B, TreeBuilding):
            raise MalformedInput("tree ends need a tree building")
        return TreeEnd(B, tuple(doc.get("prefix", ())), tuple(doc["period"]))
    if variant == "product":
        if not isinstance(B, ProductBuilding):
            raise MalformedInput("product points need a product building")
        a, b = doc["factors"]
        return ProductPoint(B, point_from_json(a, B=B.first, horizon=horizon), point_from_json(b, B=B.second, horizon=horizon))
    if variant == "sequence":
        if horizon is None:
            raise MalformedInput("sequence points need --horizon")
        if "terms" in doc:
            if B is not None:
                terms = [bresidue_from_json(t, B) for t in doc["terms"]]
            else:
                terms = [residue_from_json(t, cx) for t in doc["terms"]]
            if len(terms) < horizon + 1:
                raise MalformedInput(f"{len(terms)} terms given, horizon {horizon} needs {horizon + 1}")
            terms = terms[: horizon + 1]
        elif "period" in doc:
            prefix, period = tuple(doc.get("prefix", ())), tuple(doc["period"])
            if B is not None:
                raise MalformedInput("periodic word sequences live on thin complexes")
            terms = [cx.chamber(prefix + period * n) for n in range(horizon + 1)]
        else:
            raise MalformedInput("sequence points need 'terms' or 'period'")
        confirm = doc.get("confirm")
        if B is not None:
            return BuildingSequence(B, terms, confirm)
        return SequencePoint(cx, terms, horizon, confirm if confirm is not None else max(1, horizon // 4))
    raise MalformedInput(f"unknown boundary point variant {variant!r}")


def point_to_json(pt):
    if isinstance(pt, InteriorPoint):
        return {"variant": "interior", "residue": residue_to_json(pt.residue)}
    if isinstance(pt, AffinePoint):
        return {
            "variant": "affine",
            "direction": [rational_to_json(c) for c in pt.direction],
            "base": [rational_to_json(c) for c in pt.base],
        }
    if isinstance(pt, TreeEnd):
        return {"variant": "tree_end", "prefix": list(pt.prefix), "period": list(pt.period)}
    if isinstance(pt, ProductPoint):
        return {"variant": "product", "factors": [point_to_json(pt.first), point_to_json(pt.second)]}
    if isinstance(pt, BuildingInterior):
        return {"variant": "interior", "residue": bresidue_to_json(pt.B, pt.residue)}
    if isinstance(pt, SequencePoint):
        return {"variant": "sequence", "terms": [residue_to_json(R) for R in pt.terms]}
    if isinstance(pt, BuildingSequence):
        return {"variant": "sequence", "terms": [bresidue_to_json(pt.B, R) for R in pt.terms]}
    raise MalformedInput(f"cannot serialise {pt!r}")


# -- cube complexes ---------------------------------------------------------------------


def cube_vertex_from_json(doc, G):
    doc = load_json(doc) if isinstance(doc, str) else doc
    v = tuple(doc) if isinstance(doc, list) else doc
    if G.kind == "grid":
        if not isinstance(v, tuple) or len(v) != G.dim:
            raise MalformedInput(f"grid vertices have {G.dim} coordinates")
        return v
    if v not in G.index:
        raise MalformedInput(f"{doc!r} is not a vertex")
    return v


def cube_vertex_to_json(v):
    return list(v) if isinstance(v, tuple) else v


def wall_to_json(w):
    return list(w) if isinstance(w, tuple) else w


def wall_from_json(doc):
    return tuple(doc) if isinstance(doc, list) else doc


def ultrafilter_from_json(doc, G):
    doc = load_json(doc)
    variant = doc.get("variant")
    if variant == "principal":
        return Principal(cube_vertex_from_json(doc["vertex"], G))
    if variant == "directional":
        return Directional(tuple(doc["axes"]))
    if variant == "explicit":
        return Explicit(tuple((wall_from_json(w), {"+": 1, "-": -1}[s]) for w, s in doc["choices"]))
    raise MalformedInput(f"unknown ultrafilter variant {variant!r}")


def ultrafilter_to_json(u):
    if isinstance(u, Principal):
        return {"variant": "principal", "vertex": cube_vertex_to_json(u.vertex)}
    if isinstance(u, Directional):
        return {"variant": "directional", "axes": list(u.axes)}
    return {"variant": "explicit", "choices": [[wall_to_json(w), "+" if s > 0 else "-"] for w, s in u.choices]}


def complex_from_json(doc):
    return make_complex(load_json(doc))


# -- DOT ------------------------------------------------------------------------------


def _dot_escape(text):
    return str(text).replace("\\", "\\\\").replace('"', '\\"')


def to_dot(nodes, edges, highlight=(), name="G"):
    """DOT text for a labelled graph; highlighted nodes are filled."""
    highlight = set(highlight)
    lines = [f"graph {name} {{"]
    for node_id, label in nodes:
        style = ' style=filled fillcolor="lightblue"' if node_id in highlight else ""
        lines.append(f'  "{_dot_escape(node_id)}" [label="{_dot_escape(label)}"{style}];')
    for a, b, label in edges:
        lines.append(f'  "{_dot_escape(a)}" -- "{_dot_escape(b)}" [label="{_dot_escape(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def word_label(w):
    return "".join(map(str, w)) or "e"


def cayley_dot(W, chambers, highlight=()):
    """Chamber graph of a thin complex restricted to ``chambers``."""
    chambers = sorted(set(chambers), key=lambda w: (len(w), w))
    present = set(chambers)
    nodes = [(word_label(w), word_label(w)) for w in chambers]
    edges = []
    for w in chambers:
        for s in range(W.rank):
            v = W.reduce(w + (s,))
            if v in present and (len(v), v) > (len(w), w):
                edges.append((word_label(w), word_label(v), str(s)))
    return to_dot(nodes, edges, {word_label(w) for w in highlight})


def residue_dot(cx, residues, highlight=()):
    """Chamber graph of the chambers of ``residues``; chambers of highlighted residues are filled."""
    chambers = set()
    for R in residues:
        chambers |= cx.members(R)
    marked = set()
    for R in highlight:
        marked |= cx.members(R)
    return cayley_dot(cx.W, chambers, marked)
