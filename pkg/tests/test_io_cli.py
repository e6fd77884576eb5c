import io as stdio
import json
import shutil
import subprocess
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordify import cli, io
from bordify.affine import AffineChart
from bordify.boundary import AffinePoint, InteriorPoint, SequencePoint
from bordify.building_points import BuildingInterior, ProductPoint, TreeEnd
from bordify.buildings import make_fano, make_product, make_thin, make_tree
from bordify.coxeter import CoxeterSystem, named
from bordify.cubes import Directional, Explicit, GridGraph, Principal, make_complex
from bordify.errors import ConsistencyError, MalformedInput
from bordify.residues import CoxeterComplex


def call(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def no_floats(doc):
    if isinstance(doc, float):
        return False
    if isinstance(doc, dict):
        return all(no_floats(v) for v in doc.values())
    if isinstance(doc, list):
        return all(no_floats(v) for v in doc)
    return True


AFFINE = '{"variant": "affine", "direction": [1]}'
GRID2 = '{"kind": "grid", "dim": 2}'
CORNER = '{"variant": "directional", "axes": ["+inf", "+inf"]}'


# -- round trips ------------------------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.sampled_from([1, 2]))
def test_half_integer_round_trip(n, d):
    x = Fraction(n, d)
    doc = io.half_to_json(x)
    assert io.half_from_json(doc) == x
    assert doc["den"] in (1, 2)


def test_non_half_integers_are_rejected():
    with pytest.raises(MalformedInput):
        io.half_to_json(Fraction(1, 3))
    with pytest.raises(MalformedInput):
        io.half_from_json({"num": 1, "den": 4})


@pytest.mark.parametrize("x", [Fraction(0), Fraction(-7, 3), Fraction(5, 11), Fraction(4)])
def test_rational_round_trip(x):
    assert io.rational_from_json(io.rational_to_json(x)) == x


@pytest.mark.parametrize("name", ["A2", "B3", "A~2", "D_inf", "H3"])
def test_coxeter_round_trip(name):
    W = CoxeterSystem(named(name))
    assert io.coxeter_from_json(io.coxeter_to_json(W)).matrix == W.matrix


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=8), st.sampled_from([(), (0,), (1,), (2,), (0, 1), (1, 2), (0, 2)]))
def test_residue_round_trip(word, J):
    cx = CoxeterComplex(CoxeterSystem(named("A~2")))
    R = cx.residue(tuple(word), J)
    assert io.residue_from_json(json.loads(io.dumps(io.residue_to_json(R))), cx) == R


def test_root_round_trip():
    W = CoxeterSystem(named("A~2"))
    cx = CoxeterComplex(W)
    for root in cx.phi(cx.chamber(()), cx.chamber((0, 1, 2, 0))):
        assert io.root_from_json(io.root_to_json(root, W), W) == root


@pytest.mark.parametrize(
    "B", [make_fano(), make_tree((3, 4), 3), make_thin(CoxeterSystem(named("B2"))), make_product(make_tree((3, 3), 2), make_fano())]
)
def test_building_and_residue_round_trip(B):
    again = io.building_from_json(json.loads(io.dumps(io.building_to_json(B))))
    assert io.building_to_json(again) == io.building_to_json(B)
    for R in B.residues()[::7]:
        assert io.bresidue_from_json(json.loads(io.dumps(io.bresidue_to_json(B, R))), B) == R


def test_point_round_trips_on_thin_complexes():
    cx = CoxeterComplex(CoxeterSystem(named("A~2")))
    chart = AffineChart(cx.W)
    pts = [
        InteriorPoint(cx, cx.residue((0, 1), (2,))),
        AffinePoint(chart, cx, (1, -2), (Fraction(1, 5), Fraction(2, 7))),
    ]
    for pt in pts:
        again = io.point_from_json(io.dumps(io.point_to_json(pt)), cx=cx)
        assert io.point_to_json(again) == io.point_to_json(pt)
    seq = SequencePoint(cx, [cx.chamber((0, 1, 2)[: n % 3]) for n in range(9)], horizon=8, confirm=2)
    again = io.point_from_json(io.dumps(io.point_to_json(seq)), cx=cx, horizon=8)
    assert again.terms == seq.terms


def test_point_round_trips_on_buildings():
    T = make_tree((3, 3), 3)
    P = make_product(T, make_tree((3, 3), 3))
    end = TreeEnd(T, (1,), (0, 1))
    assert io.point_from_json(io.point_to_json(end), B=T) == end
    pp = ProductPoint(P, end, TreeEnd(P.second, (), (1,)))
    again = io.point_from_json(io.point_to_json(pp), B=P)
    assert (again.first, again.second) == (pp.first, pp.second)
    F = make_fano()
    inner = BuildingInterior(F, F.residues()[9])
    assert io.point_from_json(io.point_to_json(inner), B=F).residue == inner.residue


def test_sequence_point_needs_a_horizon():
    cx = CoxeterComplex(CoxeterSystem(named("D_inf")))
    with pytest.raises(MalformedInput, match="horizon"):
        io.point_from_json({"variant": "sequence", "period": [0, 1]}, cx=cx)


def test_ultrafilter_round_trip():
    G = GridGraph(2, -3, 3)
    for u in [Principal((1, -2)), Directional(("+inf", 2)), Explicit((((0, 1), 1), ((1, -2), -1)))]:
        assert io.ultrafilter_from_json(io.dumps(io.ultrafilter_to_json(u)), G) == u


def test_complex_round_trip_through_json():
    G = io.complex_from_json('{"kind": "tree", "edges": [[0, 1], [1, 2], [1, 3]]}')
    assert sorted(G.vertices) == [0, 1, 2, 3]
    assert len(make_complex({"kind": "cube", "n": 2})) == 4


def test_json_from_a_file(tmp_path):
    path = tmp_path / "a2.json"
    path.write_text(json.dumps({"type": "A2"}))
    assert ok("reduce", "--coxeter", str(path), "--word", "[1, 0, 1]")["word"] == [0, 1, 0]


# -- command outputs ------------------------------------------------------------------------------------


def test_reduce_and_ball():
    assert ok("reduce", "--type", "A2", "--word", "[0, 1, 0, 1]") == {"length": 2, "word": [1, 0]}
    assert len(ok("ball", "--type", "A~2", "--radius", "2")["elements"]) == 10


def test_dist_is_a_half_integer():
    doc = ok("dist", "--type", "A2", "--r1", "[]", "--r2", '{"w": [0], "J": [1]}')
    assert doc["distance"] == {"num": 3, "den": 2}
    assert len(doc["phi12"]) + len(doc["phi21"]) == 3


def test_dist_on_fano_and_tree():
    assert ok("dist", "--building", '{"kind": "fano"}', "--r1", "p0-l0", "--r2", "p3-l3")["distance"] == {"num": 2, "den": 1}
    tree = '{"kind": "tree", "valences": [3, 3], "window_radius": 3}'
    doc = ok("dist", "--building", tree, "--r1", "v-v0", "--r2", '{"chamber": "v0-v0.1", "J": [1]}')
    T = io.building_from_json(tree)
    R1, R2 = io.bresidue_from_json("v-v0", T), io.bresidue_from_json({"chamber": "v0-v0.1", "J": [1]}, T)
    assert io.half_from_json(doc["distance"]) == T.root_distance(R1, R2)


def test_proj_hull_interval():
    P = ok("proj", "--type", "A2", "--r", '{"w": [], "J": [0]}', "--t", "[0, 1]")
    assert P["projection"] == {"J": [], "w": [0]}
    H = ok("hull", "--type", "A2", "--r1", "[]", "--r2", "[0, 1]")
    I = ok("interval", "--type", "A2", "--r1", "[]", "--r2", "[0, 1]")
    assert len(H["hull"]) >= len(I["interval"]) > 0


def test_sector_and_horofunction_on_the_line():
    doc = ok("sector", "--type", "D_inf", "--radius", "3", "--point", AFFINE, "--base", "[]")
    chambers = sorted(tuple(m["w"]) for m in doc["members"] if not m["J"])
    assert chambers == [(), (0,), (0, 1), (0, 1, 0)]
    assert ok("horofn", "--type", "D_inf", "--radius", "4", "--point", AFFINE, "--y", "[0, 1]", "--y0", "[]")["value"] == {
        "num": -2,
        "den": 1,
    }


def test_limit_of_a_periodic_sequence():
    doc = ok("limit", "--type", "D_inf", "--radius", "2", "--horizon", "12", "--sequence", '{"period": [0, 1]}')
    assert doc["decided"] and not doc["undecided"]


def test_subsector_on_the_line():
    doc = ok("subsector", "--type", "D_inf", "--radius", "4", "--point", AFFINE, "--x", "[1]", "--y", "[]")
    assert doc["z"] == {"J": [], "w": []}


def test_census_counts():
    doc = ok("census", "--type", "A~2")
    assert (doc["regular_classes"], doc["threshold_families"]) == (6, 6)


def test_cube_commands():
    assert ok("cube-median", "--complex", GRID2, "--u", "[0, 0]", "--v", "[2, 0]", "--w", "[1, 3]")["median"] == [1, 0]
    assert ok("cube-dist", "--complex", GRID2, "--a", "[0, 0]", "--b", "[2, 3]")["distance"] == 5
    assert ok("cube-filter", "--complex", GRID2, "--ultrafilter", CORNER, "--u", "[0, 1]", "--v", "[1, 0]")["z"] == [1, 1]
    assert ok("cube-horofn", "--complex", GRID2, "--ultrafilter", CORNER, "--y", "[1, 2]", "--y0", "[0, 0]")["value"] == -3
    bad = '{"variant": "explicit", "choices": [[[0, 4], "+"], [[0, 2], "-"]]}'
    doc = ok("cube-validate", "--complex", '{"kind": "grid", "dim": 1}', "--ultrafilter", bad)
    assert not doc["valid"] and doc["witness"]
    sector = ok("cube-sector", "--complex", GRID2, "--ultrafilter", CORNER, "--v", "[3, 4]")
    assert sorted(map(tuple, sector["members"])) == [(3, 4), (3, 5), (4, 4), (4, 5), (5, 4), (5, 5)]


def test_repro_commands():
    assert ok("repro", "exA2")["regular_classes"] == 6
    assert ok("repro", "tree-ends", "--valences", "3,3", "--radius", "3")["ok"]
    assert ok("repro", "product", "--queries", "5")["ok"]


# -- DOT ----------------------------------------------------------------------------------------------------


def dot_counts(text):
    lines = [l.strip() for l in text.splitlines()]
    edges = [l for l in lines if " -- " in l]
    nodes = [l for l in lines if l.startswith('"') and " -- " not in l]
    return nodes, edges


def test_a2_cayley_graph():
    code, out, _ = call("export-dot", "--type", "A2")
    assert code == 0 and out.startswith("graph G {")
    nodes, edges = dot_counts(out)
    assert (len(nodes), len(edges)) == (6, 6)


def test_fano_chamber_graph():
    _, out, _ = call("export-dot", "--building", '{"kind": "fano"}')
    nodes, edges = dot_counts(out)
    assert (len(nodes), len(edges)) == (21, 42)


def test_sector_highlight():
    _, out, _ = call("sector", "--type", "D_inf", "--radius", "2", "--point", AFFINE, "--base", "[]", "--format", "dot")
    nodes, _ = dot_counts(out)
    assert sum("filled" in n for n in nodes) == 4
    assert len(nodes) == 5


def test_empty_structure():
    code, out, _ = call("export-dot", "--structure", "{}")
    assert code == 0
    assert dot_counts(out) == ([], [])


# -- determinism and errors -------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("census", "--type", "A~2"),
        ("sector", "--type", "A~2", "--radius", "3", "--point", '{"variant": "affine", "direction": [1, 1]}', "--base", "[]"),
        ("repro", "tree-ends", "--radius", "3"),
        ("dist", "--building", '{"kind": "fano"}', "--r1", "p0-l0", "--r2", '{"chamber": "p3-l3", "J": [0]}'),
    ],
)
def test_output_is_deterministic(argv):
    a, b = call(*argv), call(*argv)
    assert a == b and a[0] == 0
    doc = json.loads(a[1])
    assert no_floats(doc)
    assert a[1] == io.dumps(doc) + "\n"


def error_of(*argv):
    code, out, err = call(*argv)
    assert out == ""
    body = json.loads(err)
    assert body["exit_code"] == code
    return code, body


@pytest.mark.parametrize(
    "argv",
    [
        ("bogus",),
        ("reduce", "--type", "A2", "--word", "[0,"),
        ("reduce", "--type", "A2", "--word", "[0, 7]"),
        ("hull", "--type", "A~2", "--r1", "[]", "--r2", "[0, 1, 2]"),
        ("horofn", "--type", "D_inf", "--radius", "4", "--point", '{"variant": "sequence", "period": [0, 1]}', "--y", "[]", "--y0", "[]"),
        ("cube-validate", "--complex", GRID2, "--ultrafilter", '{"variant": "explicit", "choices": [[[0, 1], "?"]]}'),
        ("dist", "--type", "A2", "--r1", "[]"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, body = error_of(*argv)
    assert code == 2 and body["error"] == "malformed_input"


def test_undecided_exits_3():
    terms = json.dumps([[0, 1, 0, 1, 0, 1][:n] if n % 2 else [1, 0, 1, 0, 1, 0][:n] for n in range(13)])
    point = json.dumps({"variant": "sequence", "terms": json.loads(terms)})
    code, body = error_of("horofn", "--type", "D_inf", "--radius", "2", "--horizon", "12", "--point", point, "--y", "[0]", "--y0", "[]")
    assert code == 3 and body["error"] == "undecided" and body["horizon"] == 12


def test_resource_limit_exits_3():
    code, body = error_of("hull", "--type", "A~2", "--radius", "2", "--r1", "[]", "--r2", "[0, 1, 2]")
    assert code == 3 and body["error"] == "resource_limit"


def test_window_escape_exits_4():
    code, body = error_of("sector", "--type", "D_inf", "--radius", "2", "--point", AFFINE, "--base", "[0, 1, 0, 1, 0]")
    assert code == 4 and body["error"] == "window_escape"


def test_consistency_failure_exits_5(monkeypatch):
    def broken(args):
        raise ConsistencyError("projection is not unique")

    monkeypatch.setattr(cli, "cmd_reduce", broken)
    code, body = error_of("reduce", "--type", "A2", "--word", "[]")
    assert code == 5 and body["error"] == "internal_consistency"


@pytest.mark.skipif(shutil.which("bordify") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["bordify", "reduce", "--type", "A2", "--word", "[0, 0]"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["word"] == []
    res = subprocess.run(["bordify", "bogus"], capture_output=True, text=True)
    assert res.returncode == 2
