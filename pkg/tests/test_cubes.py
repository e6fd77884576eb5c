import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordify.cubes import (
    CubeGraph,
    Directional,
    Explicit,
    GridGraph,
    PointsGraph,
    Principal,
    TreeGraph,
    consistent_orientations,
    cube_filtering,
    cube_horofunction,
    cube_horofunction_sequence,
    cube_sector,
    cube_sector_limit,
    make_complex,
    validate_ultrafilter,
)
from bordify.errors import MalformedInput, Undecided

Z = GridGraph(1, -6, 6)
Z2 = GridGraph(2, -4, 4)


def random_tree(n, seed):
    rng = random.Random(seed)
    return [(rng.randrange(k), k) for k in range(1, n)]


def bfs_path(G, a, b):
    return G.path(a, b)


# -- medians and distances -----------------------------------------------------------------


def test_median_examples():
    assert Z2.median((0, 0), (0, 0), (3, 1)) == (0, 0)
    assert Z2.median((0, 0), (2, 0), (1, 3)) == (1, 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=3))
def test_grid_median_is_coordinatewise(pts):
    u, v, w = pts
    expected = tuple(sorted(c)[1] for c in zip(u, v, w))
    assert Z2.median(u, v, w) == expected


@pytest.mark.parametrize("seed", range(5))
def test_tree_median_is_the_meeting_vertex(seed):
    G = TreeGraph(random_tree(14, seed))
    for u, v, w in itertools.combinations(G.vertices, 3):
        common = set(bfs_path(G, u, v)) & set(bfs_path(G, v, w)) & set(bfs_path(G, u, w))
        assert len(common) == 1
        assert G.median(u, v, w) == common.pop()


def test_points_backend_is_median_closed():
    G = PointsGraph([(0, 0, 0, 0), (1, 1, 0, 0), (0, 1, 1, 0), (1, 0, 1, 1)])
    for u, v, w in itertools.combinations(G.vertices, 3):
        assert G.median(u, v, w) in G.index


def test_l1_examples():
    assert Z2.l1_distance((1, -2), (1, -2)) == 0
    assert Z2.l1_distance((0, 0), (2, 3)) == 5


@pytest.mark.parametrize("G", [Z2, TreeGraph(random_tree(15, 7)), CubeGraph(4), PointsGraph([(0, 0, 1), (1, 1, 0), (1, 0, 0)])])
def test_l1_is_the_separating_wall_count(G):
    rng = random.Random(0)
    for _ in range(100):
        a, b = rng.choice(G.vertices), rng.choice(G.vertices)
        d = G.l1_distance(a, b)
        assert d == len(G.cube_phi(a, b)) == len(G.cube_phi(b, a))
        assert d == sum(1 for w in G.walls if G.side(a, w) != G.side(b, w))


def test_tree_l1_is_the_path_length():
    G = TreeGraph(random_tree(12, 3))
    for a, b in itertools.product(G.vertices, repeat=2):
        assert G.l1_distance(a, b) == len(bfs_path(G, a, b)) - 1


def test_half_spaces_are_complementary():
    for G in (Z2, CubeGraph(3), TreeGraph(random_tree(9, 1))):
        assert set(G.sides.flatten().tolist()) <= {1, -1}


# -- validation ------------------------------------------------------------------------------------


def test_principal_is_consistent():
    for v in Z2.vertices[::7]:
        assert validate_ultrafilter(Z2, Principal(v)).ok


def test_disjoint_half_lines_are_inconsistent():
    spec = Explicit((((0, 4), 1), ((0, 2), -1)))  # x >= 5 and x <= 2
    res = validate_ultrafilter(Z, spec)
    assert not res.ok
    assert set(res.witness) == {((0, 4), 1), ((0, 2), -1)}


def test_directional_plus_infinity_is_consistent_and_not_principal():
    xi = Directional(("+inf",))
    assert validate_ultrafilter(Z, xi).ok
    assert not xi.is_principal
    assert Directional((3,)).is_principal


def test_unknown_wall_in_explicit_spec():
    res = validate_ultrafilter(Z, Explicit((((0, 40), 1),)))
    assert not res.ok


def test_malformed_directional():
    with pytest.raises(MalformedInput):
        Directional(("up",))


def test_boundary_structure_of_z_and_z2():
    ends = [Directional((a,)) for a in ("+inf", "-inf")]
    assert all(validate_ultrafilter(Z, xi).ok and xi.kind() == "end" for xi in ends)
    assert len({tuple(xi.orientation(Z)) for xi in ends}) == 2
    corners = [Directional(c) for c in itertools.product(("+inf", "-inf"), repeat=2)]
    assert all(xi.kind() == "corner" for xi in corners)
    assert len({tuple(xi.orientation(Z2)) for xi in corners}) == 4
    lines = [Directional(c) for c in itertools.product(("+inf", "-inf", 0, 2), repeat=2)]
    lines = [xi for xi in lines if xi.kind() == "line"]
    assert len(lines) == 8  # 2 infinities x 2 thresholds x 2 axes
    assert all(validate_ultrafilter(Z2, xi).ok for xi in corners + lines)


# -- finite complexes have no boundary ---------------------------------------------------------------


FINITE = (
    [CubeGraph(n) for n in range(1, 5)]
    + [TreeGraph(random_tree(n, s)) for n in (4, 8, 13) for s in range(3)]
    + [GridGraph(1, 0, 6), GridGraph(2, 0, 3)]
    + [
        PointsGraph([(0, 0, 0, 0, 0), (1, 1, 0, 0, 0), (0, 1, 1, 1, 0), (1, 0, 1, 0, 1)]),
        PointsGraph([(0, 0, 0, 0, 0, 0), (1, 1, 1, 0, 0, 0), (0, 0, 1, 1, 1, 0), (1, 0, 0, 0, 1, 1)]),
    ]
)


@pytest.mark.parametrize("G", FINITE, ids=lambda G: f"{G.kind}-{len(G.walls)}w")
def test_finite_complexes_have_only_principal_orientations(G):
    assert len(G.walls) <= 12
    principal = {tuple(int(s) for s in G.sign_vector(v)) for v in G.vertices}
    assert set(consistent_orientations(G)) == principal


def test_orientation_search_is_bounded():
    with pytest.raises(MalformedInput):
        consistent_orientations(CubeGraph(21))


# -- sectors -------------------------------------------------------------------------------------------


def test_principal_sector_is_the_interval():
    for v, w in [((0, 0), (2, -3)), ((1, 1), (1, 1)), ((-4, 4), (4, -4))]:
        assert cube_sector(Z2, v, Principal(w)) == Z2.interval(v, w)


def test_quadrant():
    xi = Directional(("+inf", "+inf"))
    for a, b in [(0, 0), (-2, 3), (4, 4)]:
        want = {v for v in Z2.vertices if v[0] >= a and v[1] >= b}
        assert cube_sector(Z2, (a, b), xi) == want


@pytest.mark.parametrize("start", [(0, 0), (-3, -4), (1, 3), (2, 4)])
def test_half_strip_equals_its_limit(start):
    xi = Directional(("+inf", 3))
    a, b = start
    lo, hi = sorted((b, 3))
    want = {v for v in Z2.vertices if v[0] >= a and lo <= v[1] <= hi}
    assert cube_sector(Z2, start, xi) == want
    terms = [(n, 3) for n in range(12)]
    assert cube_sector_limit(Z2, start, terms, confirm=4) == want


ALL_DIRECTIONAL = [Directional(c) for c in itertools.product(("+inf", "-inf", -1, 2), repeat=2)]


@pytest.mark.parametrize("xi", ALL_DIRECTIONAL, ids=str)
def test_sector_two_definitions_agree(xi):
    terms = [xi.representative(Z2, n) for n in range(10)]
    for v in Z2.vertices[::5]:
        assert cube_sector(Z2, v, xi) == cube_sector_limit(Z2, v, terms, confirm=4)


def test_sector_two_definitions_on_trees():
    G = TreeGraph(random_tree(14, 2))
    for v, w in itertools.product(G.vertices, repeat=2):
        assert cube_sector(G, v, Principal(w)) == cube_sector_limit(G, v, [w] * 4, confirm=3)


def test_partial_orientation_is_undecided():
    with pytest.raises(Undecided):
        cube_sector(Z, (0,), Explicit((((0, 1), 1),)))


def test_unstable_sequence_is_undecided():
    terms = [((-1) ** n * n, 0) for n in range(10)]
    with pytest.raises(Undecided):
        cube_sector_limit(Z2, (0, 0), terms, confirm=3)


# -- filtering -------------------------------------------------------------------------------------------


def test_filtering_examples():
    xi = Directional(("+inf", "+inf"))
    assert cube_filtering(Z2, (0, 1), (0, 1), xi) == (0, 1)
    assert cube_filtering(Z2, (0, 1), (1, 0), xi) == (1, 1)


@pytest.mark.parametrize("xi", ALL_DIRECTIONAL, ids=str)
def test_filtering_postcondition(xi):
    rng = random.Random(1)
    for _ in range(25):
        u, v = rng.choice(Z2.vertices), rng.choice(Z2.vertices)
        z = cube_filtering(Z2, u, v, xi)
        assert cube_sector(Z2, z, xi) <= cube_sector(Z2, u, xi) & cube_sector(Z2, v, xi)


@pytest.mark.parametrize("seed", range(4))
def test_tree_filtering_is_the_median_towards_the_end(seed):
    G = TreeGraph(random_tree(16, seed))
    leaves = [v for v in G.vertices if len(G.adj[v]) == 1]
    for leaf in leaves[:3]:
        xi = Principal(leaf)
        for u, v in itertools.product(G.vertices[::2], repeat=2):
            assert cube_filtering(G, u, v, xi) == G.median(u, v, leaf)


# -- horofunctions ------------------------------------------------------------------------------------------


def test_horofunction_examples():
    assert cube_horofunction(Z2, Directional(("+inf", "-inf")), (2, 1), (2, 1)) == 0
    for k in range(-5, 6):
        assert cube_horofunction(Z, Directional(("+inf",)), (k,), (0,)) == -k
    assert cube_horofunction(Z2, Directional(("+inf", "+inf")), (1, 2), (0, 0)) == -3


@pytest.mark.parametrize("xi", ALL_DIRECTIONAL, ids=str)
def test_horofunction_matches_telescoped_distances(xi):
    terms = [xi.representative(Z2, n) for n in range(12)]
    rng = random.Random(2)
    for _ in range(40):
        y, y0 = rng.choice(Z2.vertices), rng.choice(Z2.vertices)
        assert cube_horofunction(Z2, xi, y, y0) == cube_horofunction_sequence(Z2, terms, y, y0, confirm=4)


def test_tree_horofunction_of_a_principal_point():
    G = TreeGraph(random_tree(12, 5))
    for w, y, y0 in itertools.product(G.vertices[::3], repeat=3):
        assert cube_horofunction(G, Principal(w), y, y0) == G.l1_distance(w, y) - G.l1_distance(w, y0)


def _separated(G, specs):
    y0 = G.vertices[0]
    vectors = {}
    for xi in specs:
        v = tuple(cube_horofunction(G, xi, y, y0) for y in G.vertices)
        if v in vectors:
            return False
        vectors[v] = xi
    return True


def test_horofunctions_separate_directional_points_of_z():
    # principal points strictly inside the window; the extreme vertex looks like the end from inside
    specs = [Directional(("+inf",)), Directional(("-inf",))] + [Directional((c,)) for c in range(Z.lo + 1, Z.hi)]
    assert _separated(Z, specs)


def test_horofunctions_separate_directional_points_of_z2():
    values = ("+inf", "-inf") + tuple(range(Z2.lo + 1, Z2.hi))
    specs = [Directional(c) for c in itertools.product(values, repeat=2)]
    assert _separated(Z2, specs)


def test_equal_orientations_give_equal_horofunctions():
    a, b = Directional(("+inf", 1)), Explicit(tuple((w, int(s)) for w, s in zip(Z2.walls, Directional(("+inf", 1)).orientation(Z2))))
    for y in Z2.vertices[::4]:
        assert cube_horofunction(Z2, a, y, (0, 0)) == cube_horofunction(Z2, b, y, (0, 0))


# -- construction ----------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "blob"},
        {"kind": "tree", "edges": [[0, 1], [1, 2], [2, 0]]},
        {"kind": "tree", "edges": [[0, 1], [2, 3]]},
        {"kind": "grid", "dim": 3},
        {"kind": "grid", "dim": 1, "lo": 2, "hi": 2},
        {"kind": "cube", "n": 0},
        {"kind": "points", "points": [[0, 1], [1]]},
    ],
)
def test_malformed_complexes(doc):
    with pytest.raises(MalformedInput):
        make_complex(doc)


def test_make_complex_kinds():
    assert len(make_complex({"kind": "grid", "dim": 2, "lo": 0, "hi": 2})) == 9
    assert len(make_complex({"kind": "cube", "n": 3})) == 8
    assert len(make_complex({"kind": "tree", "edges": [[0, 1], [1, 2]]})) == 3
    assert len(make_complex({"kind": "points", "points": [[0, 0, 0], [1, 1, 0], [0, 1, 1]]})) == 4
