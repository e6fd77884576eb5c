import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordify.affine import AffineChart
from bordify.boundary import (
    AffinePoint,
    InteriorPoint,
    SequencePoint,
    affine_census,
    common_subsector,
    converges,
    horofunction,
    horofunction_sequence,
    limit_of_point,
    residual_projection,
    sector,
    sector_limit,
    threshold_member,
    xi_value,
)
from bordify.coxeter import CoxeterSystem, named
from bordify.errors import MalformedInput, Undecided
from bordify.residues import CoxeterComplex
from oracles import ThinOracle, oracle_residue, realisation

_cache = {}


def setup(name, radius):
    key = (name, radius)
    if key not in _cache:
        cx = CoxeterComplex(CoxeterSystem(named(name)))
        _cache[key] = (cx, AffineChart(cx.W), cx.window(radius), ThinOracle(realisation(name), radius))
    return _cache[key]


# -- the D_inf line: chart coordinate x, s1 fixes x = 0, s0 fixes x = 1 -----------------


def dinf():
    return setup("D_inf", 6)


def plus(n):
    """The n-th chamber towards +infinity."""
    return tuple(k % 2 for k in range(n))


def minus(n):
    return tuple((k + 1) % 2 for k in range(n))


def plus_end(cx, chart):
    return AffinePoint(chart, cx, (1,))


def test_dinf_xi_value_points_to_plus_infinity():
    cx, chart, win, _ = dinf()
    xi = plus_end(cx, chart)
    for n in range(5):
        C = cx.chamber(plus(n))
        assert xi_value(cx, xi, C) == C
        panel = cx.residue(plus(n), (n % 2,))
        assert xi_value(cx, xi, panel) == cx.chamber(plus(n + 1))
    P = cx.residue((), (1,))  # the panel x = 0, behind the base chamber
    assert xi_value(cx, xi, P) == cx.chamber(())


def test_dinf_residual_projection():
    cx, chart, _, _ = dinf()
    xi = plus_end(cx, chart)
    assert residual_projection(cx, xi, cx.chamber(())) == cx.residue((), (0,))
    assert residual_projection(cx, xi, cx.chamber((1,))) == cx.residue((1,), (1,))


def test_residual_projection_at_the_point_itself():
    cx, _, _, _ = dinf()
    C = cx.chamber((0, 1))
    assert residual_projection(cx, InteriorPoint(cx, C), C) == C


def test_residual_projection_needs_a_chamber():
    cx, chart, _, _ = dinf()
    with pytest.raises(MalformedInput):
        residual_projection(cx, plus_end(cx, chart), cx.residue((), (0,)))


def test_dinf_sector_is_a_half_line():
    cx, chart, win, _ = dinf()
    xi = plus_end(cx, chart)
    Q = sector(cx, cx.chamber(()), xi, win).members
    chambers = {R.w for R in Q if not R.J}
    assert chambers == {plus(n) for n in range(7)}
    assert all(R.w in chambers or cx.chamber(R.w) in Q for R in Q)
    assert cx.residue((), (1,)) in Q  # the face x = 0 of the base chamber
    Q1 = sector(cx, cx.chamber((1,)), xi, win).members
    assert Q < Q1


def test_dinf_common_subsector_is_the_farther_chamber():
    cx, chart, win, _ = dinf()
    xi = plus_end(cx, chart)
    x, y = cx.chamber((1,)), cx.chamber(())
    assert common_subsector(cx, x, y, xi, win) == y
    assert common_subsector(cx, y, x, xi, win) == y
    assert common_subsector(cx, y, y, xi, win) == y


def test_dinf_sequence_converges_to_plus_infinity():
    cx, chart, win, _ = dinf()
    terms = [cx.chamber(plus(n)) for n in range(24)]
    lim = converges(cx, terms, win, confirm=6)
    assert lim.decided
    assert lim.signs == limit_of_point(plus_end(cx, chart), win).signs


def test_dinf_alternating_sequence_is_undecided():
    cx, _, win, _ = dinf()
    terms = [cx.chamber(plus(n) if n % 2 else minus(n)) for n in range(24)]
    lim = converges(cx, terms, win, confirm=6)
    assert not lim.decided
    pt = SequencePoint(cx, terms, horizon=23, confirm=6)
    with pytest.raises(Undecided):
        pt.classify_many(win.walls)


@pytest.mark.parametrize("k", range(6))
def test_dinf_horofunction(k):
    cx, chart, _, _ = dinf()
    xi = plus_end(cx, chart)
    y0 = cx.chamber(())
    assert horofunction(cx, xi, cx.chamber(plus(k)), y0) == -k
    assert horofunction(cx, xi, cx.chamber(minus(k)), y0) == k
    terms = [cx.chamber(plus(n)) for n in range(3 * k + 8)]
    assert horofunction_sequence(cx, terms, cx.chamber(plus(k)), y0, confirm=3) == -k


# -- interior points -----------------------------------------------------------------------


@pytest.mark.parametrize("name,radius", [("A2", 3), ("A~2", 3)])
def test_interior_xi_value_is_the_projection(name, radius):
    cx = CoxeterComplex(CoxeterSystem(named(name)))
    win = cx.window(radius)
    for R, T in itertools.product(win.residues, repeat=2):
        assert xi_value(cx, InteriorPoint(cx, T), R) == cx.projection(R, T)


def test_interior_sector_is_the_hull():
    cx, _, win, _ = setup("A~2", 3)
    for x, T in itertools.product(win.residues[::3], win.residues[::5]):
        Q = sector(cx, x, InteriorPoint(cx, T), win).members
        assert Q == win.residues_of(win.hull_mask(win.index[x], win.index[T]))


def test_interior_horofunction_is_a_distance_difference():
    cx, _, win, _ = setup("A~2", 3)
    y0 = cx.chamber(())
    rng = random.Random(0)
    for _ in range(80):
        T, y = rng.choice(win.residues), rng.choice(win.residues)
        assert horofunction(cx, InteriorPoint(cx, T), y, y0) == cx.root_distance(T, y) - cx.root_distance(T, y0)


def test_discreteness_interior_points_are_separated():
    """Distinct residues give distinct projection vectors on the window."""
    cx, _, win, _ = setup("A~2", 2)
    vectors = {}
    for T in win.residues:
        v = tuple(xi_value(cx, InteriorPoint(cx, T), s) for s in win.residues)
        assert v not in vectors
        vectors[v] = T


# -- A~2 rays against the concrete realisation --------------------------------------------------


def to_oracle(p):
    """Pairing coordinates (x1 - x2, x2 - x3) back to a point of R^3."""
    d1, d2 = p
    return (d1 + d2, d2, F(0))


def oracle_limit_signs(O, base, direction, far=10**6):
    """Side of each oracle wall at a point far along the ray, relative to the base alcove."""
    q = to_oracle(tuple(b + far * v for b, v in zip(base, direction)))
    out = []
    for a, c in O.walls:
        here = sum(x * y for x, y in zip(a, q)) - c
        home = sum(x * y for x, y in zip(a, O.G.base)) - c
        assert here != 0
        out.append(1 if (here > 0) == (home > 0) else -1)
    return tuple(out)


def oracle_sector(O, x, signs):
    Px = O.positions(x)
    out = set()
    for s in O.residues:
        Ps = O.positions(s)
        if all(not (px in (sg, 0) and L in (sg, 0)) or ps in (sg, 0) for px, L, ps in zip(Px, signs, Ps) for sg in (1, -1)):
            out.add(s)
    return out


RAYS = [
    ((1, 0), None),
    ((1, 1), None),
    ((2, -1), None),
    ((-1, -1), None),
    ((0, 1), (F(1, 5), F(3, 7))),
    ((1, -1), (F(2, 7), F(1, 11))),
    ((3, 1), (F(-4, 13), F(1, 17))),
]


@pytest.mark.parametrize("direction,base", RAYS)
def test_affine_classification_matches_far_points(direction, base):
    cx, chart, win, O = setup("A~2", 3)
    xi = AffinePoint(chart, cx, direction, base)
    want = oracle_limit_signs(O, xi.base, xi.direction)
    got = {}
    for wall in cx.W.reflections(5):
        got[O.G.fixed_hyperplane(cx.W.reflection_word(wall))] = xi.classify(wall)
    assert tuple(got[h] for h in O.walls) == want


@pytest.mark.parametrize("direction,base", RAYS)
def test_affine_sector_matches_the_geometric_sector(direction, base):
    cx, chart, win, O = setup("A~2", 3)
    xi = AffinePoint(chart, cx, direction, base)
    signs = oracle_limit_signs(O, xi.base, xi.direction)
    for x in win.residues[::4]:
        got = {oracle_residue(cx, R) for R in sector(cx, x, xi, win).members}
        assert got == oracle_sector(O, oracle_residue(cx, x), signs)


def test_chamber_of_matches_oracle_alcoves():
    cx, chart, _, O = setup("A~2", 3)
    G = O.G
    rng = random.Random(3)
    for _ in range(60):
        # numerators prime to the denominators keep the point off every wall
        p = (F(17 * rng.randint(-4, 3) + rng.randint(1, 16), 17), F(19 * rng.randint(-4, 3) + rng.randint(1, 18), 19))
        w = chart.chamber_of(p)
        q = to_oracle(p)
        for word in G.ball(len(w) + 1):
            for s in range(3):
                a, c = G.wall_of(word, s)
                v = sum(x * y for x, y in zip(a, q)) - c
                home = sum(x * y for x, y in zip(a, G.base)) - c
                assert v != 0
                assert G.side((a, c), w) == (1 if (v > 0) == (home > 0) else -1)


@pytest.mark.parametrize("direction,base", RAYS[:4])
def test_sector_is_the_limit_of_hulls(direction, base):
    cx, chart, win, _ = setup("A~2", 3)
    xi = AffinePoint(chart, cx, direction, base)
    terms = [xi.representative(n) for n in range(16)]
    for x in win.residues[::6]:
        assert sector_limit(cx, x, terms, win, confirm=4) == sector(cx, x, xi, win).members


# -- structural properties of sectors --------------------------------------------------------


def census_points():
    cx, chart, _, _ = setup("A~2", 3)
    return [c.point for c in affine_census(chart, cx)]


def test_census_counts():
    cx, chart, _, _ = setup("A~2", 3)
    classes = affine_census(chart, cx)
    assert sum(1 for c in classes if c.kind == "regular") == 6
    assert sum(1 for c in classes if c.kind == "threshold") == 6


def test_census_classes_are_distinct_on_the_window():
    cx, _, win, _ = setup("A~2", 3)
    keys = {limit_of_point(p, win).signs for p in census_points()}
    assert len(keys) == 12


def test_threshold_members_differ_by_strip():
    cx, chart, win, _ = setup("A~2", 4)
    cc = next(c for c in affine_census(chart, cx) if c.kind == "threshold")
    keys = {limit_of_point(threshold_member(cc, t), win).signs for t in range(-2, 3)}
    assert len(keys) == 5


def test_census_representatives_converge_back():
    cx, _, win, _ = setup("A~2", 3)
    for pt in census_points():
        terms = [pt.representative(n) for n in range(16)]
        assert converges(cx, terms, win, confirm=4).signs == limit_of_point(pt, win).signs


@pytest.mark.parametrize("k", range(12))
def test_sector_monotonicity(k):
    cx, _, win, _ = setup("A~2", 3)
    xi = census_points()[k]
    for x in win.residues[::5]:
        Q = sector(cx, x, xi, win).members
        for y in list(Q)[::3]:
            assert sector(cx, y, xi, win).members <= Q


@pytest.mark.parametrize("k", range(12))
def test_sector_from_the_projection(k):
    cx, _, win, _ = setup("A~2", 3)
    xi = census_points()[k]
    for x in win.residues[::3]:
        pi = xi_value(cx, xi, x)
        assert cx.is_face(x, pi)
        Q = sector(cx, x, xi, win).members
        assert pi in Q
        if pi in win.index:
            assert sector(cx, pi, xi, win).members == Q


@pytest.mark.parametrize("k", range(12))
def test_sector_of_a_face_is_cut_out_by_its_chambers(k):
    cx, _, win, _ = setup("A~2", 3)
    xi = census_points()[k]
    for sigma in win.residues:
        chambers = [C for C in cx.star(sigma) if not C.J]
        if not sigma.J or any(C not in win.index for C in chambers):
            continue
        meet = set(win.residues)
        for C in chambers:
            meet &= sector(cx, C, xi, win).members
        assert sector(cx, sigma, xi, win).members == meet


@pytest.mark.parametrize("k", range(12))
def test_common_subsector_postcondition(k):
    cx, _, win, _ = setup("A~2", 3)
    xi = census_points()[k]
    rng = random.Random(k)
    for _ in range(6):
        x, y = rng.choice(win.residues[:10]), rng.choice(win.residues[:10])
        z = common_subsector(cx, x, y, xi, win)
        Qz = sector(cx, z, xi, win).members
        assert Qz <= sector(cx, x, xi, win).members & sector(cx, y, xi, win).members


# -- horofunctions ------------------------------------------------------------------------------------


def translate(cx, chart, w, xi):
    base = chart.act_point(w, xi.base)
    tip = chart.act_point(w, tuple(b + v for b, v in zip(xi.base, xi.direction)))
    return AffinePoint(chart, cx, tuple(t - b for t, b in zip(tip, base)), base)


def act(cx, w, R):
    return cx.residue(cx.W.multiply(w, R.w), R.J)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_horofunction_is_equivariant(data):
    cx, chart, win, _ = setup("A~2", 3)
    xi = data.draw(st.sampled_from(census_points()))
    w = data.draw(st.sampled_from(cx.W.ball(3)))
    y, y0 = (data.draw(st.sampled_from(win.residues)) for _ in range(2))
    assert horofunction(cx, translate(cx, chart, w, xi), act(cx, w, y), act(cx, w, y0)) == horofunction(cx, xi, y, y0)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_horofunction_cocycle(data):
    cx, _, win, _ = setup("A~2", 3)
    xi = data.draw(st.sampled_from(census_points()))
    y0, y1, y2 = (data.draw(st.sampled_from(win.residues)) for _ in range(3))
    h = lambda a, b: horofunction(cx, xi, a, b)  # noqa: E731
    assert h(y2, y0) == h(y2, y1) + h(y1, y0)
    assert h(y0, y0) == 0
    assert abs(h(y1, y0)) <= cx.root_distance(y1, y0)


@pytest.mark.parametrize("k", range(12))
def test_horofunction_exact_matches_sequence(k):
    cx, _, win, _ = setup("A~2", 3)
    xi = census_points()[k]
    terms = [xi.representative(n) for n in range(40)]
    y0 = cx.chamber(())
    for y in win.residues[::7]:
        assert horofunction_sequence(cx, terms, y, y0, confirm=6) == horofunction(cx, xi, y, y0)
