import itertools
from fractions import Fraction

import pytest

from foliage import geometry
from foliage.decompose import reduce_scenario
from foliage.generator import GeneratorConfig, generate_scenario
from foliage.geometry import (
    DegeneracyError,
    Polyline,
    PolylineSet,
    chord_diagram,
    emit_chord_svg,
    emit_svg,
    exact_crossings,
    layout,
    route,
    segment_relation,
)
from foliage.model import fixture, index
from foliage.realize import boundary_order, crossing_matrix


def _realized(name):
    s = fixture(name)
    r = reduce_scenario(s)
    lay = layout(s, r)
    return s, r, lay, route(s, r, lay)


def test_layout_s0_single_box_with_two_stubs():
    s, r, lay, routed = _realized("S0")
    assert list(lay.boxes) == ["M:D0"]
    assert lay.corridors == ()
    assert set(lay.back_whiskers) == {"O"}
    assert set(lay.fwd_whiskers) == {"O"}


def test_layout_s1_star():
    s, r, lay, routed = _realized("S1")
    assert len(lay.boxes) == 5
    assert len(lay.corridors) == 4
    for a, _leaf, b in r.forest_edges:
        assert lay.boxes[a].x1 < lay.boxes[b].x0


def test_layout_s4_merged_box():
    s, r, lay, routed = _realized("S4")
    assert len(lay.boxes) == 1
    assert lay.corridors == ()
    assert any(t.kind == "internal" and t.leaf == "k" for t in lay.ticks)


def test_boxes_are_pairwise_disjoint_and_edges_point_forward():
    for seed in range(1, 21):
        s = generate_scenario(GeneratorConfig(seed=seed))
        r = reduce_scenario(s)
        lay = layout(s, r)
        boxes = list(lay.boxes.items())
        for (ma, a), (mb, b) in itertools.combinations(boxes, 2):
            disjoint = a.x1 <= b.x0 or b.x1 <= a.x0 or a.y1 <= b.y0 or b.y1 <= a.y0
            assert disjoint, f"boxes {ma} and {mb} overlap (seed {seed})"
        for up, _leaf, down in r.forest_edges:
            assert lay.boxes[up].x1 < lay.boxes[down].x0


def test_route_s1_crosses_once_inside_d():
    s, r, lay, routed = _realized("S1")
    points = geometry.crossing_points(routed)
    assert len(points) == 1
    a, b, point = points[0]
    assert {a, b} == {"O_a", "O_b"}
    assert lay.boxes["M:D"].contains_interior(point)


def test_route_s3_disjoint():
    _s, _r, _lay, routed = _realized("S3")
    assert geometry.crossing_points(routed) == ()


def test_route_s0_single_polyline():
    _s, _r, _lay, routed = _realized("S0")
    assert len(routed.polylines) == 1


def test_exact_crossings_matches_plan_matrix_on_fixtures():
    for name in ("S0", "S1", "S2", "S3", "S4"):
        s, r, lay, routed = _realized(name)
        exact = exact_crossings(routed, lay)
        planned = crossing_matrix(s, r)
        assert exact.as_dict() == planned.as_dict()
        for e in exact.entries:
            assert e.witness == planned.witness(e.a, e.b)


def test_polylines_are_x_monotone():
    for name in ("S1", "S2", "S4"):
        _s, _r, _lay, routed = _realized(name)
        for poly in routed.polylines:
            xs = [p[0] for p in poly.points]
            assert all(x0 < x1 for x0, x1 in zip(xs, xs[1:]))


def test_degeneracy_touch_is_an_error():
    a = Polyline("a", ((Fraction(0), Fraction(0)), (Fraction(2), Fraction(0))))
    b = Polyline("b", ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(2))))
    with pytest.raises(DegeneracyError):
        exact_crossings(PolylineSet((a, b)))


def test_degeneracy_collinear_overlap_is_an_error():
    a = Polyline("a", ((Fraction(0), Fraction(0)), (Fraction(2), Fraction(0))))
    b = Polyline("b", ((Fraction(1), Fraction(0)), (Fraction(3), Fraction(0))))
    with pytest.raises(DegeneracyError):
        exact_crossings(PolylineSet((a, b)))


def test_segment_relation_proper_cross_point():
    kind, point = segment_relation(
        (Fraction(0), Fraction(0)),
        (Fraction(2), Fraction(2)),
        (Fraction(0), Fraction(2)),
        (Fraction(2), Fraction(0)),
    )
    assert kind == "cross"
    assert point == (Fraction(1), Fraction(1))


def test_svg_counts_s0():
    s, r, lay, routed = _realized("S0")
    svg = emit_svg(lay, routed)
    assert svg.count("<rect") == 1
    assert svg.count("<path") == 1
    assert svg.count("<circle") == 0


def test_svg_counts_s1():
    s, r, lay, routed = _realized("S1")
    svg = emit_svg(lay, routed)
    assert svg.count("<rect") == 5
    assert svg.count("<path") == 2
    assert svg.count("<circle") == 1  # the single crossing marker


def test_svg_role_legend_s2():
    s, r, lay, routed = _realized("S2")
    svg = emit_svg(lay, routed, roles=r)
    assert "Oα={O1,O4}" in svg
    assert "Oω={O3,O4}" in svg
    assert "Oin={O2,O3}" in svg
    assert "Oout={O1,O2}" in svg


def test_svg_is_byte_stable():
    s, r, lay, routed = _realized("S2")
    first = emit_svg(lay, routed, roles=r)
    s2, r2, lay2, routed2 = _realized("S2")
    assert emit_svg(lay2, routed2, roles=r2) == first


def test_chord_diagram_s1_interleaves():
    s = fixture("S1")
    r = reduce_scenario(s)
    cd = chord_diagram(boundary_order(s, r))
    assert cd.interleaving.count("O_a", "O_b") == 1
    assert len(cd.points) == 4
    svg = emit_chord_svg(cd)
    assert svg.count("<line") == 2  # one chord per orbit


def test_chord_diagram_s3_nested():
    s = fixture("S3")
    cd = chord_diagram(boundary_order(s, reduce_scenario(s)))
    assert cd.interleaving.as_dict() == {}


def test_chord_diagram_s0_single_chord():
    s = fixture("S0")
    cd = chord_diagram(boundary_order(s, reduce_scenario(s)))
    assert len(cd.chords) == 1
    assert cd.interleaving.as_dict() == {}


@pytest.mark.parametrize("seed", range(1, 21))
def test_oracle_agreement_on_generated(seed):
    s = generate_scenario(GeneratorConfig(seed=seed))
    r = reduce_scenario(s)
    lay = layout(s, r)
    routed = route(s, r, lay)
    assert exact_crossings(routed, lay).as_dict() == crossing_matrix(s, r).as_dict()


@pytest.mark.parametrize("seed", range(1, 21))
def test_all_crossings_lie_inside_boxes(seed):
    s = generate_scenario(GeneratorConfig(seed=seed))
    r = reduce_scenario(s)
    lay = layout(s, r)
    routed = route(s, r, lay)
    for _a, _b, point in geometry.crossing_points(routed):
        assert any(box.contains_interior(point) for box in lay.boxes.values())


def test_forward_pieces_disjoint_when_leaf_order_is_compatible():
    from foliage.relations import Direction, compare_left

    for seed in range(1, 16):
        s = generate_scenario(GeneratorConfig(seed=seed))
        r = reduce_scenario(s)
        lay = layout(s, r)
        routed = route(s, r, lay)
        idx = index(s)
        for leaf, orbs in sorted(idx.leaf_orbits.items()):
            if len(orbs) < 2:
                continue
            tick = lay.tick_for(leaf)
            assert tick is not None
            for a, b in itertools.combinations(sorted(orbs), 2):
                ya = geometry.y_at(routed.by_orbit(a), tick.x)
                yb = geometry.y_at(routed.by_orbit(b), tick.x)
                if ya == yb:
                    continue
                first, second = (a, b) if ya < yb else (b, a)
                if compare_left(s, first, second).direction not in (
                    Direction.FIRST_LESS,
                    Direction.EQUIVALENT,
                ):
                    continue
                pa = geometry.clip_forward(routed.by_orbit(first), tick.x)
                pb = geometry.clip_forward(routed.by_orbit(second), tick.x)
                assert geometry.pieces_disjoint(pa, pb)
