"""Exact-rational planar realization and the independent crossing oracle.

Boxes are axis-aligned rectangles, one per maximal domain, with entry ports
on the west side and exit ports on the east side at unit spacing (port 0 on
top; the transverse order increases downward).  The reduced forest is drawn
recursively: every neighbour of a box hangs off the port run of its shared
leaf, shrunk so that its whole subtree fits inside the horizontal band owned
by that run, and the corridor is a single quadrilateral across the gap
between the two box sides.  The gap of each corridor is sized so that its
slanted walls clear every piece of subtree content that pokes back toward
the parent; all coordinates stay in ``fractions.Fraction`` so the crossing
counts below are exact.

Trajectories are polylines: a short backward whisker, one straight segment
per traversed box, one strand per corridor, and a forward whisker.  They are
strictly monotone in x, so every pairwise intersection is transversal and
lies strictly inside a box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .decompose import ReducedStructure
from .model import FoliageError, Scenario, index
from .realize import (
    BACKWARD,
    FORWARD,
    BoundaryOrder,
    CrossingMatrix,
    PairEntry,
    PortPlan,
    all_port_plans,
    entry_items,
    exit_items,
    forest_components,
    interleaving_matrix,
)

Rational = Fraction
Point = tuple[Fraction, Fraction]

BOX_WIDTH = Fraction(4)
WHISKER = Fraction(1, 2)


class DegeneracyError(FoliageError):
    """Two trajectories touch or overlap instead of crossing transversally."""


@dataclass(frozen=True)
class BoxRect:
    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def contains_interior(self, p: Point) -> bool:
        return self.x0 < p[0] < self.x1 and self.y0 < p[1] < self.y1


@dataclass(frozen=True)
class Corridor:
    """Quadrilateral channel of one forest edge, upstream side first."""

    edge: tuple[str, str, str]
    quad: tuple[Point, Point, Point, Point]  # up-top, up-bottom, down-bottom, down-top


@dataclass(frozen=True)
class Tick:
    leaf: str
    kind: str  # "critical" | "internal" | "fringe"
    x: Fraction
    y0: Fraction
    y1: Fraction


@dataclass
class Layout:
    boxes: dict[str, BoxRect]
    corridors: tuple[Corridor, ...]
    entry_ports: dict[tuple[str, str], Point]
    exit_ports: dict[tuple[str, str], Point]
    back_whiskers: dict[str, Point]
    fwd_whiskers: dict[str, Point]
    ticks: tuple[Tick, ...]
    bounds: tuple[Fraction, Fraction, Fraction, Fraction]

    def tick_for(self, leaf: str) -> Optional[Tick]:
        for t in self.ticks:
            if t.leaf == leaf and t.kind in ("critical", "internal"):
                return t
        return None


@dataclass(frozen=True)
class Polyline:
    orbit: str
    points: tuple[Point, ...]


@dataclass(frozen=True)
class PolylineSet:
    polylines: tuple[Polyline, ...]

    def by_orbit(self, orbit: str) -> Polyline:
        for p in self.polylines:
            if p.orbit == orbit:
                return p
        raise FoliageError(f"no polyline for orbit {orbit!r}")


@dataclass
class _Frame:
    boxes: list = field(default_factory=list)
    corridors: list = field(default_factory=list)
    entry_ports: dict = field(default_factory=dict)
    exit_ports: dict = field(default_factory=dict)
    back_whiskers: dict = field(default_factory=dict)
    fwd_whiskers: dict = field(default_factory=dict)
    ticks: list = field(default_factory=list)
    xs: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    connect_ports: list = field(default_factory=list)
    connect_x: Fraction = Fraction(0)
    overhang: Fraction = Fraction(0)

    def note(self, p: Point) -> None:
        self.xs.append(p[0])
        self.ys.append(p[1])

    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (min(self.xs), min(self.ys), max(self.xs), max(self.ys))

    def transform(self, f: Fraction, dx: Fraction, dy: Fraction) -> None:
        def tp(p: Point) -> Point:
            return (f * p[0] + dx, f * p[1] + dy)

        self.boxes = [(mid, BoxRect(*tp((b.x0, b.y0)), *tp((b.x1, b.y1)))) for mid, b in self.boxes]
        self.corridors = [Corridor(c.edge, tuple(tp(q) for q in c.quad)) for c in self.corridors]
        self.entry_ports = {k: tp(v) for k, v in self.entry_ports.items()}
        self.exit_ports = {k: tp(v) for k, v in self.exit_ports.items()}
        self.back_whiskers = {k: tp(v) for k, v in self.back_whiskers.items()}
        self.fwd_whiskers = {k: tp(v) for k, v in self.fwd_whiskers.items()}
        self.ticks = [Tick(t.leaf, t.kind, f * t.x + dx, f * t.y0 + dy, f * t.y1 + dy) for t in self.ticks]
        self.xs = [f * x + dx for x in self.xs]
        self.ys = [f * y + dy for y in self.ys]
        self.connect_ports = [(o, f * y + dy) for o, y in self.connect_ports]
        self.connect_x = f * self.connect_x + dx
        self.overhang = f * self.overhang

    def merge(self, other: "_Frame") -> None:
        self.boxes.extend(other.boxes)
        self.corridors.extend(other.corridors)
        self.entry_ports.update(other.entry_ports)
        self.exit_ports.update(other.exit_ports)
        self.back_whiskers.update(other.back_whiskers)
        self.fwd_whiskers.update(other.fwd_whiskers)
        self.ticks.extend(other.ticks)
        self.xs.extend(other.xs)
        self.ys.extend(other.ys)


def _scale_factor(span: Fraction, above: Fraction, below: Fraction) -> Fraction:
    half = Fraction(1, 4) + span / 2
    f = min(Fraction(1), half / (above + span / 2), half / (below + span / 2))
    return f


def layout(s: Scenario, r: ReducedStructure, plans: Optional[dict[str, PortPlan]] = None) -> Layout:
    """Deterministic nested embedding of the reduced forest."""
    plans = plans if plans is not None else all_port_plans(s, r)
    edge_by_leaf = {leaf: (a, leaf, b) for a, leaf, b in r.forest_edges}
    other_end = {}
    for a, leaf, b in r.forest_edges:
        other_end[(a, leaf)] = b
        other_end[(b, leaf)] = a

    def build(mid: str, parent_leaf: Optional[str]) -> _Frame:
        m = r.maxdomain(mid)
        plan = plans[mid]
        n = len(plan.entry_seq)
        frame = _Frame()
        height = Fraction(n + 2)
        frame.boxes.append((mid, BoxRect(Fraction(0), Fraction(0), BOX_WIDTH, height)))
        frame.note((Fraction(0), Fraction(0)))
        frame.note((BOX_WIDTH, height))
        for i, orbit in enumerate(plan.entry_seq):
            frame.entry_ports[(mid, orbit)] = (Fraction(0), Fraction(i + 1))
        for i, orbit in enumerate(plan.exit_seq):
            frame.exit_ports[(mid, orbit)] = (BOX_WIDTH, Fraction(i + 1))

        chain_len = len(m.chain)
        for j, leaf in enumerate(m.internal, start=1):
            x = BOX_WIDTH * j / chain_len
            frame.ticks.append(Tick(leaf, "internal", x, Fraction(1, 4), height - Fraction(1, 4)))

        sides = (
            ("entry", entry_items(s, m, plan), Fraction(0), Fraction(-1)),
            ("exit", exit_items(s, m, plan), BOX_WIDTH, Fraction(1)),
        )
        corridor_leaves = set()
        for side, items, side_x, direction in sides:
            for item in items:
                lo, hi = Fraction(item.lo), Fraction(item.hi)
                if item.kind == "stub":
                    orbit = item.orbits[0]
                    tip = (side_x + direction * WHISKER, lo + 1)
                    if side == "entry":
                        frame.back_whiskers[orbit] = tip
                    else:
                        frame.fwd_whiskers[orbit] = tip
                    frame.note(tip)
                    continue
                corridor_leaves.add(item.leaf)
                if item.leaf == parent_leaf:
                    frame.connect_x = side_x
                    ports = frame.entry_ports if side == "entry" else frame.exit_ports
                    frame.connect_ports = [(o, ports[(mid, o)][1]) for o in item.orbits]
                    continue
                child_mid = other_end[(mid, item.leaf)]
                child = build(child_mid, item.leaf)
                span = hi - lo
                cb = child.bounds()
                hull_top = child.connect_ports[0][1]
                hull_bot = child.connect_ports[-1][1]
                f = _scale_factor(span, hull_top - cb[1], cb[3] - hull_bot)
                g = (2 * span + 1) * child.overhang + 1
                target_x = side_x + direction * g
                dx = target_x - f * child.connect_x
                dy = (lo + 1) + span * (1 - f) / 2 - f * hull_top
                child.transform(f, dx, dy)
                if [o for o, _y in child.connect_ports] != list(item.orbits):
                    raise FoliageError(f"corridor hand-off mismatch at leaf {item.leaf!r}")
                parent_iv = (lo + Fraction(3, 4), hi + Fraction(5, 4))
                child_iv = (child.connect_ports[0][1] - f / 4, child.connect_ports[-1][1] + f / 4)
                if side == "entry":
                    up_x, up_iv, down_x, down_iv = target_x, child_iv, side_x, parent_iv
                else:
                    up_x, up_iv, down_x, down_iv = side_x, parent_iv, target_x, child_iv
                quad = (
                    (up_x, up_iv[0]),
                    (up_x, up_iv[1]),
                    (down_x, down_iv[1]),
                    (down_x, down_iv[0]),
                )
                frame.corridors.append(Corridor(edge_by_leaf[item.leaf], quad))
                mid_x = (up_x + down_x) / 2
                frame.ticks.append(
                    Tick(
                        item.leaf,
                        "critical",
                        mid_x,
                        (up_iv[0] + down_iv[0]) / 2,
                        (up_iv[1] + down_iv[1]) / 2,
                    )
                )
                frame.merge(child)

        # Decorative ticks for boundary leaves with no corridor of their own.
        for pos, leaf in enumerate(m.right):
            if leaf not in corridor_leaves and leaf != parent_leaf:
                y = height * (pos + 1) / (len(m.right) + 1)
                frame.ticks.append(Tick(leaf, "fringe", Fraction(0), y - Fraction(1, 4), y + Fraction(1, 4)))
        for pos, leaf in enumerate(m.left):
            if leaf not in corridor_leaves and leaf != parent_leaf:
                y = height * (pos + 1) / (len(m.left) + 1)
                frame.ticks.append(Tick(leaf, "fringe", BOX_WIDTH, y - Fraction(1, 4), y + Fraction(1, 4)))

        if parent_leaf is not None:
            b = frame.bounds()
            if frame.connect_x == Fraction(0):
                frame.overhang = max(Fraction(0), frame.connect_x - b[0])
            else:
                frame.overhang = max(Fraction(0), b[2] - frame.connect_x)
        return frame

    total = _Frame()
    cursor = Fraction(0)
    for comp in forest_components(r):
        frame = build(comp[0], None)
        b = frame.bounds()
        frame.transform(Fraction(1), cursor - b[0], -b[1])
        cursor += (b[2] - b[0]) + 2
        total.merge(frame)
    if not total.xs:
        raise FoliageError("layout requires a non-empty forest")
    return Layout(
        boxes=dict(sorted(total.boxes)),
        corridors=tuple(sorted(total.corridors, key=lambda c: c.edge)),
        entry_ports=total.entry_ports,
        exit_ports=total.exit_ports,
        back_whiskers=total.back_whiskers,
        fwd_whiskers=total.fwd_whiskers,
        ticks=tuple(total.ticks),
        bounds=total.bounds(),
    )


def route(s: Scenario, r: ReducedStructure, lay: Layout) -> PolylineSet:
    """Assemble one x-monotone polyline per orbit through the layout."""
    idx = index(s)
    membership = r.membership()
    polylines = []
    for oid in sorted(idx.orbit_by_id):
        o = idx.orbit_by_id[oid]
        mids = []
        for d in o.domains:
            mid = membership[d]
            if not mids or mids[-1] != mid:
                mids.append(mid)
        points: list[Point] = [lay.back_whiskers[oid]]
        for mid in mids:
            points.append(lay.entry_ports[(mid, oid)])
            points.append(lay.exit_ports[(mid, oid)])
        points.append(lay.fwd_whiskers[oid])
        polylines.append(Polyline(orbit=oid, points=tuple(points)))
    return PolylineSet(polylines=tuple(polylines))


def _orient(p: Point, q: Point, r_: Point) -> Fraction:
    return (q[0] - p[0]) * (r_[1] - p[1]) - (q[1] - p[1]) * (r_[0] - p[0])


def _within(a: Fraction, lo: Fraction, hi: Fraction) -> bool:
    return min(lo, hi) <= a <= max(lo, hi)


def _on_segment(p: Point, q: Point, t: Point) -> bool:
    return _orient(p, q, t) == 0 and _within(t[0], p[0], q[0]) and _within(t[1], p[1], q[1])


def segment_relation(p1: Point, p2: Point, q1: Point, q2: Point):
    """Classify two segments: ("cross", point), ("touch", None) or ("none", None)."""
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)
    if (o1 > 0 > o2 or o1 < 0 < o2) and (o3 > 0 > o4 or o3 < 0 < o4):
        denom = o1 - o2
        t = o1 / denom
        point = (q1[0] + t * (q2[0] - q1[0]), q1[1] + t * (q2[1] - q1[1]))
        return "cross", point
    for p, q, t in ((p1, p2, q1), (p1, p2, q2), (q1, q2, p1), (q1, q2, p2)):
        if _on_segment(p, q, t):
            return "touch", None
    return "none", None


def _segments(poly: Polyline):
    return zip(poly.points, poly.points[1:])


def crossing_points(p: PolylineSet) -> tuple[tuple[str, str, Point], ...]:
    """Every pairwise transversal intersection; touching is an error."""
    found = []
    polys = p.polylines
    for i, pa in enumerate(polys):
        for pb in polys[i + 1 :]:
            for s1, s2 in _segments(pa):
                for t1, t2 in _segments(pb):
                    kind, point = segment_relation(s1, s2, t1, t2)
                    if kind == "touch":
                        raise DegeneracyError(
                            f"trajectories {pa.orbit!r} and {pb.orbit!r} touch without crossing"
                        )
                    if kind == "cross":
                        found.append((pa.orbit, pb.orbit, point))
    return tuple(found)


def exact_crossings(p: PolylineSet, lay: Optional[Layout] = None) -> CrossingMatrix:
    """Count pairwise crossings from the geometry alone."""
    counts: dict[tuple[str, str], int] = {}
    witnesses: dict[tuple[str, str], Optional[str]] = {}
    for a, b, point in crossing_points(p):
        key = (min(a, b), max(a, b))
        counts[key] = counts.get(key, 0) + 1
        if key not in witnesses:
            witness = None
            if lay is not None:
                for mid, box in lay.boxes.items():
                    if box.contains_interior(point):
                        witness = mid
                        break
            witnesses[key] = witness
    orbits = tuple(sorted(poly.orbit for poly in p.polylines))
    entries = tuple(PairEntry(a, b, counts[(a, b)], witnesses[(a, b)]) for a, b in sorted(counts))
    return CrossingMatrix(orbits=orbits, entries=entries)


def y_at(poly: Polyline, x: Fraction) -> Fraction:
    """Height of an x-monotone polyline over x; x must lie in its range."""
    pts = poly.points
    if not pts[0][0] <= x <= pts[-1][0]:
        raise FoliageError("coordinate outside trajectory range")
    for p, q in _segments(poly):
        if p[0] <= x <= q[0]:
            if p[0] == q[0]:
                return p[1]
            t = (x - p[0]) / (q[0] - p[0])
            return p[1] + t * (q[1] - p[1])
    raise FoliageError("coordinate outside trajectory range")


def clip_forward(poly: Polyline, x: Fraction) -> tuple[Point, ...]:
    """The part of the polyline with first coordinate at least x."""
    pts = poly.points
    if x <= pts[0][0]:
        return pts
    if x > pts[-1][0]:
        return ()
    out: list[Point] = [(x, y_at(poly, x))]
    for p in pts:
        if p[0] > x:
            out.append(p)
    return tuple(out)


def pieces_disjoint(a: tuple[Point, ...], b: tuple[Point, ...]) -> bool:
    """No shared point between two polyline pieces of different orbits."""
    for s1, s2 in zip(a, a[1:]):
        for t1, t2 in zip(b, b[1:]):
            kind, _point = segment_relation(s1, s2, t1, t2)
            if kind != "none":
                return False
    return True


_PALETTE = (
    "#c0392b",
    "#2980b9",
    "#27ae60",
    "#8e44ad",
    "#d35400",
    "#16a085",
    "#7f8c8d",
    "#f39c12",
    "#2c3e50",
    "#e74c3c",
)


def _fmt(x) -> str:
    return f"{float(x):.6f}"


def emit_svg(lay: Layout, p: PolylineSet, roles: Optional[ReducedStructure] = None) -> str:
    """Deterministic SVG rendering of the layout and trajectories."""
    orbits = sorted(poly.orbit for poly in p.polylines)
    color = {o: _PALETTE[i % len(_PALETTE)] for i, o in enumerate(orbits)}
    x0, y0, x1, y1 = lay.bounds
    legend_lines = []
    if roles is not None:
        for mid, rr in roles.roles:
            legend_lines.append(
                f"{mid}: "
                f"Oα={{{','.join(sorted(rr.alpha))}}} "
                f"Oω={{{','.join(sorted(rr.omega))}}} "
                f"Oin={{{','.join(sorted(rr.incoming))}}} "
                f"Oout={{{','.join(sorted(rr.outgoing))}}}"
            )
    margin = Fraction(1)
    legend_h = Fraction(len(legend_lines)) if legend_lines else Fraction(0)
    vb = (x0 - margin, y0 - margin, (x1 - x0) + 2 * margin, (y1 - y0) + 2 * margin + legend_h)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(vb[0])} {_fmt(vb[1])} {_fmt(vb[2])} {_fmt(vb[3])}" '
        f'width="{_fmt(vb[2] * 40)}" height="{_fmt(vb[3] * 40)}">',
    ]
    for c in lay.corridors:
        pts = " ".join(f"{_fmt(q[0])},{_fmt(q[1])}" for q in c.quad)
        out.append(f'<polygon points="{pts}" fill="#eef3f7" stroke="#9fb3c8" stroke-width="0.02"/>')
    for mid in sorted(lay.boxes):
        b = lay.boxes[mid]
        out.append(
            f'<rect x="{_fmt(b.x0)}" y="{_fmt(b.y0)}" width="{_fmt(b.x1 - b.x0)}" '
            f'height="{_fmt(b.y1 - b.y0)}" fill="#dce8f2" stroke="#3d5a80" stroke-width="0.04"/>'
        )
        size = (b.y1 - b.y0) / 8
        out.append(
            f'<text x="{_fmt((b.x0 + b.x1) / 2)}" y="{_fmt(b.y0 - size / 2)}" '
            f'font-size="{_fmt(size)}" text-anchor="middle" fill="#3d5a80">{mid}</text>'
        )
    for t in lay.ticks:
        dash = ' stroke-dasharray="0.1,0.1"' if t.kind == "fringe" else ""
        out.append(
            f'<line x1="{_fmt(t.x)}" y1="{_fmt(t.y0)}" x2="{_fmt(t.x)}" y2="{_fmt(t.y1)}" '
            f'stroke="#222222" stroke-width="0.03"{dash}/>'
        )
        size = (t.y1 - t.y0) / 4
        out.append(
            f'<text x="{_fmt(t.x)}" y="{_fmt(t.y0 - size / 2)}" font-size="{_fmt(size)}" '
            f'text-anchor="middle" fill="#222222">{t.leaf}</text>'
        )
    for poly in p.polylines:
        d = "M " + " L ".join(f"{_fmt(q[0])} {_fmt(q[1])}" for q in poly.points)
        out.append(f'<path d="{d}" fill="none" stroke="{color[poly.orbit]}" stroke-width="0.06"/>')
        tail = poly.points[-1]
        out.append(
            f'<text x="{_fmt(tail[0] + Fraction(1, 10))}" y="{_fmt(tail[1])}" font-size="0.3" '
            f'fill="{color[poly.orbit]}">{poly.orbit}</text>'
        )
    for a, b, point in crossing_points(p):
        out.append(
            f'<circle cx="{_fmt(point[0])}" cy="{_fmt(point[1])}" r="0.09" '
            f'fill="none" stroke="#111111" stroke-width="0.03"/>'
        )
    for i, line in enumerate(legend_lines):
        out.append(
            f'<text x="{_fmt(x0)}" y="{_fmt(y1 + margin / 2 + i)}" font-size="0.5" '
            f'fill="#111111">{line}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class ChordDiagram:
    """Trajectory ends on the unit circle with one straight chord per orbit."""

    ends: tuple[tuple[str, str], ...]
    points: tuple[tuple[float, float], ...]
    chords: tuple[tuple[str, int, int], ...]
    interleaving: CrossingMatrix


def chord_diagram(b: BoundaryOrder) -> ChordDiagram:
    if not b.ends:
        raise FoliageError("chord diagram requires a non-empty boundary order")
    total = len(b.ends)
    points = tuple(
        (math.cos(2 * math.pi * k / total), math.sin(2 * math.pi * k / total)) for k in range(total)
    )
    position = {end: i for i, end in enumerate(b.ends)}
    orbits = sorted({orbit for orbit, _kind in b.ends})
    chords = tuple((o, position[(o, BACKWARD)], position[(o, FORWARD)]) for o in orbits)
    return ChordDiagram(ends=b.ends, points=points, chords=chords, interleaving=interleaving_matrix(b))


def emit_chord_svg(cd: ChordDiagram) -> str:
    orbits = sorted({orbit for orbit, _kind in cd.ends})
    color = {o: _PALETTE[i % len(_PALETTE)] for i, o in enumerate(orbits)}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'viewBox="-1.300000 -1.300000 2.600000 2.600000" width="390.000000" height="390.000000">',
        '<circle cx="0.000000" cy="0.000000" r="1.000000" fill="none" stroke="#555555" stroke-width="0.015"/>',
    ]
    for orbit, i, j in cd.chords:
        xi, yi = cd.points[i]
        xj, yj = cd.points[j]
        out.append(
            f'<line x1="{xi:.6f}" y1="{yi:.6f}" x2="{xj:.6f}" y2="{yj:.6f}" '
            f'stroke="{color[orbit]}" stroke-width="0.025"/>'
        )
    for k, (orbit, kind) in enumerate(cd.ends):
        x, y = cd.points[k]
        out.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="0.030" fill="{color[orbit]}"/>')
        mark = "-" if kind == BACKWARD else "+"
        out.append(
            f'<text x="{1.12 * x:.6f}" y="{1.12 * y:.6f}" font-size="0.1" text-anchor="middle" '
            f'fill="{color[orbit]}">{orbit}{mark}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
