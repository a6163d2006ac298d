"""Port sequences, inversion-counted crossings and the cyclic boundary order.

Each maximal domain gets an entry sequence (standard composite order) and
an exit sequence (adaptive order); one trajectory strand per crossing orbit
runs from its entry port to its exit port.  Two strands cross inside a
domain exactly when the pair's relative order differs between the two
sequences, and consecutive domains hand strands over through the shared
leaf in a common order, so the total crossing count of a pair is the number
of domains at which it inverts.

The boundary order is the cyclic order of trajectory ends read off the
outer face of the box-and-corridor embedding of the reduced forest.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

from .decompose import MaxDomain, ReducedStructure, reduce_scenario
from .model import FoliageError, Scenario, index
from .relations import (
    Direction,
    OrderedOrbitList,
    adaptive_sorted,
    compare_left,
    compare_right,
    standard_cmp,
    standard_sorted,
    weak_transverse,
)

BACKWARD = "backward"
FORWARD = "forward"


@dataclass(frozen=True)
class PortPlan:
    domain: str
    entry_seq: tuple[str, ...]
    exit_seq: tuple[str, ...]


@dataclass(frozen=True)
class PairEntry:
    a: str
    b: str
    count: int
    witness: Optional[str]


@dataclass(frozen=True)
class CrossingMatrix:
    """Symmetric pair matrix; only non-zero entries are stored."""

    orbits: tuple[str, ...]
    entries: tuple[PairEntry, ...]

    def count(self, a: str, b: str) -> int:
        a, b = min(a, b), max(a, b)
        for e in self.entries:
            if (e.a, e.b) == (a, b):
                return e.count
        return 0

    def witness(self, a: str, b: str) -> Optional[str]:
        a, b = min(a, b), max(a, b)
        for e in self.entries:
            if (e.a, e.b) == (a, b):
                return e.witness
        return None

    def as_dict(self) -> dict[tuple[str, str], int]:
        return {(e.a, e.b): e.count for e in self.entries}


@dataclass(frozen=True)
class BoundaryOrder:
    """Cyclic sequence of trajectory ends, one backward + one forward per orbit."""

    ends: tuple[tuple[str, str], ...]


class RealizationError(FoliageError):
    """A pair accumulated more than one crossing; indicates a bug."""


def port_plan(s: Scenario, r: ReducedStructure, m: MaxDomain) -> PortPlan:
    return PortPlan(
        domain=m.id,
        entry_seq=standard_sorted(s, m.crossers),
        exit_seq=adaptive_sorted(s, m),
    )


def all_port_plans(s: Scenario, r: ReducedStructure) -> dict[str, PortPlan]:
    return {m.id: port_plan(s, r, m) for m in r.maxdomains}


def entry_group(s: Scenario, m: MaxDomain, orbit_id: str) -> Optional[str]:
    """Leaf through which the orbit enters the chain, or None if it starts there."""
    idx = index(s)
    o = idx.orbit_by_id[orbit_id]
    if o.alpha in m.chain:
        return None
    pos = idx.domain_pos[orbit_id][m.chain[0]]
    return o.path[pos - 1]


def exit_group(s: Scenario, m: MaxDomain, orbit_id: str) -> Optional[str]:
    idx = index(s)
    o = idx.orbit_by_id[orbit_id]
    if o.omega in m.chain:
        return None
    pos = idx.domain_pos[orbit_id][m.chain[-1]]
    return o.path[pos + 1]


@dataclass(frozen=True)
class SideItem:
    """One attachment on a box side: a corridor group or a single stub.

    ``kind`` is "corridor" or "stub"; corridor items carry the shared leaf
    and the orbit run, stub items a single orbit.  ``lo``/``hi`` are the
    first and last port index of the run within the side's sequence.
    """

    kind: str
    leaf: Optional[str]
    orbits: tuple[str, ...]
    lo: int
    hi: int


def _side_items(seq: tuple[str, ...], group_of) -> tuple[SideItem, ...]:
    items: list[SideItem] = []
    i = 0
    while i < len(seq):
        leaf = group_of(seq[i])
        if leaf is None:
            items.append(SideItem("stub", None, (seq[i],), i, i))
            i += 1
            continue
        j = i
        while j + 1 < len(seq) and group_of(seq[j + 1]) == leaf:
            j += 1
        items.append(SideItem("corridor", leaf, tuple(seq[i : j + 1]), i, j))
        i = j + 1
    return tuple(items)


def entry_items(s: Scenario, m: MaxDomain, plan: PortPlan) -> tuple[SideItem, ...]:
    return _side_items(plan.entry_seq, lambda o: entry_group(s, m, o))


def exit_items(s: Scenario, m: MaxDomain, plan: PortPlan) -> tuple[SideItem, ...]:
    return _side_items(plan.exit_seq, lambda o: exit_group(s, m, o))


def crossing_matrix(s: Scenario, r: ReducedStructure) -> CrossingMatrix:
    """Sum, over maximal domains, the entry/exit order inversions per pair."""
    plans = all_port_plans(s, r)
    counts: dict[tuple[str, str], int] = {}
    witnesses: dict[tuple[str, str], str] = {}
    for m in r.maxdomains:
        plan = plans[m.id]
        entry_pos = {o: i for i, o in enumerate(plan.entry_seq)}
        exit_pos = {o: i for i, o in enumerate(plan.exit_seq)}
        ids = sorted(m.crossers)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                if (entry_pos[a] - entry_pos[b]) * (exit_pos[a] - exit_pos[b]) < 0:
                    key = (a, b)
                    counts[key] = counts.get(key, 0) + 1
                    witnesses.setdefault(key, m.id)
                    if counts[key] > 1:
                        raise RealizationError(f"pair {key} accumulated {counts[key]} crossings")
    orbits = tuple(sorted(o.id for o in s.orbits))
    entries = tuple(
        PairEntry(a, b, counts[(a, b)], witnesses[(a, b)]) for a, b in sorted(counts)
    )
    return CrossingMatrix(orbits=orbits, entries=entries)


def _extension_cmp(s: Scenario, sided_compare, a: str, b: str) -> int:
    v = sided_compare(s, a, b)
    if v.direction is Direction.FIRST_LESS:
        return -1
    if v.direction is Direction.SECOND_LESS:
        return 1
    if v.direction is Direction.INCOMPARABLE:
        raise FoliageError("orbits without a common subpath cannot be ordered")
    idx = index(s)
    ra, rb = idx.orbit_by_id[a].tie_rank, idx.orbit_by_id[b].tie_rank
    if ra != rb:
        return -1 if ra < rb else 1
    return standard_cmp(s, a, b)


def one_sided_order(s: Scenario, leaf: str) -> OrderedOrbitList:
    """Strict total order on the orbits crossing a leaf extending the left preorder."""
    idx = index(s)
    orbs = idx.orbits_crossing(leaf)
    if not orbs:
        raise FoliageError(f"leaf {leaf!r} is crossed by no orbit")
    ids = sorted(orbs)
    ids.sort(key=functools.cmp_to_key(lambda x, y: _extension_cmp(s, compare_left, x, y)))
    return OrderedOrbitList(context=leaf, order=tuple(ids))


def one_sided_order_right(s: Scenario, leaf: str) -> OrderedOrbitList:
    idx = index(s)
    orbs = idx.orbits_crossing(leaf)
    if not orbs:
        raise FoliageError(f"leaf {leaf!r} is crossed by no orbit")
    ids = sorted(orbs)
    ids.sort(key=functools.cmp_to_key(lambda x, y: _extension_cmp(s, compare_right, x, y)))
    return OrderedOrbitList(context=leaf, order=tuple(ids))


def box_cycle(s: Scenario, m: MaxDomain, plan: PortPlan) -> tuple[tuple, ...]:
    """Cyclic attachment list of one box: entry side top to bottom, then
    exit side bottom to top.  Entries are ("edge", leaf) or
    ("end", orbit, BACKWARD|FORWARD)."""
    cyc: list[tuple] = []
    for item in entry_items(s, m, plan):
        if item.kind == "corridor":
            cyc.append(("edge", item.leaf))
        else:
            cyc.append(("end", item.orbits[0], BACKWARD))
    for item in reversed(exit_items(s, m, plan)):
        if item.kind == "corridor":
            cyc.append(("edge", item.leaf))
        else:
            for orbit in reversed(item.orbits):
                cyc.append(("end", orbit, FORWARD))
    return tuple(cyc)


def forest_components(r: ReducedStructure) -> tuple[tuple[str, ...], ...]:
    """Connected components of the reduced forest, each sorted, ordered by root."""
    neighbours: dict[str, set[str]] = {m.id: set() for m in r.maxdomains}
    for a, _leaf, b in r.forest_edges:
        neighbours[a].add(b)
        neighbours[b].add(a)
    seen: set[str] = set()
    comps = []
    for mid in sorted(neighbours):
        if mid in seen:
            continue
        stack, comp = [mid], []
        seen.add(mid)
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nxt in sorted(neighbours[cur]):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: c[0])
    return tuple(comps)


def boundary_order(s: Scenario, r: ReducedStructure) -> BoundaryOrder:
    """Outer-face walk of the box embedding, trees concatenated by root id."""
    if not r.maxdomains:
        raise FoliageError("boundary order requires a non-empty forest")
    plans = all_port_plans(s, r)
    cycles = {m.id: box_cycle(s, r.maxdomain(m.id), plans[m.id]) for m in r.maxdomains}
    other_end: dict[tuple[str, str], str] = {}
    for a, leaf, b in r.forest_edges:
        other_end[(a, leaf)] = b
        other_end[(b, leaf)] = a

    ends: list[tuple[str, str]] = []

    def walk(mid: str, entry_leaf: Optional[str]) -> None:
        cyc = cycles[mid]
        if entry_leaf is None:
            start, steps = 0, len(cyc)
        else:
            start = cyc.index(("edge", entry_leaf)) + 1
            steps = len(cyc) - 1
        for k in range(steps):
            item = cyc[(start + k) % len(cyc)]
            if item[0] == "end":
                ends.append((item[1], item[2]))
            else:
                walk(other_end[(mid, item[1])], item[1])

    for comp in forest_components(r):
        walk(comp[0], None)
    return BoundaryOrder(ends=tuple(ends))


def ends_interleave(b: BoundaryOrder, a: str, c: str) -> bool:
    """True when the two ends of one orbit separate the two ends of the other."""
    positions = {end: i for i, end in enumerate(b.ends)}
    pa = sorted((positions[(a, BACKWARD)], positions[(a, FORWARD)]))
    inside = [p for p in (positions[(c, BACKWARD)], positions[(c, FORWARD)]) if pa[0] < p < pa[1]]
    return len(inside) == 1


def interleaving_matrix(b: BoundaryOrder) -> CrossingMatrix:
    orbits = tuple(sorted({orbit for orbit, _kind in b.ends}))
    entries = []
    for i, a in enumerate(orbits):
        for c in orbits[i + 1 :]:
            if ends_interleave(b, a, c):
                entries.append(PairEntry(a, c, 1, None))
    return CrossingMatrix(orbits=orbits, entries=tuple(entries))


def weak_matrix(s: Scenario) -> CrossingMatrix:
    """Pairwise weak-transverse indicator in the same matrix shape."""
    orbits = tuple(sorted(o.id for o in s.orbits))
    entries = []
    for i, a in enumerate(orbits):
        for b in orbits[i + 1 :]:
            if weak_transverse(s, a, b):
                entries.append(PairEntry(a, b, 1, None))
    return CrossingMatrix(orbits=orbits, entries=tuple(entries))


def realize(s: Scenario) -> tuple[ReducedStructure, CrossingMatrix, BoundaryOrder]:
    """Convenience bundle used by the CLI and the check suite."""
    r = reduce_scenario(s)
    return r, crossing_matrix(s, r), boundary_order(s, r)
