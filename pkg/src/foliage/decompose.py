"""Crossed-leaf sets, common subpaths and the maximal-domain decomposition.

A connecting leaf between two skeleton domains is absorbed into a merged
maximal domain exactly when the orbit sets crossing the leaf and both of
its neighbouring domains coincide and are non-empty; every other crossed
connecting leaf is critical and becomes an edge of the reduced forest.
Skeleton domains crossed by no orbit are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .model import FoliageError, Scenario, _UnionFind, index, require_valid


@dataclass(frozen=True)
class CrossedSet:
    """An orbit's path split into its domain and crossing-leaf sequences."""

    orbit: str
    domains: tuple[str, ...]
    crossings: tuple[str, ...]
    alpha: str
    omega: str


@dataclass(frozen=True)
class CommonSubpath:
    """The maximal contiguous run of domains shared by two orbit paths."""

    first: str
    last: str
    chain: tuple[str, ...]


@dataclass(frozen=True)
class MaxDomain:
    """A maximal chain of skeleton domains crossed by one orbit set.

    ``left``/``right`` are the boundary lists of the chain's last and first
    element; ``internal`` holds the merged connecting leaves in chain order
    and ``shed`` the remaining boundary leaves of interior chain positions.
    """

    id: str
    chain: tuple[str, ...]
    left: tuple[str, ...]
    right: tuple[str, ...]
    crossers: frozenset[str]
    internal: tuple[str, ...] = ()
    shed: tuple[str, ...] = ()


@dataclass(frozen=True)
class Roles:
    alpha: frozenset[str]
    omega: frozenset[str]
    incoming: frozenset[str]
    outgoing: frozenset[str]


@dataclass(frozen=True)
class ReducedStructure:
    maxdomains: tuple[MaxDomain, ...]
    critical: frozenset[str]
    forest_edges: tuple[tuple[str, str, str], ...]
    roles: tuple[tuple[str, Roles], ...]

    def maxdomain(self, mid: str) -> MaxDomain:
        for m in self.maxdomains:
            if m.id == mid:
                return m
        raise FoliageError(f"unknown maximal domain {mid!r}")

    def roles_of(self, mid: str) -> Roles:
        for key, roles in self.roles:
            if key == mid:
                return roles
        raise FoliageError(f"unknown maximal domain {mid!r}")

    def membership(self) -> dict[str, str]:
        """Map each surviving skeleton domain to its maximal domain id."""
        return {d: m.id for m in self.maxdomains for d in m.chain}


def crossed_set(s: Scenario, orbit_id: str) -> CrossedSet:
    idx = index(s)
    if orbit_id not in idx.orbit_by_id:
        raise FoliageError(f"unknown orbit {orbit_id!r}")
    o = idx.orbit_by_id[orbit_id]
    return CrossedSet(orbit=o.id, domains=o.domains, crossings=o.crossings, alpha=o.alpha, omega=o.omega)


def common_subpath(s: Scenario, a: str, b: str) -> Optional[CommonSubpath]:
    """Shared domain run of two orbits, or None when they are separated."""
    idx = index(s)
    oa, ob = idx.orbit_by_id[a], idx.orbit_by_id[b]
    shared = set(oa.domains) & set(ob.domains)
    if not shared:
        return None
    run_a = [d for d in oa.domains if d in shared]
    run_b = [d for d in ob.domains if d in shared]
    # Paths of a forest meet in one contiguous run traversed the same way.
    pos_a = {d: i for i, d in enumerate(oa.domains)}
    pos_b = {d: i for i, d in enumerate(ob.domains)}
    start_a, start_b = pos_a[run_a[0]], pos_b[run_b[0]]
    if run_a != run_b or any(pos_a[d] != start_a + k for k, d in enumerate(run_a)) or any(
        pos_b[d] != start_b + k for k, d in enumerate(run_b)
    ):
        raise FoliageError(f"orbits {a!r} and {b!r} share a non-contiguous domain set")
    return CommonSubpath(first=run_a[0], last=run_a[-1], chain=tuple(run_a))


def _mergeable(idx, edge: tuple[str, str, str]) -> bool:
    a, leaf, b = edge
    orbs = idx.leaf_orbits.get(leaf, frozenset())
    return bool(orbs) and orbs == idx.domain_orbits[a] == idx.domain_orbits[b]


@lru_cache(maxsize=256)
def reduce_scenario(s: Scenario) -> ReducedStructure:
    """Partition the crossed skeleton into maximal domains and critical leaves."""
    require_valid(s)
    idx = index(s)
    crossed = [d for d in s.domains if idx.domain_orbits[d.id]]
    uf = _UnionFind(d.id for d in crossed)
    merge_edges = [e for e in idx.edges if _mergeable(idx, e)]
    for a, _leaf, b in merge_edges:
        uf.union(a, b)

    components: dict[str, list[str]] = {}
    for d in crossed:
        components.setdefault(uf.find(d.id), []).append(d.id)

    succ = {a: (leaf, b) for a, leaf, b in merge_edges}
    has_pred = {b for _a, _leaf, b in merge_edges}
    maxdomains: list[MaxDomain] = []
    membership: dict[str, str] = {}
    for ids in components.values():
        starts = [d for d in ids if d not in has_pred]
        if len(starts) != 1:
            raise FoliageError("merged component is not a simple chain")
        chain = [starts[0]]
        internal: list[str] = []
        while chain[-1] in succ:
            leaf, nxt = succ[chain[-1]]
            internal.append(leaf)
            chain.append(nxt)
        if set(chain) != set(ids):
            raise FoliageError("merged component is not a simple chain")
        first, last = idx.domain_by_id[chain[0]], idx.domain_by_id[chain[-1]]
        shed = sorted(
            (
                {leaf for d in chain[:-1] for leaf in idx.domain_by_id[d].left}
                | {leaf for d in chain[1:] for leaf in idx.domain_by_id[d].right}
            )
            - set(internal)
        )
        mid = "M:" + "+".join(chain)
        maxdomains.append(
            MaxDomain(
                id=mid,
                chain=tuple(chain),
                left=last.left,
                right=first.right,
                crossers=idx.domain_orbits[chain[0]],
                internal=tuple(internal),
                shed=tuple(shed),
            )
        )
        for d in chain:
            membership[d] = mid
    maxdomains.sort(key=lambda m: m.id)

    critical = frozenset(
        leaf for a, leaf, b in idx.edges if idx.leaf_orbits.get(leaf) and not _mergeable(idx, (a, leaf, b))
    )
    forest_edges = tuple(
        sorted((membership[a], leaf, membership[b]) for a, leaf, b in idx.edges if leaf in critical)
    )

    roles = []
    for m in maxdomains:
        chain_set = set(m.chain)
        alpha = frozenset(o for o in m.crossers if idx.orbit_by_id[o].alpha in chain_set)
        omega = frozenset(o for o in m.crossers if idx.orbit_by_id[o].omega in chain_set)
        roles.append((m.id, Roles(alpha=alpha, omega=omega, incoming=m.crossers - alpha, outgoing=m.crossers - omega)))

    return ReducedStructure(
        maxdomains=tuple(maxdomains),
        critical=critical,
        forest_edges=forest_edges,
        roles=tuple(roles),
    )


def domain_roles(r: ReducedStructure, mid: str) -> Roles:
    return r.roles_of(mid)
