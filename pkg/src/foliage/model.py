"""Scenario data model: parsing, validation and canonical emission.

A scenario is a finite skeleton forest of leaf domains together with a set
of orbits.  Each domain carries two boundary lists, ``left`` and ``right``,
holding the named boundary leaves in ascending transverse order (index 0 is
the minimum).  A leaf appearing in the ``left`` list of one domain and the
``right`` list of another induces a directed edge between the two domains;
orbits are directed paths in that forest, decorated with an entry cut, an
exit cut and a tie rank.

Everything downstream consumes only scenarios that passed :func:`validate`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional


class FoliageError(Exception):
    """Base class for all errors raised by this package."""


class ScenarioParseError(FoliageError):
    """Raised when a scenario document cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InvalidScenarioError(FoliageError):
    """Raised when an operation requires a valid scenario but validation failed."""

    def __init__(self, report: "ValidationReport"):
        lines = "; ".join(f.message for f in report.findings)
        super().__init__(f"invalid scenario: {lines}")
        self.report = report


@dataclass(frozen=True)
class SkeletonDomain:
    """One leaf domain of the skeleton, with ordered boundary lists."""

    id: str
    left: tuple[str, ...] = ()
    right: tuple[str, ...] = ()


@dataclass(frozen=True)
class Orbit:
    """An orbit: a directed domain/leaf path plus cut data.

    ``path`` alternates domain ids (even positions) and crossing-leaf ids
    (odd positions) and has odd length.  ``entry_cut`` splits the right
    list of the first domain, ``exit_cut`` the left list of the last one;
    the prefix before the cut is the top part.  ``tie_rank`` breaks ties
    between orbits that are equivalent in both directions.
    """

    id: str
    path: tuple[str, ...]
    entry_cut: int = 0
    exit_cut: int = 0
    tie_rank: int = 0

    @property
    def domains(self) -> tuple[str, ...]:
        return self.path[0::2]

    @property
    def crossings(self) -> tuple[str, ...]:
        return self.path[1::2]

    @property
    def alpha(self) -> str:
        return self.path[0]

    @property
    def omega(self) -> str:
        return self.path[-1]


@dataclass(frozen=True)
class Scenario:
    domains: tuple[SkeletonDomain, ...]
    orbits: tuple[Orbit, ...]
    _valid: bool = field(default=False, init=False, compare=False, repr=False)


@dataclass(frozen=True)
class Finding:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioParseError(message)


def _check_fields(obj: dict, allowed: set[str], what: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioParseError(f"unknown field {key!r} in {what}")


def _leaf_list(raw: object, what: str) -> tuple[str, ...]:
    _require(isinstance(raw, list), f"{what} must be an array")
    out = []
    for item in raw:  # type: ignore[union-attr]
        _require(isinstance(item, str) and item, f"{what} entries must be non-empty strings")
        out.append(item)
    return tuple(out)


def _int_field(obj: dict, key: str, what: str) -> int:
    raw = obj.get(key, 0)
    _require(isinstance(raw, int) and not isinstance(raw, bool), f"{key} of {what} must be an integer")
    return raw


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario document.

    Performs structural checks only (well-formed JSON, known fields, unique
    ids, resolvable path references); the semantic invariants are the job
    of :func:`validate`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from exc
    _require(isinstance(doc, dict), "top level must be an object")
    _check_fields(doc, {"domains", "orbits"}, "scenario")
    raw_domains = doc.get("domains", [])
    raw_orbits = doc.get("orbits", [])
    _require(isinstance(raw_domains, list), "domains must be an array")
    _require(isinstance(raw_orbits, list), "orbits must be an array")

    domains: list[SkeletonDomain] = []
    seen_domains: set[str] = set()
    for raw in raw_domains:
        _require(isinstance(raw, dict), "each domain must be an object")
        _check_fields(raw, {"id", "left", "right"}, "domain")
        did = raw.get("id")
        _require(isinstance(did, str) and did != "", "domain id must be a non-empty string")
        if did in seen_domains:
            raise ScenarioParseError(f"duplicate id {did!r}")
        seen_domains.add(did)
        domains.append(
            SkeletonDomain(
                id=did,
                left=_leaf_list(raw.get("left", []), f"left of {did!r}"),
                right=_leaf_list(raw.get("right", []), f"right of {did!r}"),
            )
        )

    declared_leaves = {leaf for d in domains for leaf in d.left + d.right}

    orbits: list[Orbit] = []
    seen_orbits: set[str] = set()
    for raw in raw_orbits:
        _require(isinstance(raw, dict), "each orbit must be an object")
        _check_fields(raw, {"id", "path", "entry_cut", "exit_cut", "tie_rank"}, "orbit")
        oid = raw.get("id")
        _require(isinstance(oid, str) and oid != "", "orbit id must be a non-empty string")
        if oid in seen_orbits:
            raise ScenarioParseError(f"duplicate id {oid!r}")
        seen_orbits.add(oid)
        path = _leaf_list(raw.get("path", []), f"path of {oid!r}")
        _require(len(path) >= 1 and len(path) % 2 == 1, f"path of {oid!r} must alternate domain, leaf, ... with odd length")
        for pos, name in enumerate(path):
            if pos % 2 == 0:
                if name not in seen_domains:
                    raise ScenarioParseError(f"unknown domain {name!r} in path of {oid!r}")
            elif name not in declared_leaves:
                raise ScenarioParseError(f"unknown leaf {name!r} in path of {oid!r}")
        orbits.append(
            Orbit(
                id=oid,
                path=path,
                entry_cut=_int_field(raw, "entry_cut", oid),
                exit_cut=_int_field(raw, "exit_cut", oid),
                tie_rank=_int_field(raw, "tie_rank", oid),
            )
        )

    return Scenario(domains=tuple(domains), orbits=tuple(orbits))


def emit_scenario(s: Scenario) -> str:
    """Serialize canonically: sorted keys, declaration-order arrays, LF."""
    doc = {
        "domains": [
            {"id": d.id, "left": list(d.left), "right": list(d.right)} for d in s.domains
        ],
        "orbits": [
            {
                "entry_cut": o.entry_cut,
                "exit_cut": o.exit_cut,
                "id": o.id,
                "path": list(o.path),
                "tie_rank": o.tie_rank,
            }
            for o in s.orbits
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> bool:
        """Join the classes of a and b; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def derived_edges(s: Scenario) -> tuple[tuple[str, str, str], ...]:
    """All triples (D, leaf, D') with leaf in left(D) and right(D')."""
    left_owner: dict[str, str] = {}
    right_owner: dict[str, str] = {}
    for d in s.domains:
        for leaf in d.left:
            left_owner.setdefault(leaf, d.id)
        for leaf in d.right:
            right_owner.setdefault(leaf, d.id)
    edges = []
    for leaf in sorted(set(left_owner) & set(right_owner)):
        edges.append((left_owner[leaf], leaf, right_owner[leaf]))
    return tuple(edges)


def validate(s: Scenario) -> ValidationReport:
    """Check every model invariant; findings are data, never exceptions."""
    findings: list[Finding] = []

    def add(code: str, message: str) -> None:
        findings.append(Finding(code, message))

    seen_domain_ids: set[str] = set()
    for d in s.domains:
        if not d.id:
            add("empty-id", "domain with empty id")
        if d.id in seen_domain_ids:
            add("duplicate-id", f"duplicate domain id {d.id!r}")
        seen_domain_ids.add(d.id)
        members = list(d.left) + list(d.right)
        if len(members) != len(set(members)):
            add("boundary-repeat", f"leaf repeated within the boundary of {d.id!r}")

    left_owner: dict[str, str] = {}
    right_owner: dict[str, str] = {}
    for d in s.domains:
        for leaf in d.left:
            if leaf in left_owner and left_owner[leaf] != d.id:
                add("left-reuse", f"leaf {leaf!r} appears in the left list of {left_owner[leaf]!r} and {d.id!r}")
            left_owner.setdefault(leaf, d.id)
        for leaf in d.right:
            if leaf in right_owner and right_owner[leaf] != d.id:
                add("right-reuse", f"leaf {leaf!r} appears in the right list of {right_owner[leaf]!r} and {d.id!r}")
            right_owner.setdefault(leaf, d.id)

    # Derived edges must leave the undirected domain graph acyclic.
    uf = _UnionFind(d.id for d in s.domains)
    edge_set: set[tuple[str, str, str]] = set()
    for leaf in sorted(set(left_owner) & set(right_owner)):
        a, b = left_owner[leaf], right_owner[leaf]
        edge_set.add((a, leaf, b))
        if a == b or not uf.union(a, b):
            add("forest-violation", f"forest violation: leaf {leaf!r} closes a cycle through {a!r} and {b!r}")

    domain_by_id = {d.id: d for d in s.domains}
    seen_orbit_ids: set[str] = set()
    for o in s.orbits:
        if not o.id:
            add("empty-id", "orbit with empty id")
        if o.id in seen_orbit_ids:
            add("duplicate-id", f"duplicate orbit id {o.id!r}")
        seen_orbit_ids.add(o.id)
        if len(o.path) % 2 == 0 or not o.path:
            add("path-alternation", f"path of {o.id!r} must have odd length")
            continue
        bad = False
        for pos, name in enumerate(o.path):
            if pos % 2 == 0 and name not in domain_by_id:
                add("unknown-domain", f"unknown domain {name!r} in path of {o.id!r}")
                bad = True
        if bad:
            continue
        for i in range(1, len(o.path) - 1, 2):
            triple = (o.path[i - 1], o.path[i], o.path[i + 1])
            if triple not in edge_set:
                add("not-an-edge", f"path of {o.id!r} uses {triple[1]!r} which does not join {triple[0]!r} to {triple[2]!r}")
        if len(set(o.domains)) != len(o.domains):
            add("domain-revisit", f"path of {o.id!r} visits a domain twice")
        first, last = domain_by_id[o.alpha], domain_by_id[o.omega]
        if not 0 <= o.entry_cut <= len(first.right):
            add("cut-out-of-range", f"cut out of range: entry_cut {o.entry_cut} of {o.id!r} over {len(first.right)} leaves")
        if not 0 <= o.exit_cut <= len(last.left):
            add("cut-out-of-range", f"cut out of range: exit_cut {o.exit_cut} of {o.id!r} over {len(last.left)} leaves")

    findings.sort(key=lambda f: (f.code, f.message))
    report = ValidationReport(tuple(findings))
    if report.ok:
        object.__setattr__(s, "_valid", True)
    return report


def require_valid(s: Scenario) -> None:
    """Precondition helper: validate once, then trust the cached mark."""
    if s._valid:
        return
    report = validate(s)
    if not report.ok:
        raise InvalidScenarioError(report)


class ScenarioIndex:
    """Derived lookup tables for one validated scenario."""

    def __init__(self, s: Scenario):
        require_valid(s)
        self.scenario = s
        self.domain_by_id = {d.id: d for d in s.domains}
        self.orbit_by_id = {o.id: o for o in s.orbits}
        self.left_owner = {leaf: d.id for d in s.domains for leaf in d.left}
        self.right_owner = {leaf: d.id for d in s.domains for leaf in d.right}
        self.edges = derived_edges(s)
        self.edge_by_leaf = {leaf: (a, b) for a, leaf, b in self.edges}
        self.domain_orbits: dict[str, frozenset[str]] = {}
        self.leaf_orbits: dict[str, frozenset[str]] = {}
        dom_acc: dict[str, set[str]] = {d.id: set() for d in s.domains}
        leaf_acc: dict[str, set[str]] = {}
        self.domain_pos: dict[str, dict[str, int]] = {}
        for o in s.orbits:
            self.domain_pos[o.id] = {}
            for pos, name in enumerate(o.path):
                if pos % 2 == 0:
                    dom_acc[name].add(o.id)
                    self.domain_pos[o.id][name] = pos
                else:
                    leaf_acc.setdefault(name, set()).add(o.id)
        self.domain_orbits = {k: frozenset(v) for k, v in dom_acc.items()}
        self.leaf_orbits = {k: frozenset(v) for k, v in leaf_acc.items()}

    def orbits_crossing(self, leaf: str) -> frozenset[str]:
        return self.leaf_orbits.get(leaf, frozenset())


@lru_cache(maxsize=256)
def index(s: Scenario) -> ScenarioIndex:
    return ScenarioIndex(s)


FIXTURE_NAMES = ("S0", "S1", "S2", "S3", "S4")


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise FoliageError(f"unknown fixture {name!r}")
    return resources.files("foliage.fixtures").joinpath(f"{name}.json").read_text("utf-8")


def fixture(name: str) -> Scenario:
    s = parse_scenario(fixture_text(name))
    require_valid(s)
    return s
