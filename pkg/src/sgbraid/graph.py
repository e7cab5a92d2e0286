"""Finite edge-oriented multigraphs and their combinatorial invariants.

Besides ordinary vertices and directed edges, a graph may carry *circles*:
vertex-free closed components.  They appear when a diagram contains link
components without vertices (a closed braid, a round unknot).  A circle
contributes 0 to the Euler characteristic and counts as an oriented cycle.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass, field

ID_RE = re.compile(r"^[A-Za-z0-9_]+$")


class GraphError(ValueError):
    """Malformed graph document or inconsistent graph data."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def natural_key(name: str) -> tuple:
    """Sort key treating digit runs numerically, so e2 < e10."""
    return tuple(int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name))


def sorted_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=natural_key)


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class OrientedGraph:
    vertices: frozenset[str]
    edges: tuple[Edge, ...]
    circles: frozenset[str] = frozenset()
    name: str = "G"
    _by_id: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        seen: set[str] = set()
        for e in self.edges:
            if e.id in seen or e.id in self.circles:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            for end in (e.tail, e.head):
                if end not in self.vertices:
                    raise GraphError(f"edge {e.id!r} names unknown vertex {end!r}")
        clash = self.circles & self.vertices
        if clash:
            raise GraphError(f"id used as vertex and circle: {sorted_ids(clash)[0]!r}")
        object.__setattr__(self, "_by_id", {e.id: e for e in self.edges})

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]],
              circles: Iterable[str] = (), name: str = "G") -> OrientedGraph:
        verts = list(vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex id")
        return cls(frozenset(verts), tuple(Edge(*e) for e in edges), frozenset(circles), name)

    def edge(self, eid: str) -> Edge:
        return self._by_id[eid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._by_id or eid in self.circles

    @property
    def edge_ids(self) -> list[str]:
        return [e.id for e in self.edges]

    def isolated_vertices(self) -> list[str]:
        touched = {e.tail for e in self.edges} | {e.head for e in self.edges}
        return sorted_ids(self.vertices - touched)

    def normalized(self) -> OrientedGraph:
        edges = sorted(self.edges, key=lambda e: natural_key(e.id))
        return OrientedGraph(self.vertices, tuple(edges), self.circles, self.name)

    def is_empty(self) -> bool:
        return not self.vertices and not self.circles


# ---------------------------------------------------------------- .sgg format

def parse_graph(text: str) -> OrientedGraph:
    """Parse the line-oriented ``.sgg`` format."""
    name = "G"
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    circles: list[str] = []
    seen_ids: set[str] = set()
    declared: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip().rstrip(";").strip()
        if not line:
            continue
        for stmt in line.split(";"):
            toks = stmt.split()
            if not toks:
                continue
            kind, args = toks[0], toks[1:]
            for a in args:
                if not ID_RE.match(a):
                    raise GraphError(f"bad identifier {a!r}", lineno)
            if kind == "graph" and len(args) == 1:
                name = args[0]
            elif kind == "vertex" and len(args) == 1:
                if args[0] in declared:
                    raise GraphError(f"duplicate vertex id {args[0]!r}", lineno)
                declared.add(args[0])
                vertices.append(args[0])
            elif kind == "edge" and len(args) == 3:
                if args[0] in seen_ids:
                    raise GraphError(f"duplicate edge id {args[0]!r}", lineno)
                seen_ids.add(args[0])
                for end in args[1:]:
                    if end not in declared:
                        raise GraphError(f"dangling endpoint {end!r} of edge {args[0]!r}", lineno)
                edges.append((args[0], args[1], args[2]))
            elif kind == "circle" and len(args) == 1:
                if args[0] in seen_ids:
                    raise GraphError(f"duplicate edge id {args[0]!r}", lineno)
                seen_ids.add(args[0])
                circles.append(args[0])
            else:
                raise GraphError(f"syntax error: {stmt.strip()!r}", lineno)
    return OrientedGraph.build(vertices, edges, circles, name)


def serialize_graph(g: OrientedGraph) -> str:
    lines = [f"graph {g.name}"]
    lines += [f"vertex {v}" for v in sorted_ids(g.vertices)]
    lines += [f"edge {e.id} {e.tail} {e.head}" for e in g.normalized().edges]
    lines += [f"circle {c}" for c in sorted_ids(g.circles)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- invariants

@dataclass(frozen=True)
class DegreeProfile:
    indeg: dict[str, int]
    outdeg: dict[str, int]
    sources: list[str]
    sinks: list[str]


def degree_profile(g: OrientedGraph) -> DegreeProfile:
    # a loop counts once toward each of indeg and outdeg
    indeg = {v: 0 for v in g.vertices}
    outdeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        outdeg[e.tail] += 1
        indeg[e.head] += 1
    order = sorted_ids(g.vertices)
    return DegreeProfile(indeg, outdeg,
                         [v for v in order if indeg[v] == 0],
                         [v for v in order if outdeg[v] == 0])


def euler_characteristic(g: OrientedGraph) -> int:
    return len(g.vertices) - len(g.edges)


def is_circulating(g: OrientedGraph) -> bool:
    prof = degree_profile(g)
    return all(prof.indeg[v] == prof.outdeg[v] for v in g.vertices)


def components(g: OrientedGraph) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Connected components as (vertex set, edge-id set); circles are singleton components."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        ra, rb = find(e.tail), find(e.head)
        if ra != rb:
            parent[rb] = ra
    groups: dict[str, tuple[set, set]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), (set(), set()))[0].add(v)
    for e in g.edges:
        groups[find(e.tail)][1].add(e.id)
    out = [(frozenset(vs), frozenset(es)) for vs, es in groups.values()]
    out += [(frozenset(), frozenset([c])) for c in g.circles]
    return sorted(out, key=lambda c: natural_key(min(sorted_ids(c[0] | c[1]), key=natural_key)))


@dataclass(frozen=True)
class CycleReport:
    has_unoriented_cycle: bool
    oriented_cycles: list[list[str]]
    truncated: bool


def _rotate_min(cycle: list[str]) -> list[str]:
    i = min(range(len(cycle)), key=lambda k: natural_key(cycle[k]))
    return cycle[i:] + cycle[:i]


def find_cycles(g: OrientedGraph, limit: int = 100) -> CycleReport:
    """Detect unoriented cycles and enumerate simple directed cycles.

    Directed cycles are returned as edge-id sequences rotated to start at their
    smallest id, ordered by their sorted id tuples.  At most ``limit`` are
    returned; ``truncated`` reports whether more exist.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    forest = {v: v for v in g.vertices}

    def find(x):
        while forest[x] != x:
            forest[x] = forest[forest[x]]
            x = forest[x]
        return x

    has_cycle = bool(g.circles)
    for e in g.edges:
        ra, rb = find(e.tail), find(e.head)
        if ra == rb:
            has_cycle = True
        else:
            forest[rb] = ra

    out_edges: dict[str, list[Edge]] = {v: [] for v in g.vertices}
    for e in sorted(g.edges, key=lambda e: natural_key(e.id)):
        out_edges[e.tail].append(e)
    order = sorted_ids(g.vertices)
    rank = {v: i for i, v in enumerate(order)}
    # generous cap so that sorting before truncation stays meaningful
    cap = max(limit * 50, 5000)
    found: list[list[str]] = [[c] for c in g.circles]

    for start in order:
        stack = [(start, iter(out_edges[start]))]
        path: list[str] = []
        on_path = {start}
        while stack and len(found) <= cap:
            v, it = stack[-1]
            e = next(it, None)
            if e is None:
                stack.pop()
                if path:
                    on_path.discard(v)
                    path.pop()
                continue
            w = e.head
            if w == start:
                found.append(path + [e.id])
            elif rank[w] > rank[start] and w not in on_path:
                on_path.add(w)
                path.append(e.id)
                stack.append((w, iter(out_edges[w])))
    cycles = [_rotate_min(c) for c in found]
    cycles.sort(key=lambda c: [natural_key(x) for x in sorted_ids(c)])
    truncated = len(cycles) > limit
    return CycleReport(has_cycle, cycles[:limit], truncated)


def graphs_equal_labeled(g: OrientedGraph, h: OrientedGraph) -> bool:
    """Label-preserving equality; isomorphic but relabelled graphs compare unequal."""
    if g.vertices != h.vertices or g.circles != h.circles:
        return False
    ge = {e.id: (e.tail, e.head) for e in g.edges}
    he = {e.id: (e.tail, e.head) for e in h.edges}
    return ge == he


def cycle_vertices(g: OrientedGraph, cycle: Iterable[str]) -> set[str]:
    vs: set[str] = set()
    for eid in cycle:
        if eid in g.circles:
            continue
        e = g.edge(eid)
        vs.update((e.tail, e.head))
    return vs


def is_cycle(g: OrientedGraph, edge_set: Iterable[str]) -> bool:
    """True iff the edges form a single cycle ignoring orientation."""
    es = list(dict.fromkeys(edge_set))
    if not es or any(not g.has_edge(x) for x in es):
        return False
    if any(x in g.circles for x in es):
        return len(es) == 1
    deg: dict[str, int] = {}
    for x in es:
        e = g.edge(x)
        deg[e.tail] = deg.get(e.tail, 0) + 1
        deg[e.head] = deg.get(e.head, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    sub = OrientedGraph.build(deg, [(x, g.edge(x).tail, g.edge(x).head) for x in es])
    return len(components(sub)) == 1


def is_directed_cycle(g: OrientedGraph, edge_set: Iterable[str]) -> bool:
    es = list(dict.fromkeys(edge_set))
    if not is_cycle(g, es):
        return False
    if len(es) == 1:
        return True
    outs = {g.edge(x).tail for x in es}
    ins = {g.edge(x).head for x in es}
    return len(outs) == len(es) and outs == ins


def cycle_sources(g: OrientedGraph, edge_set: Iterable[str]) -> int:
    """Number of vertices of the cycle with no incoming cycle edge."""
    es = [x for x in edge_set if x not in g.circles]
    vs = cycle_vertices(g, es)
    heads = {g.edge(x).head for x in es}
    return len(vs - heads)
