"""Sliced diagrams: a diagram read top to bottom as a list of elementary events.

The events act on an ordered row of strand points.  Each point carries the
edge it belongs to and its direction of travel (``"d"`` downward, i.e. toward
later events, or ``"u"`` upward).  Positions are 1-based and refer to the row
at the moment the event is applied.

Vertex rotation convention: the counterclockwise cyclic order at a vertex is
its out-edges left to right along the bottom followed by its in-edges right to
left along the top.
"""

from __future__ import annotations

import os
import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Union

from .graph import (
    GraphError,
    OrientedGraph,
    is_cycle,
    natural_key,
    parse_graph,
    sorted_ids,
)

DOWN, UP = "d", "u"


class SlicedError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidDiagram(ValueError):
    """Raised by operations that require a valid diagram."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


@dataclass(frozen=True)
class Max:
    pos: int
    edge: str
    down: str  # "left" or "right": which of the two new points travels down

    def __str__(self):
        return f"max {self.pos} {self.edge} down={self.down}"


@dataclass(frozen=True)
class Min:
    pos: int
    edge: str

    def __str__(self):
        return f"min {self.pos} {self.edge}"


@dataclass(frozen=True)
class Cross:
    pos: int
    over: str  # "l": the strand entering at the left position passes over

    def __str__(self):
        return f"x {self.pos} over={self.over}"


@dataclass(frozen=True)
class Vtx:
    vertex: str
    pos: int
    ins: tuple[str, ...]
    outs: tuple[str, ...]

    def __str__(self):
        return f"vtx {self.vertex} {self.pos} in=({','.join(self.ins)}) out=({','.join(self.outs)})"


Event = Union[Max, Min, Cross, Vtx]


@dataclass(frozen=True)
class SlicedDiagram:
    graph: OrientedGraph
    events: tuple
    name: str = "D"

    def with_events(self, events: Iterable[Event], graph: OrientedGraph | None = None) -> SlicedDiagram:
        return SlicedDiagram(graph if graph is not None else self.graph, tuple(events), self.name)

    def key(self) -> str:
        """Canonical key of the event list, used for deduplication."""
        return "\n".join(str(ev) for ev in self.events)

    @property
    def crossing_indices(self) -> list[int]:
        return [k for k, ev in enumerate(self.events) if isinstance(ev, Cross)]


# ---------------------------------------------------------------- simulation

@dataclass
class Interval:
    """A strand point's lifetime between two events."""
    id: int
    edge: str
    dir: str
    top: int      # index of the creating event
    bottom: int = -1  # index of the consuming event


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    event_index: int | None = None
    kind: str = ""
    message: str = ""

    def __str__(self):
        if self.ok:
            return "valid"
        where = f"event {self.event_index + 1}: " if self.event_index is not None else ""
        return f"{where}{self.kind}: {self.message}"

    def as_dict(self) -> dict:
        return {"ok": self.ok,
                "event": None if self.event_index is None else self.event_index + 1,
                "kind": self.kind, "message": self.message}


class _Violation(Exception):
    def __init__(self, index, kind, message):
        self.report = ValidationReport(False, index, kind, message)


@dataclass
class Trace:
    """Result of simulating a diagram.

    ``rows[k]`` is the list of interval ids present just before event ``k``
    (``rows[len(events)]`` is the final, empty row).  ``conn`` maps an interval
    end ``(iid, "top"|"bot")`` to the end it is glued to, or to
    ``("vertex", v)``.
    """
    intervals: list[Interval]
    rows: list[list[int]]
    conn: dict
    created: list[list[int]] = field(default_factory=list)
    consumed: list[list[int]] = field(default_factory=list)


def _simulate(S: SlicedDiagram) -> Trace:
    g = S.graph
    intervals: list[Interval] = []
    row: list[int] = []
    rows: list[list[int]] = []
    conn: dict = {}
    created_all: list[list[int]] = []
    consumed_all: list[list[int]] = []
    seen_vertices: set[str] = set()
    heads: dict[str, list[str]] = {v: [] for v in g.vertices}
    tails: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        heads[e.head].append(e.id)
        tails[e.tail].append(e.id)

    def new(edge, d, k):
        iv = Interval(len(intervals), edge, d, k)
        intervals.append(iv)
        return iv.id

    for k, ev in enumerate(S.events):
        rows.append(list(row))
        n = len(row)
        created: list[int] = []
        consumed: list[int] = []
        if isinstance(ev, Max):
            if not g.has_edge(ev.edge):
                raise _Violation(k, "unknown edge", ev.edge)
            if ev.down not in ("left", "right"):
                raise _Violation(k, "bad parameter", f"down={ev.down}")
            if not 1 <= ev.pos <= n + 1:
                raise _Violation(k, "position out of range", f"max at {ev.pos} on row of {n}")
            dl, dr = (DOWN, UP) if ev.down == "left" else (UP, DOWN)
            a, b = new(ev.edge, dl, k), new(ev.edge, dr, k)
            conn[(a, "top")] = (b, "top")
            conn[(b, "top")] = (a, "top")
            row[ev.pos - 1:ev.pos - 1] = [a, b]
            created = [a, b]
        elif isinstance(ev, Min):
            if not 1 <= ev.pos <= n - 1:
                raise _Violation(k, "position out of range", f"min at {ev.pos} on row of {n}")
            a, b = row[ev.pos - 1], row[ev.pos]
            ia, ib = intervals[a], intervals[b]
            if ia.edge != ev.edge or ib.edge != ev.edge:
                raise _Violation(k, "edge mismatch",
                                 f"min names {ev.edge} but row holds {ia.edge},{ib.edge}")
            if ia.dir == ib.dir:
                raise _Violation(k, "incoherent local minimum",
                                 "the two joined points travel in the same direction")
            conn[(a, "bot")] = (b, "bot")
            conn[(b, "bot")] = (a, "bot")
            del row[ev.pos - 1:ev.pos + 1]
            consumed = [a, b]
        elif isinstance(ev, Cross):
            if ev.over not in ("l", "r"):
                raise _Violation(k, "bad parameter", f"over={ev.over}")
            if not 1 <= ev.pos <= n - 1:
                raise _Violation(k, "position out of range", f"crossing at {ev.pos} on row of {n}")
            a, b = row[ev.pos - 1], row[ev.pos]
            ia, ib = intervals[a], intervals[b]
            bl, br = new(ib.edge, ib.dir, k), new(ia.edge, ia.dir, k)
            conn[(a, "bot")] = (br, "top")
            conn[(br, "top")] = (a, "bot")
            conn[(b, "bot")] = (bl, "top")
            conn[(bl, "top")] = (b, "bot")
            row[ev.pos - 1:ev.pos + 1] = [bl, br]
            consumed, created = [a, b], [bl, br]
        elif isinstance(ev, Vtx):
            v = ev.vertex
            if v not in g.vertices:
                raise _Violation(k, "unknown vertex", v)
            if v in seen_vertices:
                raise _Violation(k, "repeated vertex", f"vertex {v} has two events")
            seen_vertices.add(v)
            if sorted(ev.ins) != sorted(heads[v]) or sorted(ev.outs) != sorted(tails[v]):
                raise _Violation(k, "vertex degree mismatch",
                                 f"vertex {v} must consume {sorted_ids(heads[v])} and emit {sorted_ids(tails[v])}")
            kin = len(ev.ins)
            if not 1 <= ev.pos <= n - kin + 1:
                raise _Violation(k, "position out of range", f"vertex at {ev.pos} on row of {n}")
            block = row[ev.pos - 1:ev.pos - 1 + kin]
            for want, iid in zip(ev.ins, block):
                iv = intervals[iid]
                if iv.edge != want or iv.dir != DOWN:
                    raise _Violation(k, "vertex in-strand mismatch",
                                     f"expected {want} descending, found {iv.edge} {'descending' if iv.dir == DOWN else 'ascending'}")
                conn[(iid, "bot")] = ("vertex", v)
            outs = []
            for eid in ev.outs:
                o = new(eid, DOWN, k)
                conn[(o, "top")] = ("vertex", v)
                outs.append(o)
            row[ev.pos - 1:ev.pos - 1 + kin] = outs
            consumed, created = block, outs
        else:
            raise _Violation(k, "unknown event", repr(ev))
        for iid in consumed:
            intervals[iid].bottom = k
        created_all.append(created)
        consumed_all.append(consumed)
    rows.append(list(row))
    if row:
        raise _Violation(None, "unclosed row", f"{len(row)} strand points remain after the last event")
    missing = g.vertices - seen_vertices
    if missing:
        raise _Violation(None, "missing vertex", f"no event for vertex {sorted_ids(missing)[0]}")
    trace = Trace(intervals, rows, conn, created_all, consumed_all)
    _check_edge_paths(S, trace)
    return trace


def _check_edge_paths(S: SlicedDiagram, t: Trace) -> None:
    parent = list(range(len(t.intervals)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (iid, _), other in t.conn.items():
        if other[0] != "vertex":
            parent[find(iid)] = find(other[0])
    comps: dict[str, set[int]] = {}
    for iv in t.intervals:
        comps.setdefault(iv.edge, set()).add(find(iv.id))
    for eid in S.graph.edge_ids + sorted_ids(S.graph.circles):
        if eid not in comps:
            raise _Violation(None, "missing edge", f"edge {eid} has no strand")
        if len(comps[eid]) != 1:
            raise _Violation(None, "disconnected edge", f"edge {eid} is drawn as {len(comps[eid])} pieces")


def validate_sliced(S: SlicedDiagram) -> ValidationReport:
    """Run the row simulation and report the first violated invariant."""
    try:
        _simulate(S)
    except _Violation as v:
        return v.report
    iso = S.graph.isolated_vertices()
    if iso:
        return ValidationReport(False, None, "isolated vertex", f"vertex {iso[0]} has no edges")
    return ValidationReport(True)


def simulate(S: SlicedDiagram) -> Trace:
    """Simulate a diagram, raising InvalidDiagram on failure."""
    try:
        return _simulate(S)
    except _Violation as v:
        raise InvalidDiagram(v.report) from None


def underlying_graph(S: SlicedDiagram) -> OrientedGraph:
    """The abstract graph traced from the events."""
    simulate(S)
    vertices, edges, seen = [], [], set()
    tail, head = {}, {}
    for ev in S.events:
        if isinstance(ev, Vtx):
            vertices.append(ev.vertex)
            for e in ev.ins:
                head[e] = ev.vertex
            for e in ev.outs:
                tail[e] = ev.vertex
        elif isinstance(ev, (Max, Min)):
            seen.add(ev.edge)
    for e in sorted_ids(set(tail) | set(head)):
        edges.append((e, tail[e], head[e]))
    circles = seen - set(tail) - set(head)
    return OrientedGraph.build(vertices, edges, circles, S.graph.name)


# ---------------------------------------------------------------- strand tracing

@dataclass(frozen=True)
class Step:
    kind: str      # "vertex", "interval", "max", "min", "cross"
    ref: object    # vertex id, interval id or event index
    dir: str = ""  # for intervals: direction of travel


def _walk(t: Trace, iid: int, end_in: str, events) -> list[Step]:
    """Follow a strand entering interval ``iid`` at ``end_in`` until a vertex or closure."""
    steps: list[Step] = []
    start = (iid, end_in)
    while True:
        iv = t.intervals[iid]
        steps.append(Step("interval", iid, iv.dir))
        exit_end = "bot" if end_in == "top" else "top"
        nxt = t.conn[(iid, exit_end)]
        if nxt[0] == "vertex":
            steps.append(Step("vertex", nxt[1]))
            return steps
        ev_index = iv.bottom if exit_end == "bot" else iv.top
        ev = events[ev_index]
        steps.append(Step({Max: "max", Min: "min", Cross: "cross"}[type(ev)], ev_index))
        iid, end_in = nxt
        if (iid, end_in) == start:
            return steps


def trace_strands(S: SlicedDiagram) -> dict[str, list[Step]]:
    """For each edge, its chain of intervals and event incidences in travel order.

    Chains of edges start with the tail vertex and end with the head vertex.
    A circle's chain starts at its first interval in event order and ends just
    before returning there.
    """
    t = simulate(S)
    chains: dict[str, list[Step]] = {}
    for iv in t.intervals:
        if iv.edge in chains:
            continue
        if S.graph.has_edge(iv.edge) and iv.edge not in S.graph.circles:
            for cand in t.intervals:
                if cand.edge == iv.edge and t.conn.get((cand.id, "top"), (None,))[0] == "vertex":
                    v = t.conn[(cand.id, "top")][1]
                    chains[iv.edge] = [Step("vertex", v)] + _walk(t, cand.id, "top", S.events)
                    break
        else:
            end_in = "top" if iv.dir == DOWN else "bot"
            chains[iv.edge] = _walk(t, iv.id, end_in, S.events)
    return {e: chains[e] for e in sorted(chains, key=natural_key)}


# ---------------------------------------------------------------- crossings

def _cross_vectors(t: Trace, k: int) -> tuple[tuple[int, int], tuple[int, int], int, int]:
    """Direction vectors of the strand entering left (A) and right (B) at crossing k."""
    a, b = t.consumed[k]
    ia, ib = t.intervals[a], t.intervals[b]
    va = (1, -1) if ia.dir == DOWN else (-1, 1)
    vb = (-1, -1) if ib.dir == DOWN else (1, 1)
    return va, vb, a, b


def sign_of(under: tuple, over: tuple) -> int:
    """+1 iff a counterclockwise quarter turn of ``under`` points along ``over``."""
    c = under[0] * over[1] - under[1] * over[0]
    if c == 0:
        raise ValueError("parallel strands do not cross")
    return 1 if c > 0 else -1


def _crossing_sign(S: SlicedDiagram, t: Trace, k: int) -> int:
    va, vb, _, _ = _cross_vectors(t, k)
    if S.events[k].over == "l":
        return sign_of(vb, va)
    return sign_of(va, vb)


def crossing_sign(S: SlicedDiagram, index: int, trace: Trace | None = None) -> int:
    if not isinstance(S.events[index], Cross):
        raise ValueError(f"event {index + 1} is not a crossing")
    return _crossing_sign(S, trace or simulate(S), index)


def crossing_edges(t: Trace, k: int) -> tuple[str, str]:
    a, b = t.consumed[k]
    return t.intervals[a].edge, t.intervals[b].edge


def _check_disjoint_cycles(g: OrientedGraph, c1, c2) -> None:
    from .graph import cycle_vertices
    for c in (c1, c2):
        if not is_cycle(g, c):
            raise ValueError(f"not a cycle: {list(c)}")
    if set(c1) & set(c2) or cycle_vertices(g, c1) & cycle_vertices(g, c2):
        raise ValueError("cycles are not disjoint")


def linking_number(S: SlicedDiagram, cycle1: Iterable[str], cycle2: Iterable[str],
                   trace: Trace | None = None) -> int:
    c1, c2 = set(cycle1), set(cycle2)
    _check_disjoint_cycles(S.graph, c1, c2)
    t = trace or simulate(S)
    total = 0
    for k in S.crossing_indices:
        ea, eb = crossing_edges(t, k)
        if (ea in c1 and eb in c2) or (ea in c2 and eb in c1):
            total += _crossing_sign(S, t, k)
    if total % 2:
        raise AssertionError("odd crossing sum between disjoint closed curves")
    return total // 2


def critical_points(S: SlicedDiagram, cycle: Iterable[str]) -> int:
    """Local maxima plus local minima (height = event order) along a cycle."""
    c = set(cycle)
    if not is_cycle(S.graph, c):
        raise ValueError(f"not a cycle: {sorted_ids(c)}")
    return sum(1 for ev in S.events if isinstance(ev, (Max, Min)) and ev.edge in c)


@dataclass(frozen=True)
class UpwardArc:
    min_event: int
    max_event: int
    intervals: tuple[int, ...]


def upward_arcs(S: SlicedDiagram, trace: Trace | None = None) -> list[UpwardArc]:
    """Maximal ascending strand runs; each starts at a local minimum and ends at a local maximum."""
    t = trace or simulate(S)
    arcs = []
    for k, ev in enumerate(S.events):
        if not isinstance(ev, Min):
            continue
        iid = next(i for i in t.consumed[k] if t.intervals[i].dir == UP)
        run = [iid]
        while True:
            nxt = t.conn[(iid, "top")]
            top_ev = S.events[t.intervals[iid].top]
            if isinstance(top_ev, Max):
                arcs.append(UpwardArc(k, t.intervals[iid].top, tuple(run)))
                break
            iid = nxt[0]
            run.append(iid)
    return arcs


# ---------------------------------------------------------------- .sgs format

_EVENT_PATTERNS = {
    "max": re.compile(r"^max\s+(\d+)\s+(\w+)\s+down=(left|right)$"),
    "min": re.compile(r"^min\s+(\d+)\s+(\w+)$"),
    "x": re.compile(r"^x\s+(\d+)\s+over=(l|r)$"),
    "vtx": re.compile(r"^(?:vtx|vertex)\s+(\w+)\s+(\d+)\s+in=\(([\w,\s]*)\)\s+out=\(([\w,\s]*)\)$"),
}


def _id_list(s: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in s.split(",") if x.strip())


def parse_sliced(text: str, base_dir: str | None = None) -> SlicedDiagram:
    name = "D"
    graph: OrientedGraph | None = None
    graph_lines: list[str] = []
    inline = False
    events: list[Event] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip().rstrip(";").strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "sliced" and len(toks) == 2:
            name = toks[1]
        elif head == "use" and len(toks) == 3 and toks[1] == "graph":
            if toks[2] == "inline":
                inline = True
            else:
                path = toks[2] if base_dir is None else os.path.join(base_dir, toks[2])
                try:
                    with open(path, encoding="utf-8") as fh:
                        graph = parse_graph(fh.read())
                except OSError as exc:
                    raise SlicedError(f"cannot read graph {toks[2]!r}: {exc.strerror}", lineno)
                except GraphError as exc:
                    raise SlicedError(f"in graph {toks[2]!r}: {exc}", lineno)
        elif head in ("graph", "edge", "circle") or (head == "vertex" and len(toks) == 2):
            graph_lines.append(line)
        else:
            ev = None
            for kind, pat in _EVENT_PATTERNS.items():
                m = pat.match(line)
                if not m:
                    continue
                if kind == "max":
                    ev = Max(int(m[1]), m[2], m[3])
                elif kind == "min":
                    ev = Min(int(m[1]), m[2])
                elif kind == "x":
                    ev = Cross(int(m[1]), m[2])
                else:
                    ev = Vtx(m[1], int(m[2]), _id_list(m[3]), _id_list(m[4]))
                break
            if ev is None:
                raise SlicedError(f"syntax error: {line!r}", lineno)
            events.append((lineno, ev))
    if graph_lines:
        if graph is not None:
            raise SlicedError("graph given both inline and by reference")
        try:
            graph = parse_graph("\n".join(graph_lines))
        except GraphError as exc:
            raise SlicedError(f"inline graph: {exc}")
    elif graph is None:
        if inline:
            graph = OrientedGraph.build([], [])
        else:
            raise SlicedError("missing 'use graph' line")
    for lineno, ev in events:
        if isinstance(ev, (Max, Min)) and not graph.has_edge(ev.edge):
            raise SlicedError(f"unknown edge {ev.edge!r}", lineno)
        if isinstance(ev, Vtx):
            if ev.vertex not in graph.vertices:
                raise SlicedError(f"unknown vertex {ev.vertex!r}", lineno)
            for e in ev.ins + ev.outs:
                if not graph.has_edge(e):
                    raise SlicedError(f"unknown edge {e!r}", lineno)
    return SlicedDiagram(graph, tuple(ev for _, ev in events), name)


def serialize_sliced(S: SlicedDiagram) -> str:
    from .graph import serialize_graph
    lines = [f"sliced {S.name}", "use graph inline"]
    lines += serialize_graph(S.graph).splitlines()
    lines += [str(ev) for ev in S.events]
    return "\n".join(lines) + "\n"


def load_sliced(path: str) -> SlicedDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse_sliced(fh.read(), os.path.dirname(os.path.abspath(path)))
