"""Diagram moves, bounded search for small smoothings, tree hooking and bound reports.

Moves act on the event list of a sliced diagram.  Every move is a local
rewrite of one to three consecutive events (or an insertion into a gap between
events) that models a Reidemeister-type isotopy of the spatial graph with
flexible vertices, or a planar rearrangement of the height function.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import (
    OrientedGraph,
    components,
    cycle_sources,
    euler_characteristic,
    is_circulating,
    is_cycle,
    is_directed_cycle,
    sorted_ids,
)
from .sliced import DOWN, Cross, Max, Min, SlicedDiagram, Vtx, simulate
from .smoothing import UnionFind, cycle_reduction, mu

REMOVE_KINDS = ("R1-remove", "R2-remove", "min-max-cancel")
NEUTRAL_KINDS = ("exchange", "R3", "R4-slide", "R5-twist")
ADD_KINDS = ("R1-add", "R2-add", "min-max-add")


@dataclass(frozen=True)
class MoveInstance:
    """A rewrite of ``events[start:stop]`` into ``replacement``."""
    kind: str
    start: int
    stop: int
    replacement: tuple
    note: str = ""

    def apply(self, S: SlicedDiagram) -> SlicedDiagram:
        ev = S.events
        return S.with_events(ev[:self.start] + self.replacement + ev[self.stop:])

    def __str__(self):
        return f"{self.kind}@{self.start}:{self.stop}" + (f" {self.note}" if self.note else "")


# ---------------------------------------------------------------- event geometry

def _widths(ev) -> tuple[int, int]:
    """Row points consumed and produced by an event."""
    if isinstance(ev, Max):
        return 0, 2
    if isinstance(ev, Min):
        return 2, 0
    if isinstance(ev, Cross):
        return 2, 2
    return len(ev.ins), len(ev.outs)


def _at(ev, pos: int):
    if isinstance(ev, Max):
        return Max(pos, ev.edge, ev.down)
    if isinstance(ev, Min):
        return Min(pos, ev.edge)
    if isinstance(ev, Cross):
        return Cross(pos, ev.over)
    return Vtx(ev.vertex, pos, ev.ins, ev.outs)


def _exchange(e1, e2):
    """Swap two consecutive events acting on disjoint stretches of the row, or None."""
    i1, (in1, out1) = e1.pos, _widths(e1)
    i2, (in2, _) = e2.pos, _widths(e2)
    if i2 >= i1 + out1:
        return _at(e2, i2 - out1 + in1), e1
    if i2 + in2 <= i1:
        _, out2 = _widths(e2)
        return e2, _at(e1, i1 - in2 + out2)
    return None


def _flip(over: str) -> str:
    return "r" if over == "l" else "l"


# ---------------------------------------------------------------- enumeration

def enumerate_moves(S: SlicedDiagram, kinds=None) -> list[MoveInstance]:
    """All applicable move instances, removals first, then neutral moves, then insertions."""
    t = simulate(S)
    ev = S.events
    n = len(ev)
    iv = t.intervals
    want = set(kinds) if kinds is not None else None
    out: list[MoveInstance] = []

    def add(m: MoveInstance):
        if want is None or m.kind in want:
            out.append(m)

    # removals
    for k in range(n - 1):
        a, b = ev[k], ev[k + 1]
        if isinstance(a, Cross) and isinstance(b, Cross) and a.pos == b.pos and a.over != b.over:
            add(MoveInstance("R2-remove", k, k + 2, ()))
        if isinstance(a, Max) and isinstance(b, Min):
            # zig-zag: the new pair's outer point joins the old neighbouring strand
            if b.pos == a.pos - 1 or b.pos == a.pos + 1:
                add(MoveInstance("min-max-cancel", k, k + 2, ()))
    for k in range(n - 2):
        a, c, b = ev[k], ev[k + 1], ev[k + 2]
        if isinstance(a, Max) and isinstance(c, Cross) and isinstance(b, Min):
            if (c.pos == a.pos - 1 and b.pos == a.pos) or (c.pos == a.pos + 1 and b.pos == a.pos):
                add(MoveInstance("R1-remove", k, k + 3, ()))

    # neutral moves
    for k in range(n - 1):
        sw = _exchange(ev[k], ev[k + 1])
        if sw is not None:
            add(MoveInstance("exchange", k, k + 2, sw))
    for k in range(n - 2):
        a, b, c = ev[k], ev[k + 1], ev[k + 2]
        if all(isinstance(x, Cross) for x in (a, b, c)) and a.pos == c.pos and abs(b.pos - a.pos) == 1:
            if not (a.over == c.over != b.over):
                add(MoveInstance("R3", k, k + 3, (Cross(b.pos, c.over), Cross(a.pos, b.over), Cross(b.pos, a.over))))
    for k, e in enumerate(ev):
        if isinstance(e, Vtx):
            _slides(S, t, k, add)
            _twists(S, k, add)

    # insertions
    for k in range(n + 1):
        row = t.rows[k]
        for p, iid in enumerate(row, start=1):
            e, d = iv[iid].edge, iv[iid].dir
            # kink to the right and to the left of the point
            for over in ("l", "r"):
                add(MoveInstance("R1-add", k, k, (Max(p + 1, e, "left" if d == DOWN else "right"),
                                                  Cross(p, over), Min(p + 1, e)), f"right of {p}"))
                add(MoveInstance("R1-add", k, k, (Max(p, e, "right" if d == DOWN else "left"),
                                                  Cross(p + 1, over), Min(p, e)), f"left of {p}"))
            add(MoveInstance("min-max-add", k, k, (Max(p + 1, e, "right" if d == DOWN else "left"), Min(p, e)),
                             f"right of {p}"))
            add(MoveInstance("min-max-add", k, k, (Max(p, e, "left" if d == DOWN else "right"), Min(p + 1, e)),
                             f"left of {p}"))
        for p in range(1, len(row)):
            for over in ("l", "r"):
                add(MoveInstance("R2-add", k, k, (Cross(p, over), Cross(p, _flip(over)))))
    return out


def _slides(S: SlicedDiagram, t, k: int, add) -> None:
    """Slide a strand across a vertex from the in-side to the out-side or back."""
    ev = S.events
    v = ev[k]
    kin, kout = len(v.ins), len(v.outs)
    row_before = t.rows[k]
    row_after = t.rows[k + 1]

    def crosses(lo, hi, positions):
        seg = ev[lo:hi]
        if len(seg) != len(positions) or not all(isinstance(x, Cross) for x in seg):
            return None
        if [x.pos for x in seg] != list(positions):
            return None
        flags = {x.over for x in seg}
        return flags.pop() if len(flags) == 1 else None

    def emit(kind_note, lo, hi, repl):
        add(MoveInstance("R4-slide", lo, hi, tuple(repl), kind_note))

    # strand on the left, forward: x r..r+k-1 then vtx at r  ->  vtx at r+1 then x r..r+m-1
    r = v.pos
    flags = [crosses(k - kin, k, range(r, r + kin))] if kin else ["l", "r"]
    if kin == 0 and r > len(row_before):
        flags = []
    for f in flags:
        if f is None or k - kin < 0:
            continue
        emit("left forward", k - kin, k + 1, [_at(v, r + 1)] + [Cross(r + j, f) for j in range(kout)])
    # strand on the left, backward: vtx at r+1 then x r..r+m-1  ->  x r..r+k-1 then vtx at r
    r = v.pos - 1
    if r >= 1:
        flags = [crosses(k + 1, k + 1 + kout, range(r, r + kout))] if kout else ["l", "r"]
        for f in flags:
            if f is None:
                continue
            emit("left backward", k, k + 1 + kout, [Cross(r + j, f) for j in range(kin)] + [_at(v, r)])
    # strand on the right, forward: x r+k-1..r then vtx at r+1  ->  vtx at r then x r+m-1..r
    r = v.pos - 1
    if r >= 1:
        flags = [crosses(k - kin, k, range(r + kin - 1, r - 1, -1))] if kin else ["l", "r"]
        for f in flags:
            if f is None or k - kin < 0:
                continue
            emit("right forward", k - kin, k + 1, [_at(v, r)] + [Cross(r + kout - 1 - j, f) for j in range(kout)])
    # strand on the right, backward: vtx at r then x r+m-1..r  ->  x r+k-1..r then vtx at r+1
    r = v.pos
    if r + kout <= len(row_after):
        flags = [crosses(k + 1, k + 1 + kout, range(r + kout - 1, r - 1, -1))] if kout else ["l", "r"]
        for f in flags:
            if f is None:
                continue
            emit("right backward", k, k + 1 + kout,
                 [Cross(r + kin - 1 - j, f) for j in range(kin)] + [_at(v, r + 1)])


def _twists(S: SlicedDiagram, k: int, add) -> None:
    """Remove or insert a crossing between two adjacent strands at a vertex."""
    ev = S.events
    v = ev[k]
    r, kin, kout = v.pos, len(v.ins), len(v.outs)
    if k > 0 and isinstance(ev[k - 1], Cross) and r <= ev[k - 1].pos < r + kin - 1:
        j = ev[k - 1].pos - r
        ins = list(v.ins)
        ins[j], ins[j + 1] = ins[j + 1], ins[j]
        add(MoveInstance("R5-twist", k - 1, k + 1, (Vtx(v.vertex, r, tuple(ins), v.outs),), "remove in"))
    if k + 1 < len(ev) and isinstance(ev[k + 1], Cross) and r <= ev[k + 1].pos < r + kout - 1:
        j = ev[k + 1].pos - r
        outs = list(v.outs)
        outs[j], outs[j + 1] = outs[j + 1], outs[j]
        add(MoveInstance("R5-twist", k, k + 2, (Vtx(v.vertex, r, v.ins, tuple(outs)),), "remove out"))
    for j in range(kin - 1):
        ins = list(v.ins)
        ins[j], ins[j + 1] = ins[j + 1], ins[j]
        for f in ("l", "r"):
            add(MoveInstance("R5-twist", k, k + 1, (Cross(r + j, f), Vtx(v.vertex, r, tuple(ins), v.outs)),
                             "add in"))
    for j in range(kout - 1):
        outs = list(v.outs)
        outs[j], outs[j + 1] = outs[j + 1], outs[j]
        for f in ("l", "r"):
            add(MoveInstance("R5-twist", k, k + 1, (Vtx(v.vertex, r, v.ins, tuple(outs)), Cross(r + j, f)),
                             "add out"))


# ---------------------------------------------------------------- bounded search

@dataclass(frozen=True)
class SearchResult:
    diagram: SlicedDiagram
    mu: int
    visited: int
    exhausted: bool          # budget ran out before the frontier was empty
    moves: tuple = ()        # move descriptions leading from the input to ``diagram``


def smoothing_floor(g: OrientedGraph) -> int:
    """The universal lower bound max{1, chi(G)} on the number of smoothing components."""
    return max(1, euler_characteristic(g))


def minimize_smoothing(S: SlicedDiagram, budget: int = 20000, depth: int = 6,
                       kinds=None) -> SearchResult:
    """Breadth-first search over move applications for a diagram with few smoothing components.

    Diagrams are deduplicated by their event key.  The search stops early once
    the floor max{1, chi(G)} is reached, since no diagram can go lower.
    """
    if budget < 0 or depth < 0:
        raise ValueError("budget and depth must be non-negative")
    floor = smoothing_floor(S.graph)
    best, best_mu, best_path = S, mu(S), ()
    seen = {S.key()}
    frontier = deque([(S, 0, ())])
    visited = 1
    exhausted = False
    while frontier and best_mu > floor:
        D, d, path = frontier.popleft()
        if d >= depth:
            continue
        for m in enumerate_moves(D, kinds):
            E = m.apply(D)
            key = E.key()
            if key in seen:
                continue
            if visited >= budget:
                exhausted = True
                break
            seen.add(key)
            visited += 1
            val = mu(E)
            if val < floor:
                raise AssertionError(f"smoothing below the floor {floor}: {val}")
            p2 = path + (str(m),)
            if val < best_mu:
                best, best_mu, best_path = E, val, p2
                if val <= floor:
                    break
            frontier.append((E, d + 1, p2))
        if exhausted:
            break
    return SearchResult(best, best_mu, visited, exhausted, best_path)


# ---------------------------------------------------------------- tree hooking

def _drop_component(S: SlicedDiagram, edges: set, vertices: set) -> SlicedDiagram:
    """Delete every event of a component; crossings with other strands simply disappear."""
    t = simulate(S)
    keep = []
    for k, ev in enumerate(S.events):
        row = t.rows[k]
        inside = [t.intervals[i].edge in edges for i in row]

        def shift(p):
            return p - sum(inside[:p - 1])

        if isinstance(ev, (Max, Min)):
            if ev.edge in edges:
                continue
            keep.append(_at(ev, shift(ev.pos)))
        elif isinstance(ev, Cross):
            if inside[ev.pos - 1] or inside[ev.pos]:
                continue
            keep.append(_at(ev, shift(ev.pos)))
        else:
            if ev.vertex in vertices:
                continue
            keep.append(_at(ev, shift(ev.pos)))
    g = S.graph
    rest = OrientedGraph.build(sorted_ids(g.vertices - vertices),
                               [(e.id, e.tail, e.head) for e in g.edges if e.id not in edges],
                               g.circles, g.name)
    return SlicedDiagram(rest, tuple(keep), S.name)


def _plug(g: OrientedGraph, v: str, parent: str | None, tree_edges: set, base: int,
          events: list, lead_out: str | None = None, after: tuple = ()) -> None:
    """Draw the subtree at ``v`` as a tangle hanging from the row point at ``base``.

    The parent edge's point (if any) sits at ``base``; it descends into ``v`` or
    ascends out of it.  In-edges from children arrive through nested maxima
    opened right of the vertex block.  ``lead_out`` is emitted as the leftmost
    out-strand and handed to the events in ``after`` instead of a child tangle.
    """
    inc = [e for e in g.edges if e.id in tree_edges and v in (e.tail, e.head) and e.id != parent]
    ins = sorted_ids(e.id for e in inc if e.head == v)
    outs = sorted_ids(e.id for e in inc if e.tail == v and e.id != lead_out)
    ascending = parent is not None and g.edge(parent).tail == v
    descending = parent is not None and not ascending
    start = base + 1 if ascending else base
    first_in = 1 if descending else 0
    for j, e in enumerate(ins):
        events.append(Max(start + first_in + j, e, "left"))
    vin = ([parent] if descending else []) + ins
    vout = ([parent] if ascending else []) + ([lead_out] if lead_out else []) + outs
    events.append(Vtx(v, start, tuple(vin), tuple(vout)))
    if ascending:
        events.append(Min(base, parent))
    events.extend(after)
    # remaining points from base rightwards: out-strands, then the ascending ends of the maxima
    row = outs + list(reversed(ins))
    for idx in range(len(row) - 1, -1, -1):
        e = row[idx]
        ed = g.edge(e)
        child = ed.head if ed.tail == v else ed.tail
        _plug(g, child, e, tree_edges, base + idx, events)


def hook_trees(S: SlicedDiagram, assignments: list[tuple[str, str]]) -> SlicedDiagram:
    """Hook each listed tree component onto a target edge with a single crossing.

    ``assignments`` pairs a vertex of a tree component with a target edge outside
    it.  The tree is shrunk away (any tree component of a spatial graph is
    isotopic to a small planar one) and redrawn just right of the target edge,
    with one leaf moved to the left so that its leaf edge crosses the target
    once.
    """
    g = S.graph
    comps = components(g)
    used: set = set()
    out = S
    for vertex, target in assignments:
        comp = next((c for c in comps if vertex in c[0]), None)
        if comp is None:
            raise ValueError(f"unknown vertex {vertex}")
        vs, es = comp
        if len(vs) != len(es) + 1 or not es:
            raise ValueError(f"component of {vertex} is not a tree with at least one edge")
        if vs & used:
            raise ValueError(f"overlapping assignments for the component of {vertex}")
        used |= vs
        if target in es or not g.has_edge(target):
            raise ValueError(f"target edge {target} must lie outside the tree")
        out = _hook_one(out, vs, es, target)
    return out


def _hook_one(S: SlicedDiagram, vs, es, target: str) -> SlicedDiagram:
    g = S.graph
    rest = _drop_component(S, set(es), set(vs))
    deg = {v: 0 for v in vs}
    for e in es:
        deg[g.edge(e).tail] += 1
        deg[g.edge(e).head] += 1
    leaf = sorted_ids(v for v in vs if deg[v] == 1)[0]
    f = next(e for e in sorted_ids(es) if leaf in (g.edge(e).tail, g.edge(e).head))
    fe = g.edge(f)
    p = fe.head if fe.tail == leaf else fe.tail
    t = simulate(rest)
    k, P = next((k, row.index(i) + 1) for k, row in enumerate(t.rows) for i in row
                if t.intervals[i].edge == target)
    tree: list = []
    if fe.head == leaf:
        # p emits f leftmost; f crosses the target and ends at the sink leaf
        _plug(g, p, None, set(es), P + 1, tree, lead_out=f,
              after=(Cross(P, "l"), Vtx(leaf, P, (f,), ())))
    else:
        # the source leaf sits left of the target; f crosses it and descends into p
        tree = [Vtx(leaf, P, (), (f,)), Cross(P, "l")]
        _plug(g, p, f, set(es), P + 1, tree)
    events = rest.events[:k] + tuple(tree) + rest.events[k:]
    return SlicedDiagram(g, events, S.name)


def _on_cycle(g: OrientedGraph, edge: str) -> bool:
    """True when the edge is not a bridge of the underlying unoriented graph."""
    e = g.edge(edge)
    if e.tail == e.head:
        return True
    uf = UnionFind(g.vertices)
    for o in g.edges:
        if o.id != edge:
            uf.union(o.tail, o.head)
    return uf.find(e.tail) == uf.find(e.head)


def minimize_with_hooks(S: SlicedDiagram, budget: int = 20000, depth: int = 6,
                        kinds=None) -> SearchResult:
    """Hook tree components onto cycle edges where that lowers μ, then search.

    A hook is kept only if it strictly lowers the number of smoothing
    components.  Targets are tried in edge order among edges lying on a cycle;
    hooking onto a bridge would only move the extra component elsewhere.
    """
    g = S.graph
    floor = smoothing_floor(g)
    D, steps = S, []
    for vs, es in components(g):
        if mu(D) <= floor:
            break
        if not es or len(vs) != len(es) + 1:
            continue
        targets = [e.id for e in g.edges if e.id not in es and _on_cycle(g, e.id)]
        base = mu(D)
        for target in targets:
            E = hook_trees(D, [(sorted_ids(vs)[0], target)])
            if mu(E) < base:
                D = E
                steps.append(f"hook {sorted_ids(vs)[0]} onto {target}")
                break
    res = minimize_smoothing(D, budget, depth, kinds)
    return SearchResult(res.diagram, res.mu, res.visited, res.exhausted, tuple(steps) + res.moves)


# ---------------------------------------------------------------- bounds

@dataclass
class BoundsReport:
    s_lower: int | None = None
    s_exact: bool = False
    s_upper: int | None = None
    b_upper: int | None = None
    b_lower: int | None = None
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"s_lower": self.s_lower, "s_exact": self.s_exact, "s_upper": self.s_upper,
                "b_upper": self.b_upper, "b_lower": self.b_lower, "notes": list(self.notes)}

    def merge(self, other: BoundsReport) -> BoundsReport:
        out = BoundsReport(**{k: v for k, v in self.as_dict().items()})
        for k, v in other.as_dict().items():
            if k == "notes":
                out.notes = self.notes + other.notes
            elif v not in (None, False):
                setattr(out, k, v)
        return out


def _require_no_isolated(g: OrientedGraph) -> None:
    iso = g.isolated_vertices()
    if iso:
        raise ValueError(f"isolated vertex {iso[0]}: the bounds assume a graph without isolated vertices")


def s_bounds(S: SlicedDiagram, budget: int = 20000, depth: int = 6) -> BoundsReport:
    """Lower bound max{1, chi(G)} (exact for non-circulating graphs) and a searched upper bound."""
    g = S.graph
    _require_no_isolated(g)
    if g.is_empty():
        raise ValueError("empty graph")
    lower = smoothing_floor(g)
    exact = not is_circulating(g)
    res = minimize_with_hooks(S, budget, depth)
    notes = [f"s_lower = max(1, chi) with chi = {euler_characteristic(g)}",
             "s_lower is exact: the graph is not circulating" if exact
             else "s_lower may not be attained: the graph is circulating",
             f"s_upper from search: {res.visited} diagrams visited"
             + (" (budget exhausted)" if res.exhausted else "")]
    if res.mu < lower:
        raise AssertionError("search went below the floor")
    return BoundsReport(s_lower=lower, s_exact=exact, s_upper=res.mu, notes=notes)


def parse_oracle(entry: str) -> tuple[list[str], int]:
    """Parse ``cycle=e1,e2,...:bridge=N``."""
    try:
        left, right = entry.split(":")
        k1, cyc = left.split("=", 1)
        k2, val = right.split("=", 1)
        if k1.strip() != "cycle" or k2.strip() != "bridge":
            raise ValueError
        edges = [x.strip() for x in cyc.split(",") if x.strip()]
        return edges, int(val)
    except ValueError:
        raise ValueError(f"bad oracle entry {entry!r}; expected cycle=e1,e2:bridge=N") from None


def b_bounds(S: SlicedDiagram, oracle: list[tuple[list[str], int]] = ()) -> BoundsReport:
    """Attained strand maximum of the braided diagram and oracle-based lower bound.

    Each oracle entry supplies the bridge index of the knot or link formed by a
    cycle; bridge minus the cycle's source count bounds b from below.
    """
    from .layout import braid
    from .word import b_tilde

    g = S.graph
    _require_no_isolated(g)
    upper = b_tilde(braid(S))
    lower = 1
    notes = ["b_upper = strand maximum of the braided diagram"]
    for cyc, bridge in oracle:
        if not is_cycle(g, cyc):
            raise ValueError(f"oracle cycle {cyc} is not a cycle of the graph")
        alpha = cycle_sources(g, cyc)
        lower = max(lower, bridge - alpha)
        notes.append(f"oracle {','.join(cyc)}: bridge {bridge} - sources {alpha} = {bridge - alpha}")
    if lower > upper:
        raise AssertionError(f"lower bound {lower} exceeds attained value {upper}")
    return BoundsReport(b_upper=upper, b_lower=lower, notes=notes)


@dataclass(frozen=True)
class CirculatingCertificate:
    bound: int
    floored: int
    mu: int
    mu_reduced: int
    holds: bool

    def as_dict(self) -> dict:
        return {"bound": self.bound, "floored": self.floored, "mu": self.mu,
                "mu_reduced": self.mu_reduced, "holds": self.holds}


def s_certificate_circulating(S: SlicedDiagram, cycle: list[str], b_cycle_lower: int) -> CirculatingCertificate:
    """Lower bound b_cycle_lower + chi(G) on the smoothing components of a circulating diagram.

    ``b_cycle_lower`` must bound the braid index of the link obtained by the
    vertex reduction along ``cycle``; it is taken on trust.  The inequality is
    checked on the given diagram.
    """
    g = S.graph
    if not is_circulating(g):
        raise ValueError("graph is not circulating")
    if not is_directed_cycle(g, cycle):
        raise ValueError(f"not a directed cycle: {cycle}")
    bound = b_cycle_lower + euler_characteristic(g)
    m = mu(S)
    m2 = mu(cycle_reduction(S, cycle))
    cert = CirculatingCertificate(bound, max(1, bound), m, m2, m >= bound)
    if not cert.holds:
        raise AssertionError(f"certificate violated on this diagram: mu {m} < {bound}")
    return cert


def bounds(S: SlicedDiagram, budget: int = 20000, depth: int = 6,
           oracle: list[tuple[list[str], int]] = ()) -> BoundsReport:
    return s_bounds(S, budget, depth).merge(b_bounds(S, oracle))
