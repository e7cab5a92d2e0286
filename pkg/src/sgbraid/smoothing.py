"""Orientation-respecting smoothing of a diagram and the vertex reduction to a link."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import asdict, dataclass

from .graph import (
    OrientedGraph,
    degree_profile,
    euler_characteristic,
    is_circulating,
    is_directed_cycle,
    sorted_ids,
)
from .sliced import DOWN, Cross, SlicedDiagram, Trace, Vtx, simulate


class UnionFind:
    def __init__(self, items: Iterable = ()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self) -> list[set]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return list(out.values())


@dataclass(frozen=True)
class SmoothedComplex:
    """Abstract 1-complex left after smoothing every crossing.

    Nodes are the graph vertices plus one synthetic node ``o<k>`` per closed
    vertex-free circle; each such circle is one arc from its node to itself.
    """
    nodes: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    components: tuple[frozenset, ...]


def _smoothed_conn(S: SlicedDiagram, t: Trace) -> dict:
    conn = dict(t.conn)
    for k, ev in enumerate(S.events):
        if not isinstance(ev, Cross):
            continue
        a, b = t.consumed[k]
        bl, br = t.created[k]
        for key in ((a, "bot"), (b, "bot"), (bl, "top"), (br, "top")):
            conn.pop(key, None)
        if t.intervals[a].dir == t.intervals[b].dir:
            pairs = [((a, "bot"), (bl, "top")), ((b, "bot"), (br, "top"))]
        else:
            pairs = [((a, "bot"), (b, "bot")), ((bl, "top"), (br, "top"))]
        for x, y in pairs:
            conn[x], conn[y] = y, x
    return conn


def smooth(S: SlicedDiagram, trace: Trace | None = None) -> SmoothedComplex:
    """Smooth every crossing compatibly with the edge orientations.

    Equal-direction strands are resolved side by side, opposite-direction
    strands into a cap and a cup.  Over/under data plays no role.
    """
    t = trace or simulate(S)
    conn = _smoothed_conn(S, t)
    seen: set[int] = set()
    arcs: list[tuple[str, str]] = []
    for iv in t.intervals:
        if conn.get((iv.id, "top"), (None,))[0] != "vertex" or iv.dir != DOWN:
            continue
        start_v = conn[(iv.id, "top")][1]
        iid, end_in = iv.id, "top"
        while True:
            seen.add(iid)
            exit_end = "bot" if end_in == "top" else "top"
            nxt = conn[(iid, exit_end)]
            if nxt[0] == "vertex":
                arcs.append((start_v, nxt[1]))
                break
            iid, end_in = nxt
    nodes = sorted_ids(S.graph.vertices)
    circle = 0
    for iv in t.intervals:
        if iv.id in seen:
            continue
        circle += 1
        node = f"o{circle}"
        nodes.append(node)
        arcs.append((node, node))
        iid, end_in = iv.id, "top" if iv.dir == DOWN else "bot"
        while iid not in seen:
            seen.add(iid)
            exit_end = "bot" if end_in == "top" else "top"
            iid, end_in = conn[(iid, exit_end)]
    uf = UnionFind(nodes)
    for u, v in arcs:
        uf.union(u, v)
    comps = sorted((frozenset(g) for g in uf.groups()), key=lambda c: sorted_ids(c)[0])
    return SmoothedComplex(tuple(nodes), tuple(arcs), tuple(comps))


@dataclass(frozen=True)
class ComplexStats:
    mu: int
    chi: int
    beta1: int


def complex_stats(X: SmoothedComplex) -> ComplexStats:
    mu = len(X.components)
    chi = len(X.nodes) - len(X.arcs)
    return ComplexStats(mu, chi, mu - chi)


def mu(S: SlicedDiagram) -> int:
    return len(smooth(S).components)


@dataclass(frozen=True)
class SmoothingReport:
    mu: int
    chi_graph: int
    beta1: int
    prop2_ok: bool
    chi_preserved: bool

    def as_dict(self) -> dict:
        return asdict(self)


def smoothing_report(S: SlicedDiagram) -> SmoothingReport:
    st = complex_stats(smooth(S))
    chi_g = euler_characteristic(S.graph)
    rep = SmoothingReport(st.mu, chi_g, st.beta1, st.mu >= chi_g, st.chi == chi_g)
    if not (rep.prop2_ok and rep.chi_preserved):
        raise AssertionError(f"smoothing invariant violated: {rep}")
    return rep


# ---------------------------------------------------------------- vertex reduction

def _fresh(base: str, taken: set[str]) -> str:
    name, n = base, 0
    while name in taken:
        n += 1
        name = f"{base}_{n}"
    taken.add(name)
    return name


def cycle_reduction(S: SlicedDiagram, cycle: Iterable[str]) -> SlicedDiagram:
    """Replace each vertex neighbourhood by ``indeg(v)`` oriented arcs.

    Off the cycle, the i-th in-strand is joined to the i-th out-strand.  At a
    cycle vertex the adjacent non-cycle in/out pairs are withdrawn and joined,
    and the remaining strands are split off under the cycle strand, with the
    crossings placed just above the vertex.  Each arc is kept as a
    one-in/one-out vertex so edge labels survive; the cycle's own vertex keeps
    its name.
    """
    g = S.graph
    cyc = list(dict.fromkeys(cycle))
    if not is_directed_cycle(g, cyc):
        raise ValueError(f"not a directed cycle: {cyc}")
    cset = set(cyc)
    taken = set(g.vertices)
    new_events: list = []
    tails: dict[str, str] = {}
    heads: dict[str, str] = {}
    new_vertices: list[str] = []

    def arc(name, pos, ein, eout):
        new_events.append(Vtx(name, pos, (ein,), (eout,)))
        new_vertices.append(name)
        heads[ein] = name
        tails[eout] = name

    for ev in S.events:
        if not isinstance(ev, Vtx):
            new_events.append(ev)
            continue
        v, ins, outs = ev.vertex, list(ev.ins), list(ev.outs)
        if len(ins) != len(outs):
            raise ValueError(f"vertex {v} has indeg {len(ins)} != outdeg {len(outs)}")
        g_in = [e for e in ins if e in cset]
        g_out = [e for e in outs if e in cset]
        if not g_in:
            for i, (a, b) in enumerate(zip(ins, outs)):
                arc(_fresh(f"{v}_{i + 1}", taken), ev.pos + i, a, b)
            continue
        p, q = ins.index(g_in[0]) + 1, outs.index(g_out[0]) + 1
        top = list(ins)
        if p > q:
            for j in range(p - 1, q - 1, -1):
                new_events.append(Cross(ev.pos + j - 1, "r"))
            top = ins[:q - 1] + [ins[p - 1]] + ins[q - 1:p - 1] + ins[p:]
        elif p < q:
            for j in range(p, q):
                new_events.append(Cross(ev.pos + j - 1, "l"))
            top = ins[:p - 1] + ins[p:q] + [ins[p - 1]] + ins[q:]
        for i, (a, b) in enumerate(zip(top, outs)):
            name = v if i == q - 1 else _fresh(f"{v}_{i + 1}", taken)
            arc(name, ev.pos + i, a, b)
    edges = [(e.id, tails[e.id], heads[e.id]) for e in g.edges]
    graph = OrientedGraph.build(new_vertices, edges, g.circles, g.name + "_link")
    return SlicedDiagram(graph, tuple(new_events), S.name + "_reduced")


@dataclass(frozen=True)
class ReductionCheck:
    mu_d: int
    mu_reduced: int
    indeg_excess: int      # sum over vertices of indeg(v) - 1
    chi_graph: int
    identity_ok: bool      # indeg_excess == -chi_graph
    inequality_ok: bool    # mu_d >= mu_reduced - indeg_excess
    chi_form_ok: bool      # mu_d >= mu_reduced + chi_graph

    def as_dict(self) -> dict:
        return asdict(self)


def reduction_inequality_check(S: SlicedDiagram, cycle: Iterable[str]) -> ReductionCheck:
    g = S.graph
    if not is_circulating(g):
        raise ValueError("graph is not circulating")
    reduced = cycle_reduction(S, cycle)
    prof = degree_profile(g)
    excess = sum(prof.indeg[v] - 1 for v in g.vertices)
    chi = euler_characteristic(g)
    m, m2 = mu(S), mu(reduced)
    rep = ReductionCheck(m, m2, excess, chi, excess == -chi, m >= m2 - excess, m >= m2 + chi)
    if not (rep.identity_ok and rep.inequality_ok and rep.chi_form_ok):
        raise AssertionError(f"reduction inequality violated: {rep}")
    return rep
