"""Random diagrams and words for property tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import OrientedGraph
from .sliced import DOWN, UP, Cross, Max, Min, SlicedDiagram, Vtx, validate_sliced
from .smoothing import UnionFind
from .word import GraphBraidWord, VLetter, XLetter, validate_word


@dataclass(frozen=True)
class GenParams:
    max_edges: int = 10
    max_crossings: int = 12
    max_vertices: int = 4
    max_events: int = 40


def _relabel(events_raw, uf: UnionFind, vertex_names) -> tuple[OrientedGraph, tuple]:
    root_name: dict = {}

    def name(piece):
        r = uf.find(piece)
        if r not in root_name:
            root_name[r] = f"e{len(root_name) + 1}"
        return root_name[r]

    tails, heads, events = {}, {}, []
    for ev in events_raw:
        kind = ev[0]
        if kind == "max":
            events.append(Max(ev[1], name(ev[2]), ev[3]))
        elif kind == "min":
            events.append(Min(ev[1], name(ev[2])))
        elif kind == "cross":
            events.append(Cross(ev[1], ev[2]))
        else:
            _, v, pos, ins, outs = ev
            ins_n, outs_n = tuple(name(p) for p in ins), tuple(name(p) for p in outs)
            for e in ins_n:
                heads[e] = v
            for e in outs_n:
                tails[e] = v
            events.append(Vtx(v, pos, ins_n, outs_n))
    used = set(root_name.values())
    edges = [(e, tails[e], heads[e]) for e in sorted(tails, key=lambda s: int(s[1:]))]
    circles = used - set(tails)
    g = OrientedGraph.build(vertex_names, edges, circles, "R")
    return g, tuple(events)


def random_sliced(rng: random.Random, params: GenParams = GenParams()) -> SlicedDiagram:
    """A random valid diagram built event by event.

    Each row point carries a provisional strand piece; minima glue pieces, and
    pieces are named as edges (or circles) once the row has closed.
    """
    while True:
        S = _try_random_sliced(rng, params)
        if S is not None and validate_sliced(S).ok:
            return S


def _try_random_sliced(rng: random.Random, p: GenParams):
    uf = UnionFind()
    row: list[tuple[int, str]] = []   # (piece, dir)
    events: list = []
    pieces = [0]
    crossings = 0
    vnames: list[str] = []

    def piece():
        pieces[0] += 1
        uf.add(pieces[0])
        return pieces[0]

    def n_edges():
        return len({uf.find(x) for x in range(1, pieces[0] + 1)})

    def do_min(i):
        (pa, _), (pb, _) = row[i], row[i + 1]
        uf.union(pa, pb)
        events.append(("min", i + 1, pa))
        del row[i:i + 2]

    def do_vertex(i, k, m):
        v = f"v{len(vnames) + 1}"
        vnames.append(v)
        ins = [pc for pc, _ in row[i:i + k]]
        outs = [piece() for _ in range(m)]
        events.append(("vtx", v, i + 1, ins, outs))
        row[i:i + k] = [(o, DOWN) for o in outs]

    for _ in range(rng.randint(1, p.max_events)):
        choice = rng.random()
        n = len(row)
        if choice < 0.25 and n_edges() < p.max_edges:
            i = rng.randint(0, n)
            pc = piece()
            down = rng.choice(("left", "right"))
            pair = [(pc, DOWN), (pc, UP)] if down == "left" else [(pc, UP), (pc, DOWN)]
            events.append(("max", i + 1, pc, down))
            row[i:i] = pair
        elif choice < 0.5 and n >= 2 and crossings < p.max_crossings:
            i = rng.randrange(n - 1)
            events.append(("cross", i + 1, rng.choice("lr")))
            row[i], row[i + 1] = row[i + 1], row[i]
            crossings += 1
        elif choice < 0.7 and n >= 2:
            opts = [i for i in range(n - 1) if row[i][1] != row[i + 1][1]]
            if opts:
                do_min(rng.choice(opts))
        elif choice < 0.9 and len(vnames) < p.max_vertices and n_edges() < p.max_edges:
            runs = [(i, k) for i in range(n + 1) for k in range(4)
                    if i + k <= n and all(d == DOWN for _, d in row[i:i + k])]
            i, k = rng.choice(runs)
            m = rng.randint(0 if k else 1, 3)
            do_vertex(i, k, m)
    guard = 0
    while row:
        guard += 1
        if guard > 200:
            return None
        opts = [i for i in range(len(row) - 1) if row[i][1] != row[i + 1][1]]
        if opts:
            do_min(rng.choice(opts))
        elif row[0][1] == DOWN:
            do_vertex(0, len(row), 0)
        else:
            do_vertex(0, 0, 1)
    if not events:
        return None
    g, evs = _relabel(events, uf, vnames)
    return SlicedDiagram(g, evs, "random")


def random_word(rng: random.Random, circulating: bool = False, max_strands: int = 5,
                max_letters: int = 14, max_vertices: int = 3) -> GraphBraidWord:
    """A random valid word; with ``circulating`` every vertex letter has as many ins as outs."""
    while True:
        W = _try_random_word(rng, circulating, max_strands, max_letters, max_vertices)
        if W is not None and validate_word(W).ok:
            return W


def _try_random_word(rng, circulating, max_strands, max_letters, max_vertices):
    uf = UnionFind()
    pieces = [0]

    def piece():
        pieces[0] += 1
        uf.add(pieces[0])
        return pieces[0]

    n0 = rng.randint(1, max_strands)
    start = [piece() for _ in range(n0)]
    row = list(start)
    raw: list = []
    nv = 0
    for _ in range(rng.randint(0, max_letters)):
        n = len(row)
        if rng.random() < 0.3 and nv < max_vertices:
            k = rng.randint(0, min(3, n))
            if circulating:
                m = k if k else 0
                if k == 0:
                    continue
            else:
                m = rng.randint(0 if k else 1, 3)
                if len(row) - k + m > max_strands + 2 or len(row) - k + m == 0:
                    continue
            i = rng.randint(0, n - k)
            nv += 1
            outs = [piece() for _ in range(m)]
            raw.append(("v", f"v{nv}", i + 1, row[i:i + k], outs))
            row[i:i + k] = outs
        elif n >= 2:
            i = rng.randrange(n - 1)
            raw.append(("x", i + 1, rng.choice((1, -1))))
            row[i], row[i + 1] = row[i + 1], row[i]
    if len(row) != n0:
        return None
    for a, b in zip(row, start):
        uf.union(a, b)
    names: dict = {}

    def name(pc):
        r = uf.find(pc)
        if r not in names:
            names[r] = f"e{len(names) + 1}"
        return names[r]

    letters = []
    for L in raw:
        if L[0] == "x":
            letters.append(XLetter(L[1], L[2]))
        else:
            letters.append(VLetter(L[1], L[2], tuple(name(p) for p in L[3]), tuple(name(p) for p in L[4])))
    return GraphBraidWord(n0, tuple(name(p) for p in start), tuple(letters), "random")
