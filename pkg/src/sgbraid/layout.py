"""Rectilinear layouts and the braiding pipeline.

A :class:`RectLayout` stores, for every edge, the polyline it follows in the
plane (exact rational coordinates, listed in travel order).  Away from the
vertices every segment is horizontal or vertical; the segments touching a
vertex point form its fan and descend.  Crossings are computed from the
geometry; by default the horizontal segment passes over, and the points in
``vertical_over`` record the exceptions.

The pipeline is ``rectilinear_layout`` -> ``normalize_crossings`` ->
``isolate_up_columns`` -> ``wrap_up_segments`` -> ``extract_word``.  After
wrapping, the picture turns counterclockwise around the origin: inside the
diagram band everything descends, and the upward segments have been replaced
by three sides of nested rectangles that pass to the right of the origin.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable
from dataclasses import dataclass, replace
from fractions import Fraction

from .graph import cycle_vertices, is_cycle, natural_key
from .sliced import (
    DOWN,
    Cross,
    Max,
    Min,
    SlicedDiagram,
    sign_of,
    simulate,
    trace_strands,
)
from .word import GraphBraidWord, VLetter, XLetter, closure, validate_word

F = Fraction
Point = tuple  # (Fraction, Fraction)


class LayoutError(RuntimeError):
    """Internal geometric inconsistency (should not happen for valid input)."""


@dataclass(frozen=True)
class Segment:
    edge: str
    index: int
    p0: Point
    p1: Point
    fan: bool

    @property
    def horizontal(self) -> bool:
        return self.p0[1] == self.p1[1] and not self.fan

    @property
    def vertical(self) -> bool:
        return self.p0[0] == self.p1[0] and not self.fan

    @property
    def direction(self) -> tuple[int, int]:
        dx, dy = self.p1[0] - self.p0[0], self.p1[1] - self.p0[1]
        return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


@dataclass(frozen=True)
class Rectangle:
    column: Fraction
    bottom: Fraction
    top: Fraction
    right: Fraction
    edge: str


@dataclass(frozen=True)
class LayoutCrossing:
    point: Point
    over: Segment
    under: Segment

    @property
    def sign(self) -> int:
        return sign_of(self.under.direction, self.over.direction)


@dataclass(frozen=True)
class RectLayout:
    paths: dict            # edge -> tuple of points in travel order
    closed: frozenset      # edges whose path is a closed loop (last point == first)
    vertices: dict         # vertex -> point
    vertical_over: frozenset = frozenset()
    up_segments: tuple = ()     # (edge, index) of isolated upward segments, by column
    rectangles: tuple = ()      # Rectangle per wrapped segment, R_1 outermost
    annular: bool = False
    band: tuple = ()            # (ymin, ymax) of the unwrapped diagram

    def segments(self) -> list[Segment]:
        vpts = set(self.vertices.values())
        out = []
        for e in sorted(self.paths, key=natural_key):
            pts = self.paths[e]
            for i in range(len(pts) - 1):
                p0, p1 = pts[i], pts[i + 1]
                out.append(Segment(e, i, p0, p1, p0 in vpts or p1 in vpts))
        return out

    def crossings(self) -> list[LayoutCrossing]:
        segs = self.segments()
        for s in segs:
            if not s.fan and not (s.horizontal or s.vertical):
                raise LayoutError(f"segment of {s.edge} is neither horizontal nor vertical")
        hs = [s for s in segs if s.horizontal]
        vs = [s for s in segs if s.vertical]
        out = []
        for h in hs:
            hx0, hx1 = sorted((h.p0[0], h.p1[0]))
            y = h.p0[1]
            for v in vs:
                x = v.p0[0]
                vy0, vy1 = sorted((v.p0[1], v.p1[1]))
                if hx0 < x < hx1 and vy0 < y < vy1:
                    p = (x, y)
                    if p in self.vertical_over:
                        out.append(LayoutCrossing(p, v, h))
                    else:
                        out.append(LayoutCrossing(p, h, v))
        return out


# ---------------------------------------------------------------- stage 1

def _columns(t) -> dict[int, int]:
    """Assign every interval a column consistent with the row order at all times."""
    succ: dict[int, set[int]] = {iv.id: set() for iv in t.intervals}
    indeg = {iv.id: 0 for iv in t.intervals}
    for row in t.rows:
        for a, b in zip(row, row[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    heap = [i for i, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    col: dict[int, int] = {}
    while heap:
        i = heapq.heappop(heap)
        col[i] = len(col)
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(col) != len(indeg):
        raise LayoutError("row orders are cyclic")
    return col


def rectilinear_layout(S: SlicedDiagram) -> RectLayout:
    """Draw the diagram with one column per strand interval and one row per jog.

    Crossings are drawn with the strand entering on the left as the horizontal
    jog when it moves right past the other strand, so a designated over-strand
    may end up vertical; ``normalize_crossings`` removes those.
    """
    t = simulate(S)
    col = {i: F(c) for i, c in _columns(t).items()}
    y = [F(0)]

    def row() -> Fraction:
        y[0] -= 1
        return y[0]

    top_y: dict[int, Fraction] = {}
    bot_y: dict[int, Fraction] = {}
    frag: dict = {}        # interval end -> polyline leaving that end (toward partner)
    vfrag: dict = {}       # ("in"|"out", iid) -> polyline between interval end and vertex
    vpos: dict[str, Point] = {}
    vertical_over = set()

    def link(end_a, end_b, pts):
        frag[end_a] = list(pts)
        frag[end_b] = list(reversed(pts))

    for k, ev in enumerate(S.events):
        if isinstance(ev, Max):
            r = row()
            a, b = t.created[k]
            top_y[a] = top_y[b] = r
            link((a, "top"), (b, "top"), [(col[a], r), (col[b], r)])
        elif isinstance(ev, Min):
            r = row()
            a, b = t.consumed[k]
            bot_y[a] = bot_y[b] = r
            link((a, "bot"), (b, "bot"), [(col[a], r), (col[b], r)])
        elif isinstance(ev, Cross):
            a, b = t.consumed[k]
            bl, br = t.created[k]
            A, B = (a, br), (b, bl)          # (top interval, bottom interval) per strand
            over, under = (A, B) if ev.over == "l" else (B, A)
            m = _jog_column(col, over, under)
            flipped = m is None
            if flipped:
                # the over-strand cannot be drawn horizontal here; draw the
                # under-strand horizontal and reroute later
                over, under = under, over
                m = _jog_column(col, over, under)
            y1, y2, y3 = row(), row(), row()
            (ht, hb), (vt, vb) = over, under
            bot_y[vt], top_y[vb] = y1, y3
            link((vt, "bot"), (vb, "top"), [(col[vt], y1), (m, y1), (m, y3), (col[vb], y3)])
            bot_y[ht], top_y[hb] = y2, y2
            link((ht, "bot"), (hb, "top"), [(col[ht], y2), (col[hb], y2)])
            if flipped:
                vertical_over.add((m, y2))
        else:
            ins, outs = t.consumed[k], t.created[k]
            anchor = col[ins[0]] if ins else col[outs[0]]
            xv = anchor + F(1, 4)
            w = F(1, 16 * (len(ins) + len(outs) + 2))
            tin = [xv + (i - F(len(ins) - 1, 2)) * w for i in range(len(ins))]
            tout = [xv + (j - F(len(outs) - 1, 2)) * w for j in range(len(outs))]
            left = [i for i in range(len(ins)) if col[ins[i]] < tin[i]]
            right = [i for i in range(len(ins)) if col[ins[i]] > tin[i]]
            jog = {}
            for i in sorted(left, reverse=True) + sorted(right):
                jog[i] = row()
            ys_in = row() if ins else None
            yv = row()
            ys_out = row() if outs else None
            oleft = [j for j in range(len(outs)) if col[outs[j]] < tout[j]]
            oright = [j for j in range(len(outs)) if col[outs[j]] > tout[j]]
            ojog = {}
            for j in sorted(oleft) + sorted(oright, reverse=True):
                ojog[j] = row()
            vpos[ev.vertex] = (xv, yv)
            for i, iid in enumerate(ins):
                bot_y[iid] = jog[i]
                vfrag[("in", iid)] = [(col[iid], jog[i]), (tin[i], jog[i]), (tin[i], ys_in), (xv, yv)]
            for j, iid in enumerate(outs):
                top_y[iid] = ojog[j]
                vfrag[("out", iid)] = [(xv, yv), (tout[j], ys_out), (tout[j], ojog[j]), (col[iid], ojog[j])]

    paths: dict[str, list] = {}
    closed = set()
    for edge, chain in trace_strands(S).items():
        pts: list = []
        if chain[0].kind == "vertex":
            first_iv = chain[1].ref
            pts.extend(vfrag[("out", first_iv)])
        ivs = [s for s in chain if s.kind == "interval"]
        for n, st in enumerate(ivs):
            iid = st.ref
            c = col[iid]
            top, bot = (c, top_y[iid]), (c, bot_y[iid])
            seg = [top, bot] if st.dir == DOWN else [bot, top]
            pts.extend(seg)
            exit_end = "bot" if st.dir == DOWN else "top"
            if n + 1 < len(ivs) or chain[0].kind != "vertex":
                if (iid, exit_end) in frag:
                    pts.extend(frag[(iid, exit_end)])
            else:
                pts.extend(vfrag[("in", iid)])
        if chain[0].kind != "vertex":
            closed.add(edge)
        paths[edge] = _clean(pts, edge in closed)
    xs = [p[0] for ps in paths.values() for p in ps]
    ys = [p[1] for ps in paths.values() for p in ps]
    dx = -max(xs) - F(1, 2)
    dy = -(max(ys) + min(ys)) / 2 + F(1, 4)

    def sh(p):
        return (p[0] + dx, p[1] + dy)

    paths = {e: tuple(sh(p) for p in ps) for e, ps in paths.items()}
    verts = {v: sh(p) for v, p in vpos.items()}
    L = RectLayout(paths, frozenset(closed), verts, frozenset(sh(p) for p in vertical_over))
    ys = [p[1] for ps in L.paths.values() for p in ps]
    return replace(L, band=(min(ys), max(ys)))


def _jog_column(col, horiz, vert):
    """A column for the vertical strand so it meets the horizontal strand exactly once.

    The horizontal strand runs at the middle row between its two columns; the
    vertical strand jogs to column m on the upper row, descends through the
    middle row and jogs back on the lower row.
    """
    h0, h1 = sorted((col[horiz[0]], col[horiz[1]]))
    v_top, v_bot = col[vert[0]], col[vert[1]]
    for c in range(int(h0), int(h1)):
        m = c + F(1, 2)
        if min(v_top, m) < col[horiz[0]] < max(v_top, m):
            continue
        if min(v_bot, m) < col[horiz[1]] < max(v_bot, m):
            continue
        return m
    return None


def _clean(pts: list, closed: bool) -> list:
    """Drop repeated points and merge collinear runs."""
    out: list = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    if closed and len(out) > 1 and out[-1] == out[0]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        rng = range(n) if closed else range(1, n - 1)
        for i in rng:
            a, b, c = out[i - 1], out[i], out[(i + 1) % n]
            if (a[0] == b[0] == c[0]) or (a[1] == b[1] == c[1]):
                del out[i]
                changed = True
                break
    if closed:
        # start at a corner so the closing segment is explicit
        out.append(out[0])
    return out


# ---------------------------------------------------------------- stage 2

def _min_gap(L: RectLayout) -> Fraction:
    xs = sorted({p[0] for ps in L.paths.values() for p in ps})
    ys = sorted({p[1] for ps in L.paths.values() for p in ps})
    gaps = [b - a for a, b in zip(xs, xs[1:])] + [b - a for a, b in zip(ys, ys[1:])]
    return min(gaps) if gaps else F(1)


def _insert_detour(pts: tuple, point: Point, local: list, vertical: bool) -> tuple:
    """Splice ``local`` (ordered along the segment's geometry) into the segment through point."""
    pts = list(pts)
    ax = 0 if vertical else 1      # the coordinate that is constant along the segment
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if a[ax] == b[ax] == point[ax] and min(a[1 - ax], b[1 - ax]) < point[1 - ax] < max(a[1 - ax], b[1 - ax]):
            forward = b[1] < a[1] if vertical else b[0] > a[0]
            ordered = local if forward else list(reversed(local))
            return tuple(pts[:i + 1] + ordered + pts[i + 1:])
    raise LayoutError(f"no segment through {point}")


def normalize_crossings(L: RectLayout) -> RectLayout:
    """Reroute every vertical-over crossing so that the horizontal passes over.

    The vertical strand steps right over a small bump in the horizontal strand
    (a local detour of size comparable to a fraction of the grid spacing); the
    bump's rising side passes under the vertical strand's new horizontal step.
    The detour is a planar isotopy of a one-crossing tangle, so crossing signs
    and linking numbers are unchanged.
    """
    if not L.vertical_over:
        return L
    base = _min_gap(L) / 8
    paths = dict(L.paths)
    for j, P in enumerate(sorted(L.vertical_over)):
        d = base / F(5) ** j
        cr = [c for c in replace(L, paths=paths, vertical_over=frozenset([P])).crossings() if c.point == P]
        if len(cr) != 1:
            raise LayoutError(f"expected one crossing at {P}")
        h, v = cr[0].under, cr[0].over
        x, y = P
        # horizontal strand, listed by increasing x
        h_local = [(x + d / 2, y), (x + d / 2, y + 3 * d / 2), (x + 3 * d / 2, y + 3 * d / 2), (x + 3 * d / 2, y)]
        # vertical strand, listed by decreasing y
        v_local = [(x, y + d), (x + d, y + d), (x + d, y - d), (x, y - d)]
        paths[h.edge] = _insert_detour(paths[h.edge], P, h_local, False)
        paths[v.edge] = _insert_detour(paths[v.edge], P, v_local, True)
    return replace(L, paths=paths, vertical_over=frozenset())


# ---------------------------------------------------------------- stage 3

def _is_up(s: Segment) -> bool:
    return s.vertical and s.p1[1] > s.p0[1]


def isolate_up_columns(L: RectLayout) -> RectLayout:
    """Move every upward vertical segment onto a private column.

    Each upward segment at column c is shifted into the open gap between c and
    the next x-coordinate used anywhere in the layout, so its full vertical
    line meets no other vertical segment and no vertex fan.
    """
    if L.vertical_over:
        raise LayoutError("normalize crossings first")
    segs = [s for s in L.segments() if _is_up(s)]
    xs = sorted({p[0] for ps in L.paths.values() for p in ps})
    by_col: dict = {}
    for s in segs:
        by_col.setdefault(s.p0[0], []).append(s)
    paths = {e: list(ps) for e, ps in L.paths.items()}
    moved = []
    for c in sorted(by_col):
        nxt = next((x for x in xs if x > c), c + 1)
        group = sorted(by_col[c], key=lambda s: (s.p0[1], natural_key(s.edge), s.index))
        for j, s in enumerate(group, start=1):
            nx = c + (nxt - c) * F(j, 2 * (len(group) + 1))
            pts = paths[s.edge]
            idx = [s.index, s.index + 1]
            if s.edge in L.closed:
                if s.index == 0:
                    idx.append(len(pts) - 1)
                if s.index + 1 == len(pts) - 1:
                    idx.append(0)
            for i in idx:
                pts[i] = (nx, pts[i][1])
            moved.append((nx, s.p0[1], s.edge, s.index))
    for s in L.segments():
        if s.fan and any(min(s.p0[0], s.p1[0]) <= m[0] <= max(s.p0[0], s.p1[0]) for m in moved):
            raise LayoutError("upward column meets a vertex fan")
    moved.sort()
    return replace(L, paths={e: tuple(ps) for e, ps in paths.items()},
                   up_segments=tuple((e, i) for _, _, e, i in moved))


# ---------------------------------------------------------------- stage 4

def wrap_up_segments(L: RectLayout) -> RectLayout:
    """Replace each upward segment by the other three sides of a nested rectangle.

    Rectangle ``R_i`` (``R_1`` outermost) has its left side on the column of
    the i-th upward segment and extends ``n + 1 - i`` units below, above and to
    the right of the diagram.  The new vertical pieces pass under every
    horizontal they meet.
    """
    n = len(L.up_segments)
    if n == 0:
        return replace(L, annular=True)
    allpts = [p for ps in L.paths.values() for p in ps]
    ymin, ymax = min(p[1] for p in allpts), max(p[1] for p in allpts)
    xmax = max(p[0] for p in allpts)
    if xmax >= 0:
        raise LayoutError("diagram must lie left of the origin")
    paths = {e: list(ps) for e, ps in L.paths.items()}
    rects = []
    plan = {}
    for i, (e, idx) in enumerate(L.up_segments, start=1):
        off = n + 1 - i
        pts = paths[e]
        x, yb = pts[idx]
        rect = Rectangle(x, ymin - off, ymax + off, xmax + off, e)
        rects.append(rect)
        plan[(e, idx)] = [(x, rect.bottom), (rect.right, rect.bottom), (rect.right, rect.top), (x, rect.top)]
    # splice from the highest index down so earlier indices stay valid
    for e, idx in sorted(L.up_segments, key=lambda t: (natural_key(t[0]), -t[1])):
        pts = paths[e]
        paths[e] = pts[:idx + 1] + plan[(e, idx)] + pts[idx + 1:]
    return replace(L, paths={e: tuple(ps) for e, ps in paths.items()}, rectangles=tuple(rects),
                   annular=True, band=(ymin, ymax))


# ---------------------------------------------------------------- stage 5

def _in_band(L: RectLayout, y) -> bool:
    return L.band[0] <= y <= L.band[1]


def extract_word(L: RectLayout, name: str = "W") -> GraphBraidWord:
    """Read the annular layout as a word, sweeping counterclockwise from the seam.

    Inside the diagram band the sweep runs top to bottom; events on one
    horizontal segment are ordered along its direction of travel (the tilt).
    A letter's index is one more than the number of strands met strictly
    closer to the origin.
    """
    if not L.annular:
        raise LayoutError("layout is not in annular form")
    segs = L.segments()
    # tilted height of a point: (y, -x * hx) compared lexicographically, where
    # hx is the travel direction of the horizontal through the point (0 if none)
    hdir = {}
    for sg in segs:
        if sg.horizontal:
            hdir[sg.p0] = hdir[sg.p1] = sg.direction[0]

    def height(p, hx=None):
        if hx is None:
            hx = hdir.get(p, 0)
        return (p[1], -p[0] * hx)

    spans = []
    for sg in segs:
        if sg.vertical and sg.p0[0] < 0:
            lo, hi = sorted((sg.p0, sg.p1), key=lambda q: q[1])
            spans.append((sg.p0[0], height(lo), height(hi)))
    events = []
    for c in L.crossings():
        if c.point[0] >= 0 or not _in_band(L, c.point[1]):
            raise LayoutError(f"crossing outside the diagram band at {c.point}")
        h = c.over if c.over.horizontal else c.under
        v = c.under if c.over.horizontal else c.over
        if v.direction[1] >= 0:
            raise LayoutError("ascending vertical segment after wrapping")
        events.append((height(c.point, h.direction[0]), "x", c))
    for vtx, p in L.vertices.items():
        events.append((height(p, 0), "v", (vtx, p)))
    events.sort(key=lambda ev: ev[0], reverse=True)
    if len({ev[0] for ev in events}) != len(events):
        raise LayoutError("degenerate angle collision")

    def closer(p, key) -> int:
        return sum(1 for x, lo, hi in spans if x > p[0] and lo < key < hi)

    letters = []
    for key, kind, data in events:
        if kind == "x":
            letters.append(XLetter(1 + closer(data.point, key), data.sign))
        else:
            vtx, p = data
            ins = sorted(((ps[-2][0], e) for e, ps in L.paths.items()
                          if e not in L.closed and ps[-1] == p), reverse=True)
            outs = sorted(((ps[1][0], e) for e, ps in L.paths.items()
                           if e not in L.closed and ps[0] == p), reverse=True)
            letters.append(VLetter(vtx, 1 + closer(p, key), tuple(e for _, e in ins), tuple(e for _, e in outs)))
    seam = sorted((r.right, r.edge) for r in L.rectangles)
    labels = tuple(e for _, e in seam)
    return GraphBraidWord(len(labels), labels, tuple(letters), name)


def braid(S: SlicedDiagram) -> GraphBraidWord:
    """Braid presentation of a diagram: the four layout stages plus word extraction."""
    if S.graph.isolated_vertices():
        raise ValueError(f"isolated vertex {S.graph.isolated_vertices()[0]}")
    L = annular_layout(S)
    W = extract_word(L, S.name)
    rep = validate_word(W)
    if not rep.ok:
        raise LayoutError(f"extracted word is invalid: {rep}")
    return W


def annular_layout(S: SlicedDiagram) -> RectLayout:
    return wrap_up_segments(isolate_up_columns(normalize_crossings(rectilinear_layout(S))))


# ---------------------------------------------------------------- checks

def layout_linking_number(L: RectLayout, cycle1: Iterable[str], cycle2: Iterable[str]) -> int:
    c1, c2 = set(cycle1), set(cycle2)
    total = 0
    for c in L.crossings():
        a, b = c.over.edge, c.under.edge
        if (a in c1 and b in c2) or (a in c2 and b in c1):
            total += c.sign
    if total % 2:
        raise LayoutError("odd crossing sum between closed curves")
    return total // 2


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    violations: tuple = ()


def monotonicity_certificate(L: RectLayout) -> MonotonicityReport:
    """Check, segment by segment, that the angular coordinate increases along travel.

    Outside the diagram band the angle is the polar angle about the origin,
    increasing iff ``p0 x p1 > 0``.  Inside the band the sweep leaves are
    horizontal, so segments must descend; horizontal segments there are
    admissible through the tilt.
    """
    bad = []
    for s in L.segments():
        (x0, y0), (x1, y1) = s.p0, s.p1
        inside = x0 < 0 and x1 < 0 and _in_band(L, y0) and _in_band(L, y1)
        if inside:
            if s.horizontal:
                continue
            if not y1 < y0:
                bad.append((s.edge, s.index, "does not descend inside the band"))
        elif not x0 * y1 - y0 * x1 > 0:
            bad.append((s.edge, s.index, "polar angle does not increase"))
    if not L.annular:
        bad.append((None, None, "layout is not annular"))
    return MonotonicityReport(not bad, tuple(bad))


def disjoint_cycle_pairs(S: SlicedDiagram, limit: int = 200) -> list[tuple[list, list]]:
    from .graph import find_cycles
    cyc = find_cycles(S.graph, limit).oriented_cycles
    pairs = []
    for i in range(len(cyc)):
        for j in range(i + 1, len(cyc)):
            a, b = cyc[i], cyc[j]
            if set(a) & set(b) or cycle_vertices(S.graph, a) & cycle_vertices(S.graph, b):
                continue
            if is_cycle(S.graph, a) and is_cycle(S.graph, b):
                pairs.append((a, b))
    return pairs


__all__ = [
    "LayoutCrossing",
    "LayoutError",
    "RectLayout",
    "Rectangle",
    "Segment",
    "annular_layout",
    "braid",
    "closure",
    "disjoint_cycle_pairs",
    "extract_word",
    "isolate_up_columns",
    "layout_linking_number",
    "monotonicity_certificate",
    "normalize_crossings",
    "rectilinear_layout",
    "wrap_up_segments",
]
