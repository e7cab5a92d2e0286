"""SVG drawings of sliced diagrams and rectilinear layouts.

Both renderers draw every strand as a polyline, open a gap in the under
strand at each crossing, and put one arrowhead on every arc.  An arc is an
interval of the trace for sliced diagrams and a whole edge for layouts.
"""

from __future__ import annotations

import io
import math

import matplotlib
from matplotlib.figure import Figure

from .layout import RectLayout, _min_gap
from .sliced import DOWN, Cross, Max, Min, SlicedDiagram, Vtx, simulate

GAP = 0.18        # half-length of an under-strand gap, in grid units
ARROW_AT = 0.6    # relative position of the arrowhead along each arc
LINE = 1.4
VERTEX_SIZE = 5.0
MAX_INCHES = 10.0


def _point_at(pts, frac):
    """Point and unit direction at a fraction of a polyline's length."""
    lens = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
    total = sum(lens)
    if total == 0:
        return pts[0], (0.0, -1.0)
    goal = frac * total
    for (a, b), ln in zip(zip(pts, pts[1:]), lens):
        if ln and goal <= ln:
            t = goal / ln
            d = ((b[0] - a[0]) / ln, (b[1] - a[1]) / ln)
            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), d
        goal -= ln
    a, b = pts[-2], pts[-1]
    ln = math.dist(a, b) or 1.0
    return b, ((b[0] - a[0]) / ln, (b[1] - a[1]) / ln)


def _arrow(ax, pts, unit):
    (x, y), (dx, dy) = _point_at(pts, ARROW_AT)
    h = 0.12 * unit
    ax.annotate("", xy=(x + dx * h, y + dy * h), xytext=(x - dx * h, y - dy * h),
                arrowprops=dict(arrowstyle="-|>", color="black", lw=LINE, mutation_scale=10))


def _bridge(ax, center, direction, half):
    """Repaint the over strand near a crossing so the under strand shows a gap."""
    (x, y), (dx, dy) = center, direction
    n = math.hypot(dx, dy) or 1.0
    dx, dy = dx / n * half, dy / n * half
    xs, ys = [x - dx, x + dx], [y - dy, y + dy]
    ax.plot(xs, ys, color="white", lw=LINE * 5, solid_capstyle="butt", zorder=3)
    ax.plot(xs, ys, color="black", lw=LINE, zorder=4)


def _figure(xs, ys, unit):
    pad = 0.8 * unit
    w = max(xs) - min(xs) + 2 * pad
    h = max(ys) - min(ys) + 2 * pad
    scale = min(0.6 / unit, MAX_INCHES / max(w, h))
    fig = Figure(figsize=(max(2.0, w * scale), max(2.0, h * scale)))
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(min(xs) - pad, max(xs) + pad)
    ax.set_ylim(min(ys) - pad, max(ys) + pad)
    ax.set_aspect("equal")
    ax.axis("off")
    return fig, ax


def _svg(fig) -> str:
    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "sgbraid", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


# ---------------------------------------------------------------- sliced diagrams

def _event_center(ev, k):
    if isinstance(ev, (Max, Min, Cross)):
        return (ev.pos + 0.5, -k - 0.5)
    width = max(len(ev.ins), len(ev.outs), 1)
    return (ev.pos + (width - 1) / 2, -k - 0.5)


def sliced_svg(S: SlicedDiagram) -> str:
    t = simulate(S)
    ev = S.events
    where = [{iid: p for p, iid in enumerate(row, start=1)} for row in t.rows]
    arcs = []
    for iv in t.intervals:
        pts = [_event_center(ev[iv.top], iv.top)]
        pts += [(where[r][iv.id], -r) for r in range(iv.top + 1, iv.bottom + 1)]
        pts.append(_event_center(ev[iv.bottom], iv.bottom))
        arcs.append(pts if iv.dir == DOWN else pts[::-1])
    xs = [p[0] for a in arcs for p in a] or [0.0]
    ys = [p[1] for a in arcs for p in a] or [0.0]
    fig, ax = _figure(xs, ys, 1.0)
    for pts in arcs:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color="black", lw=LINE, zorder=2)
        _arrow(ax, pts, 1.0)
    for k, e in enumerate(ev):
        if isinstance(e, Cross):
            # the over strand runs from the left top point to the right bottom one or back
            d = (1.0, -1.0) if e.over == "l" else (-1.0, -1.0)
            _bridge(ax, _event_center(e, k), d, GAP)
        elif isinstance(e, Vtx):
            x, y = _event_center(e, k)
            ax.plot([x], [y], "o", color="black", ms=VERTEX_SIZE, zorder=5)
            ax.annotate(e.vertex, (x, y), xytext=(6, 4), textcoords="offset points", fontsize=8)
    return _svg(fig)


# ---------------------------------------------------------------- layouts

def layout_svg(L: RectLayout) -> str:
    # arrows and gaps follow the typical strand spacing, not the finest fan offset
    unit = max(float(_min_gap(L)), 0.5)
    paths = {e: [(float(x), float(y)) for x, y in pts] for e, pts in L.paths.items()}
    xs = [p[0] for pts in paths.values() for p in pts] or [0.0]
    ys = [p[1] for pts in paths.values() for p in pts] or [0.0]
    fig, ax = _figure(xs, ys, unit)
    for e in sorted(paths):
        pts = paths[e]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color="black", lw=LINE, zorder=2)
        _arrow(ax, pts, unit)
    for c in L.crossings():
        a, b = c.over.p0, c.over.p1
        _bridge(ax, (float(c.point[0]), float(c.point[1])),
                (float(b[0] - a[0]), float(b[1] - a[1])), GAP * unit)
    for v, (x, y) in sorted(L.vertices.items()):
        ax.plot([float(x)], [float(y)], "o", color="black", ms=VERTEX_SIZE, zorder=5)
        ax.annotate(v, (float(x), float(y)), xytext=(6, 4), textcoords="offset points", fontsize=8)
    return _svg(fig)


def write_svg(text: str, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
