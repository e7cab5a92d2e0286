"""The ``sgtool`` command line.

Every subcommand reads one input (a path, or ``-``/nothing for stdin), calls
the library and prints a text or JSON report.  Exit status is 0 on success,
1 when the input is malformed or fails validation, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .graph import (
    GraphError,
    OrientedGraph,
    degree_profile,
    euler_characteristic,
    is_circulating,
    natural_key,
    parse_graph,
)
from .layout import LayoutError, annular_layout, braid
from .render import layout_svg, sliced_svg, write_svg
from .search import bounds, minimize_with_hooks, parse_oracle
from .sliced import (
    InvalidDiagram,
    SlicedDiagram,
    SlicedError,
    parse_sliced,
    serialize_sliced,
    validate_sliced,
)
from .smoothing import cycle_reduction, reduction_inequality_check, smoothing_report
from .word import (
    GraphBraidWord,
    WordError,
    b_tilde,
    closure,
    parse_word,
    serialize_word,
    validate_word,
    word_to_json,
)

SUBCOMMANDS = ("validate", "graph-info", "smooth", "reduce", "braid", "btilde", "closure",
               "minimize-s", "bounds", "render")


class Failure(Exception):
    """Input problem: exit status 1."""


class Usage(Exception):
    """Bad invocation: exit status 2."""


# ---------------------------------------------------------------- input / output

def _read(path: str) -> tuple[str, str | None]:
    if path in (None, "-"):
        return sys.stdin.read(), None
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), os.path.dirname(os.path.abspath(path))
    except OSError as exc:
        raise Usage(f"cannot read {path}: {exc.strerror}") from None


def _kind(path: str | None, text: str) -> str:
    ext = os.path.splitext(path or "")[1]
    if ext in (".sgg", ".sgs", ".gbw"):
        return ext[1:]
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            head = line.split()[0]
            return {"graph": "sgg", "sliced": "sgs", "braidword": "gbw"}.get(head, "unknown")
    return "unknown"


def _load(path: str | None):
    """Parse the input into a graph, sliced diagram or word, by extension or first keyword."""
    text, base = _read(path)
    kind = _kind(path, text)
    try:
        if kind == "sgg":
            return parse_graph(text)
        if kind == "sgs":
            return parse_sliced(text, base)
        if kind == "gbw":
            return parse_word(text)
    except (GraphError, SlicedError, WordError) as exc:
        raise Failure(f"{path or '<stdin>'}: {exc}") from None
    raise Failure(f"{path or '<stdin>'}: cannot tell the file format")


def _diagram(obj, need_valid: bool = True) -> SlicedDiagram:
    if isinstance(obj, GraphBraidWord):
        rep = validate_word(obj)
        if not rep.ok:
            raise Failure(f"invalid word: {rep}")
        return closure(obj)
    if not isinstance(obj, SlicedDiagram):
        raise Usage("this subcommand needs a sliced diagram (.sgs) or a word (.gbw)")
    if need_valid:
        rep = validate_sliced(obj)
        if not rep.ok:
            raise Failure(f"invalid diagram: {rep}")
    return obj


def _word(obj) -> GraphBraidWord:
    if not isinstance(obj, GraphBraidWord):
        raise Usage("this subcommand needs a braid word (.gbw)")
    rep = validate_word(obj)
    if not rep.ok:
        raise Failure(f"invalid word: {rep}")
    return obj


def _graph_of(obj) -> OrientedGraph:
    if isinstance(obj, OrientedGraph):
        return obj
    if isinstance(obj, SlicedDiagram):
        return obj.graph
    return _word(obj).graph()


def _guard(out: str | None, args) -> None:
    if out and args.input not in (None, "-") and not args.force:
        if os.path.exists(out) and os.path.samefile(out, args.input):
            raise Usage(f"refusing to overwrite the input {out} without --force")


def _emit(text: str, args) -> None:
    """Write a produced file to -o, or to stdout."""
    if args.output:
        _guard(args.output, args)
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(data: dict, args, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print("\n".join(lines))


def _svg(text: str, args) -> None:
    if args.svg:
        _guard(args.svg, args)
        write_svg(text, args.svg)


def _cycle(args) -> list[str]:
    if not args.cycle:
        raise Usage("--cycle e1,e2,... is required")
    return [x.strip() for x in args.cycle.split(",") if x.strip()]


# ---------------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    obj = _load(args.input)
    if isinstance(obj, OrientedGraph):
        data, ok = {"ok": True, "kind": "graph"}, True
    elif isinstance(obj, SlicedDiagram):
        rep = validate_sliced(obj)
        data, ok = dict(rep.as_dict(), kind="sliced"), rep.ok
    else:
        rep = validate_word(obj)
        data = {"ok": rep.ok, "kind": "word", "letter": rep.letter, "message": rep.message}
        ok = rep.ok
    if ok and isinstance(obj, SlicedDiagram):
        _svg(sliced_svg(obj), args)
    if args.json:
        print(json.dumps(data, sort_keys=True))
    elif ok:
        print("valid")
    if not ok:
        print(f"invalid: {rep}", file=sys.stderr)
        return 1
    return 0


def graph_info(g: OrientedGraph) -> dict:
    prof = degree_profile(g)
    verts = sorted(g.vertices, key=natural_key)
    return {
        "vertices": verts,
        "edges": [[e.id, e.tail, e.head] for e in g.edges],
        "circles": sorted(g.circles, key=natural_key),
        "chi": euler_characteristic(g),
        "circulating": is_circulating(g),
        "indeg": {v: prof.indeg[v] for v in verts},
        "outdeg": {v: prof.outdeg[v] for v in verts},
        "sources": prof.sources,
        "sinks": prof.sinks,
    }


def cmd_graph_info(args) -> int:
    info = graph_info(_graph_of(_load(args.input)))
    lines = ["vertices " + " ".join(info["vertices"])]
    lines += [f"edge {e} {t} {h}" for e, t, h in info["edges"]]
    lines += [f"circle {c}" for c in info["circles"]]
    lines += [f"chi {info['chi']}", f"circulating {str(info['circulating']).lower()}",
              "sources " + " ".join(info["sources"]), "sinks " + " ".join(info["sinks"])]
    _report(info, args, lines)
    return 0


def cmd_smooth(args) -> int:
    S = _diagram(_load(args.input))
    rep = smoothing_report(S).as_dict()
    _svg(sliced_svg(S), args)
    _report(rep, args, [f"{k} {str(v).lower() if isinstance(v, bool) else v}" for k, v in rep.items()])
    return 0


def cmd_reduce(args) -> int:
    S = _diagram(_load(args.input))
    cyc = _cycle(args)
    R = cycle_reduction(S, cyc)
    if args.json:
        rep = reduction_inequality_check(S, cyc).as_dict()
        if args.output:
            _emit(serialize_sliced(R), args)
        print(json.dumps(rep, sort_keys=True))
    else:
        _emit(serialize_sliced(R), args)
    _svg(sliced_svg(R), args)
    return 0


def cmd_braid(args) -> int:
    S = _diagram(_load(args.input))
    W = braid(S)
    if args.json and not args.output:
        print(json.dumps(word_to_json(W), sort_keys=True))
    else:
        _emit(serialize_word(W), args)
    _svg(layout_svg(annular_layout(S)), args)
    return 0


def cmd_btilde(args) -> int:
    W = _word(_load(args.input))
    n = b_tilde(W)
    _report({"b_tilde": n, "counts": W.counts()}, args, [str(n)])
    return 0


def cmd_closure(args) -> int:
    S = closure(_word(_load(args.input)))
    _emit(serialize_sliced(S), args)
    _svg(sliced_svg(S), args)
    return 0


def cmd_minimize(args) -> int:
    S = _diagram(_load(args.input))
    from .search import smoothing_floor
    res = minimize_with_hooks(S, args.budget, args.depth)
    floor = smoothing_floor(S.graph)
    data = {"mu": res.mu, "floor": floor, "exact": res.mu == floor and not is_circulating(S.graph),
            "visited": res.visited, "exhausted": res.exhausted, "moves": list(res.moves)}
    if args.output:
        _guard(args.output, args)
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize_sliced(res.diagram))
    _svg(sliced_svg(res.diagram), args)
    _report(data, args, [f"mu {res.mu}", f"floor {floor}", f"visited {res.visited}"
                         + (" (budget exhausted)" if res.exhausted else "")]
            + [f"move {m}" for m in res.moves])
    return 0


def cmd_bounds(args) -> int:
    S = _diagram(_load(args.input))
    oracle = [parse_oracle(o) for o in args.oracle or ()]
    rep = bounds(S, args.budget, args.depth, oracle).as_dict()
    lines = [f"{k} {str(v).lower() if isinstance(v, bool) else v}" for k, v in rep.items() if k != "notes"]
    _report(rep, args, lines + [f"note {n}" for n in rep["notes"]])
    return 0


def cmd_render(args) -> int:
    S = _diagram(_load(args.input))
    if not args.output and not args.svg:
        raise Usage("render needs -o <file.svg> and/or --svg <file.svg>")
    if args.output:
        _guard(args.output, args)
        write_svg(sliced_svg(S), args.output)
    _svg(layout_svg(annular_layout(S)), args)
    return 0


HANDLERS = {
    "validate": cmd_validate, "graph-info": cmd_graph_info, "smooth": cmd_smooth,
    "reduce": cmd_reduce, "braid": cmd_braid, "btilde": cmd_btilde, "closure": cmd_closure,
    "minimize-s": cmd_minimize, "bounds": cmd_bounds, "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sgtool", description="Spatial graph diagrams and braid words.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("input", nargs="?", default="-", help="input file, or - for stdin")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--svg", help="also write an SVG drawing to this path")
    p.add_argument("--budget", type=int, default=20000, help="search node budget")
    p.add_argument("--depth", type=int, default=6, help="search depth in moves")
    p.add_argument("--cycle", help="comma-separated edges of a directed cycle")
    p.add_argument("--oracle", action="append", help="cycle=e1,e2:bridge=N (repeatable)")
    p.add_argument("--force", action="store_true", help="allow overwriting the input")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.budget < 0 or args.depth < 0:
        print("sgtool: budget and depth must be non-negative", file=sys.stderr)
        return 2
    try:
        return HANDLERS[args.subcommand](args)
    except Usage as exc:
        print(f"sgtool: {exc}", file=sys.stderr)
        return 2
    except (Failure, InvalidDiagram, LayoutError, GraphError, SlicedError, WordError,
            ValueError, AssertionError) as exc:
        print(f"sgtool: {exc}".splitlines()[0], file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
