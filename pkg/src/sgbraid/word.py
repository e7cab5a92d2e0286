"""Generalized closed-braid words with vertex letters.

A word lives on an annulus cut open at the seam.  ``labels`` gives the edge
carried by each strand at the seam, indexed from the core outward.  Crossing
letters ``x i s`` exchange strands ``i`` and ``i+1`` with crossing sign ``s``;
vertex letters replace ``len(ins)`` adjacent strands starting at ``i`` by
``len(outs)`` new ones.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from .graph import OrientedGraph, sorted_ids
from .sliced import Cross, Max, Min, SlicedDiagram, Vtx, validate_sliced


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class XLetter:
    index: int
    sign: int

    def __str__(self):
        return f"x {self.index} {'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class VLetter:
    vertex: str
    index: int
    ins: tuple[str, ...]
    outs: tuple[str, ...]

    def __str__(self):
        return f"v {self.vertex} {self.index} in=({','.join(self.ins)}) out=({','.join(self.outs)})"


Letter = Union[XLetter, VLetter]


@dataclass(frozen=True)
class GraphBraidWord:
    strands0: int
    labels: tuple[str, ...]
    letters: tuple
    name: str = "W"

    def counts(self) -> list[int]:
        """Strand count on the seam gap and after every letter."""
        out = [self.strands0]
        for L in self.letters:
            if isinstance(L, VLetter):
                out.append(out[-1] - len(L.ins) + len(L.outs))
            else:
                out.append(out[-1])
        return out

    def gap_labels(self) -> list[tuple[str, ...]]:
        """Edge labels of the strands in every angular gap (assumes a valid word)."""
        row = list(self.labels)
        out = [tuple(row)]
        for L in self.letters:
            i = L.index - 1
            if isinstance(L, XLetter):
                row[i], row[i + 1] = row[i + 1], row[i]
            else:
                row[i:i + len(L.ins)] = L.outs
            out.append(tuple(row))
        return out

    def graph(self) -> OrientedGraph:
        tails, heads, verts = {}, {}, []
        for L in self.letters:
            if isinstance(L, VLetter):
                verts.append(L.vertex)
                for e in L.ins:
                    heads[e] = L.vertex
                for e in L.outs:
                    tails[e] = L.vertex
        edges = [(e, tails[e], heads[e]) for e in sorted_ids(set(tails) | set(heads))]
        circles = set(self.labels) - set(tails) - set(heads)
        return OrientedGraph.build(verts, edges, circles, self.name)


@dataclass(frozen=True)
class WordReport:
    ok: bool
    letter: int | None = None
    message: str = ""

    def __str__(self):
        if self.ok:
            return "valid"
        where = f"letter {self.letter}: " if self.letter is not None else ""
        return where + self.message


def _check(W: GraphBraidWord) -> None:
    if W.strands0 != len(W.labels):
        raise WordError("seam label count differs from strands0")
    row = list(W.labels)
    tails: dict[str, str] = {}
    heads: dict[str, str] = {}
    seen_v: set[str] = set()
    for n, L in enumerate(W.letters, start=1):
        i = L.index - 1
        if isinstance(L, XLetter):
            if not 0 <= i < len(row) - 1:
                raise WordError(f"letter {n}: index {L.index} out of range for {len(row)} strands")
            if L.sign not in (1, -1):
                raise WordError(f"letter {n}: bad sign")
            row[i], row[i + 1] = row[i + 1], row[i]
        else:
            k = len(L.ins)
            if L.vertex in seen_v:
                raise WordError(f"letter {n}: vertex {L.vertex} repeated")
            seen_v.add(L.vertex)
            if not 0 <= i <= len(row) - k or (k == 0 and i > len(row)):
                raise WordError(f"letter {n}: index {L.index} out of range for {len(row)} strands")
            if tuple(row[i:i + k]) != L.ins:
                raise WordError(f"letter {n}: edge-label discontinuity, strands carry "
                                f"{row[i:i + k]} but vertex consumes {list(L.ins)}")
            for e in L.ins:
                if e in heads:
                    raise WordError(f"letter {n}: edge {e} has two heads")
                heads[e] = L.vertex
            for e in L.outs:
                if e in tails:
                    raise WordError(f"letter {n}: edge {e} has two tails")
                tails[e] = L.vertex
            row[i:i + k] = L.outs
    if len(row) != W.strands0:
        raise WordError(f"count mismatch at seam: {len(row)} strands return, {W.strands0} expected")
    if tuple(row) != W.labels:
        raise WordError("edge-label discontinuity at seam")
    if set(tails) != set(heads):
        raise WordError("edge without both endpoints")


def validate_word(W: GraphBraidWord) -> WordReport:
    try:
        _check(W)
    except WordError as exc:
        msg = str(exc)
        m = re.match(r"letter (\d+): (.*)", msg)
        if m:
            return WordReport(False, int(m[1]), m[2])
        return WordReport(False, None, msg)
    rep = validate_sliced(_closure_unchecked(W))
    if not rep.ok:
        return WordReport(False, None, f"closure invalid: {rep}")
    return WordReport(True)


def b_tilde(W: GraphBraidWord) -> int:
    """Maximum strand count over the open angular gaps."""
    rep = validate_word(W)
    if not rep.ok:
        raise WordError(str(rep))
    return max(W.counts())


def _closure_unchecked(W: GraphBraidWord) -> SlicedDiagram:
    n = W.strands0
    events: list = [Max(i, W.labels[i - 1], "left") for i in range(1, n + 1)]
    for L in W.letters:
        if isinstance(L, XLetter):
            events.append(Cross(L.index, "l" if L.sign > 0 else "r"))
        else:
            events.append(Vtx(L.vertex, L.index, L.ins, L.outs))
    events += [Min(i, W.labels[i - 1]) for i in range(n, 0, -1)]
    return SlicedDiagram(W.graph(), tuple(events), W.name + "_closure")


def closure(W: GraphBraidWord) -> SlicedDiagram:
    """Draw the word as a descending tangle closed by nested maxima and minima."""
    _check(W)
    return _closure_unchecked(W)


# ---------------------------------------------------------------- .gbw / JSON

_V_RE = re.compile(r"^v\s+(\w+)\s+(\d+)\s+in=\(([\w,\s]*)\)\s+out=\(([\w,\s]*)\)$")
_X_RE = re.compile(r"^x\s+(\d+)\s+([+-])$")


def _ids(s: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in s.split(",") if x.strip())


def parse_word(text: str) -> GraphBraidWord:
    name, n, labels, letters = "W", None, None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "braidword" and len(toks) == 2:
            name = toks[1]
        elif toks[0] == "strands0" and len(toks) == 2 and toks[1].isdigit():
            n = int(toks[1])
        elif toks[0] == "labels":
            labels = tuple(toks[1:])
        elif (m := _X_RE.match(line)):
            letters.append(XLetter(int(m[1]), 1 if m[2] == "+" else -1))
        elif (m := _V_RE.match(line)):
            letters.append(VLetter(m[1], int(m[2]), _ids(m[3]), _ids(m[4])))
        else:
            raise WordError(f"line {lineno}: syntax error: {line!r}")
    if n is None:
        raise WordError("missing strands0 line")
    if labels is None:
        raise WordError("missing labels line")
    return GraphBraidWord(n, labels, tuple(letters), name)


def serialize_word(W: GraphBraidWord) -> str:
    lines = [f"braidword {W.name}", f"strands0 {W.strands0}", "labels " + " ".join(W.labels)]
    lines += [str(L) for L in W.letters]
    return "\n".join(lines) + "\n"


def word_to_json(W: GraphBraidWord) -> dict:
    letters = []
    for L in W.letters:
        if isinstance(L, XLetter):
            letters.append({"type": "x", "index": L.index, "sign": "+" if L.sign > 0 else "-"})
        else:
            letters.append({"type": "v", "vertex": L.vertex, "index": L.index,
                            "in": list(L.ins), "out": list(L.outs)})
    return {"braidword": W.name, "strands0": W.strands0, "labels": list(W.labels), "letters": letters}


def word_from_json(data: dict | str) -> GraphBraidWord:
    if isinstance(data, str):
        data = json.loads(data)
    letters = []
    for L in data["letters"]:
        if L["type"] == "x":
            letters.append(XLetter(int(L["index"]), 1 if L["sign"] == "+" else -1))
        else:
            letters.append(VLetter(L["vertex"], int(L["index"]), tuple(L["in"]), tuple(L["out"])))
    return GraphBraidWord(int(data["strands0"]), tuple(data["labels"]), tuple(letters),
                          data.get("braidword", "W"))
