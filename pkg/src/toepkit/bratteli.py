"""Ordered Bratteli diagrams at finite depth: telescoping, the equal-path-
number property, successor (Vershik) steps on finite paths, and both
directions of the diagram <-> directive-sequence correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .words import Alphabet
from .sadic import DirectiveSequence, Morphism


@dataclass(frozen=True)
class Edge:
    source: int      # vertex index in the level below
    target: int      # vertex index in the level above
    order: int       # position within the target's incoming fiber
    label: Optional[str] = None


class OrderedBratteliDiagram:
    """Finite-depth ordered diagram.

    vertex_levels[0] is the singleton root; edge_levels[i] connects
    vertex_levels[i] to vertex_levels[i+1], with order indices total on
    each incoming fiber."""

    def __init__(self, vertex_levels: Sequence[Sequence[str]],
                 edge_levels: Sequence[Sequence[Edge]]):
        vertex_levels = tuple(tuple(v) for v in vertex_levels)
        edge_levels = tuple(tuple(e) for e in edge_levels)
        if len(vertex_levels) < 2 or len(vertex_levels[0]) != 1:
            raise ValueError("need a singleton root and at least one level")
        if len(edge_levels) != len(vertex_levels) - 1:
            raise ValueError("need one edge level per vertex step")
        for i, edges in enumerate(edge_levels):
            lo, hi = len(vertex_levels[i]), len(vertex_levels[i + 1])
            fibers = {}
            for e in edges:
                if not (0 <= e.source < lo and 0 <= e.target < hi):
                    raise ValueError("edge endpoints out of range at level %d" % (i + 1))
                fibers.setdefault(e.target, []).append(e.order)
            for v in range(hi):
                orders = sorted(fibers.get(v, []))
                if orders != list(range(len(orders))) or not orders:
                    raise ValueError(
                        "incoming fiber of vertex %d at level %d is empty or"
                        " badly ordered" % (v, i + 1))
            sources = {e.source for e in edges}
            if sources != set(range(lo)):
                raise ValueError("some vertex at level %d has no outgoing edge" % i)
        self.vertex_levels = vertex_levels
        self.edge_levels = edge_levels

    @property
    def depth(self) -> int:
        return len(self.edge_levels)

    def fiber(self, level: int, vertex: int) -> list[Edge]:
        """Incoming edges of a vertex at `level` (1-based), in order."""
        edges = [e for e in self.edge_levels[level - 1] if e.target == vertex]
        return sorted(edges, key=lambda e: e.order)

    def fiber_sizes(self, level: int) -> list[int]:
        counts = [0] * len(self.vertex_levels[level])
        for e in self.edge_levels[level - 1]:
            counts[e.target] += 1
        return counts

    def rank_window(self) -> int:
        return min(len(v) for v in self.vertex_levels[1:])


def has_equal_path_numbers(b: OrderedBratteliDiagram, n: int) -> bool:
    """All incoming fibers at level n+1 have the same size."""
    if not 0 <= n < b.depth:
        raise ValueError("no edge level between %d and %d" % (n, n + 1))
    return len(set(b.fiber_sizes(n + 1))) == 1


def telescope(b: OrderedBratteliDiagram, cut_levels: Sequence[int]
              ) -> OrderedBratteliDiagram:
    """Contract along the cut levels; composite edges are the paths, ordered
    lexicographically from the top (the deepest differing edge decides)."""
    cuts = list(cut_levels)
    if len(cuts) < 2 or cuts[0] != 0 or any(a >= b_ for a, b_ in zip(cuts, cuts[1:])):
        raise ValueError("cut levels must be strictly increasing and start at 0")
    if cuts[-1] > b.depth:
        raise ValueError("cut level %d beyond depth %d" % (cuts[-1], b.depth))
    new_vertices = [b.vertex_levels[c] for c in cuts]
    new_edges = []
    for lo, hi in zip(cuts, cuts[1:]):
        # paths from level lo to level hi: (source, target, orders, label)
        paths = [(e.source, e.target, (e.order,), e.label)
                 for e in b.edge_levels[lo]]
        for lev in range(lo + 1, hi):
            grown = []
            for e in b.edge_levels[lev]:
                for (s, t, orders, label) in paths:
                    if t == e.source:
                        grown.append((s, e.target, orders + (e.order,), label))
            paths = grown
        per_target: dict[int, list] = {}
        for p in paths:
            per_target.setdefault(p[1], []).append(p)
        level_edges = []
        for t, plist in per_target.items():
            plist.sort(key=lambda p: tuple(reversed(p[2])))
            for rank, (s, _, _, label) in enumerate(plist):
                keep = label if hi == cuts[1] and lo == 0 and hi == 1 else None
                level_edges.append(Edge(s, t, rank, keep))
        new_edges.append(tuple(level_edges))
    return OrderedBratteliDiagram(new_vertices, new_edges)


def _extreme_chains_merge(b: OrderedBratteliDiagram, maximal: bool) -> bool:
    """Walking the fiber-maximal (or -minimal) edges down from every top
    vertex reaches a single level-1 vertex: the window evidence that the
    extreme infinite path is unique."""
    vs = set(range(len(b.vertex_levels[-1])))
    for level in range(b.depth, 1, -1):
        vs = {b.fiber(level, v)[-1 if maximal else 0].source for v in vs}
    return len(vs) == 1


def properly_ordered_window(b: OrderedBratteliDiagram) -> bool:
    """The all-maximal chains from every top vertex merge within the window,
    and likewise the all-minimal chains."""
    return (_extreme_chains_merge(b, maximal=True)
            and _extreme_chains_merge(b, maximal=False))


def fully_connected_window(b: OrderedBratteliDiagram) -> bool:
    """Every level-1 vertex reaches every top vertex (simplicity check at
    this window)."""
    reach = {v: {v} for v in range(len(b.vertex_levels[1]))}
    for level in range(2, b.depth + 1):
        nxt = {v: set() for v in range(len(b.vertex_levels[level]))}
        for e in b.edge_levels[level - 1]:
            nxt[e.target].update(reach[e.source])
        reach = nxt
    want = set(range(len(b.vertex_levels[1])))
    return all(r == want for r in reach.values())


def resolve_path(b: OrderedBratteliDiagram, top_vertex: int,
                 orders: Sequence[int]) -> list[Edge]:
    """Edges of the path pinned by its top vertex and, per level, the order
    index within the incoming fiber (walking downward)."""
    if len(orders) != b.depth:
        raise ValueError("need one order index per level")
    edges: list[Edge] = [None] * b.depth  # type: ignore[list-item]
    v = top_vertex
    for level in range(b.depth, 0, -1):
        fiber = b.fiber(level, v)
        order = orders[level - 1]
        if not 0 <= order < len(fiber):
            raise ValueError("order index %d out of range at level %d"
                             % (order, level))
        edges[level - 1] = fiber[order]
        v = fiber[order].source
    return edges


def successor_path(b: OrderedBratteliDiagram, top_vertex: int,
                   orders: Sequence[int]) -> Optional[list[int]]:
    """Successor in the lexicographic-from-the-top order: bump the lowest
    non-maximal edge and refill everything below with the minimal path into
    its source.  None when the path is already maximal everywhere."""
    edges = resolve_path(b, top_vertex, orders)
    for k in range(b.depth):
        fiber = b.fiber(k + 1, edges[k].target)
        if edges[k].order + 1 < len(fiber):
            new_edge = fiber[edges[k].order + 1]
            out = list(orders)
            out[k] = new_edge.order
            src = new_edge.source
            for j in range(k - 1, -1, -1):
                out[j] = 0  # minimal edge into src
                src = b.fiber(j + 1, src)[0].source
            return out
    return None


# --------------------------------------------------------------------------
# directive <-> diagram


def from_directive(d: DirectiveSequence, depth: int) -> OrderedBratteliDiagram:
    """Occurrence diagram: level-n vertices are the level-n letters; an edge
    (v, w, k) records that v is the k-th letter of the image of w.  Bottom
    edges fan out one per image position, labelled with the base letter."""
    d.check_depth(depth)
    vertex_levels = [("o",)]
    for n in range(1, depth + 1):
        vertex_levels.append(tuple(d.alphabet(n).names))
    edge_levels = []
    m0 = d.morphism(0)
    bottom = []
    for v, img in enumerate(m0.images):
        for k in range(len(img)):
            bottom.append(Edge(0, v, k, m0.target.names[img[k]]))
    edge_levels.append(tuple(bottom))
    for n in range(1, depth):
        m = d.morphism(n)
        level = []
        for w, img in enumerate(m.images):
            for k, v in enumerate(img.data):
                level.append(Edge(v, w, k))
        edge_levels.append(tuple(level))
    return OrderedBratteliDiagram(vertex_levels, edge_levels)


def read_directive(b: OrderedBratteliDiagram) -> DirectiveSequence:
    """The tower read off the diagram: the image of a vertex is the ordered
    list of its fiber's sources; the bottom alphabet comes from edge labels
    when present (edge identifiers otherwise)."""
    bottom_edges = b.edge_levels[0]
    if all(e.label is not None for e in bottom_edges):
        a0 = Alphabet(sorted({e.label for e in bottom_edges}))

        def bottom_letter(e):
            return a0.index(e.label)
    else:
        a0 = Alphabet(["e%d" % i for i in range(len(bottom_edges))])
        ids = {e: i for i, e in enumerate(bottom_edges)}

        def bottom_letter(e):
            return ids[e]

    a1 = Alphabet(b.vertex_levels[1])
    images0 = []
    for v in range(len(b.vertex_levels[1])):
        images0.append(a0.word([bottom_letter(e) for e in b.fiber(1, v)]))
    levels = [Morphism(a1, a0, tuple(images0))]
    for n in range(1, b.depth):
        src = Alphabet(b.vertex_levels[n + 1])
        tgt = Alphabet(b.vertex_levels[n])
        images = []
        for v in range(len(b.vertex_levels[n + 1])):
            images.append(tgt.word([e.source for e in b.fiber(n + 1, v)]))
        levels.append(Morphism(src, tgt, tuple(images)))
    return DirectiveSequence(levels)


# --------------------------------------------------------------------------
# text format


def serialize_diagram(b: OrderedBratteliDiagram) -> str:
    lines = []
    for n, verts in enumerate(b.vertex_levels):
        lines.append("vertices %d: %s" % (n, " ".join(verts)))
    for n, edges in enumerate(b.edge_levels, start=1):
        lo, hi = b.vertex_levels[n - 1], b.vertex_levels[n]
        for e in sorted(edges, key=lambda e: (e.target, e.order)):
            lines.append("edge %d: %s -> %s @%d"
                         % (n, lo[e.source], hi[e.target], e.order))
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> OrderedBratteliDiagram:
    vertices: dict[int, list[str]] = {}
    raw_edges: dict[int, list[tuple[str, str, int]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, rest = line.split(":", 1)
            fields = head.split()
            if fields[0] == "vertices":
                vertices[int(fields[1])] = rest.split()
            elif fields[0] == "edge":
                level = int(fields[1])
                left, right = rest.split("->")
                tgt, order = right.rsplit("@", 1)
                raw_edges.setdefault(level, []).append(
                    (left.strip(), tgt.strip(), int(order)))
            else:
                raise ValueError("unknown directive %r" % fields[0])
        except (IndexError, ValueError) as exc:
            raise ValueError("line %d: %s" % (lineno, exc)) from None
    if not vertices:
        raise ValueError("no vertex lines")
    depth = max(vertices)
    levels = [vertices.get(n) for n in range(depth + 1)]
    if any(v is None for v in levels):
        raise ValueError("missing vertex levels")
    edge_levels = []
    for n in range(1, depth + 1):
        lo = {name: i for i, name in enumerate(levels[n - 1])}
        hi = {name: i for i, name in enumerate(levels[n])}
        level = []
        for s, t, order in raw_edges.get(n, []):
            if s not in lo or t not in hi:
                raise ValueError("unknown vertex in edge at level %d" % n)
            level.append(Edge(lo[s], hi[t], order))
        edge_levels.append(tuple(level))
    return OrderedBratteliDiagram(levels, edge_levels)
