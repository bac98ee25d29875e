"""Isomorphism of labelled acyclic multigraphs.

Vertices are first split into colour classes by iterated refinement
(level, degrees and incident labels, then the colours of neighbours),
computed jointly on both graphs so that classes are comparable.  A
backtracking search then maps vertices class by class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graph import Graph, level_assignment, natural_key


@dataclass(frozen=True)
class IsoWitness:
    """Vertex bijection ``G -> H``; the arc bijection is implied."""

    vertex_map: Mapping[str, str]

    def inverse(self) -> "IsoWitness":
        return IsoWitness({w: v for v, w in self.vertex_map.items()})

    def __getitem__(self, vid):
        return self.vertex_map[vid]

    def validates(self, G: Graph, H: Graph) -> bool:
        """Direct check that the map sends ``A(G)`` exactly onto ``A(H)``."""
        phi = self.vertex_map
        if set(phi) != set(G.vertex_ids) or len(G) != len(H):
            return False
        if set(phi.values()) != set(H.vertex_ids):
            return False
        image = {(phi[a.tail], phi[a.head], a.label) for a in G.arcs}
        return image == {(a.tail, a.head, a.label) for a in H.arcs}

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.vertex_map.items(), key=lambda p: natural_key(p[0]))


def _initial(g: Graph):
    lv = level_assignment(g)
    out = {}
    for v in g.vertex_ids:
        ins = tuple(sorted(a.label for a in g.in_arcs(v)))
        outs = tuple(sorted(a.label for a in g.out_arcs(v)))
        out[v] = (lv[v], ins, outs)
    return out


def _refine(G: Graph, H: Graph):
    # joint refinement: signatures are interned in one table for both graphs
    graphs = (G, H)
    cols = [_initial(g) for g in graphs]
    table: dict = {}
    cols = [{v: table.setdefault(s, len(table)) for v, s in c.items()} for c in cols]
    n_classes = len(table)
    while True:
        table = {}
        new = []
        for g, c in zip(graphs, cols):
            nc = {}
            for v in g.vertex_ids:
                sig = (
                    c[v],
                    tuple(sorted((a.label, c[a.head]) for a in g.out_arcs(v))),
                    tuple(sorted((a.label, c[a.tail]) for a in g.in_arcs(v))),
                )
                nc[v] = table.setdefault(sig, len(table))
            new.append(nc)
        cols = new
        if len(table) == n_classes:
            return cols
        n_classes = len(table)


def _adjacency(g: Graph):
    adj = {v: [] for v in g.vertex_ids}
    for a in g.arcs:
        adj[a.tail].append((a.head, 1, a.label))
        adj[a.head].append((a.tail, 0, a.label))
    return adj


def is_isomorphic(G: Graph, H: Graph) -> IsoWitness | None:
    """Return a witness ``G -> H`` or ``None`` when the graphs differ."""
    if len(G) != len(H) or len(G.arcs) != len(H.arcs):
        return None
    if sorted(a.label for a in G.arcs) != sorted(a.label for a in H.arcs):
        return None
    if not len(G):
        return IsoWitness({})
    cg, ch = _refine(G, H)
    classes_g: dict[int, list[str]] = {}
    classes_h: dict[int, list[str]] = {}
    for v, c in cg.items():
        classes_g.setdefault(c, []).append(v)
    for v, c in ch.items():
        classes_h.setdefault(c, []).append(v)
    if {c: len(vs) for c, vs in classes_g.items()} != {c: len(vs) for c, vs in classes_h.items()}:
        return None

    adj_g, adj_h = _adjacency(G), _adjacency(H)
    order = _search_order(G, cg, classes_g, adj_g)
    cands = [sorted(classes_h[cg[v]], key=natural_key) for v in order]

    phi: dict[str, str] = {}
    inv: dict[str, str] = {}
    pos = [0] * len(order)
    depth = 0
    while depth >= 0:
        if depth == len(order):
            return IsoWitness(dict(phi))
        v = order[depth]
        if v in phi:
            del inv[phi.pop(v)]
        placed = False
        options = cands[depth]
        while pos[depth] < len(options):
            w = options[pos[depth]]
            pos[depth] += 1
            if w in inv:
                continue
            if _consistent(v, w, phi, inv, adj_g, adj_h):
                phi[v] = w
                inv[w] = v
                placed = True
                break
        if placed:
            depth += 1
            if depth < len(order):
                pos[depth] = 0
        else:
            depth -= 1
    return None


def _consistent(v, w, phi, inv, adj_g, adj_h) -> bool:
    mine = sorted((phi[u], d, l) for u, d, l in adj_g[v] if u in phi)
    theirs = sorted((x, d, l) for x, d, l in adj_h[w] if x in inv)
    return mine == theirs


def _search_order(G, colour, classes, adj):
    # smallest classes first; then grow along arcs so constraints bite early
    rank = {v: (len(classes[colour[v]]), colour[v], natural_key(v)) for v in G.vertex_ids}
    remaining = set(G.vertex_ids)
    order = []
    frontier: set[str] = set()
    while remaining:
        pool = frontier & remaining or remaining
        v = min(pool, key=rank.__getitem__)
        order.append(v)
        remaining.discard(v)
        frontier.discard(v)
        frontier.update(u for u, _, _ in adj[v] if u in remaining)
    return order
