"""Cartesian, intermediate and vertex-removing synchronised products."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from .errors import EmptyList, GraphError
from .graph import Arc, Graph, Label, Vertex


def pair_id(left: str, right: str) -> str:
    return f"({left},{right})"


@dataclass(frozen=True)
class ProductVertex:
    left: str
    right: str

    @property
    def id(self) -> str:
        return pair_id(self.left, self.right)


def _pair_vertices(G: Graph, H: Graph) -> dict[str, Vertex]:
    vmap = {}
    for v in G.vertex_ids:
        for w in H.vertex_ids:
            pid = pair_id(v, w)
            if pid in vmap:
                raise GraphError(f"product vertex id {pid!r} is ambiguous; rename operand vertices")
            vmap[pid] = Vertex(pid, (v, w))
    return vmap


def cartesian_product(G: Graph, H: Graph) -> Graph:
    vmap = _pair_vertices(G, H)
    arcs = [Arc(pair_id(a.tail, w), pair_id(a.head, w), a.label) for a in G.arcs for w in H.vertex_ids]
    arcs += [Arc(pair_id(v, b.tail), pair_id(v, b.head), b.label) for v in G.vertex_ids for b in H.arcs]
    return Graph._trusted(vmap, arcs)


@dataclass(frozen=True)
class SyncClassification:
    sync_labels: frozenset[Label]
    async_left: tuple[Arc, ...]
    async_right: tuple[Arc, ...]
    sync_pairs: tuple[tuple[Arc, Arc], ...]

    def pairs_with_label(self, label: Label) -> int:
        return sum(1 for a, _ in self.sync_pairs if a.label == label)


def classify_sync(G: Graph, H: Graph) -> SyncClassification:
    """Split arcs into asynchronous ones and synchronising pairs.

    Labels are compared as full ``(action, weight)`` pairs.
    """
    shared = G.labels & H.labels
    by_label: dict[Label, list[Arc]] = {}
    for b in H.arcs:
        if b.label in shared:
            by_label.setdefault(b.label, []).append(b)
    pairs = tuple((a, b) for a in G.arcs if a.label in shared for b in by_label[a.label])
    return SyncClassification(
        frozenset(shared),
        tuple(a for a in G.arcs if a.label not in shared),
        tuple(b for b in H.arcs if b.label not in shared),
        pairs,
    )


def intermediate_product(G: Graph, H: Graph) -> Graph:
    return _intermediate(G, H, classify_sync(G, H))


def _intermediate(G, H, cls: SyncClassification) -> Graph:
    vmap = _pair_vertices(G, H)
    arcs = [Arc(pair_id(a.tail, w), pair_id(a.head, w), a.label) for a in cls.async_left for w in H.vertex_ids]
    arcs += [Arc(pair_id(v, b.tail), pair_id(v, b.head), b.label) for v in G.vertex_ids for b in cls.async_right]
    arcs += [Arc(pair_id(a.tail, b.tail), pair_id(a.head, b.head), a.label) for a, b in cls.sync_pairs]
    return Graph._trusted(vmap, arcs)


def vrsp(G: Graph, H: Graph, *, order: str = "fifo") -> Graph:
    """Vertex-removing synchronised product.

    Starts from the intermediate product and repeatedly removes vertices
    that have lost all their in-arcs, or all their out-arcs, although
    they have some in the Cartesian product.  ``order`` picks the
    removal order ("fifo" or "lifo"); the result does not depend on it.
    """
    inter = intermediate_product(G, H)
    box_in = {}
    box_out = {}
    for vx in inter.vertices:
        v, w = vx.origin
        box_in[vx.id] = len(G.in_arcs(v)) + len(H.in_arcs(w))
        box_out[vx.id] = len(G.out_arcs(v)) + len(H.out_arcs(w))
    cur_in = {v: len(inter.in_arcs(v)) for v in inter.vertex_ids}
    cur_out = {v: len(inter.out_arcs(v)) for v in inter.vertex_ids}

    def doomed(v):
        return (cur_in[v] == 0 and box_in[v] > 0) or (cur_out[v] == 0 and box_out[v] > 0)

    work = deque(v for v in inter.vertex_ids if doomed(v))
    pop = work.popleft if order == "fifo" else work.pop
    removed: set[str] = set()
    while work:
        v = pop()
        if v in removed:
            continue
        removed.add(v)
        for a in inter.out_arcs(v):
            if a.head not in removed:
                cur_in[a.head] -= 1
                if doomed(a.head):
                    work.append(a.head)
        for a in inter.in_arcs(v):
            if a.tail not in removed:
                cur_out[a.tail] -= 1
                if doomed(a.tail):
                    work.append(a.tail)
    keep = {vx.id: vx for vx in inter.vertices if vx.id not in removed}
    arcs = [a for a in inter.arcs if a.tail in keep and a.head in keep]
    return Graph._trusted(keep, arcs)


def vrsp_fold(graphs: Sequence[Graph]) -> Graph:
    """Left-associated VRSP of a nonempty list (the product is not associative)."""
    graphs = list(graphs)
    if not graphs:
        raise EmptyList("vrsp_fold needs at least one graph")
    return reduce(vrsp, graphs)


def cartesian_fold(graphs: Sequence[Graph]) -> Graph:
    graphs = list(graphs)
    if not graphs:
        raise EmptyList("cartesian_fold needs at least one graph")
    return reduce(cartesian_product, graphs)
