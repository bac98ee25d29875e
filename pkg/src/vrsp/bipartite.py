"""Same-label arc blocks and their bipartite classification."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotBipartite
from .graph import Arc, Graph, Label, arc_induced_subgraph, sort_ids


@dataclass(frozen=True)
class LabelBlock:
    label: Label
    arcs: frozenset[Arc]
    tails: frozenset[str]
    heads: frozenset[str]
    subgraph: Graph

    def __len__(self):
        return len(self.arcs)


def label_blocks(g: Graph) -> list[LabelBlock]:
    """One block per distinct label, sorted by label."""
    groups: dict[Label, list[Arc]] = {}
    for a in g.arcs:
        groups.setdefault(a.label, []).append(a)
    out = []
    for lab in sorted(groups):
        arcs = frozenset(groups[lab])
        out.append(LabelBlock(
            lab,
            arcs,
            frozenset(a.tail for a in arcs),
            frozenset(a.head for a in arcs),
            arc_induced_subgraph(g, arcs),
        ))
    return out


@dataclass(frozen=True)
class BlockClass:
    bipartite: bool
    complete: bool
    semicomplete: bool
    trivial: bool
    all_forward: bool
    all_backward: bool

    def as_dict(self):
        return dict(self.__dict__)


def classify_block(block: LabelBlock, partition=None) -> BlockClass:
    """Classify ``block`` against the partite sets ``(tails, heads)``.

    ``partition`` may name other partite sets ``(V1, V2)`` covering the
    block's ends; the direction flags are then relative to ``V1 -> V2``.
    A block is complete when every pair across the partite sets is joined
    by an arc in one direction, semicomplete when it is complete or has
    no arcs at all between the partite sets.
    """
    if partition is None:
        both = block.tails & block.heads
        if both:
            v = sort_ids(both)[0]
            raise NotBipartite(f"vertex {v!r} is both a tail and a head of label {block.label}", [v])
        V1, V2 = block.tails, block.heads
    else:
        V1, V2 = (frozenset(s) for s in partition)
        ends = block.tails | block.heads
        if V1 & V2 or not ends <= V1 | V2:
            raise NotBipartite("partition must split the block ends into two disjoint sets")
        for a in block.arcs:
            if (a.tail in V1) == (a.head in V1):
                raise NotBipartite(f"arc {a.id} lies inside one partite set", [a])
    pairs = {frozenset((a.tail, a.head)) for a in block.arcs}
    complete = all(frozenset((x, y)) in pairs for x in V1 for y in V2)
    fwd = all(a.tail in V1 for a in block.arcs)
    bwd = all(a.tail in V2 for a in block.arcs)
    return BlockClass(
        bipartite=True,
        complete=complete,
        semicomplete=complete or not block.arcs,
        trivial=len(V1) == 1 and len(V2) == 1,
        all_forward=fwd,
        all_backward=bwd,
    )
